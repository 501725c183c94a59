use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{FleetParams, Money};

pub const SCHEDULE_HEADER: &str = "week,vessel_buys,operator_buys,vessel_discards,operator_discards,\
vessels_destroyed,operators_destroyed,vessels_maint,operators_maint,instructors,trainees,robots_deployed,week_cost";

/// One simulated week. Counts are signed so that hand-edited schedules can
/// carry negative values for the validator to reject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WeekRecord {
    pub week: usize,
    pub vessel_buys: i64,
    pub operator_buys: i64,
    pub vessel_discards: i64,
    pub operator_discards: i64,
    pub vessels_destroyed: i64,
    pub operators_destroyed: i64,
    pub vessels_maint: i64,
    pub operators_maint: i64,
    pub instructors: i64,
    pub trainees: i64,
    pub robots_deployed: i64,
    pub week_cost: Money,
    /// Vessels owned at the end of the week (ledger tally).
    pub vessels_owned: i64,
    /// Operators owned at the end of the week (ledger tally).
    pub operators_owned: i64,
}

impl WeekRecord {
    fn counts(&self) -> [i64; 11] {
        [
            self.vessel_buys,
            self.operator_buys,
            self.vessel_discards,
            self.operator_discards,
            self.vessels_destroyed,
            self.operators_destroyed,
            self.vessels_maint,
            self.operators_maint,
            self.instructors,
            self.trainees,
            self.robots_deployed,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    pub records: Vec<WeekRecord>,
    pub total_cost: Money,
}

impl Schedule {
    pub fn horizon(&self) -> usize {
        self.records.len()
    }

    pub fn vessels_purchased(&self) -> i64 {
        self.records.iter().map(|r| r.vessel_buys).sum()
    }

    pub fn operators_purchased(&self) -> i64 {
        self.records.iter().map(|r| r.operator_buys).sum()
    }

    /// CSV export: one row per week followed by a `total` row of column sums.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.records.len() + 2));
        s.push_str(SCHEDULE_HEADER);
        s.push('\n');
        let mut sums = [0i64; 11];
        for r in &self.records {
            let c = r.counts();
            let _ = write!(s, "{}", r.week);
            for (acc, v) in sums.iter_mut().zip(c) {
                *acc += v;
                let _ = write!(s, ",{v}");
            }
            let _ = writeln!(s, ",{}", r.week_cost);
        }
        s.push_str("total");
        for v in sums {
            let _ = write!(s, ",{v}");
        }
        let _ = writeln!(s, ",{}", self.total_cost);
        s
    }

    /// Reads a schedule CSV. Owned-unit tallies are not part of the file, so
    /// they are rebuilt from the starting fleet and each week's purchases,
    /// discards and losses.
    pub fn from_csv(text: &str, params: &FleetParams) -> Result<Schedule, ScheduleParseError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == SCHEDULE_HEADER => {}
            _ => return Err(ScheduleParseError { line: 1, reason: "missing or wrong header".into() }),
        }
        let mut records = Vec::new();
        let mut total: Option<Money> = None;
        let mut vessels = params.initial_vessels as i64;
        let mut operators = params.initial_operators as i64;
        for (i, l) in lines {
            let line = i + 1;
            if total.is_some() {
                return Err(ScheduleParseError { line, reason: "rows after the total row".into() });
            }
            let cols: Vec<&str> = l.trim().split(',').map(str::trim).collect();
            if cols.len() != 13 {
                return Err(ScheduleParseError { line, reason: format!("expected 13 columns, found {}", cols.len()) });
            }
            let cost: Money = cols[12]
                .parse()
                .map_err(|_| ScheduleParseError { line, reason: format!("bad week_cost `{}`", cols[12]) })?;
            if cols[0] == "total" {
                total = Some(cost);
                continue;
            }
            let mut n = [0i64; 12];
            for (slot, c) in n.iter_mut().zip(&cols[..12]) {
                *slot = c.parse().map_err(|_| ScheduleParseError { line, reason: format!("bad integer `{c}`") })?;
            }
            let mut r = WeekRecord {
                week: usize::try_from(n[0]).map_err(|_| ScheduleParseError { line, reason: "bad week".into() })?,
                vessel_buys: n[1],
                operator_buys: n[2],
                vessel_discards: n[3],
                operator_discards: n[4],
                vessels_destroyed: n[5],
                operators_destroyed: n[6],
                vessels_maint: n[7],
                operators_maint: n[8],
                instructors: n[9],
                trainees: n[10],
                robots_deployed: n[11],
                week_cost: cost,
                ..Default::default()
            };
            vessels += r.vessel_buys - r.vessel_discards - r.vessels_destroyed;
            operators += r.operator_buys - r.operator_discards - r.operators_destroyed;
            r.vessels_owned = vessels;
            r.operators_owned = operators;
            records.push(r);
        }
        let total_cost = total.unwrap_or_else(|| records.iter().map(|r| r.week_cost).sum());
        Ok(Schedule { records, total_cost })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schedule line {line}: {reason}")]
pub struct ScheduleParseError {
    pub line: usize,
    pub reason: String,
}
