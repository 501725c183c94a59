//! Constraint checks over a finished schedule. This works purely from the
//! weekly aggregates and shares no code with the simulator, so agreement
//! between the two is a meaningful cross-check.

use std::fmt;

use crate::domain::{CostParams, DemandSeries, FleetParams};

use super::schedule::{Schedule, WeekRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintId {
    /// Robots deployed equals demand.
    Eq7Usage,
    /// Enough available skilled operators to crew the deployed robots.
    Eq9OperatorUsage,
    /// Trainees equal purchases and instructors equal `ceil(O_B / G)`.
    Eq11Instructors,
    /// Maintenance covers last week's returning units.
    Eq12Maintenance,
    /// Deployed vessels come from commissioned, non-maintenance stock.
    Eq13Commissioning,
    /// Attrition losses and the owned-unit recurrence.
    Eq18AttritionSupply,
    NonNeg,
}

impl ConstraintId {
    pub fn code(self) -> &'static str {
        match self {
            ConstraintId::Eq7Usage => "EQ7_USAGE",
            ConstraintId::Eq9OperatorUsage => "EQ9_OPERATOR_USAGE",
            ConstraintId::Eq11Instructors => "EQ11_INSTRUCTORS",
            ConstraintId::Eq12Maintenance => "EQ12_MAINTENANCE",
            ConstraintId::Eq13Commissioning => "EQ13_COMMISSIONING",
            ConstraintId::Eq18AttritionSupply => "EQ18_ATTRITION_SUPPLY",
            ConstraintId::NonNeg => "NONNEG",
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub week: usize,
    pub constraint: ConstraintId,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "week {}: {}: {}", self.week, self.constraint, self.detail)
    }
}

/// Checks every week of `schedule` against demand and fleet rules. Returns
/// an empty list when the schedule is consistent.
///
/// Maintenance lower bounds use the four-operators-per-robot form in every
/// scenario.
pub fn validate(
    schedule: &Schedule,
    demand: &DemandSeries,
    params: &FleetParams,
    _costs: &CostParams,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut flag = |week: usize, constraint: ConstraintId, detail: String| {
        out.push(Violation { week, constraint, detail });
    };
    let k = params.attrition_rate;
    let g = params.instruct_capacity.max(1) as i64;

    let mut prev_vessels = params.initial_vessels as i64;
    let mut prev_operators = params.initial_operators as i64;
    let mut prev_deployed = 0i64;

    for (idx, r) in schedule.records.iter().enumerate() {
        let week = idx + 1;
        if r.week != week {
            flag(week, ConstraintId::Eq7Usage, format!("record labelled week {} out of sequence", r.week));
        }
        let neg = nonneg_fields(r);
        for name in &neg {
            flag(week, ConstraintId::NonNeg, format!("{name} is negative"));
        }
        if r.vessels_owned < 0 || r.operators_owned < 0 {
            flag(week, ConstraintId::NonNeg, "owned fleet is negative".into());
        }
        if idx >= demand.len() {
            flag(week, ConstraintId::Eq7Usage, "record beyond the demand horizon".into());
        }

        let required = demand.week(week) as i64;
        if r.robots_deployed != required {
            flag(week, ConstraintId::Eq7Usage, format!("deployed {} robots, demand is {required}", r.robots_deployed));
        }

        // owned-unit recurrence and attrition amounts
        let exp_v = prev_vessels + r.vessel_buys - r.vessel_discards - r.vessels_destroyed;
        if r.vessels_owned != exp_v {
            flag(week, ConstraintId::Eq18AttritionSupply,
                format!("vessels owned {} but recurrence gives {exp_v}", r.vessels_owned));
        }
        let exp_o = prev_operators + r.operator_buys - r.operator_discards - r.operators_destroyed;
        if r.operators_owned != exp_o {
            flag(week, ConstraintId::Eq18AttritionSupply,
                format!("operators owned {} but recurrence gives {exp_o}", r.operators_owned));
        }
        let prev_crew = 4 * prev_deployed.max(0);
        let lost_v = k.losses(prev_deployed.max(0) as u64) as i64;
        let lost_o = k.losses(prev_crew as u64) as i64;
        if r.vessels_destroyed != lost_v {
            flag(week, ConstraintId::Eq18AttritionSupply,
                format!("{} vessels destroyed, expected {lost_v} of {prev_deployed} in use", r.vessels_destroyed));
        }
        if r.operators_destroyed != lost_o {
            flag(week, ConstraintId::Eq18AttritionSupply,
                format!("{} operators destroyed, expected {lost_o} of {prev_crew} in use", r.operators_destroyed));
        }

        // maintenance bounds
        let prev_required = if week > 1 { demand.week(week - 1) as i64 } else { 0 };
        let min_v = prev_required - r.vessel_discards - r.vessels_destroyed;
        if r.vessels_maint < min_v {
            flag(week, ConstraintId::Eq12Maintenance,
                format!("{} vessels in maintenance, at least {min_v} required", r.vessels_maint));
        }
        let min_o = 4 * prev_required - r.operator_discards - r.operators_destroyed;
        if r.operators_maint < min_o {
            flag(week, ConstraintId::Eq12Maintenance,
                format!("{} operators in maintenance, at least {min_o} required", r.operators_maint));
        }
        if r.vessels_maint + r.vessel_discards + r.vessels_destroyed > prev_deployed {
            flag(week, ConstraintId::Eq12Maintenance,
                format!("more vessels leave service than the {prev_deployed} used last week"));
        }
        if r.operators_maint + r.operator_discards + r.operators_destroyed > prev_crew {
            flag(week, ConstraintId::Eq12Maintenance,
                format!("more operators leave service than the {prev_crew} used last week"));
        }

        // training
        if r.trainees != r.operator_buys {
            flag(week, ConstraintId::Eq11Instructors,
                format!("{} trainees for {} purchased operators", r.trainees, r.operator_buys));
        }
        let need_g = if r.operator_buys > 0 { (r.operator_buys + g - 1) / g } else { 0 };
        if r.instructors != need_g {
            flag(week, ConstraintId::Eq11Instructors,
                format!("{} instructors, ceil({}/{g}) = {need_g} required", r.instructors, r.operator_buys));
        }
        let skilled_free = r.operators_owned - r.operators_maint - r.trainees;
        if r.instructors > skilled_free {
            flag(week, ConstraintId::Eq11Instructors,
                format!("{} instructors but only {skilled_free} skilled operators free", r.instructors));
        }

        // supply for deployment
        let vessel_pool = r.vessels_owned - r.vessels_maint - r.vessel_buys;
        if r.robots_deployed > vessel_pool {
            flag(week, ConstraintId::Eq13Commissioning,
                format!("{} robots deployed but only {vessel_pool} commissioned vessels free", r.robots_deployed));
        }
        let crew_pool = skilled_free - r.instructors;
        if 4 * r.robots_deployed > crew_pool {
            flag(week, ConstraintId::Eq9OperatorUsage,
                format!("crew of {} needed but only {crew_pool} skilled operators free", 4 * r.robots_deployed));
        }

        prev_vessels = r.vessels_owned;
        prev_operators = r.operators_owned;
        prev_deployed = r.robots_deployed;
    }

    for week in schedule.records.len() + 1..=demand.len() {
        flag(week, ConstraintId::Eq7Usage, format!("no record for week with demand {}", demand.week(week)));
    }
    out
}

fn nonneg_fields(r: &WeekRecord) -> Vec<&'static str> {
    [
        ("vessel_buys", r.vessel_buys),
        ("operator_buys", r.operator_buys),
        ("vessel_discards", r.vessel_discards),
        ("operator_discards", r.operator_discards),
        ("vessels_destroyed", r.vessels_destroyed),
        ("operators_destroyed", r.operators_destroyed),
        ("vessels_maint", r.vessels_maint),
        ("operators_maint", r.operators_maint),
        ("instructors", r.instructors),
        ("trainees", r.trainees),
        ("robots_deployed", r.robots_deployed),
    ]
    .into_iter()
    .filter(|&(_, v)| v < 0)
    .map(|(n, _)| n)
    .collect()
}
