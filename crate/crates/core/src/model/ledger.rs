//! Unit ledgers. Units of the same kind, status and cumulative maintenance
//! count are interchangeable, so each status pool is stored as cohorts of
//! `(maint_weeks, count)` sorted by `maint_weeks`. "Ledger order" is that
//! ascending order: deployment and attrition both take the least-worn units
//! first.

use crate::domain::FleetParams;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Cohorts(Vec<(u32, u32)>);

impl Cohorts {
    pub fn new() -> Self {
        Cohorts(Vec::new())
    }

    pub fn single(maint_weeks: u32, count: u32) -> Self {
        let mut c = Cohorts::new();
        c.add(maint_weeks, count);
        c
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(maint_weeks, count)` pairs in ledger order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn add(&mut self, maint_weeks: u32, count: u32) {
        if count == 0 {
            return;
        }
        match self.0.binary_search_by_key(&maint_weeks, |&(w, _)| w) {
            Ok(i) => self.0[i].1 += count,
            Err(i) => self.0.insert(i, (maint_weeks, count)),
        }
    }

    pub fn absorb(&mut self, other: Cohorts) {
        if self.0.is_empty() {
            *self = other;
            return;
        }
        for (w, n) in other.0 {
            self.add(w, n);
        }
    }

    /// Removes `n` units from the front of the ledger (least-worn first).
    /// Returns `None` and leaves the pool untouched if fewer than `n` exist.
    pub fn take_lowest(&mut self, n: u32) -> Option<Cohorts> {
        self.take(n, false)
    }

    /// Removes `n` units from the back of the ledger (most-worn first).
    pub fn take_highest(&mut self, n: u32) -> Option<Cohorts> {
        self.take(n, true)
    }

    fn take(&mut self, n: u32, from_back: bool) -> Option<Cohorts> {
        if n > self.total() {
            return None;
        }
        let mut taken = Cohorts::new();
        let mut left = n;
        while left > 0 {
            let idx = if from_back { self.0.len() - 1 } else { 0 };
            let (w, c) = self.0[idx];
            let k = c.min(left);
            taken.add(w, k);
            left -= k;
            if k == c {
                self.0.remove(idx);
            } else {
                self.0[idx].1 -= k;
            }
        }
        Some(taken)
    }

    /// Same units with one more week of maintenance on the counter.
    pub fn aged(mut self) -> Cohorts {
        for c in &mut self.0 {
            c.0 += 1;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VesselStatus {
    Available,
    InUse,
    Maintenance,
    Commissioning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorStatus {
    Available,
    InUse,
    Maintenance,
    Training,
    Instructing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Skill {
    Novice,
    Skilled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VesselUnit {
    pub status: VesselStatus,
    pub maint_weeks: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorUnit {
    pub status: OperatorStatus,
    pub skill: Skill,
    pub maint_weeks: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VesselLedger {
    pub available: Cohorts,
    pub in_use: Cohorts,
    pub maintenance: Cohorts,
    /// Bought this week; usable next week.
    pub commissioning: u32,
}

impl VesselLedger {
    pub fn total(&self) -> u32 {
        self.available.total() + self.in_use.total() + self.maintenance.total() + self.commissioning
    }
}

/// Novices exist only while in training; every other operator is skilled.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OperatorLedger {
    pub available: Cohorts,
    pub in_use: Cohorts,
    pub maintenance: Cohorts,
    pub instructing: Cohorts,
    pub training: u32,
}

impl OperatorLedger {
    pub fn total(&self) -> u32 {
        self.available.total()
            + self.in_use.total()
            + self.maintenance.total()
            + self.instructing.total()
            + self.training
    }
}

/// Fleet position at the end of week `week` (week 0 is the initial fleet).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FleetState {
    pub week: usize,
    pub vessels: VesselLedger,
    pub operators: OperatorLedger,
}

impl FleetState {
    /// Initial vessels are commissioned and initial operators skilled, all available.
    pub fn initial(params: &FleetParams) -> Self {
        FleetState {
            week: 0,
            vessels: VesselLedger { available: Cohorts::single(0, params.initial_vessels), ..Default::default() },
            operators: OperatorLedger {
                available: Cohorts::single(0, params.initial_operators),
                ..Default::default()
            },
        }
    }

    pub fn vessels_owned(&self) -> u32 {
        self.vessels.total()
    }

    pub fn operators_owned(&self) -> u32 {
        self.operators.total()
    }

    /// The ledger expanded to one entry per vessel, in ledger order within each status.
    pub fn vessel_units(&self) -> Vec<VesselUnit> {
        let v = &self.vessels;
        let mut out = Vec::with_capacity(v.total() as usize);
        for (status, pool) in [
            (VesselStatus::Available, &v.available),
            (VesselStatus::InUse, &v.in_use),
            (VesselStatus::Maintenance, &v.maintenance),
        ] {
            for (w, n) in pool.iter() {
                out.extend((0..n).map(|_| VesselUnit { status, maint_weeks: w }));
            }
        }
        out.extend((0..v.commissioning).map(|_| VesselUnit { status: VesselStatus::Commissioning, maint_weeks: 0 }));
        out
    }

    pub fn operator_units(&self) -> Vec<OperatorUnit> {
        let o = &self.operators;
        let mut out = Vec::with_capacity(o.total() as usize);
        for (status, pool) in [
            (OperatorStatus::Available, &o.available),
            (OperatorStatus::InUse, &o.in_use),
            (OperatorStatus::Maintenance, &o.maintenance),
            (OperatorStatus::Instructing, &o.instructing),
        ] {
            for (w, n) in pool.iter() {
                out.extend((0..n).map(|_| OperatorUnit { status, skill: Skill::Skilled, maint_weeks: w }));
            }
        }
        out.extend((0..o.training).map(|_| OperatorUnit {
            status: OperatorStatus::Training,
            skill: Skill::Novice,
            maint_weeks: 0,
        }));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohorts_merge_and_take() {
        let mut c = Cohorts::new();
        c.add(2, 3);
        c.add(0, 1);
        c.add(2, 2);
        c.add(5, 0);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(0, 1), (2, 5)]);
        let low = c.take_lowest(3).unwrap();
        assert_eq!(low.iter().collect::<Vec<_>>(), vec![(0, 1), (2, 2)]);
        assert_eq!(c.total(), 3);
        assert!(c.take_highest(4).is_none());
        assert_eq!(c.total(), 3);
        let high = c.take_highest(3).unwrap();
        assert_eq!(high.iter().collect::<Vec<_>>(), vec![(2, 3)]);
        assert!(c.is_empty());
        assert_eq!(Cohorts::single(1, 2).aged().iter().collect::<Vec<_>>(), vec![(2, 2)]);
    }

    #[test]
    fn expanded_units_match_tallies() {
        let params = FleetParams::new(4, Default::default(), 3, 9, 5).unwrap();
        let mut s = FleetState::initial(&params);
        s.operators.training = 2;
        let ops = s.operator_units();
        assert_eq!(ops.len() as u32, s.operators_owned());
        assert_eq!(ops.iter().filter(|u| u.skill == Skill::Novice).count(), 2);
        assert_eq!(s.vessel_units().len(), 3);
    }
}
