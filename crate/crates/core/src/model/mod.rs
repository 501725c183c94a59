//! Deterministic week-by-week fleet simulation, the discard rule, costing,
//! an independent constraint validator and plan repair. Every solver's
//! fitness goes through this module.

mod ledger;
mod repair;
mod schedule;
mod simulate;
mod validate;

use thiserror::Error;

use crate::domain::{CostParams, DemandSeries, Money, ProcurementPlan};

pub use ledger::{
    Cohorts, FleetState, OperatorLedger, OperatorStatus, OperatorUnit, Skill, VesselLedger, VesselStatus, VesselUnit,
};
pub use repair::repair;
pub use schedule::{Schedule, ScheduleParseError, WeekRecord, SCHEDULE_HEADER};
pub use simulate::{simulate, simulate_cost, step_week, Infeasibility, ShortfallKind, WeekOutcome};
pub use validate::{validate, ConstraintId, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Infeasible(#[from] Infeasibility),
    /// No purchase schedule can cover the shortfall: it would have to be
    /// bought before week 1.
    #[error("UNREPAIRABLE: {cause}")]
    Unrepairable { cause: Infeasibility },
    #[error("plan covers {plan} weeks but demand covers {demand}")]
    HorizonMismatch { plan: usize, demand: usize },
}

impl ModelError {
    /// Week the problem was detected in, if any.
    pub fn week(&self) -> Option<usize> {
        match self {
            ModelError::Infeasible(i) | ModelError::Unrepairable { cause: i } => Some(i.week),
            ModelError::HorizonMismatch { .. } => None,
        }
    }
}

pub(crate) fn check_horizons(plan: &ProcurementPlan, demand: &DemandSeries) -> Result<(), ModelError> {
    if plan.horizon() != demand.len() {
        return Err(ModelError::HorizonMismatch { plan: plan.horizon(), demand: demand.len() });
    }
    Ok(())
}

/// Retire an operator once `W_O * P_Om > P_O + 2 * P_Ot`.
pub fn discard_operator(maint_weeks: u32, costs: &CostParams) -> bool {
    costs.operator_maint_price.times(maint_weeks as i64) > costs.operator_price + costs.training_price.times(2)
}

/// Retire a vessel once `W_C * P_Cm > P_C`.
pub fn discard_vessel(maint_weeks: u32, costs: &CostParams) -> bool {
    costs.vessel_maint_price.times(maint_weeks as i64) > costs.vessel_price
}

/// Total cost from the schedule's summed counts: purchases, instructor and
/// trainee weeks, and maintenance weeks, each at its own unit price.
pub fn total_cost(schedule: &Schedule, costs: &CostParams) -> Money {
    let sum = |f: fn(&WeekRecord) -> i64| schedule.records.iter().map(f).sum::<i64>();
    costs.vessel_price.times(sum(|r| r.vessel_buys))
        + costs.operator_price.times(sum(|r| r.operator_buys))
        + costs.training_price.times(sum(|r| r.instructors + r.trainees))
        + costs.vessel_maint_price.times(sum(|r| r.vessels_maint))
        + costs.operator_maint_price.times(sum(|r| r.operators_maint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{AttritionRate, FleetParams};

    fn prices(p_c: i64, p_o: i64, p_ot: i64, p_om: i64, p_cm: i64) -> CostParams {
        CostParams::new(
            Money::from_units(p_c),
            Money::from_units(p_o),
            Money::from_units(p_ot),
            Money::from_units(p_om),
            Money::from_units(p_cm),
        )
        .unwrap()
    }

    fn fleet(g: u32, k: &str, v0: u32, o0: u32, h: usize) -> FleetParams {
        FleetParams::new(g, k.parse::<AttritionRate>().unwrap(), v0, o0, h).unwrap()
    }

    #[test]
    fn operator_discard_threshold_is_strict() {
        let c = prices(100, 50, 20, 10, 15);
        assert!(!discard_operator(0, &c));
        assert!(discard_operator(10, &c)); // 100 > 90
        assert!(!discard_operator(9, &c)); // 90 > 90 is false
    }

    #[test]
    fn vessel_discard_threshold_is_strict() {
        let c = prices(100, 50, 20, 10, 10);
        assert!(!discard_vessel(0, &c));
        assert!(discard_vessel(11, &c)); // 110 > 100
        assert!(!discard_vessel(10, &c));
    }

    #[test]
    fn total_cost_term_by_term() {
        let c = prices(100, 50, 20, 10, 15);
        let rec = |vb, ob, g, t, vm, om| WeekRecord {
            vessel_buys: vb,
            operator_buys: ob,
            instructors: g,
            trainees: t,
            vessels_maint: vm,
            operators_maint: om,
            ..Default::default()
        };
        let s = Schedule { records: vec![rec(1, 4, 1, 4, 1, 2), rec(1, 4, 1, 4, 2, 3)], total_cost: Money::ZERO };
        // 2*100 + 8*50 + 10*20 + 3*15 + 5*10
        assert_eq!(total_cost(&s, &c), Money::from_units(895));
        let doubled = Schedule {
            records: s
                .records
                .iter()
                .map(|r| rec(2 * r.vessel_buys, 2 * r.operator_buys, 2 * r.instructors, 2 * r.trainees,
                    2 * r.vessels_maint, 2 * r.operators_maint))
                .collect(),
            total_cost: Money::ZERO,
        };
        assert_eq!(total_cost(&doubled, &c), Money::from_units(1790));
        assert_eq!(total_cost(&Schedule::default(), &c), Money::ZERO);
    }

    #[test]
    fn step_deploys_then_everything_rests() {
        let c = prices(100, 50, 20, 10, 15);
        let p = fleet(4, "0", 5, 20, 3);
        let s0 = FleetState::initial(&p);
        let w1 = step_week(&s0, (0, 0), 5, &p, &c).unwrap();
        assert_eq!(w1.next_state.vessels.in_use.total(), 5);
        assert_eq!(w1.next_state.operators.in_use.total(), 20);
        assert_eq!(w1.record.week_cost, Money::ZERO);
        let w2 = step_week(&w1.next_state, (0, 0), 0, &p, &c).unwrap();
        assert_eq!(w2.record.vessels_maint, 5);
        assert_eq!(w2.record.operators_maint, 20);
        assert_eq!(w2.record.week_cost, Money::from_units(5 * 15 + 20 * 10));
        assert!(w2.next_state.vessel_units().iter().all(|u| u.status == VesselStatus::Maintenance));
        assert!(w2.next_state.operator_units().iter().all(|u| u.maint_weeks == 1));
    }

    #[test]
    fn idle_week_is_a_no_op() {
        let c = prices(100, 50, 20, 10, 15);
        let p = fleet(4, "0", 3, 8, 3);
        let s0 = FleetState::initial(&p);
        let out = step_week(&s0, (0, 0), 0, &p, &c).unwrap();
        assert_eq!(out.record.week_cost, Money::ZERO);
        assert_eq!(FleetState { week: 0, ..out.next_state }, s0);
    }

    #[test]
    fn twenty_percent_attrition_of_ten() {
        let c = prices(100, 50, 20, 10, 15);
        let p = fleet(4, "0.2", 10, 40, 3);
        let s0 = FleetState::initial(&p);
        let w1 = step_week(&s0, (0, 0), 10, &p, &c).unwrap();
        let w2 = step_week(&w1.next_state, (0, 0), 0, &p, &c).unwrap();
        assert_eq!(w2.record.vessels_destroyed, 2);
        assert_eq!(w2.record.vessels_maint, 8);
        assert_eq!(w2.record.operators_destroyed, 8);
        assert_eq!(w2.record.operators_maint, 32);
    }

    #[test]
    fn two_week_lead_time_example() {
        let c = prices(100, 50, 20, 10, 15);
        for g in [1, 3, 4, 20] {
            let p = fleet(g, "0", 0, 4, 2);
            let plan = ProcurementPlan::new(vec![1, 0], vec![4, 0]).unwrap();
            let s = simulate(&plan, &DemandSeries::new(vec![0, 1]), &p, &c).unwrap();
            let expected = c.vessel_price + c.operator_price.times(4) + c.training_price.times(4 + 4u32.div_ceil(g) as i64);
            assert_eq!(s.total_cost, expected, "G={g}");
            assert_eq!(s.records[1].robots_deployed, 1);
        }
    }

    #[test]
    fn same_week_purchases_cannot_deploy() {
        let c = prices(100, 50, 20, 10, 15);
        let p = fleet(4, "0", 0, 0, 1);
        let plan = ProcurementPlan::new(vec![1], vec![4]).unwrap();
        let err = simulate(&plan, &DemandSeries::new(vec![1]), &p, &c).unwrap_err();
        match err {
            ModelError::Infeasible(i) => {
                assert_eq!(i.kind, ShortfallKind::Vessels);
                assert_eq!(i.week, 1);
                assert_eq!(i.shortfall(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn instructors_are_reserved_from_skilled_pool() {
        let c = prices(100, 50, 20, 10, 15);
        let p = fleet(4, "0", 1, 4, 2);
        // buying 4 novices needs one instructor, leaving 3 for a 4-operator crew
        let plan = ProcurementPlan::new(vec![0, 0], vec![4, 0]).unwrap();
        let err = simulate(&plan, &DemandSeries::new(vec![1, 0]), &p, &c).unwrap_err();
        assert!(matches!(err, ModelError::Infeasible(Infeasibility { kind: ShortfallKind::Operators, .. })));
        let p0 = fleet(4, "0", 0, 0, 1);
        let err = simulate(&ProcurementPlan::new(vec![0], vec![1]).unwrap(), &DemandSeries::zeros(1), &p0, &c)
            .unwrap_err();
        assert!(matches!(err, ModelError::Infeasible(Infeasibility { kind: ShortfallKind::Instructors, .. })));
    }

    #[test]
    fn worn_units_are_discarded_on_entering_maintenance() {
        // vessel maintenance 60/week against price 100: second maintenance week retires it
        let c = prices(100, 50, 20, 10, 60);
        let p = fleet(4, "0", 1, 4, 4);
        let plan = ProcurementPlan::zeros(4);
        let demand = DemandSeries::new(vec![1, 0, 1, 0]);
        let s = simulate(&plan, &demand, &p, &c).unwrap();
        assert_eq!(s.records[1].vessel_discards, 0);
        assert_eq!(s.records[1].vessels_maint, 1);
        assert_eq!(s.records[3].vessel_discards, 1);
        assert_eq!(s.records[3].vessels_owned, 0);
    }

    #[test]
    fn horizon_mismatch_is_reported() {
        let c = prices(100, 50, 20, 10, 15);
        let p = fleet(4, "0", 1, 4, 2);
        let err = simulate(&ProcurementPlan::zeros(2), &DemandSeries::zeros(3), &p, &c).unwrap_err();
        assert_eq!(err, ModelError::HorizonMismatch { plan: 2, demand: 3 });
    }
}
