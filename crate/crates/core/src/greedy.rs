//! Greedy construction of a feasible, low-cost plan: start from a plan that
//! buys fresh units for every use, then remove single units while that keeps
//! the plan feasible and makes it cheaper.

use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{CostParams, DemandSeries, FleetParams, Money, ProcurementPlan, UnitKind};
use crate::model::{repair, simulate_cost, step_week, FleetState, Infeasibility, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    /// No purchase schedule can cover the demand, typically because week 1
    /// needs more than the initial fleet.
    #[error("UNSEEDABLE: {cause}")]
    Unseedable { cause: Infeasibility },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One accepted decrement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    pub pass: usize,
    /// 1-based week.
    pub week: usize,
    pub kind: UnitKind,
    pub amount: u32,
    pub cost_after: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub initial_cost: Money,
    pub passes: usize,
    pub final_cost: Money,
    pub reductions: Vec<Reduction>,
}

impl GreedyTrace {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("pass,week,kind,amount,cost_after\n");
        for r in &self.reductions {
            let _ = writeln!(s, "{},{},{},{},{}", r.pass, r.week, r.kind, r.amount, r.cost_after);
        }
        s
    }
}

/// Generous feasible starting plan: every week's robots get fresh units
/// bought the week before (`R` vessels and `4R` operators), so purchases sit
/// at the latest week the lead times allow and fully cover attrition and
/// maintenance turnover. Week-1 operator purchases are capped by the
/// instructors the initial crew can spare, and any remaining shortfall is
/// repaired. If that still fails, the just-in-time plan (repair of an empty
/// plan) is used instead.
pub fn seed_plan(
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<ProcurementPlan, GreedyError> {
    let h = demand.len();
    let r = demand.values();
    let mut fresh = ProcurementPlan::zeros(h);
    for i in 0..h.saturating_sub(1) {
        fresh.vessel_buys[i] = r[i + 1];
        fresh.operator_buys[i] = r[i + 1].saturating_mul(4);
    }
    if h > 0 {
        let spare = params.initial_operators.saturating_sub(r[0].saturating_mul(4));
        let cap = spare.saturating_mul(params.instruct_capacity);
        fresh.operator_buys[0] = fresh.operator_buys[0].min(cap);
    }
    if let Ok(plan) = repair(&fresh, demand, params, costs) {
        return Ok(plan);
    }
    repair(&ProcurementPlan::zeros(h), demand, params, costs).map_err(|e| match e {
        ModelError::Unrepairable { cause } => GreedyError::Unseedable { cause },
        other => GreedyError::Model(other),
    })
}

/// Steepest-descent reduction over single-unit decrements.
///
/// Each pass tries removing one unit from every non-zero purchase and
/// applies the feasible decrement with the lowest resulting cost, provided
/// it is strictly cheaper. Ties go to the latest week, then vessels before
/// operators. Stops at the first pass with no improving decrement.
///
/// A decrement in week `i` cannot change weeks before it, so each candidate
/// is simulated from the cached state at week `i` and abandoned as soon as
/// its running cost can no longer win.
pub fn reduce(
    plan: &ProcurementPlan,
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<(ProcurementPlan, GreedyTrace), GreedyError> {
    let mut current = plan.clone();
    let initial_cost = simulate_cost(&current, demand, params, costs)?;
    let mut cost = initial_cost;
    let mut reductions = Vec::new();
    let mut passes = 0;
    loop {
        passes += 1;
        let (states, prefix) = trajectory(&current, demand, params, costs);
        let mut best: Option<(usize, UnitKind, Money)> = None;
        for idx in (0..current.horizon()).rev() {
            for kind in [UnitKind::Vessel, UnitKind::Operator] {
                if current.get(kind, idx) == 0 {
                    continue;
                }
                let bound = best.map_or(cost, |(_, _, b)| b);
                *current.get_mut(kind, idx) -= 1;
                let tried = cost_from(&current, idx, &states[idx], prefix[idx], bound, demand, params, costs);
                *current.get_mut(kind, idx) += 1;
                if let Some(c) = tried {
                    best = Some((idx, kind, c));
                }
            }
        }
        match best {
            Some((idx, kind, c)) => {
                *current.get_mut(kind, idx) -= 1;
                cost = c;
                reductions.push(Reduction { pass: passes, week: idx + 1, kind, amount: 1, cost_after: c });
            }
            None => break,
        }
    }
    Ok((current, GreedyTrace { initial_cost, passes, final_cost: cost, reductions }))
}

/// States before each week and the cost accumulated before each week, for a
/// feasible plan.
fn trajectory(
    plan: &ProcurementPlan,
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> (Vec<FleetState>, Vec<Money>) {
    let mut states = vec![FleetState::initial(params)];
    let mut prefix = vec![Money::ZERO];
    for (i, &r) in demand.values().iter().enumerate() {
        let out = step_week(&states[i], plan.buys(i), r, params, costs).expect("current plan stays feasible");
        prefix.push(prefix[i] + out.record.week_cost);
        states.push(out.next_state);
    }
    (states, prefix)
}

/// Total cost of `plan` resumed at week index `from`, or `None` if it is
/// infeasible or does not come in strictly under `bound`.
#[allow(clippy::too_many_arguments)]
fn cost_from(
    plan: &ProcurementPlan,
    from: usize,
    state: &FleetState,
    spent: Money,
    bound: Money,
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Option<Money> {
    let mut state = state.clone();
    let mut total = spent;
    for i in from..plan.horizon() {
        let out = step_week(&state, plan.buys(i), demand.values()[i], params, costs).ok()?;
        total += out.record.week_cost;
        if total >= bound {
            return None;
        }
        state = out.next_state;
    }
    Some(total)
}

/// `seed_plan` followed by `reduce`.
pub fn greedy_plan(
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<(ProcurementPlan, GreedyTrace), GreedyError> {
    let seed = seed_plan(demand, params, costs)?;
    reduce(&seed, demand, params, costs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::AttritionRate;
    use crate::model::{simulate, validate};

    fn costs() -> CostParams {
        let m = Money::from_units;
        CostParams::new(m(100), m(50), m(20), m(10), m(15)).unwrap()
    }

    #[test]
    fn zero_demand_buys_nothing() {
        let p = FleetParams::new(4, AttritionRate::ZERO, 0, 0, 5).unwrap();
        let plan = seed_plan(&DemandSeries::zeros(5), &p, &costs()).unwrap();
        assert_eq!(plan, ProcurementPlan::zeros(5));
    }

    #[test]
    fn initial_operators_cover_week_two() {
        let p = FleetParams::new(4, AttritionRate::ZERO, 0, 4, 2).unwrap();
        let demand = DemandSeries::new(vec![0, 1]);
        let seed = seed_plan(&demand, &p, &costs()).unwrap();
        assert_eq!(seed.buys(0), (1, 4));
        let (plan, trace) = greedy_plan(&demand, &p, &costs()).unwrap();
        assert_eq!(plan.vessel_buys, vec![1, 0]);
        assert_eq!(plan.operator_buys, vec![0, 0]);
        assert_eq!(trace.reductions.len(), 4);
        assert!(trace.reductions.iter().all(|r| r.kind == UnitKind::Operator && r.week == 1));
        assert!(simulate(&plan, &demand, &p, &costs()).is_ok());
    }

    #[test]
    fn constant_demand_with_attrition_validates() {
        let p = FleetParams::new(4, "0.2".parse().unwrap(), 20, 100, 104).unwrap();
        let demand = DemandSeries::new(vec![10; 104]);
        let seed = seed_plan(&demand, &p, &costs()).unwrap();
        let s = simulate(&seed, &demand, &p, &costs()).unwrap();
        assert!(validate(&s, &demand, &p, &costs()).is_empty());
        let (plan, trace) = reduce(&seed, &demand, &p, &costs()).unwrap();
        let s = simulate(&plan, &demand, &p, &costs()).unwrap();
        assert!(validate(&s, &demand, &p, &costs()).is_empty());
        assert!(trace.final_cost <= trace.initial_cost);
        assert_eq!(trace.final_cost, s.total_cost);
        assert_eq!(trace.reductions.len(), trace.passes - 1);
        assert!(trace.reductions.windows(2).all(|w| w[1].cost_after < w[0].cost_after));
    }

    #[test]
    fn costs_are_bounded_by_buying_fresh_every_week() {
        let p = FleetParams::new(4, "0.1".parse().unwrap(), 30, 200, 20).unwrap();
        let demand = crate::domain::gen_demand(20, 5, 10.0, 0.3).unwrap();
        let r = demand.values();
        let naive = ProcurementPlan::new(r.to_vec(), r.iter().map(|x| 4 * x).collect()).unwrap();
        let naive = repair(&naive, &demand, &p, &costs()).unwrap();
        let naive_cost = simulate_cost(&naive, &demand, &p, &costs()).unwrap();
        let seed = seed_plan(&demand, &p, &costs()).unwrap();
        let seed_cost = simulate_cost(&seed, &demand, &p, &costs()).unwrap();
        let (_, trace) = reduce(&seed, &demand, &p, &costs()).unwrap();
        assert!(trace.final_cost <= seed_cost);
        assert!(seed_cost <= naive_cost, "{seed_cost} > {naive_cost}");
    }

    #[test]
    fn superfluous_purchase_is_removed() {
        let p = FleetParams::new(4, AttritionRate::ZERO, 0, 4, 3).unwrap();
        let demand = DemandSeries::new(vec![0, 1, 0]);
        let (mut plan, minimal) = greedy_plan(&demand, &p, &costs()).unwrap();
        assert_eq!(plan.vessel_buys, vec![1, 0, 0]);
        plan.vessel_buys[2] += 1;
        let padded = simulate_cost(&plan, &demand, &p, &costs()).unwrap();
        let (reduced, trace) = reduce(&plan, &demand, &p, &costs()).unwrap();
        assert_eq!(reduced.vessel_buys, vec![1, 0, 0]);
        assert!(padded - trace.final_cost >= costs().vessel_price);
        assert_eq!(trace.final_cost, minimal.final_cost);
        assert_eq!(trace.reductions.len(), 1);
        assert_eq!(trace.reductions[0].week, 3);
    }

    #[test]
    fn minimal_plan_is_a_fixed_point() {
        let p = FleetParams::new(4, AttritionRate::ZERO, 0, 4, 2).unwrap();
        let demand = DemandSeries::new(vec![0, 1]);
        let (plan, _) = greedy_plan(&demand, &p, &costs()).unwrap();
        let (reduced, trace) = reduce(&plan, &demand, &p, &costs()).unwrap();
        assert_eq!(reduced, plan);
        assert_eq!(trace.passes, 1);
        assert!(trace.reductions.is_empty());
        assert_eq!(trace.to_csv(), "pass,week,kind,amount,cost_after\n");
    }

    #[test]
    fn reduce_agrees_with_plain_rescans() {
        // the pruned scan must pick the same decrement as full simulations would
        let p = FleetParams::new(3, "0.2".parse().unwrap(), 6, 30, 8).unwrap();
        let demand = DemandSeries::new(vec![3, 4, 2, 5, 3, 4, 2, 1]);
        let mut plan = seed_plan(&demand, &p, &costs()).unwrap();
        let (_, trace) = reduce(&plan, &demand, &p, &costs()).unwrap();
        for step in &trace.reductions {
            let cost = simulate_cost(&plan, &demand, &p, &costs()).unwrap();
            let mut best: Option<(usize, UnitKind, Money)> = None;
            for idx in (0..plan.horizon()).rev() {
                for kind in [UnitKind::Vessel, UnitKind::Operator] {
                    if plan.get(kind, idx) == 0 {
                        continue;
                    }
                    let mut t = plan.clone();
                    *t.get_mut(kind, idx) -= 1;
                    if let Ok(c) = simulate_cost(&t, &demand, &p, &costs()) {
                        if c < cost && best.is_none_or(|(_, _, b)| c < b) {
                            best = Some((idx, kind, c));
                        }
                    }
                }
            }
            assert_eq!(best, Some((step.week - 1, step.kind, step.cost_after)));
            *plan.get_mut(step.kind, step.week - 1) -= 1;
        }
    }

    #[test]
    fn unseedable_week_one() {
        let p = FleetParams::new(4, AttritionRate::ZERO, 0, 40, 2).unwrap();
        let err = seed_plan(&DemandSeries::new(vec![10, 10]), &p, &costs()).unwrap_err();
        assert!(matches!(err, GreedyError::Unseedable { cause } if cause.week == 1));
    }
}
