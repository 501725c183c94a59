use std::fmt;

use thiserror::Error;

use super::ledger::FleetState;
use super::schedule::{Schedule, WeekRecord};
use super::{discard_operator, discard_vessel};
use crate::domain::{CostParams, DemandSeries, FleetParams, Money, ProcurementPlan, UnitKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShortfallKind {
    Vessels,
    Operators,
    Instructors,
}

impl ShortfallKind {
    pub fn code(self) -> &'static str {
        match self {
            ShortfallKind::Vessels => "INSUFFICIENT_VESSELS",
            ShortfallKind::Operators => "INSUFFICIENT_OPERATORS",
            ShortfallKind::Instructors => "INSUFFICIENT_INSTRUCTORS",
        }
    }

    /// The unit kind whose purchase relieves this shortfall.
    pub fn unit(self) -> UnitKind {
        match self {
            ShortfallKind::Vessels => UnitKind::Vessel,
            ShortfallKind::Operators | ShortfallKind::Instructors => UnitKind::Operator,
        }
    }
}

impl fmt::Display for ShortfallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A week in which the plan cannot meet demand or staff its training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
#[error("{kind} in week {week}: need {needed}, have {available} (short {})", self.shortfall())]
pub struct Infeasibility {
    pub week: usize,
    pub kind: ShortfallKind,
    pub needed: u32,
    pub available: u32,
}

impl Infeasibility {
    pub fn shortfall(&self) -> u32 {
        self.needed - self.available
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeekOutcome {
    pub next_state: FleetState,
    pub record: WeekRecord,
}

/// Advances the fleet by one week.
///
/// Order within the week: attrition of last week's in-use units; survivors
/// enter one week of maintenance (counter +1) unless the discard rule
/// retires them; last week's maintenance, commissioning, training and
/// instructing units become available (trainees as skilled operators);
/// purchases enter commissioning/training with `ceil(O_B / G)` instructors
/// reserved; exactly `R` vessels and `4R` operators deploy; the week is costed.
///
/// Shortfalls are checked vessels first, then instructors, then operators.
pub fn step_week(
    state: &FleetState,
    buys: (u32, u32),
    demand: u32,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<WeekOutcome, Infeasibility> {
    let week = state.week + 1;
    let (vessel_buys, operator_buys) = buys;
    let k = params.attrition_rate;
    let mut v = state.vessels.clone();
    let mut o = state.operators.clone();

    // attrition
    let mut v_used = std::mem::take(&mut v.in_use);
    let v_destroyed = k.losses(v_used.total() as u64) as u32;
    v_used.take_lowest(v_destroyed).expect("losses never exceed the in-use pool");
    let mut o_used = std::mem::take(&mut o.in_use);
    let o_destroyed = k.losses(o_used.total() as u64) as u32;
    o_used.take_lowest(o_destroyed).expect("losses never exceed the in-use pool");

    // releases
    let released_v = std::mem::take(&mut v.maintenance);
    v.available.absorb(released_v);
    v.available.add(0, std::mem::take(&mut v.commissioning));
    let released_o = std::mem::take(&mut o.maintenance);
    o.available.absorb(released_o);
    let instructors_back = std::mem::take(&mut o.instructing);
    o.available.absorb(instructors_back);
    o.available.add(0, std::mem::take(&mut o.training));

    // maintenance entry with discards
    let mut v_discards = 0;
    for (w, n) in v_used.aged().iter() {
        if discard_vessel(w, costs) {
            v_discards += n;
        } else {
            v.maintenance.add(w, n);
        }
    }
    let mut o_discards = 0;
    for (w, n) in o_used.aged().iter() {
        if discard_operator(w, costs) {
            o_discards += n;
        } else {
            o.maintenance.add(w, n);
        }
    }

    // purchases and deployment
    v.commissioning = vessel_buys;
    let have = v.available.total();
    v.in_use = v.available.take_lowest(demand).ok_or(Infeasibility {
        week,
        kind: ShortfallKind::Vessels,
        needed: demand,
        available: have,
    })?;

    let instructors = params.instructors_for(operator_buys);
    let have = o.available.total();
    o.instructing = o.available.take_highest(instructors).ok_or(Infeasibility {
        week,
        kind: ShortfallKind::Instructors,
        needed: instructors,
        available: have,
    })?;
    o.training = operator_buys;
    let crew = 4 * demand;
    let have = o.available.total();
    o.in_use = o.available.take_lowest(crew).ok_or(Infeasibility {
        week,
        kind: ShortfallKind::Operators,
        needed: crew,
        available: have,
    })?;

    let vessels_maint = v.maintenance.total();
    let operators_maint = o.maintenance.total();
    let week_cost = costs.vessel_price.times(vessel_buys as i64)
        + costs.operator_price.times(operator_buys as i64)
        + costs.training_price.times((instructors + operator_buys) as i64)
        + costs.vessel_maint_price.times(vessels_maint as i64)
        + costs.operator_maint_price.times(operators_maint as i64);

    let next_state = FleetState { week, vessels: v, operators: o };
    let record = WeekRecord {
        week,
        vessel_buys: vessel_buys as i64,
        operator_buys: operator_buys as i64,
        vessel_discards: v_discards as i64,
        operator_discards: o_discards as i64,
        vessels_destroyed: v_destroyed as i64,
        operators_destroyed: o_destroyed as i64,
        vessels_maint: vessels_maint as i64,
        operators_maint: operators_maint as i64,
        instructors: instructors as i64,
        trainees: operator_buys as i64,
        robots_deployed: demand as i64,
        week_cost,
        vessels_owned: next_state.vessels_owned() as i64,
        operators_owned: next_state.operators_owned() as i64,
    };
    Ok(WeekOutcome { next_state, record })
}

/// Runs `plan` against `demand` from the initial fleet.
pub fn simulate(
    plan: &ProcurementPlan,
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<Schedule, super::ModelError> {
    super::check_horizons(plan, demand)?;
    let mut state = FleetState::initial(params);
    let mut records = Vec::with_capacity(plan.horizon());
    let mut total = Money::ZERO;
    for (i, &r) in demand.values().iter().enumerate() {
        let out = step_week(&state, plan.buys(i), r, params, costs)?;
        total += out.record.week_cost;
        records.push(out.record);
        state = out.next_state;
    }
    Ok(Schedule { records, total_cost: total })
}

/// Cheaper than [`simulate`] when only the cost is needed.
pub fn simulate_cost(
    plan: &ProcurementPlan,
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<Money, super::ModelError> {
    super::check_horizons(plan, demand)?;
    let mut state = FleetState::initial(params);
    let mut total = Money::ZERO;
    for (i, &r) in demand.values().iter().enumerate() {
        let out = step_week(&state, plan.buys(i), r, params, costs)?;
        total += out.record.week_cost;
        state = out.next_state;
    }
    Ok(total)
}
