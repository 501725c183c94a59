use super::ledger::FleetState;
use super::simulate::step_week;
use super::{check_horizons, ModelError};
use crate::domain::{CostParams, DemandSeries, FleetParams, ProcurementPlan};

/// Upper bound on purchase increments before giving up.
const MAX_FIXES: usize = 1_000_000;

/// Makes `plan` feasible by adding purchases.
///
/// Each shortfall found in week `w` is covered by buying exactly the missing
/// units in week `w - 1`, the latest week whose purchases are usable in `w`.
/// Extra novices may in turn need instructors in `w - 1`, which is handled
/// the same way. Simulation resumes from the cached state before the edited
/// week, so a repair costs little more than one simulation. A feasible plan
/// comes back unchanged.
pub fn repair(
    plan: &ProcurementPlan,
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<ProcurementPlan, ModelError> {
    check_horizons(plan, demand)?;
    let horizon = plan.horizon();
    let mut plan = plan.clone();
    let mut states = Vec::with_capacity(horizon + 1);
    states.push(FleetState::initial(params));
    let mut idx = 0;
    let mut fixes = 0;
    while idx < horizon {
        match step_week(&states[idx], plan.buys(idx), demand.values()[idx], params, costs) {
            Ok(out) => {
                states.push(out.next_state);
                idx += 1;
            }
            Err(cause) => {
                if idx == 0 || fixes >= MAX_FIXES {
                    return Err(ModelError::Unrepairable { cause });
                }
                fixes += 1;
                let slot = plan.get_mut(cause.kind.unit(), idx - 1);
                *slot = slot.checked_add(cause.shortfall()).ok_or(ModelError::Unrepairable { cause })?;
                idx -= 1;
                states.truncate(idx + 1);
            }
        }
    }
    Ok(plan)
}
