//! Effective constants, log-space magnitudes and the parameter budget.

mod budget;
mod constants;
mod registry;
mod tower;

pub use budget::{audit_budget, log_t_lower_bound, plan_budget, AuditCheck, BudgetAudit, EffectiveBudget, NuSource};
pub use constants::{capital_e, density_lower_bound, monotonicity_threshold};
pub use registry::{BudgetCaps, ConstantsRegistry};
pub use tower::Tower;
