//! Integrability checks on the partition function: Virasoro annihilation and
//! algebra, the cut-and-join flow, and the KdV residual.

mod cut_join;
mod kdv;
mod operator;
mod virasoro;

pub use cut_join::{cut_and_join, cut_and_join_operator, evolve, evolve_check};
pub use kdv::{dispersionless_limit_vanishes, kdv_check, kdv_initial_condition, kdv_residual, KDV_ORDER_LOSS};
pub use operator::{DiffOperator, Graded, OpTerm};
pub use virasoro::{
    apply_virasoro, virasoro_annihilation_check, virasoro_commutator_check, virasoro_operator, VirasoroIndex,
};
