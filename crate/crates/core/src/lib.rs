//! Exact topological recursion on the Bessel curve `x = z^2/2`, `y = 1/z`:
//! the coefficient table `U_{g,n}`, the partition function in the odd power
//! sums `p_1, p_3, ...`, its Virasoro, cut-and-join and KdV constraints, and
//! the wave function obtained by principal specialisation.
//!
//! All arithmetic is over exact rationals.

pub mod bessel;
pub mod constraints;
pub mod error;
pub mod formal;
pub mod memo;
pub mod report;
pub mod series;
pub mod tr;
pub mod verify;
pub mod wave;

pub use bessel::{MuKey, UEntry, UTable};
pub use error::{Error, Result};
pub use formal::{LaurentPoly, Rational};
pub use report::{Report, ResidualTerm, Status};
pub use series::{free_energy, partition_function, OddIndex, PMonomial, PSeries};
pub use verify::{run_target, Target, VerifyConfig};
pub use wave::OneVarSeries;
