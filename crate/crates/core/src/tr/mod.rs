//! Eynard–Orantin topological recursion by residue calculus for rational
//! curves with `x = z^2 / 2`, a single branch point at `z = 0` and local
//! involution `z -> -z`.

mod curve;
mod engine;

pub use curve::{kernel_coeffs, SpectralCurve};
pub use engine::{compute_omega, extract_u, OmegaCoeffs, OmegaRecord, TrEngine};
