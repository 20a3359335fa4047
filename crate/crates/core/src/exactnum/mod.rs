//! Exact arithmetic kernels shared by the group modules: residues mod `q`,
//! Laurent polynomials over `Z_q`, fractions in `Z[1/q]`, arbitrary-precision
//! integer vectors and matrices, and exact rational linear solving.
//!
//! Nothing in this module rounds: decisions taken downstream (conjugacy
//! verdicts, lattice membership, divisibility) rest entirely on these types.

mod extint;
mod intmat;
mod intpoly;
mod laurent;
mod qfrac;
mod residue;

pub use extint::ExtInt;
pub use intmat::{vec_sub, IntMat, IntVec, RatVec, SmithForm, Solution};
pub use intpoly::RatPoly;
pub use laurent::LaurentPoly;
pub use qfrac::QFraction;
pub use residue::Residue;
