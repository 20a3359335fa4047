//! Exact-arithmetic conjugacy machinery for three families of solvable groups:
//!
//! * lamplighter groups `Z_q wr Z`, presented as affine matrices over
//!   `Z_q[t^-1, t]` and metrized through the Diestel-Leader graph `DL_2(q)`;
//! * solvable Baumslag-Solitar groups `BS(1, q)`, presented as affine matrices
//!   with translation part in `Z[1/q]` and metrized through treebolic space
//!   estimates;
//! * semidirect products `Z^n x| Z^k` with commuting semisimple unimodular
//!   integer matrices acting on the `Z^n` factor.
//!
//! All conjugacy decisions are exact: floating point is used only to propose
//! candidate conjugators, and every accepted witness is re-verified with
//! integer or residue arithmetic.  Brute-force breadth-first oracles
//! ([`oracle`]) certify the closed word-length formulas and the decision
//! procedures at desk scale, and [`audit`] runs seeded randomized sweeps of
//! the conjugator-length bounds.

pub mod audit;
pub mod bs;
pub mod error;
pub mod exactnum;
pub mod group;
pub mod lamplighter;
pub mod oracle;
pub mod outcome;
pub mod polycyclic;
pub mod rng;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
