//! Exact q-series arithmetic for finitized Rogers-Ramanujan type identities of
//! the unitary minimal models `M(p, p+1)`.
//!
//! Fermionic sums over the `(n, m)` system and bosonic sums of q-trinomials
//! are both computed as exact Laurent polynomials in `q^{1/4}`, so every
//! identity check is a coefficient-wise comparison with no floating point.

pub mod bosonic;
pub mod characters;
pub mod error;
pub mod fermionic;
mod memo;
pub mod nmsystem;
pub mod qgauss;
pub mod qlaurent;
pub mod report;

pub use error::{Error, Result};
pub use qlaurent::{Exponent, QLaurent, QSeries};
pub use report::{Instance, Params, Status, VerifyReport};
