//! Exact computation of Tevelev degrees.
//!
//! Four independent routes compute the same counts:
//!
//! * [`jacobian`]: intersection theory on a projective bundle over the
//!   Jacobian, for low-degree hypersurfaces `X_e` in `P^{r+1}`;
//! * [`closed_forms`]: the closed formulas, used as oracles;
//! * [`schubert`]: Schubert calculus on `Gr(2, d+1)` for `P^1`;
//! * [`quantum`]: the small quantum cohomology ring of `P^r`.
//!
//! [`enumerativity`] decides when the hypersurface counts are enumerative.

pub mod acceptance;
pub mod closed_forms;
pub mod enumerativity;
pub mod error;
pub mod exact;
pub mod jacobian;
pub mod quantum;
pub mod schubert;
pub mod sweep;

pub use error::{Error, Result};
