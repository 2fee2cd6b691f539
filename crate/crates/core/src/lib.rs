//! Verification engine for Chern-Simons theory with Wilson lines in the
//! BV-BFV formalism.
//!
//! The crate is organised bottom-up:
//!
//! * [`lie`]: quadratic Lie algebras in an orthonormal basis and their
//!   exact matrix representations.
//! * [`grassmann`]: exact arithmetic in bigraded-commutative polynomial
//!   algebras, derivations and constant graded Poisson brackets.
//! * [`variational`]: the local field calculus (d, δ), the BV models of
//!   3D and 1D Chern-Simons theory with Wilson lines, master equation
//!   checks and the induced boundary BFV data.
//! * [`orbit`]: floating-point checks of coadjoint-orbit geometry and
//!   Wilson holonomies.
//! * [`weil`]: Clifford algebra, spinors and the cubic Dirac operator.
//! * [`bfv_states`]: boundary state spaces, quantised BFV charges and
//!   their cohomology.
//! * [`report`]: versioned JSON reports and the check suites driven by
//!   the command-line tool.

pub mod bfv_states;
pub mod error;
pub mod grassmann;
pub mod lie;
pub mod matrix;
pub mod orbit;
pub mod report;
pub mod scalar;
pub mod variational;
pub mod weil;

pub use error::{Error, Result};
