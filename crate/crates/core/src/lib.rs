//! Exact computer algebra for the quantum affine superalgebra
//! `U_q(gl(1|1)^)` in its Drinfeld presentation.
//!
//! Layers, bottom up:
//!
//! - [`scalars`]: the field Q(q) with canonical representatives.
//! - [`series`]: truncated Laurent series in the spectral variable `z`.
//! - [`superalg`]: PBW monomials, the normal-ordering rewrite engine and the
//!   Koszul-signed tensor square.
//! - [`hopf`]: coproduct, counit, graded and Drinfeld coproducts, Gauss currents.
//! - [`pairing`]: the Hopf pairing of the Borel halves, closed form and oracle.
//! - [`repr`]: finite-dimensional representations, transfer operators.
//! - [`rmatrix`]: the truncated universal R-matrix and its verification battery.
//! - [`dsl`], [`report`], [`suites`]: expression language, JSON reports and the
//!   verification-suite runner used by the `qgl11` binary.

pub mod dsl;
pub mod error;
pub mod hopf;
pub mod matrix;
pub mod pairing;
pub mod report;
pub mod repr;
pub mod rmatrix;
pub mod scalars;
pub mod series;
pub mod suites;
pub mod superalg;

pub use error::{Error, Result};
pub use scalars::{qbracket, QScalar, Rational};
pub use series::LaurentSeries;
pub use superalg::{Element, Letter, Monomial, TensorElement};
