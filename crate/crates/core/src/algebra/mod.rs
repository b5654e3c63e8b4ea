//! Exact coefficients, truncated q-series and small dense linear algebra.

pub mod coeff;
pub mod linalg;
pub mod series;

pub use coeff::{cyclo_mul, int, rat, rpow, ExactCoeff};
pub use series::{QSeries, Twist, DEFAULT_ORDER};
