//! Fredholm theory of Wiener-Hopf operators `W_k g = 1_{X_+}(k ∗ g)` on
//! linearly ordered groups `X = Z^r`.
//!
//! Numeric code is generic over [`Real`] (`f32`/`f64`); the aliases below
//! fix `f64`, which is what the CLI and the acceptance suite use. Order
//! decisions on the group are exact.

pub mod classifier;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod symbol;
pub mod wiener_hopf;
pub mod winding;

pub use error::{Result, WhError};
pub use group::{Count, GroupElement, OrderedGroup, QuadWeight};
pub use scalar::{Real, C};

pub type Complex64 = C<f64>;
pub type TrigPoly = symbol::TrigPolynomial<f64>;
pub type Laurent = oracle::LaurentPolynomial<f64>;
pub type Rational = oracle::RationalSymbol<f64>;
pub type Matrix = linalg::CMatrix<f64>;
pub type Vector = wiener_hopf::PositiveVector<f64>;
