//! Exact formal deformation quantization on `T*Tⁿ` for `n ∈ {1, 2}`.
//!
//! Coefficients live in `ℚ(i)[τ]` with `τ` standing for `2πi`; symbols are
//! trigonometric in `q` and polynomial in `q` and `p`; everything is
//! truncated at a fixed order in the formal parameter `λ`.

pub mod cech;
pub mod error;
pub mod explog;
pub mod hermitian;
pub mod opseries;
pub mod random;
pub mod report;
pub mod reps;
pub mod scalars;
pub mod series;
pub mod starprod;
pub mod symbols;

pub use error::{Error, Result};
pub use scalars::{GaussianRational, Rational, TauScalar};
pub use series::{FormalSeries, Ring};
pub use starprod::{StarProductSpec, SymTensorField, SymbolSeries, TruncationContext};
pub use symbols::{MatrixSymbol, Symbol, WaveFunction};
