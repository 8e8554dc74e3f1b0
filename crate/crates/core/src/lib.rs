//! Exact operator algebra and numerical certification for non-Hermitian
//! Hamiltonians with real spectra.
//!
//! The symbolic layer ([`weyl`], [`models`], [`dynamics`], [`transform`]) works
//! over exact complex rationals. The numerical layer ([`spectral`]) represents
//! operators in a truncated oscillator basis and checks spectral statements in
//! floating point.

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod models;
pub mod spectral;
pub mod transform;
pub mod weyl;

pub use dynamics::EomReport;
pub use error::{Error, Result};
pub use exact::{ComplexExact, Rational};
pub use models::{Branch, ClosureTarget, ModelKind, ModelSpec, Univariate};
pub use spectral::{BasisConfig, SpectralReport};
pub use transform::{Direction, SimilarityCertificate};
pub use weyl::{Algebra, Canonical, Classification, Monomial, OperatorPoly, ParityConvention, Variable};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
