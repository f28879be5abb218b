//! Intrinsic volumes of ellipsoids.
//!
//! The main entry points compute `V_0 .. V_d` of an axis-aligned ellipsoid
//! from its semiaxes by one-dimensional elliptic integrals ([`intrinsic`]),
//! the expected volumes of random simplices in ellipsoids and of Gaussian
//! simplices ([`randsimplex`]), and a set of Monte-Carlo oracles that check
//! the integral formulas through independent routes ([`verify`]).
//!
//! ```
//! use ivol::{intrinsic, Ellipsoid, QuadratureConfig};
//!
//! let disk = Ellipsoid::new(vec![1.0, 1.0]).unwrap();
//! let v1 = intrinsic::vk_quadrature(&disk, 1, &QuadratureConfig::default()).unwrap();
//! assert!((v1.value - std::f64::consts::PI).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used throughout to reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod geometry;
pub mod intrinsic;
pub mod montecarlo;
pub mod quad;
pub mod randsimplex;
pub mod sampling;
pub mod special;
pub mod sympoly;
pub mod verify;

pub use error::{Error, Result};
pub use estimate::{ErrorKind, ScalarEstimate};
pub use geometry::{Ellipsoid, SpectrumPSD};
pub use intrinsic::{Backend, IntrinsicVolumeReport};
pub use quad::QuadratureConfig;

/// Crate version, echoed in command-line output records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
