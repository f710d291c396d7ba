//! Chart-level calculus for iterated tangent and cotangent bundles, double vector
//! bundles, and Poisson structures, built on second-order forward-mode jets.
//!
//! Everything works in explicit chart coordinates over `R^n`: points, tangent
//! vectors, and covectors are plain `Vec<f64>` data wrapped in typed elements, and
//! every derivative under test is computed by pushing jets through a closed family
//! of smooth maps ([`smooth::SmoothMap`]), with central differences available as an
//! independent oracle.

pub mod bundles;
pub mod canonical;
pub mod dvb;
pub mod error;
pub mod jets;
pub mod linalg;
pub mod poisson;
pub mod smooth;

pub use error::{GeomError, Result};
