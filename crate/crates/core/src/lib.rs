//! Isotropy groups, polyhedral synthesis and isochrony of rational 1-forms on
//! the Riemann sphere.
//!
//! The geometry is generic over the scalar type (see [`Real`]); the aliases at
//! the crate root fix it to `f64`, which is what the calibrated tolerances of
//! the higher layers assume.

pub mod error;
pub mod groups;
pub mod isochrony;
pub mod isotropy;
pub mod json;
pub mod mobius;
pub mod oneform;
pub mod paper;
pub mod poly;
pub mod portrait;
pub mod polyhedra;
pub mod scalar;
pub mod sphere;
pub mod synthesis;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations of the generic types.
pub type SpherePoint = sphere::SpherePoint<f64>;
pub type MobiusMap = mobius::MobiusMap<f64>;
pub type AntiMobiusMap = mobius::AntiMobiusMap<f64>;
pub type FiniteMobiusGroup = groups::FiniteMobiusGroup<f64>;
pub type MobiusPolyhedron = polyhedra::MobiusPolyhedron<f64>;
pub type RationalOneForm = oneform::RationalOneForm<f64>;
pub type Trajectory = portrait::Trajectory<f64>;

/// Single-precision geometry; the search layers need tolerances near `1e-4`.
pub type SpherePointF32 = sphere::SpherePoint<f32>;
pub type MobiusMapF32 = mobius::MobiusMap<f32>;
pub type RationalOneFormF32 = oneform::RationalOneForm<f32>;

pub use groups::GroupTypeTag;
pub use polyhedra::PolyhedronKind;
