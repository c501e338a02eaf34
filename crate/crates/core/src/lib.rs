//! Thickening finite 2-complexes into orientable pseudomanifolds with
//! boundary, and closing those up with right-angled reflection groups.

pub mod complex;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod homology;
pub mod io;
pub mod pipeline;
pub mod pseudomanifold;
pub mod reflection;
pub mod scalar;
pub mod thicken;

pub use complex::{Complex, Simplex, Vertex};
pub use error::{Error, Result};
pub use geometry::{GeometricMap, Point};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type RationalPoint = Point<Rational>;
pub type RationalMap = GeometricMap<Rational>;
