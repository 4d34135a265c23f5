//! Geodesic path tracer for flat and hyperbolic quotient 3-manifolds.
//!
//! Rays are geodesics of a model geometry (E^3, H^3 or S^3); scenes live in
//! a quotient of that geometry by a discrete isometry group, described by a
//! convex fundamental domain with face pairings. When a ray exits the domain
//! it is carried back in by the pairing, which is how the flat 3-torus wraps
//! and how the mirrored right-angled dodecahedron tessellates hyperbolic
//! space. Shading replaces every Euclidean dot product with the metric of
//! the tangent space at the shaded point.
//!
//! The math kernel is generic over the scalar type; the render pipeline uses
//! the f64 aliases below.

pub mod camera;
pub mod color;
pub mod geometry;
pub mod integrator;
pub mod ppm;
pub mod quotient;
pub mod real;
pub mod render;
pub mod scene;
pub mod solve;
pub mod tracer;
pub mod vec4;

/// Scalar precision of the render pipeline.
pub type Scalar = f64;

pub type Vec4f = vec4::Vec4<Scalar>;
pub type Mat4f = vec4::Mat4<Scalar>;
pub type Point = geometry::ModelPoint<Scalar>;
pub type Tangent = geometry::TangentVec<Scalar>;
pub type Motion = geometry::Isometry<Scalar>;
pub type Manifold = quotient::QuotientManifold<Scalar>;

pub use color::Rgb;
pub use geometry::GeometryTag;
