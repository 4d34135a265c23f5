//! Scalar abstraction for the math kernel.
//!
//! The geometry and quotient modules are generic over `Real` so the same
//! closed forms run in f32 or f64. The render pipeline itself is pinned to
//! f64 through the aliases at the crate root: constraint drift over many
//! transport steps is not acceptable in single precision.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable by the math kernel.
pub trait Real: Float + FloatConst + FromPrimitive + core::fmt::Debug + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for lifting an f64 constant into a generic scalar.
#[inline]
pub fn c<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("constant representable in scalar type")
}

/// Tolerance for manifold and tangency constraint checks.
pub fn eps_manifold<S: Real>() -> S {
    c(1e-9)
}

/// Surface offset for secondary rays and the post-transport nudge.
pub fn eps_step<S: Real>() -> S {
    c(1e-7)
}
