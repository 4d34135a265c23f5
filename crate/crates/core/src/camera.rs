//! Pinhole camera over the unit sphere of directions at the eye point.
//!
//! The image is a window on the sphere of unit tangents at the camera
//! origin: each pixel maps to a direction in the orthonormal tangent frame
//! (right, up, forward), so the same mapping serves every model geometry.

use crate::geometry::{geodesic, inner, log_map, GeometryTag, ModelPoint, TangentVec};
use crate::tracer::Ray;
use crate::vec4::Vec4;
use crate::{Point, Scalar, Tangent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub origin: Point,
    pub right: Tangent,
    pub up: Tangent,
    pub forward: Tangent,
    /// Vertical field of view in radians, in (0, pi).
    pub vfov: Scalar,
}

impl Camera {
    /// Builds the frame from a target point and an ambient up hint. The
    /// forward axis is the initial tangent of the geodesic toward `target`.
    pub fn look_at(
        origin: Point,
        target: &Point,
        up_hint: [Scalar; 3],
        vfov: Scalar,
    ) -> Option<Camera> {
        let tag = origin.tag;
        let (forward, _) = log_map(tag, &origin, target)?;
        let hint =
            TangentVec::new(origin, Vec4::new(up_hint[0], up_hint[1], up_hint[2], 0.0)).reproject();
        // Up = hint orthogonalized against forward under the metric.
        let mut up = hint;
        up.v = up.v - forward.v.scale(inner(tag, &up.v, &forward.v));
        if up.metric(&up) < 1e-12 {
            return None; // hint parallel to the view direction
        }
        let up = up.reproject_unit();
        let right = tangent_cross(&up, &forward);
        Some(Camera {
            origin,
            right,
            up,
            forward,
            vfov,
        })
    }

    pub fn from_frame(
        origin: Point,
        right: Tangent,
        up: Tangent,
        forward: Tangent,
        vfov: Scalar,
    ) -> Camera {
        Camera {
            origin,
            right,
            up,
            forward,
            vfov,
        }
    }

    /// Largest deviation of the frame from g-orthonormality at the origin.
    pub fn frame_error(&self) -> Scalar {
        let axes = [&self.right, &self.up, &self.forward];
        let mut worst: Scalar = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((axes[i].metric(axes[j]) - expect).abs());
            }
        }
        worst
    }
}

/// Cross product of two tangent vectors within the tangent space: the unique
/// unit tangent g-orthogonal to both, oriented so that (a x b, a, b) is
/// positively oriented. Computed as the 4D generalized cross product of
/// (base, a, b) pulled back through the metric.
pub fn tangent_cross(a: &Tangent, b: &Tangent) -> Tangent {
    let base = a.base;
    match base.tag {
        GeometryTag::Euclidean => TangentVec::new(base, a.v.cross3(&b.v)).reproject_unit(),
        _ => {
            let c = cross4(&base.coords, &a.v, &b.v);
            let c = match base.tag {
                // Lower the index: Lorentz-orthogonality needs J c.
                GeometryTag::Hyperbolic => Vec4::new(c.x, c.y, c.z, -c.w),
                _ => c,
            };
            let mut t = TangentVec::new(base, c).reproject_unit();
            // Fix the orientation against the Euclidean convention at the
            // frame's base: (a x b) . (a x b)_euclidean > 0.
            if orientation_sign(&base.coords, &a.v, &b.v, &t.v) < 0.0 {
                t.v = -t.v;
            }
            t
        }
    }
}

/// Generalized cross product in R^4: c with c . x = det[u; v; w; x].
fn cross4(u: &Vec4<Scalar>, v: &Vec4<Scalar>, w: &Vec4<Scalar>) -> Vec4<Scalar> {
    let m = |c0: usize, c1: usize, c2: usize| -> Scalar {
        u[c0] * (v[c1] * w[c2] - v[c2] * w[c1]) - u[c1] * (v[c0] * w[c2] - v[c2] * w[c0])
            + u[c2] * (v[c0] * w[c1] - v[c1] * w[c0])
    };
    Vec4::new(m(1, 2, 3), -m(0, 2, 3), m(0, 1, 3), -m(0, 1, 2))
}

fn orientation_sign(
    p: &Vec4<Scalar>,
    a: &Vec4<Scalar>,
    b: &Vec4<Scalar>,
    c: &Vec4<Scalar>,
) -> Scalar {
    // det[p; c; a; b]: positive when (c, a, b) is right-handed in the
    // tangent space with outward reference p.
    let d = cross4(p, c, a);
    d.dot4(b).signum()
}

/// Camera ray through pixel (i, j) with sub-pixel jitter (u, v) in [0,1)^2.
///
/// Standard pinhole mapping: screen offsets scale with tan(vfov/2) and the
/// aspect ratio, the direction is normalized in the tangent space.
pub fn generate_camera_ray(
    camera: &Camera,
    width: u32,
    height: u32,
    i: u32,
    j: u32,
    u: Scalar,
    v: Scalar,
) -> Ray {
    let half_h = (camera.vfov * 0.5).tan();
    let aspect = width as Scalar / height as Scalar;
    let sx = (2.0 * ((i as Scalar + u) / width as Scalar) - 1.0) * half_h * aspect;
    let sy = (1.0 - 2.0 * ((j as Scalar + v) / height as Scalar)) * half_h;
    let dir = camera.forward.v + camera.right.v.scale(sx) + camera.up.v.scale(sy);
    let dir = TangentVec::new(camera.origin, dir).reproject_unit();
    Ray {
        origin: camera.origin,
        dir,
    }
}

/// Advances a point by `t` along a tangent direction, returning the new
/// point (a shorthand over the geodesic map).
pub fn offset_point(p: &Point, dir: &Tangent, t: Scalar) -> Point {
    geodesic(p.tag, p, dir, t).0
}

/// Convenience for tests and validation: a ModelPoint from authored chart
/// coordinates (plain xyz for E^3, Klein ball for H^3).
pub fn lift_point(tag: GeometryTag, xyz: [Scalar; 3]) -> ModelPoint<Scalar> {
    match tag {
        GeometryTag::Euclidean => ModelPoint::euclidean(xyz[0], xyz[1], xyz[2]),
        GeometryTag::Hyperbolic => ModelPoint::from_klein(xyz),
        GeometryTag::Spherical => {
            let w = (1.0 - (xyz[0] * xyz[0] + xyz[1] * xyz[1] + xyz[2] * xyz[2])).sqrt();
            ModelPoint::from_raw(tag, Vec4::new(xyz[0], xyz[1], xyz[2], w)).reproject()
        }
    }
}
