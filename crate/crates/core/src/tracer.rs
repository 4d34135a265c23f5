//! Geodesic ray casting through the quotient manifold.
//!
//! A ray is traced segment by segment: objects are intersected within the
//! current fundamental-domain copy, and when the exit face is reached first
//! the ray is carried back into the domain by that face's pairing. The
//! number of crossings is bounded by `maxlevel`; the crossing count of a hit
//! is its transport level (how many domain copies deep the hit is seen).

use crate::geometry::{distance, geodesic, inner, log_map, GeometryTag, ModelPoint, TangentVec};
use crate::real::eps_step;
use crate::scene::{Scene, Shape};
use crate::solve;
use crate::{Point, Scalar, Tangent};

/// Geodesic ray: origin point and unit tangent direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Point,
    pub dir: Tangent,
}

impl Ray {
    pub fn tag(&self) -> GeometryTag {
        self.origin.tag
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitRecord {
    /// Index into the scene's object list.
    pub object: usize,
    /// Cumulative geodesic parameter from the ray origin.
    pub t: Scalar,
    pub point: Point,
    /// Unit tangent of the ray at the hit, pointing along the ray.
    pub tangent: Tangent,
    /// Outward unit surface normal at the hit.
    pub normal: Tangent,
    /// Domain crossings between the ray origin and the hit.
    pub transport_level: u32,
}

/// Open-space segment bound used when the manifold has no boundary faces.
const T_MAX_OPEN: Scalar = 1e3;

/// Smallest admissible intersection parameter: closed-form roots below this
/// are treated as the surface the ray just left.
fn t_min() -> Scalar {
    eps_step::<Scalar>()
}

/// Closed-form geodesic-sphere intersection, smallest root > eps or miss.
///
/// Solves distance(center, r(t)) = radius per geometry: a quadratic for E^3,
/// `cosh(t)<p,c> + sinh(t)<v,c> = -cosh R` for H^3 and
/// `cos(t)<p,c> + sin(t)<v,c> = cos R` for S^3.
pub fn intersect_sphere(
    tag: GeometryTag,
    ray: &Ray,
    center: &Point,
    radius: Scalar,
) -> Option<Scalar> {
    match tag {
        GeometryTag::Euclidean => {
            let oc = ray.origin.coords - center.coords;
            let b = ray.dir.v.dot3(&oc);
            let c = oc.dot3(&oc) - radius * radius;
            solve::quadratic_root_monic(b, c, t_min())
        }
        GeometryTag::Hyperbolic => {
            let a = ray.origin.coords.mink(&center.coords);
            let b = ray.dir.v.mink(&center.coords);
            solve::cosh_sinh_root(a, b, -radius.cosh(), t_min())
        }
        GeometryTag::Spherical => {
            let a = ray.origin.coords.dot4(&center.coords);
            let b = ray.dir.v.dot4(&center.coords);
            solve::cos_sin_root(a, b, radius.cos(), t_min())
        }
    }
}

/// Ray-quad intersection (Euclidean scenes). Quads are two-sided.
fn intersect_quad(
    ray: &Ray,
    origin: &Point,
    edge_u: &crate::Vec4f,
    edge_v: &crate::Vec4f,
) -> Option<Scalar> {
    let n = edge_u.cross3(edge_v);
    let denom = ray.dir.v.dot3(&n);
    if denom.abs() < 1e-14 {
        return None;
    }
    let t = (origin.coords - ray.origin.coords).dot3(&n) / denom;
    if t < t_min() {
        return None;
    }
    let hit = ray.origin.coords + ray.dir.v.scale(t) - origin.coords;
    let uu = edge_u.dot3(edge_u);
    let vv = edge_v.dot3(edge_v);
    let a = hit.dot3(edge_u) / uu;
    let b = hit.dot3(edge_v) / vv;
    if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
        Some(t)
    } else {
        None
    }
}

fn intersect_shape(tag: GeometryTag, ray: &Ray, shape: &Shape) -> Option<Scalar> {
    match shape {
        Shape::Sphere { center, radius } => intersect_sphere(tag, ray, center, *radius),
        Shape::Quad {
            origin,
            edge_u,
            edge_v,
        } => intersect_quad(ray, origin, edge_u, edge_v),
    }
}

/// Outward unit normal of a shape at a surface point reached by `ray_dir`.
fn surface_normal(tag: GeometryTag, shape: &Shape, point: &Point, ray_dir: &Tangent) -> Tangent {
    match shape {
        Shape::Sphere { center, radius } => {
            // Tangent at the surface point of the geodesic from the center:
            // (cosh(R) q - c) / sinh(R) and its cos/sin, (q - c)/R analogues.
            let v =
                match tag {
                    GeometryTag::Euclidean => (point.coords - center.coords).scale(radius.recip()),
                    GeometryTag::Hyperbolic => (point.coords.scale(radius.cosh()) - center.coords)
                        .scale(radius.sinh().recip()),
                    GeometryTag::Spherical => (point.coords.scale(radius.cos()) - center.coords)
                        .scale(radius.sin().recip()),
                };
            TangentVec::new(*point, v).reproject_unit()
        }
        Shape::Quad { edge_u, edge_v, .. } => {
            let n = edge_u.cross3(edge_v);
            let mut t = TangentVec::new(*point, n).reproject_unit();
            // Two-sided: face the incoming ray.
            if inner(tag, &t.v, &ray_dir.v) > 0.0 {
                t.v = -t.v;
            }
            t
        }
    }
}

/// Traces a geodesic from (p, v) through the scene, transporting across
/// fundamental-domain faces until an object is hit or `maxlevel` crossings
/// are spent.
pub fn trace_ray(scene: &Scene, p: &Point, v: &Tangent, maxlevel: u32) -> Option<HitRecord> {
    let q = &scene.manifold;
    let tag = scene.tag();
    let mut origin = *p;
    let mut dir = *v;
    let mut consumed: Scalar = 0.0;

    for level in 0..=maxlevel {
        let exit = if q.faces.is_empty() {
            None
        } else {
            q.domain_exit(&origin, &dir).ok()
        };
        let segment_end = exit.map_or(T_MAX_OPEN, |(t, _)| t);

        let ray = Ray { origin, dir };
        let mut best: Option<(Scalar, usize)> = None;
        for (index, object) in scene.objects.iter().enumerate() {
            if let Some(t) = intersect_shape(tag, &ray, &object.shape) {
                if t <= segment_end && best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, index));
                }
            }
        }

        if let Some((t_local, object)) = best {
            let (point, tangent) = geodesic(tag, &origin, &dir, t_local);
            let normal = surface_normal(tag, &scene.objects[object].shape, &point, &tangent);
            return Some(HitRecord {
                object,
                t: consumed + t_local,
                point,
                tangent,
                normal,
                transport_level: level,
            });
        }

        let (t_exit, face) = exit?;
        if level == maxlevel {
            return None;
        }
        let (exit_point, exit_dir) = geodesic(tag, &origin, &dir, t_exit);
        let (new_point, new_dir) = q.transport(&exit_point, &exit_dir, face);
        // Advance past the face along the new direction so the next segment
        // cannot re-intersect it at t = 0; the step stays on the geodesic and
        // is part of the cumulative parameter.
        let nudge = eps_step::<Scalar>();
        let (new_point, new_dir) = geodesic(tag, &new_point, &new_dir, nudge);
        origin = new_point;
        dir = new_dir;
        consumed += t_exit + nudge;
    }
    None
}

/// Direction, geodesic distance, and number of face crossings of the light
/// connection used for shading: the nearest translated copy for the torus,
/// the direct in-domain geodesic otherwise (the convex domain contains it).
pub fn light_connection(scene: &Scene, p: &Point, light: &Point) -> Option<(Tangent, Scalar)> {
    match scene.tag() {
        GeometryTag::Euclidean if !scene.manifold.faces.is_empty() => {
            // Minimal-offset copy among the 27 neighbour translates.
            let mut best: Option<(Scalar, Point)> = None;
            for dx in [-1.0, 0.0, 1.0] {
                for dy in [-1.0, 0.0, 1.0] {
                    for dz in [-1.0, 0.0, 1.0] {
                        let copy = ModelPoint::euclidean(
                            light.coords.x + dx,
                            light.coords.y + dy,
                            light.coords.z + dz,
                        );
                        let d = distance(GeometryTag::Euclidean, p, &copy);
                        if best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, copy));
                        }
                    }
                }
            }
            let (_, copy) = best?;
            log_map(GeometryTag::Euclidean, p, &copy)
        }
        tag => log_map(tag, p, light),
    }
}

/// True iff an object blocks the geodesic from `p` toward the light before
/// the light is reached. `p` is expected to be offset off its surface.
pub fn occluded(scene: &Scene, p: &Point, light: &Point, maxlevel: u32) -> bool {
    let Some((dir, dist)) = light_connection(scene, p, light) else {
        return false;
    };
    match trace_ray(scene, p, &dir, maxlevel) {
        Some(hit) => hit.t < dist - eps_step::<Scalar>(),
        None => false,
    }
}
