//! Fundamental domains and face pairings for quotient manifolds.
//!
//! A quotient manifold is described by its model geometry, a convex
//! fundamental domain bounded by face half-spaces, and for each face the
//! deck transformation that carries a ray exiting through that face back
//! into the domain. Two concrete spaces are built here: the flat 3-torus
//! (unit cube with opposite faces glued by translations) and the mirrored
//! right-angled hyperbolic dodecahedron (faces are perfect mirrors, pairings
//! are the reflections across the face planes).

use crate::geometry::{inner, GeometryTag, Isometry, ModelPoint, TangentVec};
use crate::real::{c, eps_manifold, Real};
use crate::solve;
use crate::vec4::Vec4;
use thiserror::Error;

/// Geodesic parameter beyond which a missing face exit is treated as a
/// numerical failure; compact domains are exited long before this.
const T_MAX_EXIT: f64 = 1e3;

#[derive(Debug, Error, PartialEq)]
pub enum QuotientError {
    #[error("ray did not exit the fundamental domain within t = {t_max}")]
    NoExit { t_max: f64 },
}

/// One boundary face of the fundamental domain.
///
/// The surface is stored as a half-space functional: for Euclidean domains
/// the plane `<n, x> = offset` with outward unit normal `n`, for hyperbolic
/// domains the totally geodesic plane `<x, n>_L = 0` with outward unit
/// spacelike normal (the offset is baked into the Lorentz normal).
#[derive(Debug, Clone, PartialEq)]
pub struct DomainFace<S> {
    pub id: usize,
    pub normal: Vec4<S>,
    pub offset: S,
    /// Deck transformation carrying this face's exterior back into the domain.
    pub pairing: Isometry<S>,
}

impl<S: Real> DomainFace<S> {
    /// Signed coordinate of `p` against this face: negative inside, zero on
    /// the surface, positive outside.
    pub fn signed_coordinate(&self, tag: GeometryTag, p: &ModelPoint<S>) -> S {
        match tag {
            GeometryTag::Euclidean => p.coords.dot3(&self.normal) - self.offset,
            _ => inner(tag, &p.coords, &self.normal),
        }
    }
}

/// A model geometry together with a fundamental domain and its face pairings.
///
/// An empty face list means the whole model space: rays never exit and never
/// wrap, which is how plain `E^3` comparison scenes are represented.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientManifold<S> {
    pub tag: GeometryTag,
    pub faces: Vec<DomainFace<S>>,
    pub interior_point: ModelPoint<S>,
}

impl<S: Real> QuotientManifold<S> {
    /// Plain Euclidean space: no boundary, no identifications.
    pub fn euclidean_box() -> Self {
        Self {
            tag: GeometryTag::Euclidean,
            faces: Vec::new(),
            interior_point: ModelPoint::euclidean(S::zero(), S::zero(), S::zero()),
        }
    }

    /// The flat 3-torus: the unit cube with opposite faces identified by the
    /// unit translations. Face ids are x-, x+, y-, y+, z-, z+ in that order.
    pub fn flat_torus() -> Self {
        let mut faces = Vec::with_capacity(6);
        for axis in 0..3 {
            for positive in [false, true] {
                let mut n = [S::zero(); 3];
                let mut shift = [S::zero(); 3];
                n[axis] = if positive { S::one() } else { -S::one() };
                // Exiting through x = 1 re-enters at x = 0: translate by -1.
                shift[axis] = if positive { -S::one() } else { S::one() };
                faces.push(DomainFace {
                    id: faces.len(),
                    normal: Vec4::new(n[0], n[1], n[2], S::zero()),
                    offset: if positive { S::one() } else { S::zero() },
                    pairing: Isometry::euclidean_translation(shift),
                });
            }
        }
        let h = c::<S>(0.5);
        Self {
            tag: GeometryTag::Euclidean,
            faces,
            interior_point: ModelPoint::euclidean(h, h, h),
        }
    }

    /// The mirrored right-angled hyperbolic dodecahedron. Every face pairs
    /// with itself through the hyperbolic reflection across its plane.
    pub fn mirrored_dodecahedron() -> Self {
        let scale = right_angled_scale::<S>();
        let faces = dodecahedron_lorentz_normals(scale)
            .into_iter()
            .enumerate()
            .map(|(id, normal)| DomainFace {
                id,
                normal,
                offset: S::zero(),
                pairing: Isometry::hyperbolic_reflection(normal),
            })
            .collect();
        Self {
            tag: GeometryTag::Hyperbolic,
            faces,
            interior_point: ModelPoint::hyperbolic_origin(),
        }
    }

    /// True iff `p` lies in every face half-space; the boundary counts as
    /// inside within the manifold tolerance.
    pub fn contains(&self, p: &ModelPoint<S>) -> bool {
        let tol = eps_manifold::<S>();
        self.faces
            .iter()
            .all(|f| f.signed_coordinate(self.tag, p) <= tol)
    }

    /// Smallest t > 0 at which the geodesic from (p, v) lies on a boundary
    /// face, with ties broken by the lowest face id. `p` must be strictly
    /// inside the domain.
    pub fn domain_exit(
        &self,
        p: &ModelPoint<S>,
        v: &TangentVec<S>,
    ) -> Result<(S, &DomainFace<S>), QuotientError> {
        let t_max = c::<S>(T_MAX_EXIT);
        let mut best: Option<(S, &DomainFace<S>)> = None;
        for face in &self.faces {
            let t = match self.tag {
                GeometryTag::Euclidean => {
                    let denom = v.v.dot3(&face.normal);
                    if denom <= S::zero() {
                        continue; // moving away from or parallel to this face
                    }
                    (face.offset - p.coords.dot3(&face.normal)) / denom
                }
                GeometryTag::Hyperbolic => {
                    let a = inner(self.tag, &p.coords, &face.normal);
                    let b = inner(self.tag, &v.v, &face.normal);
                    match solve::cosh_sinh_root(a, b, S::zero(), S::zero()) {
                        Some(t) => t,
                        None => continue,
                    }
                }
                GeometryTag::Spherical => {
                    let a = inner(self.tag, &p.coords, &face.normal);
                    let b = inner(self.tag, &v.v, &face.normal);
                    match solve::cos_sin_root(a, b, S::zero(), S::zero()) {
                        Some(t) => t,
                        None => continue,
                    }
                }
            };
            if t <= S::zero() || t > t_max {
                continue;
            }
            // Strict < keeps the earlier (lower id) face on exact ties.
            if best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, face));
            }
        }
        best.ok_or(QuotientError::NoExit { t_max: T_MAX_EXIT })
    }

    /// Applies the face pairing to an exit point and direction, landing on
    /// the partner face with the direction carried by the same isometry.
    pub fn transport(
        &self,
        p_exit: &ModelPoint<S>,
        v: &TangentVec<S>,
        face: &DomainFace<S>,
    ) -> (ModelPoint<S>, TangentVec<S>) {
        let p = face.pairing.apply_point(p_exit);
        let mut v2 = face.pairing.apply_tangent(v);
        v2.base = p;
        (p, v2)
    }
}

/// Unit face normals of the regular dodecahedron (the 12 icosahedral
/// directions), paired with the unit-circumradius vertex coordinates.
fn dodecahedron_euclidean() -> (Vec<[f64; 3]>, Vec<[f64; 3]>) {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let inv = 1.0 / phi;

    let mut normals = Vec::with_capacity(12);
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            normals.push([0.0, s1, s2 * phi]);
            normals.push([s1, s2 * phi, 0.0]);
            normals.push([s2 * phi, 0.0, s1]);
        }
    }
    let nn = (1.0 + phi * phi).sqrt();
    for n in &mut normals {
        for x in n.iter_mut() {
            *x /= nn;
        }
    }

    let mut vertices = Vec::with_capacity(20);
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            for s3 in [-1.0, 1.0] {
                vertices.push([s1, s2, s3]);
            }
            vertices.push([0.0, s1 * phi, s2 * inv]);
            vertices.push([s1 * inv, 0.0, s2 * phi]);
            vertices.push([s1 * phi, s2 * inv, 0.0]);
        }
    }
    let vn = 3.0f64.sqrt();
    for v in &mut vertices {
        for x in v.iter_mut() {
            *x /= vn;
        }
    }
    (normals, vertices)
}

/// Ratio of inradius to circumradius of the regular dodecahedron, computed
/// from the constructed solid.
fn dodecahedron_inradius_ratio() -> f64 {
    let (normals, vertices) = dodecahedron_euclidean();
    let u = normals[0];
    vertices
        .iter()
        .map(|v| u[0] * v[0] + u[1] * v[1] + u[2] * v[2])
        .fold(f64::MIN, f64::max)
}

/// Lifts the face planes of the dodecahedron scaled by `s` in the Klein ball
/// to unit spacelike Lorentz normals, oriented outward.
fn dodecahedron_lorentz_normals<S: Real>(s: f64) -> Vec<Vec4<S>> {
    let (normals, _) = dodecahedron_euclidean();
    let d = dodecahedron_inradius_ratio() * s;
    let lift = (1.0 - d * d).sqrt();
    normals
        .iter()
        .map(|u| {
            // Klein plane <u, k> = d lifts to <p, (u, d)>_L = 0.
            Vec4::new(
                c::<S>(u[0] / lift),
                c::<S>(u[1] / lift),
                c::<S>(u[2] / lift),
                c::<S>(d / lift),
            )
        })
        .collect()
}

/// Dihedral angle between two adjacent faces at Klein scale `s`, measured
/// from the lifted unit normals: cos(theta) = -<m_i, m_j>_L.
fn dihedral_angle_at_scale(s: f64) -> f64 {
    let normals = dodecahedron_lorentz_normals::<f64>(s);
    // Adjacent faces have Euclidean normal dot 1/sqrt(5); pick such a pair.
    let (eu, _) = dodecahedron_euclidean();
    let target = 1.0 / 5.0f64.sqrt();
    for i in 0..eu.len() {
        for j in (i + 1)..eu.len() {
            let dot = eu[i][0] * eu[j][0] + eu[i][1] * eu[j][1] + eu[i][2] * eu[j][2];
            if (dot - target).abs() < 1e-9 {
                let m = -normals[i].mink(&normals[j]);
                return m.clamp(-1.0, 1.0).acos();
            }
        }
    }
    unreachable!("regular dodecahedron has adjacent faces")
}

/// Klein-ball circumradius scale at which the hyperbolic dodecahedron's
/// dihedral angle reaches 90 degrees, found by bisection. The angle is
/// monotone decreasing in the scale.
pub fn right_angled_scale<S: Real>() -> f64 {
    let target = std::f64::consts::FRAC_PI_2;
    let mut lo = 1e-6;
    let mut hi = 1.0 - 1e-9;
    debug_assert!(dihedral_angle_at_scale(lo) > target);
    debug_assert!(dihedral_angle_at_scale(hi) < target);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if dihedral_angle_at_scale(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The 30 edges of the right-angled dodecahedron as hyperboloid endpoint
/// pairs, for scenes that draw the cell skeleton.
pub fn dodecahedron_edge_segments<S: Real>() -> Vec<(ModelPoint<S>, ModelPoint<S>)> {
    let s = right_angled_scale::<S>();
    let (_, vertices) = dodecahedron_euclidean();
    let scaled: Vec<[f64; 3]> = vertices
        .iter()
        .map(|v| [v[0] * s, v[1] * s, v[2] * s])
        .collect();

    // Edges join vertex pairs at the minimal pairwise distance.
    let mut min_d2 = f64::MAX;
    for i in 0..scaled.len() {
        for j in (i + 1)..scaled.len() {
            let d2 = dist2(&scaled[i], &scaled[j]);
            if d2 < min_d2 {
                min_d2 = d2;
            }
        }
    }
    let mut edges = Vec::with_capacity(30);
    for i in 0..scaled.len() {
        for j in (i + 1)..scaled.len() {
            if dist2(&scaled[i], &scaled[j]) < min_d2 * (1.0 + 1e-6) {
                edges.push((
                    ModelPoint::from_klein([
                        c::<S>(scaled[i][0]),
                        c::<S>(scaled[i][1]),
                        c::<S>(scaled[i][2]),
                    ]),
                    ModelPoint::from_klein([
                        c::<S>(scaled[j][0]),
                        c::<S>(scaled[j][1]),
                        c::<S>(scaled[j][2]),
                    ]),
                ));
            }
        }
    }
    debug_assert_eq!(edges.len(), 30);
    edges
}

/// Hyperbolic distance from a point to a face's totally geodesic plane.
pub fn distance_to_hyperbolic_plane<S: Real>(p: &ModelPoint<S>, normal: &Vec4<S>) -> S {
    p.coords.mink(normal).abs().asinh()
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// Distance from a point to the nearest face surface of the domain.
pub fn distance_to_nearest_face<S: Real>(q: &QuotientManifold<S>, p: &ModelPoint<S>) -> S {
    let mut best = S::infinity();
    for face in &q.faces {
        let d = match q.tag {
            GeometryTag::Euclidean => face.signed_coordinate(q.tag, p).abs(),
            GeometryTag::Hyperbolic => distance_to_hyperbolic_plane(p, &face.normal),
            GeometryTag::Spherical => {
                // Not used by any built-in domain; fall back to the inner
                // product magnitude which vanishes exactly on the surface.
                inner(q.tag, &p.coords, &face.normal).abs().asin()
            }
        };
        if d < best {
            best = d;
        }
    }
    best
}
