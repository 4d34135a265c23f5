//! Model-geometry primitives for the three classical spaces.
//!
//! Points and tangent vectors of E^3, H^3 and S^3 share one ambient 4-vector
//! layout. The hyperbolic space is the hyperboloid sheet `<p,p> = -1, w > 0`
//! in Lorentzian R^4, the spherical space is the unit 3-sphere in Euclidean
//! R^4, and Euclidean points keep `w = 1` so a single 4x4 matrix type can
//! represent isometries of all three geometries.
//!
//! Geodesics have closed forms per geometry:
//! Euclidean `p + t v`, hyperbolic `cosh(t) p + sinh(t) v`, spherical
//! `cos(t) p + sin(t) v`, always with `v` a unit tangent at `p`. Every
//! evaluation re-projects its result onto the manifold and the tangent space;
//! floating-point drift compounds over many transport steps otherwise.

use crate::real::{c, eps_manifold, Real};
use crate::vec4::{Mat4, Vec4};

/// The three model geometries. Every point, tangent vector and ray carries
/// exactly one tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometryTag {
    Euclidean,
    Hyperbolic,
    Spherical,
}

/// Inner product selected by the geometry tag.
///
/// Euclidean uses the 3-component dot (the w slot is homogeneous bookkeeping),
/// spherical the full 4-component dot, hyperbolic the Lorentzian product.
#[inline]
pub fn inner<S: Real>(tag: GeometryTag, u: &Vec4<S>, v: &Vec4<S>) -> S {
    match tag {
        GeometryTag::Euclidean => u.dot3(v),
        GeometryTag::Spherical => u.dot4(v),
        GeometryTag::Hyperbolic => u.mink(v),
    }
}

/// A point on the model manifold of its tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint<S> {
    pub coords: Vec4<S>,
    pub tag: GeometryTag,
}

/// A vector in the tangent space at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVec<S> {
    pub v: Vec4<S>,
    pub base: ModelPoint<S>,
}

impl<S: Real> ModelPoint<S> {
    /// Wraps raw coordinates without projection. The caller asserts the
    /// manifold constraint holds.
    pub fn from_raw(tag: GeometryTag, coords: Vec4<S>) -> Self {
        Self { coords, tag }
    }

    /// A Euclidean point in homogeneous form (w = 1).
    pub fn euclidean(x: S, y: S, z: S) -> Self {
        Self {
            coords: Vec4::new(x, y, z, S::one()),
            tag: GeometryTag::Euclidean,
        }
    }

    /// The apex of the hyperboloid, origin of H^3.
    pub fn hyperbolic_origin() -> Self {
        Self {
            coords: Vec4::new(S::zero(), S::zero(), S::zero(), S::one()),
            tag: GeometryTag::Hyperbolic,
        }
    }

    /// Lifts a Klein-ball point (|k| < 1) onto the hyperboloid:
    /// p = (k, 1) / sqrt(1 - |k|^2).
    pub fn from_klein(k: [S; 3]) -> Self {
        let n2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let s = (S::one() - n2).sqrt().recip();
        Self {
            coords: Vec4::new(k[0] * s, k[1] * s, k[2] * s, s),
            tag: GeometryTag::Hyperbolic,
        }
    }

    /// Signed residual of the manifold constraint; zero on the manifold.
    ///
    /// The residual is scaled by the squared coordinate magnitude (floored at
    /// one): far out on the hyperboloid the raw residual quantizes at
    /// |p|^2 * eps, so only the relative statement is meaningful in floats.
    pub fn constraint_error(&self) -> S {
        let scale = self.coords.dot4(&self.coords).max(S::one());
        match self.tag {
            GeometryTag::Euclidean => self.coords.w - S::one(),
            GeometryTag::Hyperbolic => {
                (self.coords.mink_compensated(&self.coords) + S::one()) / scale
            }
            GeometryTag::Spherical => self.coords.dot4(&self.coords) - S::one(),
        }
    }

    /// Rescales the coordinates so the manifold constraint holds exactly.
    pub fn reproject(mut self) -> Self {
        match self.tag {
            GeometryTag::Euclidean => {
                self.coords.w = S::one();
            }
            GeometryTag::Hyperbolic => {
                let n = (-self.coords.mink_compensated(&self.coords)).sqrt();
                self.coords = self.coords.scale(n.recip());
            }
            GeometryTag::Spherical => {
                let n = self.coords.dot4(&self.coords).sqrt();
                self.coords = self.coords.scale(n.recip());
            }
        }
        self
    }
}

impl<S: Real> TangentVec<S> {
    pub fn new(base: ModelPoint<S>, v: Vec4<S>) -> Self {
        Self { v, base }
    }

    /// A Euclidean direction vector (w = 0) at `base`.
    pub fn euclidean_dir(base: ModelPoint<S>, x: S, y: S, z: S) -> Self {
        Self {
            v: Vec4::new(x, y, z, S::zero()),
            base,
        }
    }

    #[inline]
    pub fn tag(&self) -> GeometryTag {
        self.base.tag
    }

    /// The Riemannian metric at the base point applied to two tangents.
    #[inline]
    pub fn metric(&self, other: &TangentVec<S>) -> S {
        inner(self.tag(), &self.v, &other.v)
    }

    #[inline]
    pub fn norm(&self) -> S {
        self.metric(self).sqrt()
    }

    /// Residual of the tangency constraint `<base, v> = 0` (always zero for
    /// Euclidean, where w of a direction is kept at 0), scaled like
    /// [`ModelPoint::constraint_error`].
    pub fn tangency_error(&self) -> S {
        let scale = (self.base.coords.dot4(&self.base.coords).sqrt() * self.v.dot4(&self.v).sqrt())
            .max(S::one());
        match self.tag() {
            GeometryTag::Euclidean => self.v.w,
            GeometryTag::Hyperbolic => self.base.coords.mink_compensated(&self.v) / scale,
            GeometryTag::Spherical => self.base.coords.dot4(&self.v) / scale,
        }
    }

    /// Removes the component along the base point (ambient Gram-Schmidt in
    /// the tag's product). The metric is positive definite on the result.
    pub fn reproject(mut self) -> Self {
        match self.tag() {
            GeometryTag::Euclidean => {
                self.v.w = S::zero();
            }
            GeometryTag::Hyperbolic => {
                // <p,p> = -1, so the projection adds <v,p> p.
                let a = self.v.mink(&self.base.coords);
                self.v = self.v + self.base.coords.scale(a);
            }
            GeometryTag::Spherical => {
                let a = self.v.dot4(&self.base.coords);
                self.v = self.v - self.base.coords.scale(a);
            }
        }
        self
    }

    /// [`Self::reproject`] followed by rescaling to unit metric norm.
    pub fn reproject_unit(mut self) -> Self {
        self = self.reproject();
        let n = self.norm();
        self.v = self.v.scale(n.recip());
        self
    }

    /// Rebases the vector at a nearby point, re-orthogonalizing against the
    /// new base. Only valid when `base` is within O(eps) of the old base.
    pub fn rebased_at(&self, base: ModelPoint<S>) -> Self {
        TangentVec { v: self.v, base }.reproject_unit()
    }
}

/// Geodesic distance between two points of the same geometry.
///
/// Evaluated in forms that stay well-conditioned near coincident and
/// antipodal points: acosh(-<p,q>) loses half the significant digits as its
/// argument approaches 1, so H^3 uses the equivalent chordal identity
/// <p-q, p-q>_L = 4 sinh^2(d/2) and S^3 uses atan2 of the sine and cosine
/// parts. Arguments are clamped to their valid domains; round-off regularly
/// lands them a few ulps outside.
pub fn distance<S: Real>(tag: GeometryTag, p: &ModelPoint<S>, q: &ModelPoint<S>) -> S {
    let two = c::<S>(2.0);
    match tag {
        GeometryTag::Euclidean => {
            let d = p.coords - q.coords;
            d.dot3(&d).sqrt()
        }
        GeometryTag::Hyperbolic => {
            let d = p.coords - q.coords;
            let chord2 = d.mink(&d).max(S::zero());
            two * (chord2.sqrt() / two).asinh()
        }
        GeometryTag::Spherical => {
            let cos_d = p.coords.dot4(&q.coords);
            let perp = q.coords - p.coords.scale(cos_d);
            let sin_d = perp.dot4(&perp).max(S::zero()).sqrt();
            sin_d.atan2(cos_d)
        }
    }
}

/// Position and unit tangent of the geodesic through (p, v) at parameter t.
pub fn geodesic<S: Real>(
    tag: GeometryTag,
    p: &ModelPoint<S>,
    v: &TangentVec<S>,
    t: S,
) -> (ModelPoint<S>, TangentVec<S>) {
    debug_assert_eq!(tag, p.tag);
    let (point, dir) = match tag {
        GeometryTag::Euclidean => (p.coords + v.v.scale(t), v.v),
        GeometryTag::Hyperbolic => {
            // cosh(t) p + sinh(t) v regrouped through one shared exp(t):
            // rounding cosh and sinh independently drifts the point along the
            // geodesic by O(e^{2t} eps), while a shared exponential keeps the
            // parameter exact to one ulp at any t.
            let half = c::<S>(0.5);
            let et = t.exp();
            let grow = (p.coords + v.v).scale(half * et);
            let decay = (p.coords - v.v).scale(half / et);
            (grow + decay, grow - decay)
        }
        GeometryTag::Spherical => {
            let (cs, sn) = (t.cos(), t.sin());
            (
                p.coords.scale(cs) + v.v.scale(sn),
                -p.coords.scale(sn) + v.v.scale(cs),
            )
        }
    };
    let point = ModelPoint::from_raw(tag, point).reproject();
    let tangent = TangentVec::new(point, dir).reproject_unit();
    (point, tangent)
}

/// Perfect reflection of `w_i` about the unit normal `n` in the tangent space
/// at their shared base: `-w_i + 2 g(w_i, n) n`.
pub fn reflect_tangent<S: Real>(w_i: &TangentVec<S>, n: &TangentVec<S>) -> TangentVec<S> {
    debug_assert!(
        distance(w_i.tag(), &w_i.base, &n.base) < c(1e-6),
        "reflect_tangent requires a shared base point"
    );
    let two = c::<S>(2.0);
    let g = w_i.metric(n);
    TangentVec::new(n.base, -w_i.v + n.v.scale(two * g)).reproject_unit()
}

/// Klein-ball coordinates of a hyperboloid point: (x/w, y/w, z/w).
pub fn to_klein<S: Real>(p: &ModelPoint<S>) -> [S; 3] {
    debug_assert_eq!(p.tag, GeometryTag::Hyperbolic);
    let w = p.coords.w;
    [p.coords.x / w, p.coords.y / w, p.coords.z / w]
}

/// Initial unit tangent at `p` of the geodesic running to `q`, together with
/// the geodesic distance. Returns `None` when the points coincide.
pub fn log_map<S: Real>(
    tag: GeometryTag,
    p: &ModelPoint<S>,
    q: &ModelPoint<S>,
) -> Option<(TangentVec<S>, S)> {
    let d = distance(tag, p, q);
    if d <= S::zero() {
        return None;
    }
    let dir = match tag {
        GeometryTag::Euclidean => (q.coords - p.coords).scale(d.recip()),
        // Invert r(d) = cosh(d) p + sinh(d) v for v.
        GeometryTag::Hyperbolic => (q.coords - p.coords.scale(d.cosh())).scale(d.sinh().recip()),
        GeometryTag::Spherical => (q.coords - p.coords.scale(d.cos())).scale(d.sin().recip()),
    };
    Some((TangentVec::new(*p, dir).reproject_unit(), d))
}

/// An isometry of a model geometry, stored as its linear (or homogeneous
/// affine, for E^3) action on ambient coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry<S> {
    pub m: Mat4<S>,
    pub tag: GeometryTag,
}

impl<S: Real> Isometry<S> {
    pub fn identity(tag: GeometryTag) -> Self {
        Self {
            m: Mat4::identity(),
            tag,
        }
    }

    /// Euclidean translation in homogeneous form.
    pub fn euclidean_translation(t: [S; 3]) -> Self {
        let o = S::zero();
        let l = S::one();
        Self {
            m: Mat4::from_rows([
                [l, o, o, t[0]],
                [o, l, o, t[1]],
                [o, o, l, t[2]],
                [o, o, o, l],
            ]),
            tag: GeometryTag::Euclidean,
        }
    }

    /// Hyperbolic reflection across the totally geodesic plane with spacelike
    /// Lorentz normal `n`: x - 2 (<x,n> / <n,n>) n.
    pub fn hyperbolic_reflection(n: Vec4<S>) -> Self {
        let nn = n.mink(&n);
        debug_assert!(nn > S::zero(), "reflection normal must be spacelike");
        let k = c::<S>(2.0) / nn;
        let mut rows = [[S::zero(); 4]; 4];
        // J n as a row functional: <x, n>_L = x . (Jn).
        let jn = [n.x, n.y, n.z, -n.w];
        let nv = [n.x, n.y, n.z, n.w];
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { S::one() } else { S::zero() };
                rows[i][j] = id - k * nv[i] * jn[j];
            }
        }
        Self {
            m: Mat4::from_rows(rows),
            tag: GeometryTag::Hyperbolic,
        }
    }

    /// Lorentz boost along the x axis by the given rapidity; translates the
    /// hyperboloid origin a distance `rapidity` along the x geodesic.
    pub fn hyperbolic_boost_x(rapidity: S) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let o = S::zero();
        let l = S::one();
        Self {
            m: Mat4::from_rows([[ch, o, o, sh], [o, l, o, o], [o, o, l, o], [sh, o, o, ch]]),
            tag: GeometryTag::Hyperbolic,
        }
    }

    pub fn compose(&self, inner: &Isometry<S>) -> Self {
        debug_assert_eq!(self.tag, inner.tag);
        Self {
            m: self.m.mul_mat(&inner.m),
            tag: self.tag,
        }
    }

    pub fn apply_point(&self, p: &ModelPoint<S>) -> ModelPoint<S> {
        debug_assert_eq!(self.tag, p.tag);
        ModelPoint::from_raw(p.tag, self.m.mul_vec(&p.coords)).reproject()
    }

    /// Applies the linear action to a tangent vector and re-attaches it at
    /// the image of its base point.
    pub fn apply_tangent(&self, v: &TangentVec<S>) -> TangentVec<S> {
        let base = self.apply_point(&v.base);
        TangentVec::new(base, self.m.mul_vec(&v.v)).reproject()
    }

    /// Checks metric preservation on sample data: distances between point
    /// pairs and inner products between tangent pairs.
    pub fn preserves_metric(&self, pairs: &[(ModelPoint<S>, ModelPoint<S>)], tol: S) -> bool {
        pairs.iter().all(|(a, b)| {
            let d0 = distance(self.tag, a, b);
            let d1 = distance(self.tag, &self.apply_point(a), &self.apply_point(b));
            (d0 - d1).abs() <= tol
        })
    }
}

/// Builds a deterministic pair of unit tangents completing `n` to a
/// g-orthonormal basis of the tangent space at `n.base`.
pub fn tangent_basis<S: Real>(n: &TangentVec<S>) -> (TangentVec<S>, TangentVec<S>) {
    let base = n.base;
    let tag = n.tag();
    let candidates = [
        Vec4::new(S::one(), S::zero(), S::zero(), S::zero()),
        Vec4::new(S::zero(), S::one(), S::zero(), S::zero()),
        Vec4::new(S::zero(), S::zero(), S::one(), S::zero()),
        Vec4::new(S::zero(), S::zero(), S::zero(), S::one()),
    ];
    let mut found: Vec<TangentVec<S>> = Vec::with_capacity(2);
    for cand in candidates {
        let mut t = TangentVec::new(base, cand).reproject();
        // Orthogonalize against n and previously found axes.
        let g = inner(tag, &t.v, &n.v);
        t.v = t.v - n.v.scale(g);
        for f in &found {
            let g = inner(tag, &t.v, &f.v);
            t.v = t.v - f.v.scale(g);
        }
        let m = t.metric(&t);
        if m > c(1e-6) {
            t.v = t.v.scale(m.sqrt().recip());
            found.push(t);
            if found.len() == 2 {
                break;
            }
        }
    }
    debug_assert_eq!(found.len(), 2);
    (found[0], found[1])
}

/// True when the point satisfies its manifold constraint within tolerance.
pub fn on_manifold<S: Real>(p: &ModelPoint<S>) -> bool {
    p.constraint_error().abs() < eps_manifold()
}
