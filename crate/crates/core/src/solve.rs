//! Smallest-positive-root solvers for the geodesic intersection equations.
//!
//! Every ray-surface test in the three model geometries reduces to one of
//! these forms in the geodesic parameter t:
//!
//! * Euclidean spheres: a quadratic `t^2 + 2bt + c = 0`,
//! * hyperbolic surfaces: `a cosh(t) + b sinh(t) = k`,
//! * spherical surfaces: `a cos(t) + b sin(t) = k`.

use crate::real::{c, Real};

/// Smallest root of `t^2 + 2bt + c = 0` that is >= t_min.
pub fn quadratic_root_monic<S: Real>(b: S, cc: S, t_min: S) -> Option<S> {
    let disc = b * b - cc;
    if disc < S::zero() {
        return None;
    }
    let sq = disc.sqrt();
    // Stable form: compute the large-magnitude root first.
    let q = -(b + b.signum() * sq);
    let (r1, r2) = if q == S::zero() {
        (S::zero(), S::zero())
    } else {
        (q, cc / q)
    };
    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    if lo >= t_min {
        Some(lo)
    } else if hi >= t_min {
        Some(hi)
    } else {
        None
    }
}

/// Smallest t >= t_min with `a cosh(t) + b sinh(t) = k`.
///
/// Substituting u = e^t turns this into `(a+b)u^2 - 2ku + (a-b) = 0`; real
/// roots with u > 0 map back through t = ln u.
pub fn cosh_sinh_root<S: Real>(a: S, b: S, k: S, t_min: S) -> Option<S> {
    let two = c::<S>(2.0);
    let pa = a + b;
    let pb = -two * k;
    let pc = a - b;

    let mut best: Option<S> = None;
    let mut consider = |u: S| {
        if u > S::zero() {
            let t = u.ln();
            if t >= t_min && best.is_none_or(|m| t < m) {
                best = Some(t);
            }
        }
    };

    if pa == S::zero() {
        // Degenerate linear case in u.
        if pb != S::zero() {
            consider(-pc / pb);
        }
        return best;
    }
    let disc = pb * pb - c::<S>(4.0) * pa * pc;
    if disc < S::zero() {
        return None;
    }
    let sq = disc.sqrt();
    let sign = if pb >= S::zero() { S::one() } else { -S::one() };
    let q = -(pb + sign * sq) / two;
    consider(q / pa);
    if q != S::zero() {
        consider(pc / q);
    }
    best
}

/// Smallest t >= t_min with `a cos(t) + b sin(t) = k`, searching within one
/// full period past t_min (geodesics of S^3 are 2*pi periodic).
pub fn cos_sin_root<S: Real>(a: S, b: S, k: S, t_min: S) -> Option<S> {
    let r = (a * a + b * b).sqrt();
    if r < k.abs() {
        return None;
    }
    let phase = b.atan2(a);
    let delta = (k / r).clamp(-S::one(), S::one()).acos();
    let tau = S::TAU();

    let mut best: Option<S> = None;
    for n in -2..=2 {
        let base = phase + tau * c::<S>(n as f64);
        for t in [base - delta, base + delta] {
            if t >= t_min && best.is_none_or(|m| t < m) {
                best = Some(t);
            }
        }
    }
    best
}
