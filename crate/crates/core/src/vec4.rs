//! Ambient 4-component vectors and 4x4 matrices.
//!
//! All model geometries live in the same R^4 ambient space: Euclidean points
//! use w = 1 homogeneous form, the hyperboloid and the 3-sphere use all four
//! coordinates. The vector type carries no metric; inner products are chosen
//! by the geometry tag in [`crate::geometry`].

use crate::real::Real;
use std::ops::{Add, Index, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4<S> {
    pub x: S,
    pub y: S,
    pub z: S,
    pub w: S,
}

impl<S: Real> Vec4<S> {
    #[inline]
    pub fn new(x: S, y: S, z: S, w: S) -> Self {
        Self { x, y, z, w }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    /// Euclidean dot product of the spatial part only.
    #[inline]
    pub fn dot3(&self, o: &Self) -> S {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Euclidean dot product of all four components.
    #[inline]
    pub fn dot4(&self, o: &Self) -> S {
        self.dot3(o) + self.w * o.w
    }

    /// Lorentzian product: spatial part minus the product of w components.
    #[inline]
    pub fn mink(&self, o: &Self) -> S {
        self.dot3(o) - self.w * o.w
    }

    /// Lorentzian product evaluated with compensated products and summation.
    ///
    /// For points far out on the hyperboloid the plain form cancels ~|p|^2
    /// down to order one and loses the residual entirely; this form keeps it,
    /// which the manifold re-projection depends on.
    pub fn mink_compensated(&self, o: &Self) -> S {
        let terms = [(self.x, o.x), (self.y, o.y), (self.z, o.z), (-self.w, o.w)];
        let mut sum = S::zero();
        let mut comp = S::zero();
        for (a, b) in terms {
            let p = a * b;
            let e = a.mul_add(b, -p); // exact product error
            let t = sum + p;
            let bv = t - sum;
            let round = (sum - (t - bv)) + (p - bv);
            sum = t;
            comp = comp + round + e;
        }
        sum + comp
    }

    #[inline]
    pub fn scale(&self, s: S) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s, self.w * s)
    }

    /// Spatial cross product; w of the result is 0.
    #[inline]
    pub fn cross3(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
            S::zero(),
        )
    }
}

impl<S: Real> Add for Vec4<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z, self.w + o.w)
    }
}

impl<S: Real> Sub for Vec4<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z, self.w - o.w)
    }
}

impl<S: Real> Neg for Vec4<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z, -self.w)
    }
}

impl<S: Real> Mul<S> for Vec4<S> {
    type Output = Self;
    #[inline]
    fn mul(self, s: S) -> Self {
        self.scale(s)
    }
}

impl<S> Index<usize> for Vec4<S> {
    type Output = S;
    #[inline]
    fn index(&self, i: usize) -> &S {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            3 => &self.w,
            _ => panic!("Vec4 index out of range: {i}"),
        }
    }
}

/// Row-major 4x4 matrix. Used for isometries of all three model geometries;
/// Euclidean isometries use the homogeneous affine form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<S> {
    pub rows: [[S; 4]; 4],
}

impl<S: Real> Mat4<S> {
    pub fn identity() -> Self {
        let mut rows = [[S::zero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = S::one();
        }
        Self { rows }
    }

    pub fn from_rows(rows: [[S; 4]; 4]) -> Self {
        Self { rows }
    }

    pub fn mul_vec(&self, v: &Vec4<S>) -> Vec4<S> {
        let r = &self.rows;
        Vec4::new(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z + r[0][3] * v.w,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z + r[1][3] * v.w,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z + r[2][3] * v.w,
            r[3][0] * v.x + r[3][1] * v.y + r[3][2] * v.z + r[3][3] * v.w,
        )
    }

    #[allow(clippy::needless_range_loop)]
    pub fn mul_mat(&self, o: &Self) -> Self {
        let mut rows = [[S::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = S::zero();
                for k in 0..4 {
                    acc = acc + self.rows[i][k] * o.rows[k][j];
                }
                rows[i][j] = acc;
            }
        }
        Self { rows }
    }
}
