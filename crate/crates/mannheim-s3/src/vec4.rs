//! Plain 4-vectors of ℝ⁴ and the handful of multilinear operations the
//! sphere geometry needs (dot products, the generalized cross product,
//! 4×4 determinants).

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A vector (or point) of ℝ⁴.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec4 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl Vec4 {
    pub const ZERO: Vec4 = Vec4::new(0.0, 0.0, 0.0, 0.0);
    /// Standard basis vector e₁.
    pub const E1: Vec4 = Vec4::new(1.0, 0.0, 0.0, 0.0);
    /// Standard basis vector e₂.
    pub const E2: Vec4 = Vec4::new(0.0, 1.0, 0.0, 0.0);
    /// Standard basis vector e₃.
    pub const E3: Vec4 = Vec4::new(0.0, 0.0, 1.0, 0.0);
    /// Standard basis vector e₄.
    pub const E4: Vec4 = Vec4::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Vec4 { x, y, z, w }
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Vec4::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.w]
    }

    #[inline]
    pub fn dot(self, other: Vec4) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z + self.w * other.w
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Returns `self / |self|`, or `None` when the norm is below `1e-300`.
    #[inline]
    pub fn normalized(self) -> Option<Vec4> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(self / n)
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.w.is_finite()
    }

    /// Component of `self` orthogonal to the unit vector `u`.
    #[inline]
    pub fn reject_unit(self, u: Vec4) -> Vec4 {
        self - u * self.dot(u)
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    #[inline]
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x + o.x, self.y + o.y, self.z + o.z, self.w + o.w)
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    #[inline]
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x - o.x, self.y - o.y, self.z - o.z, self.w - o.w)
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    #[inline]
    fn neg(self) -> Vec4 {
        Vec4::new(-self.x, -self.y, -self.z, -self.w)
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    #[inline]
    fn mul(self, s: f64) -> Vec4 {
        Vec4::new(self.x * s, self.y * s, self.z * s, self.w * s)
    }
}

impl Div<f64> for Vec4 {
    type Output = Vec4;
    #[inline]
    fn div(self, s: f64) -> Vec4 {
        Vec4::new(self.x / s, self.y / s, self.z / s, self.w / s)
    }
}

#[inline]
fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Generalized cross product of three 4-vectors: the unique vector `c`
/// with ⟨c, y⟩ = det(u, v, w, y) for every y (rows u, v, w, y).
///
/// For an orthonormal triple the result is the unit vector completing it
/// to a positively oriented basis: `cross4(e1, e2, e3) == e4`.
pub fn cross4(u: Vec4, v: Vec4, w: Vec4) -> Vec4 {
    let u = u.to_array();
    let v = v.to_array();
    let w = w.to_array();
    // Cofactor expansion of det(u, v, w, y) along the y row: the minor
    // for column j drops coordinate j from each of u, v, w.
    let minor = |j: usize| -> f64 {
        let cols: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        det3([
            [u[cols[0]], u[cols[1]], u[cols[2]]],
            [v[cols[0]], v[cols[1]], v[cols[2]]],
            [w[cols[0]], w[cols[1]], w[cols[2]]],
        ])
    };
    Vec4::new(-minor(0), minor(1), -minor(2), minor(3))
}

/// Determinant of the 4×4 matrix with rows `a, b, c, d`.
pub fn det4(a: Vec4, b: Vec4, c: Vec4, d: Vec4) -> f64 {
    cross4(a, b, c).dot(d)
}
