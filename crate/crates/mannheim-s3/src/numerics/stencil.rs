//! Central-difference stencils over scalar- or vector-valued functions.

use crate::vec4::Vec4;

/// Minimal vector-space interface so the stencils work for both f64 and
/// Vec4 samples.
pub trait Linear: Copy {
    fn zero() -> Self;
    fn axpy(self, a: f64, x: Self) -> Self;
    fn scale(self, a: f64) -> Self;
}

impl Linear for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn axpy(self, a: f64, x: Self) -> Self {
        self + a * x
    }
    #[inline]
    fn scale(self, a: f64) -> Self {
        self * a
    }
}

impl Linear for Vec4 {
    #[inline]
    fn zero() -> Self {
        Vec4::ZERO
    }
    #[inline]
    fn axpy(self, a: f64, x: Self) -> Self {
        self + x * a
    }
    #[inline]
    fn scale(self, a: f64) -> Self {
        self * a
    }
}

fn combine<T: Linear>(f: &mut impl FnMut(f64) -> T, x: f64, h: f64, coeffs: &[(i32, f64)]) -> T {
    let mut acc = T::zero();
    for &(k, c) in coeffs {
        acc = acc.axpy(c, f(x + k as f64 * h));
    }
    acc
}

/// First derivative, 5-point stencil, O(h⁴).
pub fn d1_5pt<T: Linear>(mut f: impl FnMut(f64) -> T, x: f64, h: f64) -> T {
    combine(
        &mut f,
        x,
        h,
        &[(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)],
    )
    .scale(1.0 / (12.0 * h))
}

/// Second derivative, 5-point stencil, O(h⁴).
pub fn d2_5pt<T: Linear>(mut f: impl FnMut(f64) -> T, x: f64, h: f64) -> T {
    combine(
        &mut f,
        x,
        h,
        &[(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)],
    )
    .scale(1.0 / (12.0 * h * h))
}

/// Third derivative, 7-point stencil, O(h⁴).
pub fn d3_7pt<T: Linear>(mut f: impl FnMut(f64) -> T, x: f64, h: f64) -> T {
    combine(
        &mut f,
        x,
        h,
        &[
            (-3, 1.0),
            (-2, -8.0),
            (-1, 13.0),
            (1, -13.0),
            (2, 8.0),
            (3, -1.0),
        ],
    )
    .scale(1.0 / (8.0 * h * h * h))
}

/// Derivative of grid samples at interior index `k` from a local quadratic
/// through (x[k-1], x[k], x[k+1]); exact for parabolas, works on nonuniform
/// grids.
pub fn d1_grid3(xs: &[f64], ys: &[f64], k: usize) -> f64 {
    let (x0, x1, x2) = (xs[k - 1], xs[k], xs[k + 1]);
    let (y0, y1, y2) = (ys[k - 1], ys[k], ys[k + 1]);
    let (h0, h1) = (x1 - x0, x2 - x1);
    // Lagrange derivative at x1.
    -y0 * h1 / (h0 * (h0 + h1)) + y1 * (h1 - h0) / (h0 * h1) + y2 * h0 / (h1 * (h0 + h1))
}

/// Derivative of uniformly spaced grid samples at interior index `k`
/// (needs 2 ≤ k ≤ n−3), 5-point O(h⁴).
pub fn d1_grid5(ys: &[f64], k: usize, h: f64) -> f64 {
    (ys[k - 2] - 8.0 * ys[k - 1] + 8.0 * ys[k + 1] - ys[k + 2]) / (12.0 * h)
}
