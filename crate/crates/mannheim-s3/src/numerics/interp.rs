//! Interpolation: Fritsch–Carlson monotone cubic (for arc-length table
//! inversion) and not-a-knot cubic splines (for sampled curve data; the
//! not-a-knot ends avoid the O(h²) boundary curvature a natural spline
//! would fabricate).

use crate::error::{GeomError, Result};

fn check_grid(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() < 3 || xs.len() != ys.len() {
        return Err(GeomError::EmptyInput(format!(
            "interpolation needs >= 3 nodes, got {}",
            xs.len()
        )));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GeomError::DomainError(
            "interpolation grid not strictly increasing".into(),
        ));
    }
    Ok(())
}

fn locate(xs: &[f64], x: f64) -> usize {
    match xs.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => i.min(xs.len() - 2),
        Err(0) => 0,
        Err(i) => (i - 1).min(xs.len() - 2),
    }
}

/// Monotonicity-preserving piecewise cubic Hermite interpolant
/// (Fritsch–Carlson slope limiting).
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_grid(&xs, &ys)?;
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                m[i] = 0.0;
            } else {
                // weighted harmonic mean keeps the interpolant monotone
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // end slopes equal the end secants, which already satisfy the
        // Fritsch-Carlson bound.
        Ok(MonotoneCubic { xs, ys, slopes: m })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(t);
        self.ys[i] * h00
            + self.slopes[i] * h * h10
            + self.ys[i + 1] * h01
            + self.slopes[i + 1] * h * h11
    }
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

/// Not-a-knot cubic spline with derivatives up to order 3 (order 3 is
/// piecewise constant and only indicative).
#[derive(Clone, Debug)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the nodes
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_grid(&xs, &ys)?;
        let n = xs.len();
        if n < 4 {
            return Err(GeomError::EmptyInput(
                "not-a-knot spline needs >= 4 nodes".into(),
            ));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        // Solve the tridiagonal-with-corners system for node second
        // derivatives m[i]; not-a-knot couples the first two and last two
        // cells.
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
        }
        // not-a-knot: m0 - m1 = (h0/h1)(m1 - m2)  =>  m0 = m1 + (h0/h1)(m1 - m2)
        // fold into row 1 and row n-2 to keep the system tridiagonal.
        {
            let r = h[0] / h[1];
            // row 1: sub[1]*m0 + diag[1]*m1 + sup[1]*m2 = rhs[1]
            diag[1] += sub[1] * (1.0 + r);
            sup[1] -= sub[1] * r;
            sub[1] = 0.0;
            let r = h[n - 2] / h[n - 3];
            diag[n - 2] += sup[n - 2] * (1.0 + r);
            sub[n - 2] -= sup[n - 2] * r;
            sup[n - 2] = 0.0;
        }
        // Thomas algorithm on rows 1..n-1
        for i in 2..n - 1 {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 2] = rhs[n - 2] / diag[n - 2];
        for i in (1..n - 2).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        m[0] = m[1] + (h[0] / h[1]) * (m[1] - m[2]);
        m[n - 1] = m[n - 2] + (h[n - 2] / h[n - 3]) * (m[n - 2] - m[n - 3]);
        Ok(CubicSpline { xs, ys, m })
    }

    fn cell(&self, x: f64) -> (usize, f64, f64) {
        let i = locate(&self.xs, x);
        (i, self.xs[i + 1] - x, x - self.xs[i])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, a, b) = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        (self.m[i] * a * a * a + self.m[i + 1] * b * b * b) / (6.0 * h)
            + (self.ys[i] / h - self.m[i] * h / 6.0) * a
            + (self.ys[i + 1] / h - self.m[i + 1] * h / 6.0) * b
    }

    pub fn d1(&self, x: f64) -> f64 {
        let (i, a, b) = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        (-self.m[i] * a * a + self.m[i + 1] * b * b) / (2.0 * h)
            + (self.ys[i + 1] - self.ys[i]) / h
            - (self.m[i + 1] - self.m[i]) * h / 6.0
    }

    pub fn d2(&self, x: f64) -> f64 {
        let (i, a, b) = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        (self.m[i] * a + self.m[i + 1] * b) / h
    }

    pub fn d3(&self, x: f64) -> f64 {
        let (i, _, _) = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        (self.m[i + 1] - self.m[i]) / h
    }
}
