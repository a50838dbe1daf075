//! Parametrized curves with caller-supplied or finite-difference
//! derivatives, unit-speed (arc-length) derivative conversion and
//! arc-length reparametrization.

use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::numerics::interp::{CubicSpline, MonotoneCubic};
use crate::numerics::quad::cumulative_table;
use crate::numerics::stencil::{d1_5pt, d2_5pt, d3_7pt};
use crate::numerics::{EPS_CBRT, EPS_SEVENTH, EPS_SIXTH};
use crate::sphere::SpherePoint;
use crate::vec4::Vec4;

pub type CurveFn = Arc<dyn Fn(f64) -> Vec4 + Send + Sync>;
pub type ScalarClosure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How a curve's derivatives are obtained.
///
/// `Analytic` carries caller-supplied handles up to order 3. The
/// finite-difference mode uses central stencils with per-order steps: the
/// base step `h` for first derivatives, max(h, eps^(1/6)) for second and
/// eps^(1/7)-scale 7-point stencils for third derivatives (one step for
/// all orders would lose either the curvature or the torsion digits to
/// roundoff).
#[derive(Clone)]
pub enum DerivativeMode {
    Analytic {
        d1: CurveFn,
        d2: CurveFn,
        d3: CurveFn,
    },
    FiniteDifference {
        h: f64,
    },
}

impl DerivativeMode {
    pub fn finite_difference() -> Self {
        DerivativeMode::FiniteDifference { h: 1e-5 }
    }
}

/// Position + derivative evaluation shared by the S³ and E⁴ curve types.
#[derive(Clone)]
pub struct CurveEval {
    pub eval: CurveFn,
    pub mode: DerivativeMode,
}

impl CurveEval {
    pub fn position(&self, t: f64) -> Vec4 {
        (self.eval)(t)
    }

    /// Derivatives of the parametrization at `t`, up to order 3.
    pub fn derivatives(&self, t: f64) -> (Vec4, Vec4, Vec4) {
        match &self.mode {
            DerivativeMode::Analytic { d1, d2, d3 } => (d1(t), d2(t), d3(t)),
            DerivativeMode::FiniteDifference { h } => {
                let scale = t.abs().max(1.0);
                let h1 = h.max(t.abs() * EPS_CBRT);
                let h2 = h.max(EPS_SIXTH * scale);
                let h3 = h.max(EPS_SEVENTH * scale);
                (
                    d1_5pt(|x| (self.eval)(x), t, h1),
                    d2_5pt(|x| (self.eval)(x), t, h2),
                    d3_7pt(|x| (self.eval)(x), t, h3),
                )
            }
        }
    }

    pub fn first_derivative(&self, t: f64) -> Vec4 {
        match &self.mode {
            DerivativeMode::Analytic { d1, .. } => d1(t),
            DerivativeMode::FiniteDifference { h } => {
                let h1 = h.max(t.abs() * EPS_CBRT);
                d1_5pt(|x| (self.eval)(x), t, h1)
            }
        }
    }
}

/// An immersed curve t → S³(r) on a closed interval.
///
/// Every evaluated point must lie on the sphere within 1e-8·r (spot
/// checked at construction); the parametrization must be smooth enough
/// for 5-point stencils when finite differences are selected.
#[derive(Clone)]
pub struct ParamCurveS3 {
    curve: CurveEval,
    domain: (f64, f64),
    radius: f64,
}

impl ParamCurveS3 {
    pub fn new(
        eval: CurveFn,
        mode: DerivativeMode,
        domain: (f64, f64),
        radius: f64,
    ) -> Result<Self> {
        if !(domain.1 > domain.0) || !(radius > 0.0) {
            return Err(GeomError::DomainError(format!(
                "bad domain [{}, {}] or radius {radius}",
                domain.0, domain.1
            )));
        }
        let c = ParamCurveS3 {
            curve: CurveEval { eval, mode },
            domain,
            radius,
        };
        for i in 0..=8 {
            let t = domain.0 + (domain.1 - domain.0) * i as f64 / 8.0;
            let p = c.curve.position(t);
            if (p.norm() - radius).abs() > 1e-8 * radius {
                return Err(GeomError::InvalidSphereData(format!(
                    "curve leaves S3(r): | |c({t})| - r | = {:.3e}",
                    (p.norm() - radius).abs()
                )));
            }
        }
        Ok(c)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn position_raw(&self, t: f64) -> Vec4 {
        self.curve.position(t)
    }

    pub fn point_at(&self, t: f64) -> Result<SpherePoint> {
        SpherePoint::new(self.curve.position(t), self.radius).or_else(|_| {
            // absorb integration-level drift
            SpherePoint::project(self.curve.position(t), self.radius)
        })
    }

    pub fn eval_handle(&self) -> &CurveEval {
        &self.curve
    }

    pub fn derivatives(&self, t: f64) -> (Vec4, Vec4, Vec4) {
        self.curve.derivatives(t)
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.curve.first_derivative(t).norm()
    }
}

/// Interpolates sampled points (t strictly increasing) with not-a-knot
/// cubic splines per component. Derivatives come from the spline, so
/// curvature is O(h⁴)-accurate in the sample spacing while torsion (third
/// derivatives of a piecewise cubic) is indicative only.
pub fn curve_from_samples(samples: &[(f64, Vec4)], radius: f64) -> Result<ParamCurveS3> {
    if samples.len() < 8 {
        return Err(GeomError::EmptyInput(format!(
            "need >= 8 samples to interpolate, got {}",
            samples.len()
        )));
    }
    let ts: Vec<f64> = samples.iter().map(|p| p.0).collect();
    let comps: [Vec<f64>; 4] = [
        samples.iter().map(|p| p.1.x).collect(),
        samples.iter().map(|p| p.1.y).collect(),
        samples.iter().map(|p| p.1.z).collect(),
        samples.iter().map(|p| p.1.w).collect(),
    ];
    let splines: Vec<CubicSpline> = comps
        .iter()
        .map(|ys| CubicSpline::new(ts.clone(), ys.clone()))
        .collect::<Result<_>>()?;
    let splines = Arc::new(splines);
    let sp0 = splines.clone();
    let eval: CurveFn = Arc::new(move |t| {
        Vec4::new(sp0[0].eval(t), sp0[1].eval(t), sp0[2].eval(t), sp0[3].eval(t))
    });
    let sp1 = splines.clone();
    let d1: CurveFn =
        Arc::new(move |t| Vec4::new(sp1[0].d1(t), sp1[1].d1(t), sp1[2].d1(t), sp1[3].d1(t)));
    let sp2 = splines.clone();
    let d2: CurveFn =
        Arc::new(move |t| Vec4::new(sp2[0].d2(t), sp2[1].d2(t), sp2[2].d2(t), sp2[3].d2(t)));
    let sp3 = splines;
    let d3: CurveFn =
        Arc::new(move |t| Vec4::new(sp3[0].d3(t), sp3[1].d3(t), sp3[2].d3(t), sp3[3].d3(t)));
    ParamCurveS3::new(
        eval,
        DerivativeMode::Analytic { d1, d2, d3 },
        (ts[0], *ts.last().unwrap()),
        radius,
    )
}

/// Derivatives with respect to arc length, converted from derivatives with
/// respect to an arbitrary regular parameter.
#[derive(Clone, Copy, Debug)]
pub struct UnitSpeedDerivs {
    /// |c'(t)|
    pub speed: f64,
    /// dc/ds (unit tangent)
    pub d1: Vec4,
    /// d²c/ds²
    pub d2: Vec4,
    /// d³c/ds³
    pub d3: Vec4,
}

/// Chain-rule conversion of raw parameter derivatives to arc-length
/// derivatives. Errors with `NotImmersed` when the speed is below `1e-10`.
pub fn unit_speed_derivatives(t: f64, d1: Vec4, d2: Vec4, d3: Vec4) -> Result<UnitSpeedDerivs> {
    let v = d1.norm();
    if v < 1e-10 {
        return Err(GeomError::NotImmersed(t));
    }
    let v1 = d1.dot(d2) / v; // dv/dt
    let v2 = (d2.dot(d2) + d1.dot(d3) - v1 * v1) / v; // d²v/dt²
    let u1 = d1 / v;
    let u2 = d2 / (v * v) - d1 * (v1 / (v * v * v));
    let u3 = d3 / (v * v * v) - d2 * (3.0 * v1 / (v * v * v * v))
        + d1 * (3.0 * v1 * v1 / v.powi(5) - v2 / (v * v * v * v));
    Ok(UnitSpeedDerivs {
        speed: v,
        d1: u1,
        d2: u2,
        d3: u3,
    })
}

/// Invertible arc-length table s(t) with monotone cubic interpolation in
/// both directions.
#[derive(Clone, Debug)]
pub struct ArcLengthMap {
    t0: f64,
    t1: f64,
    total: f64,
    s_of_t: MonotoneCubic,
    t_of_s: MonotoneCubic,
}

impl ArcLengthMap {
    pub fn s_of_t(&self, t: f64) -> f64 {
        self.s_of_t.eval(t.clamp(self.t0, self.t1))
    }

    pub fn t_of_s(&self, s: f64) -> f64 {
        self.t_of_s.eval(s.clamp(0.0, self.total))
    }

    pub fn total_length(&self) -> f64 {
        self.total
    }
}

/// Builds the monotone map t ↔ s by adaptive Simpson quadrature of the
/// speed. Detects stationary points (`NotImmersed`).
pub fn arclength_reparametrize(c: &ParamCurveS3, tol: f64) -> Result<(ArcLengthMap, f64)> {
    let (t0, t1) = c.domain();
    // stationary-point scan before integrating
    let scan = 257;
    for i in 0..scan {
        let t = t0 + (t1 - t0) * i as f64 / (scan - 1) as f64;
        if c.speed(t) < 1e-10 * c.radius().max(1.0) {
            return Err(GeomError::NotImmersed(t));
        }
    }
    let cells = ((t1 - t0) * 64.0).ceil().max(32.0) as usize;
    let table = cumulative_table(|t| c.speed(t), t0, t1, tol.max(1e-13), cells);
    let ts: Vec<f64> = table.iter().map(|p| p.0).collect();
    let ss: Vec<f64> = table.iter().map(|p| p.1).collect();
    if ss.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GeomError::NotImmersed(t0));
    }
    let total = *ss.last().unwrap();
    let map = ArcLengthMap {
        t0,
        t1,
        total,
        s_of_t: MonotoneCubic::new(ts.clone(), ss.clone())?,
        t_of_s: MonotoneCubic::new(ss, ts)?,
    };
    Ok((map, total))
}

/// Wraps `c` as a curve of its own arc length (finite-difference
/// derivative mode on the composed map).
pub fn reparametrized_by_arclength(
    c: &ParamCurveS3,
    tol: f64,
) -> Result<(ParamCurveS3, ArcLengthMap)> {
    let (map, total) = arclength_reparametrize(c, tol)?;
    let inner = c.clone();
    let m = map.clone();
    let eval: CurveFn = Arc::new(move |s| inner.position_raw(m.t_of_s(s)));
    let curve = ParamCurveS3::new(
        eval,
        DerivativeMode::finite_difference(),
        (0.0, total),
        c.radius(),
    )?;
    Ok((curve, map))
}
