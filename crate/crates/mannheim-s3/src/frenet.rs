//! Intrinsic Frenet apparatus of immersed curves in S³(r): frame and
//! curvature extraction from parametrizations.
//!
//! With respect to the sphere's Levi-Civita connection the frame satisfies
//!
//! ```text
//! ∇_T T =  κ N          (ambient form: dT/ds = κN − α/r²)
//! ∇_T N = −κ T + τ B
//! ∇_T B = −τ N
//! ```
//!
//! B is fixed by positive orientation (det(α/r, T, N, B) = +1), so τ
//! carries a sign.

use std::sync::Arc;

use crate::curve::{unit_speed_derivatives, ParamCurveS3, ScalarClosure};
use crate::error::{GeomError, Result};
use crate::numerics::stencil::{d1_5pt, d2_5pt};
use crate::numerics::EPS_SIXTH;
use crate::sphere::{oriented_complement, SpherePoint, TangentVector};
use crate::vec4::{det4, Vec4};

/// Below this curvature a point is declared geodesic (N is 0/0 there).
pub const KAPPA_MIN: f64 = 1e-7;

/// A scalar function of arc length with optional analytic derivatives;
/// missing derivatives fall back to central differences on the handle.
#[derive(Clone)]
pub struct ScalarFn {
    f: ScalarClosure,
    d1: Option<ScalarClosure>,
    d2: Option<ScalarClosure>,
}

impl ScalarFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn {
            f: Arc::new(f),
            d1: None,
            d2: None,
        }
    }

    pub fn with_derivatives(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarFn {
            f: Arc::new(f),
            d1: Some(Arc::new(d1)),
            d2: Some(Arc::new(d2)),
        }
    }

    pub fn constant(c: f64) -> Self {
        ScalarFn::with_derivatives(move |_| c, |_| 0.0, |_| 0.0)
    }

    pub fn from_parts(f: ScalarClosure, d1: Option<ScalarClosure>, d2: Option<ScalarClosure>) -> Self {
        ScalarFn { f, d1, d2 }
    }

    #[inline]
    pub fn value(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match &self.d1 {
            Some(d) => d(s),
            None => d1_5pt(|x| (self.f)(x), s, 1e-4 * s.abs().max(1.0)),
        }
    }

    pub fn second_derivative(&self, s: f64) -> f64 {
        match (&self.d2, &self.d1) {
            (Some(d), _) => d(s),
            (None, Some(d1)) => d1_5pt(|x| d1(x), s, 1e-4 * s.abs().max(1.0)),
            (None, None) => d2_5pt(|x| (self.f)(x), s, EPS_SIXTH * s.abs().max(1.0)),
        }
    }
}

/// Prescribed curvature/torsion pair (κ(s), τ(s)) on an arc-length
/// interval; κ must stay positive (Frenet curve requirement).
#[derive(Clone)]
pub struct CurvatureProfile {
    pub kappa: ScalarFn,
    pub tau: ScalarFn,
    pub domain: (f64, f64),
}

impl CurvatureProfile {
    pub fn new(kappa: ScalarFn, tau: ScalarFn, domain: (f64, f64)) -> Result<Self> {
        if !(domain.1 > domain.0) {
            return Err(GeomError::DomainError(format!(
                "empty profile domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        let p = CurvatureProfile { kappa, tau, domain };
        p.validate_positive_kappa(257)?;
        Ok(p)
    }

    fn validate_positive_kappa(&self, samples: usize) -> Result<()> {
        for i in 0..samples {
            let s = self.domain.0
                + (self.domain.1 - self.domain.0) * i as f64 / (samples - 1) as f64;
            let k = self.kappa.value(s);
            if !(k > 0.0) || !k.is_finite() {
                return Err(GeomError::DomainError(format!(
                    "kappa(s) = {k} not positive at s = {s}"
                )));
            }
            if !self.tau.value(s).is_finite() {
                return Err(GeomError::DomainError(format!("tau not finite at s = {s}")));
            }
        }
        Ok(())
    }
}

/// The Frenet data of a curve at one parameter value.
#[derive(Clone, Copy, Debug)]
pub struct FrenetFrameS3 {
    /// Arc length along the curve (for unit-speed curves this is the
    /// curve parameter).
    pub s: f64,
    pub point: SpherePoint,
    pub t: TangentVector,
    pub n: TangentVector,
    pub b: TangentVector,
    pub kappa: f64,
    pub tau: f64,
}

impl FrenetFrameS3 {
    /// Validates orthonormality and positive orientation of
    /// {point/r, T, N, B} within 1e-7.
    pub fn new(
        s: f64,
        point: SpherePoint,
        t: Vec4,
        n: Vec4,
        b: Vec4,
        kappa: f64,
        tau: f64,
    ) -> Result<Self> {
        let a = point.unit();
        let gram = [
            t.dot(t) - 1.0,
            n.dot(n) - 1.0,
            b.dot(b) - 1.0,
            a.dot(t),
            a.dot(n),
            a.dot(b),
            t.dot(n),
            t.dot(b),
            n.dot(b),
        ]
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
        let det = det4(a, t, n, b);
        if gram > 1e-7 || (det - 1.0).abs() > 1e-7 {
            return Err(GeomError::FrameDegenerate { kappa: gram });
        }
        if !(kappa >= 0.0) {
            return Err(GeomError::DomainError(format!("kappa = {kappa} < 0")));
        }
        Ok(FrenetFrameS3 {
            s,
            point,
            t: TangentVector::projected(point, t),
            n: TangentVector::projected(point, n),
            b: TangentVector::projected(point, b),
            kappa,
            tau,
        })
    }

    pub fn t_dir(&self) -> Vec4 {
        self.t.dir()
    }

    pub fn n_dir(&self) -> Vec4 {
        self.n.dir()
    }

    pub fn b_dir(&self) -> Vec4 {
        self.b.dir()
    }
}

/// Frenet data sampled along a curve. `grid` is the common correspondence
/// parameter of the samples; each frame's `s` is the curve's own arc
/// length there (the two coincide for unit-speed curves).
#[derive(Clone, Debug)]
pub struct FrameField {
    pub grid: Vec<f64>,
    pub frames: Vec<FrenetFrameS3>,
    pub radius: f64,
}

impl FrameField {
    pub fn new(grid: Vec<f64>, frames: Vec<FrenetFrameS3>, radius: f64) -> Result<Self> {
        if grid.is_empty() || grid.len() != frames.len() {
            return Err(GeomError::EmptyInput(format!(
                "frame field with {} grid points and {} frames",
                grid.len(),
                frames.len()
            )));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeomError::DomainError(
                "frame field grid not strictly increasing".into(),
            ));
        }
        Ok(FrameField {
            grid,
            frames,
            radius,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Extraction options.
#[derive(Clone, Copy, Debug)]
pub struct FrenetOptions {
    pub kappa_min: f64,
}

impl Default for FrenetOptions {
    fn default() -> Self {
        FrenetOptions {
            kappa_min: KAPPA_MIN,
        }
    }
}

struct Apparatus {
    point: SpherePoint,
    speed: f64,
    t: Vec4,
    n: Vec4,
    b: Vec4,
    kappa: f64,
    /// third arc-length derivative when analytic handles are available
    d3s: Option<Vec4>,
}

fn apparatus_at(c: &ParamCurveS3, s: f64, opts: &FrenetOptions) -> Result<Apparatus> {
    let r = c.radius();
    let p = c.point_at(s)?;
    let (d1, d2, d3) = c.derivatives(s);
    let u = unit_speed_derivatives(s, d1, d2, d3)?;
    let kvec = u.d2 + p.coords() * (1.0 / (r * r));
    let kappa = kvec.norm();
    if kappa < opts.kappa_min {
        return Err(GeomError::FrameDegenerate { kappa });
    }
    // The measured directions carry the differentiation error of the
    // curve's derivative mode; re-orthonormalize so the returned frame is
    // a frame (the error stays in kappa/tau and the joint orientation).
    let a_dir = p.unit();
    let t = u
        .d1
        .reject_unit(a_dir)
        .normalized()
        .ok_or(GeomError::NotImmersed(s))?;
    let n = (kvec / kappa)
        .reject_unit(a_dir)
        .reject_unit(t)
        .normalized()
        .ok_or(GeomError::FrameDegenerate { kappa })?;
    let b = oriented_complement(&p, t, n)?;
    let d3s = match c.eval_handle().mode {
        crate::curve::DerivativeMode::Analytic { .. } => Some(u.d3),
        _ => None,
    };
    Ok(Apparatus {
        point: p,
        speed: u.speed,
        t,
        n,
        b,
        kappa,
        d3s,
    })
}

/// Principal normal alone (used for the torsion-by-differencing path).
fn normal_at(c: &ParamCurveS3, s: f64, opts: &FrenetOptions) -> Result<Vec4> {
    let r = c.radius();
    let p = c.point_at(s)?;
    let (d1, d2, d3) = c.derivatives(s);
    let u = unit_speed_derivatives(s, d1, d2, d3)?;
    let kvec = u.d2 + p.coords() * (1.0 / (r * r));
    let kappa = kvec.norm();
    if kappa < opts.kappa_min {
        return Err(GeomError::FrameDegenerate { kappa });
    }
    Ok(kvec / kappa)
}

/// Frenet frame and curvatures of `c` at parameter `s`.
///
/// T = α', κ = |α'' + α/r²|, N = (α'' + α/r²)/κ with arc-length
/// derivatives; B completes the positively oriented frame; τ = ⟨dN/ds, B⟩
/// (from the third derivative when analytic handles exist, by central
/// differencing of N otherwise). Curves need not be unit-speed: raw
/// derivatives are converted.
pub fn frenet_apparatus(c: &ParamCurveS3, s: f64) -> Result<FrenetFrameS3> {
    frenet_apparatus_with(c, s, &FrenetOptions::default())
}

pub fn frenet_apparatus_with(
    c: &ParamCurveS3,
    s: f64,
    opts: &FrenetOptions,
) -> Result<FrenetFrameS3> {
    let ap = apparatus_at(c, s, opts)?;
    let r = c.radius();
    let tau = match ap.d3s {
        Some(d3s) => (d3s + ap.t * (1.0 / (r * r))).dot(ap.b) / ap.kappa,
        None => {
            // tau = <dN/ds, B>; N differenced along the raw parameter and
            // rescaled by the speed.
            let h = 2.0 * EPS_SIXTH * s.abs().max(1.0);
            let mut err = None;
            let dn = d1_5pt(
                |x| match normal_at(c, x, opts) {
                    Ok(n) => n,
                    Err(e) => {
                        err = Some(e);
                        Vec4::ZERO
                    }
                },
                s,
                h,
            );
            if let Some(e) = err {
                return Err(e);
            }
            dn.dot(ap.b) / ap.speed
        }
    };
    FrenetFrameS3::new(s, ap.point, ap.t, ap.n, ap.b, ap.kappa, tau)
}

/// True iff sup |τ| ≤ tol over a uniform sampling of the domain.
pub fn plane_curve_test(c: &ParamCurveS3, tol: f64) -> Result<bool> {
    Ok(max_abs_tau(c, 129)? <= tol)
}

pub(crate) fn max_abs_tau(c: &ParamCurveS3, samples: usize) -> Result<f64> {
    let (t0, t1) = c.domain();
    let mut sup: f64 = 0.0;
    for i in 0..samples {
        // interior sampling keeps the stencils inside the domain
        let t = t0 + (t1 - t0) * (i as f64 + 0.5) / samples as f64;
        let f = frenet_apparatus(c, t)?;
        sup = sup.max(f.tau.abs());
    }
    Ok(sup)
}

/// Frenet field of a parametrized curve over an explicit grid; each
/// frame's `s` is set to the measured arc length from the domain start.
pub fn frame_field_over_grid(c: &ParamCurveS3, grid: &[f64]) -> Result<FrameField> {
    if grid.is_empty() {
        return Err(GeomError::EmptyInput("empty sampling grid".into()));
    }
    let mut frames = Vec::with_capacity(grid.len());
    let mut arc = crate::numerics::quad::adaptive_simpson(
        |t| c.speed(t),
        c.domain().0,
        grid[0],
        1e-12,
    );
    let mut prev = grid[0];
    for (i, &g) in grid.iter().enumerate() {
        if i > 0 {
            arc += crate::numerics::quad::adaptive_simpson(|t| c.speed(t), prev, g, 1e-12);
            prev = g;
        }
        let mut f = frenet_apparatus(c, g)?;
        f.s = arc;
        frames.push(f);
    }
    FrameField::new(grid.to_vec(), frames, c.radius())
}

/// Midpoint sampling grid: n cells over [a, b], sampled at cell centers.
pub fn midpoint_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..n).map(|i| a + (i as f64 + 0.5) * h).collect()
}
