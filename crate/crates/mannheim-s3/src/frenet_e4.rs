//! Special Frenet curves in Euclidean 4-space: frame/curvature extraction
//! and the generalized-Mannheim curvature condition k₁ = c(k₁² + k₂²).
//!
//! A special Frenet curve carries a positively oriented orthonormal frame
//! (e₁, e₂, e₃, e₄) with
//!
//! ```text
//! e₁' = k₁e₂,  e₂' = −k₁e₁ + k₂e₃,  e₃' = −k₂e₂ + k₃e₄,  e₄' = −k₃e₃,
//! ```
//!
//! k₁, k₂ > 0 and k₃ ≠ 0. k₃'s sign is meaningful and is never dropped.

use crate::curve::{unit_speed_derivatives, CurveEval, CurveFn, DerivativeMode};
use crate::error::{GeomError, Result};
use crate::numerics::stencil::d1_5pt;
use crate::numerics::EPS_SIXTH;
use crate::vec4::{cross4, Vec4};

/// Minimum first/second curvature for a non-degenerate special Frenet point.
const K_MIN: f64 = 1e-7;

/// An immersed curve s → E⁴ on a closed interval.
#[derive(Clone)]
pub struct ParamCurveE4 {
    curve: CurveEval,
    domain: (f64, f64),
}

impl ParamCurveE4 {
    pub fn new(eval: CurveFn, mode: DerivativeMode, domain: (f64, f64)) -> Result<Self> {
        if !(domain.1 > domain.0) {
            return Err(GeomError::DomainError(format!(
                "bad domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        Ok(ParamCurveE4 {
            curve: CurveEval { eval, mode },
            domain,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn position(&self, t: f64) -> Vec4 {
        self.curve.position(t)
    }

    pub fn derivatives(&self, t: f64) -> (Vec4, Vec4, Vec4) {
        self.curve.derivatives(t)
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.curve.first_derivative(t).norm()
    }
}

/// Frenet data of a special Frenet curve at one parameter value.
#[derive(Clone, Copy, Debug)]
pub struct FrenetFrameE4 {
    pub s: f64,
    pub e1: Vec4,
    pub e2: Vec4,
    pub e3: Vec4,
    pub e4: Vec4,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

struct E4Partial {
    e1: Vec4,
    e2: Vec4,
    e3: Vec4,
    e4: Vec4,
    k1: f64,
    k2: f64,
    speed: f64,
}

/// e₁..e₄ and k₁, k₂ from the first three arc-length derivatives;
/// Gram-Schmidt with a second reorthogonalization pass against weak
/// linear independence.
fn partial_apparatus(c: &ParamCurveE4, s: f64) -> Result<E4Partial> {
    let (d1, d2, d3) = c.derivatives(s);
    let u = unit_speed_derivatives(s, d1, d2, d3)?;
    let e1 = u.d1;
    let k1 = u.d2.norm();
    if k1 < K_MIN {
        return Err(GeomError::FrameDegenerate { kappa: k1 });
    }
    let e2 = u.d2 / k1;
    let mut v3 = u.d3.reject_unit(e1).reject_unit(e2);
    v3 = v3.reject_unit(e1).reject_unit(e2);
    let n3 = v3.norm();
    if n3 < K_MIN {
        return Err(GeomError::FrameDegenerate { kappa: n3 });
    }
    let e3 = v3 / n3;
    let e4 = cross4(e1, e2, e3)
        .normalized()
        .ok_or(GeomError::FrameDegenerate { kappa: 0.0 })?;
    // k2 = <e2', e3> = <gamma''', e3>/k1 for unit-speed derivatives
    let k2 = u.d3.dot(e3) / k1;
    if k2 < K_MIN {
        return Err(GeomError::FrameDegenerate { kappa: k2 });
    }
    Ok(E4Partial {
        e1,
        e2,
        e3,
        e4,
        k1,
        k2,
        speed: u.speed,
    })
}

/// Full E⁴ Frenet apparatus at parameter `s`.
///
/// e₁ = γ′, (e₂, e₃) by Gram-Schmidt on the higher arc-length derivatives,
/// e₄ the oriented complement (det = +1); k₃ = ⟨e₃′, e₄⟩ evaluated by
/// central differencing of e₃ along the parameter (the third curvature
/// involves fourth derivatives, which the curve interface does not carry).
pub fn frenet_apparatus_e4(c: &ParamCurveE4, s: f64) -> Result<FrenetFrameE4> {
    let p = partial_apparatus(c, s)?;
    let h = 2.0 * EPS_SIXTH * s.abs().max(1.0);
    let mut err = None;
    let de3 = d1_5pt(
        |x| match partial_apparatus(c, x) {
            Ok(q) => q.e3,
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
    let k3 = de3.dot(p.e4) / p.speed;
    Ok(FrenetFrameE4 {
        s,
        e1: p.e1,
        e2: p.e2,
        e3: p.e3,
        e4: p.e4,
        k1: p.k1,
        k2: p.k2,
        k3,
    })
}

/// Least-squares fit of the generalized-Mannheim criterion
/// k₁ = c·(k₁² + k₂²) over sampled curvatures.
///
/// Returns the fitted `c` and the relative sup-norm residual
/// sup|k₁ − c(k₁²+k₂²)| / sup|k₁|.
pub fn generalized_mannheim_condition(k1: &[f64], k2: &[f64]) -> Result<(f64, f64)> {
    if k1.is_empty() || k1.len() != k2.len() {
        return Err(GeomError::EmptyInput(format!(
            "curvature samples: {} and {}",
            k1.len(),
            k2.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in k1.iter().zip(k2.iter()) {
        let q = a * a + b * b;
        num += a * q;
        den += q * q;
    }
    if den == 0.0 {
        return Err(GeomError::EmptyInput("all curvature samples zero".into()));
    }
    let c = num / den;
    let sup_k1 = k1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let resid = k1
        .iter()
        .zip(k2.iter())
        .fold(0.0f64, |m, (a, b)| m.max((a - c * (a * a + b * b)).abs()));
    Ok((c, resid / sup_k1.max(1e-300)))
}
