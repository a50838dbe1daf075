//! Generators for the example curve families: ccr curves (constant
//! curvature ratio), conical helices, general helices, and the explicit
//! constant-curvature torus curve. The profile families come with their
//! (λ, μ) certificate for λκ + μτ = 1; the certificate is an identity of
//! the profiles, so the generators emit curvature data and a candidacy
//! flag rather than verified pairs.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::Deserialize;

use crate::curve::{CurveFn, DerivativeMode, ParamCurveS3};
use crate::error::{GeomError, Result};
use crate::frenet::{CurvatureProfile, ScalarFn};
use crate::vec4::Vec4;

/// Whether a profile can belong to a Mannheim curve as far as the
/// necessary condition sees.
#[derive(Clone, Debug, PartialEq)]
pub enum MannheimCandidacy {
    /// λκ + μτ = 1 holds with non-constant μ; the necessary condition is
    /// met (the sufficient, definition-level check is verify_pair's job).
    CandidateOnly,
    NotMannheimCandidate { reason: String },
}

/// A profile family instance: curvatures plus the (λ, μ) certificate.
#[derive(Clone)]
pub struct ZooProfile {
    pub profile: CurvatureProfile,
    pub lambda: f64,
    pub mu: ScalarFn,
    pub candidacy: MannheimCandidacy,
}

impl ZooProfile {
    /// sup |1 − λκ(s) − μ(s)τ(s)| over a uniform sampling.
    pub fn certificate_residual(&self, samples: usize) -> f64 {
        let (s0, s1) = self.profile.domain;
        let mut sup: f64 = 0.0;
        for i in 0..samples {
            let s = s0 + (s1 - s0) * i as f64 / (samples - 1) as f64;
            let r = 1.0
                - self.lambda * self.profile.kappa.value(s)
                - self.mu.value(s) * self.profile.tau.value(s);
            sup = sup.max(r.abs());
        }
        sup
    }
}

fn spread_of(f: &ScalarFn, domain: (f64, f64), samples: usize) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..samples {
        let s = domain.0 + (domain.1 - domain.0) * i as f64 / (samples - 1) as f64;
        let v = f.value(s);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi - lo
}

/// Candidacy of a curve from measured curvature samples: constant κ AND
/// constant τ (spreads below `tol`) rule a Mannheim curve out.
pub fn assess_measured_curvatures(
    kappas: &[f64],
    taus: &[f64],
    tol: f64,
) -> MannheimCandidacy {
    let (sk, st) = crate::mannheim::constant_curvature_spread(kappas, taus);
    if sk <= tol && st <= tol {
        MannheimCandidacy::NotMannheimCandidate {
            reason: format!(
                "kappa and tau are both constant (spreads {sk:.3e}, {st:.3e}); \
                 a Mannheim curve cannot have both constant"
            ),
        }
    } else {
        MannheimCandidacy::CandidateOnly
    }
}

fn candidacy_from_mu(mu: &ScalarFn, domain: (f64, f64)) -> MannheimCandidacy {
    if spread_of(mu, domain, 129) <= 1e-10 {
        MannheimCandidacy::NotMannheimCandidate {
            reason: "mu is constant on the domain; a Mannheim curve needs a non-constant mu"
                .into(),
        }
    } else {
        MannheimCandidacy::CandidateOnly
    }
}

/// Constant-curvature-ratio family: κ/τ ≡ c with
/// κ(s) = c/(tan a (c + cot θ(s))), τ = κ/c; λ = tan a, μ = tan a cot θ.
pub fn ccr_profile(c: f64, a: f64, theta: ScalarFn, domain: (f64, f64)) -> Result<ZooProfile> {
    if c == 0.0 {
        return Err(GeomError::DomainError("ccr ratio c must be nonzero".into()));
    }
    let tan_a = a.tan();
    if tan_a.abs() < 1e-12 || !tan_a.is_finite() || (a - FRAC_PI_2).abs() < 1e-9 {
        return Err(GeomError::DomainError(format!(
            "tan(a) degenerate for a = {a}"
        )));
    }
    let th = theta.clone();
    let denom = move |s: f64| {
        let t = th.value(s);
        let sin = t.sin();
        if sin.abs() < 1e-12 {
            f64::NAN
        } else {
            c + t.cos() / sin
        }
    };
    let d0 = denom.clone();
    let kappa = ScalarFn::new(move |s| c / (tan_a * d0(s)));
    let d1 = denom.clone();
    let tau = ScalarFn::new(move |s| 1.0 / (tan_a * d1(s)));
    // pole / zero-denominator scan
    for i in 0..257 {
        let s = domain.0 + (domain.1 - domain.0) * i as f64 / 256.0;
        let d = denom(s);
        if !d.is_finite() || d.abs() < 1e-9 {
            return Err(GeomError::DomainError(format!(
                "cot pole or zero denominator at s = {s}"
            )));
        }
    }
    let th2 = theta.clone();
    let mu = ScalarFn::new(move |s| {
        let t = th2.value(s);
        tan_a * t.cos() / t.sin()
    });
    let candidacy = candidacy_from_mu(&mu, domain);
    Ok(ZooProfile {
        profile: CurvatureProfile::new(kappa, tau, domain)?,
        lambda: tan_a,
        mu,
        candidacy,
    })
}

/// Conical helix: κ = γ/(s+r₀), τ = δ/(s+r₁) (curvature and torsion radii
/// linear in arc length); λ = 1/δ and μ = (s+r₁)(s+r₀−1)/(δ(s+r₀)),
/// which at δ = γ satisfies the certificate identically. (The δ-division
/// in μ is required for δ ≠ 1.)
pub fn conical_helix_profile(
    gamma: f64,
    delta: f64,
    r0: f64,
    r1: f64,
    domain: (f64, f64),
) -> Result<ZooProfile> {
    if gamma <= 0.0 || delta == 0.0 {
        return Err(GeomError::DomainError(
            "conical helix needs gamma > 0 and delta != 0".into(),
        ));
    }
    if domain.0 + r0 <= 0.0 || domain.0 + r1 <= 0.0 || domain.1 + r0 <= 0.0 || domain.1 + r1 <= 0.0
    {
        return Err(GeomError::DomainError(format!(
            "pole inside domain: s+r0 or s+r1 vanishes on [{}, {}]",
            domain.0, domain.1
        )));
    }
    let kappa = ScalarFn::with_derivatives(
        move |s| gamma / (s + r0),
        move |s| -gamma / (s + r0).powi(2),
        move |s| 2.0 * gamma / (s + r0).powi(3),
    );
    let tau = ScalarFn::with_derivatives(
        move |s| delta / (s + r1),
        move |s| -delta / (s + r1).powi(2),
        move |s| 2.0 * delta / (s + r1).powi(3),
    );
    let mu = ScalarFn::new(move |s| (s + r1) * (s + r0 - 1.0) / (delta * (s + r0)));
    let candidacy = if (gamma - delta).abs() > 1e-12 {
        MannheimCandidacy::NotMannheimCandidate {
            reason: format!(
                "certificate is established for gamma = delta; got gamma = {gamma}, delta = {delta}"
            ),
        }
    } else {
        candidacy_from_mu(&mu, domain)
    };
    Ok(ZooProfile {
        profile: CurvatureProfile::new(kappa, tau, domain)?,
        lambda: 1.0 / delta,
        mu,
        candidacy,
    })
}

/// Torsion sign of the general-helix relation τ = bκ ± 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HelixSign {
    Plus,
    Minus,
}

/// General helix (Lancret-type): τ = bκ ± 1 with κ = (1 ∓ μ)/(λ + bμ).
pub fn general_helix_profile(
    b: f64,
    lambda: f64,
    mu: ScalarFn,
    sign: HelixSign,
    domain: (f64, f64),
) -> Result<ZooProfile> {
    if lambda == 0.0 {
        return Err(GeomError::DomainError("lambda must be nonzero".into()));
    }
    let sgn = match sign {
        HelixSign::Plus => 1.0,
        HelixSign::Minus => -1.0,
    };
    let m = mu.clone();
    let kappa = ScalarFn::new(move |s| {
        let mv = m.value(s);
        (1.0 - sgn * mv) / (lambda + b * mv)
    });
    let m2 = mu.clone();
    let tau = ScalarFn::new(move |s| {
        let mv = m2.value(s);
        b * (1.0 - sgn * mv) / (lambda + b * mv) + sgn
    });
    for i in 0..257 {
        let s = domain.0 + (domain.1 - domain.0) * i as f64 / 256.0;
        if (lambda + b * mu.value(s)).abs() < 1e-9 {
            return Err(GeomError::DomainError(format!(
                "zero denominator lambda + b*mu at s = {s}"
            )));
        }
    }
    let candidacy = candidacy_from_mu(&mu, domain);
    Ok(ZooProfile {
        profile: CurvatureProfile::new(kappa, tau, domain)?,
        lambda,
        mu,
        candidacy,
    })
}

/// Explicit constant-curvature curve on S³(1), unit-speed:
/// α(s) = (cos(ω₁s)/√3, sin(ω₁s)/√3, √2·cos(ω₂s)/√3, √2·sin(ω₂s)/√3)
/// with ω₁ = 2√2/√3, ω₂ = 1/√6; κ = 5/(3√2), τ = 2/3, both constant, so
/// the curve is not a Mannheim curve.
pub fn example34_curve(domain: (f64, f64)) -> Result<ParamCurveS3> {
    let a = 1.0 / 3.0f64.sqrt();
    let b = 2.0f64.sqrt() / 3.0f64.sqrt();
    let w1 = 2.0 * 2.0f64.sqrt() / 3.0f64.sqrt();
    let w2 = 1.0 / 6.0f64.sqrt();
    let eval: CurveFn = Arc::new(move |s: f64| {
        Vec4::new(
            a * (w1 * s).cos(),
            a * (w1 * s).sin(),
            b * (w2 * s).cos(),
            b * (w2 * s).sin(),
        )
    });
    let d1: CurveFn = Arc::new(move |s: f64| {
        Vec4::new(
            -a * w1 * (w1 * s).sin(),
            a * w1 * (w1 * s).cos(),
            -b * w2 * (w2 * s).sin(),
            b * w2 * (w2 * s).cos(),
        )
    });
    let d2: CurveFn = Arc::new(move |s: f64| {
        Vec4::new(
            -a * w1 * w1 * (w1 * s).cos(),
            -a * w1 * w1 * (w1 * s).sin(),
            -b * w2 * w2 * (w2 * s).cos(),
            -b * w2 * w2 * (w2 * s).sin(),
        )
    });
    let d3: CurveFn = Arc::new(move |s: f64| {
        Vec4::new(
            a * w1 * w1 * w1 * (w1 * s).sin(),
            -a * w1 * w1 * w1 * (w1 * s).cos(),
            b * w2 * w2 * w2 * (w2 * s).sin(),
            -b * w2 * w2 * w2 * (w2 * s).cos(),
        )
    });
    ParamCurveS3::new(eval, DerivativeMode::Analytic { d1, d2, d3 }, domain, 1.0)
}

/// Fundamental period of the explicit curve: its two angular frequencies
/// have ratio 4, so the period is 2π/ω₂ = 2π√6.
pub fn example34_period() -> f64 {
    2.0 * std::f64::consts::PI * 6.0f64.sqrt()
}

/// Parsed form of a zoo request (JSON:
/// {"family": ..., "params": {...}, "domain": [s0, s1]}).
#[derive(Clone, Debug, Deserialize)]
pub struct ZooSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub domain: [f64; 2],
}

/// Families and their parameters, for listings and validation.
pub fn zoo_families() -> Vec<(&'static str, &'static str, &'static [&'static str])> {
    vec![
        (
            "ccr",
            "constant curvature ratio kappa/tau = c; theta(s) = theta0 + theta_slope*s",
            &["c", "a", "theta0", "theta_slope"],
        ),
        (
            "conical_helix",
            "curvature and torsion radii linear in arc length",
            &["gamma", "delta", "r0", "r1"],
        ),
        (
            "general_helix",
            "Lancret-type tau = b*kappa + sign; mu(s) = mu0 + mu_slope*s",
            &["b", "lambda", "mu0", "mu_slope", "sign"],
        ),
        (
            "example34",
            "explicit constant-curvature torus curve (not Mannheim)",
            &[],
        ),
    ]
}

impl ZooSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| GeomError::DomainError(format!("bad zoo spec: {e}")))
    }

    fn param(&self, name: &str, default: Option<f64>) -> Result<f64> {
        match (self.params.get(name), default) {
            (Some(v), _) => Ok(*v),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(GeomError::DomainError(format!(
                "zoo family '{}' requires parameter '{name}'",
                self.family
            ))),
        }
    }

    /// Builds the profile for the profile families; `example34` has an
    /// explicit parametrization instead (see [`ZooSpec::to_curve`]).
    pub fn to_profile(&self) -> Result<ZooProfile> {
        let domain = (self.domain[0], self.domain[1]);
        match self.family.as_str() {
            "ccr" => {
                let c = self.param("c", None)?;
                let a = self.param("a", None)?;
                let t0 = self.param("theta0", Some(std::f64::consts::FRAC_PI_4))?;
                let slope = self.param("theta_slope", Some(0.1))?;
                ccr_profile(
                    c,
                    a,
                    ScalarFn::new(move |s| t0 + slope * s),
                    domain,
                )
            }
            "conical_helix" => {
                let gamma = self.param("gamma", None)?;
                let delta = self.param("delta", None)?;
                let r0 = self.param("r0", None)?;
                let r1 = self.param("r1", None)?;
                conical_helix_profile(gamma, delta, r0, r1, domain)
            }
            "general_helix" => {
                let b = self.param("b", None)?;
                let lambda = self.param("lambda", None)?;
                let mu0 = self.param("mu0", Some(0.2))?;
                let slope = self.param("mu_slope", Some(0.3))?;
                let sign = if self.param("sign", Some(1.0))? >= 0.0 {
                    HelixSign::Plus
                } else {
                    HelixSign::Minus
                };
                general_helix_profile(
                    b,
                    lambda,
                    ScalarFn::new(move |s| mu0 + slope * s),
                    sign,
                    domain,
                )
            }
            "example34" => Err(GeomError::DomainError(
                "example34 is an explicit curve; use to_curve()".into(),
            )),
            other => Err(GeomError::DomainError(format!(
                "unknown zoo family '{other}'"
            ))),
        }
    }

    /// The explicit curve for `example34`.
    pub fn to_curve(&self) -> Result<ParamCurveS3> {
        match self.family.as_str() {
            "example34" => example34_curve((self.domain[0], self.domain[1])),
            other => Err(GeomError::DomainError(format!(
                "zoo family '{other}' is a profile family; use to_profile()"
            ))),
        }
    }
}
