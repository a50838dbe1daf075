//! Mannheim pairs in S³(1): construction of a partner curve from a base
//! curve, the base-from-partner inverse, the σ ↔ s correspondence, and a
//! full residual report turning every pair identity into a number.
//!
//! A pair (α, β) is Mannheim when the principal normal geodesic of α and
//! the binormal geodesic of β coincide at corresponding points. For the
//! construction α(σ) = cos a·β(σ) − sin a·B_β(σ) the canonical Frenet
//! normal of α satisfies
//!
//! ```text
//! N_α = ε (sin a·β + cos a·B_β),   ε = sign((τ_β² − 1)·sin a·cos a),
//! ```
//!
//! so the oriented pair identities hold with εN_α in place of N_α (the
//! coincidence of the geodesics as sets holds for either sign). Every
//! oriented residual below carries that ε; the report records it.

use std::sync::Arc;

use crate::curve::{CurveFn, DerivativeMode, ParamCurveS3};
use crate::error::{GeomError, Result};
use crate::frenet::{
    frame_field_over_grid, midpoint_grid, CurvatureProfile, FrameField, ScalarFn,
};
use crate::numerics::stencil::{d1_grid3, d1_grid5};
use crate::sphere::{geodesic_eval, GeodesicS3, SpherePoint, TangentVector};
use crate::synthesis::{
    standard_initial_frame, synthesize_from_curvatures, FramedCurveS3, KtDerivs, StepControl,
    SynthesizedCurve,
};
use crate::vec4::Vec4;

/// sin θ below this is a degenerate correspondence.
const SIN_THETA_MIN: f64 = 1e-8;
/// sup |τ| below this marks a plane curve.
const PLANE_TAU_TOL: f64 = 1e-8;

/// The σ ↔ s correspondence of a candidate pair. σ is the partner's arc
/// length; s(σ) is reconstructed by integrating ds/dσ = cos a cos θ +
/// τ_β sin a sin θ, anchored at the measured arc length of the first
/// sample.
#[derive(Clone, Debug)]
pub struct PairCorrespondence {
    pub sigma_grid: Vec<f64>,
    pub s_of_sigma: Vec<f64>,
    /// ds/dσ from the arc-length relation (cos a cos θ + τ_β sin a sin θ)
    pub s_prime: Vec<f64>,
    /// ds/dσ from the tangent split: √(cos²a + τ_β² sin²a)
    pub s_prime_from_torsion: Vec<f64>,
    pub theta: Vec<f64>,
}

/// Sup-norm residuals of the pair identities over the verification grid.
#[derive(Clone, Copy, Debug, Default)]
pub struct PairResiduals {
    /// Definition-level check: the geodesic leaving α along εN_α reaches β
    /// at distance a AND arrives with velocity B_β.
    pub geodesic_coincidence: f64,
    /// |N_α − ε(sin a β + cos a B_β)|
    pub eq3_normal: f64,
    /// |B_β − (−sin a α + ε cos a N_α)|
    pub eq10_binormal: f64,
    /// |τ_β − tan θ / tan a|
    pub thm21a: f64,
    /// |τ_α sin a cos θ − (cos a − εκ_α sin a) sin θ|
    pub thm21b: f64,
    /// |cos²θ − cos²a + εκ_α sin a cos a|
    pub thm21c: f64,
    /// |sin²θ − τ_α τ_β sin²a|
    pub thm21d: f64,
    /// |dθ/dσ + κ_β τ_β sin a / (s' sin θ)|
    pub eq9_theta_prime: f64,
    /// discrepancy between the two ds/dσ routes
    pub eq23_arclength: f64,
    /// |1 − λ·εκ_α − μτ_α| with λ = tan a, μ = tan a cot θ
    pub eq24_condition: f64,
    /// deviation of the measured point-angle (= geodesic distance) from a
    pub a_constancy: f64,
    /// deviation of ⟨B_α, B_β⟩ from its mean
    pub binormal_angle_constancy: f64,
}

impl PairResiduals {
    /// Stable (name, value) listing used by reports and serialization.
    pub fn entries(&self) -> [(&'static str, f64); 12] {
        [
            ("geodesic_coincidence", self.geodesic_coincidence),
            ("eq3_normal", self.eq3_normal),
            ("eq10_binormal", self.eq10_binormal),
            ("thm21a", self.thm21a),
            ("thm21b", self.thm21b),
            ("thm21c", self.thm21c),
            ("thm21d", self.thm21d),
            ("eq9_thetaPrime", self.eq9_theta_prime),
            ("eq23_arclength", self.eq23_arclength),
            ("eq24_condition", self.eq24_condition),
            ("a_constancy", self.a_constancy),
            ("binormal_angle_constancy", self.binormal_angle_constancy),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, (_, v)| m.max(*v))
    }

    pub fn all_finite(&self) -> bool {
        self.entries().iter().all(|(_, v)| v.is_finite() && *v >= 0.0)
    }
}

/// Full diagnostics of a candidate pair.
#[derive(Clone, Debug)]
pub struct MannheimPairReport {
    /// the prescribed angle between corresponding position vectors
    pub a: f64,
    /// mean measured geodesic distance between corresponding points
    pub d: f64,
    /// tan a (the constant in the lambda*kappa + mu*tau = 1 certificate)
    pub lambda: f64,
    /// orientation sign relating the canonical N_α to the connecting
    /// geodesic direction
    pub epsilon: f64,
    pub mu: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_variance: f64,
    pub residuals: PairResiduals,
}

fn check_unit_radius(r: f64) -> Result<()> {
    if (r - 1.0).abs() > 1e-9 {
        return Err(GeomError::DomainError(format!(
            "Mannheim machinery assumes S3(1); got radius {r}"
        )));
    }
    Ok(())
}

fn frame_vec(st: &crate::synthesis::FrameState, c: [f64; 4]) -> Vec4 {
    st.alpha * c[0] + st.t * c[1] + st.n * c[2] + st.b * c[3]
}

/// Curve defined by moving-frame coefficients along a framed base curve;
/// rows of `coeffs` are the coefficient vectors of the value and its first
/// three σ-derivatives, obtained from the rule
/// V' = (p'−q)β + (p+q'−κu)T + (κq+u'−τv)N + (τu+v')B.
fn curve_from_coeffs<C>(
    base: Arc<C>,
    coeffs: impl Fn(&KtDerivs) -> [[f64; 4]; 4] + Send + Sync + 'static,
) -> Result<ParamCurveS3>
where
    C: FramedCurveS3 + Send + Sync + 'static,
{
    let nan = Vec4::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    let coeffs = Arc::new(coeffs);
    let handle = |order: usize| -> CurveFn {
        let b = base.clone();
        let cf = coeffs.clone();
        Arc::new(
            move |sigma: f64| match (b.frame_state(sigma), b.curvature_derivs(sigma)) {
                (Ok(st), Ok(kt)) => frame_vec(&st, cf(&kt)[order]),
                _ => nan,
            },
        )
    };
    let eval = handle(0);
    let mode = DerivativeMode::Analytic {
        d1: handle(1),
        d2: handle(2),
        d3: handle(3),
    };
    ParamCurveS3::new(eval, mode, base.domain(), base.radius())
}

/// Partner-to-base construction: α(σ) = cos a·β(σ) − sin a·B_β(σ).
///
/// β must not be a plane curve (its binormal geodesics would degenerate).
/// The returned curve is parametrized by σ (β's arc length) with analytic
/// derivative handles obtained from β's frame and profile.
pub fn base_to_mannheim<C>(beta: &Arc<C>, a: f64) -> Result<ParamCurveS3>
where
    C: FramedCurveS3 + Send + Sync + 'static,
{
    check_unit_radius(beta.radius())?;
    let (s0, s1) = beta.domain();
    let mut sup_tau: f64 = 0.0;
    for i in 0..129 {
        let s = s0 + (s1 - s0) * i as f64 / 128.0;
        sup_tau = sup_tau.max(beta.kappa_tau(s)?.1.abs());
    }
    if sup_tau <= PLANE_TAU_TOL {
        return Err(GeomError::PlaneCurveNotAllowed(sup_tau));
    }
    let (ca, sa) = (a.cos(), a.sin());
    curve_from_coeffs(beta.clone(), move |kt| {
        let (k, k1) = (kt.kappa, kt.kappa_d1);
        let (t, t1, t2) = (kt.tau, kt.tau_d1, kt.tau_d2);
        [
            [ca, 0.0, 0.0, -sa],
            [0.0, ca, t * sa, 0.0],
            [-ca, -k * t * sa, k * ca + t1 * sa, t * t * sa],
            [
                k * t * sa,
                -ca * (1.0 + k * k) - sa * (k1 * t + 2.0 * k * t1),
                k1 * ca + sa * (t2 - k * k * t - t * t * t),
                k * t * ca + 3.0 * t * t1 * sa,
            ],
        ]
    })
}

/// Base-to-partner construction per the frame dictionary:
/// β(σ) = cos a·α(s(σ)) + sin a·N_α(s(σ)).
///
/// Corresponding points sit at geodesic distance a. For a verified pair
/// with ε = +1 this recovers the partner; ε = −1 pairs have their partner
/// at −N_α instead.
pub fn mate_from_mannheim<C>(alpha: &Arc<C>, a: f64) -> Result<ParamCurveS3>
where
    C: FramedCurveS3 + Send + Sync + 'static,
{
    check_unit_radius(alpha.radius())?;
    let (ca, sa) = (a.cos(), a.sin());
    curve_from_coeffs(alpha.clone(), move |kt| {
        let (k, k1, k2) = (kt.kappa, kt.kappa_d1, kt.kappa_d2);
        let (t, t1, t2) = (kt.tau, kt.tau_d1, kt.tau_d2);
        [
            [ca, 0.0, sa, 0.0],
            [0.0, ca - k * sa, 0.0, t * sa],
            [
                k * sa - ca,
                -k1 * sa,
                k * ca - (k * k + t * t) * sa,
                t1 * sa,
            ],
            [
                2.0 * k1 * sa,
                -ca * (1.0 + k * k) + sa * (k * (1.0 + k * k + t * t) - k2),
                k1 * ca - 3.0 * (k * k1 + t * t1) * sa,
                k * t * ca + sa * (t2 - t * (k * k + t * t)),
            ],
        ]
    })
}

struct SampleData {
    alpha: Vec4,
    n_a: Vec4,
    b_a: Vec4,
    kappa_a: f64,
    tau_a: f64,
    beta: Vec4,
    b_b: Vec4,
    kappa_b: f64,
    tau_b: f64,
    theta: f64,
}

fn collect_samples(alpha: &FrameField, beta: &FrameField) -> Result<Vec<SampleData>> {
    if alpha.len() != beta.len() || alpha.len() < 5 {
        return Err(GeomError::EmptyInput(format!(
            "pair fields must share a grid of >= 5 samples (got {} and {})",
            alpha.len(),
            beta.len()
        )));
    }
    check_unit_radius(alpha.radius)?;
    check_unit_radius(beta.radius)?;
    let mut out = Vec::with_capacity(alpha.len());
    for (fa, fb) in alpha.frames.iter().zip(beta.frames.iter()) {
        let cos_theta = fa.t_dir().dot(fb.t_dir()).clamp(-1.0, 1.0);
        let theta = cos_theta.acos();
        if theta.sin() < SIN_THETA_MIN {
            return Err(GeomError::DegenerateAngle(theta.sin()));
        }
        out.push(SampleData {
            alpha: fa.point.coords(),
            n_a: fa.n_dir(),
            b_a: fa.b_dir(),
            kappa_a: fa.kappa,
            tau_a: fa.tau,
            beta: fb.point.coords(),
            b_b: fb.b_dir(),
            kappa_b: fb.kappa,
            tau_b: fb.tau,
            theta,
        });
    }
    Ok(out)
}

/// Builds the σ ↔ s correspondence: θ(σ) from the tangent fields, ds/dσ by
/// two independent routes, s(σ) by integrating the arc-length relation.
pub fn build_correspondence(
    alpha: &FrameField,
    beta: &FrameField,
    a: f64,
) -> Result<PairCorrespondence> {
    let samples = collect_samples(alpha, beta)?;
    let (ca, sa) = (a.cos(), a.sin());
    let sigma_grid: Vec<f64> = beta.frames.iter().map(|f| f.s).collect();
    if sigma_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GeomError::DomainError(
            "partner arc length not strictly increasing".into(),
        ));
    }
    let theta: Vec<f64> = samples.iter().map(|s| s.theta).collect();
    let s_prime: Vec<f64> = samples
        .iter()
        .map(|s| ca * s.theta.cos() + s.tau_b * sa * s.theta.sin())
        .collect();
    let s_prime_from_torsion: Vec<f64> = samples
        .iter()
        .map(|s| (ca * ca + s.tau_b * s.tau_b * sa * sa).sqrt())
        .collect();
    if s_prime.iter().any(|&v| v <= 0.0) {
        return Err(GeomError::DomainError(
            "ds/dsigma <= 0: correspondence not monotone (check the sign of tau_beta sin a)"
                .into(),
        ));
    }
    let mut s_of_sigma = Vec::with_capacity(sigma_grid.len());
    let mut acc = alpha.frames[0].s;
    s_of_sigma.push(acc);
    for k in 1..sigma_grid.len() {
        let h = sigma_grid[k] - sigma_grid[k - 1];
        acc += 0.5 * h * (s_prime[k - 1] + s_prime[k]);
        s_of_sigma.push(acc);
    }
    Ok(PairCorrespondence {
        sigma_grid,
        s_of_sigma,
        s_prime,
        s_prime_from_torsion,
        theta,
    })
}

/// λ = tan a and μ(σ) = tan a · cot θ(σ), the certificate data for
/// λκ_α + μτ_α = 1.
pub fn extract_lambda_mu(a: f64, corr: &PairCorrespondence) -> Result<(f64, Vec<f64>)> {
    if (a - std::f64::consts::FRAC_PI_2).abs() < 1e-9 {
        return Err(GeomError::TangentPole);
    }
    let lambda = a.tan();
    let mu = corr
        .theta
        .iter()
        .map(|&th| {
            if th.sin().abs() < SIN_THETA_MIN {
                Err(GeomError::DegenerateAngle(th.sin()))
            } else {
                Ok(lambda * th.cos() / th.sin())
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((lambda, mu))
}

fn grid_is_uniform(xs: &[f64]) -> Option<f64> {
    let h = xs[1] - xs[0];
    if xs
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() < 1e-9 * h.abs().max(1e-12))
    {
        Some(h)
    } else {
        None
    }
}

/// Evaluates every pair identity on the shared grid and assembles the
/// report. The fields must be sampled at corresponding points (row k of
/// `alpha` corresponds to row k of `beta`); each frame's `s` must hold
/// that curve's own arc length.
#[allow(clippy::needless_range_loop)] // interior indices address four parallel arrays
pub fn verify_pair(alpha: &FrameField, beta: &FrameField, a: f64) -> Result<MannheimPairReport> {
    let corr = build_correspondence(alpha, beta, a)?;
    let samples = collect_samples(alpha, beta)?;
    let (ca, sa) = (a.cos(), a.sin());
    let n = samples.len();

    // orientation of the canonical normal against the connecting geodesic
    let mean_align: f64 = samples
        .iter()
        .map(|sd| sd.n_a.dot(sd.beta * sa + sd.b_b * ca))
        .sum::<f64>()
        / n as f64;
    let eps = if mean_align >= 0.0 { 1.0 } else { -1.0 };

    let (lambda, mu) = extract_lambda_mu(a, &corr)?;

    let mut res = PairResiduals::default();
    let mut dist_sum = 0.0;
    let mut binormal_dots = Vec::with_capacity(n);
    for (k, sd) in samples.iter().enumerate() {
        let th = sd.theta;
        let (sin_t, cos_t) = th.sin_cos();

        // Definition 2.1: follow the principal normal geodesic of alpha a
        // distance a; it must arrive at beta with velocity B_beta.
        let p_alpha = SpherePoint::project(sd.alpha, 1.0)?;
        let geo = GeodesicS3::new(p_alpha, TangentVector::projected(p_alpha, sd.n_a * eps))?;
        let arrive = geodesic_eval(&geo, a);
        let arrive_vel = sd.alpha * -sa + sd.n_a * (eps * ca);
        let pos_gap = (sd.beta - arrive.coords()).norm();
        let vel_gap = (sd.b_b - arrive_vel).norm();
        res.geodesic_coincidence = res.geodesic_coincidence.max(pos_gap.max(vel_gap));

        res.eq3_normal = res
            .eq3_normal
            .max((sd.n_a - (sd.beta * sa + sd.b_b * ca) * eps).norm());
        res.eq10_binormal = res
            .eq10_binormal
            .max((sd.b_b - (sd.alpha * -sa + sd.n_a * (eps * ca))).norm());
        res.thm21a = res.thm21a.max((sd.tau_b - th.tan() / a.tan()).abs());
        res.thm21b = res
            .thm21b
            .max((sd.tau_a * sa * cos_t - (ca - eps * sd.kappa_a * sa) * sin_t).abs());
        res.thm21c = res
            .thm21c
            .max((cos_t * cos_t - ca * ca + eps * sd.kappa_a * sa * ca).abs());
        res.thm21d = res
            .thm21d
            .max((sin_t * sin_t - sd.tau_a * sd.tau_b * sa * sa).abs());
        res.eq23_arclength = res
            .eq23_arclength
            .max((corr.s_prime[k] - corr.s_prime_from_torsion[k]).abs());
        res.eq24_condition = res
            .eq24_condition
            .max((1.0 - lambda * (eps * sd.kappa_a) - mu[k] * sd.tau_a).abs());

        let point_angle = (sd.alpha.dot(sd.beta)).clamp(-1.0, 1.0).acos();
        res.a_constancy = res.a_constancy.max((point_angle - a).abs());
        dist_sum += point_angle;
        binormal_dots.push(sd.b_a.dot(sd.b_b));
    }

    // dθ/dσ against the θ' identity, interior points only
    match grid_is_uniform(&corr.sigma_grid) {
        Some(h) if n >= 5 => {
            for k in 2..n - 2 {
                let dth = d1_grid5(&corr.theta, k, h);
                let rhs = -samples[k].kappa_b * samples[k].tau_b * sa
                    / (corr.s_prime[k] * corr.theta[k].sin());
                res.eq9_theta_prime = res.eq9_theta_prime.max((dth - rhs).abs());
            }
        }
        _ => {
            for k in 1..n - 1 {
                let dth = d1_grid3(&corr.sigma_grid, &corr.theta, k);
                let rhs = -samples[k].kappa_b * samples[k].tau_b * sa
                    / (corr.s_prime[k] * corr.theta[k].sin());
                res.eq9_theta_prime = res.eq9_theta_prime.max((dth - rhs).abs());
            }
        }
    }

    let mean_b: f64 = binormal_dots.iter().sum::<f64>() / n as f64;
    res.binormal_angle_constancy = binormal_dots
        .iter()
        .fold(0.0, |m, v| m.max((v - mean_b).abs()));

    let theta_mean: f64 = corr.theta.iter().sum::<f64>() / n as f64;
    let theta_variance =
        corr.theta.iter().map(|t| (t - theta_mean).powi(2)).sum::<f64>() / n as f64;

    Ok(MannheimPairReport {
        a,
        d: dist_sum / n as f64,
        lambda,
        epsilon: eps,
        mu,
        theta: corr.theta.clone(),
        theta_variance,
        residuals: res,
    })
}

/// The base-curve curvature forced by the Mannheim condition for a given
/// torsion profile and angle:
/// κ_β(σ) = −τ_β'(σ)·sin a·cos a / (cos²a + τ_β(σ)²·sin²a).
///
/// Derived by differentiating tan θ = τ_β tan a (the tangent split) and
/// matching dθ/dσ = −κ_β (the θ' identity combined with the split); it is
/// also the unique curvature killing the T_β component of the constructed
/// α″ + α. Errors with `NotAdmissible` when the result is not positive on
/// the domain.
pub fn admissible_base_curvature(tau: &ScalarFn, a: f64, domain: (f64, f64)) -> Result<ScalarFn> {
    let (ca, sa) = (a.cos(), a.sin());
    let coeff = sa * ca;
    let t = tau.clone();
    let value = move |s: f64| {
        let tv = t.value(s);
        -t.derivative(s) * coeff / (ca * ca + tv * tv * sa * sa)
    };
    let t2 = tau.clone();
    let deriv = move |s: f64| {
        let tv = t2.value(s);
        let t1 = t2.derivative(s);
        let tdd = t2.second_derivative(s);
        let d = ca * ca + tv * tv * sa * sa;
        -coeff * (tdd * d - t1 * 2.0 * tv * t1 * sa * sa) / (d * d)
    };
    let mut min_k = f64::INFINITY;
    let mut argmin = domain.0;
    for i in 0..513 {
        let s = domain.0 + (domain.1 - domain.0) * i as f64 / 512.0;
        let k = value(s);
        if k < min_k {
            min_k = k;
            argmin = s;
        }
    }
    if !(min_k > 0.0) {
        return Err(GeomError::NotAdmissible(format!(
            "kappa_beta(sigma) = {min_k:.3e} at sigma = {argmin:.3} (needs tau_beta' sign \
             opposite to sin a cos a; negate the torsion slope or move a across pi/2)"
        )));
    }
    Ok(ScalarFn::from_parts(
        Arc::new(value),
        Some(Arc::new(deriv)),
        None,
    ))
}

/// Verification options for generated pairs.
#[derive(Clone, Copy, Debug)]
pub struct PairOptions {
    /// verification samples per unit arc length
    pub grid_density: f64,
    /// residual tolerance a generated pair is expected to meet
    pub tolerance: f64,
}

impl Default for PairOptions {
    fn default() -> Self {
        PairOptions {
            grid_density: 512.0,
            tolerance: 1e-6,
        }
    }
}

/// A constructed and verified pair.
pub struct GeneratedPair {
    pub beta: Arc<SynthesizedCurve>,
    pub alpha: ParamCurveS3,
    pub alpha_field: FrameField,
    pub beta_field: FrameField,
    pub correspondence: PairCorrespondence,
    pub report: MannheimPairReport,
}

/// End-to-end construction from a torsion profile: admissible κ_β, base
/// synthesis, partner construction and the full verification report.
///
/// The verification grid samples cell midpoints: σ = 0 of the canonical
/// fixtures can be a geodesic point of α (κ_α(0) = 0 when τ_β(0)² = 1),
/// where the frame is undefined.
pub fn generate_pair(
    tau_beta: &ScalarFn,
    a: f64,
    domain: (f64, f64),
    opts: &PairOptions,
) -> Result<GeneratedPair> {
    let kappa_beta = admissible_base_curvature(tau_beta, a, domain)?;
    let profile = CurvatureProfile::new(kappa_beta, tau_beta.clone(), domain)?;
    let init = standard_initial_frame(&profile, 1.0)?;
    let beta = Arc::new(synthesize_from_curvatures(
        &profile,
        &init,
        1.0,
        &StepControl::with_density(opts.grid_density),
    )?);
    let alpha = base_to_mannheim(&beta, a)?;
    let cells = ((domain.1 - domain.0) * opts.grid_density).round().max(8.0) as usize;
    let grid = midpoint_grid(domain.0, domain.1, cells);
    let beta_field = beta.frame_field_on(&grid)?;
    let alpha_field = frame_field_over_grid(&alpha, &grid)?;
    let report = verify_pair(&alpha_field, &beta_field, a)?;
    let correspondence = build_correspondence(&alpha_field, &beta_field, a)?;
    Ok(GeneratedPair {
        beta,
        alpha,
        alpha_field,
        beta_field,
        correspondence,
        report,
    })
}

/// Min-to-max spreads of measured curvature samples (a Mannheim curve
/// cannot have both constant).
pub fn constant_curvature_spread(kappas: &[f64], taus: &[f64]) -> (f64, f64) {
    let spread = |v: &[f64]| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in v {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        hi - lo
    };
    (spread(kappas), spread(taus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frenet::max_abs_tau;
    use std::f64::consts::FRAC_PI_4;

    fn linear_tau(c0: f64, c1: f64) -> ScalarFn {
        ScalarFn::with_derivatives(move |s| c0 + c1 * s, move |_| c1, |_| 0.0)
    }

    fn one_over_one_plus_s() -> ScalarFn {
        ScalarFn::with_derivatives(
            |s| 1.0 / (1.0 + s),
            |s| -1.0 / (1.0 + s).powi(2),
            |s| 2.0 / (1.0 + s).powi(3),
        )
    }

    #[test]
    fn admissible_curvature_matches_hand_value() {
        // a = pi/4, tau = 1 - sigma/2: kappa = (1/2)/(1 + tau^2), 0.25 at 0
        let tau = linear_tau(1.0, -0.5);
        let k = admissible_base_curvature(&tau, FRAC_PI_4, (0.0, 1.0)).unwrap();
        assert!((k.value(0.0) - 0.25).abs() < 1e-12);
        let tv = 1.0 - 0.5 * 0.6;
        assert!((k.value(0.6) - 0.5 / (1.0 + tv * tv)).abs() < 1e-12);
    }

    #[test]
    fn constant_tau_is_not_admissible() {
        let tau = ScalarFn::constant(0.7);
        assert!(matches!(
            admissible_base_curvature(&tau, FRAC_PI_4, (0.0, 1.0)),
            Err(GeomError::NotAdmissible(_))
        ));
    }

    #[test]
    fn increasing_tau_is_not_admissible_in_first_quadrant() {
        let tau = linear_tau(1.0, 0.5);
        assert!(matches!(
            admissible_base_curvature(&tau, FRAC_PI_4, (0.0, 1.0)),
            Err(GeomError::NotAdmissible(_))
        ));
    }

    #[test]
    fn canonical_pair_verifies_below_tolerance() {
        let tau = linear_tau(1.0, -0.5);
        let pair = generate_pair(&tau, FRAC_PI_4, (0.0, 1.0), &PairOptions::default()).unwrap();
        let r = &pair.report;
        assert!(r.residuals.all_finite());
        for (name, v) in r.residuals.entries() {
            assert!(v <= 1e-6, "{name} = {v:.3e}");
        }
        assert_eq!(r.epsilon, -1.0, "tau_beta < 1 pairs are epsilon = -1");
        assert_eq!(r.lambda, FRAC_PI_4.tan());
        assert!(r.theta_variance > 1e-4);
        assert!((r.d - FRAC_PI_4).abs() < 1e-9);
        let mu_spread = r.mu.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - r.mu.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(mu_spread > 1e-3);
    }

    #[test]
    fn epsilon_plus_pair_has_literal_mate() {
        // tau in (1.5, 2): (tau^2 - 1) sin a cos a > 0, so epsilon = +1 and
        // beta = cos a alpha + sin a N_alpha literally.
        let tau = linear_tau(2.0, -0.5);
        let pair = generate_pair(&tau, FRAC_PI_4, (0.0, 1.0), &PairOptions::default()).unwrap();
        assert_eq!(pair.report.epsilon, 1.0);
        assert!(pair.report.residuals.max() <= 1e-6);
        let (ca, sa) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
        for (fa, fb) in pair
            .alpha_field
            .frames
            .iter()
            .zip(pair.beta_field.frames.iter())
        {
            let mate = fa.point.coords() * ca + fa.n_dir() * sa;
            assert!((mate - fb.point.coords()).norm() < 1e-7);
        }
        // Full round trip: sample the mate of alpha (cos a alpha + sin a
        // N_alpha), re-measure its frames as an independent interpolated
        // curve, and push it back through the base construction
        // (cos a mate - sin a B_mate). For epsilon = +1 this recovers
        // alpha. Denser sampling keeps the spline's O(h^2) normal error
        // under the tolerance.
        let dense = generate_pair(
            &ScalarFn::with_derivatives(|s| 2.0 - 0.5 * s, |_| -0.5, |_| 0.0),
            FRAC_PI_4,
            (0.0, 1.0),
            &PairOptions {
                grid_density: 1536.0,
                tolerance: 1e-6,
            },
        )
        .unwrap();
        let samples: Vec<(f64, crate::vec4::Vec4)> = dense
            .alpha_field
            .grid
            .iter()
            .zip(dense.alpha_field.frames.iter())
            .map(|(s, f)| (*s, f.point.coords() * ca + f.n_dir() * sa))
            .collect();
        let mate_curve = crate::curve::curve_from_samples(&samples, 1.0).unwrap();
        for s in midpoint_grid(0.05, 0.95, 48) {
            let mf = crate::frenet::frenet_apparatus(&mate_curve, s).unwrap();
            let back = mf.point.coords() * ca - mf.b_dir() * sa;
            let alpha_pt = dense.alpha.position_raw(s);
            assert!(
                (back - alpha_pt).norm() < 1e-6,
                "round trip gap {} at {s}",
                (back - alpha_pt).norm()
            );
        }
    }

    #[test]
    fn correspondence_with_constant_unit_torsion() {
        // tau == 1, a = pi/4: theta = pi/4, s' = 1 by both routes
        let profile = CurvatureProfile::new(
            ScalarFn::constant(0.8),
            ScalarFn::constant(1.0),
            (0.0, 1.0),
        )
        .unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let beta = Arc::new(
            synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap(),
        );
        let alpha = base_to_mannheim(&beta, FRAC_PI_4).unwrap();
        let grid = midpoint_grid(0.0, 1.0, 64);
        let bf = beta.frame_field_on(&grid).unwrap();
        let af = frame_field_over_grid(&alpha, &grid).unwrap();
        let corr = build_correspondence(&af, &bf, FRAC_PI_4).unwrap();
        for k in 0..corr.theta.len() {
            assert!((corr.theta[k] - FRAC_PI_4).abs() < 1e-9);
            assert!((corr.s_prime[k] - 1.0).abs() < 1e-9);
            assert!((corr.s_prime_from_torsion[k] - 1.0).abs() < 1e-9);
        }
        // constant theta = pi/4 with a = pi/4 gives the degenerate mu == 1
        let (_, mu) = extract_lambda_mu(FRAC_PI_4, &corr).unwrap();
        for m in mu {
            assert!((m - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn base_to_mannheim_rejects_plane_curves() {
        let profile = CurvatureProfile::new(
            ScalarFn::constant(1.0),
            ScalarFn::constant(0.0),
            (0.0, 1.0),
        )
        .unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let beta = Arc::new(
            synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap(),
        );
        assert!(matches!(
            base_to_mannheim(&beta, FRAC_PI_4),
            Err(GeomError::PlaneCurveNotAllowed(_))
        ));
    }

    #[test]
    fn base_to_mannheim_at_a_zero_is_identity() {
        let tau = linear_tau(1.0, -0.5);
        let kappa = admissible_base_curvature(&tau, FRAC_PI_4, (0.0, 1.0)).unwrap();
        let profile = CurvatureProfile::new(kappa, tau, (0.0, 1.0)).unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let beta = Arc::new(
            synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap(),
        );
        let alpha = base_to_mannheim(&beta, 0.0).unwrap();
        for i in 0..9 {
            let s = i as f64 / 8.0;
            let d = (alpha.position_raw(s) - beta.frame_at(s).unwrap().alpha).norm();
            assert!(d < 1e-12);
        }
        // and the angle between corresponding position vectors is cos a
        let a = 0.9;
        let alpha = base_to_mannheim(&beta, a).unwrap();
        for i in 0..9 {
            let s = i as f64 / 8.0;
            let dot = alpha.position_raw(s).dot(beta.frame_at(s).unwrap().alpha);
            assert!((dot - a.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn mate_points_sit_at_distance_a() {
        let profile = CurvatureProfile::new(
            ScalarFn::constant(1.0),
            one_over_one_plus_s(),
            (0.0, 1.0),
        )
        .unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let alpha = Arc::new(
            synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap(),
        );
        let mate = mate_from_mannheim(&alpha, 0.6).unwrap();
        for i in 0..16 {
            let s = 0.05 + 0.9 * i as f64 / 15.0;
            let p = alpha.frame_at(s).unwrap().alpha;
            let q = mate.position_raw(s);
            let dist = crate::sphere::geodesic_distance(
                &SpherePoint::project(p, 1.0).unwrap(),
                &SpherePoint::project(q, 1.0).unwrap(),
            )
            .unwrap();
            assert!((dist - 0.6).abs() < 1e-9);
        }
        // a = 0 collapses the mate onto the curve itself
        let same = mate_from_mannheim(&alpha, 0.0).unwrap();
        for i in 0..9 {
            let s = i as f64 / 8.0;
            let d = (same.position_raw(s) - alpha.frame_at(s).unwrap().alpha).norm();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn generic_mate_fails_definition_residual() {
        // alpha with constant curvature cannot be Mannheim; its literal
        // mate must miss the binormal-direction clause badly.
        let profile = CurvatureProfile::new(
            ScalarFn::constant(1.0),
            one_over_one_plus_s(),
            (0.0, 1.0),
        )
        .unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let alpha = Arc::new(
            synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap(),
        );
        let mate = mate_from_mannheim(&alpha, 0.6).unwrap();
        let grid = midpoint_grid(0.05, 0.95, 128);
        let alpha_pc = alpha.as_param_curve().unwrap();
        let af = frame_field_over_grid(&alpha_pc, &grid).unwrap();
        let bf = frame_field_over_grid(&mate, &grid).unwrap();
        let report = verify_pair(&af, &bf, 0.6).unwrap();
        assert!(
            report.residuals.geodesic_coincidence > 1e-2,
            "geodesic_coincidence = {:.3e}",
            report.residuals.geodesic_coincidence
        );
        assert!(report.residuals.a_constancy < 1e-8);
    }

    #[test]
    fn degenerate_angle_at_a_zero() {
        let tau = linear_tau(1.0, -0.5);
        let kappa = admissible_base_curvature(&tau, FRAC_PI_4, (0.0, 1.0)).unwrap();
        let profile = CurvatureProfile::new(kappa, tau, (0.0, 1.0)).unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let beta = Arc::new(
            synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap(),
        );
        let alpha = base_to_mannheim(&beta, 0.0).unwrap();
        let grid = midpoint_grid(0.0, 1.0, 32);
        let bf = beta.frame_field_on(&grid).unwrap();
        let af = frame_field_over_grid(&alpha, &grid).unwrap();
        assert!(matches!(
            verify_pair(&af, &bf, 0.0),
            Err(GeomError::DegenerateAngle(_))
        ));
    }

    #[test]
    fn frame_dictionary_holds_with_orientation_sign() {
        let tau = linear_tau(1.0, -0.5);
        let pair = generate_pair(&tau, FRAC_PI_4, (0.0, 1.0), &PairOptions::default()).unwrap();
        let eps = pair.report.epsilon;
        for ((fa, fb), th) in pair
            .alpha_field
            .frames
            .iter()
            .zip(pair.beta_field.frames.iter())
            .zip(pair.report.theta.iter())
        {
            let (sin_t, cos_t) = th.sin_cos();
            let t16 = fb.t_dir() - (fa.t_dir() * cos_t + fa.b_dir() * (eps * sin_t));
            let t17 = fb.n_dir() - (fa.t_dir() * sin_t - fa.b_dir() * (eps * cos_t));
            assert!(t16.norm() < 1e-7, "Eq16 {}", t16.norm());
            assert!(t17.norm() < 1e-7, "Eq17 {}", t17.norm());
        }
    }

    #[test]
    fn lambda_mu_certificate() {
        let tau = linear_tau(1.0, -0.5);
        let pair = generate_pair(&tau, FRAC_PI_4, (0.0, 1.0), &PairOptions::default()).unwrap();
        let (lambda, mu) = extract_lambda_mu(FRAC_PI_4, &pair.correspondence).unwrap();
        assert_eq!(lambda, FRAC_PI_4.tan());
        // mu == tan a cot theta == 1/tau_beta for this family
        for (m, f) in mu.iter().zip(pair.beta_field.frames.iter()) {
            assert!((m - 1.0 / f.tau).abs() < 1e-7);
        }
        assert!(matches!(
            extract_lambda_mu(std::f64::consts::FRAC_PI_2, &pair.correspondence),
            Err(GeomError::TangentPole)
        ));
    }

    #[test]
    fn pair_consequences_hold_on_generated_pair() {
        let tau = linear_tau(1.0, -0.5);
        let pair = generate_pair(&tau, FRAC_PI_4, (0.0, 1.0), &PairOptions::default()).unwrap();
        // a Mannheim curve is never a plane curve
        let sup_tau_alpha = pair
            .alpha_field
            .frames
            .iter()
            .fold(0.0f64, |m, f| m.max(f.tau.abs()));
        assert!(sup_tau_alpha > 1e-3);
        // kappa and tau of alpha are not both constant
        let ks: Vec<f64> = pair.alpha_field.frames.iter().map(|f| f.kappa).collect();
        let ts: Vec<f64> = pair.alpha_field.frames.iter().map(|f| f.tau).collect();
        let (sk, st) = constant_curvature_spread(&ks, &ts);
        assert!(sk.max(st) > 1e-3);
        // consistency of the two squared-angle identities:
        // reconstructed cos² + sin² = 1
        let eps = pair.report.epsilon;
        let (ca, sa) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
        for (fa, fb) in pair
            .alpha_field
            .frames
            .iter()
            .zip(pair.beta_field.frames.iter())
        {
            let c2 = ca * ca - eps * fa.kappa * sa * ca;
            let s2 = fa.tau * fb.tau * sa * sa;
            assert!((c2 + s2 - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn eq23_reconstruction_matches_measured_arclength() {
        let tau = linear_tau(1.0, -0.5);
        let pair = generate_pair(&tau, FRAC_PI_4, (0.0, 1.0), &PairOptions::default()).unwrap();
        // s(σ) integrated from the arc-length relation vs alpha's measured
        // arc length at the same samples
        for (sk, fa) in pair
            .correspondence
            .s_of_sigma
            .iter()
            .zip(pair.alpha_field.frames.iter())
        {
            assert!((sk - fa.s).abs() < 1e-6, "{} vs {}", sk, fa.s);
        }
    }

    #[test]
    fn max_abs_tau_helper_measures_synthesized_torsion() {
        let profile = CurvatureProfile::new(
            ScalarFn::constant(1.0),
            ScalarFn::constant(0.3),
            (0.0, 1.0),
        )
        .unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let c = synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap();
        let sup = max_abs_tau(&c.as_param_curve().unwrap(), 33).unwrap();
        assert!((sup - 0.3).abs() < 1e-6);
    }
}
