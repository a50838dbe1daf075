//! Acceptance suite: one test per criterion, each pinned to its stated
//! tolerance and printing one pass line (run with `-- --nocapture` to see
//! them alongside cargo's own per-test verdicts).

use std::f64::consts::FRAC_PI_4;
use std::process::Command;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mannheim_s3::curve::{CurveFn, DerivativeMode, ParamCurveS3};
use mannheim_s3::error::GeomError;
use mannheim_s3::frenet::{
    frame_field_over_grid, frenet_apparatus, midpoint_grid, CurvatureProfile, ScalarFn,
};
use mannheim_s3::gm4::{gm4_construct, gm4_verify};
use mannheim_s3::mannheim::{
    generate_pair, mate_from_mannheim, verify_pair, GeneratedPair, PairOptions,
};
use mannheim_s3::sphere::geodesic_distance;
use mannheim_s3::synthesis::{
    standard_initial_frame, synthesize_from_curvatures, StepControl, SynthesizedCurve,
};
use mannheim_s3::vec4::Vec4;
use mannheim_s3::zoo::{
    assess_measured_curvatures, ccr_profile, conical_helix_profile, example34_curve,
    general_helix_profile, HelixSign, MannheimCandidacy,
};

fn pass(n: u32, what: &str) {
    println!("ACCEPTANCE {n} [PASS] {what}");
}

fn small_circle(a: f64, domain: (f64, f64), analytic: bool) -> ParamCurveS3 {
    let (ca, sa) = (a.cos(), a.sin());
    let w = 1.0 / ca;
    let eval: CurveFn =
        Arc::new(move |s: f64| Vec4::new(ca * (w * s).cos(), ca * (w * s).sin(), sa, 0.0));
    let mode = if analytic {
        let d1: CurveFn =
            Arc::new(move |s: f64| Vec4::new(-(w * s).sin(), (w * s).cos(), 0.0, 0.0));
        let d2: CurveFn =
            Arc::new(move |s: f64| Vec4::new(-w * (w * s).cos(), -w * (w * s).sin(), 0.0, 0.0));
        let d3: CurveFn = Arc::new(move |s: f64| {
            Vec4::new(w * w * (w * s).sin(), -w * w * (w * s).cos(), 0.0, 0.0)
        });
        DerivativeMode::Analytic { d1, d2, d3 }
    } else {
        DerivativeMode::finite_difference()
    };
    ParamCurveS3::new(eval, mode, domain, 1.0).unwrap()
}

fn canonical_tau() -> ScalarFn {
    ScalarFn::with_derivatives(|s| 1.0 - 0.5 * s, |_| -0.5, |_| 0.0)
}

fn canonical_pair(density: f64) -> GeneratedPair {
    generate_pair(
        &canonical_tau(),
        FRAC_PI_4,
        (0.0, 1.0),
        &PairOptions {
            grid_density: density,
            tolerance: 1e-6,
        },
    )
    .unwrap()
}

fn generic_alpha() -> Arc<SynthesizedCurve> {
    let profile = CurvatureProfile::new(
        ScalarFn::constant(1.0),
        ScalarFn::with_derivatives(
            |s| 1.0 / (1.0 + s),
            |s| -1.0 / (1.0 + s).powi(2),
            |s| 2.0 / (1.0 + s).powi(3),
        ),
        (0.0, 1.0),
    )
    .unwrap();
    let init = standard_initial_frame(&profile, 1.0).unwrap();
    Arc::new(synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default()).unwrap())
}

#[test]
fn acceptance_1_frenet_extraction() {
    // small circle at a = pi/4: kappa = 1, tau = 0, both derivative modes
    for analytic in [true, false] {
        let c = small_circle(FRAC_PI_4, (0.0, 3.0), analytic);
        for i in 0..9 {
            let s = 0.25 + 0.3 * i as f64;
            let f = frenet_apparatus(&c, s).unwrap();
            assert!((f.kappa - 1.0).abs() <= 1e-6, "kappa {}", f.kappa);
            assert!(f.tau.abs() <= 1e-6, "tau {}", f.tau);
        }
    }
    // great circle: FrameDegenerate with measured kappa <= 1e-8
    let eval: CurveFn = Arc::new(|s: f64| Vec4::new(s.cos(), s.sin(), 0.0, 0.0));
    let gc = ParamCurveS3::new(eval, DerivativeMode::finite_difference(), (0.0, 3.0), 1.0)
        .unwrap();
    match frenet_apparatus(&gc, 1.3) {
        Err(GeomError::FrameDegenerate { kappa }) => {
            assert!(kappa <= 1e-8, "measured kappa {kappa}")
        }
        other => panic!("expected FrameDegenerate, got {other:?}"),
    }
    pass(1, "small circle kappa=1, tau=0 (1e-6); great circle degenerate (kappa <= 1e-8)");
}

#[test]
fn acceptance_2_synthesis_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..10 {
        // kappa range inside [0.2, 3], tau range inside [-2, 2]
        let k_lo = rng.gen_range(0.25..1.6);
        let k_hi = rng.gen_range(k_lo + 0.2..2.95);
        let (kc, ka) = (0.5 * (k_lo + k_hi), 0.5 * (k_hi - k_lo));
        let kw = rng.gen_range(0.5..3.0);
        let kp = rng.gen_range(0.0..std::f64::consts::TAU);
        let t_lo = rng.gen_range(-1.9..1.0);
        let t_hi = rng.gen_range(t_lo + 0.1..1.95);
        let (tc, ta) = (0.5 * (t_lo + t_hi), 0.5 * (t_hi - t_lo));
        let tw = rng.gen_range(0.5..3.0);
        let tp = rng.gen_range(0.0..std::f64::consts::TAU);
        let profile = CurvatureProfile::new(
            ScalarFn::with_derivatives(
                move |s| kc + ka * (kw * s + kp).sin(),
                move |s| ka * kw * (kw * s + kp).cos(),
                move |s| -ka * kw * kw * (kw * s + kp).sin(),
            ),
            ScalarFn::with_derivatives(
                move |s| tc + ta * (tw * s + tp).sin(),
                move |s| ta * tw * (tw * s + tp).cos(),
                move |s| -ta * tw * tw * (tw * s + tp).sin(),
            ),
            (0.0, 1.0),
        )
        .unwrap();
        let init = standard_initial_frame(&profile, 1.0).unwrap();
        let c = synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::default())
            .unwrap();
        assert!(
            c.max_sphere_drift() <= 1e-9,
            "case {case}: sphere drift {}",
            c.max_sphere_drift()
        );
        let pc = c.as_param_curve().unwrap();
        let mut sup_k: f64 = 0.0;
        let mut sup_t: f64 = 0.0;
        for s in midpoint_grid(0.0, 1.0, 64) {
            let f = frenet_apparatus(&pc, s).unwrap();
            sup_k = sup_k.max((f.kappa - profile.kappa.value(s)).abs());
            sup_t = sup_t.max((f.tau - profile.tau.value(s)).abs());
        }
        assert!(sup_k <= 1e-6, "case {case}: kappa error {sup_k}");
        assert!(sup_t <= 1e-6, "case {case}: tau error {sup_t}");
    }
    pass(2, "10 random profiles: re-extraction <= 1e-6, sphere drift <= 1e-9");
}

#[test]
fn acceptance_3_pair_end_to_end_and_convergence() {
    let pair = canonical_pair(512.0);
    for (name, v) in pair.report.residuals.entries() {
        assert!(v <= 1e-6, "{name} = {v:.3e} at grid 512");
    }

    // residual convergence, fine grids: everything at/under the numerical
    // floor is exempt, anything above must shrink at least 4x
    let fine = canonical_pair(1024.0);
    const FLOOR: f64 = 1e-8;
    for ((name, r512), (_, r1024)) in pair
        .report
        .residuals
        .entries()
        .iter()
        .zip(fine.report.residuals.entries().iter())
    {
        assert!(
            *r512 <= FLOOR || *r1024 <= r512 / 4.0,
            "{name}: {r512:.3e} -> {r1024:.3e} did not shrink 4x"
        );
    }

    // coarse grids, where discretization dominates: strict 4x shrink and
    // at least one residual genuinely live
    let c32 = canonical_pair(32.0);
    let c64 = canonical_pair(64.0);
    let mut live = 0;
    for ((name, r32), (_, r64)) in c32
        .report
        .residuals
        .entries()
        .iter()
        .zip(c64.report.residuals.entries().iter())
    {
        if *r32 > 1e-9 {
            live += 1;
            assert!(
                *r64 <= r32 / 4.0,
                "{name}: coarse {r32:.3e} -> {r64:.3e} did not shrink 4x"
            );
        }
    }
    assert!(live >= 1, "no residual above the coarse floor; convergence check vacuous");
    pass(3, "canonical pair: twelve residuals <= 1e-6 at grid 512; >= 4x shrink on doubling");
}

#[test]
fn acceptance_4_pair_constancy_suite() {
    let pair = canonical_pair(512.0);
    let r = &pair.report.residuals;
    assert!(r.a_constancy <= 1e-8, "a constancy {}", r.a_constancy);
    // independent distance measurement per sample
    let mut dist_dev: f64 = 0.0;
    for (fa, fb) in pair
        .alpha_field
        .frames
        .iter()
        .zip(pair.beta_field.frames.iter())
    {
        let d = geodesic_distance(&fa.point, &fb.point).unwrap();
        let expect = FRAC_PI_4.min(2.0 * std::f64::consts::PI - FRAC_PI_4);
        dist_dev = dist_dev.max((d - expect).abs());
    }
    assert!(dist_dev <= 1e-7, "distance deviation {dist_dev}");
    assert!(
        pair.report.theta_variance > 1e-4,
        "theta variance {}",
        pair.report.theta_variance
    );
    assert!(
        r.binormal_angle_constancy <= 1e-6,
        "binormal constancy {}",
        r.binormal_angle_constancy
    );
    pass(4, "angle constant (1e-8), distance = a (1e-7), theta non-constant, <B,B> constant (1e-6)");
}

#[test]
fn acceptance_5_lambda_mu_certificate() {
    let pair = canonical_pair(512.0);
    assert_eq!(pair.report.lambda, FRAC_PI_4.tan(), "lambda must be tan a exactly");
    assert!(
        pair.report.residuals.eq24_condition <= 1e-6,
        "eq24 {}",
        pair.report.residuals.eq24_condition
    );
    let spread = pair.report.mu.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - pair.report.mu.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread > 1e-3, "mu spread {spread}");
    pass(5, "lambda = tan a exactly; |1 - lambda*kappa - mu*tau| <= 1e-6; mu non-constant");
}

#[test]
fn acceptance_6_never_plane_never_constant() {
    // generated Mannheim curves are never plane curves (both orientation
    // classes)
    for tau in [canonical_tau(), ScalarFn::with_derivatives(|s| 2.0 - 0.5 * s, |_| -0.5, |_| 0.0)]
    {
        let pair = generate_pair(&tau, FRAC_PI_4, (0.0, 1.0), &PairOptions::default()).unwrap();
        let sup_tau = pair
            .alpha_field
            .frames
            .iter()
            .fold(0.0f64, |m, f| m.max(f.tau.abs()));
        assert!(sup_tau > 1e-3, "sup|tau_alpha| = {sup_tau}");
    }
    // the constant-curvature curve cannot be Mannheim
    let c = example34_curve((0.0, 4.0)).unwrap();
    let mut kappas = Vec::new();
    let mut taus = Vec::new();
    for i in 0..20 {
        let s = 0.1 + 3.8 * i as f64 / 19.0;
        let f = frenet_apparatus(&c, s).unwrap();
        kappas.push(f.kappa);
        taus.push(f.tau);
    }
    let (sk, st) = mannheim_s3::mannheim::constant_curvature_spread(&kappas, &taus);
    assert!(sk <= 1e-8 && st <= 1e-8, "spreads {sk:.3e}, {st:.3e}");
    match assess_measured_curvatures(&kappas, &taus, 1e-3) {
        MannheimCandidacy::NotMannheimCandidate { .. } => {}
        other => panic!("expected NotMannheimCandidate, got {other:?}"),
    }
    pass(6, "generated pairs have sup|tau_alpha| > 1e-3; constant-curvature curve flagged (spread <= 1e-8)");
}

#[test]
fn acceptance_7_gm4_pipeline() {
    let alpha = generic_alpha();
    let curve = gm4_construct(&alpha, 1.0, (0.0, 1.8), 1024.0).unwrap();
    let res = gm4_verify(&curve, 256).unwrap();
    assert!(res.unit_speed_error <= 1e-8, "unit speed {}", res.unit_speed_error);
    assert!(res.epsilon_consistent, "mixed epsilon fits");
    let eq26_max = res
        .eq26_residuals
        .k1
        .max(res.eq26_residuals.k2)
        .max(res.eq26_residuals.k3);
    assert!(eq26_max <= 1e-5, "eq26 {eq26_max:.3e}");
    assert!(
        (res.eq28_c - res.epsilon / res.lambda).abs() <= 1e-5,
        "c = {} vs eps/lambda = {}",
        res.eq28_c,
        res.epsilon / res.lambda
    );
    assert!(res.eq28_residual <= 1e-6, "eq28 residual {}", res.eq28_residual);
    pass(7, "gm4: |gamma'|=1 (1e-8); eq26 <= 1e-5, single epsilon; c = eps/lambda (1e-5), residual <= 1e-6");
}

#[test]
fn acceptance_8_zoo_identities() {
    let ccr = ccr_profile(
        2.0,
        FRAC_PI_4,
        ScalarFn::new(|s| FRAC_PI_4 + s / 10.0),
        (0.0, 1.0),
    )
    .unwrap();
    assert!(ccr.certificate_residual(513) <= 1e-10, "ccr {}", ccr.certificate_residual(513));

    let conical = conical_helix_profile(1.0, 1.0, 2.0, 3.0, (0.0, 1.0)).unwrap();
    assert!(
        conical.certificate_residual(513) <= 1e-10,
        "conical {}",
        conical.certificate_residual(513)
    );
    // expanded closed form of mu at delta = 1
    for i in 0..=512 {
        let s = i as f64 / 512.0;
        let (r0, r1) = (2.0, 3.0);
        let expanded = (s * s + (r0 + r1 - 1.0) * s + (r0 * r1 - r1)) / (s + r0);
        assert!((conical.mu.value(s) - expanded).abs() <= 1e-12);
    }

    let helix = general_helix_profile(
        0.4,
        0.7,
        ScalarFn::new(|s| 0.2 + 0.3 * s),
        HelixSign::Plus,
        (0.0, 1.0),
    )
    .unwrap();
    assert!(
        helix.certificate_residual(513) <= 1e-10,
        "helix {}",
        helix.certificate_residual(513)
    );
    pass(8, "ccr, conical helix (gamma=delta=1) and general helix satisfy the certificate (1e-10); mu matches the closed form (1e-12)");
}

#[test]
fn acceptance_9_negative_control() {
    // library level: the literal mate of a non-Mannheim curve misses the
    // definition residual
    let alpha = generic_alpha();
    let mate = mate_from_mannheim(&alpha, 0.6).unwrap();
    let grid = midpoint_grid(0.05, 0.95, 128);
    let af = frame_field_over_grid(&alpha.as_param_curve().unwrap(), &grid).unwrap();
    let bf = frame_field_over_grid(&mate, &grid).unwrap();
    let report = verify_pair(&af, &bf, 0.6).unwrap();
    assert!(
        report.residuals.geodesic_coincidence > 1e-2,
        "geodesic_coincidence {:.3e}",
        report.residuals.geodesic_coincidence
    );

    // CLI level: `pair verify` on the same data exits with code 3
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("alpha.json");
    let b_path = dir.path().join("mate.json");
    std::fs::write(&a_path, mannheim_s3::io::frame_field_to_json(&af)).unwrap();
    std::fs::write(&b_path, mannheim_s3::io::frame_field_to_json(&bf)).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_mannheim"))
        .args([
            "pair",
            "verify",
            "--alpha",
            a_path.to_str().unwrap(),
            "--beta",
            b_path.to_str().unwrap(),
            "--a",
            "0.6",
        ])
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3), "pair verify should exit 3");
    pass(9, "generic mate: geodesic_coincidence > 1e-2 and `pair verify` exits 3");
}
