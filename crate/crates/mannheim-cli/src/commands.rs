//! Subcommand implementations.

use std::sync::Arc;

use mannheim_s3::frenet::{frame_field_over_grid, midpoint_grid, FrameField};
use mannheim_s3::io;
use mannheim_s3::mannheim::{generate_pair, verify_pair, PairOptions};
use mannheim_s3::numerics::quad::adaptive_simpson;
use mannheim_s3::sphere::{stereographic_project, SpherePoint};
use mannheim_s3::synthesis::{standard_initial_frame, synthesize_from_curvatures, StepControl};
use mannheim_s3::zoo::zoo_families;

use crate::inputs::{
    emit, parse_domain, parse_pole, profile_from_exprs, read_frame_field, resolve_curve,
    tau_scalar_fn, ResolvedCurve,
};
use crate::{
    CliError, FrenetArgs, Gm4Args, Outcome, PairGenerateArgs, PairVerifyArgs, ProjectArgs,
    SynthesizeArgs,
};

/// Shared config invariants: tolerance > 0, grid density >= 16.
fn check_config(grid: f64, tol: f64) -> Result<(), CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Geometry(format!("--tol must be positive, got {tol}")));
    }
    if !(grid >= 16.0) {
        return Err(CliError::Geometry(format!(
            "--grid must be at least 16 samples per unit, got {grid}"
        )));
    }
    Ok(())
}

fn field_of(curve: &ResolvedCurve, grid: f64) -> Result<FrameField, CliError> {
    let (d0, d1) = curve.domain();
    let cells = ((d1 - d0) * grid).round().max(8.0) as usize;
    let samples = midpoint_grid(d0, d1, cells);
    match curve {
        ResolvedCurve::Synthesized(c) => c.frame_field_on(&samples).map_err(Into::into),
        ResolvedCurve::Parametrized(c) => frame_field_over_grid(c, &samples).map_err(Into::into),
    }
}

fn emit_field(
    field: &FrameField,
    format: &str,
    out: &Option<std::path::PathBuf>,
) -> Result<(), CliError> {
    let content = match format {
        "json" => io::frame_field_to_json(field),
        _ => io::frame_field_to_csv(field),
    };
    emit(out, &content)
}

pub fn cmd_frenet(args: FrenetArgs) -> Result<Outcome, CliError> {
    check_config(args.grid, 1.0)?;
    let curve = resolve_curve(&args.source, args.grid)?;
    let field = field_of(&curve, args.grid)?;
    emit_field(&field, &args.format, &args.out)?;
    Ok(Outcome::Ok)
}

pub fn cmd_synthesize(args: SynthesizeArgs) -> Result<Outcome, CliError> {
    check_config(args.grid, 1.0)?;
    let domain = parse_domain(&args.domain)?;
    let profile = profile_from_exprs(&args.kappa, &args.tau, domain)?;
    let init = standard_initial_frame(&profile, 1.0)?;
    let curve =
        synthesize_from_curvatures(&profile, &init, 1.0, &StepControl::with_density(args.grid))?;
    let cells = ((domain.1 - domain.0) * args.grid).round().max(8.0) as usize;
    let field = curve.frame_field_on(&midpoint_grid(domain.0, domain.1, cells))?;
    emit_field(&field, &args.format, &args.out)?;
    Ok(Outcome::Ok)
}

pub fn cmd_pair_generate(args: PairGenerateArgs) -> Result<Outcome, CliError> {
    check_config(args.grid, args.tol)?;
    let domain = parse_domain(&args.domain)?;
    let tau = tau_scalar_fn(&args.tau, domain)?;
    let opts = PairOptions {
        grid_density: args.grid,
        tolerance: args.tol,
    };
    let pair = generate_pair(&tau, args.a, domain, &opts)?;
    emit(&args.out, &io::report_to_json(&pair.report))?;
    if let Some(path) = &args.out_alpha {
        emit_field(&pair.alpha_field, &args.format, &Some(path.clone()))?;
    }
    if let Some(path) = &args.out_beta {
        emit_field(&pair.beta_field, &args.format, &Some(path.clone()))?;
    }
    let worst = pair.report.residuals.max();
    eprintln!(
        "pair generate: max residual {:.3e} (tolerance {:.3e}), lambda = {:.12}",
        worst, args.tol, pair.report.lambda
    );
    if worst <= args.tol {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::VerificationFailed)
    }
}

pub fn cmd_pair_verify(args: PairVerifyArgs) -> Result<Outcome, CliError> {
    check_config(512.0, args.tol)?;
    let alpha = read_frame_field(&args.alpha)?;
    let beta = read_frame_field(&args.beta)?;
    let report = verify_pair(&alpha, &beta, args.a)?;
    if let Some(out) = &args.out {
        emit(&Some(out.clone()), &io::report_to_json(&report))?;
    }
    let worst = report.residuals.max();
    eprintln!(
        "pair verify: max residual {:.3e} (tolerance {:.3e})",
        worst, args.tol
    );
    for (name, v) in report.residuals.entries() {
        eprintln!("  {name:26} {v:.3e}");
    }
    if worst <= args.tol {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::VerificationFailed)
    }
}

pub fn cmd_gm4(args: Gm4Args) -> Result<Outcome, CliError> {
    check_config(args.grid, args.tol)?;
    let domain = parse_domain(&args.domain)?;
    if args.lambda == 0.0 {
        return Err(CliError::Geometry("--lambda must be nonzero".into()));
    }
    let profile = profile_from_exprs(&args.kappa, &args.tau, domain)?;
    let init = standard_initial_frame(&profile, 1.0)?;
    let alpha = Arc::new(synthesize_from_curvatures(
        &profile,
        &init,
        1.0,
        &StepControl::with_density(args.grid),
    )?);
    // t range spanning the whole profile domain: dt/ds = (tau^2+kappa^2)/(lambda tau)
    let t_end = adaptive_simpson(
        |s| {
            let k = profile.kappa.value(s);
            let t = profile.tau.value(s);
            (t * t + k * k) / (args.lambda * t)
        },
        domain.0,
        domain.1,
        1e-10,
    );
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(CliError::Geometry(format!(
            "lambda and tau must share a sign over the domain (computed t range {t_end})"
        )));
    }
    let curve = mannheim_s3::gm4::gm4_construct(
        &alpha,
        args.lambda,
        (0.0, t_end * (1.0 - 1e-9)),
        args.grid.max(256.0),
    )?;
    let cells = ((domain.1 - domain.0) * args.grid).round().max(64.0) as usize;
    let result = mannheim_s3::gm4::gm4_verify(&curve, cells)?;
    emit(&args.out, &io::gm4_to_json(&result))?;
    if let Some(path) = &args.out {
        let csv_path = path.with_extension("csv");
        std::fs::write(&csv_path, io::gm4_to_csv(&result))?;
    }
    let eq26_max = result
        .eq26_residuals
        .k1
        .max(result.eq26_residuals.k2)
        .max(result.eq26_residuals.k3);
    eprintln!(
        "gm4: eq26 max {:.3e}, eq28 c {:.9} (residual {:.3e}), epsilon {}",
        eq26_max, result.eq28_c, result.eq28_residual, result.epsilon
    );
    let pass = result.epsilon_consistent
        && result.eq28_residual <= args.tol
        && eq26_max <= 10.0 * args.tol
        && result.unit_speed_error <= 1e-8;
    if pass {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::VerificationFailed)
    }
}

pub fn cmd_zoo_list() -> Result<Outcome, CliError> {
    for (name, description, params) in zoo_families() {
        if params.is_empty() {
            println!("{name}: {description}");
        } else {
            println!("{name}: {description} (params: {})", params.join(", "));
        }
    }
    Ok(Outcome::Ok)
}

pub fn cmd_project(args: ProjectArgs) -> Result<Outcome, CliError> {
    check_config(args.grid, 1.0)?;
    let pole = parse_pole(&args.pole)?;
    let curve = resolve_curve(&args.source, args.grid)?;
    let (d0, d1) = curve.domain();
    let n = ((d1 - d0) * args.grid).round().max(8.0) as usize;
    let pc = curve.as_param_curve()?;
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = d0 + (d1 - d0) * i as f64 / n as f64;
        let p = SpherePoint::project(pc.position_raw(t), pc.radius())?;
        let xyz = stereographic_project(&p, pole, 1e-9)?;
        rows.push(xyz);
    }
    emit(&args.out, &io::projection_to_csv(&rows))?;
    Ok(Outcome::Ok)
}
