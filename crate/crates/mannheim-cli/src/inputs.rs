//! Input resolution: domains, poles, expressions, zoo specs and curve
//! sources shared by the subcommands.

use std::collections::BTreeMap;
use std::path::Path;

use mannheim_s3::curve::{curve_from_samples, ParamCurveS3};
use mannheim_s3::expr::Expr;
use mannheim_s3::frenet::{CurvatureProfile, ScalarFn};
use mannheim_s3::io::curve_samples_from_csv;
use mannheim_s3::synthesis::{
    standard_initial_frame, synthesize_from_curvatures, StepControl, SynthesizedCurve,
};
use mannheim_s3::vec4::Vec4;
use mannheim_s3::zoo::{example34_period, ZooSpec};

use crate::{CliError, CurveSource};

pub fn parse_domain(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let err = || CliError::Geometry(format!("bad domain '{text}', expected S0:S1 with S0 < S1"));
    if parts.len() != 2 {
        return Err(err());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| err())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| err())?;
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(err());
    }
    Ok((a, b))
}

pub fn parse_pole(text: &str) -> Result<Vec4, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let err = || CliError::Geometry(format!("bad pole '{text}', expected X,Y,Z,W"));
    if parts.len() != 4 {
        return Err(err());
    }
    let mut v = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p.trim().parse().map_err(|_| err())?;
    }
    let vec = Vec4::from_array(v);
    if vec.norm() < 1e-12 {
        return Err(err());
    }
    Ok(vec)
}

pub fn parse_expr(name: &str, text: &str) -> Result<Expr, CliError> {
    Expr::parse(text).map_err(|e| CliError::Geometry(format!("--{name}: {e}")))
}

pub fn profile_from_exprs(
    kappa: &str,
    tau: &str,
    domain: (f64, f64),
) -> Result<CurvatureProfile, CliError> {
    let k = parse_expr("kappa", kappa)?;
    let t = parse_expr("tau", tau)?;
    k.validate_on(domain, 129)
        .map_err(|e| CliError::Geometry(format!("--kappa: {e}")))?;
    t.validate_on(domain, 129)
        .map_err(|e| CliError::Geometry(format!("--tau: {e}")))?;
    CurvatureProfile::new(k.to_scalar_fn(), t.to_scalar_fn(), domain).map_err(Into::into)
}

pub fn tau_scalar_fn(tau: &str, domain: (f64, f64)) -> Result<ScalarFn, CliError> {
    let t = parse_expr("tau", tau)?;
    t.validate_on(domain, 129)
        .map_err(|e| CliError::Geometry(format!("--tau: {e}")))?;
    Ok(t.to_scalar_fn())
}

fn parse_params(overrides: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut map = BTreeMap::new();
    for item in overrides {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            CliError::Geometry(format!("bad --param '{item}', expected NAME=VALUE"))
        })?;
        let val: f64 = v.trim().parse().map_err(|_| {
            CliError::Geometry(format!("bad --param value in '{item}'"))
        })?;
        map.insert(k.trim().to_string(), val);
    }
    Ok(map)
}

fn default_zoo_params(family: &str) -> BTreeMap<String, f64> {
    let pairs: &[(&str, f64)] = match family {
        "ccr" => &[
            ("c", 2.0),
            ("a", std::f64::consts::FRAC_PI_4),
            ("theta0", std::f64::consts::FRAC_PI_4),
            ("theta_slope", 0.1),
        ],
        "conical_helix" => &[("gamma", 1.0), ("delta", 1.0), ("r0", 2.0), ("r1", 3.0)],
        "general_helix" => &[
            ("b", 0.4),
            ("lambda", 0.7),
            ("mu0", 0.2),
            ("mu_slope", 0.3),
            ("sign", 1.0),
        ],
        _ => &[],
    };
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// A resolved curve ready for frame extraction or projection.
pub enum ResolvedCurve {
    /// arc-length parametrized synthesized curve (profile families)
    Synthesized(SynthesizedCurve),
    /// explicit or sampled parametrized curve
    Parametrized(ParamCurveS3),
}

impl ResolvedCurve {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            ResolvedCurve::Synthesized(c) => {
                use mannheim_s3::synthesis::FramedCurveS3;
                c.domain()
            }
            ResolvedCurve::Parametrized(c) => c.domain(),
        }
    }

    pub fn as_param_curve(&self) -> Result<ParamCurveS3, CliError> {
        match self {
            ResolvedCurve::Synthesized(c) => c.as_param_curve().map_err(Into::into),
            ResolvedCurve::Parametrized(c) => Ok(c.clone()),
        }
    }
}

/// Resolves --zoo NAME / INPUT file / --domain into a curve. Zoo profile
/// families are synthesized from the standard initial frame at the given
/// grid density.
pub fn resolve_curve(source: &CurveSource, grid: f64) -> Result<ResolvedCurve, CliError> {
    let spec: ZooSpec = match (&source.zoo, &source.input) {
        (Some(name), None) => {
            let mut params = default_zoo_params(name);
            params.append(&mut parse_params(&source.params)?);
            let default_domain = if name == "example34" {
                [0.0, example34_period()]
            } else {
                [0.0, 1.0]
            };
            ZooSpec {
                family: name.clone(),
                params,
                domain: default_domain,
            }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            match path.extension().and_then(|e| e.to_str()) {
                Some("json") => {
                    ZooSpec::from_json(&text).map_err(|e| CliError::Io(e.to_string()))?
                }
                Some("csv") => {
                    let samples =
                        curve_samples_from_csv(&text).map_err(|e| CliError::Io(e.to_string()))?;
                    let mut curve = curve_from_samples(&samples, 1.0)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    if let Some(d) = &source.domain {
                        let dom = parse_domain(d)?;
                        let full = curve.domain();
                        if dom.0 < full.0 || dom.1 > full.1 {
                            return Err(CliError::Geometry(format!(
                                "--domain [{}, {}] exceeds the sampled range [{}, {}]",
                                dom.0, dom.1, full.0, full.1
                            )));
                        }
                        curve = restrict_domain(&samples, dom)?;
                    }
                    return Ok(ResolvedCurve::Parametrized(curve));
                }
                _ => {
                    return Err(CliError::Io(format!(
                        "cannot tell the format of '{}' (expected .json or .csv)",
                        path.display()
                    )))
                }
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Geometry(
                "give either --zoo or an input file, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Geometry(
                "no curve given: pass --zoo FAMILY or an input file".into(),
            ))
        }
    };

    let spec = match &source.domain {
        Some(d) => {
            let dom = parse_domain(d)?;
            ZooSpec {
                domain: [dom.0, dom.1],
                ..spec
            }
        }
        None => spec,
    };

    if spec.family == "example34" {
        return Ok(ResolvedCurve::Parametrized(spec.to_curve()?));
    }
    let zoo = spec.to_profile()?;
    let init = standard_initial_frame(&zoo.profile, 1.0)?;
    let synthesized =
        synthesize_from_curvatures(&zoo.profile, &init, 1.0, &StepControl::with_density(grid))?;
    Ok(ResolvedCurve::Synthesized(synthesized))
}

fn restrict_domain(samples: &[(f64, Vec4)], dom: (f64, f64)) -> Result<ParamCurveS3, CliError> {
    let kept: Vec<(f64, Vec4)> = samples
        .iter()
        .filter(|(t, _)| *t >= dom.0 - 1e-12 && *t <= dom.1 + 1e-12)
        .cloned()
        .collect();
    curve_from_samples(&kept, 1.0).map_err(Into::into)
}

/// Writes to the path, or stdout when no path is given.
pub fn emit(out: &Option<std::path::PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Reads a frame field by extension.
pub fn read_frame_field(path: &Path) -> Result<mannheim_s3::frenet::FrameField, CliError> {
    let text = std::fs::read_to_string(path)?;
    let parsed = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => mannheim_s3::io::frame_field_from_csv(&text),
        _ => mannheim_s3::io::frame_field_from_json(&text),
    };
    parsed.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
