//! CSV and JSON serialization of frame fields and reports.
//!
//! Output is deterministic: numbers render with 17 significant digits
//! ({:.16e}) and JSON object keys are sorted, so identical inputs produce
//! byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{GeomError, Result};
use crate::frenet::{FrameField, FrenetFrameS3};
use crate::frenet_e4::FrenetFrameE4;
use crate::gm4::GM4Result;
use crate::mannheim::MannheimPairReport;
use crate::sphere::SpherePoint;
use crate::vec4::Vec4;

/// 17-significant-digit decimal rendering.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON document tree with deterministic rendering.
#[derive(Clone, Debug)]
pub enum JsonValue {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Arr(Vec<JsonValue>),
    Obj(BTreeMap<String, JsonValue>),
}

impl JsonValue {
    pub fn obj(entries: impl IntoIterator<Item = (&'static str, JsonValue)>) -> JsonValue {
        JsonValue::Obj(
            entries
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    pub fn nums(values: impl IntoIterator<Item = f64>) -> JsonValue {
        JsonValue::Arr(values.into_iter().map(JsonValue::Num).collect())
    }

    fn write_into(&self, out: &mut String) {
        match self {
            JsonValue::Num(v) => out.push_str(&fmt_float(*v)),
            JsonValue::Int(v) => {
                let _ = write!(out, "{v}");
            }
            JsonValue::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            JsonValue::Str(v) => {
                let _ = write!(out, "{}", serde_json::Value::String(v.clone()));
            }
            JsonValue::Arr(items) => {
                out.push('[');
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    it.write_into(out);
                }
                out.push(']');
            }
            JsonValue::Obj(map) => {
                out.push('{');
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}:", serde_json::Value::String(k.clone()));
                    v.write_into(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        self.write_into(&mut s);
        s.push('\n');
        s
    }
}

/// Header of the S³ frame-field CSV.
pub const FRAME_CSV_HEADER: &str =
    "s,kappa,tau,ax,ay,az,aw,Tx,Ty,Tz,Tw,Nx,Ny,Nz,Nw,Bx,By,Bz,Bw";

fn frame_row_values(f: &FrenetFrameS3) -> [f64; 19] {
    let a = f.point.coords();
    let (t, n, b) = (f.t_dir(), f.n_dir(), f.b_dir());
    [
        f.s, f.kappa, f.tau, a.x, a.y, a.z, a.w, t.x, t.y, t.z, t.w, n.x, n.y, n.z, n.w, b.x,
        b.y, b.z, b.w,
    ]
}

/// FrameField → 19-column CSV.
pub fn frame_field_to_csv(field: &FrameField) -> String {
    let mut out = String::from(FRAME_CSV_HEADER);
    out.push('\n');
    for f in &field.frames {
        let row = frame_row_values(f);
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// FrameField → JSON with the same fields as the CSV columns.
pub fn frame_field_to_json(field: &FrameField) -> String {
    let names = FRAME_CSV_HEADER.split(',').collect::<Vec<_>>();
    let frames: Vec<JsonValue> = field
        .frames
        .iter()
        .map(|f| {
            let row = frame_row_values(f);
            JsonValue::Obj(
                names
                    .iter()
                    .zip(row.iter())
                    .map(|(k, v)| (k.to_string(), JsonValue::Num(*v)))
                    .collect(),
            )
        })
        .collect();
    JsonValue::obj([
        ("radius", JsonValue::Num(field.radius)),
        ("frames", JsonValue::Arr(frames)),
    ])
    .to_json()
}

fn parse_float(cell: &str, line: usize) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .map_err(|_| GeomError::DomainError(format!("line {line}: bad number '{cell}'")))
}

fn field_from_rows(rows: Vec<[f64; 19]>, radius: f64) -> Result<FrameField> {
    let mut frames = Vec::with_capacity(rows.len());
    let mut grid = Vec::with_capacity(rows.len());
    for r in rows {
        let point = SpherePoint::new(Vec4::new(r[3], r[4], r[5], r[6]), radius)?;
        let frame = FrenetFrameS3::new(
            r[0],
            point,
            Vec4::new(r[7], r[8], r[9], r[10]),
            Vec4::new(r[11], r[12], r[13], r[14]),
            Vec4::new(r[15], r[16], r[17], r[18]),
            r[1],
            r[2],
        )?;
        grid.push(r[0]);
        frames.push(frame);
    }
    FrameField::new(grid, frames, radius)
}

/// Parses the 19-column CSV back into a FrameField (unit radius).
pub fn frame_field_from_csv(text: &str) -> Result<FrameField> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| GeomError::EmptyInput("empty frame CSV".into()))?;
    if header.trim() != FRAME_CSV_HEADER {
        return Err(GeomError::DomainError(format!(
            "unexpected frame CSV header '{}'",
            header.trim()
        )));
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 19 {
            return Err(GeomError::DomainError(format!(
                "line {}: expected 19 columns, got {}",
                i + 1,
                cells.len()
            )));
        }
        let mut row = [0.0; 19];
        for (j, c) in cells.iter().enumerate() {
            row[j] = parse_float(c, i + 1)?;
        }
        rows.push(row);
    }
    field_from_rows(rows, 1.0)
}

#[derive(Deserialize)]
struct FrameFieldDoc {
    radius: f64,
    frames: Vec<BTreeMap<String, f64>>,
}

/// Parses the frame-field JSON document.
pub fn frame_field_from_json(text: &str) -> Result<FrameField> {
    let doc: FrameFieldDoc = serde_json::from_str(text)
        .map_err(|e| GeomError::DomainError(format!("bad frame JSON: {e}")))?;
    let names: Vec<&str> = FRAME_CSV_HEADER.split(',').collect();
    let mut rows = Vec::with_capacity(doc.frames.len());
    for (i, obj) in doc.frames.iter().enumerate() {
        let mut row = [0.0; 19];
        for (j, name) in names.iter().enumerate() {
            row[j] = *obj.get(*name).ok_or_else(|| {
                GeomError::DomainError(format!("frame {i}: missing field '{name}'"))
            })?;
        }
        rows.push(row);
    }
    field_from_rows(rows, doc.radius)
}

/// Pair report → JSON.
pub fn report_to_json(r: &MannheimPairReport) -> String {
    let residuals = JsonValue::Obj(
        r.residuals
            .entries()
            .iter()
            .map(|(k, v)| (k.to_string(), JsonValue::Num(*v)))
            .collect(),
    );
    JsonValue::obj([
        ("a", JsonValue::Num(r.a)),
        ("d", JsonValue::Num(r.d)),
        ("lambda", JsonValue::Num(r.lambda)),
        ("epsilon", JsonValue::Int(r.epsilon as i64)),
        ("theta_variance", JsonValue::Num(r.theta_variance)),
        ("residuals", residuals),
        ("theta", JsonValue::nums(r.theta.iter().copied())),
        ("mu", JsonValue::nums(r.mu.iter().copied())),
    ])
    .to_json()
}

/// GM4 verification → JSON.
pub fn gm4_to_json(r: &GM4Result) -> String {
    JsonValue::obj([
        ("lambda", JsonValue::Num(r.lambda)),
        ("epsilon", JsonValue::Int(r.epsilon as i64)),
        ("epsilon_consistent", JsonValue::Bool(r.epsilon_consistent)),
        (
            "eq26",
            JsonValue::obj([
                ("k1", JsonValue::Num(r.eq26_residuals.k1)),
                ("k2", JsonValue::Num(r.eq26_residuals.k2)),
                ("k3", JsonValue::Num(r.eq26_residuals.k3)),
            ]),
        ),
        ("eq28_c", JsonValue::Num(r.eq28_c)),
        ("eq28_residual", JsonValue::Num(r.eq28_residual)),
        ("unit_speed_error", JsonValue::Num(r.unit_speed_error)),
        (
            "degenerate_samples",
            JsonValue::Int(r.degenerate_samples as i64),
        ),
    ])
    .to_json()
}

/// GM4 samples → CSV (t, s, γ, k1, k2, k3).
pub fn gm4_to_csv(r: &GM4Result) -> String {
    let mut out = String::from("t,s,gx,gy,gz,gw,k1,k2,k3\n");
    for smp in &r.samples {
        let row = [
            smp.t, smp.s, smp.gamma.x, smp.gamma.y, smp.gamma.z, smp.gamma.w, smp.k1, smp.k2,
            smp.k3,
        ];
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Header of the E⁴ frame CSV.
pub const E4_CSV_HEADER: &str = "s,k1,k2,k3,e1x,e1y,e1z,e1w,e2x,e2y,e2z,e2w,e3x,e3y,e3z,e3w,e4x,e4y,e4z,e4w";

/// E⁴ frames → CSV.
pub fn e4_frames_to_csv(frames: &[FrenetFrameE4]) -> String {
    let mut out = String::from(E4_CSV_HEADER);
    out.push('\n');
    for f in frames {
        let row = [
            f.s, f.k1, f.k2, f.k3, f.e1.x, f.e1.y, f.e1.z, f.e1.w, f.e2.x, f.e2.y, f.e2.z,
            f.e2.w, f.e3.x, f.e3.y, f.e3.z, f.e3.w, f.e4.x, f.e4.y, f.e4.z, f.e4.w,
        ];
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Stereographic projection samples → CSV (x, y, z).
pub fn projection_to_csv(points: &[[f64; 3]]) -> String {
    let mut out = String::from("x,y,z\n");
    for p in points {
        let cells: Vec<String> = p.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Parses a sampled-curve CSV with header `t,x1,x2,x3,x4`.
pub fn curve_samples_from_csv(text: &str) -> Result<Vec<(f64, Vec4)>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| GeomError::EmptyInput("empty curve CSV".into()))?;
    if header.trim() != "t,x1,x2,x3,x4" {
        return Err(GeomError::DomainError(format!(
            "expected header 't,x1,x2,x3,x4', got '{}'",
            header.trim()
        )));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(GeomError::DomainError(format!(
                "line {}: expected 5 columns, got {}",
                i + 1,
                cells.len()
            )));
        }
        let t = parse_float(cells[0], i + 1)?;
        let v = Vec4::new(
            parse_float(cells[1], i + 1)?,
            parse_float(cells[2], i + 1)?,
            parse_float(cells[3], i + 1)?,
            parse_float(cells[4], i + 1)?,
        );
        out.push((t, v));
    }
    if out.len() < 8 {
        return Err(GeomError::EmptyInput(format!(
            "curve CSV has only {} samples (need >= 8)",
            out.len()
        )));
    }
    if out.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(GeomError::DomainError(
            "curve CSV parameter column not strictly increasing".into(),
        ));
    }
    Ok(out)
}
