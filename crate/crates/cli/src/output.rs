//! Artifacts of a run: CSV table, metadata sidecar and a minimal SVG plot.
//!
//! All files are written inside the output directory and named after the
//! scenario: `<scenario>.csv`, `<scenario>.meta.toml`, `<scenario>.svg`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use oscnet::studies::StudyResult;
use toml::{Table, Value};

use crate::config::{CliError, CliResult};

/// Supported output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown output format '{other}' (expected csv or svg)")),
        }
    }
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

/// Write every requested artifact plus the sidecar; returns the paths.
pub fn write_all(dir: &Path, result: &StudyResult, resolved: &Table, formats: &[Format]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    let stem = result.scenario;
    let mut files = Vec::new();
    if formats.contains(&Format::Csv) {
        let path = dir.join(format!("{stem}.csv"));
        write(&path, &result.to_csv())?;
        files.push(path);
    }
    if formats.contains(&Format::Svg) {
        let path = dir.join(format!("{stem}.svg"));
        write(&path, &svg(result))?;
        files.push(path);
    }
    let path = dir.join(format!("{stem}.meta.toml"));
    let names: Vec<String> = files.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect();
    write(&path, &sidecar(result, resolved, &names))?;
    files.push(path);
    Ok(files)
}

/// Metadata sidecar: run information under `[meta]`, the resolved config
/// under `[config]`.
pub fn sidecar(result: &StudyResult, resolved: &Table, files: &[String]) -> String {
    let mut meta = Table::new();
    meta.insert("scenario".into(), Value::String(result.scenario.into()));
    meta.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    meta.insert("columns".into(), Value::Array(result.columns.iter().cloned().map(Value::String).collect()));
    meta.insert("rows".into(), Value::Integer(result.rows.len() as i64));
    meta.insert("files".into(), Value::Array(files.iter().cloned().map(Value::String).collect()));
    if let Some(clamped) = result.column("clamped") {
        meta.insert("clamped_couplings".into(), Value::Integer(clamped.iter().sum::<f64>() as i64));
    }
    let params: Table = result.parameters.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    meta.insert("parameters".into(), Value::Table(params));
    let derived: Table = result.derived.iter().map(|(k, v)| (k.clone(), Value::Float(*v))).collect();
    meta.insert("derived".into(), Value::Table(derived));
    if let Some(p) = result.peak {
        let mut peak = Table::new();
        peak.insert("time".into(), Value::Float(p.time));
        peak.insert("value".into(), Value::Float(p.value));
        peak.insert("raw_value".into(), Value::Float(p.raw_value));
        peak.insert("index".into(), Value::Integer(p.index as i64));
        meta.insert("peak".into(), Value::Table(peak));
    }
    let mut doc = Table::new();
    doc.insert("meta".into(), Value::Table(meta));
    doc.insert("config".into(), Value::Table(resolved.clone()));
    toml::to_string(&doc).expect("tables of plain values always serialize")
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// One polyline per non-abscissa column over exactly the table rows;
/// non-finite values split a line.  No external references.
pub fn svg(result: &StudyResult) -> String {
    let (ml, mr, mt, mb) = MARGIN;
    let (pw, ph) = (WIDTH - ml - mr, HEIGHT - mt - mb);
    let xs = result.abscissae();
    let (x0, x1) = range(xs.iter().copied());
    let (y0, y1) = range(result.rows.iter().flat_map(|r| r[1..].iter().copied()));
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| mt + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(s, "<title>{}</title>", escape(result.scenario));
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{ml} {mt} V{} H{}" fill="none" stroke="black"/>"#,
        mt + ph,
        ml + pw
    );
    let fmt = oscnet::io::format_number;
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: &str| {
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{y:.2}" font-size="12" font-family="sans-serif" text-anchor="{anchor}">{}</text>"#, escape(text));
    };
    label(&mut s, ml, mt + ph + 18.0, "start", &fmt(x0));
    label(&mut s, ml + pw, mt + ph + 18.0, "end", &fmt(x1));
    label(&mut s, ml - 6.0, mt + ph, "end", &fmt(y0));
    label(&mut s, ml - 6.0, mt + 10.0, "end", &fmt(y1));
    label(&mut s, ml + pw / 2.0, HEIGHT - 10.0, "middle", &result.columns[0]);
    for (j, name) in result.columns.iter().enumerate().skip(1) {
        let color = COLORS[(j - 1) % COLORS.len()];
        let mut segments: Vec<Vec<String>> = vec![Vec::new()];
        for row in &result.rows {
            let (x, y) = (row[0], row[j]);
            if x.is_finite() && y.is_finite() {
                segments.last_mut().expect("never empty").push(format!("{:.2},{:.2}", px(x), py(y)));
            } else if !segments.last().expect("never empty").is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let _ = writeln!(
                s,
                r#"<polyline data-column="{}" points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
                escape(name),
                seg.join(" ")
            );
        }
        let ly = mt + 14.0 * j as f64;
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}"/>"#, ml + pw - 110.0, ly - 4.0, ml + pw - 90.0, ly - 4.0);
        label(&mut s, ml + pw - 85.0, ly, "start", name);
    }
    s.push_str("</svg>\n");
    s
}
