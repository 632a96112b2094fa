//! File formats: sampled grids (JSON and CSV), algebra descriptions, tabulated
//! profiles and versioned reports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Geometry, SampledFunction, CONVENTION};
use crate::nilpotent::LieAlgebraSpec;
use crate::weights::DecayProfile;

pub const GRID_FORMAT: &str = "ingham-grid";
pub const GRID_VERSION: u32 = 1;
pub const REPORT_SCHEMA: &str = "ingham-report/1";

#[derive(Debug, Serialize, Deserialize)]
struct GridFile {
    format: String,
    version: u32,
    dims: usize,
    origin: Vec<f64>,
    spacing: Vec<f64>,
    extents: Vec<usize>,
    convention: String,
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    algebra: Option<String>,
    values: Vec<[f64; 2]>,
}

pub fn grid_to_json(f: &SampledFunction, algebra: Option<&str>) -> Result<String> {
    let g = f.geometry();
    let file = GridFile {
        format: GRID_FORMAT.into(),
        version: GRID_VERSION,
        dims: g.dims(),
        origin: g.origin.clone(),
        spacing: g.spacing.clone(),
        extents: g.shape.clone(),
        convention: CONVENTION.into(),
        label: f.label().into(),
        algebra: algebra.map(str::to_string),
        values: f.values().iter().map(|v| [v.re, v.im]).collect(),
    };
    let mut s = serde_json::to_string(&file)?;
    s.push('\n');
    Ok(s)
}

/// Parses a grid document; returns the function and its algebra tag, if any.
pub fn grid_from_json(text: &str) -> Result<(SampledFunction, Option<String>)> {
    let file: GridFile = serde_json::from_str(text)?;
    if file.format != GRID_FORMAT {
        return Err(Error::Input(format!("unknown grid format {:?}", file.format)));
    }
    if file.version != GRID_VERSION {
        return Err(Error::Input(format!("unsupported grid version {}", file.version)));
    }
    if file.convention != CONVENTION {
        return Err(Error::Input(format!(
            "grid declares convention {:?}, expected {CONVENTION:?}",
            file.convention
        )));
    }
    if file.origin.len() != file.dims || file.spacing.len() != file.dims || file.extents.len() != file.dims {
        return Err(Error::Input("grid header lengths do not match dims".into()));
    }
    let geom = Geometry::new(file.origin, file.spacing, file.extents)?;
    let values = file.values.iter().map(|v| Complex64::new(v[0], v[1])).collect();
    let f = SampledFunction::new(geom, values, file.label)?;
    Ok((f, file.algebra))
}

pub fn write_grid(path: &Path, f: &SampledFunction, algebra: Option<&str>) -> Result<()> {
    fs::write(path, grid_to_json(f, algebra)?)?;
    Ok(())
}

pub fn read_grid(path: &Path) -> Result<(SampledFunction, Option<String>)> {
    grid_from_json(&fs::read_to_string(path)?)
}

/// One row per sample: index coordinates, then `re, im`.
pub fn grid_to_csv(f: &SampledFunction) -> String {
    let g = f.geometry();
    let mut out = String::new();
    for a in 0..g.dims() {
        let _ = write!(out, "i{a},");
    }
    out.push_str("re,im\n");
    for (flat, v) in f.values().iter().enumerate() {
        for i in g.unravel(flat) {
            let _ = write!(out, "{i},");
        }
        let _ = writeln!(out, "{:e},{:e}", v.re, v.im);
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct AlgebraFile {
    dim: usize,
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default)]
    brackets: Vec<(usize, usize, usize, f64)>,
}

pub const BUILTIN_ALGEBRAS: [&str; 4] = ["abelian3", "heisenberg1", "heisenberg2", "filiform4"];

fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "abelian3" => Some(include_str!("../data/abelian3.json")),
        "heisenberg1" => Some(include_str!("../data/heisenberg1.json")),
        "heisenberg2" => Some(include_str!("../data/heisenberg2.json")),
        "filiform4" => Some(include_str!("../data/filiform4.json")),
        _ => None,
    }
}

pub fn algebra_from_json(text: &str) -> Result<LieAlgebraSpec> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    LieAlgebraSpec::new(file.dim, file.labels, &file.brackets)
}

pub fn algebra_to_json(spec: &LieAlgebraSpec) -> Result<String> {
    let file = AlgebraFile {
        dim: spec.dim(),
        labels: spec.labels().to_vec(),
        brackets: spec.brackets(),
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

/// An existing file path, or a built-in name with an optional `.alg`/`.json` suffix.
pub fn load_algebra(reference: &str) -> Result<LieAlgebraSpec> {
    let path = Path::new(reference);
    if path.is_file() {
        return algebra_from_json(&fs::read_to_string(path)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(reference);
    match builtin(stem) {
        Some(text) => algebra_from_json(text),
        None => Err(Error::Input(format!(
            "no algebra file {reference:?} and no built-in of that name (built-ins: {})",
            BUILTIN_ALGEBRAS.join(", ")
        ))),
    }
}

/// Two-column `t,value` text (blank lines, `#` comments and a header are skipped).
pub fn table_from_csv(text: &str) -> Result<DecayProfile> {
    let mut t = Vec::new();
    let mut v = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split([',', ' ', '\t']).filter(|c| !c.is_empty()).collect();
        if cols.len() != 2 {
            return Err(Error::Input(format!("table line {}: expected two columns", n + 1)));
        }
        match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => {
                t.push(a);
                v.push(b);
            }
            _ if t.is_empty() => continue,
            _ => return Err(Error::Input(format!("table line {}: not numeric", n + 1))),
        }
    }
    DecayProfile::tabulated(t, v)
}

/// A mini-language profile, or `table:<path>` for a tabulated one.
pub fn parse_profile(text: &str) -> Result<DecayProfile> {
    match text.strip_prefix("table:") {
        Some(path) => table_from_csv(&fs::read_to_string(path)?),
        None => text.parse(),
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    summary: &'a str,
    result: &'a T,
}

/// Pretty JSON with a trailing newline; deterministic for deterministic inputs.
pub fn render_report<T: Serialize>(command: &str, summary: &str, result: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Report {
        schema: REPORT_SCHEMA,
        command,
        summary,
        result,
    })?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Shape;

    #[test]
    fn grid_round_trip_is_exact() {
        let geom = Geometry::new(vec![-1.0, 0.5], vec![0.1, 0.3], vec![5, 7]).unwrap();
        let f = SampledFunction::from_fn(geom, "mix", |x| Complex64::new(x[0].sin() / 3.0, x[1].exp() * 1e-17));
        let text = grid_to_json(&f, Some("heisenberg1")).unwrap();
        let (g, alg) = grid_from_json(&text).unwrap();
        assert_eq!(g, f);
        assert_eq!(alg.as_deref(), Some("heisenberg1"));
        assert_eq!(grid_to_json(&g, Some("heisenberg1")).unwrap(), text);
    }

    #[test]
    fn malformed_grids_are_rejected() {
        let geom = Geometry::symmetric(1.0, 4).unwrap();
        let f = SampledFunction::zeros(geom, "z");
        let text = grid_to_json(&f, None).unwrap();
        assert!(grid_from_json(&text.replace("ingham-grid", "other")).is_err());
        assert!(grid_from_json(&text.replace("exp(-2*pi*i*x*xi)", "exp(-i*x*xi)")).is_err());
        assert!(grid_from_json(&text.replace("[0.0,0.0]]", "[0.0,0.0],[1.0,1.0]]")).is_err());
        assert!(grid_from_json("{").is_err());
    }

    #[test]
    fn csv_lists_every_sample() {
        let geom = Geometry::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![2, 3]).unwrap();
        let f = SampledFunction::from_real_fn(geom, "f", |x| x[0] + 10.0 * x[1]);
        let csv = grid_to_csv(&f);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "i0,i1,re,im");
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[6], "1,2,2.1e1,0e0");
    }

    #[test]
    fn builtins_match_the_constructors() {
        assert_eq!(load_algebra("heisenberg1.alg").unwrap(), LieAlgebraSpec::heisenberg(1));
        assert_eq!(load_algebra("heisenberg2").unwrap(), LieAlgebraSpec::heisenberg(2));
        assert_eq!(load_algebra("abelian3").unwrap(), LieAlgebraSpec::abelian(3));
        let f = load_algebra("filiform4.json").unwrap();
        assert_eq!(f.brackets(), LieAlgebraSpec::filiform4().brackets());
        assert!(matches!(load_algebra("nope"), Err(Error::Input(_))));
    }

    #[test]
    fn algebra_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f4.alg");
        fs::write(&path, algebra_to_json(&LieAlgebraSpec::filiform4()).unwrap()).unwrap();
        let back = load_algebra(path.to_str().unwrap()).unwrap();
        assert_eq!(back.brackets(), LieAlgebraSpec::filiform4().brackets());
    }

    #[test]
    fn table_profiles() {
        let p = table_from_csv("# psi samples\nt,psi\n1,1\n10, 3\n100 9\n").unwrap();
        assert!(matches!(p.shape, Shape::Table(_)));
        assert!((p.value(10.0) - 3.0).abs() < 1e-15);
        assert!(table_from_csv("1,2,3\n").is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        fs::write(&path, "1,0\n2,1\n").unwrap();
        assert!(parse_profile(&format!("table:{}", path.display())).unwrap().is_tabulated());
        assert!(parse_profile("t^0.5").is_ok());
    }

    #[test]
    fn reports_carry_the_schema() {
        let r = render_report("criterion", "ok", &vec![1.0, 2.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r).unwrap();
        assert_eq!(v["schema"], REPORT_SCHEMA);
        assert_eq!(v["result"][1], 2.0);
        assert!(r.ends_with('\n'));
    }
}
