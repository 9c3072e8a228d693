//! Dataset files: a CSV with header `x1..x{m1},y1..y{m2}` and an optional
//! `key: value` manifest next to it.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dea_frame::Dataset;

use crate::error::{BenchError, Result};

pub fn write_dataset(path: &Path, ds: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let header: Vec<String> = (1..=ds.m1())
        .map(|k| format!("x{k}"))
        .chain((1..=ds.m2()).map(|k| format!("y{k}")))
        .collect();
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for i in 0..ds.n() {
        w.write_record(ds.row(i).iter().map(|v| v.to_string()))
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush()
        .map_err(BenchError::io(format!("writing {}", path.display())))
}

fn csv_error(path: &Path, e: csv::Error) -> BenchError {
    BenchError::Data(format!("{}: {e}", path.display()))
}

/// Number of inputs implied by a header, which must read `x1..x{m1},y1..y{m2}`.
fn parse_header(header: &csv::StringRecord) -> std::result::Result<usize, String> {
    let m1 = header.iter().take_while(|h| h.starts_with('x')).count();
    let expected: Vec<String> = (1..=m1)
        .map(|k| format!("x{k}"))
        .chain((1..=header.len() - m1).map(|k| format!("y{k}")))
        .collect();
    if m1 == 0 || m1 == header.len() || header.iter().zip(&expected).any(|(h, e)| h.trim() != e) {
        return Err(format!(
            "header must be x1..x{{m1}},y1..y{{m2}}, got `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        ));
    }
    Ok(m1)
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?.clone();
    let m1 =
        parse_header(&header).map_err(|e| BenchError::Data(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let row = rec
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| BenchError::Data(format!("{} row {}: {e}", path.display(), line + 1)))?;
        rows.push(row);
    }
    let name = match read_manifest(path)? {
        Some(m) => m.name,
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    Dataset::from_rows(name, m1, &rows)
        .map_err(|e| BenchError::Data(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub name: String,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub seed: Option<u64>,
    pub target_density: Option<f64>,
    pub inject_boundary: usize,
    /// Measured |F| and how it was measured.
    pub realized_frame: Option<usize>,
    pub frame_method: String,
}

impl Manifest {
    pub fn realized_density(&self) -> Option<f64> {
        self.realized_frame.map(|f| f as f64 / self.n as f64)
    }

    fn render(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| writeln!(s, "{k}: {v}").expect("writing to a String");
        line("name", self.name.clone());
        line("n", self.n.to_string());
        line("m1", self.m1.to_string());
        line("m2", self.m2.to_string());
        if let Some(seed) = self.seed {
            line("seed", seed.to_string());
        }
        if let Some(d) = self.target_density {
            line("target_density", d.to_string());
        }
        line("inject_boundary", self.inject_boundary.to_string());
        line("frame_method", self.frame_method.clone());
        if let Some(f) = self.realized_frame {
            line("realized_frame", f.to_string());
        }
        if let Some(d) = self.realized_density() {
            line("realized_density", d.to_string());
        }
        s
    }

    fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut m = Manifest {
            name: String::new(),
            n: 0,
            m1: 0,
            m2: 0,
            seed: None,
            target_density: None,
            inject_boundary: 0,
            realized_frame: None,
            frame_method: "skip".into(),
        };
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("bad value `{v}` for `{k}`"))
        }
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| format!("expected `key: value`, got `{line}`"))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "name" => m.name = v.to_string(),
                "n" => m.n = num(k, v)?,
                "m1" => m.m1 = num(k, v)?,
                "m2" => m.m2 = num(k, v)?,
                "seed" => m.seed = Some(num(k, v)?),
                "target_density" => m.target_density = Some(num(k, v)?),
                "inject_boundary" => m.inject_boundary = num(k, v)?,
                "frame_method" => m.frame_method = v.to_string(),
                "realized_frame" => m.realized_frame = Some(num(k, v)?),
                _ => {}
            }
        }
        Ok(m)
    }
}

pub fn manifest_path(dataset: &Path) -> PathBuf {
    dataset.with_extension("manifest")
}

pub fn write_manifest(dataset: &Path, manifest: &Manifest) -> Result<()> {
    let path = manifest_path(dataset);
    fs::write(&path, manifest.render())
        .map_err(BenchError::io(format!("writing {}", path.display())))
}

pub fn read_manifest(dataset: &Path) -> Result<Option<Manifest>> {
    let path = manifest_path(dataset);
    if !path.exists() {
        return Ok(None);
    }
    let text =
        fs::read_to_string(&path).map_err(BenchError::io(format!("reading {}", path.display())))?;
    Manifest::parse(&text)
        .map(Some)
        .map_err(|e| BenchError::Data(format!("{}: {e}", path.display())))
}
