//! Tables aggregated from a results file. Repeated runs of the same dataset
//! and procedure are averaged.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};
use crate::record::{Procedure, RunRecord};

/// Mean times over the largest published configurations, for context only.
pub const REFERENCE_MEAN_EHD: f64 = 851.66;
pub const REFERENCE_MEAN_BUILDHULL: f64 = 415.39;

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn mean_of(runs: &[&RunRecord], f: impl Fn(&RunRecord) -> Option<f64>) -> Option<f64> {
    mean(runs.iter().filter_map(|r| f(r)))
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map(|v| format!("{v:.digits$}")).unwrap_or_default()
}

/// Density on a 1e-4 grid so that runs of the same cell group together.
fn density_key(r: &RunRecord) -> Option<u64> {
    r.density().map(|d| (d * 10_000.0).round() as u64)
}

fn density_of(key: u64) -> f64 {
    key as f64 / 10_000.0
}

#[derive(Debug)]
struct Group<'a> {
    n: usize,
    m: usize,
    density: Option<u64>,
    runs: Vec<&'a RunRecord>,
}

impl Group<'_> {
    fn time(&self) -> f64 {
        mean_of(&self.runs, |r| Some(r.total_time)).unwrap_or(0.0)
    }
}

/// Runs grouped by dataset name, ordered by cardinality, dimension, density, then name.
fn by_dataset(records: &[RunRecord], procedure: Procedure) -> Vec<(String, Group<'_>)> {
    let mut map: BTreeMap<&str, Group<'_>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.procedure == procedure) {
        map.entry(r.dataset.as_str())
            .or_insert_with(|| Group {
                n: r.n,
                m: r.m(),
                density: density_key(r),
                runs: Vec::new(),
            })
            .runs
            .push(r);
    }
    let mut out: Vec<(String, Group<'_>)> =
        map.into_iter().map(|(k, g)| (k.to_string(), g)).collect();
    out.sort_by(|(a, ga), (b, gb)| (ga.n, ga.m, ga.density, a).cmp(&(gb.n, gb.m, gb.density, b)));
    out
}

fn ehd_table(records: &[RunRecord]) -> String {
    let mut s = String::from(
        "dataset,lp_size_step2,lp_size_step3,lp_size_step4,num_lps_step4,total_lps,total_time\n",
    );
    for (name, g) in by_dataset(records, Procedure::Ehd) {
        let size = |f: fn(&RunRecord) -> Option<usize>| {
            fmt_opt(mean_of(&g.runs, |r| f(r).map(|v| v as f64)), 1)
        };
        writeln!(
            s,
            "{name},{},{},{},{},{},{:.6}",
            size(|r| r.lp_size_step2),
            size(|r| r.lp_size_step3),
            size(|r| r.lp_size_step4),
            size(|r| r.num_lps_step4),
            fmt_opt(mean_of(&g.runs, |r| Some(r.total_lps as f64)), 1),
            g.time()
        )
        .unwrap();
    }
    s
}

fn buildhull_table(records: &[RunRecord]) -> String {
    let mut s = String::from("dataset,total_lps,avg_lp_size,total_time\n");
    for (name, g) in by_dataset(records, Procedure::Buildhull) {
        writeln!(
            s,
            "{name},{},{},{:.6}",
            fmt_opt(mean_of(&g.runs, |r| Some(r.total_lps as f64)), 1),
            fmt_opt(mean_of(&g.runs, |r| r.avg_lp_size), 2),
            g.time()
        )
        .unwrap();
    }
    s
}

/// Datasets with both an EHD and a BuildHull run. Speedup is EHD time over BuildHull time.
fn comparison(records: &[RunRecord]) -> (String, Vec<f64>) {
    let bh: BTreeMap<String, Group<'_>> = by_dataset(records, Procedure::Buildhull)
        .into_iter()
        .collect();
    let mut s = String::from("dataset,n,m,density,time_ehd,time_buildhull,speedup\n");
    let mut speedups = Vec::new();
    for (name, e) in by_dataset(records, Procedure::Ehd) {
        let Some(b) = bh.get(&name) else { continue };
        let speedup = if b.time() > 0.0 {
            e.time() / b.time()
        } else {
            f64::NAN
        };
        speedups.push(speedup);
        writeln!(
            s,
            "{name},{},{},{},{:.6},{:.6},{:.4}",
            e.n,
            e.m,
            e.density
                .map(|d| density_of(d).to_string())
                .unwrap_or_default(),
            e.time(),
            b.time(),
            speedup
        )
        .unwrap();
    }
    (s, speedups)
}

#[derive(Clone, Copy)]
enum Sweep {
    Density,
    Cardinality,
    Dimension,
}

/// Mean time per (procedure, n, m, density) cell in long format. The swept
/// variable is the last column before the measurements and varies fastest.
fn sweep(records: &[RunRecord], kind: Sweep) -> String {
    let mut cells: BTreeMap<(Procedure, usize, usize, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        if let Some(d) = density_key(r) {
            cells
                .entry((r.procedure, r.n, r.m(), d))
                .or_default()
                .push(r);
        }
    }
    let key = |&(p, n, m, d): &(Procedure, usize, usize, u64)| match kind {
        Sweep::Density => (p, n, m, d as usize),
        Sweep::Cardinality => (p, m, d as usize, n),
        Sweep::Dimension => (p, n, d as usize, m),
    };
    let mut rows: Vec<_> = cells.into_iter().collect();
    rows.sort_by_key(|(k, _)| key(k));
    let mut s = String::from(match kind {
        Sweep::Density => "procedure,n,m,density,runs,mean_total_lps,mean_time\n",
        Sweep::Cardinality => "procedure,m,density,n,runs,mean_total_lps,mean_time\n",
        Sweep::Dimension => "procedure,n,density,m,runs,mean_total_lps,mean_time\n",
    });
    for ((p, n, m, d), runs) in rows {
        let d = density_of(d);
        let lead = match kind {
            Sweep::Density => format!("{p},{n},{m},{d}"),
            Sweep::Cardinality => format!("{p},{m},{d},{n}"),
            Sweep::Dimension => format!("{p},{n},{d},{m}"),
        };
        writeln!(
            s,
            "{lead},{},{:.1},{:.6}",
            runs.len(),
            mean_of(&runs, |r| Some(r.total_lps as f64)).unwrap_or(0.0),
            mean_of(&runs, |r| Some(r.total_time)).unwrap_or(0.0)
        )
        .unwrap();
    }
    s
}

fn summary(records: &[RunRecord], speedups: &[f64], skipped: usize) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "records: {} ({} malformed lines skipped)",
        records.len(),
        skipped
    )
    .unwrap();
    for p in [Procedure::Buildhull, Procedure::Ehd, Procedure::Oracle] {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.procedure == p).collect();
        if let Some(t) = mean_of(&runs, |r| Some(r.total_time)) {
            writeln!(s, "{p}: {} runs, mean total_time {t:.6} s", runs.len()).unwrap();
        }
    }
    let finite: Vec<f64> = speedups.iter().copied().filter(|v| v.is_finite()).collect();
    if let Some(m) = mean(finite.iter().copied()) {
        let wins = finite.iter().filter(|&&v| v < 1.0).count();
        writeln!(
            s,
            "paired datasets: {}, mean time_ehd/time_buildhull {m:.4}, buildhull faster on {wins}",
            finite.len()
        )
        .unwrap();
    }
    writeln!(
        s,
        "reference means on the largest published instances: ehd {REFERENCE_MEAN_EHD} s, buildhull {REFERENCE_MEAN_BUILDHULL} s"
    )
    .unwrap();
    s
}

/// Writes every table into `out_dir` and returns the paths written.
pub fn write_report(records: &[RunRecord], skipped: usize, out_dir: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(BenchError::Data("no valid records".into()));
    }
    fs::create_dir_all(out_dir)
        .map_err(BenchError::io(format!("creating {}", out_dir.display())))?;
    let (cmp, speedups) = comparison(records);
    let files = [
        ("ehd_table.csv", ehd_table(records)),
        ("buildhull_table.csv", buildhull_table(records)),
        ("comparison.csv", cmp),
        ("sweep_density.csv", sweep(records, Sweep::Density)),
        ("sweep_cardinality.csv", sweep(records, Sweep::Cardinality)),
        ("sweep_dimension.csv", sweep(records, Sweep::Dimension)),
        ("summary.txt", summary(records, &speedups, skipped)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(BenchError::io(format!("writing {}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
