//! Run settings, resolved as config file < environment < command line.

use std::path::Path;

use dea_frame::lp::{Algorithm, PivotRule};
use dea_frame::{SolveConfig, Tolerances};
use serde::Deserialize;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub feas: Option<f64>,
    pub gap: Option<f64>,
    pub pivot: Option<f64>,
    pub member: Option<f64>,
}

impl ToleranceOverrides {
    fn apply(&self, t: &mut Tolerances) {
        for (dst, src) in [
            (&mut t.feas, self.feas),
            (&mut t.gap, self.gap),
            (&mut t.pivot, self.pivot),
            (&mut t.member, self.member),
        ] {
            if let Some(v) = src {
                *dst = v;
            }
        }
    }
}

/// Everything a config file or the command line may set. `None` leaves the
/// lower-precedence value in place.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    pub algorithm: Option<Algorithm>,
    pub pivot_rule: Option<PivotRule>,
    pub subset_size: Option<usize>,
    pub include_partial_boundary: Option<bool>,
    pub phase2: Option<bool>,
    pub tolerances: ToleranceOverrides,
}

impl Overrides {
    fn apply(&self, s: &mut RunSettings) {
        if let Some(a) = self.algorithm {
            s.solve.algorithm = a;
        }
        if let Some(r) = self.pivot_rule {
            s.solve.pivot_rule = r;
        }
        if self.subset_size.is_some() {
            s.subset_size = self.subset_size;
        }
        if let Some(b) = self.include_partial_boundary {
            s.include_partial_boundary = b;
        }
        if let Some(b) = self.phase2 {
            s.phase2 = b;
        }
        self.tolerances.apply(&mut s.solve.tolerances);
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSettings {
    pub solve: SolveConfig,
    /// EHD subset size; `None` means ceil(sqrt(n)).
    pub subset_size: Option<usize>,
    pub include_partial_boundary: bool,
    pub phase2: bool,
}

pub const ENV_TOLERANCES: [&str; 4] = [
    "DEA_FEAS_TOL",
    "DEA_GAP_TOL",
    "DEA_PIVOT_TOL",
    "DEA_MEMBER_TOL",
];

fn env_overrides(env: &dyn Fn(&str) -> Option<String>) -> Result<ToleranceOverrides> {
    let mut values = [None; 4];
    for (slot, key) in values.iter_mut().zip(ENV_TOLERANCES) {
        if let Some(raw) = env(key) {
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| BenchError::Usage(format!("{key}: `{raw}` is not a number")))?;
            *slot = Some(v);
        }
    }
    let [feas, gap, pivot, member] = values;
    Ok(ToleranceOverrides {
        feas,
        gap,
        pivot,
        member,
    })
}

pub fn load_config(path: &Path) -> Result<Overrides> {
    let text = std::fs::read_to_string(path)
        .map_err(BenchError::io(format!("reading {}", path.display())))?;
    toml::from_str(&text).map_err(|e| BenchError::Usage(format!("{}: {e}", path.display())))
}

pub fn resolve(
    config: Option<&Path>,
    env: &dyn Fn(&str) -> Option<String>,
    cli: &Overrides,
) -> Result<RunSettings> {
    let mut s = RunSettings::default();
    if let Some(path) = config {
        load_config(path)?.apply(&mut s);
    }
    env_overrides(env)?.apply(&mut s.solve.tolerances);
    cli.apply(&mut s);
    let t = &s.solve.tolerances;
    if [t.feas, t.gap, t.pivot, t.member]
        .iter()
        .any(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(BenchError::Usage(
            "tolerances must be positive and finite".into(),
        ));
    }
    Ok(s)
}

pub fn process_env(key: &str) -> Option<String> {
    std::env::var(key).ok()
}
