use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dea_frame::buildhull::build_hull;
use dea_frame::datagen::{generate, GenSpec};
use dea_frame::dea::output_oriented_score;
use dea_frame::lp::{Algorithm, PivotRule};
use dea_frame::oracle::classify_all;
use dea_frame::preprocess::{ascending_prescore_order, preprocess};

use crate::error::{BenchError, Result};
use crate::io::{read_dataset, read_manifest, write_dataset, write_manifest, Manifest};
use crate::record::{append_record, read_records, Procedure};
use crate::report::write_report;
use crate::runner::run_procedure;
use crate::settings::{process_env, resolve, Overrides, ToleranceOverrides};

#[derive(Debug, Parser)]
#[command(
    name = "deabench",
    version,
    about = "Frame and boundary identification benchmarks for VRS DEA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset and its manifest.
    Gen(GenArgs),
    /// Run one procedure on a dataset and append a record to the results file.
    Run(RunArgs),
    /// Aggregate a results file into tables.
    Report(ReportArgs),
    /// Classify every DMU with full-size LPs and write the report as JSON.
    Oracle(OracleArgs),
    /// Score every DMU against the frame or boundary found by a procedure.
    Score(ScoreArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameMethod {
    Oracle,
    Buildhull,
    Skip,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m1: usize,
    #[arg(long)]
    pub m2: usize,
    /// Target share of extreme-efficient DMUs, in (0, 1].
    #[arg(long)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Weakly efficient nonextreme DMUs to inject.
    #[arg(long, default_value_t = 0)]
    pub inject_boundary: usize,
    /// Output CSV; the manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,
    /// How the realized frame size in the manifest is measured.
    #[arg(long, value_enum, default_value = "oracle")]
    pub frame_method: FrameMethod,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub pivot_rule: Option<PivotRule>,
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    /// TOML file with run settings; environment and flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub feas_tol: Option<f64>,
    #[arg(long)]
    pub gap_tol: Option<f64>,
    #[arg(long)]
    pub pivot_tol: Option<f64>,
    #[arg(long)]
    pub member_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub procedure: Procedure,
    #[arg(long, default_value = "results.jsonl")]
    pub results: PathBuf,
    /// EHD subset size (default ceil(sqrt(n))).
    #[arg(long)]
    pub p: Option<usize>,
    /// Keep partially dominated boundary points found in step 3 in the step-4 pool.
    #[arg(long)]
    pub include_partial_boundary: bool,
    /// Also score the remaining DMUs and count that time in total_time.
    #[arg(long)]
    pub phase2: bool,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, default_value = "results.jsonl")]
    pub results: PathBuf,
    #[arg(long, default_value = "report")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "buildhull")]
    pub procedure: Procedure,
    /// CSV with columns dmu,phi,in_reference.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub solve: SolveArgs,
}

impl SolveArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            algorithm: self.algorithm,
            pivot_rule: self.pivot_rule,
            tolerances: ToleranceOverrides {
                feas: self.feas_tol,
                gap: self.gap_tol,
                pivot: self.pivot_tol,
                member: self.member_tol,
            },
            ..Default::default()
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Gen(a) => gen(a, out),
        Command::Run(a) => run(a, out),
        Command::Report(a) => report(a, out, err),
        Command::Oracle(a) => oracle(a, out),
        Command::Score(a) => score(a, out),
    }
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    writeln!(out, "{line}").map_err(BenchError::io("writing to stdout"))
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<()> {
    let spec = GenSpec {
        inject_boundary: a.inject_boundary,
        ..GenSpec::new(a.n, a.m1, a.m2, a.density, a.seed)
    };
    spec.validate()
        .map_err(|e| BenchError::Usage(e.to_string()))?;
    let ds = generate(&spec)?;
    let cfg = Default::default();
    let realized_frame = match a.frame_method {
        FrameMethod::Oracle => Some(classify_all(&ds, &cfg)?.frame.len()),
        FrameMethod::Buildhull => {
            let prep = preprocess(&ds);
            Some(
                build_hull(
                    &ds,
                    &prep.extreme_seed,
                    &ascending_prescore_order(&prep),
                    &cfg,
                )?
                .frame
                .len(),
            )
        }
        FrameMethod::Skip => None,
    };
    write_dataset(&a.out, &ds)?;
    let manifest = Manifest {
        name: spec.name(),
        n: spec.n,
        m1: spec.m1,
        m2: spec.m2,
        seed: Some(spec.seed),
        target_density: Some(spec.density),
        inject_boundary: spec.inject_boundary,
        realized_frame,
        frame_method: format!("{:?}", a.frame_method).to_lowercase(),
    };
    write_manifest(&a.out, &manifest)?;
    match manifest.realized_frame {
        Some(f) => say(
            out,
            format_args!(
                "{} -> {} (|F| = {f}, density {:.4})",
                manifest.name,
                a.out.display(),
                f as f64 / spec.n as f64
            ),
        ),
        None => say(
            out,
            format_args!("{} -> {}", manifest.name, a.out.display()),
        ),
    }
}

fn load(data: &Path) -> Result<(dea_frame::Dataset, Option<Manifest>)> {
    Ok((read_dataset(data)?, read_manifest(data)?))
}

fn run(a: RunArgs, out: &mut dyn Write) -> Result<()> {
    let mut cli = a.solve.overrides();
    cli.subset_size = a.p;
    cli.include_partial_boundary = a.include_partial_boundary.then_some(true);
    cli.phase2 = a.phase2.then_some(true);
    let settings = resolve(a.solve.config.as_deref(), &process_env, &cli)?;
    let (ds, manifest) = load(&a.data)?;
    let outcome = run_procedure(&ds, a.procedure, &settings, manifest.as_ref())?;
    append_record(&a.results, &outcome.record)?;
    let r = &outcome.record;
    say(
        out,
        format_args!(
            "{} {}: |reference| = {}, lps = {}, total_time = {:.6} s",
            r.dataset,
            r.procedure,
            outcome.reference.len(),
            r.total_lps,
            r.total_time
        ),
    )
}

fn report(a: ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let (records, bad) = read_records(&a.results)?;
    for (line, e) in &bad {
        let _ = writeln!(
            err,
            "warning: {}:{line}: skipped malformed record: {e}",
            a.results.display()
        );
    }
    for path in write_report(&records, bad.len(), &a.out_dir)? {
        say(out, format_args!("wrote {}", path.display()))?;
    }
    Ok(())
}

fn oracle(a: OracleArgs, out: &mut dyn Write) -> Result<()> {
    let settings = resolve(
        a.solve.config.as_deref(),
        &process_env,
        &a.solve.overrides(),
    )?;
    let (ds, _) = load(&a.data)?;
    let r = classify_all(&ds, &settings.solve)?;
    let json = serde_json::to_string_pretty(&r).map_err(|e| BenchError::Data(e.to_string()))?;
    std::fs::write(&a.out, json).map_err(BenchError::io(format!("writing {}", a.out.display())))?;
    say(
        out,
        format_args!(
            "|F| = {}, |B| = {}, density {:.4}",
            r.frame.len(),
            r.boundary.len(),
            r.density
        ),
    )
}

/// Targets outside the reference get the deleted-domain score from Phase 2;
/// reference members are scored against the reference with themselves included.
fn score(a: ScoreArgs, out: &mut dyn Write) -> Result<()> {
    let mut cli = a.solve.overrides();
    cli.phase2 = Some(true);
    let settings = resolve(a.solve.config.as_deref(), &process_env, &cli)?;
    let (ds, manifest) = load(&a.data)?;
    let outcome = run_procedure(&ds, a.procedure, &settings, manifest.as_ref())?;
    let phase2 = outcome.phase2.expect("phase 2 was requested");
    let mut phi = vec![f64::NAN; ds.n()];
    let mut in_reference = vec![false; ds.n()];
    for &(i, s) in &phase2.scores {
        phi[i] = s;
    }
    for &i in &outcome.reference {
        in_reference[i] = true;
        let s = output_oriented_score(&outcome.reference, &ds, i, false, &settings.solve)?;
        phi[i] = s.phi;
    }
    let mut w = csv::Writer::from_path(&a.out)
        .map_err(|e| BenchError::Data(format!("{}: {e}", a.out.display())))?;
    let csv_err = |e: csv::Error| BenchError::Data(e.to_string());
    w.write_record(["dmu", "phi", "in_reference"])
        .map_err(csv_err)?;
    for i in 0..ds.n() {
        w.write_record([
            i.to_string(),
            phi[i].to_string(),
            in_reference[i].to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
        .map_err(BenchError::io(format!("writing {}", a.out.display())))?;
    say(
        out,
        format_args!(
            "scored {} DMUs against {} reference DMUs",
            ds.n(),
            outcome.reference.len()
        ),
    )
}
