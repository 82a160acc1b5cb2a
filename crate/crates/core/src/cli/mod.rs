//! Command-line front end: manifest-driven sweeps, HOM scans and curve fits.

mod manifest;

pub use manifest::{
    Format, HomScanSpec, OutputSpec, RunManifest, RunSpec, SUPPORTED_CONFIG_VERSION,
};

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::experiment::{
    fit_malus, hom_scan, run_sweep, visibility, CurveSummary, ExperimentConfig, HomPoint, MalusFit,
    SweepResult,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const SWEEP_COLUMNS: [&str; 5] = [
    "theta_deg",
    "p_d1_d2",
    "p_d1_d3",
    "counts_d1_d2",
    "counts_d1_d3",
];
pub const HOM_COLUMNS: [&str; 3] = ["delay_s", "overlap_v", "p_coincidence"];
pub const FIT_COLUMNS: [&str; 4] = ["offset", "amplitude", "phase_deg", "visibility"];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Manifest { path: PathBuf, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Sim(#[from] crate::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "loqc-qec",
    version,
    about = "Two-photon Z-error correction simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyzer sweeps for every run in the manifest.
    RunSweep(ManifestArgs),
    /// Coincidence probability behind a 50/50 splitter versus delay.
    HomScan(ManifestArgs),
    /// Fixed-period Malus fit of one column of a curve file.
    Fit(FitArgs),
}

#[derive(Debug, Args)]
pub struct ManifestArgs {
    /// Manifest file (TOML, or JSON with a .json extension).
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed of every run.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; overrides the manifest.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with a `theta_deg` column and at least one value column.
    #[arg(long, visible_alias = "config")]
    pub input: PathBuf,
    /// Value column to fit; optional when the file has exactly one.
    #[arg(long)]
    pub column: Option<String>,
    /// Directory for `<stem>_fit.<ext>`; without it the record goes to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub quiet: bool,
}

/// Executes a parsed command line and returns the files written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    match &cli.command {
        Command::RunSweep(args) => cmd_run_sweep(args),
        Command::HomScan(args) => cmd_hom_scan(args),
        Command::Fit(args) => cmd_fit(args),
    }
}

struct Target {
    dir: PathBuf,
    format: Format,
}

fn target(args: &ManifestArgs, manifest: &RunManifest) -> Result<Target, CliError> {
    let dir = args
        .output
        .clone()
        .or_else(|| manifest.outputs.path.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(Target {
        dir,
        format: args.format.unwrap_or(manifest.outputs.format),
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.flush().map_err(io)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    // writes to a Vec cannot fail
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

fn json_bytes(value: &serde_json::Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("json value serializes");
    out.push(b'\n');
    out
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    seed: u64,
    success_probability: f64,
    discarded_probability: f64,
    fidelity_45: f64,
    herald_d2: f64,
    herald_d3: f64,
    d1_d2: &'a CurveSummary,
    d1_d3: &'a CurveSummary,
}

const CURVE_FIELDS: [&str; 8] = [
    "offset",
    "amplitude",
    "phase_deg",
    "visibility",
    "fidelity_45",
    "fidelity_fit",
    "counts_offset",
    "counts_visibility",
];

fn curve_cells(c: &CurveSummary) -> Vec<String> {
    vec![
        num(c.fit.offset),
        num(c.fit.amplitude),
        num(c.fit.phase_deg),
        num(c.visibility),
        num(c.fidelity_45),
        num(c.fidelity_fit),
        opt(c.counts_fit.map(|f| f.offset)),
        opt(c.counts_visibility),
    ]
}

fn summary_header() -> Vec<String> {
    let mut h: Vec<String> = [
        "seed",
        "success_probability",
        "discarded_probability",
        "fidelity_45",
        "herald_d2",
        "herald_d3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for curve in ["d1_d2", "d1_d3"] {
        h.extend(CURVE_FIELDS.iter().map(|f| format!("{curve}_{f}")));
    }
    h
}

fn summary_cells(r: &SweepResult) -> Vec<String> {
    let mut row = vec![
        r.seed.to_string(),
        num(r.success_probability),
        num(r.discarded_probability),
        num(r.fidelity_45),
        num(r.herald_d2),
        num(r.herald_d3),
    ];
    row.extend(curve_cells(&r.d1_d2));
    row.extend(curve_cells(&r.d1_d3));
    row
}

/// Serialized forms of one sweep: `(suffix, bytes)` pairs.
pub fn render_sweep(
    cfg: &ExperimentConfig,
    result: &SweepResult,
    format: Format,
) -> Vec<(String, Vec<u8>)> {
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = result
                .rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.theta_deg),
                        num(r.p_d1_d2),
                        num(r.p_d1_d3),
                        opt(r.counts_d1_d2),
                        opt(r.counts_d1_d3),
                    ]
                })
                .collect();
            let header = summary_header();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            vec![
                (".csv".into(), csv_bytes(&SWEEP_COLUMNS, &rows)),
                (
                    "_summary.csv".into(),
                    csv_bytes(&header, &[summary_cells(result)]),
                ),
            ]
        }
        Format::Json => {
            let summary = SweepSummary {
                seed: result.seed,
                success_probability: result.success_probability,
                discarded_probability: result.discarded_probability,
                fidelity_45: result.fidelity_45,
                herald_d2: result.herald_d2,
                herald_d3: result.herald_d3,
                d1_d2: &result.d1_d2,
                d1_d3: &result.d1_d3,
            };
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "config": cfg,
                "rows": result.rows,
                "summary": summary,
            });
            vec![(".json".into(), json_bytes(&doc))]
        }
    }
}

fn note(quiet: bool, path: &Path) {
    if !quiet {
        eprintln!("wrote {}", path.display());
    }
}

pub fn cmd_run_sweep(args: &ManifestArgs) -> Result<Vec<PathBuf>, CliError> {
    let manifest = RunManifest::load(&args.config)?;
    let runs = manifest
        .experiments(args.seed)
        .map_err(|message| CliError::Manifest {
            path: args.config.clone(),
            message,
        })?;
    let target = target(args, &manifest)?;
    let mut written = Vec::new();
    for (name, cfg) in &runs {
        let result = run_sweep(cfg)?;
        if !args.quiet {
            eprintln!(
                "{name}: V(D1:D2) = {:.4}, V(D1:D3) = {:.4}, F = {:.4}",
                result.d1_d2.visibility, result.d1_d3.visibility, result.fidelity_45
            );
        }
        for (suffix, bytes) in render_sweep(cfg, &result, target.format) {
            let path = target.dir.join(format!("{name}{suffix}"));
            write_file(&path, &bytes)?;
            note(args.quiet, &path);
            written.push(path);
        }
    }
    Ok(written)
}

pub fn render_hom(spec: &HomScanSpec, points: &[HomPoint], format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| vec![num(p.delay_s), num(p.overlap_v), num(p.p_coincidence)])
                .collect();
            csv_bytes(&HOM_COLUMNS, &rows)
        }
        Format::Json => {
            let min = points
                .iter()
                .map(|p| p.p_coincidence)
                .fold(f64::INFINITY, f64::min);
            json_bytes(&json!({
                "schema_version": SCHEMA_VERSION,
                "config": spec,
                "rows": points,
                "summary": { "points": points.len(), "min_p_coincidence": min },
            }))
        }
    }
}

pub fn cmd_hom_scan(args: &ManifestArgs) -> Result<Vec<PathBuf>, CliError> {
    let manifest = RunManifest::load(&args.config)?;
    let manifest_err = |message: &str| CliError::Manifest {
        path: args.config.clone(),
        message: message.to_owned(),
    };
    let spec = manifest
        .hom_scan
        .as_ref()
        .ok_or_else(|| manifest_err("missing table `hom_scan`"))?;
    if spec.delays_s.is_empty() {
        return Err(manifest_err("hom_scan.delays_s: delay grid is empty"));
    }
    let points = hom_scan(&spec.delays_s, spec.sigma_s)?;
    let target = target(args, &manifest)?;
    let path = target
        .dir
        .join(format!("hom_scan.{}", target.format.extension()));
    write_file(&path, &render_hom(spec, &points, target.format))?;
    note(args.quiet, &path);
    Ok(vec![path])
}

/// Reads `theta_deg` and one value column from a curve CSV.
pub fn read_curve(path: &Path, column: Option<&str>) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let bad = |m: String| CliError::Input(format!("{}: {m}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let theta_idx = headers
        .iter()
        .position(|h| h == "theta_deg")
        .ok_or_else(|| bad("no `theta_deg` column".into()))?;
    let value_idx = match column {
        Some(c) => headers
            .iter()
            .position(|h| h == c)
            .ok_or_else(|| bad(format!("no `{c}` column")))?,
        None => {
            let others: Vec<usize> = (0..headers.len()).filter(|&i| i != theta_idx).collect();
            match others.as_slice() {
                [i] => *i,
                _ => return Err(bad("several value columns; choose one with --column".into())),
            }
        }
    };
    let mut thetas = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let parse = |i: usize| -> Result<f64, CliError> {
            let cell = rec.get(i).unwrap_or("");
            cell.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("row {}: `{cell}` is not a number", line + 2)))
        };
        thetas.push(parse(theta_idx)?);
        values.push(parse(value_idx)?);
    }
    Ok((thetas, values))
}

pub fn render_fit(fit: &MalusFit, format: Format) -> Vec<u8> {
    let vis = visibility(fit).ok();
    match format {
        Format::Csv => csv_bytes(
            &FIT_COLUMNS,
            &[vec![
                num(fit.offset),
                num(fit.amplitude),
                num(fit.phase_deg),
                opt(vis),
            ]],
        ),
        Format::Json => json_bytes(&json!({
            "offset": fit.offset,
            "amplitude": fit.amplitude,
            "phase_deg": fit.phase_deg,
            "visibility": vis,
        })),
    }
}

pub fn cmd_fit(args: &FitArgs) -> Result<Vec<PathBuf>, CliError> {
    let (thetas, values) = read_curve(&args.input, args.column.as_deref())?;
    let fit = fit_malus(&thetas, &values)?;
    let format = args.format.unwrap_or_default();
    let bytes = render_fit(&fit, format);
    match &args.output {
        None => {
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            Ok(Vec::new())
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            let stem = args
                .input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "curve".into());
            let path = dir.join(format!("{stem}_fit.{}", format.extension()));
            write_file(&path, &bytes)?;
            note(args.quiet, &path);
            Ok(vec![path])
        }
    }
}
