//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when the input is rejected before any
//! computation, 1 when a computation fails (the structured error goes to
//! stderr as JSON).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use fredholm_core::index::{index_from_roots, laurent_roots, toeplitz_index, IndexOptions};
use fredholm_core::portrait::{wraparound_experiment, Axis, ParameterFamily};
use fredholm_core::qhe::{
    build_lattice_model, c_beta_min_singular, default_radius, flux_unitary, landau_pup_weights, Flux, LatticeSpectrum,
    ScanMode, TraceRegion,
};
use fredholm_core::truncation::{index_signature, inverse_series_check, kernel_vector_degree1};
use fredholm_core::{CoefficientField, Error};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::parse_config;
use crate::output;
use crate::symbol_json::{parse_complex, parse_symbol};
use crate::sweep;

#[derive(Parser, Debug)]
#[command(name = "fredholm", version, about = "Fredholm indices of Toeplitz operators and related experiments")]
pub struct Cli {
    /// Run file of `key = value` lines naming flags of the subcommand; flags
    /// given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fredholm index of the Toeplitz operator T_f: minus the winding number
    /// of the symbol f, or the pole order minus the roots of z^m f inside
    /// the unit disk.
    Index(IndexArgs),
    /// Roots of z^m f(z) for a Laurent symbol f, classified against the unit
    /// circle (the root-counting form of the Toeplitz index).
    Roots(RootsArgs),
    /// Finite sections T_N of a Toeplitz operator: singular-value index
    /// signature, kernel vectors of A = c1 a + c0, and the Neumann series for
    /// its inverse.
    Truncate(TruncateArgs),
    /// Index phase plot of a parameter family such as A = a^2 + c1 a + c0.
    Portrait(PortraitArgs),
    /// Index jumps along random paths through complex or real shift
    /// polynomials; jump sizes expose the codimension of the jump strata.
    Jumps(JumpsArgs),
    /// Wrap-around of a C^l symbol under the small perturbation
    /// eps e^{iN theta} where the symbol vanishes on an interval.
    Wrap(WrapArgs),
    /// Quantum Hall experiments on the index of PUP.
    #[command(subcommand)]
    Qhe(QheCommand),
}

#[derive(Subcommand, Debug)]
pub enum QheCommand {
    /// Lowest-Landau-level matrix elements of the flux unitary U = z/|z|:
    /// the weighted shift that PUP reduces to.
    Landau(LandauArgs),
    /// Hall staircase: trace estimates of Index(PUP) for the Fermi
    /// projection P of a magnetic lattice, as a function of the Fermi energy.
    Lattice(LatticeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Roots,
    Winding,
}

#[derive(Args, Debug)]
pub struct IndexArgs {
    /// Symbol literal, e.g. '{"-1":[1,0],"0":[0.5,0]}'.
    #[arg(long)]
    pub coeffs: String,
    #[arg(long, value_enum, default_value = "roots")]
    pub method: Method,
    /// Half-width of the band around |z| = 1 counted as on the circle.
    #[arg(long, default_value_t = 1e-9)]
    pub band: f64,
}

#[derive(Args, Debug)]
pub struct RootsArgs {
    #[arg(long)]
    pub coeffs: String,
    #[arg(long, default_value_t = 1e-9)]
    pub band: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TruncateMode {
    Signature,
    Kernel,
    Inverse,
}

#[derive(Args, Debug)]
pub struct TruncateArgs {
    #[arg(long, value_enum, default_value = "signature")]
    pub mode: TruncateMode,
    /// Symbol literal (signature mode).
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Section size N.
    #[arg(long = "N", default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub sigma_tol: f64,
    /// Constant coefficient of A = c1 a + c0, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    /// Terms of the Neumann series (inverse mode).
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    QuadraticReal,
    LinearReal,
}

#[derive(Args, Debug)]
pub struct PortraitArgs {
    #[arg(long, value_enum, default_value = "quadratic-real")]
    pub family: Family,
    /// `min:max,min:max` for (c1, c0).
    #[arg(long, default_value = "-3:3,-3:3", allow_hyphen_values = true)]
    pub window: String,
    /// Points per axis, `n` or `n1,n0`.
    #[arg(long, default_value = "401")]
    pub res: String,
    /// CSV output; the JSON sidecar goes next to it with extension `.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Ensemble {
    Complex,
    Real,
}

#[derive(Args, Debug)]
pub struct JumpsArgs {
    #[arg(long, value_enum)]
    pub ensemble: Ensemble,
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    #[arg(long, default_value_t = 500)]
    pub paths: usize,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WrapArgs {
    #[arg(long, default_value_t = 2)]
    pub ell: u32,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Perturbation frequency; a comma list also reports the fitted slope of
    /// winding change against N.
    #[arg(long = "N", default_value = "100")]
    pub n: String,
    #[arg(long, default_value_t = 1e-7)]
    pub eps: f64,
}

#[derive(Args, Debug)]
pub struct LandauArgs {
    #[arg(long, default_value_t = 1000)]
    pub mmax: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Probe {
    /// Trace estimate of the index.
    Trace,
    /// Smallest singular value of C_beta(E) = P_beta U P_beta + 1 - P_beta^2.
    Cbeta,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[arg(long = "L", default_value_t = 24)]
    pub side: usize,
    #[arg(long, default_value = "1/7")]
    pub flux: String,
    #[arg(long, default_value_t = 0.0)]
    pub disorder: f64,
    /// `inf` for the spectral projection, a number, or `X/bandwidth`.
    #[arg(long, default_value = "inf")]
    pub beta: String,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub emin: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub emax: f64,
    #[arg(long, default_value_t = 200)]
    pub esteps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Power 2k+1 of the trace formula.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Flux origin relative to the patch centre, `x,y`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub origin: String,
    /// Radius of the trace disk (default L/3).
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_enum, default_value = "trace")]
    pub probe: Probe,
    #[arg(long)]
    pub out: PathBuf,
}

/// Entry point used by the binary.
pub fn main_with_args(argv: Vec<OsString>) -> ExitCode {
    let cli = match parse_with_config(argv) {
        Ok(cli) => cli,
        Err(Parse::Clap(e)) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
        Err(Parse::Other(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

fn report(e: &anyhow::Error) -> ExitCode {
    if let Some(core) = e.downcast_ref::<Error>() {
        match core {
            Error::ZeroSymbol | Error::InvalidArgument(_) | Error::WrongRegime(_) | Error::OriginOnSite { .. } => {
                eprintln!("error: {core}");
                ExitCode::from(2)
            }
            _ => {
                eprintln!("{}", output::error(core));
                ExitCode::from(1)
            }
        }
    } else if e.downcast_ref::<io::Error>().is_some() || e.downcast_ref::<csv::Error>().is_some() {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    } else {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    }
}

enum Parse {
    Clap(clap::Error),
    Other(anyhow::Error),
}

/// Parses once to find the subcommand and the config file, appends config
/// values for every flag not given on the command line, and parses again.
fn parse_with_config(argv: Vec<OsString>) -> Result<Cli, Parse> {
    // required flags may come from the config, so the first pass relaxes them
    let command = relax(Cli::command());
    let matches = command.clone().try_get_matches_from(&argv).map_err(Parse::Clap)?;
    let Some(path) = matches.get_one::<PathBuf>("config") else {
        return Cli::try_parse_from(argv).map_err(Parse::Clap);
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(Parse::Other)?;
    let pairs = parse_config(&text).map_err(Parse::Other)?;
    let (leaf_cmd, leaf_matches) = leaf(&command, &matches);
    let mut extended = argv;
    for (key, value) in pairs {
        let arg = leaf_cmd
            .get_arguments()
            .chain(command.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| Parse::Other(anyhow!("unknown config key {key:?} for `{}`", leaf_cmd.get_name())))?;
        let id = arg.get_id().as_str();
        if id == "config" {
            return Err(Parse::Other(anyhow!("config files cannot name another config file")));
        }
        let given = leaf_matches.value_source(id) == Some(ValueSource::CommandLine)
            || (matches.ids().any(|i| i == id) && matches.value_source(id) == Some(ValueSource::CommandLine));
        if !given {
            extended.push(format!("--{key}={value}").into());
        }
    }
    Cli::try_parse_from(extended).map_err(Parse::Clap)
}

fn relax(cmd: clap::Command) -> clap::Command {
    cmd.mut_args(|a| a.required(false)).mut_subcommands(relax)
}

fn leaf<'a>(command: &'a clap::Command, matches: &'a ArgMatches) -> (&'a clap::Command, &'a ArgMatches) {
    let mut cmd = command;
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        match cmd.find_subcommand(name) {
            Some(c) => {
                cmd = c;
                m = sub;
            }
            None => break,
        }
    }
    (cmd, m)
}

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Index(a) => run_index(a),
        Command::Roots(a) => run_roots(a),
        Command::Truncate(a) => run_truncate(a),
        Command::Portrait(a) => run_portrait(a),
        Command::Jumps(a) => run_jumps(a),
        Command::Wrap(a) => run_wrap(a),
        Command::Qhe(QheCommand::Landau(a)) => run_landau(a),
        Command::Qhe(QheCommand::Lattice(a)) => run_lattice(a),
    }
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        bail!("--{name} must be positive and finite");
    }
    Ok(())
}

fn run_index(a: &IndexArgs) -> Result<()> {
    positive("band", a.band)?;
    let s = parse_symbol(&a.coeffs)?;
    let opts = IndexOptions {
        band: a.band,
        ..IndexOptions::default()
    };
    let r = match a.method {
        Method::Roots => index_from_roots(&s, &opts)?,
        Method::Winding => toeplitz_index(&s, &opts)?,
    };
    print_json(&output::index_result(&r))
}

fn run_roots(a: &RootsArgs) -> Result<()> {
    positive("band", a.band)?;
    let s = parse_symbol(&a.coeffs)?;
    print_json(&output::root_report(&laurent_roots(&s, a.band)?))
}

fn run_truncate(a: &TruncateArgs) -> Result<()> {
    let pair = || -> Result<_> {
        let c0 = a.c0.as_deref().ok_or_else(|| anyhow!("--c0 is required in this mode"))?;
        let c1 = a.c1.as_deref().ok_or_else(|| anyhow!("--c1 is required in this mode"))?;
        Ok((parse_complex(c0)?, parse_complex(c1)?))
    };
    match a.mode {
        TruncateMode::Signature => {
            positive("sigma-tol", a.sigma_tol)?;
            let text = a.coeffs.as_deref().ok_or_else(|| anyhow!("--coeffs is required in signature mode"))?;
            let s = parse_symbol(text)?;
            print_json(&output::signature(&index_signature(&s, a.n, a.sigma_tol)?))
        }
        TruncateMode::Kernel => {
            let (c0, c1) = pair()?;
            let k = kernel_vector_degree1(c0, c1, a.n)?;
            print_json(&json!({
                "N": a.n,
                "z0": [k.z0.re, k.z0.im],
                "residual": k.residual,
            }))
        }
        TruncateMode::Inverse => {
            let (c0, c1) = pair()?;
            let r = inverse_series_check(c0, c1, a.n, a.terms)?;
            let bound = (c1.norm() / c0.norm()).powi(a.terms as i32) / (c0.norm() - c1.norm());
            print_json(&json!({"N": a.n, "terms": a.terms, "residual": r, "bound": bound}))
        }
    }
}

pub fn parse_window(text: &str) -> Result<[(f64, f64); 2]> {
    let ranges: Vec<(f64, f64)> = text
        .split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| anyhow!("window ranges look like min:max, got {part:?}"))?;
            Ok((lo.trim().parse()?, hi.trim().parse()?))
        })
        .collect::<Result<_>>()
        .with_context(|| format!("bad --window {text:?}"))?;
    match ranges.as_slice() {
        [a, b] => Ok([*a, *b]),
        _ => bail!("--window needs two ranges"),
    }
}

fn parse_res(text: &str) -> Result<[usize; 2]> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad --res {text:?}"))?;
    match parts.as_slice() {
        [n] => Ok([*n, *n]),
        [a, b] => Ok([*a, *b]),
        _ => bail!("--res takes one or two sizes"),
    }
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn run_portrait(a: &PortraitArgs) -> Result<()> {
    let window = parse_window(&a.window)?;
    let res = parse_res(&a.res)?;
    let axes = [
        Axis::new(window[0].0, window[0].1, res[0])?,
        Axis::new(window[1].0, window[1].1, res[1])?,
    ];
    let family = match a.family {
        Family::QuadraticReal => ParameterFamily::quadratic_real(),
        Family::LinearReal => ParameterFamily::linear_real(),
    };
    let grid = sweep::scan_grid(&family, axes)?;
    output::write_portrait_csv(&grid, BufWriter::new(create(&a.out)?))?;
    let sidecar = output::portrait_sidecar(&grid);
    let side = sidecar_path(&a.out);
    let mut f = BufWriter::new(create(&side)?);
    serde_json::to_writer_pretty(&mut f, &sidecar)?;
    writeln!(f)?;
    f.flush()?;
    print_json(&sidecar)
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display())).map_err(Into::into)
}

fn run_jumps(a: &JumpsArgs) -> Result<()> {
    let field = match a.ensemble {
        Ensemble::Complex => CoefficientField::Complex,
        Ensemble::Real => CoefficientField::Real,
    };
    let h = sweep::jump_scan(field, a.degree, a.paths, a.steps, a.seed)?;
    let v = output::jumps(&h);
    match &a.out {
        Some(path) => {
            let mut f = BufWriter::new(create(path)?);
            serde_json::to_writer(&mut f, &v)?;
            writeln!(f)?;
            f.flush()?;
            Ok(())
        }
        None => print_json(&v),
    }
}

fn run_wrap(a: &WrapArgs) -> Result<()> {
    let ns: Vec<u64> = a
        .n
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad --N {:?}", a.n))?;
    let runs = ns
        .par_iter()
        .map(|&n| wraparound_experiment(a.ell, a.delta, n, a.eps).map(|w| (n, w)))
        .collect::<Result<Vec<_>, _>>()?;
    if let [(n, w)] = runs.as_slice() {
        return print_json(&output::wrap(a.ell, a.delta, *n, a.eps, w));
    }
    let points: Vec<(f64, f64)> = runs
        .iter()
        .filter_map(|(n, w)| w.winding_change.value().map(|k| (*n as f64, k as f64)))
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let slope = fredholm_core::portrait::fit_slope(&x, &y).ok();
    print_json(&json!({
        "runs": runs.iter().map(|(n, w)| output::wrap(a.ell, a.delta, *n, a.eps, w)).collect::<Vec<_>>(),
        "slope": slope,
        "predicted_slope": a.delta / (2.0 * std::f64::consts::PI),
    }))
}

fn run_landau(a: &LandauArgs) -> Result<()> {
    let w = landau_pup_weights(a.mmax)?;
    match &a.out {
        Some(path) => output::write_landau_csv(&w, BufWriter::new(create(path)?)),
        None => output::write_landau_csv(&w, io::stdout().lock()),
    }
}

pub fn parse_beta(text: &str, bandwidth: f64) -> Result<Option<f64>> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(None);
    }
    let beta = match t.split_once('/') {
        Some((x, "bandwidth")) => x.trim().parse::<f64>()? / bandwidth,
        Some(_) => bail!("--beta takes inf, a number, or X/bandwidth"),
        None => t.parse::<f64>().with_context(|| format!("bad --beta {text:?}"))?,
    };
    positive("beta", beta)?;
    Ok(Some(beta))
}

pub fn energy_grid(emin: f64, emax: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        bail!("--esteps must be at least 1");
    }
    if !(emin <= emax) || !emin.is_finite() || !emax.is_finite() {
        bail!("need finite --emin <= --emax");
    }
    if steps == 1 {
        return Ok(vec![emin]);
    }
    Ok((0..steps)
        .map(|i| emin + (emax - emin) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn run_lattice(a: &LatticeArgs) -> Result<()> {
    let flux = Flux::parse(&a.flux)?;
    let origin = parse_complex(&a.origin)?;
    let energies = energy_grid(a.emin, a.emax, a.esteps)?;
    if a.k < 1 {
        bail!("--k must be at least 1");
    }
    let model = build_lattice_model(a.side, flux, a.disorder, a.seed)?;
    let u = flux_unitary(&model, [origin.re, origin.im])?;
    let region = TraceRegion::disk(&model, [origin.re, origin.im], a.radius.unwrap_or(default_radius(a.side)))?;
    let spectrum = LatticeSpectrum::new(&model);
    let beta = parse_beta(&a.beta, spectrum.bandwidth())?;
    let out = BufWriter::new(create(&a.out)?);
    match a.probe {
        Probe::Trace => {
            let mode = match beta {
                None => ScanMode::Spectral,
                Some(beta) => ScanMode::Fermi { beta },
            };
            let curve = sweep::hall_scan(&spectrum, &energies, mode, a.k, &u, &region)?;
            output::write_steps_csv(&curve, out)
        }
        Probe::Cbeta => {
            let beta = beta.ok_or_else(|| anyhow!("--probe cbeta needs a finite --beta"))?;
            let sigmas = energies
                .par_iter()
                .map(|&e| c_beta_min_singular(&spectrum, beta, e, &u))
                .collect::<Result<Vec<_>, _>>()?;
            output::write_cbeta_csv(&energies, &sigmas, out)
        }
    }
}
