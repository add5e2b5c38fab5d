//! `bellmark` command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bellmark_core::estimation::{required_l_from_alpha, SamplingPlan};
use bellmark_core::experiment::{place, report};
use bellmark_core::noise::{extrapolate_l, fit_scaling, predict_required_l, Fit};
use bellmark_core::{
    devices, run_experiment, sweep_and_fit, Backend, Confidence, DevicePreset, Error,
    ExperimentConfig, ExperimentRecord, Family, NoiseParams, NoiseSpec, ReportFormat, ScalingForm,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bellmark", version, about = "Graph-state Bell test benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List bundled device presets or print one as JSON.
    Devices {
        #[command(subcommand)]
        action: Option<DevicesAction>,
    },
    /// Quantum bound Q, classical bound C, D = Q/C and 1/D.
    Bounds {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Number of sampled terms L (and shots K) for a target confidence.
    Plan(PlanArgs),
    /// Gate counts, alpha and L under the depolarization model.
    Predict(PredictArgs),
    /// Run the sampled Bell test on a simulated device.
    Run(RunArgs),
    /// Run a list of sizes and fit the relative violation.
    Sweep(SweepArgs),
    /// Fit the relative violation from a CSV report.
    Fit(FitArgs),
    /// Convert JSON records to JSON or CSV.
    Report(ReportArgs),
    /// Export the preparation circuit placed on a device.
    Circuit(CircuitArgs),
}

#[derive(Subcommand)]
enum DevicesAction {
    List,
    Show { name: String },
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// White-noise weight; margin t = M(alpha - 1/D).
    #[arg(long, conflicts_with = "margin")]
    alpha: Option<f64>,
    /// Margin over the classical bound in units of M.
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    sigma: f64,
    /// Fix L and solve for K instead.
    #[arg(long = "L")]
    l: Option<u128>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Rates: eagle, sycamore, sycamore-isolated, off, or P1,P2,PR.
    #[arg(long, default_value = "eagle")]
    noise: String,
    #[arg(long, default_value_t = 5.0)]
    sigma: f64,
}

#[derive(Args)]
struct Common {
    /// Bundled preset name or preset JSON file.
    #[arg(long, default_value = "eagle-127")]
    device: String,
    #[arg(long)]
    family: Family,
    #[arg(long = "L", default_value_t = 800)]
    l: usize,
    #[arg(long = "K", default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 5.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// off, device, global:ALPHA, depol:P1,P2,PR or depol:PRESET.
    #[arg(long, default_value = "device")]
    noise: NoiseSpec,
    #[arg(long, default_value = "tableau")]
    backend: Backend,
    /// Worker threads (default: BELLMARK_WORKERS, then all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
}

impl Common {
    fn config(&self, n: usize) -> ExperimentConfig {
        ExperimentConfig {
            device: self.device.clone(),
            family: self.family,
            n,
            l: self.l,
            k: self.k,
            repetitions: self.reps,
            sigma_target: self.sigma,
            master_seed: self.seed,
            noise: self.noise,
            backend: self.backend,
            workers: self.workers,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated sizes, e.g. 3,6,9,12.
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    /// Extrapolate L to this size with the fitted model.
    #[arg(long)]
    extrapolate: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with columns n, family, estimate_over_Q (as written by run/sweep).
    #[arg(long)]
    input: PathBuf,
    /// Family to fit when the file holds both.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    extrapolate: Option<usize>,
    #[arg(long, default_value_t = 5.0)]
    sigma: f64,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON record, array of records or sweep result; `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CircuitArgs {
    #[arg(long, default_value = "eagle-127")]
    device: String,
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn noise_params(s: &str) -> Result<NoiseParams> {
    let parts: Vec<&str> = s.split(',').collect();
    let p = match parts.as_slice() {
        [p1, p2, pr] => NoiseParams {
            p1: p1.parse()?,
            p2: p2.parse()?,
            pr: pr.parse()?,
        },
        _ => NoiseParams::preset(s)?,
    };
    p.validate()?;
    Ok(p)
}

#[derive(Serialize)]
struct BoundsOut {
    family: Family,
    n: usize,
    m: String,
    q: f64,
    c: f64,
    d: f64,
    alpha_min: f64,
}

#[derive(Serialize)]
struct FitOut {
    family: Family,
    points: Vec<(f64, f64)>,
    fit: Fit,
    #[serde(skip_serializing_if = "Option::is_none")]
    extrapolation: Option<bellmark_core::noise::Extrapolation>,
}

fn fit_csv(args: &FitArgs) -> Result<()> {
    #[derive(serde::Deserialize)]
    struct Row {
        n: usize,
        family: Family,
        #[serde(rename = "estimate_over_Q")]
        estimate_over_q: f64,
    }
    let mut reader = csv::Reader::from_path(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let rows: Vec<Row> = reader
        .deserialize()
        .collect::<std::result::Result<_, _>>()?;
    let family = match args.family {
        Some(f) => f,
        None => {
            let first = rows.first().context("empty CSV")?.family;
            if rows.iter().any(|r| r.family != first) {
                bail!("CSV holds several families; pass --family");
            }
            first
        }
    };
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for r in rows.iter().filter(|r| r.family == family) {
        match points.iter().position(|p| p.0 == r.n as f64) {
            Some(i) => {
                points[i].1 += r.estimate_over_q;
                counts[i] += 1;
            }
            None => {
                points.push((r.n as f64, r.estimate_over_q));
                counts.push(1);
            }
        }
    }
    points
        .iter_mut()
        .zip(&counts)
        .for_each(|(p, &k)| p.1 /= k as f64);
    let fit = fit_scaling(&points, ScalingForm::for_family(family))?;
    let extrapolation = match args.extrapolate {
        Some(n) => Some(extrapolate_l(
            &fit.model,
            n,
            family.bounds(n)?.d,
            Confidence::from_sigma(args.sigma)?,
        )?),
        None => None,
    };
    print_json(&FitOut {
        family,
        points,
        fit,
        extrapolation,
    })
}

fn read_records(input: &PathBuf) -> Result<Vec<ExperimentRecord>> {
    let mut text = String::new();
    if input.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(input)
            .with_context(|| format!("reading {}", input.display()))?;
    }
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let value = match value.get("records") {
        Some(r) => r.clone(),
        None => value,
    };
    Ok(if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    })
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Devices { action } => match action.unwrap_or(DevicesAction::List) {
            DevicesAction::List => {
                for d in devices::presets() {
                    println!(
                        "{:<12} {:>4} qubits {:>4} couplers  p1={} p2={} pr={}",
                        d.name,
                        d.n_qubits(),
                        d.graph.n_edges(),
                        d.noise.p1,
                        d.noise.p2,
                        d.noise.pr
                    );
                }
            }
            DevicesAction::Show { name } => println!("{}", DevicePreset::load(&name)?.to_json()?),
        },
        Command::Bounds { family, n } => {
            let b = family.bounds(n)?;
            print_json(&BoundsOut {
                family,
                n,
                m: family.term_count(n)?.to_string(),
                q: b.q,
                c: b.c,
                d: b.d,
                alpha_min: b.alpha_min,
            })?;
        }
        Command::Plan(a) => {
            let b = a.family.bounds(a.n)?;
            let conf = Confidence::from_sigma(a.sigma)?;
            let margin = match (a.alpha, a.margin) {
                (Some(alpha), None) => {
                    required_l_from_alpha(alpha, b.d, conf)?;
                    alpha - 1.0 / b.d
                }
                (None, Some(t)) => t,
                _ => bail!("pass exactly one of --alpha or --margin"),
            };
            let plan = match a.l {
                Some(l) => SamplingPlan::with_terms(l, b.q, margin * b.q, conf)?,
                None => SamplingPlan::single_shot(b.q, margin * b.q, conf)?,
            };
            print_json(&plan)?;
        }
        Command::Predict(a) => {
            let p = noise_params(&a.noise)?;
            let conf = Confidence::from_sigma(a.sigma)?;
            print_json(&predict_required_l(a.family, a.n, &p, conf)?)?;
        }
        Command::Run(a) => {
            let record = run_experiment(&a.common.config(a.n))?;
            let mut out = output(&a.common.out)?;
            report(std::slice::from_ref(&record), a.common.format, &mut out)?;
            out.flush()?;
        }
        Command::Sweep(a) => {
            let result = sweep_and_fit(&a.common.config(a.ns[0]), &a.ns, a.extrapolate)?;
            let mut out = output(&a.common.out)?;
            match a.common.format {
                ReportFormat::Json => {
                    serde_json::to_writer_pretty(&mut out, &result)?;
                    writeln!(out)?;
                }
                ReportFormat::Csv => report(&result.records, ReportFormat::Csv, &mut out)?,
            }
            out.flush()?;
        }
        Command::Fit(a) => fit_csv(&a)?,
        Command::Report(a) => {
            let records = read_records(&a.input)?;
            let mut out = output(&a.out)?;
            report(&records, a.format, &mut out)?;
            out.flush()?;
        }
        Command::Circuit(a) => {
            let device = DevicePreset::load(&a.device)?;
            let placement = place(&device.graph, a.family, a.n)?;
            let mut out = output(&a.out)?;
            serde_json::to_writer_pretty(&mut out, &placement)?;
            writeln!(out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let no_margin = e.downcast_ref::<Error>().is_some_and(Error::is_no_margin);
            ExitCode::from(if no_margin { 2 } else { 1 })
        }
    }
}
