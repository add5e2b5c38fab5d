//! Monte Carlo evaluation of sampled Bell terms on noisy simulated devices.
//!
//! Every sampled term is measured on a fresh trajectory. Each trajectory owns
//! two ChaCha8 streams derived from `(master_seed, repetition, slot)`: one for
//! noise and readout flips, one for intrinsic measurement randomness. Output is
//! therefore independent of the worker count.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{BellOperator, Family};
use crate::circuit::{prep_ghz_connectivity, prep_lc_path, Gate, GateCounts, Prepared};
use crate::devices::DevicePreset;
use crate::error::{Error, Result};
use crate::estimation::{estimate, p_value_bound, sample_indices, Confidence};
use crate::frame::PauliFrame;
use crate::graph::{longest_simple_path, ConnectivityGraph, LongestPath, PathSearch};
use crate::noise::{
    alpha_depolarization, extrapolate_l, fit_scaling, Extrapolation, Fit, NoiseParams, ScalingForm,
};
use crate::pauli::{Pauli, PauliString};
use crate::tableau::{readout_flip, Clifford, PauliChannel, StabilizerTableau};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "BELLMARK_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    Off,
    /// The device preset's own rates.
    Device,
    Depolarization(NoiseParams),
    /// `αρ + (1-α)I/2ⁿ` applied to the prepared state.
    GlobalDepol {
        alpha: f64,
    },
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::Off => f.write_str("off"),
            NoiseSpec::Device => f.write_str("device"),
            NoiseSpec::Depolarization(p) => write!(f, "depol:{},{},{}", p.p1, p.p2, p.pr),
            NoiseSpec::GlobalDepol { alpha } => write!(f, "global:{alpha}"),
        }
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;

    /// `off`, `device`, `global:ALPHA`, `depol:P1,P2,PR` or `depol:PRESET`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse noise spec `{s}`"));
        match s.split_once(':') {
            None if s == "off" => Ok(NoiseSpec::Off),
            None if s == "device" => Ok(NoiseSpec::Device),
            Some(("global", a)) => {
                let alpha: f64 = a.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(Error::InvalidProbability(alpha));
                }
                Ok(NoiseSpec::GlobalDepol { alpha })
            }
            Some(("depol", rest)) => {
                let parts: Vec<&str> = rest.split(',').collect();
                let p = match parts.as_slice() {
                    [name] => NoiseParams::preset(name)?,
                    [p1, p2, pr] => NoiseParams {
                        p1: p1.parse().map_err(|_| bad())?,
                        p2: p2.parse().map_err(|_| bad())?,
                        pr: pr.parse().map_err(|_| bad())?,
                    },
                    _ => return Err(bad()),
                };
                p.validate()?;
                Ok(NoiseSpec::Depolarization(p))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Full stabilizer tableau with explicit basis change and readout.
    #[default]
    Tableau,
    /// Pauli-frame propagation against the ideal stabilizer outcome.
    Frame,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tableau" => Ok(Backend::Tableau),
            "frame" => Ok(Backend::Frame),
            other => Err(Error::InvalidArgument(format!("unknown backend `{other}`"))),
        }
    }
}

fn default_k() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Bundled preset name or path to a preset JSON file.
    pub device: String,
    pub family: Family,
    pub n: usize,
    pub l: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    pub repetitions: usize,
    pub sigma_target: f64,
    pub master_seed: u64,
    pub noise: NoiseSpec,
    #[serde(default)]
    pub backend: Backend,
    /// Worker threads; falls back to `BELLMARK_WORKERS`, then rayon's default.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(device: impl Into<String>, family: Family, n: usize) -> Self {
        Self {
            device: device.into(),
            family,
            n,
            l: 800,
            k: 1,
            repetitions: 10,
            sigma_target: 5.0,
            master_seed: 0,
            noise: NoiseSpec::Device,
            backend: Backend::Tableau,
            workers: None,
        }
    }

    fn validate(&self) -> Result<()> {
        self.family.check_size(self.n)?;
        if self.l == 0 || self.k == 0 || self.repetitions == 0 {
            return Err(Error::InvalidArgument(
                "L, K and repetitions must be positive".into(),
            ));
        }
        Confidence::from_sigma(self.sigma_target)?;
        match self.noise {
            NoiseSpec::Depolarization(p) => p.validate(),
            NoiseSpec::GlobalDepol { alpha } if !(0.0..=1.0).contains(&alpha) => {
                Err(Error::InvalidProbability(alpha))
            }
            _ => Ok(()),
        }
    }
}

/// Qubits chosen on a device and the circuit preparing the target state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    /// Device qubit for each local qubit.
    pub qubits: Vec<usize>,
    /// Device graph induced on `qubits`, in local labels.
    pub local_graph: ConnectivityGraph,
    pub prepared: Prepared,
}

fn cached_longest_path(g: &ConnectivityGraph) -> Result<LongestPath> {
    static CACHE: OnceLock<Mutex<HashMap<ConnectivityGraph, LongestPath>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache lock").get(g) {
        return Ok(p.clone());
    }
    let p = longest_simple_path(g, &PathSearch::default())?;
    cache
        .lock()
        .expect("cache lock")
        .insert(g.clone(), p.clone());
    Ok(p)
}

/// LC: the first `n` vertices of the longest path found. GHZ: the first `n`
/// vertices in breadth-first order from the maximum-degree vertex.
pub fn place(device: &ConnectivityGraph, family: Family, n: usize) -> Result<Placement> {
    family.check_size(n)?;
    if n > device.n_vertices() {
        return Err(Error::InvalidArgument(format!(
            "{n} qubits requested on a {}-qubit device",
            device.n_vertices()
        )));
    }
    let (qubits, prepared) = match family {
        Family::Lc => {
            let found = cached_longest_path(device)?;
            if found.path.len() < n {
                return Err(Error::PathNotFound {
                    wanted: n,
                    found: found.path.len() - found.path.len() % 3,
                });
            }
            (found.path[..n].to_vec(), prep_lc_path(n)?)
        }
        Family::Ghz => {
            let root = device.max_degree_vertex().expect("nonempty device");
            let order = device.bfs_order(root)?;
            if order.len() < n {
                return Err(Error::Disconnected);
            }
            let qubits = order[..n].to_vec();
            let local = device.induced_subgraph(&qubits)?;
            (qubits, prep_ghz_connectivity(&local)?)
        }
    };
    let local_graph = device.induced_subgraph(&qubits)?;
    prepared.circuit.check_on(&local_graph)?;
    Ok(Placement {
        qubits,
        local_graph,
        prepared,
    })
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream seed for `(master, parts...)`.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix(master), |h, &p| mix(h ^ mix(p)))
}

const INDEX_STREAM: u64 = u64::MAX;
const NOISE_STREAM: u64 = 1;
const MEASURE_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug)]
enum Op {
    Gate(Clifford),
    Depol1(usize),
    Depol2(usize, usize),
}

/// Compiled noisy preparation shared by all trajectories.
#[derive(Clone, Debug)]
struct Program {
    n: usize,
    ops: Vec<Op>,
    rates: NoiseParams,
    global_alpha: Option<f64>,
    noisy: bool,
}

impl Program {
    fn compile(prepared: &Prepared, noise: NoiseSpec, device_rates: NoiseParams) -> Self {
        let circuit = &prepared.circuit;
        let n = circuit.n_qubits;
        let (rates, global_alpha, gate_noise) = match noise {
            NoiseSpec::Off => (NoiseParams::NOISELESS, None, false),
            NoiseSpec::Device => (device_rates, None, true),
            NoiseSpec::Depolarization(p) => (p, None, true),
            NoiseSpec::GlobalDepol { alpha } => (NoiseParams::NOISELESS, Some(alpha), false),
        };
        let mut ops = Vec::new();
        for layer in &circuit.layers {
            let mut idle = vec![true; n];
            for g in layer {
                ops.extend(g.cliffords().into_iter().map(Op::Gate));
                let support = g.support();
                for &q in &support {
                    idle[q] = false;
                }
                if gate_noise {
                    match g {
                        Gate::CZ(a, b) => ops.push(Op::Depol2(*a, *b)),
                        _ => ops.extend(support.iter().map(|&q| Op::Depol1(q))),
                    }
                }
            }
            if gate_noise {
                ops.extend((0..n).filter(|&q| idle[q]).map(Op::Depol1));
            }
        }
        Self {
            n,
            ops,
            rates,
            global_alpha,
            noisy: gate_noise,
        }
    }

    fn sample_error<R: Rng>(&self, op: Op, rng: &mut R) -> Option<[(usize, Pauli); 2]> {
        let ch = match op {
            Op::Depol1(q) => PauliChannel::Depol1 {
                qubit: q,
                p: self.rates.p1,
            },
            Op::Depol2(a, b) => PauliChannel::Depol2 {
                a,
                b,
                p: self.rates.p2,
            },
            Op::Gate(_) => return None,
        };
        ch.sample(rng).expect("rates validated")
    }

    /// Random Pauli on every qubit with probability `1 - α`.
    fn global_letters<R: Rng>(&self, rng: &mut R) -> Option<Vec<Pauli>> {
        const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let alpha = self.global_alpha?;
        if rng.random::<f64>() < alpha {
            return None;
        }
        Some(
            (0..self.n)
                .map(|_| LETTERS[rng.random_range(0..4)])
                .collect(),
        )
    }

    fn readout<R: Rng>(&self, rng: &mut R) -> bool {
        self.noisy && readout_flip(false, self.rates.pr, rng).expect("rates validated")
    }

    fn run_tableau(&self, term: &PauliString, noise: &mut ChaCha8Rng, meas: &mut ChaCha8Rng) -> i8 {
        let mut t = StabilizerTableau::zero_state(self.n);
        for &op in &self.ops {
            match op {
                Op::Gate(c) => t.apply(c).expect("validated circuit"),
                _ => {
                    if let Some(e) = self.sample_error(op, noise) {
                        t.apply_pauli_error(&e).expect("validated circuit");
                    }
                }
            }
        }
        if let Some(letters) = self.global_letters(noise) {
            for (q, p) in letters.into_iter().enumerate() {
                t.apply(Clifford::pauli(q, p)).expect("in range");
            }
        }
        let mut parity = false;
        for q in term.support().collect::<Vec<_>>() {
            match term.letter(q) {
                Pauli::X => t.apply(Clifford::H(q)).expect("in range"),
                Pauli::Y => {
                    t.apply(Clifford::Sdg(q)).expect("in range");
                    t.apply(Clifford::H(q)).expect("in range");
                }
                _ => {}
            }
            let bit = t.measure_z(q, meas).expect("in range");
            parity ^= bit ^ self.readout(noise);
        }
        let sign = term.sign().expect("Hermitian term");
        if parity {
            -sign
        } else {
            sign
        }
    }

    fn run_frame(&self, term: &PauliString, noise: &mut ChaCha8Rng) -> i8 {
        let mut f = PauliFrame::new(self.n);
        for &op in &self.ops {
            match op {
                Op::Gate(c) => f.apply(c),
                _ => {
                    if let Some(e) = self.sample_error(op, noise) {
                        f.inject_error(&e);
                    }
                }
            }
        }
        if let Some(letters) = self.global_letters(noise) {
            for (q, p) in letters.into_iter().enumerate() {
                f.inject(q, p);
            }
        }
        let mut parity = f.anticommutes(term);
        for _ in term.support() {
            parity ^= self.readout(noise);
        }
        if parity {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    /// Seed of the index stream of this repetition.
    pub seed: u64,
    pub sampled_indices: Vec<u128>,
    /// `K` outcomes per sampled index, grouped by index.
    pub outcomes: Vec<i8>,
    pub estimate: f64,
    pub estimate_over_q: f64,
    pub p_value_bound: f64,
    pub ln_p_value_bound: f64,
    pub sigma_equivalent: f64,
    pub reaches_target: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean_estimate: f64,
    pub std_estimate: f64,
    pub mean_estimate_over_q: f64,
    /// Sample standard deviation over repetitions.
    pub std_estimate_over_q: f64,
    pub mean_p_value_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub device_qubits: Vec<usize>,
    pub m: u128,
    pub q: f64,
    pub c: f64,
    pub d: f64,
    pub gate_counts: GateCounts,
    /// Depolarization-model prediction for the synthesized circuit.
    pub predicted_alpha: f64,
    pub repetitions: Vec<RepetitionRecord>,
    pub summary: Summary,
    pub elapsed_ms: f64,
}

fn worker_count(cfg: &ExperimentConfig) -> Option<usize> {
    cfg.workers.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&w: &usize| w > 0)
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs every repetition of `cfg`; see the module docs for seeding.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let device = DevicePreset::load(&cfg.device)?;
    run_on_device(cfg, &device)
}

/// As [`run_experiment`] with an already loaded device.
pub fn run_on_device(cfg: &ExperimentConfig, device: &DevicePreset) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let started = Instant::now();
    let placement = place(&device.graph, cfg.family, cfg.n)?;
    let op = placement
        .prepared
        .bell_operator()?
        .with_qubit_map(placement.qubits.clone())?;
    let bounds = op.bounds();
    let m = op.term_count();
    let counts = placement.prepared.circuit.gate_counts();
    let program = Program::compile(&placement.prepared, cfg.noise, device.noise);
    let predicted_alpha = match cfg.noise {
        NoiseSpec::Off => 1.0,
        NoiseSpec::Device => alpha_depolarization(&counts, cfg.n, &device.noise)?,
        NoiseSpec::Depolarization(p) => alpha_depolarization(&counts, cfg.n, &p)?,
        NoiseSpec::GlobalDepol { alpha } => alpha,
    };
    let target = Confidence::from_sigma(cfg.sigma_target)?;

    let mut plans = Vec::with_capacity(cfg.repetitions);
    for rep in 0..cfg.repetitions {
        let seed = derive_seed(cfg.master_seed, &[rep as u64, INDEX_STREAM]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        plans.push((seed, sample_indices(m, cfg.l, &mut rng)?));
    }
    let jobs: Vec<(usize, usize, u128)> = plans
        .iter()
        .enumerate()
        .flat_map(|(rep, (_, idx))| {
            idx.iter()
                .enumerate()
                .flat_map(move |(i, &j)| (0..cfg.k).map(move |k| (rep, i * cfg.k + k, j)))
        })
        .collect();
    let run_job = |&(rep, slot, j): &(usize, usize, u128)| -> Result<i8> {
        let term = op.term(j)?;
        let mut noise = ChaCha8Rng::seed_from_u64(derive_seed(
            cfg.master_seed,
            &[rep as u64, slot as u64, NOISE_STREAM],
        ));
        Ok(match cfg.backend {
            Backend::Tableau => {
                let mut meas = ChaCha8Rng::seed_from_u64(derive_seed(
                    cfg.master_seed,
                    &[rep as u64, slot as u64, MEASURE_STREAM],
                ));
                program.run_tableau(&term, &mut noise, &mut meas)
            }
            Backend::Frame => program.run_frame(&term, &mut noise),
        })
    };
    let outcomes: Vec<i8> = match worker_count(cfg) {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| jobs.par_iter().map(run_job).collect::<Result<_>>())?,
        None => jobs.par_iter().map(run_job).collect::<Result<_>>()?,
    };

    let per_rep = cfg.l * cfg.k;
    let mut repetitions = Vec::with_capacity(cfg.repetitions);
    for (rep, ((seed, idx), chunk)) in plans.into_iter().zip(outcomes.chunks(per_rep)).enumerate() {
        let est = estimate(m as f64, cfg.k, chunk)?;
        let p = p_value_bound(est, bounds.c, m as f64, cfg.k as u128, cfg.l as u128)?;
        repetitions.push(RepetitionRecord {
            repetition: rep,
            seed,
            sampled_indices: idx,
            outcomes: chunk.to_vec(),
            estimate: est,
            estimate_over_q: est / bounds.q,
            p_value_bound: p.p,
            ln_p_value_bound: p.ln_p,
            sigma_equivalent: p.sigma_equivalent,
            reaches_target: p.ln_p <= target.tail().ln(),
        });
    }
    let ests: Vec<f64> = repetitions.iter().map(|r| r.estimate).collect();
    let fracs: Vec<f64> = repetitions.iter().map(|r| r.estimate_over_q).collect();
    let (mean_estimate, std_estimate) = mean_std(&ests);
    let (mean_estimate_over_q, std_estimate_over_q) = mean_std(&fracs);
    let mean_p_value_bound =
        repetitions.iter().map(|r| r.p_value_bound).sum::<f64>() / repetitions.len() as f64;
    Ok(ExperimentRecord {
        config: cfg.clone(),
        device_qubits: placement.qubits,
        m,
        q: bounds.q,
        c: bounds.c,
        d: bounds.d,
        gate_counts: counts,
        predicted_alpha,
        repetitions,
        summary: Summary {
            mean_estimate,
            std_estimate,
            mean_estimate_over_q,
            std_estimate_over_q,
            mean_p_value_bound,
        },
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    family: &'a str,
    repetition: usize,
    estimate: f64,
    #[serde(rename = "estimate_over_Q")]
    estimate_over_q: f64,
    p_bound: f64,
    seed: u64,
}

/// One CSV row per repetition of every record.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        let family = r.config.family.to_string();
        for rep in &r.repetitions {
            w.serialize(CsvRow {
                n: r.config.n,
                family: &family,
                repetition: rep.repetition,
                estimate: rep.estimate,
                estimate_over_q: rep.estimate_over_q,
                p_bound: rep.p_value_bound,
                seed: rep.seed,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Serializes records as pretty JSON (a single object for one record) or CSV.
pub fn report<W: Write>(
    records: &[ExperimentRecord],
    format: ReportFormat,
    mut out: W,
) -> Result<()> {
    match format {
        ReportFormat::Json => {
            if let [one] = records {
                serde_json::to_writer_pretty(&mut out, one)?;
            } else {
                serde_json::to_writer_pretty(&mut out, records)?;
            }
            writeln!(out)?;
        }
        ReportFormat::Csv => write_csv(records, out)?,
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub records: Vec<ExperimentRecord>,
    /// `(n, mean ⟨B̂⟩/Q)` per point.
    pub points: Vec<(f64, f64)>,
    pub fit: Fit,
    pub extrapolation: Option<Extrapolation>,
}

/// Runs the template at each `n`, fits `⟨B̂⟩/Q` (log-linear for LC,
/// log-quadratic for GHZ) and optionally extrapolates `L` to `extrapolate_to`.
pub fn sweep_and_fit(
    template: &ExperimentConfig,
    ns: &[usize],
    extrapolate_to: Option<usize>,
) -> Result<SweepResult> {
    let form = ScalingForm::for_family(template.family);
    let needed = match form {
        ScalingForm::LogLinear => 2,
        ScalingForm::LogQuadratic => 3,
    };
    if ns.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "{} sweep needs at least {needed} sizes",
            template.family
        )));
    }
    let device = DevicePreset::load(&template.device)?;
    let mut records = Vec::with_capacity(ns.len());
    for &n in ns {
        let cfg = ExperimentConfig {
            n,
            ..template.clone()
        };
        records.push(run_on_device(&cfg, &device)?);
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.config.n as f64, r.summary.mean_estimate_over_q))
        .collect();
    let fit = fit_scaling(&points, form)?;
    let extrapolation = match extrapolate_to {
        Some(n) => {
            let d = template.family.bounds(n)?.d;
            let conf = Confidence::from_sigma(template.sigma_target)?;
            Some(extrapolate_l(&fit.model, n, d, conf)?)
        }
        None => None,
    };
    Ok(SweepResult {
        records,
        points,
        fit,
        extrapolation,
    })
}

/// Checks that the noiseless preparation of `placement` stabilizes its
/// target graph state: every generator has deterministic outcome +1.
pub fn verify_placement(placement: &Placement) -> Result<bool> {
    let t = placement.prepared.circuit.simulate()?;
    let op: BellOperator = placement.prepared.bell_operator()?;
    for g in op.generators() {
        if t.peek(g)? != Some(1) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(family: Family, n: usize, noise: NoiseSpec) -> ExperimentConfig {
        ExperimentConfig {
            l: 50,
            repetitions: 2,
            master_seed: 7,
            noise,
            ..ExperimentConfig::new("falcon-7", family, n)
        }
    }

    #[test]
    fn noiseless_runs_hit_q() {
        for (family, n) in [(Family::Ghz, 7), (Family::Lc, 3)] {
            for backend in [Backend::Tableau, Backend::Frame] {
                let cfg = ExperimentConfig {
                    backend,
                    ..quick(family, n, NoiseSpec::Off)
                };
                let r = run_experiment(&cfg).unwrap();
                assert!(r.repetitions.iter().all(|x| x.estimate == r.m as f64));
                assert!(r
                    .repetitions
                    .iter()
                    .flat_map(|x| &x.outcomes)
                    .all(|&o| o == 1));
            }
        }
    }

    #[test]
    fn backends_agree_per_seed() {
        let base = quick(
            Family::Ghz,
            6,
            NoiseSpec::Depolarization(NoiseParams::IBM_EAGLE.scaled(10.0).unwrap()),
        );
        let a = run_experiment(&base).unwrap();
        let b = run_experiment(&ExperimentConfig {
            backend: Backend::Frame,
            ..base
        })
        .unwrap();
        for (x, y) in a.repetitions.iter().zip(&b.repetitions) {
            assert_eq!(x.outcomes, y.outcomes);
        }
        assert!(a
            .repetitions
            .iter()
            .flat_map(|x| &x.outcomes)
            .any(|&o| o == -1));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let base = quick(Family::Lc, 3, NoiseSpec::Device);
        let one = run_experiment(&ExperimentConfig {
            workers: Some(1),
            ..base.clone()
        })
        .unwrap();
        let four = run_experiment(&ExperimentConfig {
            workers: Some(4),
            ..base
        })
        .unwrap();
        assert_eq!(one.repetitions, four.repetitions);
    }

    #[test]
    fn lc_size_beyond_longest_path() {
        let err = place(
            &DevicePreset::bundled("falcon-7").unwrap().graph,
            Family::Lc,
            6,
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::PathNotFound {
                wanted: 6,
                found: 3
            }
        );
    }

    #[test]
    fn noise_spec_parsing() {
        assert_eq!("off".parse::<NoiseSpec>().unwrap(), NoiseSpec::Off);
        assert_eq!(
            "global:0.5".parse::<NoiseSpec>().unwrap(),
            NoiseSpec::GlobalDepol { alpha: 0.5 }
        );
        assert_eq!(
            "depol:eagle".parse::<NoiseSpec>().unwrap(),
            NoiseSpec::Depolarization(NoiseParams::IBM_EAGLE)
        );
        assert!("global:2".parse::<NoiseSpec>().is_err());
        assert!("loud".parse::<NoiseSpec>().is_err());
    }

    #[test]
    fn seeds_differ_by_part() {
        assert_ne!(derive_seed(1, &[0, 1]), derive_seed(1, &[1, 0]));
        assert_ne!(derive_seed(1, &[0]), derive_seed(2, &[0]));
    }
}
