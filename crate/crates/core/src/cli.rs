//! Scenario files and the `cavmix` command line.
//!
//! A scenario is one TOML file naming a `kind` and the blocks that kind needs:
//!
//! | kind                | blocks                         |
//! |---------------------|--------------------------------|
//! | `evolve`            | `cavity`, `profile`, (`state`) |
//! | `resonance_catalog` | `cavity`, `sweep.max_omega`    |
//! | `figure1_sweep`     | `cavity`, `state`, `sweep`     |
//! | `experiment_plan`   | `experiment`                   |
//!
//! Results are CSV with `#` metadata lines, reals printed to 17 significant
//! digits.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use log::info;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::bogoliubov::{first_order_map_with, verify_first_order_identities, StaticCoefficients};
use crate::error::{Error, Result};
use crate::experiment::{self, ExperimentPlan, Motion};
use crate::gaussian;
use crate::profiles::{AccelerationProfile, QuadratureConfig, Segment, RIGIDITY_BOUND};
use crate::resonance;
use crate::spectrum::{Axis, Cavity1D, Cavity3D};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Evolve,
    ResonanceCatalog,
    Figure1Sweep,
    ExperimentPlan,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Evolve => "evolve",
            ScenarioKind::ResonanceCatalog => "resonance_catalog",
            ScenarioKind::Figure1Sweep => "figure1_sweep",
            ScenarioKind::ExperimentPlan => "experiment_plan",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub cavity: Option<CavityBlock>,
    pub profile: Option<ProfileBlock>,
    pub state: Option<StateBlock>,
    pub sweep: Option<SweepBlock>,
    pub output: Option<OutputBlock>,
    pub experiment: Option<ExperimentBlock>,
}

/// Either a (1+1)-dimensional cavity (`length`) or a box (`lx`, `ly`, `lz`)
/// reduced along `axis` with transverse numbers `transverse`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityBlock {
    pub length: Option<f64>,
    #[serde(default)]
    pub mass: f64,
    pub n_max: Option<u32>,
    pub lx: Option<f64>,
    pub ly: Option<f64>,
    pub lz: Option<f64>,
    pub axis: Option<Axis>,
    pub transverse: Option<[u32; 2]>,
}

const DEFAULT_N_MAX: u32 = 10;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileBlock {
    Zero {
        #[serde(default)]
        tau0: f64,
        tauf: f64,
    },
    Sinusoidal {
        amplitude: f64,
        omega_c: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        tau0: f64,
        tauf: f64,
    },
    PiecewiseConstant {
        #[serde(default)]
        tau0: f64,
        segments: Vec<SegmentBlock>,
    },
    Ramp {
        amplitude: f64,
        ramp_time: f64,
        #[serde(default)]
        hold_time: f64,
        #[serde(default)]
        tau0: f64,
    },
    Sampled {
        times: Option<Vec<f64>>,
        #[serde(default)]
        tau0: f64,
        dt: Option<f64>,
        values: Vec<f64>,
    },
    RaisedCosine {
        amplitude: f64,
        omega_c: f64,
        #[serde(default)]
        phase: f64,
        rise_time: f64,
        #[serde(default)]
        tau0: f64,
        tauf: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentBlock {
    pub duration: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateBlock {
    pub pair: [u32; 2],
    #[serde(default)]
    pub squeezing: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_points: Option<usize>,
    pub duration_min: Option<f64>,
    pub duration_max: Option<f64>,
    pub duration_points: Option<usize>,
    /// Drive amplitude `h0` of the cosine used in the sweep.
    pub amplitude: Option<f64>,
    /// Upper frequency for the resonance catalog.
    pub max_omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionKind {
    Linear,
    Circular,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    pub wavelength: f64,
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
    pub motion: MotionKind,
    pub axis: Option<Axis>,
    pub amplitude: Option<f64>,
    pub dx: Option<f64>,
    pub dy: Option<f64>,
    pub modes: [u32; 2],
    #[serde(default = "one")]
    pub transverse: u32,
    #[serde(default = "ones")]
    pub bound_mode: [u32; 3],
}

fn one() -> u32 {
    1
}

fn ones() -> [u32; 3] {
    [1, 1, 1]
}

fn field(path: &str, message: impl Into<String>) -> Error {
    Error::Scenario { path: path.to_string(), message: message.into() }
}

fn require<'a, T>(block: &'a Option<T>, path: &str, kind: ScenarioKind) -> Result<&'a T> {
    block.as_ref().ok_or_else(|| field(path, format!("block required for kind {}", kind.as_str())))
}

fn need<T: Copy>(value: Option<T>, path: &str) -> Result<T> {
    value.ok_or_else(|| field(path, "missing field"))
}

/// Re-attribute a domain error to a field of the scenario.
fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Scenario { .. } => e,
        other => field(path, other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overrides {
    pub n_max: Option<u32>,
    pub tolerance: Option<f64>,
}

impl CavityBlock {
    pub fn build(&self, n_max_override: Option<u32>) -> Result<Cavity1D> {
        let n_max = n_max_override.or(self.n_max).unwrap_or(DEFAULT_N_MAX);
        match (self.length, self.lx, self.ly, self.lz) {
            (Some(length), None, None, None) => {
                if self.axis.is_some() || self.transverse.is_some() {
                    return Err(field("cavity", "axis/transverse only apply to a box (lx, ly, lz)"));
                }
                Cavity1D::new(length, self.mass, n_max).map_err(at("cavity"))
            }
            (None, Some(lx), Some(ly), Some(lz)) => {
                let axis = need(self.axis, "cavity.axis")?;
                let transverse = need(self.transverse, "cavity.transverse")?;
                let cube = Cavity3D::new(lx, ly, lz, self.mass).map_err(at("cavity"))?;
                cube.reduce_to_effective_1d(axis, transverse, n_max).map_err(at("cavity"))
            }
            _ => Err(field("cavity", "give either `length` or all of `lx`, `ly`, `lz`")),
        }
    }
}

impl ProfileBlock {
    pub fn build(&self) -> Result<AccelerationProfile> {
        let built = match self {
            ProfileBlock::Zero { tau0, tauf } => AccelerationProfile::zero(*tau0, *tauf),
            ProfileBlock::Sinusoidal { amplitude, omega_c, phase, tau0, tauf } => {
                AccelerationProfile::sinusoidal(*amplitude, *omega_c, *phase, *tau0, *tauf)
            }
            ProfileBlock::PiecewiseConstant { tau0, segments } => AccelerationProfile::piecewise_constant(
                *tau0,
                segments.iter().map(|s| Segment::new(s.duration, s.value)).collect(),
            ),
            ProfileBlock::Ramp { amplitude, ramp_time, hold_time, tau0 } => {
                AccelerationProfile::ramp(*amplitude, *ramp_time, *hold_time, *tau0)
            }
            ProfileBlock::Sampled { times, tau0, dt, values } => match (times, dt) {
                (Some(times), None) => AccelerationProfile::sampled(times.clone(), values.clone()),
                (None, Some(dt)) => AccelerationProfile::sampled_uniform(*tau0, *dt, values.clone()),
                _ => return Err(field("profile", "sampled profile needs exactly one of `times`, `dt`")),
            },
            ProfileBlock::RaisedCosine { amplitude, omega_c, phase, rise_time, tau0, tauf } => {
                AccelerationProfile::raised_cosine(*amplitude, *omega_c, *phase, *rise_time, *tau0, *tauf)
            }
        };
        built.map_err(at("profile"))
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Frequencies, durations and amplitude of a figure-1 sweep.
pub struct SweepGrid {
    pub omegas: Vec<f64>,
    pub durations: Vec<f64>,
    pub amplitude: f64,
}

impl SweepBlock {
    pub fn grid(&self) -> Result<SweepGrid> {
        let axis = |lo: Option<f64>, hi: Option<f64>, n: Option<usize>, name: &str| -> Result<Vec<f64>> {
            let lo = need(lo, &format!("sweep.{name}_min"))?;
            let hi = need(hi, &format!("sweep.{name}_max"))?;
            let n = need(n, &format!("sweep.{name}_points"))?;
            if n == 0 {
                return Err(field(&format!("sweep.{name}_points"), "range must be nonempty"));
            }
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
                return Err(field(&format!("sweep.{name}_min"), format!("need 0 < min <= max, got [{lo}, {hi}]")));
            }
            Ok(linspace(lo, hi, n))
        };
        let amplitude = need(self.amplitude, "sweep.amplitude")?;
        if !(amplitude.is_finite() && amplitude.abs() < RIGIDITY_BOUND) {
            return Err(field(
                "sweep.amplitude",
                format!("rigidity bound |h| < {RIGIDITY_BOUND} violated by h0 = {amplitude}"),
            ));
        }
        Ok(SweepGrid {
            omegas: axis(self.omega_min, self.omega_max, self.omega_points, "omega")?,
            durations: axis(self.duration_min, self.duration_max, self.duration_points, "duration")?,
            amplitude,
        })
    }
}

impl ExperimentBlock {
    pub fn build(&self) -> Result<ExperimentPlan> {
        let motion = match self.motion {
            MotionKind::Linear => {
                if self.dx.is_some() || self.dy.is_some() {
                    return Err(field("experiment", "dx/dy belong to circular motion"));
                }
                Motion::Linear {
                    axis: need(self.axis, "experiment.axis")?,
                    amplitude: need(self.amplitude, "experiment.amplitude")?,
                }
            }
            MotionKind::Circular => {
                if self.axis.is_some() || self.amplitude.is_some() {
                    return Err(field("experiment", "axis/amplitude belong to linear motion"));
                }
                Motion::Circular { dx: need(self.dx, "experiment.dx")?, dy: need(self.dy, "experiment.dy")? }
            }
        };
        let [m, mp] = self.modes;
        Ok(ExperimentPlan {
            wavelength: self.wavelength,
            lx: self.lx,
            ly: self.ly,
            lz: self.lz,
            motion,
            modes: (m, mp),
            transverse: self.transverse,
            bound_mode: self.bound_mode,
        })
    }
}

fn check_squeezing(state: &StateBlock) -> Result<()> {
    if !(state.squeezing.is_finite() && state.squeezing >= 0.0) {
        return Err(field("state.squeezing", format!("must be >= 0, got {}", state.squeezing)));
    }
    Ok(())
}

fn check_pair(state: &StateBlock, cavity: &Cavity1D) -> Result<()> {
    let [m, n] = state.pair;
    if m == 0 || n == 0 || m == n {
        return Err(field("state.pair", format!("need two distinct modes >= 1, got [{m}, {n}]")));
    }
    if m.max(n) > cavity.n_max() {
        return Err(field("state.pair", format!("mode {} exceeds n_max = {}", m.max(n), cavity.n_max())));
    }
    Ok(())
}

/// Everything that can be checked without computing: schema, block presence,
/// rigidity, paraxiality, squeezing sign.
pub fn validate(scenario: &Scenario, overrides: &Overrides) -> Result<()> {
    if let Some(tol) = overrides.tolerance {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(field("--tol", format!("must be positive, got {tol}")));
        }
    }
    let kind = scenario.kind;
    match kind {
        ScenarioKind::Evolve => {
            let cavity = require(&scenario.cavity, "cavity", kind)?.build(overrides.n_max)?;
            let profile = require(&scenario.profile, "profile", kind)?.build()?;
            profile.validate_rigidity().map_err(|e| field("profile", e.to_string()))?;
            if let Some(state) = &scenario.state {
                check_squeezing(state)?;
                check_pair(state, &cavity)?;
            }
        }
        ScenarioKind::ResonanceCatalog => {
            require(&scenario.cavity, "cavity", kind)?.build(overrides.n_max)?;
            let sweep = require(&scenario.sweep, "sweep", kind)?;
            let max_omega = need(sweep.max_omega, "sweep.max_omega")?;
            if !(max_omega.is_finite() && max_omega > 0.0) {
                return Err(field("sweep.max_omega", format!("must be positive, got {max_omega}")));
            }
        }
        ScenarioKind::Figure1Sweep => {
            let cavity = require(&scenario.cavity, "cavity", kind)?.build(overrides.n_max)?;
            let state = require(&scenario.state, "state", kind)?;
            check_squeezing(state)?;
            check_pair(state, &cavity)?;
            require(&scenario.sweep, "sweep", kind)?.grid()?;
        }
        ScenarioKind::ExperimentPlan => {
            let plan = require(&scenario.experiment, "experiment", kind)?.build()?;
            plan.validate().map_err(at("experiment"))?;
            let ratio = plan.paraxial_ratio();
            if !resonance::paraxial_is_valid(ratio) {
                return Err(field("experiment", Error::Paraxial { ratio }.to_string()));
            }
            experiment::plan(&plan).map_err(at("experiment"))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// `(key, value)` pairs written as `# key: value`.
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), metadata: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub struct LoadedScenario {
    pub scenario: Scenario,
    /// Hex SHA-256 of the file contents.
    pub digest: String,
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    toml::from_str(text).map_err(|e| field("scenario", e.to_string()))
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario> {
    let text =
        std::fs::read_to_string(path).map_err(|e| field(&path.display().to_string(), format!("cannot read: {e}")))?;
    let scenario = toml::from_str(&text).map_err(|e| field(&path.display().to_string(), e.to_string()))?;
    let mut digest = String::with_capacity(64);
    for byte in Sha256::digest(text.as_bytes()) {
        let _ = write!(digest, "{byte:02x}");
    }
    Ok(LoadedScenario { scenario, digest })
}

pub struct RunOutcome {
    pub table: ResultTable,
    /// Human-readable lines for standard output.
    pub summary: Vec<String>,
}

/// Compute the table for `scenario`. Metadata other than the kind is left to
/// the caller.
pub fn run(scenario: &Scenario, overrides: &Overrides) -> Result<RunOutcome> {
    validate(scenario, overrides)?;
    let config = QuadratureConfig {
        tolerance: overrides.tolerance.unwrap_or(QuadratureConfig::default().tolerance),
        ..Default::default()
    };
    let mut summary = Vec::new();
    let kind = scenario.kind;
    let mut table = match kind {
        ScenarioKind::Evolve => {
            let cavity = require(&scenario.cavity, "cavity", kind)?.build(overrides.n_max)?;
            let profile = require(&scenario.profile, "profile", kind)?.build()?;
            let coeffs = StaticCoefficients::new(cavity);
            let map = first_order_map_with(&coeffs, &profile, &config)?;
            let report = verify_first_order_identities(&map);
            summary.push(format!(
                "anti-hermitian residual {:.3e}, symmetry residual {:.3e}, quadrature error {:.3e}",
                report.anti_hermitian_residual, report.symmetry_residual, report.quadrature_error
            ));
            if let Some(state) = &scenario.state {
                let pair = (state.pair[0], state.pair[1]);
                let full = gaussian::pipeline_negativity(&map, pair, state.squeezing, false)?;
                let formula = gaussian::first_order_negativity(&map, pair, state.squeezing)?;
                summary.push(format!(
                    "negativity of modes {pair:?}: {:.6e} (first-order formula {formula:.6e})",
                    full.negativity
                ));
            }
            let mut t = ResultTable::new(&["m", "n", "re_a", "im_a", "re_b", "im_b"]);
            let n_max = cavity.n_max();
            for m in 1..=n_max {
                for n in (1..=n_max).filter(|&n| n != m) {
                    let a = map.a_hat(m, n)?;
                    let b = map.b_hat(m, n)?;
                    t.push(vec![
                        Cell::Int(m.into()),
                        Cell::Int(n.into()),
                        Cell::Real(a.re),
                        Cell::Real(a.im),
                        Cell::Real(b.re),
                        Cell::Real(b.im),
                    ]);
                }
            }
            t
        }
        ScenarioKind::ResonanceCatalog => {
            let cavity = require(&scenario.cavity, "cavity", kind)?.build(overrides.n_max)?;
            let max_omega = need(require(&scenario.sweep, "sweep", kind)?.max_omega, "sweep.max_omega")?;
            let catalog = resonance::catalog_1d(&StaticCoefficients::new(cavity), max_omega);
            summary.push(format!("{} resonances up to omega = {max_omega}", catalog.len()));
            let mut t = ResultTable::new(&["kind", "m", "n", "omega_r", "growth_rate_per_h0"]);
            for e in catalog {
                t.push(vec![
                    Cell::Text(e.kind.as_str().into()),
                    Cell::Int(e.pair.0.into()),
                    Cell::Int(e.pair.1.into()),
                    Cell::Real(e.omega_r),
                    Cell::Real(e.growth_rate_per_h0),
                ]);
            }
            t
        }
        ScenarioKind::Figure1Sweep => {
            let cavity = require(&scenario.cavity, "cavity", kind)?.build(overrides.n_max)?;
            let state = require(&scenario.state, "state", kind)?;
            let grid = require(&scenario.sweep, "sweep", kind)?.grid()?;
            let pair = (state.pair[0], state.pair[1]);
            let values = gaussian::figure1_grid(
                &StaticCoefficients::new(cavity),
                pair,
                state.squeezing,
                grid.amplitude,
                &grid.omegas,
                &grid.durations,
            )?;
            summary.push(format!(
                "{}x{} grid, max negativity {:.6e}",
                grid.omegas.len(),
                grid.durations.len(),
                values.max()
            ));
            let mut t = ResultTable::new(&["omega_c", "dtau", "negativity"]);
            for (i, &w) in grid.omegas.iter().enumerate() {
                for (j, &d) in grid.durations.iter().enumerate() {
                    t.push(vec![Cell::Real(w), Cell::Real(d), Cell::Real(values[(i, j)])]);
                }
            }
            t
        }
        ScenarioKind::ExperimentPlan => {
            let plan = require(&scenario.experiment, "experiment", kind)?.build()?;
            let report = experiment::plan(&plan)?;
            let exact = experiment::exact_check(&plan)?;
            let mut fields = report.fields();
            fields.push(("exact_omega_c_per_second", exact.omega_c_per_second));
            fields.push(("exact_growth_rate_per_second", exact.growth_rate_per_second));
            summary.push(format!(
                "omega_c = {:.4e} 1/s, growth rate = {:.4e} 1/s, time to |A| = 1: {:.4e} s",
                report.omega_c_per_second, report.growth_rate_per_second, report.time_to_unity_seconds
            ));
            let names: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let mut t = ResultTable::new(&names);
            t.push(fields.iter().map(|&(_, v)| Cell::Real(v)).collect());
            t
        }
    };
    table.metadata.push(("kind".into(), kind.as_str().into()));
    Ok(RunOutcome { table, summary })
}

#[derive(Debug, Parser)]
#[command(name = "cavmix", version, about = "First-order Bogoliubov coefficients and entanglement of shaken cavities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write its result table.
    Run {
        file: PathBuf,
        /// Output path; overrides `output.path`. Standard output if neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Truncation order; overrides `cavity.n_max`.
        #[arg(long)]
        nmax: Option<u32>,
        /// Absolute quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check a scenario without computing anything.
    Validate { file: PathBuf },
}

/// Exit codes: 0 success, 1 bad input, 2 numerical failure.
pub fn exit_code(error: &Error) -> u8 {
    if error.is_numerical() {
        2
    } else {
        1
    }
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Run the parsed command line, returning the process exit code.
pub fn execute(cli: Cli) -> u8 {
    match cli.command {
        Command::Validate { file } => {
            let result = load_scenario(&file).and_then(|l| validate(&l.scenario, &Overrides::default()));
            match result {
                Ok(()) => {
                    println!("{}: ok", file.display());
                    0
                }
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    1
                }
            }
        }
        Command::Run { file, out, nmax, tol } => {
            let overrides = Overrides { n_max: nmax, tolerance: tol };
            match run_file(&file, out.as_deref(), &overrides) {
                Ok(summary) => {
                    for line in summary {
                        println!("{line}");
                    }
                    0
                }
                Err(e) => {
                    let module = if e.is_numerical() { "numerical failure" } else { "invalid scenario" };
                    eprintln!("{}: {module}: {e}", file.display());
                    exit_code(&e)
                }
            }
        }
    }
}

fn run_file(file: &Path, out: Option<&Path>, overrides: &Overrides) -> Result<Vec<String>> {
    let loaded = load_scenario(file)?;
    let RunOutcome { mut table, mut summary } = run(&loaded.scenario, overrides)?;
    let mut meta =
        vec![("cavmix_version".to_string(), VERSION.to_string()), ("scenario_sha256".to_string(), loaded.digest)];
    if let Some(n) = overrides.n_max {
        meta.push(("nmax_override".into(), n.to_string()));
    }
    if let Some(t) = overrides.tolerance {
        meta.push(("tol_override".into(), format!("{t:e}")));
    }
    meta.append(&mut table.metadata);
    meta.push(("generated_unix".into(), now_unix().to_string()));
    table.metadata = meta;

    let target = out.map(Path::to_path_buf).or_else(|| loaded.scenario.output.as_ref().and_then(|o| o.path.clone()));
    match target {
        Some(path) => {
            let file = std::fs::File::create(&path)?;
            table.write_csv(std::io::BufWriter::new(file))?;
            info!("wrote {} rows to {}", table.rows.len(), path.display());
            summary.push(format!("wrote {} rows to {}", table.rows.len(), path.display()));
            Ok(summary)
        }
        None => {
            table.write_csv(std::io::stdout().lock())?;
            for line in &summary {
                eprintln!("{line}");
            }
            Ok(Vec::new())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_blocks_parse() {
        let s = parse_scenario(
            r#"
            kind = "evolve"
            [cavity]
            length = 1.0
            n_max = 4
            [profile]
            type = "piecewise_constant"
            segments = [{ duration = 1.0, value = 0.01 }, { duration = 2.0, value = -0.01 }]
            "#,
        )
        .unwrap();
        let p = s.profile.unwrap().build().unwrap();
        assert_eq!(p.duration(), 3.0);
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = parse_scenario("kind = \"evolve\"\n[cavity]\nlength = 1.0\nwidth = 2.0\n").unwrap_err();
        assert!(e.to_string().contains("width"), "{e}");
        let e = parse_scenario("kind = \"evolve\"\n[profile]\ntype = \"zero\"\ntauf = 1.0\nbogus = 1\n").unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
    }

    #[test]
    fn reals_keep_seventeen_digits() {
        let c = Cell::Real(std::f64::consts::PI);
        let text = c.render();
        assert_eq!(text.parse::<f64>().unwrap(), std::f64::consts::PI);
        assert_eq!(text.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
    }
}
