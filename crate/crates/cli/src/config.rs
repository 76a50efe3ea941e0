//! Run configuration: a sectioned key-value file (TOML), one section per
//! subsystem. Unknown keys are rejected so typos surface as validation
//! errors. `mbhl config-reference` prints the full key listing.

use anyhow::{bail, Context, Result};
use mb_halfline::extension::{ExtensionKind, HalfLineFunction};
use mb_halfline::grid::Grid1D;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub run: RunSection,
    pub problem: Option<ProblemSection>,
    pub grid: Option<GridSection>,
    pub solver: Option<SolverSection>,
    pub probe: Option<ProbeSection>,
    pub resonance: Option<ResonanceSection>,
    pub study: Option<StudySection>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Config = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Random seed; the `--seed` flag overrides it.
    pub seed: Option<u64>,
    /// Output directory; the `--out` flag overrides it.
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub alpha: f64,
    pub s: f64,
    pub u0: DataSpec,
    pub v0: DataSpec,
    pub f: DataSpec,
    pub g: DataSpec,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_nx")]
    pub nx: usize,
    #[serde(default = "default_lx")]
    pub lx: f64,
    #[serde(default = "default_nt")]
    pub nt: usize,
}

fn default_nx() -> usize {
    512
}
fn default_lx() -> f64 {
    20.0
}
fn default_nt() -> usize {
    256
}

impl Default for GridSection {
    fn default() -> Self {
        Self { nx: default_nx(), lx: default_lx(), nt: default_nt() }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub time_horizon: f64,
    #[serde(default = "default_n_beta")]
    pub n_beta: usize,
    #[serde(default = "default_picard_tol")]
    pub picard_tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_max_halvings")]
    pub max_halvings: usize,
    pub eps: Option<f64>,
    #[serde(default = "default_extension")]
    pub extension: String,
}

fn default_n_beta() -> usize {
    2048
}
fn default_picard_tol() -> f64 {
    1e-9
}
fn default_max_iters() -> usize {
    30
}
fn default_max_halvings() -> usize {
    4
}
fn default_extension() -> String {
    "reflect3".into()
}

pub fn parse_extension(name: &str) -> Result<ExtensionKind> {
    Ok(match name {
        "zero" => ExtensionKind::Zero,
        "reflect1" => ExtensionKind::Reflect(1),
        "reflect2" => ExtensionKind::Reflect(2),
        "reflect3" => ExtensionKind::Reflect(3),
        other => bail!(
            "unknown extension {other:?}: expected zero, reflect1, reflect2, or reflect3"
        ),
    })
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    /// `bil1..bil4` for `probe-bilinear`; `kato`, `kato-trace`, `strichartz4`,
    /// `sobolev-time`, `kato-p` for `verify-linear`.
    pub estimate: String,
    #[serde(default = "default_probe_s")]
    pub s: f64,
    #[serde(default = "default_probe_b")]
    pub b: f64,
    #[serde(default = "default_probe_gamma")]
    pub gamma: f64,
    #[serde(default = "default_probe_alpha")]
    pub alpha: f64,
    #[serde(default = "default_ensemble")]
    pub ensemble: usize,
    #[serde(default = "default_probe_nx")]
    pub nx: usize,
    #[serde(default = "default_lx")]
    pub lx: f64,
    #[serde(default = "default_probe_nt")]
    pub nt: usize,
    #[serde(default = "default_probe_horizon")]
    pub t_horizon: f64,
    /// Strichartz spatial exponent, `0 <= theta <= 1/8`.
    #[serde(default)]
    pub theta: f64,
    /// Interpolated-smoothing integrability, `2 < p < inf`.
    #[serde(default = "default_probe_p")]
    pub p: f64,
}

fn default_probe_s() -> f64 {
    1.0
}
fn default_probe_b() -> f64 {
    0.46
}
fn default_probe_gamma() -> f64 {
    0.51
}
fn default_probe_alpha() -> f64 {
    0.5
}
fn default_ensemble() -> usize {
    200
}
fn default_probe_nx() -> usize {
    128
}
fn default_probe_nt() -> usize {
    128
}
fn default_probe_horizon() -> f64 {
    2.2
}
fn default_probe_p() -> f64 {
    4.0
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSection {
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_sweep")]
    pub sweep_points: usize,
    #[serde(default = "default_window_ratio")]
    pub window_ratio: f64,
}

fn default_alphas() -> Vec<f64> {
    vec![0.25, 0.5, 0.899]
}
fn default_sweep() -> usize {
    10_000
}
fn default_window_ratio() -> f64 {
    1.5
}

impl Default for ResonanceSection {
    fn default() -> Self {
        Self {
            alphas: default_alphas(),
            sweep_points: default_sweep(),
            window_ratio: default_window_ratio(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StudySection {
    /// `boundary` (trace recovery + linear-problem residual ladder),
    /// `duhamel` (single-mode closed form vs time resolution), or
    /// `conservation` (drift vs time resolution).
    pub kind: String,
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_levels() -> usize {
    3
}

/// Analytic or file-backed one-sided data.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Zero,
    /// `amplitude * exp(-(x-center)^2 / (2 width^2))`
    Gaussian { amplitude: f64, width: f64, center: f64 },
    /// `amplitude * exp(-rate x)`
    ExpDecay { amplitude: f64, rate: f64 },
    /// `amplitude * exp(-rate x) sin(freq x)`
    ExpSine { amplitude: f64, rate: f64, freq: f64 },
    /// two-column CSV (coordinate, value) with a header row
    Csv { path: PathBuf },
}

impl DataSpec {
    /// Initial data sampled on the positive nodes of the spatial grid, so the
    /// whole-line extension reproduces it node-for-node.
    pub fn build_spatial(&self, grid: &Grid1D, s: f64) -> Result<HalfLineFunction> {
        let built = match self {
            DataSpec::Csv { path } => HalfLineFunction::from_csv(path, s)?,
            _ => {
                let f = self.as_fn();
                HalfLineFunction::sample_on_grid(grid, |x| f(x), s)?
            }
        };
        Ok(built)
    }

    /// Boundary data sampled on its own fine time grid.
    pub fn build_temporal(&self, s: f64) -> Result<HalfLineFunction> {
        let built = match self {
            DataSpec::Csv { path } => HalfLineFunction::from_csv(path, s)?,
            _ => {
                let f = self.as_fn();
                HalfLineFunction::from_fn(|t| f(t), 22.0, 8192, s)?
            }
        };
        Ok(built)
    }

    fn as_fn(&self) -> Box<dyn Fn(f64) -> f64 + '_> {
        match self {
            DataSpec::Zero => Box::new(|_| 0.0),
            DataSpec::Gaussian { amplitude, width, center } => {
                let (a, w, c) = (*amplitude, *width, *center);
                Box::new(move |x| a * (-(x - c) * (x - c) / (2.0 * w * w)).exp())
            }
            DataSpec::ExpDecay { amplitude, rate } => {
                let (a, r) = (*amplitude, *rate);
                Box::new(move |x| a * (-r * x).exp())
            }
            DataSpec::ExpSine { amplitude, rate, freq } => {
                let (a, r, om) = (*amplitude, *rate, *freq);
                Box::new(move |x| a * (-r * x).exp() * (om * x).sin())
            }
            DataSpec::Csv { .. } => Box::new(|_| 0.0),
        }
    }
}

/// Documented key listing for every section; `config-reference` prints it.
pub const CONFIG_REFERENCE: &str = r#"# Configuration reference

All runs read a TOML file passed with --config. Unknown keys are rejected.

[run]
seed = 42                  # u64; --seed overrides
out = "runs/my-run"        # output directory; --out overrides

[problem]                  # required by: solve
alpha = 0.5                # coupling, must lie in (0, 1)
s = 1.0                    # regularity, in (0, 2) and not 1/2 or 3/2
u0 = { kind = "gaussian", amplitude = 0.1, width = 1.0, center = 5.0 }
v0 = { kind = "gaussian", amplitude = 0.1, width = 1.0, center = 5.0 }
f  = { kind = "zero" }     # boundary data; index (s+1)/3
g  = { kind = "zero" }
# data kinds:
#   { kind = "zero" }
#   { kind = "gaussian", amplitude, width, center }
#   { kind = "exp_decay", amplitude, rate }
#   { kind = "exp_sine", amplitude, rate, freq }
#   { kind = "csv", path = "data.csv" }   # columns: coordinate, value (header required)

[grid]                     # used by: solve, convergence-study
nx = 512                   # spatial nodes (power of two)
lx = 20.0                  # box half-width: x in [-lx, lx)
nt = 256                   # time nodes (power of two); window is [-4T, 4T)

[solver]                   # required by: solve
time_horizon = 0.1         # local time T; auto-halved on contraction failure
n_beta = 2048              # boundary-quadrature nodes
picard_tol = 1e-9          # Y x Y_alpha difference threshold
max_iters = 30
max_halvings = 4
# eps = 0.015              # optional; default derives from s
extension = "reflect3"     # zero | reflect1 | reflect2 | reflect3

[probe]                    # required by: probe-bilinear, verify-linear
estimate = "bil1"          # bil1 | bil2 | bil3 | bil4 (probe-bilinear)
                           # kato | kato-trace | strichartz4 | sobolev-time | kato-p (verify-linear)
s = 1.0
b = 0.46                   # must exceed max((3-s)/6, 7/16) (bil1/2) or max((s+1)/6, 7/16) (bil3/4)
gamma = 0.51               # low-frequency exponent, > 1/2
alpha = 0.5
ensemble = 200
nx = 128
lx = 20.0
nt = 128
t_horizon = 2.2
theta = 0.0                # strichartz4 spatial exponent, in [0, 1/8]
p = 4.0                    # kato-p integrability, in (2, inf)

[resonance]                # used by: resonance-report
alphas = [0.25, 0.5, 0.899]
sweep_points = 10000
window_ratio = 1.5         # region parameter c, in (1, sqrt(|r2/r1|))

[study]                    # required by: convergence-study
kind = "boundary"          # boundary | duhamel | conservation
levels = 3
"#;
