//! Experiment configurations and the deterministic sweep runner.
//!
//! A configuration names one experiment, a master seed, a replicate count,
//! and a parameter grid. The grid expands to an ordered list of points; the
//! row for (point, replicate) runs under the derived seed
//! `derive_seed(master_seed, [grid_index, replicate])`, so rows are pure
//! functions of the configuration and can execute on any number of threads
//! without changing the output bytes.

use crate::cells::{csv_line, json_line, Cell};
use cliquepack_core::bounds::{csprop_check, heuristic_panel, ideal1_log};
use cliquepack_core::constructions::{example_hypergraph, perfect_matching_hypergraph, random_nearly_disjoint};
use cliquepack_core::estimators::{
    survivor_trace, xi_exact, xi_mc, zeta_exact, zeta_mc_direct, zeta_sis, EstimateReport,
};
use cliquepack_core::packing::{exact_nu_k, gamma_stats, greedy_packing, ScanOrder};
use cliquepack_core::random_graph::RandomGraph;
use cliquepack_core::rng::derive_seed;
use cliquepack_core::{Hypergraph, Params};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

/// Error from configuration handling, distinguished from per-row module
/// errors, which are recorded inside the output instead.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn cfg_err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// The experiment kinds the runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    ZetaSweep,
    XiSweep,
    HeuristicCompare,
    CspropFuzz,
    AffineLowerbound,
    GammaSweep,
    NuKSweep,
    SurvivorTrace,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::ZetaSweep,
        Experiment::XiSweep,
        Experiment::HeuristicCompare,
        Experiment::CspropFuzz,
        Experiment::AffineLowerbound,
        Experiment::GammaSweep,
        Experiment::NuKSweep,
        Experiment::SurvivorTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ZetaSweep => "zeta-sweep",
            Experiment::XiSweep => "xi-sweep",
            Experiment::HeuristicCompare => "heuristic-compare",
            Experiment::CspropFuzz => "csprop-fuzz",
            Experiment::AffineLowerbound => "affine-lowerbound",
            Experiment::GammaSweep => "gamma-sweep",
            Experiment::NuKSweep => "nu-k-sweep",
            Experiment::SurvivorTrace => "survivor-trace",
        }
    }

    pub fn parse(name: &str) -> Result<Self, ConfigError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                ConfigError(format!(
                    "unknown experiment {name:?}; available: {}",
                    names.join(", ")
                ))
            })
    }

    /// Data columns specific to this experiment, between the common row
    /// prefix and the trailing error/version/time columns.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Experiment::ZetaSweep => &[
                "n", "k", "t", "method", "trials", "particles", "probes", "log_p", "se_log",
                "successes", "degenerate", "ideal1_log", "ratio",
            ],
            Experiment::XiSweep => &[
                "kind", "l", "s", "copies", "n", "t", "m", "independent", "method", "trials",
                "log_p", "se_log", "successes", "degenerate",
            ],
            Experiment::HeuristicCompare => &[
                "n", "k", "t", "beta", "ideal1_log", "ideal2_log", "tmp2a_log", "tmp2a_d",
                "f_log", "c_exponent", "sparse_regime_ok", "dense_regime_ok",
            ],
            Experiment::CspropFuzz => &[
                "n", "l", "t_target", "t", "delta", "low_interaction_count", "bound", "holds",
            ],
            Experiment::AffineLowerbound => &[
                "l", "s", "copies", "n", "t", "m", "independent", "trials", "log_p", "se_log",
                "log_p_over_m",
            ],
            Experiment::GammaSweep => &[
                "n", "k", "budget", "m_emp", "e_emp", "t_emp", "m_formula", "e_bound", "t_bound",
            ],
            Experiment::NuKSweep => &[
                "n", "k", "budget", "clique_count", "greedy_given", "greedy_random",
                "greedy_mindeg", "nu_size", "nu_exact", "ceiling",
            ],
            Experiment::SurvivorTrace => &[
                "l", "s", "copies", "n", "t", "m", "delta", "steps", "completed", "min_margin",
                "final_survivors",
            ],
        }
    }
}

/// Output encoding for run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn parse(name: &str) -> Result<Self, ConfigError> {
        match name {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => cfg_err(format!("unknown format {other:?}; available: csv, jsonl")),
        }
    }
}

/// Parameter grid: every present axis is a non-empty list of values, and
/// the experiment consumes exactly the axes it understands.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_frac: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_frac: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nl: Option<Vec<[u64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_target: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub particles: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<Vec<u64>>,
}

/// One experiment run: experiment, seed policy, and grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: String,
    pub master_seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub format: Option<String>,
    #[serde(default)]
    pub grid: Grid,
}

fn default_replicates() -> u64 {
    1
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(format!("config parse error: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn experiment(&self) -> Result<Experiment, ConfigError> {
        Experiment::parse(&self.experiment)
    }

    pub fn format(&self) -> Result<Format, ConfigError> {
        match &self.format {
            None => Ok(Format::Csv),
            Some(name) => Format::parse(name),
        }
    }
}

const DEFAULT_TRIALS: u64 = 100_000;
const DEFAULT_PARTICLES: u64 = 200;
const DEFAULT_PROBES: u64 = 200;
const DEFAULT_BUDGET: u64 = 10_000_000;
const DEFAULT_BETA: f64 = 1.0;

/// Fully resolved parameters for one grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSpec {
    Zeta {
        n: u64,
        k: u64,
        t: u64,
        method: ZetaMethod,
        trials: u64,
        particles: u64,
        probes: u64,
    },
    Xi {
        kind: XiKind,
        m_spec: MSpec,
        independent: bool,
        method: XiMethod,
        trials: u64,
    },
    Heuristic {
        n: u64,
        k: u64,
        t: u64,
        beta: f64,
    },
    Csprop {
        n: u64,
        l: u64,
        t_target: u64,
        delta: f64,
    },
    Affine {
        l: u64,
        s: u64,
        copies: u64,
        m_spec: MSpec,
        independent: bool,
        trials: u64,
    },
    Gamma {
        n: u64,
        k: u64,
        budget: u64,
    },
    NuK {
        n: u64,
        k: u64,
        budget: u64,
    },
    Survivor {
        l: u64,
        s: u64,
        copies: u64,
        m: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMethod {
    Exact,
    Direct,
    Sis,
}

impl ZetaMethod {
    fn parse(name: &str) -> Result<Self, ConfigError> {
        match name {
            "exact" => Ok(ZetaMethod::Exact),
            "direct" => Ok(ZetaMethod::Direct),
            "sis" => Ok(ZetaMethod::Sis),
            other => cfg_err(format!(
                "unknown zeta method {other:?}; available: exact, direct, sis"
            )),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ZetaMethod::Exact => "exact",
            ZetaMethod::Direct => "direct",
            ZetaMethod::Sis => "sis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiMethod {
    Exact,
    Mc,
}

impl XiMethod {
    fn parse(name: &str) -> Result<Self, ConfigError> {
        match name {
            "exact" => Ok(XiMethod::Exact),
            "mc" => Ok(XiMethod::Mc),
            other => cfg_err(format!("unknown xi method {other:?}; available: exact, mc")),
        }
    }

    fn name(self) -> &'static str {
        match self {
            XiMethod::Exact => "exact",
            XiMethod::Mc => "mc",
        }
    }
}

/// Hypergraph family used by the matching experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiKind {
    Example { l: u64, s: u64, copies: u64 },
    Matching { n: u64, l: u64 },
}

/// Matching size, either explicit or as a fraction of n/l resolved against
/// the concrete instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MSpec {
    Fixed(u64),
    Frac(f64),
}

impl MSpec {
    fn resolve(self, n: u64, l: u64) -> u64 {
        match self {
            MSpec::Fixed(m) => m,
            MSpec::Frac(frac) => (frac * n as f64 / l as f64).floor() as u64,
        }
    }
}

/// Tracks which grid axes an expansion consumed, so leftovers become
/// configuration errors instead of silently ignored parameters.
struct AxisReader<'a> {
    grid: &'a Grid,
    used: BTreeSet<&'static str>,
}

macro_rules! axis_method {
    ($get:ident, $field:ident, $ty:ty) => {
        fn $get(&mut self) -> Result<Option<Vec<$ty>>, ConfigError> {
            self.used.insert(stringify!($field));
            match &self.grid.$field {
                None => Ok(None),
                Some(v) if v.is_empty() => {
                    cfg_err(format!("grid axis `{}` is empty", stringify!($field)))
                }
                Some(v) => Ok(Some(v.clone())),
            }
        }
    };
}

impl<'a> AxisReader<'a> {
    fn new(grid: &'a Grid) -> Self {
        AxisReader {
            grid,
            used: BTreeSet::new(),
        }
    }

    axis_method!(n, n, u64);
    axis_method!(k, k, u64);
    axis_method!(t, t, u64);
    axis_method!(t_frac, t_frac, f64);
    axis_method!(l, l, u64);
    axis_method!(s, s, u64);
    axis_method!(copies, copies, u64);
    axis_method!(m, m, u64);
    axis_method!(m_frac, m_frac, f64);
    axis_method!(nl, nl, [u64; 2]);
    axis_method!(t_target, t_target, u64);
    axis_method!(delta, delta, f64);
    axis_method!(kind, kind, String);
    axis_method!(method, method, String);
    axis_method!(independent, independent, bool);
    axis_method!(trials, trials, u64);
    axis_method!(particles, particles, u64);
    axis_method!(probes, probes, u64);
    axis_method!(beta, beta, f64);
    axis_method!(budget, budget, u64);

    fn require<T>(
        v: Option<Vec<T>>,
        name: &str,
        experiment: Experiment,
    ) -> Result<Vec<T>, ConfigError> {
        v.ok_or_else(|| {
            ConfigError(format!(
                "experiment {} requires grid axis `{name}`",
                experiment.name()
            ))
        })
    }

    fn finish(self, experiment: Experiment) -> Result<(), ConfigError> {
        let unused: Vec<&str> = [
            ("n", self.grid.n.is_some()),
            ("k", self.grid.k.is_some()),
            ("t", self.grid.t.is_some()),
            ("t_frac", self.grid.t_frac.is_some()),
            ("l", self.grid.l.is_some()),
            ("s", self.grid.s.is_some()),
            ("copies", self.grid.copies.is_some()),
            ("m", self.grid.m.is_some()),
            ("m_frac", self.grid.m_frac.is_some()),
            ("nl", self.grid.nl.is_some()),
            ("t_target", self.grid.t_target.is_some()),
            ("delta", self.grid.delta.is_some()),
            ("kind", self.grid.kind.is_some()),
            ("method", self.grid.method.is_some()),
            ("independent", self.grid.independent.is_some()),
            ("trials", self.grid.trials.is_some()),
            ("particles", self.grid.particles.is_some()),
            ("probes", self.grid.probes.is_some()),
            ("beta", self.grid.beta.is_some()),
            ("budget", self.grid.budget.is_some()),
        ]
        .into_iter()
        .filter(|(name, present)| *present && !self.used.contains(name))
        .map(|(name, _)| name)
        .collect();
        if unused.is_empty() {
            Ok(())
        } else {
            cfg_err(format!(
                "grid axes not used by experiment {}: {}",
                experiment.name(),
                unused.join(", ")
            ))
        }
    }
}

/// Size rule for fractional t axes: a floor of 6 keeps tiny grids off the
/// degenerate t=1 path while round(frac*n^2/k^3) tracks the intended
/// density.
fn resolve_t_frac(frac: f64, n: u64, k: u64) -> u64 {
    let ideal = frac * (n * n) as f64 / (k * k * k) as f64;
    (ideal.round() as u64).max(6)
}

/// Either an explicit t list or a list of fractions of n^2/k^3.
enum TAxis {
    Fixed(Vec<u64>),
    Frac(Vec<f64>),
}

fn read_t_axis(r: &mut AxisReader, experiment: Experiment) -> Result<TAxis, ConfigError> {
    let t = r.t()?;
    let t_frac = r.t_frac()?;
    match (t, t_frac) {
        (Some(_), Some(_)) => cfg_err(format!(
            "experiment {} takes either `t` or `t_frac`, not both",
            experiment.name()
        )),
        (Some(t), None) => Ok(TAxis::Fixed(t)),
        (None, Some(f)) => Ok(TAxis::Frac(f)),
        (None, None) => cfg_err(format!(
            "experiment {} requires grid axis `t` or `t_frac`",
            experiment.name()
        )),
    }
}

fn read_m_axis(r: &mut AxisReader, experiment: Experiment) -> Result<Vec<MSpec>, ConfigError> {
    let m = r.m()?;
    let m_frac = r.m_frac()?;
    match (m, m_frac) {
        (Some(_), Some(_)) => cfg_err(format!(
            "experiment {} takes either `m` or `m_frac`, not both",
            experiment.name()
        )),
        (Some(m), None) => Ok(m.into_iter().map(MSpec::Fixed).collect()),
        (None, Some(f)) => Ok(f.into_iter().map(MSpec::Frac).collect()),
        (None, None) => cfg_err(format!(
            "experiment {} requires grid axis `m` or `m_frac`",
            experiment.name()
        )),
    }
}

/// Expands a configuration into its ordered grid points.
pub fn expand(config: &Config) -> Result<Vec<PointSpec>, ConfigError> {
    let experiment = config.experiment()?;
    if config.replicates < 1 {
        return cfg_err("replicates must be at least 1");
    }
    config.format()?;
    let mut r = AxisReader::new(&config.grid);
    let mut points = Vec::new();
    match experiment {
        Experiment::ZetaSweep => {
            let n = AxisReader::require(r.n()?, "n", experiment)?;
            let k = AxisReader::require(r.k()?, "k", experiment)?;
            let t_axis = read_t_axis(&mut r, experiment)?;
            let method = r
                .method()?
                .map(|ms| ms.iter().map(|m| ZetaMethod::parse(m)).collect())
                .transpose()?
                .unwrap_or(vec![ZetaMethod::Exact]);
            let trials = r.trials()?.unwrap_or(vec![DEFAULT_TRIALS]);
            let particles = r.particles()?.unwrap_or(vec![DEFAULT_PARTICLES]);
            let probes = r.probes()?.unwrap_or(vec![DEFAULT_PROBES]);
            for &n in &n {
                for &k in &k {
                    let ts: Vec<u64> = match &t_axis {
                        TAxis::Fixed(t) => t.clone(),
                        TAxis::Frac(f) => {
                            f.iter().map(|&f| resolve_t_frac(f, n, k)).collect()
                        }
                    };
                    for &t in &ts {
                        for &method in &method {
                            for &trials in &trials {
                                for &particles in &particles {
                                    for &probes in &probes {
                                        points.push(PointSpec::Zeta {
                                            n,
                                            k,
                                            t,
                                            method,
                                            trials,
                                            particles,
                                            probes,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Experiment::XiSweep => {
            let kinds = r
                .kind()?
                .unwrap_or_else(|| vec!["example".to_string()]);
            let m_specs = read_m_axis(&mut r, experiment)?;
            let independent = r.independent()?.unwrap_or(vec![false]);
            let method = r
                .method()?
                .map(|ms| ms.iter().map(|m| XiMethod::parse(m)).collect())
                .transpose()?
                .unwrap_or(vec![XiMethod::Exact]);
            let trials = r.trials()?.unwrap_or(vec![DEFAULT_TRIALS]);
            let mut resolved_kinds = Vec::new();
            for kind in &kinds {
                match kind.as_str() {
                    "example" => {
                        let l = AxisReader::require(r.l()?, "l", experiment)?;
                        let s = AxisReader::require(r.s()?, "s", experiment)?;
                        let copies = AxisReader::require(r.copies()?, "copies", experiment)?;
                        for &l in &l {
                            for &s in &s {
                                for &copies in &copies {
                                    resolved_kinds.push(XiKind::Example { l, s, copies });
                                }
                            }
                        }
                    }
                    "matching" => {
                        let n = AxisReader::require(r.n()?, "n", experiment)?;
                        let l = AxisReader::require(r.l()?, "l", experiment)?;
                        for &n in &n {
                            for &l in &l {
                                resolved_kinds.push(XiKind::Matching { n, l });
                            }
                        }
                    }
                    other => {
                        return cfg_err(format!(
                            "unknown hypergraph kind {other:?}; available: example, matching"
                        ))
                    }
                }
            }
            for &kind in &resolved_kinds {
                for &m_spec in &m_specs {
                    for &independent in &independent {
                        for &method in &method {
                            for &trials in &trials {
                                points.push(PointSpec::Xi {
                                    kind,
                                    m_spec,
                                    independent,
                                    method,
                                    trials,
                                });
                            }
                        }
                    }
                }
            }
        }
        Experiment::HeuristicCompare => {
            let n = AxisReader::require(r.n()?, "n", experiment)?;
            let k = AxisReader::require(r.k()?, "k", experiment)?;
            let t_axis = read_t_axis(&mut r, experiment)?;
            let beta = r.beta()?.unwrap_or(vec![DEFAULT_BETA]);
            for &n in &n {
                for &k in &k {
                    let ts: Vec<u64> = match &t_axis {
                        TAxis::Fixed(t) => t.clone(),
                        TAxis::Frac(f) => {
                            f.iter().map(|&f| resolve_t_frac(f, n, k)).collect()
                        }
                    };
                    for &t in &ts {
                        for &beta in &beta {
                            points.push(PointSpec::Heuristic { n, k, t, beta });
                        }
                    }
                }
            }
        }
        Experiment::CspropFuzz => {
            let nl = AxisReader::require(r.nl()?, "nl", experiment)?;
            let t_target = r.t_target()?;
            let delta = AxisReader::require(r.delta()?, "delta", experiment)?;
            for &[n, l] in &nl {
                let targets = match &t_target {
                    Some(list) => list.clone(),
                    // Default: aim past the census ceiling regime at 2n/l.
                    None => vec![if l == 0 { 0 } else { 2 * n / l }],
                };
                for &t_target in &targets {
                    for &delta in &delta {
                        points.push(PointSpec::Csprop {
                            n,
                            l,
                            t_target,
                            delta,
                        });
                    }
                }
            }
        }
        Experiment::AffineLowerbound => {
            let l = AxisReader::require(r.l()?, "l", experiment)?;
            let s = AxisReader::require(r.s()?, "s", experiment)?;
            let copies = AxisReader::require(r.copies()?, "copies", experiment)?;
            let m_specs = read_m_axis(&mut r, experiment)?;
            let independent = r.independent()?.unwrap_or(vec![true]);
            let trials = r.trials()?.unwrap_or(vec![DEFAULT_TRIALS]);
            for &l in &l {
                for &s in &s {
                    for &copies in &copies {
                        for &m_spec in &m_specs {
                            for &independent in &independent {
                                for &trials in &trials {
                                    points.push(PointSpec::Affine {
                                        l,
                                        s,
                                        copies,
                                        m_spec,
                                        independent,
                                        trials,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Experiment::GammaSweep | Experiment::NuKSweep => {
            let n = AxisReader::require(r.n()?, "n", experiment)?;
            let k = AxisReader::require(r.k()?, "k", experiment)?;
            let budget = r.budget()?.unwrap_or(vec![DEFAULT_BUDGET]);
            for &n in &n {
                for &k in &k {
                    for &budget in &budget {
                        points.push(match experiment {
                            Experiment::GammaSweep => PointSpec::Gamma { n, k, budget },
                            _ => PointSpec::NuK { n, k, budget },
                        });
                    }
                }
            }
        }
        Experiment::SurvivorTrace => {
            let l = AxisReader::require(r.l()?, "l", experiment)?;
            let s = AxisReader::require(r.s()?, "s", experiment)?;
            let copies = AxisReader::require(r.copies()?, "copies", experiment)?;
            let m = AxisReader::require(r.m()?, "m", experiment)?;
            for &l in &l {
                for &s in &s {
                    for &copies in &copies {
                        for &m in &m {
                            points.push(PointSpec::Survivor { l, s, copies, m });
                        }
                    }
                }
            }
        }
    }
    r.finish(experiment)?;
    if points.is_empty() {
        return cfg_err("expanded grid is empty");
    }
    Ok(points)
}

/// Result of one row: the experiment-specific cells plus an error message
/// when the point could not run.
struct RowOutcome {
    cells: Vec<Cell>,
    error: Option<String>,
}

fn err_row(experiment: Experiment, partial: Vec<Cell>, error: String) -> RowOutcome {
    let mut cells = partial;
    cells.resize(experiment.columns().len(), Cell::Empty);
    RowOutcome {
        cells,
        error: Some(error),
    }
}

fn params(n: u64, k: u64, t: u64) -> cliquepack_core::Result<Params> {
    Params::new(n as usize, k as usize, t)
}

fn estimate_cells(report: &EstimateReport) -> [Cell; 4] {
    [
        Cell::F64(report.log_p),
        Cell::F64(report.se_log),
        report.successes.into(),
        Cell::Bool(report.degenerate),
    ]
}

fn build_xi_instance(kind: XiKind) -> cliquepack_core::Result<Hypergraph> {
    match kind {
        XiKind::Example { l, s, copies } => Ok(example_hypergraph(
            l as usize,
            s as usize,
            copies as usize,
        )?
        .into_hypergraph()),
        XiKind::Matching { n, l } => perfect_matching_hypergraph(n as usize, l as usize),
    }
}

fn run_point(experiment: Experiment, spec: &PointSpec, seed: u64) -> RowOutcome {
    match spec {
        PointSpec::Zeta {
            n,
            k,
            t,
            method,
            trials,
            particles,
            probes,
        } => {
            let head = vec![
                Cell::U64(*n),
                Cell::U64(*k),
                Cell::U64(*t),
                Cell::from(method.name()),
                Cell::U64(*trials),
                Cell::U64(*particles),
                Cell::U64(*probes),
            ];
            let p = match params(*n, *k, *t) {
                Ok(p) => p,
                Err(e) => return err_row(experiment, head, e.to_string()),
            };
            let report = match method {
                ZetaMethod::Exact => zeta_exact(&p),
                ZetaMethod::Direct => zeta_mc_direct(&p, *trials, seed),
                ZetaMethod::Sis => zeta_sis(&p, *particles, *probes, seed),
            };
            let report = match report {
                Ok(r) => r,
                Err(e) => return err_row(experiment, head, e.to_string()),
            };
            let ideal1 = ideal1_log(&p);
            let ratio = if report.log_p.is_finite() && ideal1 < 0.0 {
                Cell::F64(report.log_p / ideal1)
            } else {
                Cell::Empty
            };
            let mut cells = head;
            cells.extend(estimate_cells(&report));
            cells.push(Cell::F64(ideal1));
            cells.push(ratio);
            RowOutcome { cells, error: None }
        }
        PointSpec::Xi {
            kind,
            m_spec,
            independent,
            method,
            trials,
        } => {
            let (kind_name, l, s, copies, n0) = match kind {
                XiKind::Example { l, s, copies } => ("example", *l, Some(*s), Some(*copies), None),
                XiKind::Matching { n, l } => ("matching", *l, None, None, Some(*n)),
            };
            let head_of = |n: Option<u64>, t: Option<u64>, m: Option<u64>| {
                vec![
                    Cell::from(kind_name),
                    Cell::U64(l),
                    s.into(),
                    copies.into(),
                    n.into(),
                    t.into(),
                    m.into(),
                    Cell::Bool(*independent),
                    Cell::from(method.name()),
                    Cell::U64(*trials),
                ]
            };
            let h = match build_xi_instance(*kind) {
                Ok(h) => h,
                Err(e) => return err_row(experiment, head_of(n0, None, None), e.to_string()),
            };
            let n = h.n() as u64;
            let t = h.edge_count() as u64;
            let m = m_spec.resolve(n, l);
            let head = head_of(Some(n), Some(t), Some(m));
            let report = match method {
                XiMethod::Exact => xi_exact(&h, m as usize),
                XiMethod::Mc => xi_mc(&h, m as usize, *trials, seed, *independent),
            };
            match report {
                Ok(r) => {
                    let mut cells = head;
                    cells.extend(estimate_cells(&r));
                    RowOutcome { cells, error: None }
                }
                Err(e) => err_row(experiment, head, e.to_string()),
            }
        }
        PointSpec::Heuristic { n, k, t, beta } => {
            let head = vec![
                Cell::U64(*n),
                Cell::U64(*k),
                Cell::U64(*t),
                Cell::F64(*beta),
            ];
            let p = match params(*n, *k, *t) {
                Ok(p) => p,
                Err(e) => return err_row(experiment, head, e.to_string()),
            };
            match heuristic_panel(&p, *beta) {
                Ok(panel) => {
                    let mut cells = head;
                    cells.push(Cell::F64(panel[0].log_value));
                    cells.push(Cell::F64(panel[1].log_value));
                    cells.push(Cell::F64(panel[2].log_value));
                    cells.push(Cell::F64(panel[2].constants[1].1));
                    cells.push(Cell::F64(panel[3].log_value));
                    cells.push(Cell::F64(panel[3].constants[0].1));
                    cells.push(Cell::Bool(panel[0].regime_ok));
                    cells.push(Cell::Bool(panel[2].regime_ok));
                    RowOutcome { cells, error: None }
                }
                Err(e) => err_row(experiment, head, e.to_string()),
            }
        }
        PointSpec::Csprop {
            n,
            l,
            t_target,
            delta,
        } => {
            let head = vec![
                Cell::U64(*n),
                Cell::U64(*l),
                Cell::U64(*t_target),
            ];
            let h = match random_nearly_disjoint(*n as usize, *l as usize, *t_target as usize, seed)
            {
                Ok(h) => h,
                Err(e) => return err_row(experiment, head, e.to_string()),
            };
            let mut head = head;
            head.push(Cell::U64(h.edge_count() as u64));
            head.push(Cell::F64(*delta));
            match csprop_check(&h, *delta) {
                Ok(out) => {
                    let mut cells = head;
                    cells.push(Cell::U64(out.low_interaction_count as u64));
                    cells.push(Cell::F64(out.bound));
                    cells.push(Cell::Bool(out.holds));
                    RowOutcome { cells, error: None }
                }
                Err(e) => err_row(experiment, head, e.to_string()),
            }
        }
        PointSpec::Affine {
            l,
            s,
            copies,
            m_spec,
            independent,
            trials,
        } => {
            let head = vec![Cell::U64(*l), Cell::U64(*s), Cell::U64(*copies)];
            let ex = match example_hypergraph(*l as usize, *s as usize, *copies as usize) {
                Ok(ex) => ex,
                Err(e) => return err_row(experiment, head, e.to_string()),
            };
            let h = ex.hypergraph();
            let n = h.n() as u64;
            let t = h.edge_count() as u64;
            let m = m_spec.resolve(n, *l);
            let mut head = head;
            head.push(Cell::U64(n));
            head.push(Cell::U64(t));
            head.push(Cell::U64(m));
            head.push(Cell::Bool(*independent));
            head.push(Cell::U64(*trials));
            match xi_mc(h, m as usize, *trials, seed, *independent) {
                Ok(r) => {
                    let mut cells = head;
                    cells.push(Cell::F64(r.log_p));
                    cells.push(Cell::F64(r.se_log));
                    cells.push(if m > 0 {
                        Cell::F64(r.log_p / m as f64)
                    } else {
                        Cell::Empty
                    });
                    RowOutcome { cells, error: None }
                }
                Err(e) => err_row(experiment, head, e.to_string()),
            }
        }
        PointSpec::Gamma { n, k, budget } => {
            let head = vec![Cell::U64(*n), Cell::U64(*k), Cell::U64(*budget)];
            let g = RandomGraph::gnp_half(*n as usize, seed);
            match gamma_stats(&g, *k as usize, *budget) {
                Ok(stats) => {
                    let mut cells = head;
                    cells.push(Cell::U64(stats.m_emp));
                    cells.push(Cell::U64(stats.e_emp));
                    cells.push(Cell::U64(stats.t_emp));
                    cells.push(Cell::F64(stats.m_formula));
                    cells.push(Cell::F64(stats.e_bound));
                    cells.push(Cell::F64(stats.t_bound));
                    RowOutcome { cells, error: None }
                }
                Err(e) => err_row(experiment, head, e.to_string()),
            }
        }
        PointSpec::NuK { n, k, budget } => {
            let head = vec![Cell::U64(*n), Cell::U64(*k), Cell::U64(*budget)];
            let g = RandomGraph::gnp_half(*n as usize, seed);
            let cliques = match g.enumerate_cliques(*k as usize, *budget) {
                Ok(c) => c,
                Err(e) => return err_row(experiment, head, e.to_string()),
            };
            let run = || -> cliquepack_core::Result<Vec<Cell>> {
                let order_seed = derive_seed(seed, &[1]);
                let greedy_given = greedy_packing(&cliques, ScanOrder::Given)?.len() as u64;
                let greedy_random =
                    greedy_packing(&cliques, ScanOrder::Random(order_seed))?.len() as u64;
                let greedy_mindeg = greedy_packing(&cliques, ScanOrder::MinDegree)?.len() as u64;
                let nu = exact_nu_k(&cliques, *budget)?;
                let ceiling = cliquepack_core::formulas::trivial_packing_bound(
                    *n as usize,
                    *k as usize,
                )?;
                Ok(vec![
                    Cell::U64(cliques.len() as u64),
                    Cell::U64(greedy_given),
                    Cell::U64(greedy_random),
                    Cell::U64(greedy_mindeg),
                    Cell::U64(nu.size),
                    Cell::Bool(nu.exact),
                    Cell::U64(ceiling),
                ])
            };
            match run() {
                Ok(tail) => {
                    let mut cells = head;
                    cells.extend(tail);
                    RowOutcome { cells, error: None }
                }
                Err(e) => err_row(experiment, head, e.to_string()),
            }
        }
        PointSpec::Survivor { l, s, copies, m } => {
            let head = vec![Cell::U64(*l), Cell::U64(*s), Cell::U64(*copies)];
            let ex = match example_hypergraph(*l as usize, *s as usize, *copies as usize) {
                Ok(ex) => ex,
                Err(e) => return err_row(experiment, head, e.to_string()),
            };
            let h = ex.hypergraph();
            let n = h.n() as u64;
            let t = h.edge_count() as u64;
            let mut head = head;
            head.push(Cell::U64(n));
            head.push(Cell::U64(t));
            head.push(Cell::U64(*m));
            match survivor_trace(h, *m as usize, seed) {
                Ok(trace) => {
                    let floor = (n / *l) as i64;
                    let min_margin = trace
                        .steps
                        .iter()
                        .map(|st| st.survivor_count as i64 - (floor - st.step as i64))
                        .min();
                    let final_survivors = trace.steps.last().map(|st| st.survivor_count as u64);
                    let mut cells = head;
                    cells.push(Cell::F64(trace.delta));
                    cells.push(Cell::U64(trace.steps.len() as u64));
                    cells.push(Cell::Bool(trace.completed));
                    cells.push(min_margin.into());
                    cells.push(final_survivors.into());
                    RowOutcome { cells, error: None }
                }
                Err(e) => err_row(experiment, head, e.to_string()),
            }
        }
    }
}

/// Columns common to every experiment, wrapped around the per-experiment
/// data block.
pub fn full_columns(experiment: Experiment) -> Vec<&'static str> {
    let mut cols = vec!["experiment", "grid_index", "replicate", "seed"];
    cols.extend(experiment.columns());
    cols.extend(["error", "version", "wall_time_ms"]);
    cols
}

/// Runs a configuration and streams records to `out` in grid order.
///
/// Rows are computed in parallel chunks, but written strictly in
/// (grid_index, replicate) order, so interrupting a run leaves a valid
/// prefix and thread count never changes the bytes.
pub fn run_config(
    config: &Config,
    threads: usize,
    out: &mut dyn Write,
) -> Result<(), ConfigError> {
    let experiment = config.experiment()?;
    let format = config.format()?;
    let points = expand(config)?;
    let columns = full_columns(experiment);

    if format == Format::Csv {
        writeln!(out, "{}", columns.join(",")).map_err(io_err)?;
    }

    let jobs: Vec<(u64, u64, &PointSpec)> = points
        .iter()
        .enumerate()
        .flat_map(|(gi, spec)| {
            (0..config.replicates).map(move |rep| (gi as u64, rep, spec))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| ConfigError(format!("thread pool: {e}")))?;

    let chunk_size = (threads.max(1) * 4).max(16);
    for chunk in jobs.chunks(chunk_size) {
        let results: Vec<(u64, u64, u64, RowOutcome, u128)> = pool.install(|| {
            use rayon::prelude::*;
            chunk
                .par_iter()
                .map(|&(grid_index, replicate, spec)| {
                    let seed = derive_seed(config.master_seed, &[grid_index, replicate]);
                    let start = Instant::now();
                    let outcome = run_point(experiment, spec, seed);
                    let elapsed = start.elapsed().as_millis();
                    (grid_index, replicate, seed, outcome, elapsed)
                })
                .collect()
        });
        for (grid_index, replicate, seed, outcome, elapsed) in results {
            let mut cells = vec![
                Cell::from(experiment.name()),
                Cell::U64(grid_index),
                Cell::U64(replicate),
                Cell::U64(seed),
            ];
            cells.extend(outcome.cells);
            cells.push(outcome.error.map(Cell::Str).unwrap_or(Cell::Empty));
            cells.push(Cell::from(env!("CARGO_PKG_VERSION")));
            cells.push(Cell::U64(elapsed as u64));
            let line = match format {
                Format::Csv => csv_line(&cells),
                Format::Jsonl => json_line(&columns, &cells),
            };
            writeln!(out, "{line}").map_err(io_err)?;
        }
    }
    Ok(())
}

fn io_err(e: std::io::Error) -> ConfigError {
    ConfigError(format!("write error: {e}"))
}

/// Runs a configuration into an in-memory string.
pub fn run_config_to_string(config: &Config, threads: usize) -> Result<String, ConfigError> {
    let mut buf = Vec::new();
    run_config(config, threads, &mut buf)?;
    String::from_utf8(buf).map_err(|e| ConfigError(format!("output not utf-8: {e}")))
}
