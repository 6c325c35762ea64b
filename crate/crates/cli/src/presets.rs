//! Canned experiment configurations.
//!
//! Presets are full configurations with fixed master seeds, so a preset
//! name is enough to reproduce a run byte for byte.

use crate::experiments::{Config, ConfigError, Grid};

struct Preset {
    name: &'static str,
    summary: &'static str,
    build: fn() -> Config,
}

const PRESETS: &[Preset] = &[
    Preset {
        name: "zeta-oracle-grid",
        summary: "exact packing probabilities over a small (n, k, t) grid",
        build: || config("zeta-sweep", 17, 1, |g| {
            g.n = Some(vec![2, 3, 4, 5, 6]);
            g.k = Some(vec![2, 3]);
            g.t = Some(vec![1, 2, 3, 4]);
            g.method = Some(vec!["exact".into()]);
        }),
    },
    Preset {
        name: "zeta-estimator-check",
        summary: "direct and SIS estimates on the exact-oracle grid",
        build: || config("zeta-sweep", 29, 1, |g| {
            g.n = Some(vec![2, 3, 4, 5, 6]);
            g.k = Some(vec![2, 3]);
            g.t = Some(vec![1, 2, 3, 4]);
            g.method = Some(vec!["direct".into(), "sis".into()]);
            g.trials = Some(vec![100_000]);
            g.particles = Some(vec![200]);
            g.probes = Some(vec![200]);
        }),
    },
    Preset {
        name: "regime-diagnostic",
        summary: "SIS estimates against the quadratic exponent heuristic",
        build: || config("zeta-sweep", 43, 1, |g| {
            g.n = Some(vec![60, 90]);
            g.k = Some(vec![3, 4]);
            g.t_frac = Some(vec![0.15, 0.3]);
            g.method = Some(vec!["sis".into()]);
            g.particles = Some(vec![600]);
            g.probes = Some(vec![400]);
        }),
    },
    Preset {
        name: "xi-example-check",
        summary: "exact vs Monte Carlo matching probabilities on a small block design",
        build: || config("xi-sweep", 53, 1, |g| {
            g.kind = Some(vec!["example".into()]);
            g.l = Some(vec![2]);
            g.s = Some(vec![3]);
            g.copies = Some(vec![2]);
            g.m = Some(vec![2, 3, 4]);
            g.independent = Some(vec![false]);
            g.method = Some(vec!["exact".into(), "mc".into()]);
            g.trials = Some(vec![100_000]);
        }),
    },
    Preset {
        name: "affine-lowerbound",
        summary: "independent-draw matching rate on replicated plane slices",
        build: || config("affine-lowerbound", 61, 1, |g| {
            g.l = Some(vec![3]);
            g.s = Some(vec![2]);
            g.copies = Some(vec![10]);
            g.m_frac = Some(vec![0.2]);
            g.independent = Some(vec![true]);
            g.trials = Some(vec![100_000]);
        }),
    },
    Preset {
        name: "csprop-fuzz",
        summary: "interaction census check over random nearly-disjoint families",
        build: || config("csprop-fuzz", 71, 334, |g| {
            g.nl = Some(vec![[50, 3], [100, 4], [200, 5]]);
            g.delta = Some(vec![0.1, 0.3, 0.7]);
        }),
    },
    Preset {
        name: "gamma-sweep-14",
        summary: "clique statistics of G(14, 1/2) against their predictions",
        build: || config("gamma-sweep", 83, 200, |g| {
            g.n = Some(vec![14]);
            g.k = Some(vec![4]);
            g.budget = Some(vec![10_000_000]);
        }),
    },
    Preset {
        name: "nu-k-small",
        summary: "greedy vs optimal triangle packings of G(8, 1/2)",
        build: || config("nu-k-sweep", 97, 50, |g| {
            g.n = Some(vec![8]);
            g.k = Some(vec![3]);
            g.budget = Some(vec![10_000_000]);
        }),
    },
    Preset {
        name: "survivor-example",
        summary: "survivor traces of sequential matchings on block designs",
        build: || config("survivor-trace", 103, 25, |g| {
            g.l = Some(vec![2, 3]);
            g.s = Some(vec![2, 3]);
            g.copies = Some(vec![2, 4]);
            g.m = Some(vec![4]);
        }),
    },
    Preset {
        name: "heuristic-panel-demo",
        summary: "closed-form bound panel on a medium grid",
        build: || config("heuristic-compare", 1, 1, |g| {
            g.n = Some(vec![100]);
            g.k = Some(vec![4, 5]);
            g.t = Some(vec![40, 160]);
            g.beta = Some(vec![1.0]);
        }),
    },
];

fn config(
    experiment: &str,
    master_seed: u64,
    replicates: u64,
    fill: fn(&mut Grid),
) -> Config {
    let mut grid = Grid::default();
    fill(&mut grid);
    Config {
        experiment: experiment.to_string(),
        master_seed,
        replicates,
        format: None,
        grid,
    }
}

/// Preset names in listing order.
pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

/// One-line description for the listing.
pub fn preset_summary(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.name == name).map(|p| p.summary)
}

/// The full configuration behind a preset name.
pub fn preset_config(name: &str) -> Result<Config, ConfigError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .map(|p| (p.build)())
        .ok_or_else(|| {
            ConfigError(format!(
                "unknown preset {name:?}; available: {}",
                preset_names().join(", ")
            ))
        })
}
