//! End-to-end acceptance checks, one per shipped guarantee.
//!
//! Each test prints a single summary line; run with `--nocapture` to see
//! them. Checks that need an independent oracle build it here from first
//! principles (bitmask enumeration) rather than reusing library code.

use cliquepack_cli::cells::split_csv_line;
use cliquepack_cli::{preset_config, preset_names, run_config_to_string};
use cliquepack_core::bounds::{csprop_check, ideal2_log};
use cliquepack_core::constructions::example_hypergraph;
use cliquepack_core::estimators::{
    survivor_trace, xi_exact, xi_mc, zeta_exact, zeta_mc_direct, zeta_sis,
};
use cliquepack_core::packing::{conflict_graph, exact_nu_k, greedy_packing, ScanOrder};
use cliquepack_core::random_graph::RandomGraph;
use cliquepack_core::{Hypergraph, Params, SetFamily, VertexSet};
use std::time::Instant;

fn finish(number: u32, name: &str, start: Instant, outcome: Result<(), String>) {
    match outcome {
        Ok(()) => println!(
            "acceptance {number:02} ({name}): PASS ({:.1}s)",
            start.elapsed().as_secs_f64()
        ),
        Err(reason) => {
            println!("acceptance {number:02} ({name}): FAIL: {reason}");
            panic!("acceptance {number:02} ({name}): {reason}");
        }
    }
}

/// All k-subsets of [n] as vertex bitmasks.
fn subsets_as_masks(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut stack = vec![(0u32, 0usize, 0usize)];
    while let Some((mask, next, size)) = stack.pop() {
        if size == k {
            out.push(mask);
            continue;
        }
        for v in next..n {
            if n - v >= k - size {
                stack.push((mask | (1 << v), v + 1, size + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

fn masks_pack(tuple: &[u32]) -> bool {
    for i in 0..tuple.len() {
        for j in (i + 1)..tuple.len() {
            if (tuple[i] & tuple[j]).count_ones() > 1 {
                return false;
            }
        }
    }
    true
}

/// Ordered-tuple enumeration of the packing probability: (successes, total).
fn oracle_counts(n: usize, k: usize, t: u64) -> (u64, u64) {
    let sets = subsets_as_masks(n, k);
    let big_n = sets.len() as u64;
    let total = big_n.pow(t as u32);
    let mut tuple = vec![0usize; t as usize];
    let mut good = 0u64;
    loop {
        let chosen: Vec<u32> = tuple.iter().map(|&i| sets[i]).collect();
        if masks_pack(&chosen) {
            good += 1;
        }
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                return (good, total);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < sets.len() {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn family_as_masks(family: &SetFamily) -> Vec<u32> {
    family
        .blocks()
        .iter()
        .map(|b| b.iter().fold(0u32, |m, v| m | (1 << v)))
        .collect()
}

/// Exhaustive maximum pairwise-compatible subfamily size.
fn brute_force_packing_number(masks: &[u32]) -> u64 {
    let t = masks.len();
    assert!(t <= 20);
    let mut best = 0u64;
    for choice in 0u32..(1 << t) {
        let count = choice.count_ones() as u64;
        if count <= best {
            continue;
        }
        let chosen: Vec<u32> = (0..t).filter(|i| choice >> i & 1 == 1).map(|i| masks[i]).collect();
        if masks_pack(&chosen) {
            best = count;
        }
    }
    best
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn from_preset(name: &str) -> Result<Table, String> {
        let config = preset_config(name).map_err(|e| e.to_string())?;
        let text = run_config_to_string(&config, 1).map_err(|e| e.to_string())?;
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty run output")?;
        Ok(Table {
            columns: split_csv_line(header),
            rows: lines.map(split_csv_line).collect(),
        })
    }

    fn idx(&self, column: &str) -> Result<usize, String> {
        self.columns
            .iter()
            .position(|c| c == column)
            .ok_or_else(|| format!("missing column {column}"))
    }

    fn f64(&self, row: &[String], column: &str) -> Result<f64, String> {
        let cell = &row[self.idx(column)?];
        cell.parse()
            .map_err(|_| format!("column {column} held {cell:?}, expected a number"))
    }
}

#[test]
fn acceptance_01_exact_oracle_grid() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        for n in 2..=6usize {
            for k in [2usize, 3] {
                if k > n {
                    continue;
                }
                for t in 1..=4u64 {
                    let (good, total) = oracle_counts(n, k, t);
                    let report = zeta_exact(&Params::new(n, k, t).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    if good == 0 {
                        if report.log_p != f64::NEG_INFINITY {
                            return Err(format!(
                                "({n},{k},{t}): oracle says impossible, exact gave {}",
                                report.log_p
                            ));
                        }
                        continue;
                    }
                    let oracle = (good as f64 / total as f64).ln();
                    let diff = (report.log_p - oracle).abs();
                    if diff > 1e-12 * oracle.abs().max(1.0) {
                        return Err(format!(
                            "({n},{k},{t}): exact {} vs enumeration {oracle}",
                            report.log_p
                        ));
                    }
                    if (n, k, t) == (4, 2, 2) && (good * 6 != 5 * total) {
                        return Err(format!("(4,2,2) enumerated {good}/{total}, want 5/6"));
                    }
                    if (n, k, t) == (5, 3, 2) && (good * 10 != 3 * total) {
                        return Err(format!("(5,3,2) enumerated {good}/{total}, want 3/10"));
                    }
                }
            }
        }
        Ok(())
    };
    finish(1, "exact-oracle-grid", start, run());
}

#[test]
fn acceptance_02_pair_identity() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        for n in 2..=8usize {
            for t in 1..=6u64 {
                let p = Params::new(n, 2, t).map_err(|e| e.to_string())?;
                let product = ideal2_log(&p).map_err(|e| e.to_string())?.exp();
                let exact = zeta_exact(&p).map_err(|e| e.to_string())?.log_p.exp();
                let diff = (product - exact).abs();
                if diff > 1e-12 * product.max(exact).max(f64::MIN_POSITIVE) {
                    return Err(format!(
                        "(n={n}, t={t}): product {product} vs exact {exact}"
                    ));
                }
            }
        }
        Ok(())
    };
    finish(2, "pair-identity", start, run());
}

#[test]
fn acceptance_03_estimator_consistency() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        let mut seed = 3000u64;
        for n in 2..=6usize {
            for k in [2usize, 3] {
                if k > n {
                    continue;
                }
                for t in 1..=4u64 {
                    seed += 1;
                    let p = Params::new(n, k, t).map_err(|e| e.to_string())?;
                    let exact = zeta_exact(&p).map_err(|e| e.to_string())?;
                    let direct =
                        zeta_mc_direct(&p, 100_000, seed).map_err(|e| e.to_string())?;
                    let sis = zeta_sis(&p, 200, 200, seed).map_err(|e| e.to_string())?;
                    for (label, est) in [("direct", &direct), ("sis", &sis)] {
                        if exact.log_p == f64::NEG_INFINITY {
                            if !est.degenerate {
                                return Err(format!(
                                    "({n},{k},{t}) {label}: impossible event but not degenerate"
                                ));
                            }
                        } else {
                            if est.degenerate {
                                return Err(format!(
                                    "({n},{k},{t}) {label}: degenerate on a possible event"
                                ));
                            }
                            let diff = (est.log_p - exact.log_p).abs();
                            if diff > 5.0 * est.se_log + 1e-12 {
                                return Err(format!(
                                    "({n},{k},{t}) {label}: {} vs exact {} exceeds 5 se ({})",
                                    est.log_p, exact.log_p, est.se_log
                                ));
                            }
                        }
                    }
                }
            }
        }

        let pair_blocks: Vec<VertexSet> = subsets_as_masks(4, 2)
            .into_iter()
            .map(|m| {
                let indices: Vec<usize> = (0..4).filter(|v| m >> v & 1 == 1).collect();
                VertexSet::from_indices(4, &indices).map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        let pairs = Hypergraph::new(
            SetFamily::new(4, pair_blocks).map_err(|e| e.to_string())?,
            2,
        )
        .map_err(|e| e.to_string())?;
        let exact = xi_exact(&pairs, 2).map_err(|e| e.to_string())?;
        if (exact.log_p.exp() - 0.2).abs() > 1e-12 {
            return Err(format!(
                "two pairs from the size-4 clique: exact {} vs 0.2",
                exact.log_p.exp()
            ));
        }
        let mc = xi_mc(&pairs, 2, 100_000, 4001, false).map_err(|e| e.to_string())?;
        if (mc.log_p - exact.log_p).abs() > 5.0 * mc.se_log + 1e-12 {
            return Err("pair-instance Monte Carlo outside 5 se of exact".into());
        }

        let example = example_hypergraph(2, 3, 2).map_err(|e| e.to_string())?;
        for m in 1..=4usize {
            let exact = xi_exact(example.hypergraph(), m).map_err(|e| e.to_string())?;
            let mc = xi_mc(example.hypergraph(), m, 100_000, 4100 + m as u64, false)
                .map_err(|e| e.to_string())?;
            if exact.log_p == f64::NEG_INFINITY {
                if !mc.degenerate {
                    return Err(format!("block-design m={m}: expected degenerate"));
                }
            } else if (mc.log_p - exact.log_p).abs() > 5.0 * mc.se_log + 1e-12 {
                return Err(format!(
                    "block-design m={m}: {} vs exact {} exceeds 5 se ({})",
                    mc.log_p, exact.log_p, mc.se_log
                ));
            }
        }
        Ok(())
    };
    finish(3, "estimator-consistency", start, run());
}

#[test]
fn acceptance_04_interaction_census() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        let table = Table::from_preset("csprop-fuzz")?;
        let holds = table.idx("holds")?;
        let error = table.idx("error")?;
        if table.rows.len() < 1000 {
            return Err(format!(
                "only {} sampled instances, need at least 1000",
                table.rows.len()
            ));
        }
        for row in &table.rows {
            if !row[error].is_empty() {
                return Err(format!("sampled instance failed to build: {}", row[error]));
            }
            if row[holds] != "true" {
                return Err(format!("census inequality failed on row {row:?}"));
            }
        }

        for l in [2usize, 3, 4, 5, 7, 8, 9] {
            for s in 2..=(l + 1) {
                for copies in [1usize, 2] {
                    let h = example_hypergraph(l, s, copies).map_err(|e| e.to_string())?;
                    for delta in [0.1, 0.3, 0.7] {
                        let outcome = csprop_check(h.hypergraph(), delta)
                            .map_err(|e| e.to_string())?;
                        if !outcome.holds {
                            return Err(format!(
                                "census inequality failed on the (l={l}, s={s}, copies={copies}) design at delta={delta}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    };
    finish(4, "interaction-census", start, run());
}

#[test]
fn acceptance_05_matching_rate_floor() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        let table = Table::from_preset("affine-lowerbound")?;
        let floor = -(2.0f64.ln()) - 0.35;
        if table.rows.is_empty() {
            return Err("no rows".into());
        }
        for row in &table.rows {
            let n = table.f64(row, "n")?;
            let l = table.f64(row, "l")?;
            let m = table.f64(row, "m")?;
            if n / l < 30.0 {
                return Err(format!("instance too small: n/l = {}", n / l));
            }
            if m != (0.2 * n / l).floor() {
                return Err(format!("m = {m}, expected floor(0.2 n/l)"));
            }
            let rate = table.f64(row, "log_p_over_m")?;
            if rate < floor {
                return Err(format!("log rate per draw {rate} fell under {floor}"));
            }
        }
        Ok(())
    };
    finish(5, "matching-rate-floor", start, run());
}

#[test]
fn acceptance_06_survivor_floor() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        for (l, s, copies) in [(2, 2, 2), (2, 3, 2), (3, 2, 4), (3, 3, 3), (4, 2, 2)] {
            let example = example_hypergraph(l, s, copies).map_err(|e| e.to_string())?;
            let h = example.hypergraph();
            let floor_base = h.n() / l;
            for seed in 0..20u64 {
                let trace =
                    survivor_trace(h, floor_base, seed).map_err(|e| e.to_string())?;
                for step in &trace.steps {
                    let floor = floor_base as i64 - step.step as i64;
                    if (step.survivor_count as i64) < floor {
                        return Err(format!(
                            "(l={l}, s={s}, copies={copies}) seed {seed}: {} survivors at step {}, floor {floor}",
                            step.survivor_count, step.step
                        ));
                    }
                }
            }
        }
        Ok(())
    };
    finish(6, "survivor-floor", start, run());
}

#[test]
fn acceptance_07_packing_number_oracle() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        let k5 = RandomGraph::complete(5);
        let triangles = k5.enumerate_cliques(3, 1_000_000).map_err(|e| e.to_string())?;
        let nu = exact_nu_k(&triangles, 1_000_000).map_err(|e| e.to_string())?;
        if nu.size != 2 || !nu.exact {
            return Err(format!(
                "size-5 clique triangles: got {} (exact: {}), want 2",
                nu.size, nu.exact
            ));
        }

        let ceiling = cliquepack_core::formulas::trivial_packing_bound(8, 3)
            .map_err(|e| e.to_string())?;
        let mut checked = 0u64;
        let mut seed = 0u64;
        while checked < 50 {
            seed += 1;
            let g = RandomGraph::gnp_half(8, seed);
            let cliques = g.enumerate_cliques(3, 1_000_000).map_err(|e| e.to_string())?;
            if cliques.len() > 12 {
                continue;
            }
            let brute = brute_force_packing_number(&family_as_masks(&cliques));
            let nu = exact_nu_k(&cliques, 1_000_000).map_err(|e| e.to_string())?;
            let greedy = greedy_packing(&cliques, ScanOrder::MinDegree)
                .map_err(|e| e.to_string())?
                .len() as u64;
            if !nu.exact || nu.size != brute {
                return Err(format!(
                    "seed {seed}: search gave {} (exact: {}), brute force gave {brute}",
                    nu.size, nu.exact
                ));
            }
            if greedy > nu.size || nu.size > ceiling {
                return Err(format!(
                    "seed {seed}: ordering violated: greedy {greedy}, exact {}, ceiling {ceiling}",
                    nu.size
                ));
            }
            checked += 1;
        }
        Ok(())
    };
    finish(7, "packing-number-oracle", start, run());
}

#[test]
fn acceptance_08_conflict_statistics() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        let k5 = RandomGraph::complete(5);
        let triangles = k5.enumerate_cliques(3, 1_000_000).map_err(|e| e.to_string())?;
        let conflict = conflict_graph(&triangles).map_err(|e| e.to_string())?;
        if conflict.edge_count() != 30 {
            return Err(format!(
                "size-5 clique conflict graph has {} edges, want 30",
                conflict.edge_count()
            ));
        }

        let table = Table::from_preset("gamma-sweep-14")?;
        if table.rows.len() != 200 {
            return Err(format!("expected 200 samples, got {}", table.rows.len()));
        }
        let mut counts = Vec::with_capacity(200);
        let mut predicted = None;
        for row in &table.rows {
            counts.push(table.f64(row, "m_emp")?);
            predicted = Some(table.f64(row, "m_formula")?);
        }
        let predicted = predicted.unwrap();
        if (predicted - 15.640625).abs() > 1e-9 {
            return Err(format!("predicted clique count {predicted}, want 15.640625"));
        }
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<f64>() / n;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
        let se = (var / n).sqrt();
        if (mean - predicted).abs() > 5.0 * se {
            return Err(format!(
                "mean clique count {mean} vs predicted {predicted} exceeds 5 se ({se})"
            ));
        }
        Ok(())
    };
    finish(8, "conflict-statistics", start, run());
}

#[test]
fn acceptance_09_regime_diagnostic() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        let table = Table::from_preset("regime-diagnostic")?;
        let error = table.idx("error")?;
        let mut inside = 0usize;
        for row in &table.rows {
            if !row[error].is_empty() {
                return Err(format!("estimator row failed: {}", row[error]));
            }
            let ratio = table.f64(row, "ratio")?;
            if (0.4..=2.5).contains(&ratio) {
                inside += 1;
            }
        }
        let total = table.rows.len();
        if total == 0 {
            return Err("no rows".into());
        }
        if (inside as f64) < 0.8 * total as f64 {
            return Err(format!(
                "only {inside}/{total} exponent ratios landed in [0.4, 2.5]"
            ));
        }
        Ok(())
    };
    finish(9, "regime-diagnostic", start, run());
}

#[test]
fn acceptance_10_determinism() {
    let start = Instant::now();
    let run = || -> Result<(), String> {
        let binary = env!("CARGO_BIN_EXE_cliquepack");
        for name in preset_names() {
            let mut outputs = Vec::new();
            for threads in ["1", "1", "8"] {
                let out = std::process::Command::new(binary)
                    .args(["run", "--preset", name, "--threads", threads])
                    .output()
                    .map_err(|e| format!("spawning {name}: {e}"))?;
                if !out.status.success() {
                    return Err(format!(
                        "{name} with --threads {threads} exited {:?}: {}",
                        out.status.code(),
                        String::from_utf8_lossy(&out.stderr)
                    ));
                }
                let text = String::from_utf8(out.stdout)
                    .map_err(|_| format!("{name}: output not utf-8"))?;
                let data: Vec<String> = text
                    .lines()
                    .map(|line| match line.rsplit_once(',') {
                        Some((head, _wall_time)) => head.to_string(),
                        None => line.to_string(),
                    })
                    .collect();
                outputs.push(data);
            }
            if outputs[0] != outputs[1] {
                return Err(format!("{name}: two --threads 1 runs differ"));
            }
            if outputs[0] != outputs[2] {
                return Err(format!("{name}: --threads 1 and --threads 8 differ"));
            }
        }
        Ok(())
    };
    finish(10, "determinism", start, run());
}
