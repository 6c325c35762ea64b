//! Edge-disjoint clique packings: the conflict graph on a clique family,
//! greedy and exact maximum packing sizes, and the subsample, triangle
//! removal, independent set pipeline.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::family::{PairCover, SetFamily};
use crate::formulas;
use crate::params::Params;
use crate::random_graph::RandomGraph;
use crate::rng::{stream_rng, SubsetSampler};
use crate::Result;
use rand::Rng;

/// Graph on the blocks of a clique family, with an edge between two blocks
/// exactly when they share at least two vertices. Independent sets here are
/// exactly the edge-disjoint subfamilies.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    cliques: SetFamily,
    adj: Vec<VertexSet>,
    edge_count: u64,
}

/// Builds the conflict graph of a uniform family.
pub fn conflict_graph(cliques: &SetFamily) -> Result<ConflictGraph> {
    if !cliques.is_empty() && cliques.uniform().is_none() {
        return Err(Error::Precondition(
            "conflict graph requires a uniform family".into(),
        ));
    }
    let t = cliques.len();
    let mut adj = vec![VertexSet::empty(t.max(1)); t];
    let mut edge_count = 0u64;
    for i in 0..t {
        for j in (i + 1)..t {
            if cliques.block(i).intersection_size(cliques.block(j)) >= 2 {
                adj[i].insert(j).expect("j < t");
                adj[j].insert(i).expect("i < t");
                edge_count += 1;
            }
        }
    }
    Ok(ConflictGraph {
        cliques: cliques.clone(),
        adj,
        edge_count,
    })
}

impl ConflictGraph {
    pub fn cliques(&self) -> &SetFamily {
        &self.cliques
    }

    pub fn vertex_count(&self) -> usize {
        self.cliques.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].card()
    }

    pub fn neighbors(&self, i: usize) -> &VertexSet {
        &self.adj[i]
    }

    /// Number of triangles, each counted once.
    pub fn triangle_count(&self) -> u64 {
        let mut total = 0u64;
        for i in 0..self.adj.len() {
            for j in self.adj[i].iter() {
                if j <= i {
                    continue;
                }
                let mut common = self.adj[i].intersection(&self.adj[j]);
                common.retain_above(j);
                total += common.card() as u64;
            }
        }
        total
    }
}

/// Empirical conflict-graph statistics next to their closed-form
/// counterparts: the expected clique count and the derived ceilings on
/// conflict edges and triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaStats {
    pub m_emp: u64,
    pub e_emp: u64,
    pub t_emp: u64,
    pub m_formula: f64,
    pub e_bound: f64,
    pub t_bound: f64,
}

/// Enumerates the k-cliques of `g` and summarizes their conflict graph.
pub fn gamma_stats(g: &RandomGraph, k: usize, node_budget: u64) -> Result<GammaStats> {
    let cliques = g.enumerate_cliques(k, node_budget)?;
    let conflict = conflict_graph(&cliques)?;
    let n = g.n() as f64;
    let kf = k as f64;
    let m_formula = formulas::ln_f(g.n() as u64, k as u64)?.exp();
    Ok(GammaStats {
        m_emp: cliques.len() as u64,
        e_emp: conflict.edge_count(),
        t_emp: conflict.triangle_count(),
        m_formula,
        e_bound: kf.powi(4) * m_formula * m_formula / (n * n),
        t_bound: 2.0 * kf.powi(6) * m_formula.powi(3) / n.powi(4),
    })
}

/// Scan policy for the greedy packing pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanOrder {
    /// Blocks in their stored order.
    Given,
    /// A seeded uniform shuffle of the block indices.
    Random(u64),
    /// Ascending conflict degree, ties by index.
    MinDegree,
}

/// Scans the family in the requested order, accepting each block that
/// overlaps every previously accepted block in at most one vertex. The
/// result is a maximal packing listed in acceptance order.
pub fn greedy_packing(cliques: &SetFamily, order: ScanOrder) -> Result<SetFamily> {
    let t = cliques.len();
    let mut out = SetFamily::empty(cliques.ground());
    if t == 0 {
        return Ok(out);
    }
    if cliques.uniform().is_none() {
        return Err(Error::Precondition(
            "greedy packing requires a uniform family".into(),
        ));
    }
    let mut indices: Vec<usize> = (0..t).collect();
    match order {
        ScanOrder::Given => {}
        ScanOrder::Random(seed) => {
            let mut rng = stream_rng(seed, 0);
            for i in (1..t).rev() {
                indices.swap(i, rng.random_range(0..=i));
            }
        }
        ScanOrder::MinDegree => {
            let g = conflict_graph(cliques)?;
            indices.sort_by_key(|&i| (g.degree(i), i));
        }
    }
    let mut cover = PairCover::new(cliques.ground());
    for i in indices {
        let block = cliques.block(i);
        if cover.compatible(block) {
            cover.accept(block);
            out.push(block.clone())?;
        }
    }
    Ok(out)
}

/// Maximum packing size, with a flag recording whether the search ran to
/// completion or stopped at its node budget with a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NuKOutcome {
    pub size: u64,
    pub exact: bool,
}

/// Branch-and-bound maximum independent set on the conflict graph. The
/// greedy packing seeds the incumbent; branching removes the lowest open
/// vertex either into or out of the solution, pruning when even taking
/// every open vertex cannot beat the incumbent.
pub fn exact_nu_k(cliques: &SetFamily, node_budget: u64) -> Result<NuKOutcome> {
    let t = cliques.len();
    if t == 0 {
        return Ok(NuKOutcome {
            size: 0,
            exact: true,
        });
    }
    let g = conflict_graph(cliques)?;
    let mut best = greedy_packing(cliques, ScanOrder::MinDegree)?.len();
    let mut open = VertexSet::empty(t);
    for i in 0..t {
        open.insert(i).expect("i < t");
    }
    let mut nodes = 0u64;
    let exact = branch_nu(&g, &open, 0, &mut best, node_budget, &mut nodes);
    Ok(NuKOutcome {
        size: best as u64,
        exact,
    })
}

fn branch_nu(
    g: &ConflictGraph,
    open: &VertexSet,
    chosen: usize,
    best: &mut usize,
    node_budget: u64,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if *nodes > node_budget {
        return false;
    }
    if chosen + open.card() <= *best {
        return true;
    }
    let Some(v) = open.iter().next() else {
        *best = (*best).max(chosen);
        return true;
    };
    let mut with_v = open.clone();
    with_v.remove(v);
    with_v.subtract(g.neighbors(v));
    let took = branch_nu(g, &with_v, chosen + 1, best, node_budget, nodes);
    let mut without_v = open.clone();
    without_v.remove(v);
    let skipped = branch_nu(g, &without_v, chosen, best, node_budget, nodes);
    took && skipped
}

/// Report from one run of the subsample pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AksReport {
    pub clique_count: u64,
    pub w_size: u64,
    pub conflict_edges_in_w: u64,
    pub triangles_removed: u64,
    pub packing_size: u64,
    pub delta_frac: f64,
}

/// Subsample pipeline: enumerate the k-cliques, keep a uniform random
/// fraction `delta_frac` of them (default n^2/(2 k^3 M), clipped to (0,1]),
/// delete the busiest vertex of a surviving conflict triangle until the
/// induced conflict graph is triangle free, then take a minimum-degree
/// greedy independent set. The returned family is always a packing.
pub fn aks_pipeline(
    g: &RandomGraph,
    k: usize,
    delta_frac: Option<f64>,
    seed: u64,
    node_budget: u64,
) -> Result<(SetFamily, AksReport)> {
    if let Some(d) = delta_frac {
        if d <= 0.0 || d > 1.0 {
            return Err(Error::Domain(format!(
                "delta_frac must lie in (0, 1], got {d}"
            )));
        }
    }
    let cliques = g.enumerate_cliques(k, node_budget)?;
    let m = cliques.len();
    if m == 0 {
        let report = AksReport {
            clique_count: 0,
            w_size: 0,
            conflict_edges_in_w: 0,
            triangles_removed: 0,
            packing_size: 0,
            delta_frac: delta_frac.unwrap_or(1.0),
        };
        return Ok((SetFamily::empty(g.n()), report));
    }
    let n = g.n() as f64;
    let delta = delta_frac
        .unwrap_or_else(|| (n * n / (2.0 * (k as f64).powi(3) * m as f64)).min(1.0))
        .clamp(f64::MIN_POSITIVE, 1.0);
    let w_size = ((delta * m as f64).ceil() as usize).clamp(1, m);

    let mut rng = stream_rng(seed, 0);
    let mut sampler = SubsetSampler::new(m);
    let mut w_idx = Vec::with_capacity(w_size);
    sampler.draw(&mut rng, w_size, &mut w_idx);
    w_idx.sort_unstable();
    let subfamily = cliques.subfamily(&w_idx)?;
    let conflict = conflict_graph(&subfamily)?;

    let mut alive = VertexSet::empty(w_size.max(1));
    for i in 0..w_size {
        alive.insert(i).expect("i < w_size");
    }
    let mut triangles_removed = 0u64;
    while let Some((a, b, c)) = first_alive_triangle(&conflict, &alive) {
        let victim = [a, b, c]
            .into_iter()
            .max_by_key(|&v| (conflict.neighbors(v).intersection(&alive).card(), usize::MAX - v))
            .expect("three candidates");
        alive.remove(victim);
        triangles_removed += 1;
    }
    debug_assert!(
        first_alive_triangle(&conflict, &alive).is_none(),
        "triangle removal left a conflict triangle behind"
    );

    let mut packing = SetFamily::empty(g.n());
    let mut remaining = alive.clone();
    while !remaining.is_empty() {
        let v = remaining
            .iter()
            .min_by_key(|&v| (conflict.neighbors(v).intersection(&remaining).card(), v))
            .expect("remaining non-empty");
        packing.push(subfamily.block(v).clone())?;
        remaining.remove(v);
        remaining.subtract(conflict.neighbors(v));
    }
    debug_assert!(packing.is_packing());

    let report = AksReport {
        clique_count: m as u64,
        w_size: w_size as u64,
        conflict_edges_in_w: conflict.edge_count(),
        triangles_removed,
        packing_size: packing.len() as u64,
        delta_frac: delta,
    };
    Ok((packing, report))
}

fn first_alive_triangle(g: &ConflictGraph, alive: &VertexSet) -> Option<(usize, usize, usize)> {
    for i in alive.iter() {
        let open_i = g.neighbors(i).intersection(alive);
        for j in open_i.iter() {
            if j <= i {
                continue;
            }
            let mut common = open_i.intersection(g.neighbors(j));
            common.retain_above(j);
            if let Some(k) = common.iter().next() {
                return Some((i, j, k));
            }
        }
    }
    None
}

/// Ceiling on any packing size from edge counting, as a convenience
/// re-export next to the search routines.
pub fn packing_ceiling(p: &Params) -> Result<u64> {
    formulas::trivial_packing_bound(p.n(), p.k())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5_triangles() -> SetFamily {
        RandomGraph::complete(5)
            .enumerate_cliques(3, 1_000_000)
            .unwrap()
    }

    #[test]
    fn complete_graph_conflict_counts_match_hand_enumeration() {
        let g = conflict_graph(&k5_triangles()).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 30);
        let mut brute_triangles = 0u64;
        for i in 0..10 {
            for j in (i + 1)..10 {
                for k in (j + 1)..10 {
                    if g.neighbors(i).contains(j)
                        && g.neighbors(i).contains(k)
                        && g.neighbors(j).contains(k)
                    {
                        brute_triangles += 1;
                    }
                }
            }
        }
        assert_eq!(g.triangle_count(), brute_triangles);
    }

    #[test]
    fn packings_and_duplicates_sit_at_the_conflict_extremes() {
        let disjoint =
            SetFamily::from_index_blocks(9, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]])
                .unwrap();
        assert_eq!(conflict_graph(&disjoint).unwrap().edge_count(), 0);

        let twins =
            SetFamily::from_index_blocks(5, &[vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        let g = conflict_graph(&twins).unwrap();
        assert_eq!(g.edge_count(), 1);

        let mixed =
            SetFamily::from_index_blocks(6, &[vec![0, 1, 2], vec![0, 1]]).unwrap();
        assert!(conflict_graph(&mixed).is_err());
    }

    #[test]
    fn greedy_respects_order_policies_and_stays_maximal() {
        let fam = k5_triangles();
        for order in [ScanOrder::Given, ScanOrder::Random(5), ScanOrder::MinDegree] {
            let picked = greedy_packing(&fam, order).unwrap();
            assert!(picked.is_packing());
            assert!(!picked.is_empty());
            let cover = {
                let mut c = PairCover::new(5);
                for b in picked.blocks() {
                    c.accept(b);
                }
                c
            };
            for b in fam.blocks() {
                assert!(
                    picked.blocks().contains(b) || !cover.compatible(b),
                    "a rejected block could still be added"
                );
            }
        }

        let already =
            SetFamily::from_index_blocks(9, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6]])
                .unwrap();
        assert_eq!(
            greedy_packing(&already, ScanOrder::Given).unwrap().len(),
            3
        );
        assert_eq!(
            greedy_packing(&SetFamily::empty(4), ScanOrder::MinDegree)
                .unwrap()
                .len(),
            0
        );
    }

    #[test]
    fn greedy_random_orders_are_seed_deterministic() {
        let fam = RandomGraph::gnp_half(10, 4)
            .enumerate_cliques(3, 1_000_000)
            .unwrap();
        let a = greedy_packing(&fam, ScanOrder::Random(11)).unwrap();
        let b = greedy_packing(&fam, ScanOrder::Random(11)).unwrap();
        assert_eq!(a.blocks(), b.blocks());
    }

    #[test]
    fn exact_search_matches_brute_force_on_k5() {
        let fam = k5_triangles();
        let out = exact_nu_k(&fam, 1_000_000).unwrap();
        assert!(out.exact);
        assert_eq!(out.size, 2);

        let mut brute_best = 0u64;
        for mask in 0u32..(1 << fam.len()) {
            let idx: Vec<usize> = (0..fam.len()).filter(|i| mask >> i & 1 == 1).collect();
            if idx.len() as u64 > brute_best && fam.subfamily(&idx).unwrap().is_packing() {
                brute_best = idx.len() as u64;
            }
        }
        assert_eq!(out.size, brute_best);
    }

    #[test]
    fn exact_search_brackets_greedy_and_the_pair_counting_ceiling() {
        for seed in 0..6u64 {
            let g = RandomGraph::gnp_half(9, seed);
            let fam = g.enumerate_cliques(3, 1_000_000).unwrap();
            if fam.is_empty() {
                continue;
            }
            let exact = exact_nu_k(&fam, 10_000_000).unwrap();
            assert!(exact.exact);
            for order in [ScanOrder::Given, ScanOrder::Random(seed), ScanOrder::MinDegree] {
                let greedy = greedy_packing(&fam, order).unwrap();
                assert!(greedy.len() as u64 <= exact.size);
            }
            let ceiling = packing_ceiling(&Params::new(9, 3, 1).unwrap()).unwrap();
            assert!(exact.size <= ceiling);
        }
    }

    #[test]
    fn packing_input_is_returned_whole_by_exact_search() {
        let fam =
            SetFamily::from_index_blocks(9, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]])
                .unwrap();
        assert!(fam.is_packing());
        let out = exact_nu_k(&fam, 1_000).unwrap();
        assert_eq!(out.size, 3);
        assert!(out.exact);
    }

    #[test]
    fn budget_exhaustion_downgrades_to_a_lower_bound() {
        let fam = RandomGraph::complete(9)
            .enumerate_cliques(3, 10_000_000)
            .unwrap();
        let out = exact_nu_k(&fam, 5).unwrap();
        assert!(!out.exact);
        let full = exact_nu_k(&fam, 100_000_000).unwrap();
        assert!(full.exact);
        assert!(out.size <= full.size);
    }

    #[test]
    fn gamma_stats_match_their_own_conflict_graph() {
        let g = RandomGraph::complete(5);
        let stats = gamma_stats(&g, 3, 1_000_000).unwrap();
        assert_eq!(stats.m_emp, 10);
        assert_eq!(stats.e_emp, 30);
        let f = formulas::ln_f(5, 3).unwrap().exp();
        assert!((stats.m_formula - f).abs() < 1e-9);
        assert!((stats.e_bound - 81.0 * f * f / 25.0).abs() < 1e-9);
        assert!(stats.t_bound > 0.0);

        let sparse = RandomGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let stats = gamma_stats(&sparse, 3, 1_000).unwrap();
        assert_eq!((stats.m_emp, stats.e_emp, stats.t_emp), (1, 0, 0));
    }

    #[test]
    fn pipeline_output_is_a_packing_with_a_coherent_report() {
        for seed in 0..8u64 {
            let g = RandomGraph::gnp_half(14, seed);
            let (packing, report) = aks_pipeline(&g, 3, None, seed, 10_000_000).unwrap();
            assert!(packing.is_packing());
            assert_eq!(report.packing_size, packing.len() as u64);
            assert!(report.w_size <= report.clique_count);
            if report.clique_count >= 1 {
                assert!(report.packing_size >= 1);
            }
            assert!(report.delta_frac > 0.0 && report.delta_frac <= 1.0);
            assert!(report.triangles_removed <= report.w_size);
        }
    }

    #[test]
    fn pipeline_respects_explicit_subsample_fractions() {
        let g = RandomGraph::gnp_half(12, 2);
        let m = g.enumerate_cliques(3, 1_000_000).unwrap().len() as u64;
        let (_, report) = aks_pipeline(&g, 3, Some(1.0), 0, 10_000_000).unwrap();
        assert_eq!(report.w_size, m);
        let (_, half) = aks_pipeline(&g, 3, Some(0.5), 0, 10_000_000).unwrap();
        assert_eq!(half.w_size, (m as f64 * 0.5).ceil() as u64);
        assert!(aks_pipeline(&g, 3, Some(0.0), 0, 1_000).is_err());
        assert!(aks_pipeline(&g, 3, Some(1.5), 0, 1_000).is_err());
    }

    #[test]
    fn pipeline_is_deterministic_and_empty_on_cliqueless_graphs() {
        let g = RandomGraph::gnp_half(13, 9);
        let (p1, r1) = aks_pipeline(&g, 3, Some(0.7), 4, 10_000_000).unwrap();
        let (p2, r2) = aks_pipeline(&g, 3, Some(0.7), 4, 10_000_000).unwrap();
        assert_eq!(p1.blocks(), p2.blocks());
        assert_eq!(r1, r2);

        let empty = RandomGraph::from_edges(8, &[]).unwrap();
        let (packing, report) = aks_pipeline(&empty, 3, None, 0, 1_000).unwrap();
        assert!(packing.is_empty());
        assert_eq!(report.clique_count, 0);
        assert_eq!(report.packing_size, 0);
    }
}
