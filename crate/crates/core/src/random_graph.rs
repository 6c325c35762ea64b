//! Symmetric random graphs with fair independent edge coins, and bounded
//! enumeration of their k-cliques.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::family::SetFamily;
use crate::formulas::ENUMERATION_CAP;
use crate::rng::stream_rng;
use crate::Result;
use rand::Rng;

/// Undirected graph stored as one adjacency bitset per vertex.
#[derive(Debug, Clone)]
pub struct RandomGraph {
    n: usize,
    rows: Vec<VertexSet>,
    seed: u64,
}

impl RandomGraph {
    /// Samples G(n, 1/2): each unordered pair receives one independent fair
    /// coin, flipped in lexicographic pair order so the graph is a pure
    /// function of the seed.
    pub fn gnp_half(n: usize, seed: u64) -> Self {
        let mut rows = vec![VertexSet::empty(n); n];
        let mut rng = stream_rng(seed, 0);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<bool>() {
                    rows[u].insert(v).expect("v < n");
                    rows[v].insert(u).expect("u < n");
                }
            }
        }
        Self { n, rows, seed }
    }

    /// Builds a graph from an explicit edge list. Loops and out-of-range
    /// endpoints are rejected; duplicate edges are harmless.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![VertexSet::empty(n); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Domain(format!("loop edge at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::Domain(format!(
                    "edge ({u},{v}) leaves the vertex range 0..{n}"
                )));
            }
            rows[u].insert(v)?;
            rows[v].insert(u)?;
        }
        Ok(Self { n, rows, seed: 0 })
    }

    /// The complete graph on n vertices.
    pub fn complete(n: usize) -> Self {
        let mut rows = vec![VertexSet::empty(n); n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    rows[u].insert(v).expect("v < n");
                }
            }
        }
        Self { n, rows, seed: 0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn edge_count(&self) -> u64 {
        let total: u64 = self.rows.iter().map(|r| r.card() as u64).sum();
        total / 2
    }

    /// Enumerates every k-clique in ascending-vertex order, so the output
    /// family is lexicographically sorted. `node_budget` caps the number of
    /// search-tree nodes visited; exceeding it aborts with a capacity error
    /// rather than returning a partial listing.
    pub fn enumerate_cliques(&self, k: usize, node_budget: u64) -> Result<SetFamily> {
        if k == 0 || k > self.n {
            return Err(Error::Domain(format!(
                "clique size {k} is outside 1..={}",
                self.n
            )));
        }
        let mut family = SetFamily::empty(self.n);
        let mut current = Vec::with_capacity(k);
        let mut all = VertexSet::empty(self.n);
        for v in 0..self.n {
            all.insert(v).expect("v < n");
        }
        let mut nodes = 0u64;
        self.extend_clique(k, &all, &mut current, &mut family, node_budget, &mut nodes)?;
        Ok(family)
    }

    fn extend_clique(
        &self,
        k: usize,
        cand: &VertexSet,
        current: &mut Vec<usize>,
        family: &mut SetFamily,
        node_budget: u64,
        nodes: &mut u64,
    ) -> Result<()> {
        if current.len() == k {
            if family.len() as u64 >= ENUMERATION_CAP {
                return Err(Error::Capacity(format!(
                    "clique listing exceeded {ENUMERATION_CAP} entries"
                )));
            }
            family.push(VertexSet::from_indices(self.n, current)?)?;
            return Ok(());
        }
        let needed = k - current.len();
        if cand.card() < needed {
            return Ok(());
        }
        for v in cand.iter() {
            *nodes += 1;
            if *nodes > node_budget {
                return Err(Error::Capacity(format!(
                    "clique search exceeded its node budget of {node_budget}"
                )));
            }
            let mut next = cand.intersection(&self.rows[v]);
            next.retain_above(v);
            current.push(v);
            self.extend_clique(k, &next, current, family, node_budget, nodes)?;
            current.pop();
        }
        Ok(())
    }
}
