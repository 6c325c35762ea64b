//! Ordered families of vertex subsets, the uniform hypergraph wrapper, and
//! the packing and matching predicates.
//!
//! A family is a *packing* (equivalently, nearly disjoint) when every two
//! member blocks share at most one vertex, and a *matching* when every two
//! member blocks are disjoint. Blocks are kept as an ordered sequence, so a
//! family may contain the same block twice; for blocks of size at least two
//! a repeated block already violates the packing predicate.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::formulas;
use crate::Result;

/// Ordered family of subsets of a common ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground: usize,
    blocks: Vec<VertexSet>,
    uniform: Option<usize>,
}

impl SetFamily {
    /// Family with no blocks over `{0, .., ground-1}`.
    pub fn empty(ground: usize) -> Self {
        SetFamily {
            ground,
            blocks: Vec::new(),
            uniform: None,
        }
    }

    /// Builds a family from blocks that must all live on the same ground set.
    pub fn new(ground: usize, blocks: Vec<VertexSet>) -> Result<Self> {
        let mut fam = SetFamily::empty(ground);
        for b in blocks {
            fam.push(b)?;
        }
        Ok(fam)
    }

    /// Convenience constructor from index lists.
    pub fn from_index_blocks(ground: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let sets = blocks
            .iter()
            .map(|b| VertexSet::from_indices(ground, b))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(ground, sets)
    }

    /// Appends a block, rejecting a mismatched ground set.
    pub fn push(&mut self, block: VertexSet) -> Result<()> {
        if block.ground() != self.ground {
            return Err(Error::Domain(format!(
                "block ground {} does not match family ground {}",
                block.ground(),
                self.ground
            )));
        }
        self.uniform = match (self.blocks.len(), self.uniform) {
            (0, _) => Some(block.card()),
            (_, Some(c)) if c == block.card() => Some(c),
            _ => None,
        };
        self.blocks.push(block);
        Ok(())
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &VertexSet {
        &self.blocks[i]
    }

    /// Common block cardinality, when all blocks share one.
    pub fn uniform(&self) -> Option<usize> {
        self.uniform
    }

    /// True when every two blocks share at most one vertex.
    pub fn is_packing(&self) -> bool {
        for i in 0..self.blocks.len() {
            for j in i + 1..self.blocks.len() {
                if self.blocks[i].intersection_size(&self.blocks[j]) > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// True when every two blocks are disjoint.
    pub fn is_matching(&self) -> bool {
        for i in 0..self.blocks.len() {
            for j in i + 1..self.blocks.len() {
                if !self.blocks[i].is_disjoint(&self.blocks[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// New family holding the blocks at `indices`, in the given order.
    pub fn subfamily(&self, indices: &[usize]) -> Result<SetFamily> {
        let mut fam = SetFamily::empty(self.ground);
        for &i in indices {
            let block = self
                .blocks
                .get(i)
                .ok_or_else(|| Error::Domain(format!("block index {i} out of range")))?;
            fam.push(block.clone())?;
        }
        Ok(fam)
    }

    /// Sorts the blocks lexicographically by their element lists.
    pub fn sort_canonical(&mut self) {
        self.blocks.sort();
    }

    /// Canonical text form: a header line `n t l` followed by one line per
    /// block listing its vertices in ascending order. `l` is the uniform
    /// block size, or 0 for a non-uniform or empty family.
    pub fn to_canonical_text(&self) -> String {
        let l = self.uniform.unwrap_or(0);
        let mut out = format!("{} {} {}\n", self.ground, self.blocks.len(), l);
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the canonical text form produced by [`to_canonical_text`].
    ///
    /// [`to_canonical_text`]: SetFamily::to_canonical_text
    pub fn from_canonical_text(text: &str) -> Result<SetFamily> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "header must be `n t l`, got {header:?}"
            )));
        }
        let parse = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid {what} {s:?} in header")))
        };
        let n = parse(fields[0], "ground size")?;
        let t = parse(fields[1], "block count")?;
        let l = parse(fields[2], "block size")?;
        let mut fam = SetFamily::empty(n);
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut block = VertexSet::empty(n);
            for tok in line.split_whitespace() {
                let v = tok
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid vertex {tok:?}")))?;
                if !block.insert(v)? {
                    return Err(Error::Parse(format!("duplicate vertex {v} in block")));
                }
            }
            if block.is_empty() {
                return Err(Error::Parse("empty block line".into()));
            }
            if l > 0 && block.card() != l {
                return Err(Error::Parse(format!(
                    "block of size {} in a {l}-uniform encoding",
                    block.card()
                )));
            }
            fam.push(block)?;
        }
        if fam.len() != t {
            return Err(Error::Parse(format!(
                "header promises {t} blocks, found {}",
                fam.len()
            )));
        }
        Ok(fam)
    }
}

/// Uniform hypergraph: a set family with a fixed edge size and cached vertex
/// degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    family: SetFamily,
    edge_size: usize,
    degrees: Vec<usize>,
}

impl Hypergraph {
    /// Wraps a family whose blocks all have `edge_size` vertices. An empty
    /// family is accepted for any positive edge size.
    pub fn new(family: SetFamily, edge_size: usize) -> Result<Self> {
        if edge_size == 0 {
            return Err(Error::Domain("edge size must be positive".into()));
        }
        if !family.is_empty() && family.uniform() != Some(edge_size) {
            return Err(Error::Domain(format!(
                "family is not {edge_size}-uniform"
            )));
        }
        let mut degrees = vec![0usize; family.ground()];
        for b in family.blocks() {
            for v in b.iter() {
                degrees[v] += 1;
            }
        }
        debug_assert_eq!(
            degrees.iter().sum::<usize>(),
            family.len() * edge_size,
            "degree sum must equal t * l"
        );
        Ok(Hypergraph {
            family,
            edge_size,
            degrees,
        })
    }

    /// Number of vertices of the ambient ground set.
    pub fn n(&self) -> usize {
        self.family.ground()
    }

    pub fn edge_count(&self) -> usize {
        self.family.len()
    }

    pub fn edge_size(&self) -> usize {
        self.edge_size
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn into_family(self) -> SetFamily {
        self.family
    }

    pub fn block(&self, i: usize) -> &VertexSet {
        self.family.block(i)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    /// Number of edges meeting `e`, including `e` itself when it is a member.
    pub fn interaction_count(&self, e: &VertexSet) -> usize {
        self.family
            .blocks()
            .iter()
            .filter(|b| !b.is_disjoint(e))
            .count()
    }

    /// Number of edges disjoint from every block of `chosen`.
    pub fn survivor_count(&self, chosen: &SetFamily) -> usize {
        let mut hit = VertexSet::empty(self.n());
        for b in chosen.blocks() {
            hit.union_with(b);
        }
        self.family
            .blocks()
            .iter()
            .filter(|b| b.is_disjoint(&hit))
            .count()
    }

    /// Canonical text form of the underlying family.
    pub fn to_canonical_text(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.n(),
            self.edge_count(),
            self.edge_size
        );
        for b in self.family.blocks() {
            let line: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses a canonical text encoding with a positive uniform size header.
    pub fn from_canonical_text(text: &str) -> Result<Hypergraph> {
        let fam = SetFamily::from_canonical_text(text)?;
        let header_l = text
            .lines()
            .next()
            .and_then(|h| h.split_whitespace().nth(2))
            .and_then(|s| s.parse::<usize>().ok())
            .unwrap_or(0);
        if header_l == 0 {
            return Err(Error::Parse(
                "hypergraph encoding requires a positive uniform size".into(),
            ));
        }
        Hypergraph::new(fam, header_l)
    }
}

/// Tracks which vertex pairs are covered by accepted blocks, giving O(k)
/// checks for whether a candidate keeps the family a packing.
///
/// A candidate violates the packing constraint exactly when it contains a
/// pair of vertices already covered by one accepted block.
#[derive(Debug, Clone)]
pub struct PairCover {
    rows: Vec<VertexSet>,
}

impl PairCover {
    pub fn new(ground: usize) -> Self {
        PairCover {
            rows: (0..ground).map(|_| VertexSet::empty(ground)).collect(),
        }
    }

    /// True when `block` shares at most one vertex with every accepted block.
    pub fn compatible(&self, block: &VertexSet) -> bool {
        block
            .iter()
            .all(|x| self.rows[x].intersection_size(block) == 0)
    }

    /// Marks every pair inside `block` as covered.
    pub fn accept(&mut self, block: &VertexSet) {
        for x in block.iter() {
            self.rows[x].union_with(block);
            self.rows[x].remove(x);
        }
    }

    pub fn clear(&mut self) {
        for row in &mut self.rows {
            row.clear();
        }
    }
}

/// The family of all k-subsets of `{0, .., n-1}` in lexicographic order.
///
/// Guarded by the crate enumeration cap; see [`formulas::ENUMERATION_CAP`].
pub fn complete_kfamily(n: usize, k: usize) -> Result<SetFamily> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!(
            "complete family needs 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let count = formulas::binom_exact(n as u64, k as u64)
        .filter(|&c| c <= formulas::ENUMERATION_CAP)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "C({n},{k}) exceeds the enumeration cap of {}",
                formulas::ENUMERATION_CAP
            ))
        })?;
    let mut fam = SetFamily::empty(n);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        fam.push(VertexSet::from_indices(n, &idx)?)?;
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                debug_assert_eq!(fam.len() as u64, count);
                return Ok(fam);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(ground: usize, blocks: &[&[usize]]) -> SetFamily {
        let owned: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        SetFamily::from_index_blocks(ground, &owned).unwrap()
    }

    #[test]
    fn packing_and_matching_predicates() {
        let packing = fam(7, &[&[0, 1, 2], &[0, 3, 4], &[1, 3, 5]]);
        assert!(packing.is_packing());
        assert!(!packing.is_matching());

        let matching = fam(6, &[&[0, 1], &[2, 3], &[4, 5]]);
        assert!(matching.is_matching());
        assert!(matching.is_packing());

        let overlap = fam(6, &[&[0, 1, 2], &[1, 2, 3]]);
        assert!(!overlap.is_packing());
    }

    #[test]
    fn repeated_block_violates_packing_for_size_two_and_up() {
        let twice = fam(5, &[&[0, 1], &[0, 1]]);
        assert!(!twice.is_packing());
        let singletons = fam(5, &[&[2], &[2]]);
        assert!(singletons.is_packing());
        assert!(!singletons.is_matching());
    }

    #[test]
    fn uniformity_is_tracked_across_pushes() {
        let mut f = SetFamily::empty(6);
        assert_eq!(f.uniform(), None);
        f.push(VertexSet::from_indices(6, &[0, 1]).unwrap()).unwrap();
        assert_eq!(f.uniform(), Some(2));
        f.push(VertexSet::from_indices(6, &[2, 3]).unwrap()).unwrap();
        assert_eq!(f.uniform(), Some(2));
        f.push(VertexSet::from_indices(6, &[4]).unwrap()).unwrap();
        assert_eq!(f.uniform(), None);
    }

    #[test]
    fn mismatched_ground_is_rejected() {
        let mut f = SetFamily::empty(6);
        let err = f.push(VertexSet::from_indices(7, &[0]).unwrap());
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn canonical_text_round_trips() {
        let f = fam(9, &[&[0, 4, 8], &[1, 2, 3], &[0, 5, 6]]);
        let text = f.to_canonical_text();
        assert!(text.starts_with("9 3 3\n"));
        let back = SetFamily::from_canonical_text(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn canonical_text_rejects_malformed_input() {
        assert!(SetFamily::from_canonical_text("").is_err());
        assert!(SetFamily::from_canonical_text("4 1\n0 1\n").is_err());
        assert!(SetFamily::from_canonical_text("4 1 2\n0 9\n").is_err());
        assert!(SetFamily::from_canonical_text("4 1 2\n0 0\n").is_err());
        assert!(SetFamily::from_canonical_text("4 1 2\n0 1 2\n").is_err());
        assert!(SetFamily::from_canonical_text("4 2 2\n0 1\n").is_err());
    }

    #[test]
    fn hypergraph_checks_uniformity_and_degrees() {
        let f = fam(6, &[&[0, 1], &[2, 3], &[0, 2]]);
        let h = Hypergraph::new(f, 2).unwrap();
        assert_eq!(h.degrees(), &[2, 1, 2, 1, 0, 0]);
        assert_eq!(h.degrees().iter().sum::<usize>(), 3 * 2);

        let mixed = fam(6, &[&[0, 1], &[2, 3, 4]]);
        assert!(Hypergraph::new(mixed, 2).is_err());
    }

    #[test]
    fn interaction_count_includes_the_edge_itself() {
        let f = fam(6, &[&[0, 1], &[2, 3], &[1, 2]]);
        let h = Hypergraph::new(f, 2).unwrap();
        let e = VertexSet::from_indices(6, &[0, 1]).unwrap();
        assert_eq!(h.interaction_count(&e), 2);
        let far = VertexSet::from_indices(6, &[4, 5]).unwrap();
        assert_eq!(h.interaction_count(&far), 0);
    }

    #[test]
    fn survivor_count_uses_union_of_chosen_blocks() {
        let f = fam(8, &[&[0, 1], &[2, 3], &[4, 5], &[6, 7], &[1, 2]]);
        let h = Hypergraph::new(f, 2).unwrap();
        let chosen = fam(8, &[&[0, 1]]);
        assert_eq!(h.survivor_count(&chosen), 3);
        assert_eq!(h.survivor_count(&SetFamily::empty(8)), 5);
    }

    #[test]
    fn pair_cover_matches_the_pairwise_definition() {
        let mut cover = PairCover::new(8);
        let a = VertexSet::from_indices(8, &[0, 1, 2]).unwrap();
        cover.accept(&a);
        let shares_pair = VertexSet::from_indices(8, &[1, 2, 5]).unwrap();
        let shares_one = VertexSet::from_indices(8, &[2, 5, 6]).unwrap();
        assert!(!cover.compatible(&shares_pair));
        assert!(cover.compatible(&shares_one));
        cover.accept(&shares_one);
        let crosses_both = VertexSet::from_indices(8, &[5, 6, 7]).unwrap();
        assert!(!cover.compatible(&crosses_both));
        cover.clear();
        assert!(cover.compatible(&shares_pair));
    }

    #[test]
    fn complete_kfamily_enumerates_in_lexicographic_order() {
        let f = complete_kfamily(4, 2).unwrap();
        let lists: Vec<Vec<usize>> = f.blocks().iter().map(|b| b.to_vec()).collect();
        assert_eq!(
            lists,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(complete_kfamily(10, 3).unwrap().len(), 120);
        assert!(complete_kfamily(3, 4).is_err());
    }
}
