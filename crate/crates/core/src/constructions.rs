//! Deterministic and randomized hypergraph generators: affine planes over
//! small finite fields, the disjoint-union parallel-class instance built from
//! them, perfect matchings, and a greedy random nearly-disjoint generator.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::family::{Hypergraph, PairCover, SetFamily};
use crate::rng::{stream_rng, SubsetSampler};
use crate::Result;

/// Plane orders with field arithmetic available here.
pub const SUPPORTED_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Addition and multiplication tables for the non-prime orders. Element 0 is
/// the additive and 1 the multiplicative identity; the remaining labels are
/// an arbitrary fixed enumeration of the field.
const ADD4: [[u8; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
const MUL4: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

const ADD8: [[u8; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 2, 1, 0, 7, 6, 5, 4],
    [4, 5, 6, 7, 0, 1, 2, 3],
    [5, 4, 7, 6, 1, 0, 3, 2],
    [6, 7, 4, 5, 2, 3, 0, 1],
    [7, 6, 5, 4, 3, 2, 1, 0],
];
const MUL8: [[u8; 8]; 8] = [
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 2, 3, 4, 5, 6, 7],
    [0, 2, 4, 6, 3, 1, 7, 5],
    [0, 3, 6, 5, 7, 4, 1, 2],
    [0, 4, 3, 7, 6, 2, 5, 1],
    [0, 5, 1, 4, 2, 7, 3, 6],
    [0, 6, 7, 1, 5, 3, 2, 4],
    [0, 7, 5, 2, 1, 6, 4, 3],
];

const ADD9: [[u8; 9]; 9] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8],
    [1, 2, 0, 4, 5, 3, 7, 8, 6],
    [2, 0, 1, 5, 3, 4, 8, 6, 7],
    [3, 4, 5, 6, 7, 8, 0, 1, 2],
    [4, 5, 3, 7, 8, 6, 1, 2, 0],
    [5, 3, 4, 8, 6, 7, 2, 0, 1],
    [6, 7, 8, 0, 1, 2, 3, 4, 5],
    [7, 8, 6, 1, 2, 0, 4, 5, 3],
    [8, 6, 7, 2, 0, 1, 5, 3, 4],
];
const MUL9: [[u8; 9]; 9] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 2, 3, 4, 5, 6, 7, 8],
    [0, 2, 1, 6, 8, 7, 3, 5, 4],
    [0, 3, 6, 2, 5, 8, 1, 4, 7],
    [0, 4, 8, 5, 6, 1, 7, 2, 3],
    [0, 5, 7, 8, 1, 3, 4, 6, 2],
    [0, 6, 3, 1, 7, 4, 2, 8, 5],
    [0, 7, 5, 4, 2, 6, 8, 3, 1],
    [0, 8, 4, 7, 3, 2, 5, 1, 6],
];

fn field_add(order: usize, a: usize, b: usize) -> usize {
    match order {
        2 | 3 | 5 | 7 => (a + b) % order,
        4 => ADD4[a][b] as usize,
        8 => ADD8[a][b] as usize,
        9 => ADD9[a][b] as usize,
        _ => unreachable!("order validated at construction"),
    }
}

fn field_mul(order: usize, a: usize, b: usize) -> usize {
    match order {
        2 | 3 | 5 | 7 => (a * b) % order,
        4 => MUL4[a][b] as usize,
        8 => MUL8[a][b] as usize,
        9 => MUL9[a][b] as usize,
        _ => unreachable!("order validated at construction"),
    }
}

/// The affine plane AG(2, l): l^2 points, l^2 + l lines of l points each,
/// grouped into l + 1 parallel classes of l pairwise disjoint lines.
///
/// Point (x, y) gets label x*l + y. The first l classes collect the lines
/// y = a*x + b by slope a; the last class holds the vertical lines x = b.
#[derive(Debug, Clone)]
pub struct AffinePlane {
    order: usize,
    classes: Vec<Vec<VertexSet>>,
}

impl AffinePlane {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn point_count(&self) -> usize {
        self.order * self.order
    }

    /// Parallel classes, each a list of `order` disjoint lines.
    pub fn classes(&self) -> &[Vec<VertexSet>] {
        &self.classes
    }

    /// All lines, class by class.
    pub fn lines(&self) -> impl Iterator<Item = &VertexSet> {
        self.classes.iter().flatten()
    }

    pub fn line_count(&self) -> usize {
        self.order * (self.order + 1)
    }
}

/// Builds AG(2, l) for a supported prime power l.
pub fn affine_plane(l: usize) -> Result<AffinePlane> {
    if !SUPPORTED_ORDERS.contains(&l) {
        return Err(Error::UnsupportedOrder(l));
    }
    let points = l * l;
    let mut classes = Vec::with_capacity(l + 1);
    for a in 0..l {
        let mut class = Vec::with_capacity(l);
        for b in 0..l {
            let mut line = VertexSet::empty(points);
            for x in 0..l {
                let y = field_add(l, field_mul(l, a, x), b);
                line.insert(x * l + y)?;
            }
            class.push(line);
        }
        classes.push(class);
    }
    let mut vertical = Vec::with_capacity(l);
    for b in 0..l {
        let mut line = VertexSet::empty(points);
        for y in 0..l {
            line.insert(b * l + y)?;
        }
        vertical.push(line);
    }
    classes.push(vertical);
    Ok(AffinePlane { order: l, classes })
}

/// Disjoint union of `copies` relabeled instances of the first `s` parallel
/// classes of AG(2, l): a nearly-disjoint l-graph on n = copies * l^2
/// vertices with t = s * n / l edges, every vertex of degree exactly s.
#[derive(Debug, Clone)]
pub struct ExampleHypergraph {
    l: usize,
    s: usize,
    copies: usize,
    hypergraph: Hypergraph,
}

impl ExampleHypergraph {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn n(&self) -> usize {
        self.copies * self.l * self.l
    }

    pub fn t(&self) -> usize {
        self.hypergraph.edge_count()
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.hypergraph
    }
}

/// Builds the parallel-class union instance. Copy c occupies the vertex
/// window [c*l^2, (c+1)*l^2); blocks are pushed copy-major, then class, then
/// line, so the layout is auditable in the text encoding.
pub fn example_hypergraph(l: usize, s: usize, copies: usize) -> Result<ExampleHypergraph> {
    let plane = affine_plane(l)?;
    if s < 1 || s > l + 1 {
        return Err(Error::Domain(format!(
            "class count must satisfy 1 <= s <= l+1, got s={s}, l={l}"
        )));
    }
    if copies < 1 {
        return Err(Error::Domain("copies must be at least 1".into()));
    }
    let n = copies * l * l;
    let mut family = SetFamily::empty(n);
    for c in 0..copies {
        let offset = c * l * l;
        for class in plane.classes().iter().take(s) {
            for line in class {
                let shifted: Vec<usize> = line.iter().map(|v| v + offset).collect();
                family.push(VertexSet::from_indices(n, &shifted)?)?;
            }
        }
    }
    debug_assert!(family.is_packing(), "parallel-class union must be a packing");
    let hypergraph = Hypergraph::new(family, l)?;
    debug_assert_eq!(hypergraph.edge_count(), s * n / l);
    Ok(ExampleHypergraph {
        l,
        s,
        copies,
        hypergraph,
    })
}

/// The matching {0..l-1}, {l..2l-1}, ... partitioning [n].
pub fn perfect_matching_hypergraph(n: usize, l: usize) -> Result<Hypergraph> {
    if l < 1 || n < l || n % l != 0 {
        return Err(Error::Domain(format!(
            "matching needs l >= 1 dividing n, got n={n}, l={l}"
        )));
    }
    let mut family = SetFamily::empty(n);
    for start in (0..n).step_by(l) {
        let block: Vec<usize> = (start..start + l).collect();
        family.push(VertexSet::from_indices(n, &block)?)?;
    }
    debug_assert!(family.is_matching());
    Hypergraph::new(family, l)
}

/// Greedy randomized nearly-disjoint l-graph: repeatedly samples a uniform
/// l-set and accepts it iff it shares at most one point with every accepted
/// block. Stops at `t_target` blocks or after 1000 * t_target rejections;
/// a short family is data, not an error, and is visible in the edge count.
pub fn random_nearly_disjoint(n: usize, l: usize, t_target: usize, seed: u64) -> Result<Hypergraph> {
    if l < 2 {
        return Err(Error::Domain(format!("block size must be at least 2, got {l}")));
    }
    if l > n {
        return Err(Error::Domain(format!("block size {l} exceeds n={n}")));
    }
    if t_target < 1 {
        return Err(Error::Domain("t_target must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let mut sampler = SubsetSampler::new(n);
    let mut cover = PairCover::new(n);
    let mut family = SetFamily::empty(n);
    let mut scratch = Vec::with_capacity(l);
    let budget = 1000u64.saturating_mul(t_target as u64);
    let mut rejections = 0u64;
    while family.len() < t_target && rejections < budget {
        sampler.draw(&mut rng, l, &mut scratch);
        let block = VertexSet::from_indices(n, &scratch)?;
        if cover.compatible(&block) {
            cover.accept(&block);
            family.push(block)?;
        } else {
            rejections += 1;
        }
    }
    debug_assert!(family.is_packing());
    Hypergraph::new(family, l)
}
