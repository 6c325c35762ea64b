//! Combinatorics toolkit for edge-disjoint clique packings in uniform random
//! graphs and for nearly-disjoint k-set families.
//!
//! The crate is organised around a small bitset core ([`VertexSet`],
//! [`SetFamily`], [`Hypergraph`]) with five layers on top:
//!
//! * [`formulas`]: log binomial coefficients, the expected clique count
//!   `f(k) = C(n,k) 2^{-k(k-1)/2}` in log form, and the threshold `k0(n)`.
//! * [`constructions`]: affine planes of small order, their disjoint-union
//!   hypergraphs, perfect matchings, and greedily sampled nearly-disjoint
//!   families.
//! * [`estimators`]: exact enumeration, direct Monte Carlo, and sequential
//!   importance sampling for packing and matching probabilities.
//! * [`bounds`]: closed-form heuristics and tail bounds evaluated in log
//!   domain, plus the low-interaction counting check.
//! * [`random_graph`] and [`packing`]: uniform random graphs, k-clique
//!   enumeration, conflict graphs, and packing searches.

pub mod bitset;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod estimators;
pub mod family;
pub mod formulas;
pub mod packing;
pub mod params;
pub mod random_graph;
pub mod rng;

pub use bitset::VertexSet;
pub use error::Error;
pub use family::{Hypergraph, PairCover, SetFamily};
pub use params::Params;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
