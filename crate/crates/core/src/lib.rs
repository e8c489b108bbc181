//! Weighted gravitational descendants of moduli spaces of weighted stable maps.
//!
//! The crate covers the combinatorics of Hassett weight data (chambers, walls,
//! the simplicial complexes `Δ_A` labeling them) and an exact engine that
//! reduces weighted descendant invariants to unweighted ones through signed
//! sums over admissible set partitions. Everything is computed over `BigRational`.

pub mod chambers;
pub mod complex;
pub mod descend;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod realize;
pub mod suites;
pub mod vset;
pub mod weights;

pub use complex::{Contraction, SetPartition, SimplicialComplex};
pub use error::{Error, Result};
pub use oracle::{ClassComb, ClassId, DescendantKey, TargetModel};

pub use poly::MultiPoly;
pub use rational::Rational;
pub use vset::VertexSet;
pub use weights::WeightData;
