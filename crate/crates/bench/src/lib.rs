//! Fixed workloads shared by the benchmarks.

use hassett_core::descend::WeightedQuery;
use hassett_core::rational::rat;
use hassett_core::{SimplicialComplex, WeightData};

/// Genus-zero weights `(1, 1, ε^{n-2})` with `ε = 1/(2n)`.
pub fn losev_manin(n: usize) -> WeightData {
    let mut w = vec![rat(1, 1), rat(1, 1)];
    w.extend(std::iter::repeat_n(rat(1, 2 * n as i64), n - 2));
    WeightData::new(w, 0, 0).expect("weights lie in [0,1]")
}

/// `⟨τ_{3g-3+n} τ_0^{n-1}⟩` on the full simplex, where every set partition is admissible.
pub fn full_simplex_query(genus: u32, n: usize) -> WeightedQuery {
    let w = WeightData::new(vec![rat(1, n as i64); n], genus, 0).expect("weights lie in [0,1]");
    let c = SimplicialComplex::from_weights(&w).expect("complex builds");
    let mut ks = vec![0; n];
    ks[0] = 3 * genus as i64 - 3 + n as i64;
    WeightedQuery::point(genus, c, &ks).expect("one insertion per vertex")
}

/// The complete graph on `n` vertices, from weights `(2/5)^n`.
pub fn complete_graph(n: usize) -> SimplicialComplex {
    let w = WeightData::new(vec![rat(2, 5); n], 2, 0).expect("weights lie in [0,1]");
    SimplicialComplex::from_weights(&w).expect("complex builds")
}
