//! Weighted descendants as signed sums over admissible partitions, and the
//! identities relating them across walls.

mod equations;
mod genpoly;
mod kappa;

pub use equations::{
    verify_cone_dilaton, verify_cone_divisor, verify_cone_string, verify_symmetric, verify_symmetric_dilaton,
    verify_symmetric_divisor, verify_symmetric_string, ConeReport, Equation, SymmetricReport,
};
pub use genpoly::{compositions, generating_polynomial, verify_genpoly_wallcross, GenpolyReport};
pub use kappa::{kappa_by_all_partitions, kappa_number, kappa_number_traced};

use num_traits::Zero;
use serde::Serialize;

use crate::chambers::{CrossingPath, Direction};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::oracle::{ClassComb, ClassId, DescendantKey, TargetKind, TargetModel};
use crate::rational::{serialize_rational, sign, Rational};
use crate::vset::VertexSet;

/// `τ_k(γ)` at one marked point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertion {
    pub k: i64,
    pub class: ClassComb,
}

impl Insertion {
    pub fn psi(k: i64) -> Self {
        Insertion { k, class: ClassComb::unit() }
    }

    pub fn new(k: i64, class: ClassId) -> Self {
        Insertion { k, class: ClassComb::basis(class) }
    }
}

/// `⟨∏ τ_{k_i}(γ_i)⟩_{g,A}` with `A` given through its complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedQuery {
    pub genus: u32,
    pub complex: SimplicialComplex,
    pub insertions: Vec<Insertion>,
}

impl WeightedQuery {
    pub fn new(genus: u32, complex: SimplicialComplex, insertions: Vec<Insertion>) -> Result<Self> {
        if insertions.len() != complex.vertex_count() {
            return Err(Error::Shape(format!(
                "{} insertions for a complex on {} vertices",
                insertions.len(),
                complex.vertex_count()
            )));
        }
        Ok(WeightedQuery { genus, complex, insertions })
    }

    /// Psi powers only, every class the unit.
    pub fn point(genus: u32, complex: SimplicialComplex, ks: &[i64]) -> Result<Self> {
        Self::new(genus, complex, ks.iter().map(|&k| Insertion::psi(k)).collect())
    }

    pub fn with_classes(genus: u32, complex: SimplicialComplex, ks: &[i64], classes: &[ClassId]) -> Result<Self> {
        if ks.len() != classes.len() {
            return Err(Error::Shape(format!("{} descendant indices but {} classes", ks.len(), classes.len())));
        }
        Self::new(genus, complex, ks.iter().zip(classes).map(|(&k, &c)| Insertion::new(k, c)).collect())
    }

    pub fn ks(&self) -> Vec<i64> {
        self.insertions.iter().map(|i| i.k).collect()
    }

    /// The first `m` insertions on `complex`.
    fn restricted(&self, complex: SimplicialComplex, m: usize) -> Result<Self> {
        Self::new(self.genus, complex, self.insertions[..m].to_vec())
    }
}

/// Degree of a homogeneous class combination; `None` for zero.
pub(crate) fn comb_degree(target: &TargetModel, c: &ClassComb) -> Result<Option<i64>> {
    let mut degree = None;
    for (id, _) in c.terms() {
        let d = target.degree(id)?;
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => {
                return Err(Error::Parameter(format!("class combination {c} is not homogeneous")));
            }
            _ => {}
        }
    }
    Ok(degree)
}

/// Whether `Σ (k_i + deg γ_i) = (1-g) dim V - K_V·β + 3g - 3 + n`.
/// A zero class never passes.
pub fn dimension_gate(target: &TargetModel, q: &WeightedQuery) -> Result<bool> {
    let mut total = 0i64;
    for ins in &q.insertions {
        match comb_degree(target, &ins.class)? {
            Some(d) => total += ins.k + d,
            None => return Ok(false),
        }
    }
    Ok(total == required_total(target, q.genus, q.insertions.len()))
}

/// Right-hand side of the dimension gate.
pub(crate) fn required_total(target: &TargetModel, genus: u32, n: usize) -> i64 {
    let g = genus as i64;
    (1 - g) * target.dim() + target.pairing() + 3 * g - 3 + n as i64
}

/// One admissible partition's contribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionTerm {
    pub blocks: Vec<VertexSet>,
    pub sign: i32,
    pub k_sigma: Vec<i64>,
    #[serde(serialize_with = "serialize_rational")]
    pub oracle: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub term: Rational,
}

impl std::fmt::Display for PartitionTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let blocks: String = self.blocks.iter().map(|b| b.to_string()).collect();
        let ks: Vec<String> = self.k_sigma.iter().map(|k| k.to_string()).collect();
        write!(
            f,
            "{blocks} sign={} k=({}) oracle={} term={}",
            if self.sign > 0 { "+" } else { "-" },
            ks.join(","),
            self.oracle,
            self.term
        )
    }
}

/// Unweighted value of the block insertions `τ_{k_σ}(γ_σ)`, or zero when some `k_σ < 0`.
fn block_value(
    target: &TargetModel,
    genus: u32,
    insertions: &[Insertion],
    blocks: &[VertexSet],
) -> Result<(Vec<i64>, Rational)> {
    let k_sigma: Vec<i64> =
        blocks.iter().map(|b| b.iter().map(|v| insertions[v].k).sum::<i64>() - b.dim() as i64).collect();
    if k_sigma.iter().any(|&k| k < 0) {
        return Ok((k_sigma, Rational::zero()));
    }
    if target.kind() == TargetKind::Point {
        let key = DescendantKey::point(genus, &k_sigma);
        return Ok((k_sigma, target.unweighted_lookup(&key)?));
    }
    let mut gammas = Vec::with_capacity(blocks.len());
    for b in blocks {
        let gamma = target.ring_product(b.iter().map(|v| &insertions[v].class))?;
        if gamma.is_zero() {
            return Ok((k_sigma, Rational::zero()));
        }
        gammas.push(gamma);
    }
    // expand multilinearly over the basis terms of each γ_σ
    let mut total = Rational::zero();
    let mut expansions: Vec<(Rational, Vec<(i64, ClassId)>)> = vec![(Rational::from_integer(1.into()), Vec::new())];
    for (gamma, &k) in gammas.iter().zip(&k_sigma) {
        let mut next = Vec::new();
        for (coef, slots) in &expansions {
            for (id, c) in gamma.terms() {
                let mut s = slots.clone();
                s.push((k, id));
                next.push((coef * c, s));
            }
        }
        expansions = next;
    }
    for (coef, slots) in expansions {
        let v = target.unweighted_lookup(&DescendantKey::new(genus, slots))?;
        if !v.is_zero() {
            total += coef * v;
        }
    }
    Ok((k_sigma, total))
}

fn evaluate(target: &TargetModel, q: &WeightedQuery, mut trace: Option<&mut Vec<PartitionTerm>>) -> Result<Rational> {
    if q.insertions.iter().any(|i| i.k < 0) {
        return Ok(Rational::zero());
    }
    let basis_only = q.insertions.iter().all(|i| i.class.as_basis().is_some());
    if basis_only && !dimension_gate(target, q)? {
        return Ok(Rational::zero());
    }
    let mut total = Rational::zero();
    for p in q.complex.admissible_partitions() {
        let (k_sigma, oracle) = block_value(target, q.genus, &q.insertions, p.blocks())?;
        let s = sign(p.dim());
        let term = &s * &oracle;
        total += &term;
        if let Some(t) = trace.as_deref_mut() {
            t.push(PartitionTerm {
                blocks: p.blocks().to_vec(),
                sign: if p.dim() % 2 == 0 { 1 } else { -1 },
                k_sigma,
                oracle,
                term,
            });
        }
    }
    Ok(total)
}

/// `Σ_{Σ ∈ Σ(A)} (-1)^{dim Σ} ⟨∏_{σ∈Σ} τ_{k_σ}(γ_σ)⟩_{g,|Σ|}`.
pub fn weighted_descendant(target: &TargetModel, q: &WeightedQuery) -> Result<Rational> {
    evaluate(target, q, None)
}

/// Like [`weighted_descendant`], also returning one record per admissible partition.
/// The record list is empty when the query is gated out.
pub fn weighted_descendant_traced(target: &TargetModel, q: &WeightedQuery) -> Result<(Rational, Vec<PartitionTerm>)> {
    let mut terms = Vec::new();
    let v = evaluate(target, q, Some(&mut terms))?;
    Ok((v, terms))
}

/// The query on the complex with `sigma` merged into one vertex carrying `τ_{k_σ}(γ_σ)`.
fn merged_query(target: &TargetModel, q: &WeightedQuery, sigma: VertexSet, isolate: bool) -> Result<WeightedQuery> {
    let contraction = if isolate { q.complex.collapse_isolated(sigma)? } else { q.complex.contract(sigma)? };
    let m = contraction.complex.vertex_count();
    let mut insertions: Vec<Option<Insertion>> = vec![None; m];
    for v in (0..q.insertions.len()).filter(|v| !sigma.contains(*v)) {
        insertions[contraction.vertex_map[v]] = Some(q.insertions[v].clone());
    }
    let k = sigma.iter().map(|v| q.insertions[v].k).sum::<i64>() - sigma.dim() as i64;
    let class = target.ring_product(sigma.iter().map(|v| &q.insertions[v].class))?;
    insertions[contraction.merged] = Some(Insertion { k, class });
    WeightedQuery::new(q.genus, contraction.complex, insertions.into_iter().map(Option::unwrap).collect())
}

/// `(-1)^{dim σ + 1} ⟨τ_{k_σ}(γ_σ) ∏_{j∉σ} τ_{k_j}(γ_j)⟩_{g,A_σ}` on the contraction of `sigma`.
pub fn wallcross_third_term(target: &TargetModel, q: &WeightedQuery, sigma: VertexSet) -> Result<Rational> {
    if !q.complex.contains(sigma) {
        return Err(Error::NotAFace(sigma.to_string()));
    }
    let merged = merged_query(target, q, sigma, false)?;
    Ok(sign(sigma.dim() + 1) * weighted_descendant(target, &merged)?)
}

/// Same correction term for a `sigma` outside the complex, merged into an isolated vertex.
pub(crate) fn isolated_correction(target: &TargetModel, q: &WeightedQuery, sigma: VertexSet) -> Result<Rational> {
    let merged = merged_query(target, q, sigma, true)?;
    Ok(sign(sigma.dim() + 1) * weighted_descendant(target, &merged)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallcrossReport {
    pub sigma: VertexSet,
    /// Value on the complex before `σ` is added.
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    /// Value on the complex containing `σ`.
    #[serde(serialize_with = "serialize_rational")]
    pub post: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub third_term: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

/// Checks `⟨⋯⟩_{pre} = ⟨⋯⟩_{post} + (-1)^{dim σ+1} ⟨τ_{k_σ}(γ_σ)⋯⟩_{post_σ}`
/// where `post` is `pre` with the simplex `σ` added.
pub fn verify_wallcross(
    target: &TargetModel,
    genus: u32,
    insertions: &[Insertion],
    pre: &SimplicialComplex,
    post: &SimplicialComplex,
) -> Result<WallcrossReport> {
    let sigma = crate::chambers::is_simple_crossing(pre, post).ok_or(Error::NotSimpleCrossing)?;
    let q_pre = WeightedQuery::new(genus, pre.clone(), insertions.to_vec())?;
    let q_post = WeightedQuery::new(genus, post.clone(), insertions.to_vec())?;
    let lhs = weighted_descendant(target, &q_pre)?;
    let post_value = weighted_descendant(target, &q_post)?;
    let third_term = wallcross_third_term(target, &q_post, sigma)?;
    let rhs = &post_value + &third_term;
    Ok(WallcrossReport { sigma, holds: lhs == rhs, lhs, post: post_value, third_term, rhs })
}

/// `⟨⋯⟩_B - ⟨⋯⟩_A` accumulated as minus the third terms along `path` from `A` to `B`.
pub fn telescoped_difference(
    target: &TargetModel,
    genus: u32,
    insertions: &[Insertion],
    path: &CrossingPath,
) -> Result<Rational> {
    let complexes = path.complexes()?;
    let mut total = Rational::zero();
    for (e, after) in path.events.iter().zip(&complexes[1..]) {
        if e.direction != Direction::Add {
            return Err(Error::Parameter(format!("path removes {} and is not monotone", e.subset)));
        }
        let q = WeightedQuery::new(genus, after.clone(), insertions.to_vec())?;
        total -= wallcross_third_term(target, &q, e.subset)?;
    }
    Ok(total)
}

/// `⟨⋯⟩_B - ⟨⋯⟩_A` for `Δ_A ⊆ Δ_B` as the signed sum over partitions
/// admissible for `B` but not for `A`.
pub fn direct_difference(
    target: &TargetModel,
    genus: u32,
    insertions: &[Insertion],
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Result<Rational> {
    if a.vertex_count() != b.vertex_count() || a.faces().any(|f| !b.contains(f)) {
        return Err(Error::Parameter("the first complex must be contained in the second".into()));
    }
    let q = WeightedQuery::new(genus, b.clone(), insertions.to_vec())?;
    if q.insertions.iter().any(|i| i.k < 0) {
        return Ok(Rational::zero());
    }
    let mut total = Rational::zero();
    for p in b.admissible_partitions() {
        if p.blocks().iter().all(|s| a.contains(*s)) {
            continue;
        }
        let (_, v) = block_value(target, genus, &q.insertions, p.blocks())?;
        total += sign(p.dim()) * v;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::weights::WeightData;

    fn cx(w: &str, g: u32) -> SimplicialComplex {
        SimplicialComplex::from_weights(&WeightData::parse(w, g, 0).unwrap()).unwrap()
    }

    fn wd(g: u32, w: &str, ks: &[i64]) -> Rational {
        weighted_descendant(&TargetModel::point(), &WeightedQuery::point(g, cx(w, g), ks).unwrap()).unwrap()
    }

    #[test]
    fn gate_examples() {
        let t = TargetModel::point();
        let q = |g, n, ks: &[i64]| WeightedQuery::point(g, SimplicialComplex::discrete(n).unwrap(), ks).unwrap();
        assert!(dimension_gate(&t, &q(0, 4, &[1, 0, 0, 0])).unwrap());
        assert!(dimension_gate(&t, &q(1, 1, &[1])).unwrap());
        assert!(!dimension_gate(&t, &q(0, 4, &[2, 0, 0, 0])).unwrap());
    }

    #[test]
    fn worked_values() {
        assert_eq!(wd(0, "1,1,1,1", &[1, 0, 0, 0]), int(1));
        assert_eq!(wd(0, "1,2/5,2/5,2/5", &[0, 1, 0, 0]), int(-1));
        assert_eq!(wd(0, "9/10,9/10,9/10,1/10", &[0, 0, 0, 1]), int(-2));
        assert_eq!(wd(0, "1,1,1/10,1/10,1/10", &[2, 0, 0, 0, 0]), int(1));
        assert_eq!(wd(0, "1,1,1/10,1/10,1/10", &[0, 0, 2, 0, 0]), int(0));
    }

    #[test]
    fn trace_lists_every_admissible_partition() {
        let q = WeightedQuery::point(0, cx("1,2/5,2/5,2/5", 0), &[0, 1, 0, 0]).unwrap();
        let (v, terms) = weighted_descendant_traced(&TargetModel::point(), &q).unwrap();
        assert_eq!(v, int(-1));
        assert_eq!(terms.len(), 4);
        let total: Rational = terms.iter().map(|t| t.term.clone()).sum();
        assert_eq!(total, v);
        assert_eq!(terms[0].to_string(), "{1}{2}{3}{4} sign=+ k=(0,1,0,0) oracle=1 term=1");
    }

    #[test]
    fn third_term_and_crossing() {
        let t = TargetModel::point();
        let post = cx("1,1,1/3,1/3,1/3", 0);
        let pre = cx("1,1,2/5,2/5,2/5", 0);
        let sigma = VertexSet::from_indices([2, 3, 4]);
        let q = WeightedQuery::point(0, post.clone(), &[0, 0, 1, 1, 0]).unwrap();
        assert_eq!(wallcross_third_term(&t, &q, sigma).unwrap(), int(-1));
        let ins: Vec<Insertion> = [0, 0, 1, 1, 0].iter().map(|&k| Insertion::psi(k)).collect();
        let r = verify_wallcross(&t, 0, &ins, &pre, &post).unwrap();
        assert_eq!((r.lhs.clone(), r.post.clone(), r.third_term.clone()), (int(-1), int(0), int(-1)));
        assert!(r.holds);
        assert!(verify_wallcross(&t, 0, &ins, &post, &post).is_err());
        assert!(wallcross_third_term(&t, &q, VertexSet::from_indices([0, 1])).is_err());
        // a vertex contracts to an isomorphic complex with the opposite sign
        let single = wallcross_third_term(&t, &q, VertexSet::singleton(2)).unwrap();
        assert_eq!(single, -weighted_descendant(&t, &q).unwrap());
    }
}
