//! Dilaton, string and divisor equations on cone complexes and on skeleta.

use num_traits::Zero;
use serde::Serialize;

use super::{isolated_correction, weighted_descendant, Insertion, WeightedQuery};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::oracle::{ClassId, TargetModel};
use crate::rational::{int, rat, serialize_rational, Rational};
use crate::vset::VertexSet;
use crate::weights::WeightData;

/// Which equation the last insertion is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// Last insertion `τ_1`.
    Dilaton,
    /// Last insertion `τ_0`.
    String,
    /// Last insertion `τ_0(D)` for a divisor class `D`.
    Divisor(ClassId),
}

impl Equation {
    fn last_insertion(self) -> Insertion {
        match self {
            Equation::Dilaton => Insertion::psi(1),
            Equation::String => Insertion::psi(0),
            Equation::Divisor(d) => Insertion::new(0, d),
        }
    }

    /// The factor multiplying the base value.
    fn factor(self, target: &TargetModel, genus: u32) -> Result<Rational> {
        match self {
            Equation::Dilaton => Ok(int(2 * genus as i64 - 2)),
            Equation::String => Ok(Rational::zero()),
            Equation::Divisor(d) => {
                if target.degree(d)? != 1 {
                    return Err(Error::Parameter(format!("class {d} is not a divisor class")));
                }
                Ok(int(target.divisor_pairing(d)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub equation: Equation,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub factor: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub base: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

fn verify_cone(target: &TargetModel, q: &WeightedQuery, equation: Equation) -> Result<ConeReport> {
    let n = q.complex.vertex_count();
    if n == 0 {
        return Err(Error::NotACone(0));
    }
    let base_complex = q.complex.cone_base().ok_or(Error::NotACone(n - 1))?;
    let expected = equation.last_insertion();
    if q.insertions[n - 1] != expected {
        return Err(Error::Parameter(format!("last insertion must be τ_{}({})", expected.k, expected.class)));
    }
    let factor = equation.factor(target, q.genus)?;
    let lhs = weighted_descendant(target, q)?;
    let base = weighted_descendant(target, &q.restricted(base_complex, n - 1)?)?;
    let rhs = &factor * &base;
    Ok(ConeReport { equation, holds: lhs == rhs, lhs, factor, base, rhs })
}

/// `⟨∏ τ_1⟩` on a cone equals `(2g-2)` times the value on its base.
pub fn verify_cone_dilaton(target: &TargetModel, q: &WeightedQuery) -> Result<ConeReport> {
    verify_cone(target, q, Equation::Dilaton)
}

/// `⟨∏ τ_0⟩` on a cone vanishes.
pub fn verify_cone_string(target: &TargetModel, q: &WeightedQuery) -> Result<ConeReport> {
    verify_cone(target, q, Equation::String)
}

/// `⟨∏ τ_0(D)⟩` on a cone equals `∫_β D` times the value on its base.
pub fn verify_cone_divisor(target: &TargetModel, q: &WeightedQuery) -> Result<ConeReport> {
    let d = q
        .insertions
        .last()
        .and_then(|i| i.class.as_basis())
        .ok_or_else(|| Error::Parameter("last insertion must be a single divisor class".into()))?;
    verify_cone(target, q, Equation::Divisor(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub sigma: VertexSet,
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricReport {
    pub equation: Equation,
    pub genus: u32,
    pub r: usize,
    pub n: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    /// Factor times the value on the `n`-point skeleton.
    #[serde(serialize_with = "serialize_rational")]
    pub main: Rational,
    pub corrections: Vec<Correction>,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

/// Compares the value on `Δ_{n+1,r}` (weights `(1/(r+1))^{n+1}`) with the main
/// term on `Δ_{n,r}` plus one correction per face of `cone(Δ_{n,r})` missing
/// from `Δ_{n+1,r}`, each computed with that face merged into an isolated vertex.
/// `insertions` are the first `n`; the last one is fixed by `equation`.
pub fn verify_symmetric(
    target: &TargetModel,
    equation: Equation,
    genus: u32,
    r: usize,
    insertions: &[Insertion],
) -> Result<SymmetricReport> {
    let n = insertions.len();
    if n == 0 || r >= n {
        return Err(Error::Parameter(format!("need 0 <= r <= n-1, got n={n}, r={r}")));
    }
    for m in [n, n + 1] {
        let w = WeightData::new(vec![rat(1, r as i64 + 1); m], genus, target.beta())?;
        if !w.in_domain() {
            return Err(Error::Domain(format!("weights (1/{}^{m}) at genus {genus}", r + 1)));
        }
    }
    let big = SimplicialComplex::skeleton(n + 1, r)?;
    let small = SimplicialComplex::skeleton(n, r)?;
    let cone = small.cone()?;
    let extra: Vec<VertexSet> = cone.faces().filter(|f| !big.contains(*f)).collect();
    for (i, a) in extra.iter().enumerate() {
        if extra.iter().enumerate().any(|(j, b)| i != j && a.is_subset_of(*b)) {
            return Err(Error::Parameter(format!("extra faces {a} and others are nested")));
        }
    }

    let factor = equation.factor(target, genus)?;
    let mut all = insertions.to_vec();
    all.push(equation.last_insertion());
    let q_big = WeightedQuery::new(genus, big, all)?;
    let lhs = weighted_descendant(target, &q_big)?;
    let main = &factor * weighted_descendant(target, &WeightedQuery::new(genus, small, insertions.to_vec())?)?;
    let mut rhs = main.clone();
    let mut corrections = Vec::with_capacity(extra.len());
    for sigma in extra {
        let value = isolated_correction(target, &q_big, sigma)?;
        rhs += &value;
        corrections.push(Correction { sigma, value });
    }
    Ok(SymmetricReport { equation, genus, r, n, holds: lhs == rhs, lhs, main, corrections, rhs })
}

pub fn verify_symmetric_dilaton(
    target: &TargetModel,
    genus: u32,
    r: usize,
    insertions: &[Insertion],
) -> Result<SymmetricReport> {
    verify_symmetric(target, Equation::Dilaton, genus, r, insertions)
}

pub fn verify_symmetric_string(
    target: &TargetModel,
    genus: u32,
    r: usize,
    insertions: &[Insertion],
) -> Result<SymmetricReport> {
    verify_symmetric(target, Equation::String, genus, r, insertions)
}

pub fn verify_symmetric_divisor(
    target: &TargetModel,
    divisor: ClassId,
    genus: u32,
    r: usize,
    insertions: &[Insertion],
) -> Result<SymmetricReport> {
    verify_symmetric(target, Equation::Divisor(divisor), genus, r, insertions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psis(ks: &[i64]) -> Vec<Insertion> {
        ks.iter().map(|&k| Insertion::psi(k)).collect()
    }

    #[test]
    fn cone_equations_on_discrete_base() {
        let t = TargetModel::point();
        let cone = SimplicialComplex::discrete(3).unwrap().cone().unwrap();
        let q = WeightedQuery::point(2, cone.clone(), &[2, 2, 2, 1]).unwrap();
        let r = verify_cone_dilaton(&t, &q).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.factor, int(2));
        let q = WeightedQuery::point(2, cone, &[3, 2, 3, 0]).unwrap();
        let r = verify_cone_string(&t, &q).unwrap();
        assert!(r.holds && r.lhs.is_zero());
        let not_cone = WeightedQuery::point(0, SimplicialComplex::discrete(4).unwrap(), &[1, 0, 0, 0]).unwrap();
        assert_eq!(verify_cone_dilaton(&t, &not_cone), Err(Error::NotACone(3)));
    }

    #[test]
    fn symmetric_small_cases() {
        let t = TargetModel::point();
        let r = verify_symmetric_dilaton(&t, 2, 1, &psis(&[2, 2, 2])).unwrap();
        assert!(r.holds, "{r:?}");
        let r = verify_symmetric_string(&t, 0, 1, &psis(&[1, 0, 0, 1, 0])).unwrap();
        assert!(r.holds, "{r:?}");
        // (1/3)^5 sums to 5/3, outside the genus-zero domain
        assert!(matches!(verify_symmetric_string(&t, 0, 2, &psis(&[1, 0, 0, 1, 0])), Err(Error::Domain(_))));
        let r = verify_symmetric_string(&t, 0, 0, &psis(&[1, 0, 0, 0])).unwrap();
        assert_eq!(r.corrections.len(), 4);
        assert!(r.holds);
        assert!(verify_symmetric_string(&t, 0, 2, &psis(&[0, 0, 0])).is_err());
        assert!(verify_symmetric_divisor(&t, 1, 2, 1, &psis(&[2, 2, 2])).is_err());
    }
}
