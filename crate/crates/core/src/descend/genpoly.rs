//! Ordinary and exponential generating polynomials of weighted descendants.

use num_bigint::BigInt;
use serde::Serialize;

use super::{comb_degree, required_total, weighted_descendant, Insertion, WeightedQuery};
use crate::chambers::is_simple_crossing;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::oracle::{ClassComb, TargetModel};
use crate::poly::MultiPoly;
use crate::rational::{factorial, sign, Rational};
use crate::vset::VertexSet;

/// All vectors of `parts` nonnegative integers summing to `total`, in
/// lexicographically decreasing order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// `Σ_k ⟨∏ τ_{k_i}(γ_i)⟩_{g,Δ} t^k`, divided by `k!` termwise when `exponential`.
/// Only `k` passing the dimension gate can contribute, so the sum is finite.
pub fn generating_polynomial(
    target: &TargetModel,
    genus: u32,
    complex: &SimplicialComplex,
    classes: &[ClassComb],
    exponential: bool,
) -> Result<MultiPoly> {
    let n = complex.vertex_count();
    if classes.len() != n {
        return Err(Error::Shape(format!("{} classes for a complex on {n} vertices", classes.len())));
    }
    let mut total = required_total(target, genus, n);
    for c in classes {
        match comb_degree(target, c)? {
            Some(d) => total -= d,
            None => return Ok(MultiPoly::zero(n)),
        }
    }
    if total < 0 {
        return Ok(MultiPoly::zero(n));
    }
    let mut terms = Vec::new();
    for ks in compositions(total as u32, n) {
        let insertions = ks.iter().zip(classes).map(|(&k, c)| Insertion { k: k as i64, class: c.clone() }).collect();
        let q = WeightedQuery::new(genus, complex.clone(), insertions)?;
        let mut v = weighted_descendant(target, &q)?;
        if exponential {
            let den = ks.iter().fold(BigInt::from(1), |acc, &k| acc * factorial(k as u64));
            v /= Rational::from_integer(den);
        }
        terms.push((ks, v));
    }
    MultiPoly::from_terms(n, terms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenpolyReport {
    pub sigma: VertexSet,
    /// `E_pre - E_post`.
    pub difference: String,
    /// The integrated and substituted contraction polynomial with its sign.
    pub correction: String,
    pub holds: bool,
}

/// Checks `E_pre - E_post = (-1)^{dim σ+1} (∫^{dim σ} E_{σ} dt_•)|_{t_• = Σ_{i∈σ} t_i}`
/// where `E_σ` is the exponential generating polynomial of the contraction of `σ` in `post`.
pub fn verify_genpoly_wallcross(
    target: &TargetModel,
    genus: u32,
    classes: &[ClassComb],
    pre: &SimplicialComplex,
    post: &SimplicialComplex,
) -> Result<GenpolyReport> {
    let sigma = is_simple_crossing(pre, post).ok_or(Error::NotSimpleCrossing)?;
    let n = post.vertex_count();
    let e_pre = generating_polynomial(target, genus, pre, classes, true)?;
    let e_post = generating_polynomial(target, genus, post, classes, true)?;
    let difference = e_pre.sub(&e_post)?;

    let contraction = post.contract(sigma)?;
    let m = contraction.complex.vertex_count();
    let mut merged_classes = vec![ClassComb::zero(); m];
    let mut var_map = vec![n; m];
    for v in (0..n).filter(|v| !sigma.contains(*v)) {
        merged_classes[contraction.vertex_map[v]] = classes[v].clone();
        var_map[contraction.vertex_map[v]] = v;
    }
    merged_classes[contraction.merged] = target.ring_product(sigma.iter().map(|v| &classes[v]))?;
    let e_sigma = generating_polynomial(target, genus, &contraction.complex, &merged_classes, true)?;
    let sigma_vars: Vec<usize> = sigma.iter().collect();
    let correction = e_sigma
        .remap(n + 1, &var_map)?
        .homogeneous_antiderivative(n, sigma.dim() as u32)?
        .substitute_sum(n, &sigma_vars)?
        .truncate_vars(n)?
        .scale(&sign(sigma.dim() + 1));

    Ok(GenpolyReport {
        sigma,
        holds: difference == correction,
        difference: difference.to_string(),
        correction: correction.to_string(),
    })
}
