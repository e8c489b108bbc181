//! Kappa intersection numbers as weighted descendants at tiny equal weights.

use num_traits::Zero;

use super::{weighted_descendant_traced, PartitionTerm, WeightedQuery};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::oracle::{wk_point, TargetModel};
use crate::rational::{rat, sign, Rational};
use crate::vset::VertexSet;
use crate::weights::WeightData;

fn kappa_query(genus: u32, ks: &[u32]) -> Result<WeightedQuery> {
    let n = ks.len();
    let eps = vec![rat(1, n as i64 + 1); n];
    let w = WeightData::new(eps, genus, 0)?;
    if !w.in_domain() {
        return Err(Error::Domain(format!("weights (1/{}^{n}) at genus {genus}", n + 1)));
    }
    let complex = SimplicialComplex::from_weights(&w)?;
    let ks: Vec<i64> = ks.iter().map(|&k| k as i64).collect();
    WeightedQuery::point(genus, complex, &ks)
}

/// `⟨κ_{k1-1}⋯κ_{kn-1}⟩_g` as the weighted descendant at weights `ε^n`, whose complex is the full simplex.
pub fn kappa_number(genus: u32, ks: &[u32]) -> Result<Rational> {
    Ok(kappa_number_traced(genus, ks)?.0)
}

pub fn kappa_number_traced(genus: u32, ks: &[u32]) -> Result<(Rational, Vec<PartitionTerm>)> {
    let q = kappa_query(genus, ks)?;
    weighted_descendant_traced(&TargetModel::point(), &q)
}

/// The same number summed over every set partition of `{1..n}`, enumerated
/// by restricted growth strings without reference to any complex.
pub fn kappa_by_all_partitions(genus: u32, ks: &[u32]) -> Result<Rational> {
    let n = ks.len();
    let w = WeightData::new(vec![rat(1, n as i64 + 1); n], genus, 0)?;
    if !w.in_domain() {
        return Err(Error::Domain(format!("weights (1/{}^{n}) at genus {genus}", n + 1)));
    }
    let mut total = Rational::zero();
    let mut growth = vec![0usize; n];
    loop {
        let blocks = growth.iter().max().map_or(0, |m| m + 1);
        let mut sets = vec![VertexSet::EMPTY; blocks];
        for (v, &b) in growth.iter().enumerate() {
            sets[b] = sets[b].with(v);
        }
        let k_sigma: Vec<i64> =
            sets.iter().map(|s| s.iter().map(|v| ks[v] as i64).sum::<i64>() - s.dim() as i64).collect();
        if k_sigma.iter().all(|&k| k >= 0) {
            let kk: Vec<u32> = k_sigma.iter().map(|&k| k as u32).collect();
            total += sign(n - blocks) * wk_point(genus, &kk);
        }
        if !next_growth_string(&mut growth) {
            break;
        }
    }
    Ok(total)
}

/// Advances a restricted growth string `a_0 = 0, a_i <= 1 + max(a_0..a_{i-1})`.
fn next_growth_string(a: &mut [usize]) -> bool {
    for i in (1..a.len()).rev() {
        let bound = a[..i].iter().max().copied().unwrap_or(0) + 1;
        if a[i] < bound {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_strings_count_bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            let mut a = vec![0; n];
            let mut count = 1;
            while next_growth_string(&mut a) {
                count += 1;
            }
            assert_eq!(count, bell);
        }
    }

    #[test]
    fn small_kappas() {
        assert_eq!(kappa_number(1, &[1]).unwrap(), rat(1, 24));
        let v = kappa_number(2, &[2, 3]).unwrap();
        assert_eq!(v, wk_point(2, &[2, 3]) - wk_point(2, &[4]));
        assert_eq!(v, rat(1, 240));
        assert_eq!(kappa_by_all_partitions(2, &[2, 3]).unwrap(), v);
        assert!(kappa_number(0, &[1, 1, 1]).is_err());
        assert!(kappa_number(1, &[]).is_err());
        assert_eq!(kappa_number(2, &[]).unwrap(), Rational::zero());
    }
}
