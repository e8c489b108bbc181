//! Weight data, the admissible region for `(g, β)`, and generic perturbation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, parse_rational, Rational};
use crate::vset::{VertexSet, MAX_VERTICES};

/// Ordered weights `a_i ∈ [0,1]` attached to marked points, with the genus and curve degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightData {
    weights: Vec<Rational>,
    genus: u32,
    beta: u32,
}

impl WeightData {
    pub fn new(weights: Vec<Rational>, genus: u32, beta: u32) -> Result<Self> {
        for (i, a) in weights.iter().enumerate() {
            if a.is_negative() || *a > Rational::one() {
                return Err(Error::Parameter(format!("weight a{} = {} lies outside [0,1]", i + 1, a)));
            }
        }
        Ok(WeightData { weights, genus, beta })
    }

    /// Parses a weight list and attaches `(g, β)`.
    pub fn parse(text: &str, genus: u32, beta: u32) -> Result<Self> {
        Self::new(parse_weights(text)?, genus, beta)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn is_positive(&self) -> bool {
        self.weights.iter().all(|a| a.is_positive())
    }

    pub fn zero_set(&self) -> VertexSet {
        VertexSet::from_indices(self.weights.iter().enumerate().filter(|(_, a)| a.is_zero()).map(|(i, _)| i))
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn subset_sum(&self, s: VertexSet) -> Rational {
        s.iter().map(|i| &self.weights[i]).sum()
    }

    /// Membership in the region where nonempty moduli spaces can live.
    pub fn in_domain(&self) -> bool {
        match (self.genus, self.beta) {
            (0, 0) => self.total() > int(2),
            (1, 0) => self.weights.iter().any(|a| !a.is_zero()),
            _ => true,
        }
    }

    /// Coordinatewise `self >= other`.
    pub fn dominates(&self, other: &WeightData) -> Result<bool> {
        self.check_comparable(other)?;
        Ok(self.weights.iter().zip(&other.weights).all(|(a, b)| a >= b))
    }

    pub(crate) fn check_comparable(&self, other: &WeightData) -> Result<()> {
        if self.len() != other.len() || self.genus != other.genus || self.beta != other.beta {
            return Err(Error::Shape(format!(
                "weight data of length {} (g={}, β={}) vs length {} (g={}, β={})",
                self.len(),
                self.genus,
                self.beta,
                other.len(),
                other.genus,
                other.beta
            )));
        }
        Ok(())
    }

    pub(crate) fn with_weights(&self, weights: Vec<Rational>) -> Self {
        WeightData { weights, genus: self.genus, beta: self.beta }
    }

    /// Moves `self` a small seed-dependent distance downward into the interior of
    /// its fine chamber. Each coordinate drops by a distinct rational strictly
    /// below the smallest slack of any wall not containing `self`, so the
    /// simplicial complex and zero set are unchanged and no subset of size at
    /// least two sums to exactly one afterwards.
    ///
    /// If `accept` rejects the candidate, the perturbation is re-derived from
    /// `seed + 1`, `seed + 2`, ... up to a fixed number of attempts.
    pub fn perturb_generic<F>(&self, seed: u64, mut accept: F) -> Result<WeightData>
    where
        F: FnMut(&WeightData) -> bool,
    {
        if !self.is_positive() {
            return Err(Error::Parameter("perturbation needs strictly positive weights".into()));
        }
        if self.len() > MAX_VERTICES {
            return Err(Error::Capacity(format!("{} weights, at most {MAX_VERTICES} supported", self.len())));
        }
        let bound = self.perturbation_bound();
        for attempt in 0..PERTURB_ATTEMPTS {
            let candidate = self.perturb_once(&bound, seed.wrapping_add(attempt));
            if candidate.has_exact_wall() {
                continue;
            }
            if accept(&candidate) {
                return Ok(candidate);
            }
        }
        Err(Error::Parameter(format!("no generic perturbation found in {PERTURB_ATTEMPTS} attempts from seed {seed}")))
    }

    /// Strict upper bound for the total decrease of any subset sum.
    fn perturbation_bound(&self) -> Rational {
        let n = self.len();
        let mut bound = self.weights.iter().min().cloned().unwrap_or_else(Rational::one);
        let sums = subset_sums(&self.weights);
        for (mask, s) in sums.iter().enumerate() {
            if (mask as u32).count_ones() >= 2 && *s > Rational::one() {
                let slack = s - Rational::one();
                if slack < bound {
                    bound = slack;
                }
            }
        }
        if (self.genus, self.beta) == (0, 0) {
            let slack = self.total() - int(2);
            if slack.is_positive() && slack < bound {
                bound = slack;
            }
        }
        bound / int(n as i64 + 1)
    }

    fn perturb_once(&self, bound: &Rational, seed: u64) -> WeightData {
        let scale = Rational::from_integer(BigInt::from(PERTURB_DENOMINATOR + 1));
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let m = 1 + splitmix64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(i as u64)) % PERTURB_DENOMINATOR;
                let delta = bound * Rational::from_integer(BigInt::from(m)) / &scale;
                a - delta
            })
            .collect();
        self.with_weights(weights)
    }

    fn has_exact_wall(&self) -> bool {
        subset_sums(&self.weights).iter().enumerate().any(|(mask, s)| (mask as u32).count_ones() >= 2 && s.is_one())
    }
}

const PERTURB_ATTEMPTS: u64 = 64;
const PERTURB_DENOMINATOR: u64 = 1 << 24;

/// `sums[mask] = Σ_{i ∈ mask} w_i` for every mask.
pub(crate) fn subset_sums(weights: &[Rational]) -> Vec<Rational> {
    let n = weights.len();
    let mut sums = vec![Rational::zero(); 1 << n];
    for mask in 1..(1usize << n) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &weights[low];
    }
    sums
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Parses comma-separated rational literals; `x^k` repeats `x` k times.
pub fn parse_weights(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::Parse(format!("empty entry in weight list {text:?}")));
        }
        let (value, count) = match item.rsplit_once('^') {
            Some((v, c)) => {
                let c: usize =
                    c.trim().parse().map_err(|_| Error::Parse(format!("bad repetition count in {item:?}")))?;
                (v, c)
            }
            None => (item, 1),
        };
        let r = parse_rational(value)?;
        out.extend(std::iter::repeat_n(r, count));
    }
    if out.len() > MAX_VERTICES {
        return Err(Error::Capacity(format!("{} weights, at most {MAX_VERTICES} supported", out.len())));
    }
    Ok(out)
}

impl fmt::Display for WeightData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn w(text: &str, g: u32) -> WeightData {
        WeightData::parse(text, g, 0).unwrap()
    }

    #[test]
    fn parsing_with_repetition() {
        let a = parse_weights("1^2,1/10^3").unwrap();
        assert_eq!(a, vec![int(1), int(1), rat(1, 10), rat(1, 10), rat(1, 10)]);
        assert_eq!(parse_weights("2/5,2/5,2/5,1").unwrap().len(), 4);
        assert!(parse_weights("1,,2").is_err());
        assert!(parse_weights("1^x").is_err());
        assert!(WeightData::parse("3/2", 0, 0).is_err());
        assert!(WeightData::parse("-1/2", 0, 0).is_err());
        assert!(parse_weights("1^17").is_err());
    }

    #[test]
    fn domain_cases() {
        assert!(w("1,1,1", 0).in_domain());
        assert!(!w("1/2,1/2,1/2", 0).in_domain());
        assert!(!w("0,0", 1).in_domain());
        assert!(w("0,0", 2).in_domain());
        assert!(w("0,1/5", 1).in_domain());
        assert!(WeightData::parse("0,0", 0, 1).unwrap().in_domain());
    }

    #[test]
    fn partial_order() {
        assert!(w("1,1,1", 0).dominates(&w("1/3,1/3,1/3", 0)).unwrap());
        assert!(!w("1,1/4", 2).dominates(&w("1/2,1/2", 2)).unwrap());
        assert!(!w("1/2,1/2", 2).dominates(&w("1,1/4", 2)).unwrap());
        let a = w("1/3,2/3", 2);
        assert!(a.dominates(&a).unwrap());
        assert!(a.dominates(&w("1,1,1", 2)).is_err());
        assert!(a.dominates(&w("1/3,2/3", 3)).is_err());
    }

    #[test]
    fn perturbation_moves_down_and_off_walls() {
        let a = w("1,1,1", 0);
        let p = a.perturb_generic(0, |_| true).unwrap();
        let mut deltas: Vec<Rational> = a.weights().iter().zip(p.weights()).map(|(x, y)| x - y).collect();
        assert!(deltas.iter().all(|d| d.is_positive()));
        deltas.sort();
        deltas.dedup();
        assert_eq!(deltas.len(), 3);
        assert!(!p.has_exact_wall());
        assert!(p.in_domain());

        let b = w("1/3,1/3,1/3", 2);
        let q = b.perturb_generic(7, |_| true).unwrap();
        assert!(q.total() < int(1));
        assert!(b.perturb_generic(7, |_| true).unwrap() == q);
        assert!(w("0,1", 2).perturb_generic(0, |_| true).is_err());
    }

    #[test]
    fn perturbation_retries_until_accepted() {
        let a = w("1,1,1", 2);
        let first = a.perturb_generic(3, |_| true).unwrap();
        let mut calls = 0;
        let later = a
            .perturb_generic(3, |_| {
                calls += 1;
                calls > 2
            })
            .unwrap();
        assert_eq!(calls, 3);
        assert_ne!(first, later);
        assert_eq!(later, a.perturb_generic(5, |_| true).unwrap());
        assert!(a.perturb_generic(0, |_| false).is_err());
    }
}
