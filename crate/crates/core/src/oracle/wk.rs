//! Point-target intersection numbers `⟨τ_{k1}⋯τ_{kn}⟩_g` on `M̄_{g,n}`.
//!
//! Two recursions are provided. [`Scheme::Dvv`] is the Virasoro form, applied
//! to the largest insertion. [`Scheme::Kdv`] reduces by string and dilaton
//! first and otherwise solves the KdV relation for `⟨τ_{m+2}τ_0^2⋯⟩` after
//! expanding it with the string equation. They share nothing but the two base
//! values, so agreement between them is a meaningful check.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, int, odd_double_factorial, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Dvv,
    Kdv,
}

type Key = (u32, Vec<u32>);

/// Memoized evaluator. The cache only ever stores values the recursion would
/// recompute identically, so concurrent population is harmless.
#[derive(Debug)]
pub struct WittenKontsevich {
    scheme: Scheme,
    memo: RwLock<HashMap<Key, Rational>>,
}

impl WittenKontsevich {
    pub fn new(scheme: Scheme) -> Self {
        WittenKontsevich { scheme, memo: RwLock::new(HashMap::new()) }
    }

    /// Process-wide instance for `scheme`.
    pub fn global(scheme: Scheme) -> &'static WittenKontsevich {
        static DVV: OnceLock<WittenKontsevich> = OnceLock::new();
        static KDV: OnceLock<WittenKontsevich> = OnceLock::new();
        match scheme {
            Scheme::Dvv => DVV.get_or_init(|| WittenKontsevich::new(Scheme::Dvv)),
            Scheme::Kdv => KDV.get_or_init(|| WittenKontsevich::new(Scheme::Kdv)),
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// `⟨τ_{k1}⋯τ_{kn}⟩_g`; zero off the dimension gate and on unstable `(g, n)`.
    pub fn value(&self, genus: u32, ks: &[u32]) -> Rational {
        if !passes_gate(genus, ks) {
            return Rational::zero();
        }
        let mut sorted = ks.to_vec();
        sorted.sort_unstable();
        let key = (genus, sorted);
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = match self.scheme {
            Scheme::Dvv => self.dvv(genus, &key.1),
            Scheme::Kdv => self.kdv(genus, &key.1),
        };
        self.memo.write().unwrap().insert(key, v.clone());
        v
    }

    /// Snapshot of the cache, sorted by genus then insertions.
    pub fn entries(&self) -> Vec<(u32, Vec<u32>, Rational)> {
        let mut out: Vec<_> =
            self.memo.read().unwrap().iter().map(|((g, ks), v)| (*g, ks.clone(), v.clone())).collect();
        out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        out
    }

    pub fn cache_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn clear(&self) {
        self.memo.write().unwrap().clear();
    }

    fn dvv(&self, g: u32, ks: &[u32]) -> Rational {
        if let Some(v) = base_value(g, ks) {
            return v;
        }
        let n = ks.len();
        let m = ks[n - 1];
        debug_assert!(m >= 1);
        let k = (m - 1) as u64;
        let rest = &ks[..n - 1];
        let mut total = Rational::zero();

        for j in 0..rest.len() {
            let d = rest[j] as u64;
            let coef = ratio(odd_double_factorial(k + d + 1), odd_double_factorial(d));
            let mut next = rest.to_vec();
            next[j] += k as u32;
            total += coef * self.value(g, &next);
        }

        let half = rat(1, 2);
        for r in 0..k {
            let s = k - 1 - r;
            let coef = Rational::from_integer(odd_double_factorial(r + 1) * odd_double_factorial(s + 1)) * &half;
            let mut inner = Rational::zero();
            if g >= 1 {
                let mut next = rest.to_vec();
                next.push(r as u32);
                next.push(s as u32);
                inner += self.value(g - 1, &next);
            }
            for g1 in 0..=g {
                for (mult, i, j) in splits(rest) {
                    let mut left = i;
                    left.push(r as u32);
                    if !passes_gate(g1, &left) {
                        continue;
                    }
                    let mut right = j;
                    right.push(s as u32);
                    let b = self.value(g - g1, &right);
                    if b.is_zero() {
                        continue;
                    }
                    inner += mult * self.value(g1, &left) * b;
                }
            }
            total += coef * inner;
        }
        total / Rational::from_integer(odd_double_factorial(k + 2))
    }

    fn kdv(&self, g: u32, ks: &[u32]) -> Rational {
        if let Some(v) = base_value(g, ks) {
            return v;
        }
        let n = ks.len();
        let stable_after_removal = is_stable(g, n - 1);
        if ks[0] == 0 && stable_after_removal {
            let rest = &ks[1..];
            return (0..rest.len()).filter(|&j| rest[j] > 0).map(|j| self.value(g, &lowered(rest, &[j]))).sum();
        }
        if let Some(pos) = ks.iter().position(|&k| k == 1) {
            if stable_after_removal {
                let mut rest = ks.to_vec();
                rest.remove(pos);
                return int(2 * g as i64 - 2 + rest.len() as i64) * self.value(g, &rest);
            }
        }
        // every insertion is at least 2, which forces g >= 2
        let m = ks[n - 1];
        let s = &ks[..n - 1];
        let big_n = m as i64 + 2;

        let mut r_sum = Rational::zero();
        let mut q_sum = Rational::zero();
        for j in 0..s.len() {
            let mut once = lowered(s, &[j]);
            once.push(m + 1);
            r_sum += self.value(g, &once);
            for l in 0..s.len() {
                let mut twice = lowered(s, &[j, l]);
                twice.push(m + 2);
                q_sum += self.value(g, &twice);
            }
        }

        let top = m + 1;
        let mut rest = Rational::zero();
        for g1 in 0..=g {
            let g2 = g - g1;
            for (mult, i, j) in splits(s) {
                let self_term = g2 == 0 && j.is_empty();
                if !self_term {
                    let b = self.value(g2, &with_zeros(&j, 3, None));
                    if !b.is_zero() {
                        rest += &mult * self.value(g1, &with_zeros(&i, 1, Some(top))) * b;
                    }
                }
                let b = self.value(g2, &with_zeros(&j, 2, None));
                if !b.is_zero() {
                    rest += int(2) * &mult * self.value(g1, &with_zeros(&i, 2, Some(top))) * b;
                }
            }
        }
        if g >= 1 {
            rest += rat(1, 4) * self.value(g - 1, &with_zeros(s, 4, Some(top)));
        }

        let lhs_known = int(2 * big_n + 1) * (int(2) * &r_sum + q_sum);
        (r_sum + rest - lhs_known) / int(2 * big_n)
    }
}

fn ratio(a: BigInt, b: BigInt) -> Rational {
    Rational::new(a, b)
}

fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

fn passes_gate(g: u32, ks: &[u32]) -> bool {
    let total: i64 = ks.iter().map(|&k| k as i64).sum();
    total == 3 * g as i64 - 3 + ks.len() as i64
}

/// The two base values and zero on unstable `(g, n)`; `None` means recurse.
fn base_value(g: u32, ks: &[u32]) -> Option<Rational> {
    if !is_stable(g, ks.len()) {
        return Some(Rational::zero());
    }
    match (g, ks) {
        (0, [0, 0, 0]) => Some(int(1)),
        (1, [1]) => Some(rat(1, 24)),
        _ => None,
    }
}

/// Copy of `ks` with each listed position decreased by one.
fn lowered(ks: &[u32], positions: &[usize]) -> Vec<u32> {
    let mut out = ks.to_vec();
    for &p in positions {
        out[p] -= 1;
    }
    out
}

fn with_zeros(ks: &[u32], zeros: usize, extra: Option<u32>) -> Vec<u32> {
    let mut out = ks.to_vec();
    out.extend(std::iter::repeat_n(0, zeros));
    out.extend(extra);
    out
}

/// Ordered splits `S = I ⊔ J` of the labeled points of a sorted multiset,
/// grouped by the multiset shape of `I` with the number of labeled splits as weight.
fn splits(s: &[u32]) -> Vec<(Rational, Vec<u32>, Vec<u32>)> {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &k in s {
        match groups.last_mut() {
            Some((v, c)) if *v == k => *c += 1,
            _ => groups.push((k, 1)),
        }
    }
    let mut out = vec![(Rational::from_integer(BigInt::from(1)), Vec::new(), Vec::new())];
    for &(v, c) in &groups {
        let mut next = Vec::with_capacity(out.len() * (c + 1));
        for (w, i, j) in &out {
            for take in 0..=c {
                let mut i2 = i.clone();
                let mut j2 = j.clone();
                i2.extend(std::iter::repeat_n(v, take));
                j2.extend(std::iter::repeat_n(v, c - take));
                next.push((w * Rational::from_integer(binomial(c as u64, take as u64)), i2, j2));
            }
        }
        out = next;
    }
    out
}

/// `⟨τ_{k1}⋯τ_{kn}⟩_g` from the shared Virasoro-scheme cache.
pub fn wk_point(genus: u32, ks: &[u32]) -> Rational {
    WittenKontsevich::global(Scheme::Dvv).value(genus, ks)
}

/// Genus-zero closed form `(n-3)! / ∏ k_i!`, zero off the gate.
pub fn genus0_point(ks: &[u32]) -> Result<Rational> {
    let n = ks.len();
    if n < 3 {
        return Err(Error::Parameter(format!("genus-zero closed form needs n >= 3, got {n}")));
    }
    if !passes_gate(0, ks) {
        return Ok(Rational::zero());
    }
    let den = ks.iter().fold(BigInt::from(1), |acc, &k| acc * factorial(k as u64));
    Ok(Rational::new(factorial(n as u64 - 3), den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(g: u32, ks: &[u32]) -> Rational {
        let a = WittenKontsevich::new(Scheme::Dvv).value(g, ks);
        let b = WittenKontsevich::new(Scheme::Kdv).value(g, ks);
        assert_eq!(a, b, "schemes disagree on g={g} {ks:?}");
        a
    }

    #[test]
    fn known_values() {
        assert_eq!(both(0, &[0, 0, 0]), int(1));
        assert_eq!(both(1, &[1]), rat(1, 24));
        assert_eq!(both(0, &[1, 0, 0, 0]), int(1));
        assert_eq!(both(1, &[1, 1]), rat(1, 24));
        assert_eq!(both(2, &[4]), rat(1, 1152));
        assert_eq!(both(2, &[2, 3]), rat(29, 5760));
        assert_eq!(both(2, &[2, 2, 2]), rat(7, 240));
        assert_eq!(both(3, &[7]), rat(1, 82944));
        assert_eq!(both(1, &[0]), Rational::zero());
        assert_eq!(both(1, &[]), Rational::zero());
    }

    #[test]
    fn genus_zero_closed_form() {
        assert_eq!(genus0_point(&[0, 0, 0]).unwrap(), int(1));
        assert_eq!(genus0_point(&[1, 1, 0, 0, 0]).unwrap(), int(2));
        assert_eq!(genus0_point(&[2, 0, 0, 0, 0]).unwrap(), int(1));
        assert_eq!(genus0_point(&[1, 0, 0]).unwrap(), Rational::zero());
        assert!(genus0_point(&[0, 0]).is_err());
    }

    #[test]
    fn split_weights_count_labeled_splits() {
        let total: Rational = splits(&[2, 2, 3]).into_iter().map(|(w, _, _)| w).sum();
        assert_eq!(total, int(8));
    }

    #[test]
    fn cache_is_transparent() {
        let wk = WittenKontsevich::new(Scheme::Dvv);
        let first = wk.value(2, &[3, 2, 2, 0]);
        wk.clear();
        assert_eq!(wk.value(2, &[0, 2, 3, 2]), first);
        assert!(wk.cache_len() > 0);
    }
}
