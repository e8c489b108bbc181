//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are `t1..tn` (0-based indices internally). Terms live in a map
//! from exponent vectors to nonzero coefficients, so structural equality is
//! polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The variable `t_{var+1}`.
    pub fn var(nvars: usize, var: usize) -> Result<Self> {
        check_var(nvars, var)?;
        let mut e = vec![0; nvars];
        e[var] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        Ok(p)
    }

    /// `Σ_{i ∈ vars} t_i`.
    pub fn linear_sum(nvars: usize, vars: &[usize]) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for &v in vars {
            p = p.add(&Self::var(nvars, v)?)?;
        }
        Ok(p)
    }

    /// Builds from raw terms; zero coefficients are dropped and repeats summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!(
                    "exponent vector of length {} in a {}-variable polynomial",
                    e.len(),
                    nvars
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Shape(format!("polynomials in {} and {} variables", self.nvars, other.nvars)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }

    /// Coefficient of `t^k`; zero when the monomial is absent.
    pub fn coefficient(&self, k: &[u32]) -> Result<Rational> {
        if k.len() != self.nvars {
            return Err(Error::Shape(format!(
                "exponent vector of length {} for a {}-variable polynomial",
                k.len(),
                self.nvars
            )));
        }
        Ok(self.terms.get(k).cloned().unwrap_or_else(Rational::zero))
    }

    /// Formal partial derivative in `var`.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        check_var(self.nvars, var)?;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * Rational::from_integer(BigInt::from(e[var])));
        }
        Ok(out)
    }

    /// Applies `t^j ↦ t^{j+1}/(j+1)` in `var` `times` times (no constants of integration).
    pub fn homogeneous_antiderivative(&self, var: usize, times: u32) -> Result<Self> {
        check_var(self.nvars, var)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for _ in 0..times {
                e2[var] += 1;
                c2 /= Rational::from_integer(BigInt::from(e2[var]));
            }
            terms.insert(e2, c2);
        }
        Ok(MultiPoly { nvars: self.nvars, terms })
    }

    /// Replaces every `t_var` by `Σ_{i ∈ replacement} t_i` and expands.
    pub fn substitute_sum(&self, var: usize, replacement: &[usize]) -> Result<Self> {
        check_var(self.nvars, var)?;
        for &i in replacement {
            check_var(self.nvars, i)?;
            if i == var {
                return Err(Error::Parameter(format!("t{} cannot be replaced by a sum containing itself", var + 1)));
            }
        }
        let sum = Self::linear_sum(self.nvars, replacement)?;
        let mut powers: Vec<MultiPoly> = vec![Self::one(self.nvars)];
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let d = e[var] as usize;
            while powers.len() <= d {
                let next = powers.last().unwrap().mul(&sum)?;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[var] = 0;
            for (pe, pc) in &powers[d].terms {
                let merged = rest.iter().zip(pe).map(|(x, y)| x + y).collect();
                out.add_term(merged, c * pc);
            }
        }
        Ok(out)
    }

    /// Renames variables into a space of `nvars` variables: old variable `i`
    /// becomes `map[i]`. Distinct old variables may share a target.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::Shape(format!("variable map of length {} for {} variables", map.len(), self.nvars)));
        }
        for &m in map {
            check_var(nvars, m)?;
        }
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                e2[map[i]] += x;
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Drops trailing variables that do not occur in any term.
    pub fn truncate_vars(&self, nvars: usize) -> Result<Self> {
        if nvars > self.nvars {
            return Err(Error::Shape(format!("cannot truncate {} variables to {}", self.nvars, nvars)));
        }
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            if e[nvars..].iter().any(|&x| x != 0) {
                return Err(Error::Parameter(format!("variable t{} still occurs in the polynomial", nvars + 1)));
            }
            out.add_term(e[..nvars].to_vec(), c.clone());
        }
        Ok(out)
    }

    /// Terms in display order: total degree descending, then exponents lexicographically descending.
    pub fn ordered_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_desc(a.0, b.0));
        v
    }
}

fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

fn check_var(nvars: usize, var: usize) -> Result<()> {
    if var >= nvars {
        return Err(Error::Shape(format!("variable t{} in a {}-variable polynomial", var + 1, nvars)));
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.ordered_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, x) })
                .collect();
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn t(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i).unwrap()
    }

    #[test]
    fn ring_operations() {
        let s = t(2, 0).add(&t(2, 1)).unwrap();
        assert_eq!(s.to_string(), "t1 + t2");
        assert_eq!(s.mul(&s).unwrap().to_string(), "t1^2 + 2*t1*t2 + t2^2");
        let d = t(2, 0).sub(&t(2, 1)).unwrap().scale(&rat(1, 2));
        assert_eq!(d.to_string(), "1/2*t1 - 1/2*t2");
        assert!(t(2, 0).add(&t(3, 0)).is_err());
        assert!(t(2, 0).sub(&t(2, 0)).unwrap().is_zero());
    }

    #[test]
    fn display_order_matches_graded_lex() {
        let p = MultiPoly::from_terms(
            3,
            vec![
                (vec![0, 0, 1], rat(-1, 2)),
                (vec![1, 1, 0], int(2)),
                (vec![2, 0, 0], int(1)),
                (vec![0, 0, 0], int(-3)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "t1^2 + 2*t1*t2 - 1/2*t3 - 3");
        assert_eq!(t(1, 0).neg().to_string(), "-t1");
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn coefficients_of_power_sums() {
        let s4 = MultiPoly::linear_sum(4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(s4.coefficient(&[1, 0, 0, 0]).unwrap(), int(1));
        let s5 = MultiPoly::linear_sum(5, &[0, 1, 2, 3, 4]).unwrap().pow(2);
        assert_eq!(s5.coefficient(&[1, 1, 0, 0, 0]).unwrap(), int(2));
        assert_eq!(MultiPoly::zero(3).coefficient(&[1, 2, 3]).unwrap(), int(0));
        assert!(s4.coefficient(&[1, 0]).is_err());
    }

    #[test]
    fn antiderivatives() {
        let one = MultiPoly::one(2);
        assert_eq!(one.homogeneous_antiderivative(0, 1).unwrap(), t(2, 0));
        let twice = t(2, 0).homogeneous_antiderivative(0, 2).unwrap();
        assert_eq!(twice, t(2, 0).pow(3).scale(&rat(1, 6)));
        let p = t(2, 0).mul(&t(2, 1)).unwrap();
        let q = p.homogeneous_antiderivative(1, 1).unwrap();
        assert_eq!(q.to_string(), "1/2*t1*t2^2");
        assert_eq!(p.homogeneous_antiderivative(1, 0).unwrap(), p);
    }

    #[test]
    fn substitution() {
        let sq = t(3, 2).pow(2);
        let r = sq.substitute_sum(2, &[0, 1]).unwrap();
        assert_eq!(r.to_string(), "t1^2 + 2*t1*t2 + t2^2");
        let c = MultiPoly::constant(3, rat(5, 3));
        assert_eq!(c.substitute_sum(0, &[1, 2]).unwrap(), c);
        let p = t(4, 0).mul(&t(4, 1)).unwrap();
        assert_eq!(p.substitute_sum(1, &[2, 3]).unwrap().to_string(), "t1*t3 + t1*t4");
        assert!(p.substitute_sum(1, &[1, 2]).is_err());
        assert!(p.substitute_sum(7, &[1]).is_err());
    }

    #[test]
    fn remap_and_truncate() {
        let p = t(2, 0).mul(&t(2, 1)).unwrap();
        let q = p.remap(3, &[2, 0]).unwrap();
        assert_eq!(q.to_string(), "t1*t3");
        assert!(q.truncate_vars(2).is_err());
        assert_eq!(t(3, 1).truncate_vars(2).unwrap(), t(2, 1));
    }
}
