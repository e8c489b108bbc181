//! Seeded random instances and the verification suites built on them.
//!
//! Everything here is deterministic given the seed, so a failing case can be
//! reproduced from the report alone.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chambers::crossing_path;
use crate::complex::SimplicialComplex;
use crate::descend::{
    compositions, direct_difference, telescoped_difference, verify_cone_dilaton, verify_cone_divisor,
    verify_cone_string, verify_genpoly_wallcross, verify_symmetric, verify_wallcross, weighted_descendant, Equation,
    Insertion, WeightedQuery,
};
use crate::error::{Error, Result};
use crate::oracle::{genus0_point, ClassComb, ClassId, Scheme, TargetModel, WittenKontsevich};
use crate::rational::{int, rat, Rational};
use crate::vset::VertexSet;
use crate::weights::WeightData;

/// Common denominator of generated weights.
const WEIGHT_DENOMINATOR: i64 = 60;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive weights `m/60` in the domain for `(genus, 0)`.
pub fn random_positive_weights<R: Rng>(rng: &mut R, n: usize, genus: u32) -> WeightData {
    loop {
        let ws = (0..n).map(|_| rat(rng.random_range(1..=WEIGHT_DENOMINATOR), WEIGHT_DENOMINATOR)).collect();
        let w = WeightData::new(ws, genus, 0).expect("weights lie in (0,1]");
        if w.in_domain() {
            return w;
        }
    }
}

/// `(A, B)` with `A >= B` coordinatewise, both positive and in the domain.
pub fn random_dominating_pair<R: Rng>(rng: &mut R, n: usize, genus: u32) -> (WeightData, WeightData) {
    let b = random_positive_weights(rng, n, genus);
    let a = b
        .weights()
        .iter()
        .map(|x| {
            let room = (int(1) - x) * int(WEIGHT_DENOMINATOR);
            let steps = room.to_integer().try_into().unwrap_or(0i64);
            x + rat(rng.random_range(0..=steps), WEIGHT_DENOMINATOR)
        })
        .collect();
    (WeightData::new(a, genus, 0).expect("weights lie in (0,1]"), b)
}

/// A uniformly random composition of `total` into `n` nonnegative parts.
pub fn random_ks<R: Rng>(rng: &mut R, n: usize, total: i64) -> Vec<i64> {
    let mut ks = vec![0; n];
    if n == 0 {
        return ks;
    }
    for _ in 0..total.max(0) {
        ks[rng.random_range(0..n)] += 1;
    }
    ks
}

fn psis(ks: &[i64]) -> Vec<Insertion> {
    ks.iter().map(|&k| Insertion::psi(k)).collect()
}

fn smallest_n(genus: u32) -> usize {
    if genus == 0 {
        3
    } else {
        2
    }
}

/// Point-target gate total `3g - 3 + n`.
fn point_total(genus: u32, n: usize) -> i64 {
    3 * genus as i64 - 3 + n as i64
}

/// `pre` and `post = pre ∪ {σ}`, both realized along a crossing path.
#[derive(Debug, Clone)]
pub struct SimpleCrossing {
    pub genus: u32,
    pub pre: SimplicialComplex,
    pub post: SimplicialComplex,
    pub sigma: VertexSet,
    pub ks: Vec<i64>,
}

/// Crossings taken from paths between random dominating pairs. The psi
/// powers are resampled a few times in favour of `k_σ >= 0`, so that most
/// cases have a nonzero third term.
pub fn random_simple_crossings(seed: u64, count: usize, max_n: usize, max_g: u32) -> Result<Vec<SimpleCrossing>> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let genus = rng.random_range(0..=max_g);
        if max_n < smallest_n(genus) {
            return Err(Error::Parameter(format!("no crossings with n <= {max_n} at genus {genus}")));
        }
        let n = rng.random_range(smallest_n(genus)..=max_n);
        let (a, b) = random_dominating_pair(&mut rng, n, genus);
        let path = crossing_path(&a, &b, rng.random())?;
        if path.events.is_empty() {
            continue;
        }
        let complexes = path.complexes()?;
        let i = rng.random_range(0..path.events.len());
        let sigma = path.events[i].subset;
        let total = point_total(genus, n);
        let mut ks = random_ks(&mut rng, n, total);
        for _ in 0..4 {
            let k_sigma: i64 = sigma.iter().map(|v| ks[v]).sum::<i64>() - sigma.dim() as i64;
            if k_sigma >= 0 {
                break;
            }
            ks = random_ks(&mut rng, n, total);
        }
        out.push(SimpleCrossing { genus, pre: complexes[i].clone(), post: complexes[i + 1].clone(), sigma, ks });
    }
    Ok(out)
}

/// Outcome of one suite: how many cases ran and a description of each failure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

fn ks_text(ks: &[i64]) -> String {
    ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

/// The wall-crossing identity on random simple crossings.
pub fn wallcross_suite(seed: u64, count: usize, max_n: usize, max_g: u32) -> Result<SuiteReport> {
    let target = TargetModel::point();
    let mut report = SuiteReport::new("wallcross");
    for c in random_simple_crossings(seed, count, max_n, max_g)? {
        let r = verify_wallcross(&target, c.genus, &psis(&c.ks), &c.pre, &c.post)?;
        report.check(r.holds, || {
            format!(
                "g={} pre={} post={} ks={}: lhs={} post={} third={}",
                c.genus,
                c.pre,
                c.post,
                ks_text(&c.ks),
                r.lhs,
                r.post,
                r.third_term
            )
        });
    }
    Ok(report)
}

/// Along random crossing paths from `A` to `B`, the third terms telescope
/// to `⟨⋯⟩_B - ⟨⋯⟩_A`, which also equals the sum over partitions admissible
/// for `B` but not `A`.
pub fn path_suite(seed: u64, count: usize, max_n: usize, max_g: u32) -> Result<SuiteReport> {
    let target = TargetModel::point();
    let mut rng = rng_from_seed(seed);
    let mut report = SuiteReport::new("paths");
    while report.cases < count {
        let genus = rng.random_range(0..=max_g);
        let n = rng.random_range(smallest_n(genus)..=max_n.max(smallest_n(genus)));
        let (a, b) = random_dominating_pair(&mut rng, n, genus);
        let path = crossing_path(&a, &b, rng.random())?;
        let ks = random_ks(&mut rng, n, point_total(genus, n));
        let ins = psis(&ks);
        let ca = SimplicialComplex::from_weights(&a)?;
        let cb = SimplicialComplex::from_weights(&b)?;
        let wa = weighted_descendant(&target, &WeightedQuery::new(genus, ca.clone(), ins.clone())?)?;
        let wb = weighted_descendant(&target, &WeightedQuery::new(genus, cb.clone(), ins.clone())?)?;
        let telescoped = telescoped_difference(&target, genus, &ins, &path)?;
        let direct = direct_difference(&target, genus, &ins, &ca, &cb)?;
        let diff = &wb - &wa;
        report.check(telescoped == diff && direct == diff, || {
            format!("g={genus} A=({a}) B=({b}) ks={}: B-A={diff} telescoped={telescoped} direct={direct}", ks_text(&ks))
        });
    }
    Ok(report)
}

/// The integrated generating-polynomial form of the crossing identity, genus zero.
pub fn genpoly_suite(seed: u64, count: usize, max_n: usize) -> Result<SuiteReport> {
    let target = TargetModel::point();
    let mut report = SuiteReport::new("genpoly");
    for c in random_simple_crossings(seed, count, max_n, 0)? {
        let n = c.pre.vertex_count();
        let r = verify_genpoly_wallcross(&target, 0, &vec![ClassComb::unit(); n], &c.pre, &c.post)?;
        report.check(r.holds, || {
            format!("pre={} post={}: difference={} correction={}", c.pre, c.post, r.difference, r.correction)
        });
    }
    Ok(report)
}

/// Every `(g, r, n)` with `g <= max_g`, `1 <= n <= max_n`, `r <= n-1` whose
/// two symmetric weight vectors lie in the domain.
pub fn symmetric_parameters(max_g: u32, max_n: usize, beta: u32) -> Vec<(u32, usize, usize)> {
    let mut out = Vec::new();
    for g in 0..=max_g {
        for n in 1..=max_n {
            for r in 0..n {
                let ok = [n, n + 1].iter().all(|&m| {
                    WeightData::new(vec![rat(1, r as i64 + 1); m], g, beta).map(|w| w.in_domain()).unwrap_or(false)
                });
                if ok {
                    out.push((g, r, n));
                }
            }
        }
    }
    out
}

/// Symmetric dilaton or string equation for every valid `(g, r, n)` and
/// every gated choice of the first `n` psi powers.
pub fn symmetric_suite(equation: Equation, max_g: u32, max_n: usize) -> Result<SuiteReport> {
    let target = TargetModel::point();
    let last = match equation {
        Equation::Dilaton => 1,
        Equation::String => 0,
        Equation::Divisor(_) => {
            return Err(Error::Parameter("the divisor equation needs a formal target".into()));
        }
    };
    let mut report = SuiteReport::new(match equation {
        Equation::Dilaton => "symmetric-dilaton",
        _ => "symmetric-string",
    });
    for (g, r, n) in symmetric_parameters(max_g, max_n, 0) {
        let total = point_total(g, n + 1) - last;
        if total < 0 {
            continue;
        }
        for ks in compositions(total as u32, n) {
            let ks: Vec<i64> = ks.into_iter().map(i64::from).collect();
            let rep = verify_symmetric(&target, equation, g, r, &psis(&ks))?;
            report
                .check(rep.holds, || format!("g={g} r={r} n={n} ks={}: lhs={} rhs={}", ks_text(&ks), rep.lhs, rep.rhs));
        }
    }
    Ok(report)
}

/// Cone dilaton or string equation over random bases in the domain.
pub fn cone_suite(equation: Equation, seed: u64, count: usize, max_n: usize, max_g: u32) -> Result<SuiteReport> {
    let target = TargetModel::point();
    let mut rng = rng_from_seed(seed);
    let mut report = SuiteReport::new(match equation {
        Equation::Dilaton => "cone-dilaton",
        Equation::String => "cone-string",
        Equation::Divisor(_) => return Err(Error::Parameter("the divisor equation needs a formal target".into())),
    });
    let last = if equation == Equation::Dilaton { 1 } else { 0 };
    while report.cases < count {
        let genus = rng.random_range(0..=max_g);
        let lo = smallest_n(genus);
        if max_n < lo + 1 {
            return Err(Error::Parameter(format!("cone cases need n >= {}", lo + 1)));
        }
        let n = rng.random_range(lo..max_n);
        let base = SimplicialComplex::from_weights(&random_positive_weights(&mut rng, n, genus))?;
        let mut ks = random_ks(&mut rng, n, point_total(genus, n + 1) - last);
        ks.push(last);
        let q = WeightedQuery::point(genus, base.cone()?, &ks)?;
        let rep = match equation {
            Equation::Dilaton => verify_cone_dilaton(&target, &q)?,
            _ => verify_cone_string(&target, &q)?,
        };
        report
            .check(rep.holds, || format!("g={genus} base={base} ks={}: lhs={} rhs={}", ks_text(&ks), rep.lhs, rep.rhs));
    }
    Ok(report)
}

/// Cone and symmetric divisor equations on a formal target for every
/// assignment of basis classes and psi powers passing the gate.
pub fn divisor_suite(target: &TargetModel, divisor: ClassId, genus: u32, max_n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("divisor");
    let classes: Vec<(ClassId, i64)> = target.classes().iter().map(|(id, c)| (*id, c.degree)).collect();
    let required = |n: usize| (1 - genus as i64) * target.dim() + target.pairing() + point_total(genus, n);
    for (g, r, n) in symmetric_parameters(genus, max_n, target.beta()).into_iter().filter(|p| p.0 == genus) {
        for assignment in class_assignments(&classes, n) {
            let degree_sum: i64 = assignment.iter().map(|&i| classes[i].1).sum();
            let total = required(n + 1) - degree_sum - 1;
            if total < 0 {
                continue;
            }
            let ids: Vec<ClassId> = assignment.iter().map(|&i| classes[i].0).collect();
            for ks in compositions(total as u32, n) {
                let ins: Vec<Insertion> = ks.iter().zip(&ids).map(|(&k, &id)| Insertion::new(k as i64, id)).collect();
                let rep = verify_symmetric(target, Equation::Divisor(divisor), g, r, &ins)?;
                report.check(rep.holds, || {
                    format!("symmetric g={g} r={r} n={n} ks={ks:?} classes={ids:?}: lhs={} rhs={}", rep.lhs, rep.rhs)
                });
                let mut all = ins.clone();
                all.push(Insertion::new(0, divisor));
                let base = SimplicialComplex::skeleton(n, r)?;
                let q = WeightedQuery::new(g, base.cone()?, all)?;
                let rep = verify_cone_divisor(target, &q)?;
                report.check(rep.holds, || {
                    format!("cone over {base} ks={ks:?} classes={ids:?}: lhs={} rhs={}", rep.lhs, rep.rhs)
                });
            }
        }
    }
    Ok(report)
}

/// Every length-`n` tuple of indices into `classes`.
fn class_assignments(classes: &[(ClassId, i64)], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..classes.len()).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

/// Sorted psi-power multisets `(g, ks)` with `3g - 3 + n <= max_dim` on stable `(g, n)`.
pub fn oracle_keys(max_dim: i64) -> Vec<(u32, Vec<u32>)> {
    let mut out = Vec::new();
    let mut g = 0u32;
    while 3 * g as i64 - 3 <= max_dim {
        for n in 0usize.. {
            let d = point_total(g, n);
            if d > max_dim {
                break;
            }
            if d < 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for ks in multisets(d as u32, n) {
                out.push((g, ks));
            }
        }
        g += 1;
    }
    out
}

/// Nondecreasing length-`n` vectors summing to `total`.
fn multisets(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, n: usize, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let mut k = min;
        while k as u64 * n as u64 <= total as u64 {
            prefix.push(k);
            go(total - k, n - 1, k, prefix, out);
            prefix.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(total, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Oracle validation: both recursions agree on every key with
/// `3g - 3 + n <= max_dim`, every cached value satisfies string and dilaton
/// where the reduced space is stable, genus zero matches the closed form for
/// `n <= 10`, and `⟨τ_1⟩_1 = 1/24`.
pub fn oracle_suite(max_dim: i64) -> Result<SuiteReport> {
    let dvv = WittenKontsevich::new(Scheme::Dvv);
    let kdv = WittenKontsevich::new(Scheme::Kdv);
    let mut report = SuiteReport::new("oracle");

    for (g, ks) in oracle_keys(max_dim) {
        let a = dvv.value(g, &ks);
        let b = kdv.value(g, &ks);
        report.check(a == b, || format!("schemes disagree at g={g} {ks:?}: {a} vs {b}"));
    }

    for (g, ks, value) in dvv.entries() {
        let n = ks.len();
        if point_total(g, n) > max_dim || 2 * g as i64 - 2 + n as i64 - 1 <= 0 {
            continue;
        }
        if let Some(pos) = ks.iter().position(|&k| k == 0) {
            let mut rest = ks.clone();
            rest.remove(pos);
            let rhs: Rational = (0..rest.len())
                .filter(|&l| rest[l] > 0)
                .map(|l| {
                    let mut r = rest.clone();
                    r[l] -= 1;
                    dvv.value(g, &r)
                })
                .sum();
            report.check(value == rhs, || format!("string fails at g={g} {ks:?}: {value} vs {rhs}"));
        }
        if let Some(pos) = ks.iter().position(|&k| k == 1) {
            let mut rest = ks.clone();
            rest.remove(pos);
            let rhs = int(2 * g as i64 - 2 + rest.len() as i64) * dvv.value(g, &rest);
            report.check(value == rhs, || format!("dilaton fails at g={g} {ks:?}: {value} vs {rhs}"));
        }
    }

    for n in 3..=10usize {
        for ks in compositions(n as u32 - 3, n) {
            let a = dvv.value(0, &ks);
            let b = genus0_point(&ks)?;
            report.check(a == b, || format!("genus-zero closed form differs at {ks:?}: {a} vs {b}"));
        }
        // off-gate inputs vanish in both
        let off = vec![0u32; n];
        if n != 3 {
            report.check(dvv.value(0, &off).is_zero() && genus0_point(&off)?.is_zero(), || {
                format!("gate not enforced at {off:?}")
            });
        }
    }
    report.check(dvv.value(1, &[1]) == rat(1, 24), || "⟨τ_1⟩_1 differs from 1/24".into());
    Ok(report)
}

/// Merges several reports under one name.
pub fn combined(reports: Vec<SuiteReport>, name: &str) -> SuiteReport {
    let mut total = SuiteReport::new(name);
    for r in reports {
        total.merge(r);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_simple_crossings(9, 5, 6, 2).unwrap();
        let b = random_simple_crossings(9, 5, 6, 2).unwrap();
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!((x.genus, &x.pre, &x.post, x.sigma, &x.ks), (y.genus, &y.pre, &y.post, y.sigma, &y.ks));
            assert_eq!(crate::chambers::is_simple_crossing(&x.pre, &x.post), Some(x.sigma));
        }
    }

    #[test]
    fn key_enumeration() {
        assert_eq!(multisets(3, 2), vec![vec![0, 3], vec![1, 2]]);
        let keys = oracle_keys(1);
        assert!(keys.contains(&(0, vec![0, 0, 0])));
        assert!(keys.contains(&(0, vec![0, 0, 0, 1])));
        assert!(keys.contains(&(1, vec![1])));
        assert!(!keys.iter().any(|(g, ks)| *g == 1 && ks.is_empty()));
    }

    #[test]
    fn small_suites_pass() {
        assert!(wallcross_suite(1, 10, 5, 1).unwrap().passed());
        assert!(path_suite(2, 5, 5, 1).unwrap().passed());
        assert!(oracle_suite(5).unwrap().passed());
        assert!(cone_suite(Equation::Dilaton, 3, 5, 5, 2).unwrap().passed());
        assert!(cone_suite(Equation::String, 3, 5, 5, 2).unwrap().passed());
    }
}
