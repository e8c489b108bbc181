//! Realizability of a complex by weight data, decided by Fourier–Motzkin
//! elimination over exact rationals with strict/non-strict flags.
//!
//! The system for a complex `Δ` on `n` vertices is
//!
//! * `Σ_{i∈I} a_i <= 1` for every maximal face `I` with `|I| >= 2`,
//! * `Σ_{i∈I} a_i > 1` for every minimal non-face `I`,
//! * `0 < a_i <= 1` (or `a_i = 0` for vertices declared zero-weight),
//! * optionally the domain constraint for `(g, β)`.
//!
//! Since all variables are nonnegative, the maximal faces and minimal non-faces
//! imply the constraints for every other subset.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::vset::VertexSet;
use crate::weights::WeightData;

/// `coeffs · a < rhs` when `strict`, `coeffs · a <= rhs` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Constraint {
    coeffs: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

impl Constraint {
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn holds_trivially(&self) -> bool {
        if self.strict {
            self.rhs.is_positive()
        } else {
            !self.rhs.is_negative()
        }
    }

    /// Divides by the absolute value of the first nonzero coefficient.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }

    /// `-a_j < 0` or `-a_j <= 0`.
    fn is_sign_constraint(&self) -> bool {
        self.rhs.is_zero()
            && self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
            && self.coeffs.iter().any(|c| c.is_negative())
    }

    /// `self` is implied by `other` given that every variable is nonnegative.
    fn implied_by(&self, other: &Constraint) -> bool {
        if !self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b) {
            return false;
        }
        if self.strict && !other.strict {
            other.rhs < self.rhs
        } else {
            other.rhs <= self.rhs
        }
    }
}

/// Options for [`realize`].
#[derive(Debug, Clone)]
pub struct RealizeOptions {
    /// Vertices forced to weight zero; every other vertex gets a positive weight.
    pub zero_vertices: VertexSet,
    /// Also require membership in the admissible region for `(genus, beta)`.
    pub domain: Option<(u32, u32)>,
    /// Abort with a capacity error once the working system exceeds this many constraints.
    pub max_constraints: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { zero_vertices: VertexSet::EMPTY, domain: None, max_constraints: 200_000 }
    }
}

/// Outcome of a realizability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    /// Weights whose complex is the input complex.
    Feasible(Vec<Rational>),
    /// Elimination derived a contradictory constant inequality.
    Infeasible,
}

impl Realization {
    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Realization::Feasible(w) => Some(w),
            Realization::Infeasible => None,
        }
    }
}

/// Strictly positive realization, no domain condition.
pub fn realize(complex: &SimplicialComplex) -> Result<Realization> {
    realize_with(complex, &RealizeOptions::default())
}

pub fn realize_with(complex: &SimplicialComplex, opts: &RealizeOptions) -> Result<Realization> {
    let n = complex.vertex_count();
    if !complex.is_downward_closed() {
        return Err(Error::Parameter("complex is not downward closed".into()));
    }
    let zero = opts.zero_vertices;
    if !zero.is_subset_of(VertexSet::full(n)) {
        return Err(Error::Parameter("zero-weight vertex out of range".into()));
    }
    // subsets of the zero set always sum to 0 <= 1
    if VertexSet::all_subsets(n).skip(1).any(|s| s.is_subset_of(zero) && !complex.contains(s)) {
        return Ok(Realization::Infeasible);
    }
    let free: Vec<usize> = VertexSet::full(n).minus(zero).iter().collect();
    let m = free.len();
    let row = |s: VertexSet, scale: i64| -> Vec<Rational> {
        free.iter().map(|&v| if s.contains(v) { int(scale) } else { Rational::zero() }).collect()
    };

    let mut system = Vec::new();
    for f in complex.maximal_faces() {
        if f.len() >= 2 {
            system.push(Constraint { coeffs: row(f, 1), rhs: Rational::one(), strict: false });
        }
    }
    for s in complex.minimal_non_faces() {
        system.push(Constraint { coeffs: row(s, -1), rhs: -Rational::one(), strict: true });
    }
    for j in 0..m {
        let mut unit = vec![Rational::zero(); m];
        unit[j] = Rational::one();
        system.push(Constraint { coeffs: unit.clone(), rhs: Rational::one(), strict: false });
        unit[j] = -Rational::one();
        system.push(Constraint { coeffs: unit, rhs: Rational::zero(), strict: true });
    }
    match opts.domain {
        Some((0, 0)) => {
            system.push(Constraint { coeffs: vec![-Rational::one(); m], rhs: int(-2), strict: true });
        }
        Some((1, 0)) if m == 0 => return Ok(Realization::Infeasible),
        _ => {}
    }

    let mut stages: Vec<(usize, Vec<Constraint>)> = Vec::new();
    let mut current = simplify(system);
    let mut alive: Vec<usize> = (0..m).collect();
    while !alive.is_empty() {
        if current.iter().any(|c| c.is_constant() && !c.holds_trivially()) {
            return Ok(Realization::Infeasible);
        }
        let var = pick_variable(&current, &alive);
        alive.retain(|&v| v != var);
        let next = eliminate(&current, var);
        if next.len() > opts.max_constraints {
            return Err(Error::Capacity(format!(
                "Fourier–Motzkin system grew to {} constraints (limit {})",
                next.len(),
                opts.max_constraints
            )));
        }
        stages.push((var, current));
        current = simplify(next);
    }
    if current.iter().any(|c| !c.holds_trivially()) {
        return Ok(Realization::Infeasible);
    }

    let mut values = vec![Rational::zero(); m];
    for (var, system) in stages.iter().rev() {
        values[*var] = choose_value(system, *var, &values)?;
    }
    let mut weights = vec![Rational::zero(); n];
    for (j, &v) in free.iter().enumerate() {
        weights[v] = values[j].clone();
    }
    Ok(Realization::Feasible(weights))
}

/// Variable with the fewest positive×negative pairings among those still present.
fn pick_variable(system: &[Constraint], alive: &[usize]) -> usize {
    *alive
        .iter()
        .min_by_key(|&&v| {
            let pos = system.iter().filter(|c| c.coeffs[v].is_positive()).count();
            let neg = system.iter().filter(|c| c.coeffs[v].is_negative()).count();
            (pos * neg, v)
        })
        .unwrap()
}

fn eliminate(system: &[Constraint], var: usize) -> Vec<Constraint> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for c in system {
        if c.coeffs[var].is_positive() {
            pos.push(c);
        } else if c.coeffs[var].is_negative() {
            neg.push(c);
        } else {
            out.push(c.clone());
        }
    }
    for p in &pos {
        let pa = p.coeffs[var].clone();
        for q in &neg {
            let qa = -q.coeffs[var].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .enumerate()
                .map(|(i, (x, y))| if i == var { Rational::zero() } else { x / &pa + y / &qa })
                .collect();
            out.push(Constraint { coeffs, rhs: &p.rhs / &pa + &q.rhs / &qa, strict: p.strict || q.strict });
        }
    }
    out
}

/// Normalizes, keeps the tightest of parallel constraints, and drops constraints
/// implied coordinatewise by another one.
fn simplify(system: Vec<Constraint>) -> Vec<Constraint> {
    let mut by_direction: HashMap<Vec<Rational>, Constraint> = HashMap::new();
    let mut constants = Vec::new();
    for c in system.into_iter().map(Constraint::normalized) {
        if c.is_constant() {
            if !c.holds_trivially() {
                constants.push(c);
            }
            continue;
        }
        match by_direction.get_mut(&c.coeffs) {
            Some(existing) => {
                if c.rhs < existing.rhs || (c.rhs == existing.rhs && c.strict) {
                    *existing = c;
                }
            }
            None => {
                by_direction.insert(c.coeffs.clone(), c);
            }
        }
    }
    let mut list: Vec<Constraint> = by_direction.into_values().collect();
    list.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(a.rhs.cmp(&b.rhs)));
    let mut kept: Vec<Constraint> = Vec::with_capacity(list.len());
    for (i, c) in list.iter().enumerate() {
        // sign constraints justify the dominance test itself
        let redundant = !c.is_sign_constraint() && list.iter().enumerate().any(|(j, d)| j != i && c.implied_by(d));
        if !redundant {
            kept.push(c.clone());
        }
    }
    constants.extend(kept);
    constants
}

/// Picks a value for `var` satisfying every constraint of its stage, with the
/// variables eliminated later already fixed in `values`.
fn choose_value(system: &[Constraint], var: usize, values: &[Rational]) -> Result<Rational> {
    let mut lower: Option<(Rational, bool)> = None;
    let mut upper: Option<(Rational, bool)> = None;
    for c in system {
        let a = &c.coeffs[var];
        if a.is_zero() {
            continue;
        }
        let rest: Rational = c.coeffs.iter().enumerate().filter(|(i, _)| *i != var).map(|(i, x)| x * &values[i]).sum();
        let bound = (&c.rhs - rest) / a;
        if a.is_positive() {
            if upper.as_ref().is_none_or(|(u, s)| bound < *u || (bound == *u && c.strict && !s)) {
                upper = Some((bound, c.strict));
            }
        } else if lower.as_ref().is_none_or(|(l, s)| bound > *l || (bound == *l && c.strict && !s)) {
            lower = Some((bound, c.strict));
        }
    }
    let value = match (lower, upper) {
        (Some((l, ls)), Some((u, us))) => {
            if l < u {
                (l + u) / int(2)
            } else if l == u && !ls && !us {
                l
            } else {
                return Err(Error::Parameter("back-substitution found an empty interval".into()));
            }
        }
        (Some((l, _)), None) => l + Rational::one(),
        (None, Some((u, _))) => u - Rational::one(),
        (None, None) => Rational::zero(),
    };
    Ok(value)
}

/// Realization check that also returns the weight data for `(g, β)`.
pub fn realize_weights(complex: &SimplicialComplex, genus: u32, beta: u32) -> Result<Option<WeightData>> {
    let opts = RealizeOptions { domain: Some((genus, beta)), ..RealizeOptions::default() };
    match realize_with(complex, &opts)? {
        Realization::Feasible(w) => Ok(Some(WeightData::new(w, genus, beta)?)),
        Realization::Infeasible => Ok(None),
    }
}
