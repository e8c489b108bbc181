//! Wall arrangements, chamber signatures and straight-line crossing paths.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::realize::{realize_with, Realization, RealizeOptions};
use crate::vset::VertexSet;
use crate::weights::{subset_sums, WeightData};

/// Largest `n` accepted by [`enumerate_chambers`].
pub const MAX_ENUMERATION_VERTICES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decomposition {
    /// Walls `Σ_I a_i = 1` with `|I| >= 2`.
    Fine,
    /// Walls with `|I| >= 3`.
    Coarse,
}

impl Decomposition {
    pub fn min_wall_size(self) -> usize {
        match self {
            Decomposition::Fine => 2,
            Decomposition::Coarse => 3,
        }
    }
}

impl FromStr for Decomposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fine" => Ok(Decomposition::Fine),
            "coarse" => Ok(Decomposition::Coarse),
            other => Err(Error::Parse(format!("unknown decomposition {other:?}"))),
        }
    }
}

/// The hyperplanes `Σ_{i∈I} a_i = 1` of one decomposition of `[0,1]^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallArrangement {
    n: usize,
    decomposition: Decomposition,
    walls: Vec<VertexSet>,
}

impl WallArrangement {
    pub fn new(n: usize, decomposition: Decomposition) -> Result<Self> {
        if n > crate::vset::MAX_VERTICES {
            return Err(Error::Capacity(format!("{n} vertices")));
        }
        let walls = VertexSet::all_subsets(n).filter(|s| s.len() >= decomposition.min_wall_size()).collect();
        Ok(WallArrangement { n, decomposition, walls })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn decomposition(&self) -> Decomposition {
        self.decomposition
    }

    pub fn walls(&self) -> &[VertexSet] {
        &self.walls
    }

    pub fn contains_wall(&self, s: VertexSet) -> bool {
        self.walls.binary_search(&s).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    #[serde(rename = "<=1")]
    AtMostOne,
    #[serde(rename = ">1")]
    AboveOne,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::AtMostOne => "<=1",
            Side::AboveOne => ">1",
        })
    }
}

/// Side of every wall of the decomposition on which `w` lies.
pub fn chamber_signature(w: &WeightData, decomposition: Decomposition) -> Result<BTreeMap<VertexSet, Side>> {
    let arrangement = WallArrangement::new(w.len(), decomposition)?;
    let sums = subset_sums(w.weights());
    Ok(arrangement
        .walls()
        .iter()
        .map(|&s| {
            let side = if sums[s.bits() as usize] <= Rational::one() { Side::AtMostOne } else { Side::AboveOne };
            (s, side)
        })
        .collect())
}

/// Same fine signature and same zero weights.
pub fn same_fine_chamber(a: &WeightData, b: &WeightData) -> Result<bool> {
    a.check_comparable(b)?;
    Ok(a.zero_set() == b.zero_set()
        && chamber_signature(a, Decomposition::Fine)? == chamber_signature(b, Decomposition::Fine)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Add,
    Remove,
}

/// Passage through the wall of `subset` at parameter `t` of a segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingEvent {
    pub subset: VertexSet,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub parameter: Rational,
    pub direction: Direction,
}

impl fmt::Display for CrossingEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = match self.direction {
            Direction::Add => "add",
            Direction::Remove => "remove",
        };
        write!(f, "t={} {} I={}", self.parameter, verb, self.subset)
    }
}

/// A segment between perturbed endpoints and the walls it crosses, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingPath {
    pub from: WeightData,
    pub to: WeightData,
    pub events: Vec<CrossingEvent>,
}

impl CrossingPath {
    /// `Δ` after each event, starting from the complex of `from`.
    pub fn complexes(&self) -> Result<Vec<SimplicialComplex>> {
        let mut current = SimplicialComplex::from_weights(&self.from)?;
        let mut out = vec![current.clone()];
        for e in &self.events {
            current = match e.direction {
                Direction::Add => current.with_face(e.subset)?,
                Direction::Remove => current.without_face(e.subset)?,
            };
            out.push(current.clone());
        }
        Ok(out)
    }
}

/// Walls whose side differs at the two ends, with their crossing parameters.
fn wall_events(a: &WeightData, b: &WeightData) -> Vec<CrossingEvent> {
    let one = Rational::one();
    let sa = subset_sums(a.weights());
    let sb = subset_sums(b.weights());
    let mut events = Vec::new();
    for s in VertexSet::all_subsets(a.len()).filter(|s| s.len() >= 2) {
        let (x, y) = (&sa[s.bits() as usize], &sb[s.bits() as usize]);
        let direction = match (*x > one, *y > one) {
            (true, false) => Direction::Add,
            (false, true) => Direction::Remove,
            _ => continue,
        };
        let parameter = (x - &one) / (x - y);
        events.push(CrossingEvent { subset: s, parameter, direction });
    }
    events.sort_by(|p, q| (&p.parameter, p.subset).cmp(&(&q.parameter, q.subset)));
    events
}

fn distinct_parameters(events: &[CrossingEvent]) -> bool {
    events.windows(2).all(|w| w[0].parameter != w[1].parameter)
}

/// Simple wall crossings met along the straight line from `a` to `b`.
///
/// Both endpoints are first pushed into the interiors of their fine chambers
/// with [`WeightData::perturb_generic`]; the endpoint `b` is re-perturbed
/// until no two walls are crossed at the same parameter.
pub fn crossing_path(a: &WeightData, b: &WeightData, seed: u64) -> Result<CrossingPath> {
    if !a.dominates(b)? {
        return Err(Error::Parameter(format!("({a}) does not dominate ({b})")));
    }
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Parameter("crossing paths need strictly positive weights".into()));
    }
    for w in [a, b] {
        if !w.in_domain() {
            return Err(Error::Domain(w.to_string()));
        }
    }
    let from = a.perturb_generic(seed, |_| true)?;
    let to = b.perturb_generic(seed, |cand| distinct_parameters(&wall_events(&from, cand)))?;
    let events = wall_events(&from, &to);
    Ok(CrossingPath { from, to, events })
}

/// `σ` when `after` is `before` with the single simplex `σ` added.
pub fn is_simple_crossing(before: &SimplicialComplex, after: &SimplicialComplex) -> Option<VertexSet> {
    if before.vertex_count() != after.vertex_count() || !after.is_downward_closed() {
        return None;
    }
    if before.faces().any(|f| !after.contains(f)) {
        return None;
    }
    let mut extra = after.faces().filter(|f| !before.contains(*f));
    let sigma = extra.next()?;
    extra.next().is_none().then_some(sigma)
}

/// A realizable complex together with weights exhibiting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberRecord {
    pub complex: SimplicialComplex,
    pub witness: WeightData,
}

/// Every chamber of the decomposition on positive weights of length `n <= 5`,
/// found by generating candidate complexes and testing each for realizability.
/// Coarse chambers are represented by their first fine chamber.
pub fn enumerate_chambers(n: usize, decomposition: Decomposition, genus: u32, beta: u32) -> Result<Vec<ChamberRecord>> {
    if n == 0 || n > MAX_ENUMERATION_VERTICES {
        return Err(Error::Capacity(format!(
            "chamber enumeration supports 1..={MAX_ENUMERATION_VERTICES} vertices, got {n}"
        )));
    }
    let candidates: Vec<VertexSet> = {
        let mut v: Vec<VertexSet> = VertexSet::all_subsets(n).filter(|s| s.len() >= 2).collect();
        v.sort_by_key(|s| (s.len(), s.bits()));
        v
    };
    let mut families = Vec::new();
    let mut chosen = BTreeSet::new();
    downward_closed_families(&candidates, 0, &mut chosen, &mut families);

    let opts = RealizeOptions { domain: Some((genus, beta)), ..RealizeOptions::default() };
    let mut seen_coarse = BTreeSet::new();
    let mut out = Vec::new();
    for family in families {
        let complex = SimplicialComplex::from_generators(n, family.iter().copied())?;
        let Realization::Feasible(w) = realize_with(&complex, &opts)? else {
            continue;
        };
        if decomposition == Decomposition::Coarse {
            let coarse: Vec<VertexSet> = family.iter().copied().filter(|s| s.len() >= 3).collect();
            if !seen_coarse.insert(coarse) {
                continue;
            }
        }
        out.push(ChamberRecord { complex, witness: WeightData::new(w, genus, beta)? });
    }
    Ok(out)
}

fn downward_closed_families(
    candidates: &[VertexSet],
    idx: usize,
    chosen: &mut BTreeSet<VertexSet>,
    out: &mut Vec<BTreeSet<VertexSet>>,
) {
    let Some(&s) = candidates.get(idx) else {
        out.push(chosen.clone());
        return;
    };
    downward_closed_families(candidates, idx + 1, chosen, out);
    let facets_present = s.len() == 2 || s.iter().all(|v| chosen.contains(&s.without(v)));
    if facets_present {
        chosen.insert(s);
        downward_closed_families(candidates, idx + 1, chosen, out);
        chosen.remove(&s);
    }
}
