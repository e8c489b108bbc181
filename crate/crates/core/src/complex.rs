//! Simplicial complexes on `{1..n}` stored as a face-membership bitset indexed
//! by subset mask, plus the set partitions whose blocks are faces.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};
use crate::weights::{subset_sums, WeightData};

/// Downward-closed family of nonempty subsets of `{1..n}` containing every vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    n: usize,
    bits: Vec<u64>,
}

/// Result of merging a face into a single vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub complex: SimplicialComplex,
    /// Old vertex index to new vertex index; every member of the merged set maps to `merged`.
    pub vertex_map: Vec<usize>,
    /// Index of the merged vertex in the new complex.
    pub merged: usize,
}

impl SimplicialComplex {
    fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Capacity(format!("{n} vertices, at most {MAX_VERTICES} supported")));
        }
        let words = (1usize << n).div_ceil(64);
        Ok(SimplicialComplex { n, bits: vec![0; words] })
    }

    fn insert(&mut self, s: VertexSet) {
        let m = s.bits() as usize;
        self.bits[m / 64] |= 1 << (m % 64);
    }

    /// The complex of faces `I` with `Σ_{i∈I} a_i <= 1`.
    pub fn from_weights(w: &WeightData) -> Result<Self> {
        let mut c = Self::empty(w.len())?;
        let sums = subset_sums(w.weights());
        for (mask, s) in sums.iter().enumerate().skip(1) {
            if *s <= crate::rational::Rational::one() {
                c.insert(VertexSet(mask as u32));
            }
        }
        debug_assert!(c.is_downward_closed());
        Ok(c)
    }

    /// The smallest complex containing all vertices and the given faces.
    pub fn from_generators<I>(n: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = VertexSet>,
    {
        let mut c = Self::empty(n)?;
        let full = VertexSet::full(n);
        for v in 0..n {
            c.insert(VertexSet::singleton(v));
        }
        for g in generators {
            if g.is_empty() || !g.is_subset_of(full) {
                return Err(Error::Parameter(format!("face {g} is not a nonempty subset of 1..{n}")));
            }
            // every nonempty submask of g
            let mut sub = g.bits();
            while sub != 0 {
                c.insert(VertexSet(sub));
                sub = (sub - 1) & g.bits();
            }
        }
        Ok(c)
    }

    /// Takes an explicit face list; it must already be downward closed and contain every vertex.
    pub fn from_faces<I>(n: usize, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = VertexSet>,
    {
        let mut c = Self::empty(n)?;
        let full = VertexSet::full(n);
        for f in faces {
            if f.is_empty() || !f.is_subset_of(full) {
                return Err(Error::Parameter(format!("face {f} is not a nonempty subset of 1..{n}")));
            }
            c.insert(f);
        }
        if !c.is_downward_closed() {
            return Err(Error::Parameter("face family is not downward closed".into()));
        }
        if (0..n).any(|v| !c.contains(VertexSet::singleton(v))) {
            return Err(Error::Parameter("every vertex must be a face".into()));
        }
        Ok(c)
    }

    /// Every subset with at most `r + 1` vertices.
    pub fn skeleton(n: usize, r: usize) -> Result<Self> {
        if n == 0 || r >= n {
            return Err(Error::Parameter(format!("skeleton needs 0 <= r <= n-1, got n={n}, r={r}")));
        }
        let mut c = Self::empty(n)?;
        for s in VertexSet::all_subsets(n).skip(1) {
            if s.len() <= r + 1 {
                c.insert(s);
            }
        }
        Ok(c)
    }

    /// `n` isolated vertices.
    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_generators(n, [])
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        let m = s.bits() as usize;
        if s.is_empty() || m >> self.n != 0 {
            return false;
        }
        self.bits[m / 64] >> (m % 64) & 1 == 1
    }

    /// Faces in increasing bitmask order.
    pub fn faces(&self) -> impl Iterator<Item = VertexSet> + '_ {
        VertexSet::all_subsets(self.n).skip(1).filter(move |s| self.contains(*s))
    }

    pub fn face_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_downward_closed(&self) -> bool {
        self.faces().all(|f| f.iter().all(|v| f.len() == 1 || self.contains(f.without(v))))
    }

    /// Faces not strictly contained in another face, sorted by their vertex lists.
    pub fn maximal_faces(&self) -> Vec<VertexSet> {
        let full = VertexSet::full(self.n);
        let mut out: Vec<VertexSet> =
            self.faces().filter(|f| full.minus(*f).iter().all(|v| !self.contains(f.with(v)))).collect();
        out.sort_by_key(|f| f.labels());
        out
    }

    /// Inclusion-minimal subsets that are not faces.
    pub fn minimal_non_faces(&self) -> Vec<VertexSet> {
        VertexSet::all_subsets(self.n)
            .skip(1)
            .filter(|s| !self.contains(*s) && s.iter().all(|v| s.len() == 1 || self.contains(s.without(v))))
            .collect()
    }

    /// Adds the apex `n+1` joined to every face.
    pub fn cone(&self) -> Result<Self> {
        let mut c = Self::empty(self.n + 1)?;
        let apex = VertexSet::singleton(self.n);
        c.insert(apex);
        for f in self.faces() {
            c.insert(f);
            c.insert(f.union(apex));
        }
        Ok(c)
    }

    /// Faces of `self` inside `vertices`, relabeled to `1..|vertices|` in order.
    pub fn induced(&self, vertices: VertexSet) -> Result<Self> {
        let idx: Vec<usize> = vertices.iter().collect();
        let relabel =
            |f: VertexSet| VertexSet::from_indices(f.iter().map(|v| idx.iter().position(|&x| x == v).unwrap()));
        let mut c = Self::empty(idx.len())?;
        for f in self.faces().filter(|f| f.is_subset_of(vertices)) {
            c.insert(relabel(f));
        }
        Ok(c)
    }

    /// `{τ : v ∉ τ, τ ∪ {v} ∈ Δ}` on the remaining vertices, relabeled in order.
    pub fn link(&self, v: usize) -> Result<Self> {
        if v >= self.n {
            return Err(Error::Parameter(format!("vertex {} out of range", v + 1)));
        }
        let rest = VertexSet::full(self.n).without(v);
        let idx: Vec<usize> = rest.iter().collect();
        let mut c = Self::empty(idx.len())?;
        for f in self.faces().filter(|f| f.contains(v) && f.len() > 1) {
            c.insert(VertexSet::from_indices(f.without(v).iter().map(|u| idx.iter().position(|&x| x == u).unwrap())));
        }
        Ok(c)
    }

    /// If `self` is the cone over its first `n-1` vertices, returns that base.
    pub fn cone_base(&self) -> Option<Self> {
        if self.n == 0 {
            return None;
        }
        let base = self.induced(VertexSet::full(self.n - 1)).ok()?;
        let cone = base.cone().ok()?;
        (cone == *self).then_some(base)
    }

    /// Merges the face `sigma` into one vertex placed at `min(sigma)`; faces
    /// disjoint from `sigma` survive unchanged and faces containing `sigma`
    /// become `(γ∖σ) ∪ {•}`.
    pub fn contract(&self, sigma: VertexSet) -> Result<Contraction> {
        if !self.contains(sigma) {
            return Err(Error::NotAFace(sigma.to_string()));
        }
        let (vertex_map, merged, m) = merge_map(self.n, sigma);
        let mut c = Self::empty(m)?;
        for f in self.faces() {
            if !f.intersects(sigma) {
                c.insert(map_set(f, &vertex_map));
            } else if sigma.is_subset_of(f) {
                c.insert(map_set(f.minus(sigma), &vertex_map).with(merged));
            }
        }
        Ok(Contraction { complex: c, vertex_map, merged })
    }

    /// Merges `sigma` (face or not) into an isolated vertex: the faces of `self`
    /// disjoint from `sigma` plus the new vertex. Same relabeling as [`contract`](Self::contract).
    pub fn collapse_isolated(&self, sigma: VertexSet) -> Result<Contraction> {
        if sigma.is_empty() || !sigma.is_subset_of(VertexSet::full(self.n)) {
            return Err(Error::Parameter(format!("{sigma} is not a nonempty vertex subset")));
        }
        let (vertex_map, merged, m) = merge_map(self.n, sigma);
        let mut c = Self::empty(m)?;
        c.insert(VertexSet::singleton(merged));
        for f in self.faces().filter(|f| !f.intersects(sigma)) {
            c.insert(map_set(f, &vertex_map));
        }
        Ok(Contraction { complex: c, vertex_map, merged })
    }

    /// `self ∪ {sigma}`; every facet of `sigma` must already be a face.
    pub fn with_face(&self, sigma: VertexSet) -> Result<Self> {
        if sigma.is_empty() || !sigma.is_subset_of(VertexSet::full(self.n)) {
            return Err(Error::Parameter(format!("{sigma} is not a nonempty vertex subset")));
        }
        if sigma.len() > 1 && sigma.iter().any(|v| !self.contains(sigma.without(v))) {
            return Err(Error::Parameter(format!("adding {sigma} would break downward closure")));
        }
        let mut c = self.clone();
        c.insert(sigma);
        Ok(c)
    }

    /// `self ∖ {sigma}` for a maximal face `sigma` that is not a vertex.
    pub fn without_face(&self, sigma: VertexSet) -> Result<Self> {
        if !self.contains(sigma) {
            return Err(Error::NotAFace(sigma.to_string()));
        }
        if sigma.len() < 2 || self.faces().any(|f| f != sigma && sigma.is_subset_of(f)) {
            return Err(Error::Parameter(format!("removing {sigma} would break downward closure")));
        }
        let mut c = self.clone();
        let m = sigma.bits() as usize;
        c.bits[m / 64] &= !(1 << (m % 64));
        Ok(c)
    }

    /// Set partitions of `{1..n}` all of whose blocks are faces.
    pub fn admissible_partitions(&self) -> AdmissiblePartitions<'_> {
        AdmissiblePartitions::new(self)
    }

    /// Parses `1,2,345` (single-digit labels) or `[3,4,5],[1]` maximal-face lists.
    /// The vertex count defaults to the largest label mentioned.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let faces = parse_face_list(text)?;
        let max_label = faces.iter().flat_map(|f| f.iter()).max().map_or(0, |v| v + 1);
        let n = n.unwrap_or(max_label);
        if max_label > n {
            return Err(Error::Parse(format!("vertex {max_label} exceeds vertex count {n}")));
        }
        Self::from_generators(n, faces)
    }
}

fn merge_map(n: usize, sigma: VertexSet) -> (Vec<usize>, usize, usize) {
    let keep = sigma.min().unwrap();
    let mut map = vec![0; n];
    let mut next = 0;
    let mut merged = 0;
    for (v, slot) in map.iter_mut().enumerate() {
        if sigma.contains(v) && v != keep {
            continue;
        }
        if v == keep {
            merged = next;
        }
        *slot = next;
        next += 1;
    }
    for v in sigma.iter() {
        map[v] = merged;
    }
    (map, merged, next)
}

fn map_set(s: VertexSet, map: &[usize]) -> VertexSet {
    VertexSet::from_indices(s.iter().map(|v| map[v]))
}

fn parse_face_list(text: &str) -> Result<Vec<VertexSet>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let bad = |what: &str| Error::Parse(format!("{what} in face list {text:?}"));
    let label = |s: &str| -> Result<usize> {
        let v: usize = s.trim().parse().map_err(|_| bad("bad vertex label"))?;
        if v == 0 || v > MAX_VERTICES {
            return Err(bad("vertex label out of range"));
        }
        Ok(v - 1)
    };
    let mut faces = Vec::new();
    if text.contains('[') {
        let mut rest = text;
        while let Some(open) = rest.find('[') {
            if !rest[..open].trim().trim_matches(',').trim().is_empty() {
                return Err(bad("stray characters"));
            }
            let close = rest[open..].find(']').ok_or_else(|| bad("unclosed bracket"))? + open;
            let inner = &rest[open + 1..close];
            let verts: Result<Vec<usize>> = inner.split(',').map(label).collect();
            faces.push(VertexSet::from_indices(verts?));
            rest = &rest[close + 1..];
        }
        if !rest.trim().trim_matches(',').trim().is_empty() {
            return Err(bad("stray characters"));
        }
    } else {
        for item in text.split(',') {
            let item = item.trim();
            if item.is_empty() || !item.bytes().all(|b| (b'1'..=b'9').contains(&b)) {
                return Err(bad("bad face"));
            }
            faces.push(VertexSet::from_indices(item.bytes().map(|b| (b - b'1') as usize)));
        }
    }
    Ok(faces)
}

fn format_face(f: VertexSet, n: usize) -> String {
    if n <= 9 {
        f.labels().iter().map(|v| v.to_string()).collect()
    } else {
        let labels: Vec<String> = f.labels().iter().map(|v| v.to_string()).collect();
        format!("[{}]", labels.join(","))
    }
}

impl fmt::Display for SimplicialComplex {
    /// Comma-separated maximal faces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.maximal_faces().into_iter().map(|s| format_face(s, self.n)).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(n={}; {})", self.n, self)
    }
}

/// A partition of `{1..n}` into blocks, sorted by smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<VertexSet>,
}

impl SetPartition {
    pub fn new(n: usize, mut blocks: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::EMPTY;
        for b in &blocks {
            if b.is_empty() || b.intersects(seen) {
                return Err(Error::Parameter("blocks must be nonempty and disjoint".into()));
            }
            seen = seen.union(*b);
        }
        if seen != VertexSet::full(n) {
            return Err(Error::Parameter(format!("blocks do not cover 1..{n}")));
        }
        blocks.sort_by_key(|b| VertexSet::min(*b));
        Ok(SetPartition { n, blocks })
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `Σ (|block| - 1) = n - |blocks|`.
    pub fn dim(&self) -> usize {
        self.n - self.blocks.len()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

struct Frame {
    remaining: u32,
    first: u32,
    rest: u32,
    /// Next submask of `rest` to try; `None` once exhausted.
    next: Option<u32>,
    chosen: u32,
}

impl Frame {
    fn new(remaining: u32) -> Self {
        let first = remaining & remaining.wrapping_neg();
        Frame { remaining, first, rest: remaining & !first, next: Some(0), chosen: 0 }
    }
}

/// Depth-first enumeration: the smallest unassigned vertex is placed in a block
/// chosen among faces containing it, candidates in increasing bitmask order.
/// Inadmissible blocks are never extended.
pub struct AdmissiblePartitions<'a> {
    complex: &'a SimplicialComplex,
    stack: Vec<Frame>,
    empty_pending: bool,
}

impl<'a> AdmissiblePartitions<'a> {
    fn new(complex: &'a SimplicialComplex) -> Self {
        let n = complex.vertex_count();
        let stack = if n == 0 { Vec::new() } else { vec![Frame::new(VertexSet::full(n).bits())] };
        AdmissiblePartitions { complex, stack, empty_pending: n == 0 }
    }
}

impl Iterator for AdmissiblePartitions<'_> {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.empty_pending {
            self.empty_pending = false;
            return Some(SetPartition { n: 0, blocks: Vec::new() });
        }
        loop {
            let top = self.stack.last_mut()?;
            let Some(sub) = top.next else {
                self.stack.pop();
                continue;
            };
            let succ = (sub | !top.rest).wrapping_add(1) & top.rest;
            top.next = (succ != 0).then_some(succ);
            let block = top.first | sub;
            if !self.complex.contains(VertexSet(block)) {
                continue;
            }
            top.chosen = block;
            let left = top.remaining & !block;
            if left == 0 {
                let blocks = self.stack.iter().map(|f| VertexSet(f.chosen)).collect();
                return Some(SetPartition { n: self.complex.vertex_count(), blocks });
            }
            self.stack.push(Frame::new(left));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(text: &str, g: u32) -> SimplicialComplex {
        SimplicialComplex::from_weights(&WeightData::parse(text, g, 0).unwrap()).unwrap()
    }

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_indices(labels.iter().map(|v| v - 1))
    }

    #[test]
    fn named_families() {
        assert_eq!(cx("1,1,1,1", 0).to_string(), "1,2,3,4");
        assert_eq!(cx("1/3,1/3,1/3,1/3", 2).to_string(), "123,124,134,234");
        assert_eq!(cx("1/3^4", 2), SimplicialComplex::skeleton(4, 2).unwrap());
        assert_eq!(cx("1,1,1/10,1/10,1/10", 0).to_string(), "1,2,345");
        assert_eq!(cx("1,2/5,2/5,2/5", 0).to_string(), "1,23,24,34");
    }

    #[test]
    fn skeletons() {
        assert_eq!(SimplicialComplex::skeleton(4, 0).unwrap(), SimplicialComplex::discrete(4).unwrap());
        assert_eq!(SimplicialComplex::skeleton(4, 3).unwrap().to_string(), "1234");
        let s = SimplicialComplex::skeleton(5, 1).unwrap();
        assert_eq!(s.face_count(), 5 + 10);
        assert!(SimplicialComplex::skeleton(4, 4).is_err());
    }

    #[test]
    fn cone_examples() {
        let two = SimplicialComplex::discrete(2).unwrap();
        assert_eq!(two.cone().unwrap().to_string(), "13,23");
        assert_eq!(SimplicialComplex::discrete(1).unwrap().cone().unwrap().to_string(), "12");
        let c = cx("1,2/5,2/5,2/5", 0);
        let k = c.cone().unwrap();
        assert_eq!(k.induced(VertexSet::full(4)).unwrap(), c);
        assert_eq!(k.link(4).unwrap(), c);
        assert_eq!(k.cone_base().unwrap(), c);
        assert!(c.cone_base().is_none());
        assert!(SimplicialComplex::skeleton(16, 0).unwrap().cone().is_err());
    }

    #[test]
    fn contraction_examples() {
        let c = cx("1,1,1/3,1/3,1/3", 2);
        let k = c.contract(vs(&[3, 4, 5])).unwrap();
        assert_eq!(k.complex, SimplicialComplex::discrete(3).unwrap());
        assert_eq!(k.merged, 2);
        assert_eq!(k.vertex_map, vec![0, 1, 2, 2, 2]);

        let full = SimplicialComplex::skeleton(3, 2).unwrap();
        let k = full.contract(VertexSet::full(3)).unwrap();
        assert_eq!(k.complex.vertex_count(), 1);

        let c = cx("1,2/5,2/5,2/5", 0);
        let k = c.contract(vs(&[3])).unwrap();
        assert_eq!(k.complex, c);
        assert!(c.contract(vs(&[2, 3, 4])).is_err());

        // relabeling: merged vertex takes min(σ), the rest keep their order
        let c = SimplicialComplex::skeleton(4, 1).unwrap();
        let k = c.contract(vs(&[2, 4])).unwrap();
        assert_eq!(k.vertex_map, vec![0, 1, 2, 1]);
        assert_eq!(k.complex.to_string(), "13,2");
    }

    #[test]
    fn collapse_isolated_of_non_face() {
        let c = SimplicialComplex::skeleton(4, 1).unwrap();
        let k = c.collapse_isolated(vs(&[1, 2, 4])).unwrap();
        assert_eq!(k.complex.to_string(), "1,2");
        assert_eq!(k.merged, 0);
    }

    #[test]
    fn partitions() {
        assert_eq!(SimplicialComplex::discrete(5).unwrap().admissible_partitions().count(), 1);
        assert_eq!(SimplicialComplex::skeleton(3, 2).unwrap().admissible_partitions().count(), 5);
        let c = cx("1,2/5,2/5,2/5", 0);
        let parts: Vec<String> = c.admissible_partitions().map(|p| p.to_string()).collect();
        assert_eq!(parts, vec!["{1}{2}{3}{4}", "{1}{2}{3,4}", "{1}{2,3}{4}", "{1}{2,4}{3}"]);
        let empty = SimplicialComplex::discrete(0).unwrap();
        assert_eq!(empty.admissible_partitions().count(), 1);
    }

    #[test]
    fn partition_dims() {
        let p = SetPartition::new(5, vec![vs(&[2, 5]), vs(&[1, 3, 4])]).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.blocks()[0], vs(&[1, 3, 4]));
        assert!(SetPartition::new(3, vec![vs(&[1, 2])]).is_err());
        assert!(SetPartition::new(3, vec![vs(&[1, 2]), vs(&[2, 3])]).is_err());
    }

    #[test]
    fn text_format() {
        let c = SimplicialComplex::parse("1,2,345", None).unwrap();
        assert_eq!(c, cx("1,1,1/10,1/10,1/10", 0));
        let d = SimplicialComplex::parse("[3,4,5],[1],[2]", None).unwrap();
        assert_eq!(c, d);
        let big = SimplicialComplex::parse("[1,10]", Some(11)).unwrap();
        assert_eq!(big.to_string(), "[1,10],[2],[3],[4],[5],[6],[7],[8],[9],[11]");
        assert!(SimplicialComplex::parse("12,x", None).is_err());
        assert!(SimplicialComplex::parse("[1,2", None).is_err());
        assert!(SimplicialComplex::parse("123", Some(2)).is_err());
    }

    #[test]
    fn explicit_faces_are_validated() {
        assert!(SimplicialComplex::from_faces(2, [vs(&[1]), vs(&[1, 2])]).is_err());
        assert!(SimplicialComplex::from_faces(2, [vs(&[1]), vs(&[2]), vs(&[1, 2])]).is_ok());
        let c = SimplicialComplex::parse("12,34", None).unwrap();
        assert_eq!(c.minimal_non_faces(), vec![vs(&[1, 3]), vs(&[2, 3]), vs(&[1, 4]), vs(&[2, 4])]);
    }
}
