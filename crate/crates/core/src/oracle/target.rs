//! Target models: the point, or a formal graded ring with a table of
//! unweighted descendants, plus the text format they are loaded from.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::wk::wk_point;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// Identifier of a basis class. Id `1` is always the unit.
pub type ClassId = u32;

pub const UNIT: ClassId = 1;

/// A rational linear combination of basis classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassComb(BTreeMap<ClassId, Rational>);

impl ClassComb {
    pub fn zero() -> Self {
        ClassComb(BTreeMap::new())
    }

    pub fn basis(id: ClassId) -> Self {
        let mut m = BTreeMap::new();
        m.insert(id, Rational::one());
        ClassComb(m)
    }

    pub fn unit() -> Self {
        Self::basis(UNIT)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ClassId, &Rational)> {
        self.0.iter().map(|(id, c)| (*id, c))
    }

    pub fn add_scaled(&mut self, id: ClassId, c: &Rational) {
        let entry = self.0.entry(id).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&id);
        }
    }

    /// The single basis class when the combination is one class with coefficient one.
    pub fn as_basis(&self) -> Option<ClassId> {
        match self.0.iter().next() {
            Some((id, c)) if self.0.len() == 1 && c.is_one() => Some(*id),
            _ => None,
        }
    }
}

impl fmt::Display for ClassComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(id, c)| if c.is_one() { format!("{id}") } else { format!("{c}*{id}") }).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Canonical key of an unweighted descendant: insertions sorted as a multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescendantKey {
    genus: u32,
    insertions: Vec<(i64, ClassId)>,
}

impl DescendantKey {
    pub fn new(genus: u32, mut insertions: Vec<(i64, ClassId)>) -> Self {
        insertions.sort_unstable();
        DescendantKey { genus, insertions }
    }

    pub fn point(genus: u32, ks: &[i64]) -> Self {
        Self::new(genus, ks.iter().map(|&k| (k, UNIT)).collect())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn insertions(&self) -> &[(i64, ClassId)] {
        &self.insertions
    }
}

impl fmt::Display for DescendantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} ;", self.genus)?;
        for (k, id) in &self.insertions {
            write!(f, " ({k},{id})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Point,
    Formal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub name: String,
    pub degree: i64,
}

/// Either the point, or a formal target `V` described by its cohomology ring
/// and a table of unweighted descendants treated as ground truth.
#[derive(Debug, Clone)]
pub struct TargetModel {
    kind: TargetKind,
    dim: i64,
    pairing: i64,
    beta: u32,
    classes: BTreeMap<ClassId, ClassInfo>,
    products: HashMap<(ClassId, ClassId), ClassComb>,
    table: HashMap<DescendantKey, Rational>,
    divisors: BTreeMap<ClassId, i64>,
}

impl TargetModel {
    pub fn point() -> Self {
        let mut m = Self::bare(TargetKind::Point, 0, 0, 0);
        m.classes.insert(UNIT, ClassInfo { name: "1".into(), degree: 0 });
        m
    }

    /// A formal target of dimension `dim` with `-K_V·β = pairing`, holding only the unit.
    pub fn formal(dim: i64, pairing: i64, beta: u32) -> Result<Self> {
        if dim < 0 {
            return Err(Error::Parameter(format!("target dimension {dim} is negative")));
        }
        let mut m = Self::bare(TargetKind::Formal, dim, pairing, beta);
        m.classes.insert(UNIT, ClassInfo { name: "1".into(), degree: 0 });
        Ok(m)
    }

    fn bare(kind: TargetKind, dim: i64, pairing: i64, beta: u32) -> Self {
        TargetModel {
            kind,
            dim,
            pairing,
            beta,
            classes: BTreeMap::new(),
            products: HashMap::new(),
            table: HashMap::new(),
            divisors: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn pairing(&self) -> i64 {
        self.pairing
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn classes(&self) -> &BTreeMap<ClassId, ClassInfo> {
        &self.classes
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub fn degree(&self, id: ClassId) -> Result<i64> {
        self.classes.get(&id).map(|c| c.degree).ok_or(Error::UnknownClass(id))
    }

    pub fn class_by_name(&self, name: &str) -> Option<ClassId> {
        self.classes.iter().find(|(_, c)| c.name == name).map(|(id, _)| *id)
    }

    fn require_formal(&self, what: &str) -> Result<()> {
        if self.kind == TargetKind::Point {
            return Err(Error::Parameter(format!("the point target has no {what}")));
        }
        Ok(())
    }

    pub fn add_class(&mut self, id: ClassId, name: &str, degree: i64) -> Result<()> {
        self.require_formal("extra classes")?;
        if id == UNIT {
            if degree != 0 {
                return Err(Error::Parameter("class 1 is the unit and must have degree 0".into()));
            }
            self.classes.insert(UNIT, ClassInfo { name: name.into(), degree });
            return Ok(());
        }
        if self.classes.contains_key(&id) {
            return Err(Error::Parameter(format!("duplicate class id {id}")));
        }
        if degree < 0 || degree > self.dim {
            return Err(Error::Parameter(format!("class {id} has degree {degree} outside 0..={}", self.dim)));
        }
        self.classes.insert(id, ClassInfo { name: name.into(), degree });
        Ok(())
    }

    /// Declares `a·b`; the symmetric entry is filled in, and a conflicting
    /// earlier declaration is an error.
    pub fn add_product(&mut self, a: ClassId, b: ClassId, value: ClassComb) -> Result<()> {
        self.require_formal("product table")?;
        let target_degree = self.degree(a)? + self.degree(b)?;
        for (id, _) in value.terms() {
            let d = self.degree(id)?;
            if d != target_degree {
                return Err(Error::Parameter(format!(
                    "product {a}*{b} has degree {target_degree} but term class {id} has degree {d}"
                )));
            }
        }
        if a == UNIT || b == UNIT {
            let other = if a == UNIT { b } else { a };
            if value != ClassComb::basis(other) {
                return Err(Error::Parameter(format!("unit product 1*{other} must equal {other}")));
            }
            return Ok(());
        }
        let key = (a.min(b), a.max(b));
        if let Some(old) = self.products.get(&key) {
            if *old != value {
                return Err(Error::Parameter(format!("conflicting declarations of {a}*{b}")));
            }
        }
        self.products.insert(key, value);
        Ok(())
    }

    /// Records a table entry; it must pass the dimension gate unless zero.
    pub fn add_descendant(&mut self, key: DescendantKey, value: Rational) -> Result<()> {
        self.require_formal("descendant table")?;
        for (k, id) in key.insertions() {
            self.degree(*id)?;
            if *k < 0 {
                return Err(Error::Parameter(format!("negative descendant index in {key}")));
            }
        }
        if !value.is_zero() && !self.passes_gate(&key)? {
            return Err(Error::Parameter(format!("entry {key} fails the dimension gate")));
        }
        if let Some(old) = self.table.get(&key) {
            if *old != value {
                return Err(Error::Parameter(format!("conflicting values for {key}")));
            }
        }
        self.table.insert(key, value);
        Ok(())
    }

    /// Records `∫_β D` for a degree-one class `D`.
    pub fn set_divisor_pairing(&mut self, id: ClassId, value: i64) -> Result<()> {
        self.require_formal("divisor pairings")?;
        if self.degree(id)? != 1 {
            return Err(Error::Parameter(format!("class {id} is not a divisor class")));
        }
        self.divisors.insert(id, value);
        Ok(())
    }

    pub fn divisor_pairing(&self, id: ClassId) -> Result<i64> {
        self.require_formal("divisor classes")?;
        self.divisors
            .get(&id)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("no pairing ∫_β D supplied for class {id}")))
    }

    /// `Σ (k_i + deg γ_i) = (1-g) dim V - K_V·β + 3g - 3 + n`.
    pub fn passes_gate(&self, key: &DescendantKey) -> Result<bool> {
        let mut total = 0i64;
        for (k, id) in key.insertions() {
            total += k + self.degree(*id)?;
        }
        let g = key.genus() as i64;
        let n = key.insertions().len() as i64;
        Ok(total == (1 - g) * self.dim + self.pairing + 3 * g - 3 + n)
    }

    /// The unweighted descendant named by `key`.
    pub fn unweighted_lookup(&self, key: &DescendantKey) -> Result<Rational> {
        for (_, id) in key.insertions() {
            self.degree(*id)?;
        }
        if key.insertions().iter().any(|(k, _)| *k < 0) {
            return Ok(Rational::zero());
        }
        match self.kind {
            TargetKind::Point => {
                let ks: Vec<u32> = key.insertions().iter().map(|(k, _)| *k as u32).collect();
                Ok(wk_point(key.genus(), &ks))
            }
            TargetKind::Formal => {
                if !self.passes_gate(key)? {
                    return Ok(Rational::zero());
                }
                self.table.get(key).cloned().ok_or_else(|| Error::OracleIncomplete(key.to_string()))
            }
        }
    }

    fn basis_product(&self, a: ClassId, b: ClassId) -> Result<ClassComb> {
        self.degree(a)?;
        self.degree(b)?;
        if a == UNIT {
            return Ok(ClassComb::basis(b));
        }
        if b == UNIT {
            return Ok(ClassComb::basis(a));
        }
        self.products.get(&(a.min(b), a.max(b))).cloned().ok_or(Error::MissingProduct(a, b))
    }

    pub fn multiply(&self, x: &ClassComb, y: &ClassComb) -> Result<ClassComb> {
        let mut out = ClassComb::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let coef = ca * cb;
                for (c, cc) in self.basis_product(a, b)?.terms() {
                    out.add_scaled(c, &(&coef * cc));
                }
            }
        }
        Ok(out)
    }

    /// Left fold of the ring product over `factors`; the empty product is the unit.
    pub fn ring_product<'a, I>(&self, factors: I) -> Result<ClassComb>
    where
        I: IntoIterator<Item = &'a ClassComb>,
    {
        let mut acc = ClassComb::unit();
        for f in factors {
            for (id, _) in f.terms() {
                self.degree(id)?;
            }
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// Product of basis classes given by id.
    pub fn ring_product_ids(&self, ids: &[ClassId]) -> Result<ClassComb> {
        let combs: Vec<ClassComb> = ids.iter().map(|&id| ClassComb::basis(id)).collect();
        self.ring_product(&combs)
    }
}

/// Parses a target document.
///
/// ```text
/// [target]
/// kind=formal
/// dim=1
/// pairing=2
/// beta=1
/// [classes]
/// 2 H 1
/// [products]
/// 2*2 = 0
/// [descendants]
/// g=0 ; (0,2) (0,2) ; 1
/// [divisors]
/// 2 = 1
/// ```
pub fn load_target(text: &str) -> Result<TargetModel> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Target,
        Classes,
        Products,
        Descendants,
        Divisors,
    }
    let mut section = Section::None;
    let mut header: BTreeMap<String, String> = BTreeMap::new();
    let mut products = Vec::new();
    let mut descendants = Vec::new();
    let mut divisors = Vec::new();
    let mut classes = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        if line.starts_with('[') {
            section = match line {
                "[target]" => Section::Target,
                "[classes]" => Section::Classes,
                "[products]" => Section::Products,
                "[descendants]" => Section::Descendants,
                "[divisors]" => Section::Divisors,
                other => return Err(at(format!("unknown section {other}"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(at("content before the first section".into())),
            Section::Target => {
                let (k, v) = line.split_once('=').ok_or_else(|| at(format!("expected key=value, got {line:?}")))?;
                if header.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                    return Err(at(format!("duplicate key {}", k.trim())));
                }
            }
            Section::Classes => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(at(format!("expected `<id> <name> <degree>`, got {line:?}")));
                }
                let id = parse_id(parts[0]).map_err(|e| at(e.to_string()))?;
                let degree: i64 = parts[2].parse().map_err(|_| at(format!("bad degree {:?}", parts[2])))?;
                classes.push((lineno + 1, id, parts[1].to_string(), degree));
            }
            Section::Products => products.push((lineno + 1, parse_product(line).map_err(|e| at(e.to_string()))?)),
            Section::Descendants => {
                descendants.push((lineno + 1, parse_descendant(line).map_err(|e| at(e.to_string()))?))
            }
            Section::Divisors => {
                let (id, v) =
                    line.split_once('=').ok_or_else(|| at(format!("expected `<id> = <int>`, got {line:?}")))?;
                let id = parse_id(id).map_err(|e| at(e.to_string()))?;
                let v: i64 = v.trim().parse().map_err(|_| at(format!("bad pairing {:?}", v.trim())))?;
                divisors.push((lineno + 1, id, v));
            }
        }
    }

    let kind = header.get("kind").map(String::as_str).unwrap_or("point");
    let int_field = |name: &str| -> Result<i64> {
        match header.get(name) {
            Some(v) => v.parse().map_err(|_| Error::Parse(format!("bad value for {name}: {v:?}"))),
            None => Ok(0),
        }
    };
    let model = match kind {
        "point" => {
            if !classes.iter().all(|(_, id, _, d)| *id == UNIT && *d == 0)
                || !products.is_empty()
                || !descendants.is_empty()
                || !divisors.is_empty()
            {
                return Err(Error::Parse("a point target takes no classes, products, descendants or divisors".into()));
            }
            TargetModel::point()
        }
        "formal" => {
            let beta = int_field("beta")?;
            if beta < 0 {
                return Err(Error::Parse("beta must be nonnegative".into()));
            }
            let mut m = TargetModel::formal(int_field("dim")?, int_field("pairing")?, beta as u32)?;
            let wrap = |line: usize, e: Error| Error::Parse(format!("line {line}: {e}"));
            for (line, id, name, degree) in classes {
                m.add_class(id, &name, degree).map_err(|e| wrap(line, e))?;
            }
            for (line, (a, b, value)) in products {
                m.add_product(a, b, value).map_err(|e| wrap(line, e))?;
            }
            for (line, (key, value)) in descendants {
                m.add_descendant(key, value).map_err(|e| wrap(line, e))?;
            }
            for (line, id, v) in divisors {
                m.set_divisor_pairing(id, v).map_err(|e| wrap(line, e))?;
            }
            m
        }
        other => return Err(Error::Parse(format!("unknown target kind {other:?}"))),
    };
    Ok(model)
}

fn parse_id(text: &str) -> Result<ClassId> {
    text.trim().parse().map_err(|_| Error::Parse(format!("bad class id {:?}", text.trim())))
}

fn parse_product(line: &str) -> Result<(ClassId, ClassId, ClassComb)> {
    let (lhs, rhs) = line.split_once('=').ok_or_else(|| Error::Parse(format!("expected `a*b = ...`, got {line:?}")))?;
    let (a, b) = lhs.split_once('*').ok_or_else(|| Error::Parse(format!("expected `a*b` on the left, got {lhs:?}")))?;
    let mut value = ClassComb::zero();
    let rhs = rhs.trim();
    if rhs != "0" {
        for term in rhs.split('+') {
            let term = term.trim();
            let (coef, id) = match term.rsplit_once('*') {
                Some((c, id)) => (parse_rational(c)?, parse_id(id)?),
                None => (Rational::one(), parse_id(term)?),
            };
            value.add_scaled(id, &coef);
        }
    }
    Ok((parse_id(a)?, parse_id(b)?, value))
}

fn parse_descendant(line: &str) -> Result<(DescendantKey, Rational)> {
    let parts: Vec<&str> = line.split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected `g=<int> ; (k,id) ... ; <rational>`, got {line:?}")));
    }
    let genus: u32 = parts[0]
        .strip_prefix("g=")
        .and_then(|g| g.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad genus field {:?}", parts[0])))?;
    let mut insertions = Vec::new();
    let mut rest = parts[1];
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| Error::Parse(format!("bad insertion list {:?}", parts[1])))?;
        let (k, id) = inner.0.split_once(',').ok_or_else(|| Error::Parse(format!("bad insertion ({})", inner.0)))?;
        let k: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("bad descendant index {:?}", k.trim())))?;
        insertions.push((k, parse_id(id)?));
        rest = inner.1.trim_start();
    }
    Ok((DescendantKey::new(genus, insertions), parse_rational(parts[2])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const LINE: &str = "[target]\nkind=formal\ndim=1\npairing=2\nbeta=1\n[classes]\n1 one 0\n2 H 1\n\
                        [products]\n2*2 = 0\n[descendants]\ng=0 ; (0,2) (0,2) ; 1\ng=0 ; (0,2) (0,2) (0,2) ; 1\n\
                        [divisors]\n2 = 1\n";

    #[test]
    fn loads_truncation_ring() {
        let m = load_target(LINE).unwrap();
        assert_eq!(m.kind(), TargetKind::Formal);
        assert_eq!(m.classes().len(), 2);
        assert!(m.ring_product_ids(&[2, 2]).unwrap().is_zero());
        assert_eq!(m.ring_product_ids(&[1, 2]).unwrap(), ClassComb::basis(2));
        assert_eq!(m.ring_product_ids(&[2]).unwrap(), ClassComb::basis(2));
        assert_eq!(m.divisor_pairing(2).unwrap(), 1);
        let key = DescendantKey::new(0, vec![(0, 2), (0, 2)]);
        assert_eq!(m.unweighted_lookup(&key).unwrap(), int(1));
    }

    #[test]
    fn lookup_contract() {
        let m = load_target(LINE).unwrap();
        let missing = DescendantKey::new(0, vec![(0, 2); 4]);
        assert!(matches!(m.unweighted_lookup(&missing), Err(Error::OracleIncomplete(_))));
        let gated = DescendantKey::new(0, vec![(0, 2); 5].into_iter().chain([(1, 2)]).collect());
        assert_eq!(m.unweighted_lookup(&gated).unwrap(), Rational::zero());
        let negative = DescendantKey::new(0, vec![(-1, 2), (0, 2)]);
        assert_eq!(m.unweighted_lookup(&negative).unwrap(), Rational::zero());
        assert_eq!(m.unweighted_lookup(&DescendantKey::new(0, vec![(0, 7)])), Err(Error::UnknownClass(7)));
    }

    #[test]
    fn point_documents() {
        let m = load_target("[target]\nkind=point\n").unwrap();
        assert_eq!(m.kind(), TargetKind::Point);
        assert_eq!(m.unweighted_lookup(&DescendantKey::point(0, &[0, 0, 0])).unwrap(), int(1));
        assert_eq!(m.ring_product_ids(&[1, 1]).unwrap(), ClassComb::unit());
        assert!(m.divisor_pairing(1).is_err());
    }

    #[test]
    fn rejects_bad_documents() {
        let unknown = "[target]\nkind=formal\ndim=1\n[classes]\n2 H 1\n[products]\n2*3 = 1*2\n";
        assert!(load_target(unknown).is_err());
        let dup = "[target]\nkind=formal\ndim=1\n[classes]\n2 H 1\n2 K 1\n";
        assert!(load_target(dup).is_err());
        let degree = "[target]\nkind=formal\ndim=2\n[classes]\n2 H 1\n3 P 2\n[products]\n2*2 = 1*2\n";
        assert!(load_target(degree).is_err());
        assert!(load_target("[nonsense]\n").is_err());
        let missing = "[target]\nkind=formal\ndim=2\n[classes]\n2 H 1\n3 E 1\n";
        let m = load_target(missing).unwrap();
        assert_eq!(m.ring_product_ids(&[2, 3]), Err(Error::MissingProduct(2, 3)));
    }
}
