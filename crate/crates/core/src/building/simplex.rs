use std::fmt;

use serde_json::Value;

use super::chain::{rep_below, LatticeChain};
use crate::coeffring::FiniteField;
use crate::error::{Error, Result};
use crate::latmod::{enumerate_lattices_between, FMatrix, Lattice};

/// A simplex of the building: the set of homothety classes of a lattice
/// chain, stored as sorted normalized representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexX {
    classes: Vec<Lattice>,
}

/// Selector for [`simplex_relations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexRelation {
    Face,
    Equal,
}

/// Largest q^n for which [`chambers_containing`] enumerates.
pub const CHAMBER_GUARD: u64 = 256;

impl SimplexX {
    /// Normalizes, sorts and deduplicates; checks the classes form a chain.
    pub fn new(classes: Vec<Lattice>) -> Result<Self> {
        let s = Self::from_normalized_unchecked(classes);
        if s.classes.is_empty() {
            return Err(Error::Invalid("a simplex needs at least one vertex".into()));
        }
        LatticeChain::from_classes(&s.classes)?;
        Ok(s)
    }
    pub(crate) fn from_normalized_unchecked(classes: Vec<Lattice>) -> Self {
        let mut classes: Vec<Lattice> = classes.iter().map(Lattice::homothety_normalize).collect();
        classes.sort();
        classes.dedup();
        SimplexX { classes }
    }
    pub fn from_chain(c: &LatticeChain) -> Self {
        SimplexX { classes: c.classes() }
    }
    pub fn vertex(l: &Lattice) -> Self {
        SimplexX { classes: vec![l.homothety_normalize()] }
    }

    pub fn classes(&self) -> &[Lattice] {
        &self.classes
    }
    pub fn field(&self) -> &FiniteField {
        self.classes[0].field()
    }
    pub fn ambient_dim(&self) -> usize {
        self.classes[0].dim()
    }
    pub fn num_vertices(&self) -> usize {
        self.classes.len()
    }
    pub fn dim(&self) -> usize {
        self.classes.len() - 1
    }
    pub fn vertices(&self) -> Vec<SimplexX> {
        self.classes.iter().map(|l| SimplexX { classes: vec![l.clone()] }).collect()
    }
    /// The chain through the classes, starting at the first class.
    pub fn chain(&self) -> LatticeChain {
        LatticeChain::from_classes(&self.classes).expect("simplex classes form a chain")
    }
    pub fn is_chamber(&self) -> bool {
        self.classes.len() == self.ambient_dim()
    }
    pub fn is_face_of(&self, other: &SimplexX) -> bool {
        self.classes.iter().all(|c| other.classes.binary_search(c).is_ok())
    }
    /// The face spanned by the vertices selected by `mask` (bit i = vertex i).
    pub fn face(&self, mask: u64) -> SimplexX {
        SimplexX {
            classes: self
                .classes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, l)| l.clone())
                .collect(),
        }
    }
    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<SimplexX> {
        let k = self.classes.len();
        (1u64..(1 << k)).map(|m| self.face(m)).collect()
    }
    /// Faces of codimension one, indexed by the missing vertex.
    pub fn facets(&self) -> Vec<SimplexX> {
        let k = self.classes.len();
        if k == 1 {
            return Vec::new();
        }
        let all = (1u64 << k) - 1;
        (0..k).map(|i| self.face(all & !(1 << i))).collect()
    }
    pub fn apply(&self, g: &FMatrix) -> Result<SimplexX> {
        let classes = self.classes.iter().map(|l| l.apply(g)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_normalized_unchecked(classes))
    }
    /// True if all classes are pairwise incident, i.e. the set is a simplex.
    pub fn is_simplex(classes: &[Lattice]) -> bool {
        classes.iter().enumerate().all(|(i, a)| classes[i + 1..].iter().all(|b| adjacent(a, b)))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.classes.iter().map(Lattice::to_json).collect())
    }
    pub fn from_json(field: &FiniteField, v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("simplex must be a list of lattices".into()))?;
        let classes = arr.iter().map(|x| Lattice::from_json(field, x)).collect::<Result<Vec<_>>>()?;
        Self::new(classes)
    }
}

/// Distinct classes [a], [b] are adjacent when t a ⊊ b' ⊊ a for some
/// representative b' of [b].
pub fn adjacent(a: &Lattice, b: &Lattice) -> bool {
    if a == b {
        return false;
    }
    let Ok(r) = rep_below(a, b) else { return false };
    r != *a && r.contains(&a.scale(1)).unwrap_or(false)
}

pub fn simplex_relations(a: &SimplexX, b: &SimplexX, rel: SimplexRelation) -> bool {
    match rel {
        SimplexRelation::Face => a.is_face_of(b),
        SimplexRelation::Equal => a == b,
    }
}

/// All chambers having `panel` (n - 1 classes) as a face.
pub fn chambers_containing(panel: &SimplexX) -> Result<Vec<SimplexX>> {
    let n = panel.ambient_dim();
    if n < 2 || panel.num_vertices() != n - 1 {
        return Err(Error::Invalid(format!("a panel in dimension {n} has {} vertices", n.saturating_sub(1))));
    }
    let q = panel.field().order();
    let size = q.checked_pow(n as u32).unwrap_or(u64::MAX);
    if size > CHAMBER_GUARD {
        return Err(Error::TooLarge { what: "q^n", size, limit: CHAMBER_GUARD });
    }
    let chain = panel.chain();
    let d = chain.d_sequence();
    let k = d.iter().position(|&x| x == 2).expect("a panel chain has one step of length 2");
    let high = chain.lattice(k as i64);
    let low = chain.lattice(k as i64 + 1);
    let mut out: Vec<SimplexX> = enumerate_lattices_between(&low, &high)?
        .into_iter()
        .filter(|m| *m != low && *m != high)
        .map(|m| {
            let mut classes = panel.classes.clone();
            classes.push(m);
            SimplexX::from_normalized_unchecked(classes)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A strictly increasing sequence of simplices σ_0 ⊂ ... ⊂ σ_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagSd {
    simplices: Vec<SimplexX>,
}

impl FlagSd {
    pub fn new(simplices: Vec<SimplexX>) -> Result<Self> {
        if simplices.is_empty() {
            return Err(Error::Invalid("empty flag".into()));
        }
        for w in simplices.windows(2) {
            if w[0] == w[1] || !w[0].is_face_of(&w[1]) {
                return Err(Error::Invalid("flag members must be strictly increasing faces".into()));
            }
        }
        Ok(FlagSd { simplices })
    }
    pub fn simplices(&self) -> &[SimplexX] {
        &self.simplices
    }
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }
}

/// Every flag of faces of `s`: the simplices of the barycentric subdivision
/// of the closed simplex.
pub fn sd_flags(s: &SimplexX) -> Vec<FlagSd> {
    fn extend(prefix: &mut Vec<SimplexX>, top: &SimplexX, out: &mut Vec<FlagSd>) {
        out.push(FlagSd { simplices: prefix.clone() });
        for f in top.faces() {
            let last = prefix.last().unwrap();
            if f.num_vertices() > last.num_vertices() && last.is_face_of(&f) {
                prefix.push(f);
                extend(prefix, top, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    for start in s.faces() {
        let mut prefix = vec![start];
        extend(&mut prefix, s, &mut out);
    }
    out.sort();
    out
}

/// The largest order of the flag is maximal: its smallest simplex is a vertex.
pub fn is_semistandard(f: &FlagSd) -> bool {
    f.simplices[0].num_vertices() == 1
}

impl fmt::Debug for SimplexX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Simplex{}", self.to_json())
    }
}
