use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::scalar::Scalar;
use super::sparse::SparseMatrix;
use super::Rational;
use crate::building::{min_rotation, Ball, SimplexX};
use crate::coeffring::FiniteField;
use crate::error::{Error, Result};
use crate::latmod::{FMatrix, Lattice};
use crate::tower::{XLSimplex, XLVertex};

/// Conjugacy-invariant key of a simplex: the least rotation of the
/// d-sequence of its chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitKey(pub Vec<usize>);

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "d=({})", parts.join(","))
    }
}

/// A simplex type the chain complex machinery can work with.
pub trait Cell: Clone + Ord + Hash + fmt::Debug + Send + Sync {
    type Vertex: Clone + Ord + Hash + fmt::Debug + Send + Sync;
    /// Vertices in canonical (sorted) order.
    fn vertex_list(&self) -> Vec<Self::Vertex>;
    /// Codimension-one faces; entry i omits vertex i.
    fn facet_list(&self) -> Vec<Self>;
    fn orbit_key(&self) -> OrbitKey;
    fn apply_vertex(v: &Self::Vertex, g: &FMatrix) -> Result<Self::Vertex>;
    /// The o_F homothety classes involved.
    fn classes(&self) -> Vec<Lattice>;
    fn dim(&self) -> usize {
        self.vertex_list().len() - 1
    }
}

impl Cell for SimplexX {
    type Vertex = Lattice;
    fn vertex_list(&self) -> Vec<Lattice> {
        self.classes().to_vec()
    }
    fn facet_list(&self) -> Vec<Self> {
        self.facets()
    }
    fn orbit_key(&self) -> OrbitKey {
        OrbitKey(min_rotation(&self.chain().d_sequence()))
    }
    fn apply_vertex(v: &Lattice, g: &FMatrix) -> Result<Lattice> {
        Ok(v.apply(g)?.homothety_normalize())
    }
    fn classes(&self) -> Vec<Lattice> {
        SimplexX::classes(self).to_vec()
    }
}

impl Cell for XLSimplex {
    type Vertex = XLVertex;
    fn vertex_list(&self) -> Vec<XLVertex> {
        self.vertices().to_vec()
    }
    fn facet_list(&self) -> Vec<Self> {
        self.facets()
    }
    fn orbit_key(&self) -> OrbitKey {
        OrbitKey(min_rotation(&self.underlying().chain().d_sequence()))
    }
    fn apply_vertex(v: &XLVertex, g: &FMatrix) -> Result<XLVertex> {
        v.apply(g)
    }
    fn classes(&self) -> Vec<Lattice> {
        self.underlying().classes().to_vec()
    }
}

/// Labels of vertices; a labelling must be injective on every simplex.
pub trait VertexLabel<V>: Sync {
    fn label(&self, v: &V) -> i64;
}

impl<V, F: Fn(&V) -> i64 + Sync> VertexLabel<V> for F {
    fn label(&self, v: &V) -> i64 {
        self(v)
    }
}

/// v_t(det L) mod `modulus`, for X-vertices and X[L]-vertices.
#[derive(Clone, Copy, Debug)]
pub struct DetLabel {
    pub modulus: i64,
}

impl VertexLabel<Lattice> for DetLabel {
    fn label(&self, v: &Lattice) -> i64 {
        v.det_valuation().rem_euclid(self.modulus)
    }
}
impl VertexLabel<XLVertex> for DetLabel {
    fn label(&self, v: &XLVertex) -> i64 {
        v.classes()[0].det_valuation().rem_euclid(self.modulus)
    }
}

/// How a finite region was produced.
#[derive(Clone, Debug)]
pub enum RegionTag {
    Ball { center: Lattice, radius: usize, shell: BTreeSet<Lattice> },
    Explicit(String),
}

/// A face-closed finite set of simplices, graded by dimension.
#[derive(Clone, Debug)]
pub struct FiniteComplex<C> {
    cells: Vec<Vec<C>>,
    region: RegionTag,
}

impl<C: Cell> FiniteComplex<C> {
    /// Checks face closure.
    pub fn new(cells: impl IntoIterator<Item = C>, region: RegionTag) -> Result<Self> {
        let fc = Self::graded(cells.into_iter().collect(), region);
        for q in 1..fc.cells.len() {
            for s in &fc.cells[q] {
                if let Some(t) = s.facet_list().into_iter().find(|t| fc.cells[q - 1].binary_search(t).is_err()) {
                    return Err(Error::Invalid(format!("region is not face-closed: {t:?} is missing")));
                }
            }
        }
        Ok(fc)
    }
    /// All faces of the given simplices.
    pub fn closure(tops: impl IntoIterator<Item = C>, region: RegionTag) -> Self {
        let mut seen: BTreeSet<C> = BTreeSet::new();
        let mut stack: Vec<C> = tops.into_iter().collect();
        while let Some(s) = stack.pop() {
            if seen.contains(&s) {
                continue;
            }
            stack.extend(s.facet_list().into_iter().filter(|t| !seen.contains(t)));
            seen.insert(s);
        }
        Self::graded(seen.into_iter().collect(), region)
    }
    fn graded(mut all: Vec<C>, region: RegionTag) -> Self {
        all.sort();
        all.dedup();
        let top = all.iter().map(Cell::dim).max().map_or(0, |d| d + 1);
        let mut cells = vec![Vec::new(); top];
        for s in all {
            let d = s.dim();
            cells[d].push(s);
        }
        FiniteComplex { cells, region }
    }
    pub fn region(&self) -> &RegionTag {
        &self.region
    }
    /// Simplices of dimension q.
    pub fn cells(&self, q: usize) -> &[C] {
        self.cells.get(q).map_or(&[], Vec::as_slice)
    }
    pub fn all(&self) -> impl Iterator<Item = &C> {
        self.cells.iter().flatten()
    }
    pub fn len(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Top dimension plus one (0 for the empty complex).
    pub fn num_degrees(&self) -> usize {
        self.cells.len()
    }
    pub fn contains(&self, s: &C) -> bool {
        self.cells.get(s.dim()).is_some_and(|c| c.binary_search(s).is_ok())
    }
    pub fn union(&self, other: &Self) -> Self {
        Self::graded(self.all().chain(other.all()).cloned().collect(), RegionTag::Explicit("union".into()))
    }
    pub fn orbit_keys(&self) -> BTreeSet<OrbitKey> {
        self.all().map(Cell::orbit_key).collect()
    }
}

impl FiniteComplex<SimplexX> {
    pub fn from_ball(b: &Ball) -> Self {
        let region = RegionTag::Ball { center: b.center.clone(), radius: b.radius, shell: b.shell() };
        Self::graded(b.simplices(), region)
    }
    pub fn to_json(&self) -> Value {
        json!({ "simplices": self.all().map(SimplexX::to_json).collect::<Vec<_>>() })
    }
    /// Reads {"simplices": [...]} and closes under faces.
    pub fn from_json(field: &FiniteField, v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("region must be an object".into()))?;
        if let Some(k) = obj.keys().find(|k| *k != "simplices") {
            return Err(Error::Parse(format!("unknown region field {k:?}")));
        }
        let arr = obj
            .get("simplices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("region needs a \"simplices\" list".into()))?;
        let tops = arr.iter().map(|s| SimplexX::from_json(field, s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::closure(tops, RegionTag::Explicit("json".into())))
    }
}

/// Face maps V_σ → V_τ, rows indexed by V_τ.
pub trait TransitionOracle: Send + Sync {
    fn transition(&self, sigma: &OrbitKey, tau: &OrbitKey) -> Option<Vec<Vec<Rational>>>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimSpec {
    Constant(usize),
    ByKey(BTreeMap<OrbitKey, usize>),
}

/// Dimensions of the coefficient spaces, constant on orbits, with optional
/// transition maps.
#[derive(Clone)]
pub struct CoefficientSystem {
    dims: DimSpec,
    transitions: Option<Arc<dyn TransitionOracle>>,
}

impl CoefficientSystem {
    pub fn constant(d: usize) -> Self {
        CoefficientSystem { dims: DimSpec::Constant(d), transitions: None }
    }
    pub fn by_key(map: BTreeMap<OrbitKey, usize>) -> Self {
        CoefficientSystem { dims: DimSpec::ByKey(map), transitions: None }
    }
    pub fn with_transitions(mut self, oracle: Arc<dyn TransitionOracle>) -> Self {
        self.transitions = Some(oracle);
        self
    }
    /// Parses `const:D`.
    pub fn parse(s: &str) -> Result<Self> {
        let d = s
            .strip_prefix("const:")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected const:D, got {s:?}")))?;
        Ok(Self::constant(d))
    }
    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }
    pub fn dim_of(&self, key: &OrbitKey) -> Result<usize> {
        match &self.dims {
            DimSpec::Constant(d) => Ok(*d),
            DimSpec::ByKey(m) => {
                m.get(key).copied().ok_or_else(|| Error::Invalid(format!("no dimension for orbit {key}")))
            }
        }
    }
    /// None stands for the identity.
    fn transition(&self, sigma: &OrbitKey, tau: &OrbitKey, ds: usize, dt: usize) -> Result<Option<Vec<Vec<Rational>>>> {
        if let Some(t) = self.transitions.as_ref().and_then(|o| o.transition(sigma, tau)) {
            if t.len() != dt || t.iter().any(|r| r.len() != ds) {
                return Err(Error::DimensionMismatch(format!("transition {sigma} -> {tau} has the wrong shape")));
            }
            return Ok(Some(t));
        }
        if ds == dt {
            Ok(None)
        } else {
            Err(Error::MissingTransition)
        }
    }
}

impl fmt::Debug for CoefficientSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoefficientSystem({:?}, transitions: {})", self.dims, self.transitions.is_some())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Oriented,
    Labelled,
}

impl std::str::FromStr for Style {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oriented" => Ok(Style::Oriented),
            "labelled" | "labeled" => Ok(Style::Labelled),
            _ => Err(Error::Parse(format!("unknown style {s:?}"))),
        }
    }
}

/// Chain spaces and boundary maps; `boundaries[q]` is ∂_{q+1}: C_{q+1} → C_q.
#[derive(Clone, Debug)]
pub struct ChainComplexData<S> {
    pub style: Style,
    pub cell_counts: Vec<usize>,
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseMatrix<S>>,
}

/// Labels of the vertices of `s`, checked to be pairwise distinct.
fn labels_of<C: Cell>(s: &C, labels: &dyn VertexLabel<C::Vertex>) -> Result<Vec<i64>> {
    let l: Vec<i64> = s.vertex_list().iter().map(|v| labels.label(v)).collect();
    let mut sorted = l.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != l.len() {
        return Err(Error::LabelCollision);
    }
    Ok(l)
}

/// Number of vertices of `s` whose label is smaller than that of vertex i.
fn label_position(labels: &[i64], i: usize) -> usize {
    labels.iter().filter(|&&x| x < labels[i]).count()
}

/// [σ : τ] = (−1)^i, i the position in label order of the vertex of σ
/// missing from τ.
pub fn incidence_number<C: Cell>(sigma: &C, tau: &C, labels: &dyn VertexLabel<C::Vertex>) -> Result<i32> {
    let l = labels_of(sigma, labels)?;
    let i = sigma
        .facet_list()
        .iter()
        .position(|f| f == tau)
        .ok_or_else(|| Error::Invalid("not a codimension-one face".into()))?;
    Ok(if label_position(&l, i).is_multiple_of(2) { 1 } else { -1 })
}

/// Parity of the permutation taking canonical vertex order to label order.
fn label_parity(labels: &[i64]) -> bool {
    let mut inversions = 0;
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels[i] > labels[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

struct Layout<C> {
    offsets: Vec<HashMap<C, (usize, usize)>>,
    dims: Vec<usize>,
}

fn layout<C: Cell>(fc: &FiniteComplex<C>, cs: &CoefficientSystem) -> Result<Layout<C>> {
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    for q in 0..fc.num_degrees() {
        let mut map = HashMap::new();
        let mut total = 0;
        for s in fc.cells(q) {
            let d = cs.dim_of(&s.orbit_key())?;
            map.insert(s.clone(), (total, d));
            total += d;
        }
        offsets.push(map);
        dims.push(total);
    }
    Ok(Layout { offsets, dims })
}

/// Boundary matrices with blocks [σ : τ]·(transition), over the rationals.
pub fn build_complex<C: Cell>(
    fc: &FiniteComplex<C>,
    cs: &CoefficientSystem,
    style: Style,
    labels: &dyn VertexLabel<C::Vertex>,
) -> Result<ChainComplexData<Rational>> {
    let lay = layout(fc, cs)?;
    let mut boundaries = Vec::new();
    for q in 1..fc.num_degrees() {
        let blocks: Vec<Vec<(usize, usize, Rational)>> = fc
            .cells(q)
            .par_iter()
            .map(|s| -> Result<Vec<(usize, usize, Rational)>> {
                let (col0, ds) = lay.offsets[q][s];
                let key = s.orbit_key();
                let lab = match style {
                    Style::Labelled => Some(labels_of(s, labels)?),
                    Style::Oriented => None,
                };
                let mut out = Vec::new();
                for (i, t) in s.facet_list().iter().enumerate() {
                    let pos = lab.as_ref().map_or(i, |l| label_position(l, i));
                    let sign = Rational::from_i64(if pos % 2 == 0 { 1 } else { -1 });
                    let &(row0, dt) =
                        lay.offsets[q - 1].get(t).ok_or_else(|| Error::Invalid("region is not face-closed".into()))?;
                    match cs.transition(&key, &t.orbit_key(), ds, dt)? {
                        None => out.extend((0..ds).map(|k| (row0 + k, col0 + k, sign.clone()))),
                        Some(m) => {
                            for (r, row) in m.iter().enumerate() {
                                for (c, x) in row.iter().enumerate() {
                                    out.push((row0 + r, col0 + c, sign.clone() * x.clone()));
                                }
                            }
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut m = SparseMatrix::zero(lay.dims[q - 1], lay.dims[q]);
        for (r, c, x) in blocks.into_iter().flatten() {
            m.add_to(r, c, x);
        }
        boundaries.push(m);
    }
    let cc = ChainComplexData {
        style,
        cell_counts: (0..fc.num_degrees()).map(|q| fc.cells(q).len()).collect(),
        dims: lay.dims,
        boundaries,
    };
    if !cc.boundary_squares_vanish() {
        return Err(Error::Invalid("boundary does not square to zero; transition maps are not functorial".into()));
    }
    Ok(cc)
}

/// Builds both styles and checks ∂_lab = D ∂_or D, where D multiplies the
/// block of σ by the sign of its label-order permutation.
pub fn compare_styles<C: Cell>(
    fc: &FiniteComplex<C>,
    cs: &CoefficientSystem,
    labels: &dyn VertexLabel<C::Vertex>,
) -> Result<bool> {
    let or = build_complex(fc, cs, Style::Oriented, labels)?;
    let lab = build_complex(fc, cs, Style::Labelled, labels)?;
    let lay = layout(fc, cs)?;
    let mut signs: Vec<Vec<bool>> = lay.dims.iter().map(|&d| vec![false; d]).collect();
    for (q, row) in signs.iter_mut().enumerate() {
        for s in fc.cells(q) {
            let flip = label_parity(&labels_of(s, labels)?);
            let (o, d) = lay.offsets[q][s];
            row[o..o + d].iter_mut().for_each(|x| *x = flip);
        }
    }
    Ok(or
        .boundaries
        .iter()
        .zip(&lab.boundaries)
        .enumerate()
        .all(|(q, (a, b))| a.conjugate_signs(&signs[q], &signs[q + 1]) == *b))
}

impl<S: Scalar> ChainComplexData<S> {
    pub fn boundary_squares_vanish(&self) -> bool {
        self.boundaries.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ChainComplexData<T> {
        ChainComplexData {
            style: self.style,
            cell_counts: self.cell_counts.clone(),
            dims: self.dims.clone(),
            boundaries: self.boundaries.iter().map(|b| b.map(f)).collect(),
        }
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

/// rank H_q = dim C_q − rank ∂_q − rank ∂_{q+1}.
pub fn homology_ranks<S: Scalar>(cc: &ChainComplexData<S>) -> Vec<usize> {
    let ranks: Vec<usize> = cc.boundaries.par_iter().map(SparseMatrix::rank).collect();
    (0..cc.dims.len())
        .map(|q| {
            let out = if q > 0 { ranks[q - 1] } else { 0 };
            let inc = ranks.get(q).copied().unwrap_or(0);
            cc.dims[q] - out - inc
        })
        .collect()
}

/// Σ_q (−1)^q Σ_{σ of dim q} dim V_σ.
pub fn euler_characteristic<C: Cell>(fc: &FiniteComplex<C>, cs: &CoefficientSystem) -> Result<i64> {
    let mut chi = 0i64;
    for q in 0..fc.num_degrees() {
        let total: usize = fc.cells(q).iter().map(|s| cs.dim_of(&s.orbit_key())).sum::<Result<usize>>()?;
        chi += if q % 2 == 0 { total as i64 } else { -(total as i64) };
    }
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::LatticeChain;

    fn chamber(n: usize) -> SimplexX {
        let f = FiniteField::with_order(2).unwrap();
        SimplexX::from_chain(&LatticeChain::standard(&f, &vec![1; n]).unwrap())
    }

    #[test]
    fn segment() {
        let fc = FiniteComplex::closure([chamber(2)], RegionTag::Explicit("edge".into()));
        let lab = DetLabel { modulus: 2 };
        let cc = build_complex(&fc, &CoefficientSystem::constant(1), Style::Labelled, &lab).unwrap();
        assert_eq!(cc.boundaries[0].nnz(), 2);
        let col: Vec<i64> =
            cc.boundaries[0].to_dense().iter().map(|r| if r[0] == Rational::from_i64(1) { 1 } else { -1 }).collect();
        assert_eq!(col.iter().sum::<i64>(), 0);
        assert_eq!(homology_ranks(&cc), vec![1, 0]);
    }

    #[test]
    fn triangle_signs_alternate() {
        let c = chamber(3);
        let lab = DetLabel { modulus: 3 };
        let mut by_label: Vec<(i64, i32)> = c
            .vertex_list()
            .iter()
            .zip(c.facet_list())
            .map(|(v, t)| (lab.label(v), incidence_number(&c, &t, &lab).unwrap()))
            .collect();
        by_label.sort();
        assert_eq!(by_label.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, -1, 1]);
        let collide = |_: &Lattice| 0i64;
        assert!(matches!(incidence_number(&c, &c.facet_list()[0], &collide), Err(Error::LabelCollision)));
    }

    #[test]
    fn closed_chamber_is_acyclic() {
        for d in [1, 3] {
            let fc = FiniteComplex::closure([chamber(3)], RegionTag::Explicit("chamber".into()));
            let cs = CoefficientSystem::constant(d);
            let lab = DetLabel { modulus: 3 };
            for style in [Style::Oriented, Style::Labelled] {
                let cc = build_complex(&fc, &cs, style, &lab).unwrap();
                assert_eq!(homology_ranks(&cc), vec![d, 0, 0]);
            }
            assert!(compare_styles(&fc, &cs, &lab).unwrap());
            assert_eq!(euler_characteristic(&fc, &cs).unwrap(), d as i64);
        }
    }

    #[test]
    fn missing_transition() {
        let fc = FiniteComplex::closure([chamber(2)], RegionTag::Explicit("edge".into()));
        let cs = CoefficientSystem::by_key(BTreeMap::from([(OrbitKey(vec![2]), 2), (OrbitKey(vec![1, 1]), 1)]));
        let r = build_complex(&fc, &cs, Style::Oriented, &DetLabel { modulus: 2 });
        assert!(matches!(r, Err(Error::MissingTransition)));
    }

    #[test]
    fn face_closure_is_checked() {
        let r = FiniteComplex::new([chamber(2)], RegionTag::Explicit("open edge".into()));
        assert!(r.is_err());
    }
}
