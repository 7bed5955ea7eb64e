use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::elliptic::{is_minimal, EllipticElement};
use super::group::GroupElement;
use crate::chaincx::{Cell, CoefficientSystem, FiniteComplex, OrbitKey, Rational, RegionTag, Scalar};
use crate::error::{Error, Result};
use crate::tower::TowerField;

/// A simplex with g·σ = σ as a set.
#[derive(Clone, Debug)]
pub struct FixedSimplex<C> {
    pub simplex: C,
    /// dim σ(g) = (number of cycles of g on the vertices) − 1.
    pub fixed_dim: usize,
    /// Sign of the vertex permutation.
    pub sign: i32,
    pub cycle_type: Vec<usize>,
}

/// What a trace oracle sees of g on a fixed simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConjugacyDatum {
    pub cycle_type: Vec<usize>,
    pub det_valuation: i64,
}

/// Tr(h, λ_σ) as an exact number or an opaque symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceValue {
    Exact(Rational),
    Symbol(String),
}

/// Supplies trace values of h on the representation attached to an orbit.
pub trait TraceOracle: Sync {
    fn trace(&self, key: &OrbitKey, datum: &ConjugacyDatum) -> TraceValue;
    /// Oracles that cannot be called concurrently return true.
    fn is_serial(&self) -> bool {
        false
    }
}

/// Returns the coefficient dimension of the orbit.
pub struct DimensionOracle(pub CoefficientSystem);

impl TraceOracle for DimensionOracle {
    fn trace(&self, key: &OrbitKey, _: &ConjugacyDatum) -> TraceValue {
        match self.0.dim_of(key) {
            Ok(d) => TraceValue::Exact(Rational::from_i64(d as i64)),
            Err(_) => TraceValue::Symbol(format!("dim[{key}]")),
        }
    }
}

/// Returns the symbol Tr(h|λ[key]).
pub struct SymbolicOracle;

impl TraceOracle for SymbolicOracle {
    fn trace(&self, key: &OrbitKey, _: &ConjugacyDatum) -> TraceValue {
        TraceValue::Symbol(format!("Tr(h|λ[{key}])"))
    }
}

/// A formal Z-linear combination of symbols plus an exact rational part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceSum {
    pub exact: Rational,
    pub symbols: BTreeMap<String, i64>,
}

impl TraceSum {
    pub fn add(&mut self, sign: i32, v: &TraceValue) {
        match v {
            TraceValue::Exact(x) => {
                if sign > 0 {
                    self.exact += x;
                } else {
                    self.exact -= x;
                }
            }
            TraceValue::Symbol(s) => {
                let c = self.symbols.entry(s.clone()).or_insert(0);
                *c += i64::from(sign);
                if *c == 0 {
                    self.symbols.remove(s);
                }
            }
        }
    }
    pub fn is_zero(&self) -> bool {
        self.exact.is_zero() && self.symbols.is_empty()
    }
}

impl fmt::Display for TraceSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.exact.is_zero() || self.symbols.is_empty() {
            parts.push(self.exact.to_string());
        }
        for (s, &c) in &self.symbols {
            parts.push(match c {
                1 => s.clone(),
                -1 => format!("-{s}"),
                _ => format!("{c}*{s}"),
            });
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn inversion_sign(perm: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All σ in the region with g·σ = σ. The sign is computed from inversions
/// and checked against (−1)^{dim σ − dim σ(g)}.
pub fn fixed_simplices<C: Cell>(g: &GroupElement, region: &FiniteComplex<C>) -> Result<Vec<FixedSimplex<C>>> {
    let mut verts: Vec<C::Vertex> = region.cells(0).iter().flat_map(Cell::vertex_list).collect();
    verts.sort();
    verts.dedup();
    let images: HashMap<C::Vertex, C::Vertex> =
        verts.par_iter().map(|v| C::apply_vertex(v, g.matrix()).map(|w| (v.clone(), w))).collect::<Result<_>>()?;
    let cells: Vec<&C> = region.all().collect();
    let found: Vec<Option<FixedSimplex<C>>> = cells
        .par_iter()
        .map(|s| -> Result<Option<FixedSimplex<C>>> {
            let vs = s.vertex_list();
            let mut perm = Vec::with_capacity(vs.len());
            for v in &vs {
                let Some(w) = images.get(v) else { return Ok(None) };
                match vs.binary_search(w) {
                    Ok(i) => perm.push(i),
                    Err(_) => return Ok(None),
                }
            }
            let cycles = cycle_type(&perm);
            let fixed_dim = cycles.len() - 1;
            let sign = inversion_sign(&perm);
            let by_dim = if (vs.len() - 1 - fixed_dim).is_multiple_of(2) { 1 } else { -1 };
            if sign != by_dim {
                return Err(Error::Invalid("permutation sign disagrees with the fixed-face dimension".into()));
            }
            Ok(Some(FixedSimplex { simplex: (*s).clone(), fixed_dim, sign, cycle_type: cycles }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// One evaluated term of a Lefschetz sum.
#[derive(Clone, Debug)]
pub struct LefschetzTerm<C> {
    pub fixed: FixedSimplex<C>,
    pub key: OrbitKey,
    pub value: TraceValue,
}

#[derive(Clone, Debug)]
pub struct LefschetzSum<C> {
    pub terms: Vec<LefschetzTerm<C>>,
    /// Σ (−1)^{dim σ(g)} Tr.
    pub by_fixed_dim: TraceSum,
    /// Σ (−1)^{dim σ} ε_σ(g) Tr.
    pub by_sign: TraceSum,
}

/// Σ over fixed simplices of (−1)^{dim σ(g)} Tr(g, λ_σ). Ball regions are
/// rejected with BoundaryContact when a fixed simplex meets the outer shell.
pub fn lefschetz_sum<C: Cell>(
    g: &GroupElement,
    region: &FiniteComplex<C>,
    oracle: &dyn TraceOracle,
) -> Result<LefschetzSum<C>> {
    let fixed = fixed_simplices(g, region)?;
    if let RegionTag::Ball { shell, .. } = region.region() {
        if fixed.iter().any(|f| f.simplex.classes().iter().any(|c| shell.contains(c))) {
            return Err(Error::BoundaryContact);
        }
    }
    let eval = |f: &FixedSimplex<C>| {
        let key = f.simplex.orbit_key();
        let datum = ConjugacyDatum { cycle_type: f.cycle_type.clone(), det_valuation: g.det_valuation() };
        let value = oracle.trace(&key, &datum);
        LefschetzTerm { fixed: f.clone(), key, value }
    };
    let terms: Vec<LefschetzTerm<C>> =
        if oracle.is_serial() { fixed.iter().map(eval).collect() } else { fixed.par_iter().map(eval).collect() };
    let mut by_fixed_dim = TraceSum::default();
    let mut by_sign = TraceSum::default();
    for t in &terms {
        by_fixed_dim.add(if t.fixed.fixed_dim % 2 == 0 { 1 } else { -1 }, &t.value);
        let dim_sign = if t.fixed.simplex.dim() % 2 == 0 { 1 } else { -1 };
        by_sign.add(dim_sign * t.fixed.sign, &t.value);
    }
    Ok(LefschetzSum { terms, by_fixed_dim, by_sign })
}

/// The single possible term for a minimal γ generating a maximal field K.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalTerm {
    pub support: bool,
    pub orbit: OrbitKey,
    pub sign: i32,
    #[serde(skip)]
    pub value: TraceSum,
}

/// Nonzero only when f(L/F) | f(K/F) and e(L/F) | e(K/F); the value is then
/// the oracle at the γ-stable o_K-chain.
pub fn lefschetz_minimal(g: &EllipticElement, l_data: &TowerField, oracle: &dyn TraceOracle) -> Result<MinimalTerm> {
    if g.degree() != g.n() {
        return Err(Error::NotMaximalField { degree: g.degree(), n: g.n() });
    }
    if !is_minimal(g)?.minimal {
        return Err(Error::NotMinimal);
    }
    let kt = g.tower();
    let (ek, fk) = (kt.e(kt.top()), kt.f(kt.top()));
    let (el, fl) = (l_data.e(l_data.top()), l_data.f(l_data.top()));
    let support = fk % fl == 0 && ek % el == 0;
    let (_, sigma) = g.stable_chain()?;
    let region =
        FiniteComplex::new([sigma.clone()].into_iter().chain(sigma.faces()), RegionTag::Explicit("σ_γ".into()))?;
    let fixed = fixed_simplices(g.embedded(), &region)?;
    let f =
        fixed.iter().find(|f| f.simplex == sigma).ok_or_else(|| Error::Invalid("stable chain is not fixed".into()))?;
    let sign = if f.fixed_dim % 2 == 0 { 1 } else { -1 };
    let mut value = TraceSum::default();
    if support {
        let datum = ConjugacyDatum { cycle_type: f.cycle_type.clone(), det_valuation: g.embedded().det_valuation() };
        value.add(sign, &oracle.trace(&sigma.orbit_key(), &datum));
    }
    Ok(MinimalTerm { support, orbit: sigma.orbit_key(), sign, value })
}
