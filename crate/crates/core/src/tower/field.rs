use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coeffring::{FiniteField, LaurentSeries, MAX_FIELD_ORDER};
use crate::error::{Error, Result};
use crate::latmod::{FMatrix, Lattice};

/// Ramification data of one floor over the floor below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloorSpec {
    pub e: usize,
    pub f: usize,
}

/// A tame tower F = E_0 ⊂ E_1 ⊂ ... with E_i = F_{q^{f(E_i/F)}}((s_i)) and
/// s_i^{e(E_i/F)} = t.
///
/// Each floor is realized directly over F: its residue field is the absolute
/// field of order q^{f(E_i/F)}, F_q sits inside it through
/// [`FiniteField::embedding_into`], and ζ (the class of the generator `a`)
/// supplies the F_q-basis 1, ζ, ..., ζ^{f-1}. Scalars of E_i act on
/// F^{e f} through the basis ζ^a s^c at index c·f + a.
#[derive(Clone)]
pub struct TowerField {
    base: FiniteField,
    specs: Vec<FloorSpec>,
    floors: Vec<Floor>,
    n: Option<usize>,
}

#[derive(Clone)]
struct Floor {
    e: usize,
    f: usize,
    residue: FiniteField,
    base_embed: Vec<u32>,
    /// F_q-coordinates (as base codes) of every residue element.
    coords: Vec<Vec<u32>>,
    zeta_pows: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerJson {
    floors: Vec<FloorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

impl TowerField {
    pub fn new(base: &FiniteField, specs: Vec<FloorSpec>, n: Option<usize>) -> Result<Self> {
        let mut floors = vec![Floor::build(base, 1, 1)?];
        let (mut e, mut f) = (1, 1);
        for s in &specs {
            if s.e == 0 || s.f == 0 {
                return Err(Error::Invalid("ramification data must be positive".into()));
            }
            e *= s.e;
            f *= s.f;
            floors.push(Floor::build(base, e, f)?);
        }
        if let Some(n) = n {
            if n == 0 || n % (e * f) != 0 {
                return Err(Error::DimensionMismatch(format!("[top:F] = {} does not divide n = {n}", e * f)));
            }
        }
        Ok(TowerField { base: base.clone(), specs, floors, n })
    }
    /// Parses `"e=1,f=2;e=2,f=1"`.
    pub fn parse_compact(base: &FiniteField, s: &str, n: Option<usize>) -> Result<Self> {
        let mut specs = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (mut e, mut f) = (None, None);
            for kv in part.split(',') {
                let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value in {kv:?}")))?;
                let v: usize = v.trim().parse().map_err(|_| Error::Parse(format!("bad number in {kv:?}")))?;
                match k.trim() {
                    "e" => e = Some(v),
                    "f" => f = Some(v),
                    other => return Err(Error::Parse(format!("unknown key {other:?}"))),
                }
            }
            specs.push(FloorSpec {
                e: e.ok_or_else(|| Error::Parse("missing e".into()))?,
                f: f.ok_or_else(|| Error::Parse("missing f".into()))?,
            });
        }
        Self::new(base, specs, n)
    }
    pub fn from_json(base: &FiniteField, v: &Value) -> Result<Self> {
        let t: TowerJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("tower: {e}")))?;
        Self::new(base, t.floors, t.n)
    }
    pub fn to_json(&self) -> Value {
        serde_json::to_value(TowerJson { floors: self.specs.clone(), n: self.n }).unwrap()
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }
    pub fn q(&self) -> u64 {
        self.base.order()
    }
    pub fn n(&self) -> Option<usize> {
        self.n
    }
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(&self.base, self.specs.clone(), Some(n))
    }
    pub fn specs(&self) -> &[FloorSpec] {
        &self.specs
    }
    /// Index of the top floor (0 for F itself).
    pub fn top(&self) -> usize {
        self.specs.len()
    }
    fn floor(&self, i: usize) -> Result<&Floor> {
        self.floors.get(i).ok_or_else(|| Error::Invalid(format!("tower has no floor {i}")))
    }
    /// e(E_i/F).
    pub fn e(&self, i: usize) -> usize {
        self.floors[i].e
    }
    /// f(E_i/F).
    pub fn f(&self, i: usize) -> usize {
        self.floors[i].f
    }
    /// [E_i : F].
    pub fn degree(&self, i: usize) -> usize {
        self.e(i) * self.f(i)
    }
    /// Residue field of floor i.
    pub fn residue(&self, i: usize) -> Result<&FiniteField> {
        Ok(&self.floor(i)?.residue)
    }
    /// Code of ζ in the residue field of floor i.
    pub fn zeta(&self, i: usize) -> Result<u32> {
        let fl = self.floor(i)?;
        Ok(if fl.f > 1 { fl.zeta_pows[1] } else { 1 })
    }
    /// Image of a base-field code in the residue field of floor i.
    pub fn embed_base(&self, i: usize, code: u32) -> Result<u32> {
        Ok(self.floor(i)?.base_embed[code as usize])
    }
    /// F_q-coordinates of a residue element of floor i.
    pub fn residue_coords(&self, i: usize, code: u32) -> Result<&[u32]> {
        Ok(&self.floor(i)?.coords[code as usize])
    }

    /// Coordinates over F of y ∈ E_i in the basis ζ^a s^c (index c·f + a).
    pub fn f_coords(&self, i: usize, y: &LaurentSeries) -> Result<Vec<LaurentSeries>> {
        let fl = self.floor(i)?;
        if !y.field().same_as(&fl.residue) {
            return Err(Error::FieldMismatch);
        }
        let (e, f) = (fl.e as i64, fl.f);
        let mut terms: Vec<Vec<(i64, u32)>> = vec![Vec::new(); e as usize * f];
        if !y.is_zero() {
            let v = y.valuation()?;
            for (idx, &c) in y.codes().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let m = v + idx as i64;
                let cc = m.rem_euclid(e);
                let k = (m - cc) / e;
                for (a, &x) in fl.coords[c as usize].iter().enumerate() {
                    if x != 0 {
                        terms[cc as usize * f + a].push((k, x));
                    }
                }
            }
        }
        Ok(terms
            .into_iter()
            .enumerate()
            .map(|(idx, ts)| {
                let cc = (idx / f) as i64;
                let prec = y.prec().map(|p| (p - cc).div_euclid(e) + i64::from((p - cc).rem_euclid(e) != 0));
                if ts.is_empty() {
                    return match prec {
                        Some(p) => LaurentSeries::big_o(&self.base, p),
                        None => LaurentSeries::zero(&self.base),
                    };
                }
                let lo = ts.iter().map(|t| t.0).min().unwrap();
                let hi = ts.iter().map(|t| t.0).max().unwrap();
                let mut codes = vec![0u32; (hi - lo + 1) as usize];
                for (k, x) in ts {
                    codes[(k - lo) as usize] = x;
                }
                LaurentSeries::from_codes(&self.base, lo, codes, prec)
            })
            .collect())
    }

    /// Matrix of multiplication by x ∈ E_i on E_i ≅ F^{e f}.
    pub fn regular_rep(&self, i: usize, x: &LaurentSeries) -> Result<FMatrix> {
        let fl = self.floor(i)?;
        let (e, f) = (fl.e, fl.f);
        let mut cols = Vec::with_capacity(e * f);
        for c in 0..e {
            for a in 0..f {
                let y = x.scale_code(fl.zeta_pows[a]).shift(c as i64);
                cols.push(self.f_coords(i, &y)?);
            }
        }
        FMatrix::from_columns(&self.base, &cols)
    }
    /// Block-diagonal action of x ∈ E_i on E_i^m ≅ F^{m e f}.
    pub fn scalar_matrix(&self, i: usize, x: &LaurentSeries, m: usize) -> Result<FMatrix> {
        let r = self.regular_rep(i, x)?;
        let d = r.rows();
        Ok(FMatrix::from_fn(&self.base, m * d, m * d, |row, col| {
            if row / d == col / d {
                r.get(row % d, col % d).clone()
            } else {
                LaurentSeries::zero(&self.base)
            }
        }))
    }
    /// Matrix over F of an E_i-linear map given by a matrix over E_i.
    pub fn restrict_matrix(&self, i: usize, g: &FMatrix) -> Result<FMatrix> {
        let d = self.degree(i);
        let (rows, cols) = (g.rows(), g.cols());
        let blocks: Vec<FMatrix> = g.entries().iter().map(|x| self.regular_rep(i, x)).collect::<Result<_>>()?;
        Ok(FMatrix::from_fn(&self.base, rows * d, cols * d, |r, c| {
            blocks[(r / d) * cols + c / d].get(r % d, c % d).clone()
        }))
    }
    /// The o_F-lattice underlying an o_{E_i}-lattice in E_i^m.
    pub fn restrict_lattice(&self, i: usize, m: &Lattice) -> Result<Lattice> {
        let fl = self.floor(i)?;
        if !m.field().same_as(&fl.residue) {
            return Err(Error::FieldMismatch);
        }
        let dim = m.dim();
        if let Some(n) = self.n {
            if dim * fl.e * fl.f != n {
                return Err(Error::DimensionMismatch(format!(
                    "an E-lattice of rank {dim} restricts to rank {}, not n = {n}",
                    dim * fl.e * fl.f
                )));
            }
        }
        let g = self.restrict_matrix(i, &m.basis())?;
        Lattice::from_generators(&g)
    }
}

impl Floor {
    fn build(base: &FiniteField, e: usize, f: usize) -> Result<Floor> {
        let order = base.order().checked_pow(f as u32).filter(|&o| o <= MAX_FIELD_ORDER).ok_or(Error::TooLarge {
            what: "residue field order",
            size: base.order().saturating_pow(f as u32),
            limit: MAX_FIELD_ORDER,
        })?;
        let residue = FiniteField::with_order(order)?;
        let base_embed = base.embedding_into(&residue)?;
        let zeta = if f > 1 { residue.generator().code() } else { 1 };
        let zeta_pows: Vec<u32> = (0..f).map(|a| residue.pow(zeta, a as i64).unwrap()).collect();
        let q = base.order() as u32;
        let mut coords = vec![Vec::new(); order as usize];
        for code in 0..order {
            let digits: Vec<u32> = (0..f).map(|a| ((code / (q as u64).pow(a as u32)) % q as u64) as u32).collect();
            let x = digits
                .iter()
                .zip(&zeta_pows)
                .fold(0u32, |acc, (&c, &z)| residue.add(acc, residue.mul(base_embed[c as usize], z)));
            coords[x as usize] = digits;
        }
        debug_assert!(coords.iter().all(|c| c.len() == f));
        Ok(Floor { e, f, residue, base_embed, coords, zeta_pows })
    }
}

impl fmt::Debug for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower(q={}, {})", self.q(), self.to_json())
    }
}
