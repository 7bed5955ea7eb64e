use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use super::group::GroupElement;
use crate::building::{LatticeChain, SimplexX};
use crate::coeffring::{FFElem, FiniteField, LaurentSeries};
use crate::error::{Error, Result};
use crate::tower::{j_embed, ChainOverFloor, FloorSpec, TowerField};

/// γ ∈ K (the top floor of a tower) acting on F^n through the regular
/// representation.
#[derive(Clone, Debug)]
pub struct EllipticElement {
    tower: TowerField,
    gamma: LaurentSeries,
    embedded: GroupElement,
}

/// Outcome of the minimality test, with the normalized residue.
#[derive(Clone, Debug, Serialize)]
pub struct Minimality {
    pub minimal: bool,
    pub valuation: i64,
    pub e: usize,
    pub f: usize,
    pub gcd: i64,
    /// Degree over F_q of the residue of t^{-v} γ^e.
    pub residue_degree: usize,
    #[serde(skip)]
    pub residue: FFElem,
}

impl EllipticElement {
    /// `gamma` is an s_K-expansion over the residue field of the top floor.
    /// When the tower carries n, γ acts diagonally on K^{n/[K:F]}.
    pub fn new(tower: TowerField, gamma: LaurentSeries) -> Result<Self> {
        let top = tower.top();
        if !gamma.field().same_as(tower.residue(top)?) {
            return Err(Error::FieldMismatch);
        }
        gamma.valuation()?;
        let m = tower.n().map_or(1, |n| n / tower.degree(top));
        let embedded = GroupElement::new(tower.scalar_matrix(top, &gamma, m)?)?;
        Ok(EllipticElement { tower, gamma, embedded })
    }
    /// γ = s_K in K = F[x]/(x^n − t), whose matrix is the companion matrix
    /// of x^n − t.
    pub fn companion_x_n_minus_t(base: &FiniteField, n: usize) -> Result<Self> {
        let tower = TowerField::new(base, vec![FloorSpec { e: n, f: 1 }], Some(n))?;
        let s = LaurentSeries::monomial(tower.residue(1)?, 1, 1);
        Self::new(tower, s)
    }
    /// Parses the expansion in the variable `s` over the top residue field.
    pub fn from_expansion(tower: TowerField, text: &str) -> Result<Self> {
        let gamma = LaurentSeries::parse(tower.residue(tower.top())?, text, 's')?;
        Self::new(tower, gamma)
    }
    pub fn tower(&self) -> &TowerField {
        &self.tower
    }
    pub fn gamma(&self) -> &LaurentSeries {
        &self.gamma
    }
    pub fn embedded(&self) -> &GroupElement {
        &self.embedded
    }
    pub fn n(&self) -> usize {
        self.embedded.dim()
    }
    /// [K : F].
    pub fn degree(&self) -> usize {
        self.tower.degree(self.tower.top())
    }
    /// The simplex of the o_K-chain (s_K^k o_K)_k, stable under γ.
    pub fn stable_chain(&self) -> Result<(LatticeChain, SimplexX)> {
        let top = self.tower.top();
        let m = self.n() / self.degree();
        let c = LatticeChain::standard(self.tower.residue(top)?, &[m])?;
        j_embed(&self.tower, &ChainOverFloor::new(&self.tower, top, c)?)
    }
    /// {"q": q, "tower": {...}, "expansion": "..."}.
    pub fn to_json(&self) -> Value {
        json!({ "q": self.tower.q(), "tower": self.tower.to_json(), "expansion": self.gamma.to_text('s') })
    }
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("elliptic element must be an object".into()))?;
        if let Some(k) = obj.keys().find(|k| !["q", "tower", "expansion"].contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown field {k:?}")));
        }
        let q = obj.get("q").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing q".into()))?;
        let base = FiniteField::with_order(q)?;
        let tower =
            TowerField::from_json(&base, obj.get("tower").ok_or_else(|| Error::Parse("missing tower".into()))?)?;
        let text =
            obj.get("expansion").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing expansion".into()))?;
        Self::from_expansion(tower, text)
    }
}

/// gcd(v_K(γ), e(K/F)) = 1 and the residue of t^{-v} γ^e generates
/// F_{q^f} over F_q.
pub fn is_minimal(g: &EllipticElement) -> Result<Minimality> {
    let top = g.tower.top();
    let (e, f) = (g.tower.e(top), g.tower.f(top));
    let v = g.gamma.valuation()?;
    let lead = g.gamma.leading_coeff()?;
    let rf = g.tower.residue(top)?;
    // t^{-v} γ^e = s^{-ev} γ^e has residue lead^e.
    let residue = rf.elem(rf.pow(lead.code(), e as i64).expect("nonzero leading coefficient"));
    let residue_degree = rf.degree_over(residue.code(), g.tower.q());
    let gcd = v.gcd(&(e as i64));
    Ok(Minimality { minimal: gcd == 1 && residue_degree == f, valuation: v, e, f, gcd, residue_degree, residue })
}
