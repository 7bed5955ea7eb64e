use num_traits::One;
use serde::Serialize;

use super::group::GroupElement;
use super::trace::{lefschetz_sum, TraceOracle, TraceSum};
use crate::building::SimplexX;
use crate::chaincx::{relative_volume_of, Cell, CoefficientSystem, FiniteComplex, OrbitKey, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct EPTerm {
    pub key: OrbitKey,
    pub degree: usize,
    /// (−1)^q vol(K_ref)/vol(K_σ), K_σ the full stabilizer of σ.
    #[serde(serialize_with = "ser_rational")]
    pub weight: Rational,
    /// The same ratio with parahoric subgroups U(A) in place of stabilizers.
    #[serde(serialize_with = "ser_rational")]
    pub parahoric_weight: Rational,
    pub dim: usize,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Σ_q Σ_σ (−1)^q vol(K_σ)^{-1} (trace on λ_σ) ε_σ, as formal terms.
#[derive(Clone, Debug, Serialize)]
pub struct EPFunction {
    pub terms: Vec<EPTerm>,
}

/// Weights are normalized so that the representative with the smallest
/// parahoric subgroup gets ±1.
pub fn ep_function_build(orbit_reps: &[SimplexX], cs: &CoefficientSystem, q: u64) -> Result<EPFunction> {
    if orbit_reps.is_empty() {
        return Ok(EPFunction { terms: Vec::new() });
    }
    let invs: Vec<_> = orbit_reps.iter().map(|s| s.chain().invariants()).collect();
    // vol(U_i)/vol(U_0)
    let vols: Vec<Rational> = invs.iter().map(|i| relative_volume_of(&i.d, &invs[0].d, q)).collect::<Result<_>>()?;
    // N(A)/U(A)F^× is cyclic of order e/p.
    let stab: Vec<Rational> =
        vols.iter().zip(&invs).map(|(v, i)| v * Rational::from_integer(((i.e / i.p) as i64).into())).collect();
    let r = (0..vols.len()).min_by(|&a, &b| vols[a].cmp(&vols[b])).unwrap();
    let mut terms = Vec::new();
    for (i, s) in orbit_reps.iter().enumerate() {
        let sign = if s.dim() % 2 == 0 { Rational::one() } else { -Rational::one() };
        terms.push(EPTerm {
            key: s.orbit_key(),
            degree: s.dim(),
            weight: &sign * &stab[r] / &stab[i],
            parahoric_weight: &sign * &vols[r] / &vols[i],
            dim: cs.dim_of(&s.orbit_key())?,
        });
    }
    let mut keys: Vec<&OrbitKey> = terms.iter().map(|t| &t.key).collect();
    keys.sort();
    if keys.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Invalid("two representatives of the same orbit".into()));
    }
    Ok(EPFunction { terms })
}

impl EPFunction {
    /// The orbital integral at g, computed as the Lefschetz sum over a region.
    pub fn evaluate<C: Cell>(
        &self,
        g: &GroupElement,
        region: &FiniteComplex<C>,
        oracle: &dyn TraceOracle,
    ) -> Result<TraceSum> {
        Ok(lefschetz_sum(g, region, oracle)?.by_fixed_dim)
    }
}
