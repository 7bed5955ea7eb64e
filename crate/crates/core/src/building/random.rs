use rand::seq::SliceRandom;
use rand::Rng;

use super::chain::LatticeChain;
use crate::coeffring::{FiniteField, LaurentSeries};
use crate::error::Result;
use crate::latmod::FMatrix;

fn random_poly<R: Rng + ?Sized>(f: &FiniteField, lo: i64, hi: i64, rng: &mut R) -> LaurentSeries {
    let codes: Vec<u32> = (lo..=hi).map(|_| rng.gen_range(0..f.order() as u32)).collect();
    LaurentSeries::from_codes(f, lo, codes, None)
}

/// An exact element of GL_n(F): lower unitriangular · upper unitriangular ·
/// monomial matrix, with Laurent polynomial entries of exponents in
/// [-spread, spread].
pub fn random_gl<R: Rng + ?Sized>(f: &FiniteField, n: usize, spread: i64, rng: &mut R) -> FMatrix {
    let unitri = |lower: bool, rng: &mut R| {
        FMatrix::from_fn(f, n, n, |i, j| {
            if i == j {
                LaurentSeries::one(f)
            } else if (i > j) == lower {
                random_poly(f, -spread, spread, rng)
            } else {
                LaurentSeries::zero(f)
            }
        })
    };
    let l = unitri(true, rng);
    let u = unitri(false, rng);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
    let mono = FMatrix::from_fn(f, n, n, |i, j| {
        if perm[j] == i {
            LaurentSeries::monomial(f, 1, exps[j])
        } else {
            LaurentSeries::zero(f)
        }
    });
    l.mul(&u).and_then(|m| m.mul(&mono)).expect("square matrices of equal size")
}

/// g · (standard chain with d-sequence `d`) for a random g from [`random_gl`].
pub fn random_chain<R: Rng + ?Sized>(f: &FiniteField, d: &[usize], spread: i64, rng: &mut R) -> Result<LatticeChain> {
    let n = d.iter().sum();
    LatticeChain::standard(f, d)?.transform(&random_gl(f, n, spread, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::adapted_basis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adapted_bases_of_random_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3, 4] {
            let f = FiniteField::with_order(q).unwrap();
            for d in [vec![1, 2], vec![2, 1, 1], vec![3]] {
                let c = random_chain(&f, &d, 2, &mut rng).unwrap();
                assert_eq!(c.d_sequence(), d);
                let (g, g_inv) = adapted_basis(&c).unwrap();
                assert_eq!(g.mul(&g_inv).unwrap(), FMatrix::identity(&f, g.rows()));
                let std = LatticeChain::standard(&f, &d).unwrap();
                for k in 0..d.len() {
                    assert_eq!(std.lattices()[k].apply(&g).unwrap(), c.lattices()[k]);
                }
            }
        }
    }
}
