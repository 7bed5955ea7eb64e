use btlab::building::{ball, random_gl};
use btlab::chaincx::{
    build_complex, euler_characteristic, homology_ranks, q_multinomial, relative_volume_of, CoefficientSystem,
    DetLabel, FiniteComplex, RegionTag, Style,
};
use btlab::coeffring::FiniteField;
use btlab::latmod::Lattice;
use num_bigint::BigInt;
use num_traits::Pow;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_region(seed: u64) -> (usize, FiniteComplex<btlab::building::SimplexX>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = FiniteField::with_order(2).unwrap();
    let n = rng.gen_range(2..=3);
    let center = Lattice::standard(&f, n).apply(&random_gl(&f, n, 1, &mut rng)).unwrap();
    let b = ball(&center, 1).unwrap();
    let simplices = b.simplices();
    let picked: Vec<_> =
        (0..rng.gen_range(1..8)).map(|_| simplices[rng.gen_range(0..simplices.len())].clone()).collect();
    (n, FiniteComplex::closure(picked, RegionTag::Explicit("random".into())))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ranks_scale_with_coefficient_dimension(seed in any::<u64>(), d in 1usize..4) {
        let (n, fc) = random_region(seed);
        let label = DetLabel { modulus: n as i64 };
        let one = homology_ranks(&build_complex(&fc, &CoefficientSystem::constant(1), Style::Oriented, &label).unwrap());
        let cc = build_complex(&fc, &CoefficientSystem::constant(d), Style::Labelled, &label).unwrap();
        let many = homology_ranks(&cc);
        prop_assert_eq!(many.clone(), one.iter().map(|r| d * r).collect::<Vec<_>>());
        let chi: i64 = many.iter().enumerate().map(|(q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) }).sum();
        prop_assert_eq!(chi, cc.euler_characteristic());
        prop_assert_eq!(chi, euler_characteristic(&fc, &CoefficientSystem::constant(d)).unwrap());
    }

    #[test]
    fn q_pascal_recurrence(n in 1usize..9, k in 0usize..9, q in 2u64..6) {
        prop_assume!(k <= n);
        let binom = |n: usize, k: usize| if k > n { BigInt::from(0) } else { q_multinomial(n, &[k, n - k], q).unwrap() };
        let left = binom(n, k);
        let right = if k == 0 { binom(n - 1, 0) } else { binom(n - 1, k - 1) + Pow::pow(&BigInt::from(q), k as u32) * binom(n - 1, k) };
        prop_assert_eq!(left, right);
    }

    #[test]
    fn q_one_is_the_ordinary_multinomial(parts in prop::collection::vec(0usize..4, 1..4)) {
        let n: usize = parts.iter().sum();
        let want = parts.iter().fold(factorial(n), |acc, &d| acc / factorial(d));
        prop_assert_eq!(q_multinomial(n, &parts, 1).unwrap(), want);
    }

    #[test]
    fn relative_volumes_multiply(q in 2u64..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool: [&[usize]; 6] = [&[3], &[1, 2], &[2, 1], &[1, 1, 1], &[2, 1], &[1, 2]];
        let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())];
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let ab = relative_volume_of(a, b, q).unwrap();
        let bc = relative_volume_of(b, c, q).unwrap();
        prop_assert_eq!(ab * bc, relative_volume_of(a, c, q).unwrap());
    }
}
