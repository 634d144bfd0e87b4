use std::sync::Arc;

use hnf::app::{PoincareTruncation, ProblemSpec};
use hnf::moser::{iadic_decompose, split_r0_i2};
use hnf::poisson::bracket;
use hnf::sampling::SeriesSampler;
use hnf::scalars::{parse_scalar, ExactScalar, FrequencyVector};
use hnf::series::{RingContext, Series};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx(n: u32) -> Arc<RingContext> {
    RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), n).unwrap()
}

fn sample(seed: u64, s: &SeriesSampler, c: &Arc<RingContext>) -> Series {
    s.sample(c, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_json_round_trip(seed in any::<u64>()) {
        let c = ctx(9);
        let x = sample(seed, &SeriesSampler::default(), &c);
        let back = Series::from_json(&c, &x.to_json()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn ring_laws(a in any::<u64>(), b in any::<u64>(), d in any::<u64>()) {
        let c = ctx(8);
        let s = SeriesSampler { min_degree: 0, max_degree: 4, terms: 3, ..Default::default() };
        let (x, y, z) = (sample(a, &s, &c), sample(b, &s, &c), sample(d, &s, &c));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn central_elements_commute(a in any::<u64>(), b in any::<u64>()) {
        let c = ctx(8);
        let f = sample(a, &SeriesSampler::central(0, 6, 3), &c);
        let g = sample(b, &SeriesSampler::default(), &c);
        prop_assert!(bracket(&f, &g).is_zero());
    }

    #[test]
    fn ideal_square_split(a in any::<u64>()) {
        let c = ctx(10);
        let t = SeriesSampler { min_degree: 4, max_degree: 8, terms: 2, ..Default::default() }
            .sample_ideal_square(&c, &mut ChaCha8Rng::seed_from_u64(a));
        let split = split_r0_i2(&t);
        prop_assert!(split.in_i2());
        prop_assert_eq!(iadic_decompose(&t).reassemble(), t);
    }

    #[test]
    fn truncation_roots_avoid_poles(x in 0.05f64..0.6, n in 1usize..8) {
        let f = PoincareTruncation::new(n).unwrap();
        let exact = ExactScalar::from_f64(x).unwrap();
        let c: Vec<f64> = f.numerator_at(&exact).iter().map(ExactScalar::to_f64).collect();
        // the numerator and f_n share their zeros away from the poles
        let y = 0.3;
        let den: f64 = (1..=n).map(|k| 1.0 + k as f64 * y).product();
        let num: f64 = c.iter().rev().fold(0.0, |acc, a| acc * y + a);
        prop_assert!((num - f.eval_f64(x, y) * den).abs() <= 1e-9 * den.abs().max(1.0));
    }

    #[test]
    fn problem_spec_round_trip(coef in -50i64..50, den in 1i64..9) {
        let mut spec = ProblemSpec::anharmonic();
        spec.hamiltonian[1].coef = format!("{coef}/{den}");
        let back = ProblemSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(parse_scalar(&spec.hamiltonian[1].coef).unwrap(), ExactScalar::from_ratio(coef, den));
    }
}
