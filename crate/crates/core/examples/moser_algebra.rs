//! I-adic decomposition, the split `R0 + I^2` and the homological equation.

use hnf::moser::{a0, iadic_decompose, j_a, project_moser, split_r0_i2};
use hnf::sampling::SeriesSampler;
use hnf::scalars::FrequencyVector;
use hnf::series::{RingContext, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hnf::Result<()> {
    let ctx = RingContext::new(FrequencyVector::from_integers(&[1])?, 10)?;
    let pq = Series::p(&ctx, 0).mul(&Series::q(&ctx, 0));
    let x = pq.pow(2).add(&Series::tau(&ctx, 0).mul(&pq));
    for (c, part) in iadic_decompose(&x).parts() {
        println!("f^{c:?}: {part}");
    }
    let split = split_r0_i2(&x);
    println!("r0 = {}, i2 = {}, rest = {}", split.r0, split.i2, split.rest);
    println!("Moser algebra: {}", project_moser(&x).in_moser_algebra());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = SeriesSampler { min_degree: 3, max_degree: 6, terms: 3, ..Default::default() }.sample(&ctx, &mut rng);
    let t = SeriesSampler { min_degree: 4, max_degree: 6, terms: 1, ..Default::default() }
        .sample_ideal_square(&ctx, &mut rng);
    let v = j_a(&m, &t)?;
    let r = v.apply(&a0(&ctx).add(&t)).sub(&m);
    println!("m = {m}");
    println!("T = {t}");
    println!("j_A(m)(A0 + T) - m = {r}");
    println!("in R0 + I^2: {}", split_r0_i2(&r).in_r0_plus_i2());
    Ok(())
}
