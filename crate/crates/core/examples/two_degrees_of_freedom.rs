//! Two degrees of freedom with frequencies `(1, √2)`: normal form, generating
//! functions and the recovered Birkhoff series.

use hnf::hnf::{hnf_run, verify_consistency, GeneratingFunctions};
use hnf::sampling::SeriesSampler;
use hnf::scalars::{ExactScalar, FrequencyVector};
use hnf::series::{RingContext, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hnf::Result<()> {
    let alpha = FrequencyVector::new(vec![ExactScalar::one(), ExactScalar::sqrt(2)?])?;
    let ctx = RingContext::new(alpha, 6)?;
    let mut h = Series::zero(&ctx);
    for (i, a) in ctx.alpha().components().iter().enumerate() {
        h = h.add(&Series::p(&ctx, i).mul(&Series::q(&ctx, i)).scale_scalar(a));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = h.add(&SeriesSampler::phase_space(3, 3, 3).sample(&ctx, &mut rng));
    println!("H = {h}");

    let states = hnf_run(&h, 2, 6)?;
    let last = states.last().expect("run has a final state");
    println!("A_H,2 = {}", last.normal_form());
    for (i, g) in GeneratingFunctions::from_state(last)?.g.iter().enumerate() {
        println!("G_{} = {g}", i + 1);
    }
    println!("B = {}", verify_consistency(&h, 2, 6)?);
    Ok(())
}
