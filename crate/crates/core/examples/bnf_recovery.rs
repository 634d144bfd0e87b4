//! Recovers the Birkhoff normal form from the Hamiltonian normal form for
//! random cubic + quartic perturbations of `pq`.

use std::time::Instant;

use hnf::hnf::verify_consistency;
use hnf::sampling::SeriesSampler;
use hnf::scalars::FrequencyVector;
use hnf::series::{RingContext, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hnf::Result<()> {
    let steps = 3;
    let ctx = RingContext::new(FrequencyVector::from_integers(&[1])?, 10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let pq = Series::p(&ctx, 0).mul(&Series::q(&ctx, 0));
    for _ in 0..5 {
        let h = pq.add(&SeriesSampler::phase_space(3, 4, 5).sample(&ctx, &mut rng));
        let start = Instant::now();
        let b = verify_consistency(&h, steps, 10)?;
        println!("H = {h}");
        println!("  B = {b}  ({:.2?})", start.elapsed());
    }
    Ok(())
}
