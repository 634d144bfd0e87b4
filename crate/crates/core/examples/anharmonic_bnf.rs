//! Birkhoff normal form of `pq + p^3 + q^3` through `tau^8`.

use std::time::Instant;

use hnf::birkhoff::{anharmonic_oscillator, bnf_iterate};

fn main() -> hnf::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(18);
    let start = Instant::now();
    let h = anharmonic_oscillator(n)?;
    let r = bnf_iterate(&h, n)?;
    println!("B(tau) = {}", r.b);
    println!("{} generators, {:.2?}", r.steps.len(), start.elapsed());
    Ok(())
}
