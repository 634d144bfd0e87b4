//! The compositional inverse of the anharmonic normal form as a hypergeometric series.

use hnf::birkhoff::{anharmonic_oscillator, bnf_iterate, hypergeometric_2f1, hypergeometric_inverse, tau_power_series};
use hnf::scalars::ExactScalar;

fn main() -> hnf::Result<()> {
    let b = tau_power_series(&bnf_iterate(&anharmonic_oscillator(18)?, 18)?.b, 8)?;
    println!("B(t)      = {b}");
    let inv = b.reverse()?;
    println!("t(B)      = {inv}");
    println!("b 2F1(1/3, 2/3; 2; 27b) = {}", hypergeometric_inverse(8));
    println!("matches: {}", inv == hypergeometric_inverse(8));

    let third = ExactScalar::from_ratio(1, 3);
    let f = hypergeometric_2f1(
        &third,
        &ExactScalar::from_ratio(2, 3),
        &ExactScalar::one(),
        &ExactScalar::from_integer(27),
        8,
    )?;
    println!("dt/dB     = {}", inv.derivative());
    println!("2F1(1/3, 2/3; 1; 27b) = {f}");
    Ok(())
}
