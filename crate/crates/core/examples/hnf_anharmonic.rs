//! Three doubling steps on `pq + p^3 + q^3`, with the per-step membership report.

use hnf::birkhoff::anharmonic_oscillator;
use hnf::hnf::{hnf_run, required_trunc};

fn main() -> hnf::Result<()> {
    let steps = 3;
    let n = required_trunc(steps);
    let states = hnf_run(&anharmonic_oscillator(n)?, steps, n)?;
    for s in &states[1..] {
        println!("A_H,{} = {}", s.n, s.normal_form());
        println!("  v_{} = {}", s.n, s.v);
    }
    for r in &states[steps as usize].reports {
        println!("S_{}: R0 + I^2 {}, Moser algebra {}", r.step, r.in_r0_plus_i2, r.in_moser_algebra);
    }
    Ok(())
}
