//! Generating functions `G_k`, the solved frequency `w(t)` and the closure polynomials.

use hnf::birkhoff::anharmonic_oscillator;
use hnf::hnf::{
    closure_polynomial, generating_functions, hamiltonian_normal_form, implicit_solve, pi_substitute, required_trunc,
};

fn main() -> hnf::Result<()> {
    for steps in 2..=3 {
        let n = required_trunc(steps);
        let h = anharmonic_oscillator(n)?;
        let g = generating_functions(&h, steps, n)?;
        let w = implicit_solve(&g, n - 2)?;
        println!("k = {steps}");
        println!("  G   = {}", g.g[0]);
        println!("  w   = {}", w[0]);
        println!("  closure: {} = 0", closure_polynomial(&g.g[0])?);
        let a = hamiltonian_normal_form(&h, steps, n)?;
        println!("  A(w(t), t) = {}", pi_substitute(&a, &w)?);
    }
    Ok(())
}
