//! Newton continuation of `w(tau0)` along the closures of `G_2`, `G_3`, `G_4`.

use hnf::app::hnf_newton_demo;
use hnf::birkhoff::anharmonic_oscillator;
use hnf::hnf::required_trunc;

fn main() -> hnf::Result<()> {
    let h = anharmonic_oscillator(required_trunc(4))?;
    for tau0 in [0.001, 0.01, 0.03] {
        let demo = hnf_newton_demo(&h, tau0, 4)?;
        println!("tau0 = {tau0}");
        for (e, a) in demo.trace.entries.iter().zip(&demo.energies) {
            println!("  k = {}: w = {:+.12}, A = {a:.12}", e.n, e.root);
        }
    }
    Ok(())
}
