//! Rational truncations `f_n(x, y)`: series solution, truncated Birkhoff values and
//! Newton continuation at `x = 1/2`.

use hnf::app::{
    birkhoff_truncation_table, format_poly, newton_continuation, poincare_birkhoff_series, PoincareTruncation,
};
use hnf::scalars::ExactScalar;

fn main() -> hnf::Result<()> {
    let x0 = 0.5;
    println!("b(x) = {}", poincare_birkhoff_series(9)?);
    for (n, v) in birkhoff_truncation_table(x0, 8)?.iter().enumerate() {
        println!("b_{}(1/2) = {v}", n + 1);
    }
    let half = ExactScalar::from_ratio(1, 2);
    for n in 1..=4 {
        let f = PoincareTruncation::new(n)?;
        println!("{f}  ->  {}", format_poly(&f.cleared_at(&half)?, "y"));
    }
    let trace = newton_continuation(x0, 18, 0.5)?;
    for e in &trace.entries {
        println!("n = {:>2}: y = {:.6} after {} iterations, residual {:.1e}", e.n, e.root, e.iterations, e.residual);
    }
    Ok(())
}
