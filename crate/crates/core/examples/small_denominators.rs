//! Coefficients with factored denominators `(alpha + w, J)` for `alpha = (1, √2)`.

use hnf::moser::homological_l;
use hnf::scalars::{ExactScalar, FrequencyVector, LinearForm, SdElement};
use hnf::series::{Monomial, RingContext, Series};

fn main() -> hnf::Result<()> {
    let alpha = FrequencyVector::new(vec![ExactScalar::one(), ExactScalar::sqrt(2)?])?;
    let ctx = RingContext::new(alpha.clone(), 8)?;
    for j in [[1, -1], [3, -2], [7, -5]] {
        let (g, form) = LinearForm::new(&alpha, &j)?;
        let x = SdElement::inverse_form(&form, 1);
        println!(
            "J = {j:?}: (alpha, J) = {}, g = {g}, 1/form at w = 0: {:.6}",
            alpha.pair(&j)?,
            x.eval_f64(&[0.0, 0.0])?
        );
    }
    let (_, form) = LinearForm::new(&alpha, &[1, -1])?;
    let x = SdElement::inverse_form(&form, 2);
    let w = [-1.0 + 2f64.sqrt(), 0.0];
    println!("near the resonance w1 - w2 = sqrt2 - 1: {:?}", x.eval_f64(&w));

    let m = Series::monomial(&ctx, Monomial::new(vec![2, 0], vec![0, 1], vec![0, 0]), SdElement::one(2));
    println!("L(p1^2 q2) = {}", homological_l(&m)?);
    Ok(())
}
