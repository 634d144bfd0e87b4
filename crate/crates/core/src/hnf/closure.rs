use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::{ExactScalar, OmegaPoly, SdElement};
use crate::series::Series;

/// A polynomial in `(tau, w)` for `d = 1`, keyed by `(tau exponent, w exponent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosurePolynomial {
    terms: BTreeMap<(u32, u32), ExactScalar>,
}

#[derive(Serialize)]
struct TermJson {
    tau: u32,
    omega: u32,
    coef: String,
}

impl ClosurePolynomial {
    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), ExactScalar)>) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            let e: &mut ExactScalar = terms.entry(k).or_insert_with(ExactScalar::zero);
            *e = &*e + &c;
        }
        terms.retain(|_, c: &mut ExactScalar| !c.is_zero());
        ClosurePolynomial { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), ExactScalar> {
        &self.terms
    }

    pub fn coeff(&self, tau: u32, omega: u32) -> ExactScalar {
        self.terms.get(&(tau, omega)).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn omega_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn eval_f64(&self, tau: f64, omega: f64) -> f64 {
        self.terms.iter().map(|((a, b), c)| c.to_f64() * tau.powi(*a as i32) * omega.powi(*b as i32)).sum()
    }

    /// Coefficients in `w` (lowest first) at a fixed `tau`.
    pub fn at_tau(&self, tau: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.omega_degree() as usize + 1];
        for ((a, b), c) in &self.terms {
            out[*b as usize] += c.to_f64() * tau.powi(*a as i32);
        }
        out
    }

    /// Scales to a primitive integer polynomial when all coefficients are rational,
    /// and makes the leading `w` coefficient positive (highest `w` power, then lowest `tau` power).
    fn normalized(mut self) -> Self {
        if self.terms.values().all(ExactScalar::is_rational) {
            let rats: Vec<_> = self.terms.values().map(|c| c.as_rational().expect("rational").clone()).collect();
            let lcm = rats.iter().fold(num_bigint::BigInt::one(), |l, r| l.lcm(r.denom()));
            let gcd = rats
                .iter()
                .map(|r| (r * num_rational::BigRational::from_integer(lcm.clone())).to_integer())
                .fold(num_bigint::BigInt::zero(), |g, n| g.gcd(&n));
            if !gcd.is_zero() {
                let factor = num_rational::BigRational::new(lcm, gcd.abs());
                let f = ExactScalar::from_rational(factor);
                for c in self.terms.values_mut() {
                    *c = &*c * &f;
                }
            }
        }
        let lead =
            self.terms.iter().max_by(|(a, _), (b, _)| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).map(|(_, c)| c.signum());
        if lead == Some(-1) {
            for c in self.terms.values_mut() {
                *c = -&*c;
            }
        }
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermJson> =
            self.terms.iter().map(|((a, b), c)| TermJson { tau: *a, omega: *b, coef: c.to_string() }).collect();
        serde_json::to_value(terms).expect("serializable")
    }
}

impl fmt::Display for ClosurePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut first = true;
        for k in keys {
            let c = &self.terms[k];
            let mut vars = Vec::new();
            for (name, e) in [("w", k.1), ("t", k.0)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    _ => vars.push(format!("{name}^{e}")),
                }
            }
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) if !c.is_compound() => (true, b.to_string()),
                _ => (false, if c.is_compound() { format!("({s})") } else { s }),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = vars.join("*");
            match (body.as_str(), mono.is_empty()) {
                (b, true) => write!(f, "{b}")?,
                ("1", false) => write!(f, "{mono}")?,
                (b, false) => write!(f, "{b}*{mono}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Numerator of `g(w, tau)` over the common denominator of its coefficients.
pub fn closure_polynomial(g: &Series) -> Result<ClosurePolynomial> {
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: g.dim() });
    }
    if !g.is_in_r0() {
        return Err(Error::Invalid("closure polynomial needs a series in w and tau only".into()));
    }
    let mut den = BTreeMap::new();
    for c in g.terms().values() {
        for (f, &k) in c.denominator() {
            let e = den.entry(f.clone()).or_insert(0);
            *e = k.max(*e);
        }
    }
    let mut clear = OmegaPoly::one(1);
    for (f, &k) in &den {
        clear = clear.mul(&OmegaPoly::from_form(f).pow(k));
    }
    let clear = SdElement::from_poly(clear);
    let mut terms = Vec::new();
    for (m, c) in g.iter() {
        let n = c.mul(&clear);
        debug_assert!(n.denominator().is_empty());
        for (e, a) in n.numerator().terms() {
            terms.push(((m.t()[0], e[0]), a.clone()));
        }
    }
    Ok(ClosurePolynomial::from_terms(terms).normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_sd, FrequencyVector};
    use crate::series::RingContext;

    #[test]
    fn parabola() {
        let ctx = RingContext::new(FrequencyVector::from_integers(&[1]).unwrap(), 6).unwrap();
        let g = Series::omega(&ctx, 0).add(&Series::tau(&ctx, 0).scale(&parse_sd("6/(1 + w)", 1, None).unwrap()));
        let c = closure_polynomial(&g).unwrap();
        assert_eq!(c.to_string(), "w^2 + w + 6*t");
        assert_eq!(closure_polynomial(&Series::omega(&ctx, 0)).unwrap().to_string(), "w");
        assert_eq!(c.at_tau(0.5), vec![3.0, 1.0, 1.0]);
    }

    #[test]
    fn half_frequency() {
        let alpha = FrequencyVector::new(vec![ExactScalar::from_ratio(1, 2)]).unwrap();
        let ctx = RingContext::new(alpha.clone(), 6).unwrap();
        let k = parse_sd("1/2/(1/2 + w)", 1, Some(&alpha)).unwrap();
        let g = Series::omega(&ctx, 0).add(&Series::tau(&ctx, 0).scale(&k));
        assert_eq!(closure_polynomial(&g).unwrap().to_string(), "2*w^2 + w + t");
    }
}
