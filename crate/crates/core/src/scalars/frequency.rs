use std::cmp::Ordering;

use num_integer::Integer;

use super::field::ExactScalar;
use crate::error::{Error, Result};

/// The frequency vector `alpha` of the quadratic part `Σ alpha_i p_i q_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyVector {
    alpha: Vec<ExactScalar>,
    certified: u32,
}

/// Proof that `(alpha, J) ≠ 0` for every `0 < |J|₁ ≤ bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonResonance {
    pub bound: u32,
}

impl FrequencyVector {
    pub fn new(alpha: Vec<ExactScalar>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Invalid("frequency vector must have d >= 1".into()));
        }
        Ok(FrequencyVector { alpha, certified: 0 })
    }

    pub fn from_integers(alpha: &[i64]) -> Result<Self> {
        FrequencyVector::new(alpha.iter().map(|&a| ExactScalar::from_integer(a)).collect())
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn components(&self) -> &[ExactScalar] {
        &self.alpha
    }

    /// Largest `|J|₁` for which non-resonance has been verified.
    pub fn certified_bound(&self) -> u32 {
        self.certified
    }

    /// `(alpha, J) = Σ alpha_i J_i`.
    pub fn pair(&self, j: &[i64]) -> Result<ExactScalar> {
        if j.len() != self.alpha.len() {
            return Err(Error::DimensionMismatch { expected: self.alpha.len(), got: j.len() });
        }
        Ok(self
            .alpha
            .iter()
            .zip(j)
            .filter(|(_, &k)| k != 0)
            .fold(ExactScalar::zero(), |acc, (a, &k)| &acc + &(a * &ExactScalar::from_integer(k))))
    }

    /// Exhaustive exact check over all `0 < |J|₁ ≤ bound`; a violation is
    /// reported as a primitive, sign-normalized `J`.
    pub fn check_nonresonant(&self, bound: u32) -> std::result::Result<NonResonance, Vec<i64>> {
        let d = self.dim();
        for norm in 1..=bound {
            let mut found = None;
            for_each_vector(d, norm as i64, &mut |j| {
                if found.is_none() && normalized(j) && self.pair(j).map(|x| x.is_zero()).unwrap_or(false) {
                    found = Some(primitive(j).1);
                }
            });
            if let Some(j) = found {
                return Err(j);
            }
        }
        Ok(NonResonance { bound })
    }

    /// Runs [`check_nonresonant`](Self::check_nonresonant) and records the bound.
    pub fn certify(mut self, bound: u32) -> Result<Self> {
        if bound > self.certified {
            self.check_nonresonant(bound).map_err(Error::Resonant)?;
            self.certified = bound;
        }
        Ok(self)
    }
}

/// Enumerates integer vectors of length `d` with `|J|₁ = norm`.
fn for_each_vector(d: usize, norm: i64, f: &mut dyn FnMut(&[i64])) {
    fn rec(buf: &mut Vec<i64>, d: usize, left: i64, f: &mut dyn FnMut(&[i64])) {
        if buf.len() + 1 == d {
            for x in if left == 0 { vec![0] } else { vec![left, -left] } {
                buf.push(x);
                f(buf);
                buf.pop();
            }
            return;
        }
        for a in 0..=left {
            let signs: &[i64] = if a == 0 { &[1] } else { &[1, -1] };
            for &s in signs {
                buf.push(s * a);
                rec(buf, d, left - a, f);
                buf.pop();
            }
        }
    }
    rec(&mut Vec::with_capacity(d), d, norm, f);
}

fn normalized(j: &[i64]) -> bool {
    j.iter().find(|&&x| x != 0).map(|&x| x > 0).unwrap_or(false)
}

/// Splits `J = g · J'` with `J'` primitive and its first nonzero entry positive.
pub(crate) fn primitive(j: &[i64]) -> (i64, Vec<i64>) {
    let g = j.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return (0, j.to_vec());
    }
    let sign = if normalized(j) { 1 } else { -1 };
    let g = g * sign;
    (g, j.iter().map(|&x| x / g).collect())
}

/// The resonance form `(alpha + w, J)` for a primitive, normalized `J`,
/// stored as its constant `(alpha, J)` and its integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    j: Vec<i64>,
    constant: ExactScalar,
}

impl LinearForm {
    /// Factors `(alpha + w, J) = g · form` for arbitrary nonzero `J`.
    pub fn new(alpha: &FrequencyVector, j: &[i64]) -> Result<(i64, LinearForm)> {
        let (g, jp) = primitive(j);
        if g == 0 {
            return Err(Error::ResonantDivisor(j.to_vec()));
        }
        let constant = alpha.pair(&jp)?;
        if constant.is_zero() {
            return Err(Error::ResonantDivisor(jp));
        }
        Ok((g, LinearForm { j: jp, constant }))
    }

    /// Builds a form from its parts; `j` must already be primitive and normalized.
    pub fn from_parts(j: Vec<i64>, constant: ExactScalar) -> Result<LinearForm> {
        let (g, _) = primitive(&j);
        if g != 1 {
            return Err(Error::Invalid(format!("form coefficients {j:?} are not primitive")));
        }
        if constant.is_zero() {
            return Err(Error::ResonantDivisor(j));
        }
        Ok(LinearForm { j, constant })
    }

    pub fn j(&self) -> &[i64] {
        &self.j
    }

    pub fn constant(&self) -> &ExactScalar {
        &self.constant
    }

    pub fn dim(&self) -> usize {
        self.j.len()
    }

    pub fn eval_f64(&self, w: &[f64]) -> f64 {
        self.constant.to_f64() + self.j.iter().zip(w).map(|(&k, x)| k as f64 * x).sum::<f64>()
    }

    pub fn eval_exact(&self, w: &[ExactScalar]) -> ExactScalar {
        self.j.iter().zip(w).fold(self.constant.clone(), |acc, (&k, x)| &acc + &(x * &ExactScalar::from_integer(k)))
    }
}

impl PartialOrd for LinearForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.j.cmp(&other.j).then_with(|| self.constant.cmp(&other.constant))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing() {
        let a = FrequencyVector::from_integers(&[1]).unwrap();
        assert_eq!(a.pair(&[1]).unwrap(), ExactScalar::one());
        assert_eq!(a.pair(&[3]).unwrap(), ExactScalar::from_integer(3));
        let b = FrequencyVector::new(vec![ExactScalar::one(), ExactScalar::sqrt(2).unwrap()]).unwrap();
        let expect = &ExactScalar::from_integer(2) - &ExactScalar::sqrt(2).unwrap();
        assert_eq!(b.pair(&[2, -1]).unwrap(), expect);
        assert!(matches!(b.pair(&[1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn resonance_checks() {
        let a = FrequencyVector::from_integers(&[1]).unwrap();
        assert_eq!(a.check_nonresonant(10), Ok(NonResonance { bound: 10 }));
        let b = FrequencyVector::from_integers(&[1, 1]).unwrap();
        assert_eq!(b.check_nonresonant(2), Err(vec![1, -1]));
        let c = FrequencyVector::new(vec![ExactScalar::one(), ExactScalar::sqrt(2).unwrap()]).unwrap();
        assert!(c.check_nonresonant(20).is_ok());
        let e = FrequencyVector::from_integers(&[1, 2]).unwrap();
        assert_eq!(e.check_nonresonant(3), Err(vec![2, -1]));
    }

    #[test]
    fn enumeration_counts() {
        // number of J in Z^2 with |J|_1 = n is 4n
        for n in 1..6 {
            let mut count = 0;
            for_each_vector(2, n, &mut |_| count += 1);
            assert_eq!(count, 4 * n);
        }
    }

    #[test]
    fn forms_are_primitive() {
        let a = FrequencyVector::from_integers(&[1]).unwrap();
        let (g, f) = LinearForm::new(&a, &[-3]).unwrap();
        assert_eq!(g, -3);
        assert_eq!(f.j(), &[1]);
        assert_eq!(f.constant(), &ExactScalar::one());
        assert!(matches!(LinearForm::new(&a, &[0]), Err(Error::ResonantDivisor(_))));
        let b = FrequencyVector::from_integers(&[1, 1]).unwrap();
        assert_eq!(LinearForm::new(&b, &[2, -2]), Err(Error::ResonantDivisor(vec![1, -1])));
    }
}
