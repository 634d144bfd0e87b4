//! Exact arithmetic in `Q` and in real quadratic fields `Q(√m)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `a + b√m` of `Q(√m)`, or a plain rational when `b = 0`.
///
/// The radicand travels with the value so that rationals mix freely with
/// elements of any quadratic field. Canonical form keeps `m = 0` whenever the
/// radical part vanishes, which makes the derived equality agree with field
/// equality. The derived ordering is structural (used for map keys only); use
/// [`ExactScalar::cmp_value`] for the real order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactScalar {
    rat: BigRational,
    rad: BigRational,
    m: u32,
}

fn is_square_free(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let mut k = 2u32;
    while k.saturating_mul(k) <= m {
        if m.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

fn join_radicand(a: u32, b: u32) -> u32 {
    match (a, b) {
        (0, x) | (x, 0) => x,
        (x, y) if x == y => x,
        (x, y) => panic!("{}", Error::FieldMismatch(x, y)),
    }
}

impl ExactScalar {
    fn make(rat: BigRational, rad: BigRational, m: u32) -> Self {
        if rad.is_zero() {
            ExactScalar { rat, rad, m: 0 }
        } else {
            ExactScalar { rat, rad, m }
        }
    }

    pub fn zero() -> Self {
        ExactScalar::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        ExactScalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(rat: BigRational) -> Self {
        ExactScalar { rat, rad: BigRational::zero(), m: 0 }
    }

    /// `a + b√m`; `m` must be square-free and greater than one.
    pub fn quadratic(a: BigRational, b: BigRational, m: u32) -> Result<Self> {
        if !is_square_free(m) {
            return Err(Error::BadRadicand(m));
        }
        Ok(ExactScalar::make(a, b, m))
    }

    /// `√m`.
    pub fn sqrt(m: u32) -> Result<Self> {
        ExactScalar::quadratic(BigRational::zero(), BigRational::one(), m)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.rad
    }

    /// Radicand of the field this value lives in, `0` for rationals.
    pub fn radicand(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rad.is_zero() && self.rat.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    /// Field norm `a² − m b²`.
    pub fn norm(&self) -> BigRational {
        let m = BigRational::from_integer(BigInt::from(self.m));
        &self.rat * &self.rat - &self.rad * &self.rad * m
    }

    pub fn conjugate(&self) -> Self {
        ExactScalar::make(self.rat.clone(), -self.rad.clone(), self.m)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(ExactScalar::make(c.rat / &n, c.rad / &n, self.m))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = ExactScalar::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of the real number `a + b√m` (with `√m > 0`).
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.rad);
        if sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with m b²
        let m = BigRational::from_integer(BigInt::from(self.m));
        let a2 = &self.rat * &self.rat;
        let b2m = &self.rad * &self.rad * m;
        match a2.cmp(&b2m) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.rad.is_zero() {
            return a;
        }
        let b = self.rad.to_f64().unwrap_or(f64::NAN);
        a + b * f64::from(self.m).sqrt()
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(ExactScalar::from_rational)
            .ok_or_else(|| Error::Invalid(format!("{x} is not finite")))
    }
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_integer(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        ExactScalar::from_rational(r)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let m = join_radicand(self.m, rhs.m);
        ExactScalar::make(&self.rat + &rhs.rat, &self.rad + &rhs.rad, m)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let m = join_radicand(self.m, rhs.m);
        ExactScalar::make(&self.rat - &rhs.rat, &self.rad - &rhs.rad, m)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.rad.is_zero() && rhs.rad.is_zero() {
            return ExactScalar::from_rational(&self.rat * &rhs.rat);
        }
        let m = join_radicand(self.m, rhs.m);
        let mq = BigRational::from_integer(BigInt::from(m));
        let rat = &self.rat * &rhs.rat + &self.rad * &rhs.rad * mq;
        let rad = &self.rat * &rhs.rad + &self.rad * &rhs.rat;
        ExactScalar::make(rat, rad, m)
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::make(-self.rat.clone(), -self.rad.clone(), self.m)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $f(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $f(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl ExactScalar {
    /// True when the textual form contains a binary `+`/`-`, so it needs
    /// parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        !self.rat.is_zero() && !self.rad.is_zero()
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rad.is_zero() {
            return write!(f, "{}", fmt_rational(&self.rat));
        }
        let radical = |r: &BigRational| -> String {
            if r.is_one() {
                format!("√{}", self.m)
            } else if (-r).is_one() {
                format!("-√{}", self.m)
            } else {
                format!("{}√{}", fmt_rational(r), self.m)
            }
        };
        if self.rat.is_zero() {
            return write!(f, "{}", radical(&self.rad));
        }
        let r = radical(&self.rad);
        if r.starts_with('-') {
            write!(f, "{}{}", fmt_rational(&self.rat), r)
        } else {
            write!(f, "{}+{}", fmt_rational(&self.rat), r)
        }
    }
}
