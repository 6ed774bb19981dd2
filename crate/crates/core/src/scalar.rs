//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! Every quantity in this crate (structure constants, form values, matrix
//! entries) is a [`Scalar`]. Components are arbitrary-precision reduced
//! fractions, so elimination never rounds.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseScalarError};

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

/// A Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rational,
    im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
    }

    /// `num/den` as a real scalar. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            Rational::new(BigInt::from(num), BigInt::from(den)),
            Rational::zero(),
        )
    }

    pub fn real(re: Rational) -> Self {
        Scalar::new(re, Rational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus `re^2 + im^2`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_real() {
            return Ok(Scalar::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Ok(Scalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        Ok(self * &rhs.inv()?)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::new(Rational::one(), Rational::zero())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // Most entries in constraint systems are real; skip the cross terms.
        if self.is_real() && rhs.is_real() {
            return Scalar::real(&self.re * &rhs.re);
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical rendering: `3/4`, `-2*i`, `1/2-3*i`. The imaginary coefficient is
/// always written out, so the unit renders as `1*i`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write_rational(f, &self.re),
            (true, false) => {
                write_rational(f, &self.im)?;
                f.write_str("*i")
            }
            (false, false) => {
                write_rational(f, &self.re)?;
                f.write_str(if self.im.is_negative() { "-" } else { "+" })?;
                write_rational(f, &self.im.abs())?;
                f.write_str("*i")
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, message: &str) -> ParseScalarError {
        ParseScalarError {
            input: self.src.to_string(),
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseScalarError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn nat(&mut self) -> Result<BigInt, ParseScalarError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.src[start..self.pos].parse().expect("digit run"))
    }

    /// `real := sign? nat ("/" nat)?`
    fn real(&mut self) -> Result<Rational, ParseScalarError> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let num = self.nat()?;
        let den = if self.eat(b'/') {
            let at = self.pos;
            let d = self.nat()?;
            if d.is_zero() {
                self.pos = at;
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        let r = Rational::new(num, den);
        Ok(if negative { -r } else { r })
    }

    fn at_end(&self) -> bool {
        self.pos == self.bytes.len()
    }

    fn finish(&self) -> Result<(), ParseScalarError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

/// Parses `scalar := real | imag | real sign imag` with
/// `imag := (real "*")? "i"`. No whitespace is accepted.
pub fn parse_scalar(s: &str) -> Result<Scalar, ParseScalarError> {
    let mut cur = Cursor {
        src: s,
        bytes: s.as_bytes(),
        pos: 0,
    };
    if cur.eat(b'i') {
        cur.finish()?;
        return Ok(Scalar::i());
    }
    let first = cur.real()?;
    if cur.eat(b'*') {
        cur.expect(b'i')?;
        cur.finish()?;
        return Ok(Scalar::new(Rational::zero(), first));
    }
    if cur.at_end() {
        return Ok(Scalar::real(first));
    }
    let negative = match cur.peek() {
        Some(b'+') => false,
        Some(b'-') => true,
        _ => return Err(cur.err("expected '+' or '-'")),
    };
    cur.pos += 1;
    let coeff = if cur.eat(b'i') {
        Rational::one()
    } else {
        let c = cur.real()?;
        cur.expect(b'*')?;
        cur.expect(b'i')?;
        c
    };
    cur.finish()?;
    Ok(Scalar::new(first, if negative { -coeff } else { coeff }))
}

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        parse_scalar(text).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(Scalar::ratio(1, 2) + Scalar::ratio(1, 3), Scalar::ratio(5, 6));
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
        assert_eq!(-Scalar::ratio(2, 3), Scalar::ratio(-2, 3));
        assert_eq!(s("1+1*i") - s("1*i"), Scalar::one());
    }

    #[test]
    fn inverses() {
        assert_eq!(Scalar::from_int(2).inv().unwrap(), Scalar::ratio(1, 2));
        assert_eq!(Scalar::i().inv().unwrap(), s("-1*i"));
        assert_eq!(s("1+i").inv().unwrap(), s("1/2-1/2*i"));
        assert!(matches!(Scalar::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(s("3/6"), Scalar::ratio(1, 2));
        assert_eq!(s("1/2+2/4*i"), Scalar::new(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into())));
        assert_eq!(s("-1"), Scalar::from_int(-1));
        assert_eq!(s("i"), Scalar::i());
        assert_eq!(s("-3*i"), Scalar::new(Rational::zero(), Rational::from_integer((-3).into())));
        assert_eq!(s("2-i"), Scalar::from_int(2) - Scalar::i());
    }

    #[test]
    fn parse_errors_report_position() {
        let e = parse_scalar("1/0").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_scalar("1 + 2").unwrap_err();
        assert_eq!(e.position, 1);
        let e = parse_scalar("").unwrap_err();
        assert_eq!(e.position, 0);
        assert_eq!(parse_scalar("2*j").unwrap_err().position, 2);
        assert_eq!(parse_scalar("1+2*i7").unwrap_err().position, 5);
        assert!(parse_scalar("-i").is_err());
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(s("4/8").to_string(), "1/2");
        assert_eq!(s("-6/3").to_string(), "-2");
        assert_eq!(s("i").to_string(), "1*i");
        assert_eq!(s("1/2-2/4*i").to_string(), "1/2-1/2*i");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..25).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn scalar() -> impl Strategy<Value = Scalar> {
        (rational(), rational()).prop_map(|(re, im)| Scalar::new(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn render_parse_roundtrip(x in scalar()) {
            prop_assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
        }
    }

    proptest! {
        #[test]
        fn additive_identity(x in scalar()) {
            prop_assert_eq!(&x + &Scalar::zero(), x);
        }

        #[test]
        fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a - &a, Scalar::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
            }
        }

        #[test]
        fn construction_path_does_not_matter(a in scalar(), b in scalar()) {
            // (a+b)-b and a must be bit-identical after normalization
            let round = &(&a + &b) - &b;
            prop_assert_eq!(round.to_string(), a.to_string());
            prop_assert_eq!(round, a);
        }
    }
}
