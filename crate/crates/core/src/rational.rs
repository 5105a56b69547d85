//! Exact rational numbers.
//!
//! Values that fit a pair of `i64`s (after reduction) are stored inline and
//! all arithmetic on them goes through `i128` intermediates. Anything larger
//! is promoted to a heap-allocated [`BigRational`]. The representation is
//! canonical: a value that fits inline is never stored as `Big`, so derived
//! equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseRationalError;

#[derive(Clone)]
enum Repr {
    /// Lowest terms, `den > 0`.
    Small {
        num: i64,
        den: i64,
    },
    Big(Box<BigRational>),
}

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
        if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
            return (gcd_u64(a as u64, b as u64) as u128) << shift;
        }
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small { num: n, den: 1 })
    }

    /// Builds `num / den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        let neg = (num < 0) != (den < 0);
        let (n, d) = (num.unsigned_abs(), den.unsigned_abs());
        let (n, d) = if n <= u64::MAX as u128 && d <= u64::MAX as u128 {
            let (n, d) = (n as u64, d as u64);
            let g = gcd_u64(n, d);
            ((n / g) as u128, (d / g) as u128)
        } else {
            let g = gcd_u128(n, d);
            (n / g, d / g)
        };
        Self::from_reduced(neg, n, d)
    }

    /// `n / d` already in lowest terms, with the sign given separately.
    fn from_reduced(neg: bool, n: u128, d: u128) -> Self {
        if n <= u64::MAX as u128 && d <= i64::MAX as u128 {
            let signed = if neg { -(n as i128) } else { n as i128 };
            if let Ok(num) = i64::try_from(signed) {
                return Rational(Repr::Small { num, den: d as i64 });
            }
        }
        let mut num = BigInt::from(n);
        if neg {
            num = -num;
        }
        Rational(Repr::Big(Box::new(BigRational::new_raw(num, BigInt::from(d)))))
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new reduces; new_raw callers must pass reduced values.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// Numerator and denominator when both fit in `i64`.
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small { num, den } => Some((num, den)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> Ordering {
        match &self.0 {
            Repr::Small { num, .. } => num.cmp(&0),
            Repr::Big(b) => {
                if b.is_negative() {
                    Ordering::Less
                } else if b.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small { num, den } => Self::from_i128(*den as i128, *num as i128),
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, den } => BigInt::from(num.div_floor(den)),
            Repr::Big(b) => b.floor().to_integer(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Midpoint `(a + b) / 2`.
    pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
        (a + b) / Rational::from_int(2)
    }

    /// Terminating decimal expansion, if the denominator has no prime
    /// factors other than 2 and 5.
    pub fn to_decimal_string(&self) -> Option<String> {
        let den = self.denom();
        let mut d = den.clone();
        let (two, five) = (BigInt::from(2), BigInt::from(5));
        let mut twos = 0u32;
        let mut fives = 0u32;
        while d.is_even() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return None;
        }
        let digits = twos.max(fives);
        let num = self.numer();
        if digits == 0 {
            return Some(num.to_string());
        }
        let scaled = num * BigInt::from(10).pow(digits) / den;
        let neg = scaled.is_negative();
        let mut s = scaled.abs().to_string();
        if s.len() <= digits as usize {
            s = "0".repeat(digits as usize + 1 - s.len()) + &s;
        }
        let split = s.len() - digits as usize;
        let out = format!("{}{}.{}", if neg { "-" } else { "" }, &s[..split], &s[split..]);
        Some(out)
    }

    /// Decimal expansion when it terminates, `p/q` otherwise.
    pub fn to_exact_string(&self) -> String {
        self.to_decimal_string().unwrap_or_else(|| self.to_string())
    }

    fn parse_decimal(s: &str) -> Result<Rational, ParseRationalError> {
        let err = || ParseRationalError(s.to_string());
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mantissa, exp) = match body.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = body[i + 1..].parse().map_err(|_| err())?;
                if e.abs() > 4096 {
                    return Err(err());
                }
                (&body[..i], e)
            }
            None => (body, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((a, b)) => (a, b),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = digits.parse().map_err(|_| err())?;
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let r = if scale >= 0 {
            BigRational::from_integer(num * ten.pow(scale as u32))
        } else {
            BigRational::new(num, ten.pow((-scale) as u32))
        };
        Ok(Self::from_big(r))
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts decimal notation (`"2.5"`, `"-3"`, `"1e-3"`) and fractions
    /// (`"8/3"`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let err = || ParseRationalError(s.to_string());
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Self::from_big(BigRational::new(n, d)));
        }
        Self::parse_decimal(s)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    a.cmp(c)
                } else {
                    (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
                }
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn add_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
            if b == d {
                return Rational::from_i128(*a as i128 + *c as i128, *b as i128);
            }
            let g = gcd_u64(*b as u64, *d as u64);
            let (bg, dg) = ((*b as u64 / g) as i128, (*d as u64 / g) as i128);
            match (*a as i128 * dg).checked_add(*c as i128 * bg) {
                Some(n) => Rational::from_i128(n, *b as i128 * dg),
                None => Rational::from_big(x.to_big() + y.to_big()),
            }
        }
        _ => Rational::from_big(x.to_big() + y.to_big()),
    }
}

fn mul_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
            if *a == 0 || *c == 0 {
                return Rational::zero();
            }
            let g1 = gcd_u64(a.unsigned_abs(), *d as u64) as u128;
            let g2 = gcd_u64(c.unsigned_abs(), *b as u64) as u128;
            let n = (a.unsigned_abs() as u128 / g1) * (c.unsigned_abs() as u128 / g2);
            let dd = (*b as u128 / g2) * (*d as u128 / g1);
            Rational::from_reduced((*a < 0) != (*c < 0), n, dd)
        }
        _ => Rational::from_big(x.to_big() * y.to_big()),
    }
}

fn neg_ref(x: &Rational) -> Rational {
    match &x.0 {
        Repr::Small { num, den } => match num.checked_neg() {
            Some(n) => Rational(Repr::Small { num: n, den: *den }),
            None => Rational::from_big(-x.to_big()),
        },
        Repr::Big(b) => Rational::from_big(-(**b).clone()),
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(self)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(&self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, |x: &Rational, y: &Rational| add_ref(x, &neg_ref(y)));
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, |x: &Rational, y: &Rational| mul_ref(x, &y.recip()));

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a decimal or p/q string, or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from_int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rational, E> {
                i64::try_from(v).map(Rational::from_int).map_err(E::custom)
            }
        }
        d.deserialize_any(Visitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(r("2.5"), Rational::new(5, 2));
        assert_eq!(r("-0.125"), Rational::new(-1, 8));
        assert_eq!(r("8/3"), Rational::new(8, 3));
        assert_eq!(r("4/-6"), Rational::new(-2, 3));
        assert_eq!(r("1e-3"), Rational::new(1, 1000));
        assert_eq!(r(".5"), Rational::new(1, 2));
        assert!("".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.2.3".parse::<Rational>().is_err());
    }

    #[test]
    fn formats_exactly() {
        assert_eq!(Rational::new(8, 3).to_string(), "8/3");
        assert_eq!(Rational::new(6, 3).to_string(), "2");
        assert_eq!(Rational::new(5, 2).to_exact_string(), "2.5");
        assert_eq!(Rational::new(-1, 8).to_exact_string(), "-0.125");
        assert_eq!(Rational::new(1, 1000).to_exact_string(), "0.001");
        assert_eq!(Rational::new(8, 3).to_exact_string(), "8/3");
    }

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let big = Rational::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(sq.as_small().is_none());
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(back.as_small().is_some());
        let tiny = Rational::new(1, i64::MAX) * Rational::new(1, 3);
        assert!(tiny > Rational::zero());
        assert!(tiny < Rational::new(1, i64::MAX));
        assert_eq!(-Rational::from_int(i64::MIN), Rational::from_int(i64::MIN) * Rational::from_int(-1));
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigrational(a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            let bx = BigRational::new(a.into(), b.into());
            let by = BigRational::new(c.into(), d.into());
            prop_assert_eq!(&x + &y, Rational::from(bx.clone() + by.clone()));
            prop_assert_eq!(&x - &y, Rational::from(bx.clone() - by.clone()));
            prop_assert_eq!(&x * &y, Rational::from(bx.clone() * by.clone()));
            if c != 0 {
                prop_assert_eq!(&x / &y, Rational::from(bx.clone() / by.clone()));
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        }

        #[test]
        fn display_parse_round_trip(a in any::<i64>(), b in 1..i64::MAX) {
            let x = Rational::new(a, b);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x.clone());
            prop_assert_eq!(x.to_exact_string().parse::<Rational>().unwrap(), x);
        }
    }
}
