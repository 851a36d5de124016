//! Exact coefficient fields: arbitrary-precision rationals and prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rat::Rat;
use super::ExactError;

/// The coefficient field every computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// Arbitrary-precision rationals.
    Rational,
    /// Integers modulo a prime.
    Prime(u64),
}

impl Field {
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(Rat::from_int(n)),
            Field::Prime(p) => Scalar::Fp { value: n.rem_euclid(p as i64) as u64, p },
        }
    }

    /// Image of the rational `num/den`; fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, ExactError> {
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.checked_div(&d)
    }

    /// Parses an exact coefficient string: `"n"`, `"n/d"` (rationals) or a residue.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, ExactError> {
        let bad = || ExactError::Parse(format!("invalid coefficient {text:?} for field {self}"));
        let text = text.trim();
        match *self {
            Field::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let num = BigInt::from_str(num).map_err(|_| bad())?;
                let den = BigInt::from_str(den).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(ExactError::DivisionByZero);
                }
                Ok(Scalar::Q(Rat::from_big(BigRational::new(num, den))))
            }
            Field::Prime(p) => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let reduce = |s: &str| -> Result<Scalar, ExactError> {
                    let v = BigInt::from_str(s).map_err(|_| bad())?;
                    let r = v.mod_floor(&BigInt::from(p)).to_u64().ok_or_else(bad)?;
                    Ok(Scalar::Fp { value: r, p })
                };
                reduce(num)?.checked_div(&reduce(den)?)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("F"))
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| ExactError::Parse(format!("unknown field tag {s:?}; expected Q or Fp:p")))?;
        if !is_prime(p) {
            return Err(ExactError::Parse(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(ExactError::Parse(format!("prime {p} too large")));
        }
        Ok(Field::Prime(p))
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Arithmetic between elements of different fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rat),
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(q) => Scalar::Q(q.recip().expect("nonzero")),
            Scalar::Fp { value, p } => Scalar::Fp { value: pow_mod(*value, p - 2, *p), p: *p },
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ExactError> {
        Ok(self * &rhs.inv()?)
    }

    /// The integer value when the element is an integer (rationals) or its canonical residue.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) => q.to_i64(),
            Scalar::Fp { value, .. } => i64::try_from(*value).ok(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::Fp { .. } => None,
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $q:expr, $fp:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q($q(a, b)),
                    (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                        Scalar::Fp { value: $fp(*a, *b, *p), p: *p }
                    }
                    _ => panic!("arithmetic between different fields: {self:?} and {rhs:?}"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Rat, b: &Rat| a.add(b), |a: u64, b: u64, p: u64| {
    let s = a + b;
    if s >= p { s - p } else { s }
});
binop!(Sub, sub, |a: &Rat, b: &Rat| a.sub(b), |a: u64, b: u64, p: u64| {
    if a >= b { a - b } else { a + p - b }
});
binop!(Mul, mul, |a: &Rat, b: &Rat| a.mul(b), mul_mod);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(q.neg()),
            Scalar::Fp { value, p } => Scalar::Fp { value: if *value == 0 { 0 } else { p - value }, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a = a.add(b),
            (s, r) => *s = &*s + r,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a = a.sub(b),
            (s, r) => *s = &*s - r,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a = a.mul(b),
            (s, r) => *s = &*s * r,
        }
    }
}

/// Sign `(-1)^n` as a field element.
pub fn sign(field: Field, n: i64) -> Scalar {
    if n.rem_euclid(2) == 0 {
        field.one()
    } else {
        -field.one()
    }
}

/// Rational with small numerator/denominator used by random generators.
pub fn small_rational(field: Field, num: i64, den: i64) -> Scalar {
    field
        .from_ratio(num, den)
        .unwrap_or_else(|_| field.from_i64(num))
}

/// Rationals by value, residues by canonical representative.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.sub(b).signum(),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) => (p, a).cmp(&(q, b)),
            (Scalar::Q(_), Scalar::Fp { .. }) => std::cmp::Ordering::Less,
            (Scalar::Fp { .. }, Scalar::Q(_)) => std::cmp::Ordering::Greater,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
