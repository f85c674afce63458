//! Exact coefficient fields: the rationals and prime fields `F_p`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default prime for the fast modular mode.
pub const DEFAULT_PRIME: u32 = 32003;

/// Coefficient field selector. Cheap to copy; carried by every polynomial ring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Field {
    #[default]
    Rational,
    Prime(u32),
}

impl Field {
    /// Validates the field for use: `p` must be an odd prime below 2^31.
    pub fn checked(self) -> Result<Self> {
        match self {
            Field::Rational => Ok(self),
            Field::Prime(p) => {
                if p == 2 {
                    return Err(Error::Usage(
                        "characteristic 2 is not supported (it divides 2g+2)".into(),
                    ));
                }
                if !(3..(1 << 31)).contains(&p) || !is_prime(p) {
                    return Err(Error::Usage(format!("{p} is not an odd prime below 2^31")));
                }
                Ok(self)
            }
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Rejects fields whose characteristic divides `n` (e.g. `2g+2` or the degree
    /// of a Fermat relation).
    pub fn require_not_dividing(self, n: u64, what: &str) -> Result<()> {
        match self {
            Field::Prime(p) if n.is_multiple_of(p as u64) => Err(Error::Usage(format!(
                "characteristic {p} divides {what} = {n}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp(0, p),
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Fp(v.rem_euclid(p as i64) as u32, p),
        }
    }

    /// A random element. Over the rationals this is a small nonzero-biased integer,
    /// which keeps row reduction cheap while still being generic enough.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        match self {
            Field::Rational => self.from_i64(rng.random_range(-97..=97)),
            Field::Prime(p) => Scalar::Fp(rng.random_range(0..p), p),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "q" | "Q" | "rational" | "rationals" => Ok(Field::Rational),
            "fp" => Field::Prime(DEFAULT_PRIME).checked(),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::Usage(format!("unknown field `{s}` (use q or fp:P)")))?;
                let p: u32 = p
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad prime in `{s}`")))?;
                Field::Prime(p).checked()
            }
        }
    }
}

impl From<Field> for String {
    fn from(f: Field) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Field {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p as u64 {
        if (p as u64).is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// A field element. Mixing elements of different fields is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    /// `(value, p)` with `value < p`.
    Fp(u32, u32),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp(v, p) => {
                let egcd = (*v as i64).extended_gcd(&(*p as i64));
                Scalar::Fp(egcd.x.rem_euclid(*p as i64) as u32, *p)
            }
        })
    }

    /// Small-integer view, used for display and tests.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp(v, p) => {
                let v = *v as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
        }
    }

    /// True when the printed form would start with a minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp(..) => self.to_i64().is_some_and(|v| v < 0),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32, *p)
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((*p - *a) % *p, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a -= b,
            _ => *self = &*self - rhs,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp(..) => write!(f, "{}", self.to_i64().unwrap_or_default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::Prime(5);
        for v in 1..5 {
            let a = f.from_i64(v);
            assert!((&a * &a.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn six_is_one_mod_five() {
        let f = Field::Prime(5);
        assert!((f.from_i64(2) * f.from_i64(3)).is_one());
    }

    #[test]
    fn parse_fields() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("fp:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert_eq!("fp".parse::<Field>().unwrap(), Field::Prime(DEFAULT_PRIME));
        assert!(matches!("fp:2".parse::<Field>(), Err(Error::Usage(_))));
        assert!(matches!("fp:9".parse::<Field>(), Err(Error::Usage(_))));
        assert!("zz".parse::<Field>().is_err());
    }

    #[test]
    fn characteristic_guard() {
        assert!(Field::Prime(7).require_not_dividing(8, "2g+2").is_ok());
        assert!(Field::Prime(3).require_not_dividing(6, "2g+2").is_err());
        assert!(Field::Rational.require_not_dividing(6, "2g+2").is_ok());
    }

    #[test]
    fn negation_cancels() {
        for f in [Field::Rational, Field::Prime(32003)] {
            let a = f.from_i64(-17);
            assert!((&a + &(-&a)).is_zero());
        }
    }
}
