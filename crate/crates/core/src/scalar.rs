//! Exact scalars: reduced rationals or residues modulo a small prime.
//!
//! Every value carries its mode. Arithmetic between a rational and a residue
//! (or between residues of different primes) is a programming error and
//! panics; containers such as [`Algebra`](crate::Algebra) check the field of
//! their entries at construction so that mixing never reaches the operators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest prime modulus accepted for the finite-field mode (exclusive bound).
pub const MAX_PRIME: u32 = 1 << 16;

/// The ground field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// The rationals, exact arithmetic.
    Rational,
    /// The prime field GF(p).
    Prime(u32),
}

impl Field {
    /// Builds `GF(p)` after checking that `p` is a prime below [`MAX_PRIME`].
    pub fn prime(p: u32) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn is_prime_field(self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_i64(self, 0)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(self, 1)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `GF(p)` and `GF:p`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" || t == "q" {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("GF:"));
        match inner.map(|p| p.trim().parse::<u32>()) {
            Some(Ok(p)) => Field::prime(p),
            _ => Err(Error::ParseField(s.to_string())),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u32, modulus: u32 },
}

impl Scalar {
    pub fn from_i64(field: Field, v: i64) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                residue: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// `num/den` in the given field; fails when `den` is zero (or vanishes mod p).
    pub fn from_ratio(field: Field, num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match field {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let n = reduce_mod(&num, p);
                let d = reduce_mod(&den, p);
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Prime {
                    residue: mul_mod(n, inv_mod(d, p), p),
                    modulus: p,
                })
            }
        }
    }

    /// Parses `"p/q"` or `"p"` into the given field.
    pub fn parse(field: Field, s: &str) -> Result<Self> {
        let bad = || Error::ParseScalar(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        Scalar::from_ratio(field, num, den)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { residue, .. } => *residue == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: inv_mod(*residue, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 {
            self.inv().ok_or(Error::DivisionByZero)?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = self.field().one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// The rational value, if in rational mode.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Prime { .. } => None,
        }
    }

    /// Residue in `[0, p)` for prime-field scalars.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Prime { residue, .. } => Some(*residue),
            Scalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

fn reduce_mod(v: &BigInt, p: u32) -> u32 {
    let m = BigInt::from(p);
    let r = v.mod_floor(&m);
    r.to_u32().expect("residue below modulus")
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and a != 0, so the extended gcd is 1.
    let e = (a as i64).extended_gcd(&(p as i64));
    e.x.rem_euclid(p as i64) as u32
}

#[track_caller]
fn mode_clash(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, modulus: q }) if p == q => {
                Scalar::Prime {
                    residue: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => mode_clash(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, modulus: q }) if p == q => {
                Scalar::Prime {
                    residue: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => mode_clash(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, modulus: q }) if p == q => {
                Scalar::Prime {
                    residue: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => mode_clash(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
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
        -&self
    }
}

/// Binomial coefficient as a scalar of the given field.
pub fn binomial(field: Field, n: u64, k: u64) -> Scalar {
    if k > n {
        return field.zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Scalar::from_ratio(field, acc, BigInt::one()).expect("unit denominator")
}
