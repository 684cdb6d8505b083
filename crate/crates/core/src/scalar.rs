//! Exact scalars: arbitrary-precision rationals and prime fields GF(p).
//!
//! Every computation in this crate runs over one of these two fields; there
//! is no floating point anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The ground field of a presentation: the rationals or GF(p) for a prime p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// Validates the characteristic (must be prime for `PrimeField`).
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField(p) => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(Error::NonPrimeCharacteristic(*p))
                }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Fp {
                val: 0,
                modulus: *p,
            },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::PrimeField(p) => Scalar::Fp {
                val: 1 % *p,
                modulus: *p,
            },
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(p) => {
                let p_big = BigInt::from(*p);
                let mut r = n % &p_big;
                if r.is_negative() {
                    r += &p_big;
                }
                let (_, digits) = r.to_u64_digits();
                let val = digits.first().copied().unwrap_or(0);
                Scalar::Fp { val, modulus: *p }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// An element of the active ground field.
///
/// GF(p) elements carry their modulus, so arithmetic needs no external
/// context; mixing moduli is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Fp { val: u64, modulus: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { val, modulus } => *val == 1 % *modulus,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Fp { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inverse(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                Scalar::Rat(r.recip())
            }
            Scalar::Fp { val, modulus } => {
                assert!(*val != 0, "inverse of zero");
                Scalar::Fp {
                    val: mod_inverse(*val, *modulus),
                    modulus: *modulus,
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

fn fp_pair(a: &Scalar, b: &Scalar) -> Option<(u64, u64, u64)> {
    match (a, b) {
        (Scalar::Fp { val: x, modulus: p }, Scalar::Fp { val: y, modulus: q }) => {
            assert_eq!(p, q, "mixed moduli");
            Some((*x, *y, *p))
        }
        _ => None,
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let (x, y, p) = fp_pair(self, rhs).expect("mixed scalar kinds");
                Scalar::Fp {
                    val: ((x as u128 + y as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => {
                let (x, y, p) = fp_pair(self, rhs).expect("mixed scalar kinds");
                Scalar::Fp {
                    val: ((x as u128 + (p - y) as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => {
                let (x, y, p) = fp_pair(self, rhs).expect("mixed scalar kinds");
                Scalar::Fp {
                    val: ((x as u128 * y as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { val, modulus } => Scalar::Fp {
                val: if *val == 0 { 0 } else { modulus - val },
                modulus: *modulus,
            },
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not invertible");
    let p = p as i128;
    (((s0 % p) + p) % p) as u64
}
