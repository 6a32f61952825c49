//! Exact field elements: arbitrary-precision rationals and prime-field residues.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Coefficient field descriptor: ℚ or 𝔽ₚ for a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Validates a prime-field descriptor. `p` must be an odd prime or 2.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Residue { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Residue { value: 1 % p, modulus: *p },
        }
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Residue { value: r, modulus: *p }
            }
        }
    }

    /// Builds `num/den` in this field. Fails in 𝔽ₚ when p | den.
    pub fn from_fraction(&self, num: u64, den: u64) -> Result<Scalar> {
        match self {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            FieldSpec::Prime(p) => {
                let d = den % p;
                if d == 0 {
                    return Err(Error::ZeroCharacteristicDivision {
                        denominator: den.to_string(),
                        modulus: *p,
                    });
                }
                let inv = mod_inverse(d, *p);
                Ok(Scalar::Residue {
                    value: mod_mul(num % p, inv, *p),
                    modulus: *p,
                })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// A field element. Rationals are kept reduced with positive denominator
/// (num-rational maintains this); residues lie in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Residue { value: (a + b) % p, modulus: *p }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Residue { value: mod_mul(*a, *b, *p), modulus: *p }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    /// Multiplicative inverse. Panics on zero; zero divisions are ruled out
    /// by the callers (leading coefficients are nonzero by invariant).
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                Scalar::Rational(r.recip())
            }
            Scalar::Residue { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Residue { value: mod_inverse(*value, *modulus), modulus: *modulus }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// True when the canonical form carries a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Residue { .. } => false,
        }
    }

    /// The absolute value in ℚ; identity on residues (which are never negative).
    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            s => s.clone(),
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
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse of a.
    mod_pow(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
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
