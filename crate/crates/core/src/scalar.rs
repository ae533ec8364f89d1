//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Rational values are kept in lowest terms with positive denominator (the
//! `BigRational` normal form). Prime-field values are reduced representatives
//! in [0, p). Arithmetic never rounds.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intutil::is_prime_u64;

/// Coefficient domain tag carried by every polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffDomain {
    Rat,
    Fp(u64),
}

impl CoeffDomain {
    pub fn fp(p: u64) -> Result<CoeffDomain> {
        if is_prime_u64(p) {
            Ok(CoeffDomain::Fp(p))
        } else {
            Err(Error::InvalidInput(format!("modulus {p} is not prime")))
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, CoeffDomain::Rat)
    }

    /// Characteristic: 0 for Q, p for F_p.
    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffDomain::Rat => 0,
            CoeffDomain::Fp(p) => *p,
        }
    }
}

impl fmt::Display for CoeffDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffDomain::Rat => write!(f, "Q"),
            CoeffDomain::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Exact field element over Q or F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rat(BigRational),
    Fp { p: u64, r: u64 },
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// a^e mod p by repeated squaring.
pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

impl ExactScalar {
    pub fn zero(domain: CoeffDomain) -> ExactScalar {
        match domain {
            CoeffDomain::Rat => ExactScalar::Rat(BigRational::zero()),
            CoeffDomain::Fp(p) => ExactScalar::Fp { p, r: 0 },
        }
    }

    pub fn one(domain: CoeffDomain) -> ExactScalar {
        match domain {
            CoeffDomain::Rat => ExactScalar::Rat(BigRational::one()),
            CoeffDomain::Fp(p) => ExactScalar::Fp { p, r: 1 % p },
        }
    }

    pub fn from_i64(n: i64, domain: CoeffDomain) -> ExactScalar {
        match domain {
            CoeffDomain::Rat => ExactScalar::Rat(BigRational::from_integer(BigInt::from(n))),
            CoeffDomain::Fp(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                ExactScalar::Fp { p, r }
            }
        }
    }

    pub fn from_rational(q: BigRational) -> ExactScalar {
        ExactScalar::Rat(q)
    }

    /// Reduce an arbitrary-precision integer pair num/den into the domain.
    /// Over F_p the denominator must be invertible.
    pub fn from_big_ratio(num: &BigInt, den: &BigInt, domain: CoeffDomain) -> Result<ExactScalar> {
        if den.is_zero() {
            return Err(Error::InvalidCoefficient("zero denominator".into()));
        }
        match domain {
            CoeffDomain::Rat => Ok(ExactScalar::Rat(BigRational::new(num.clone(), den.clone()))),
            CoeffDomain::Fp(p) => {
                let pm = BigInt::from(p);
                let n = num.mod_floor_u64(&pm);
                let d = den.mod_floor_u64(&pm);
                if d == 0 {
                    return Err(Error::InvalidCoefficient(format!(
                        "denominator divisible by the characteristic {p}"
                    )));
                }
                let dinv = powmod(d, p - 2, p);
                Ok(ExactScalar::Fp { p, r: mulmod(n, dinv, p) })
            }
        }
    }

    pub fn domain(&self) -> CoeffDomain {
        match self {
            ExactScalar::Rat(_) => CoeffDomain::Rat,
            ExactScalar::Fp { p, .. } => CoeffDomain::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rat(q) => q.is_zero(),
            ExactScalar::Fp { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ExactScalar::Rat(q) => q.is_one(),
            ExactScalar::Fp { p, r } => *r == 1 % *p,
        }
    }

    fn check(&self, other: &ExactScalar) {
        assert_eq!(self.domain(), other.domain(), "mixed coefficient domains");
    }

    pub fn add(&self, other: &ExactScalar) -> ExactScalar {
        self.check(other);
        match (self, other) {
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => ExactScalar::Rat(a + b),
            (ExactScalar::Fp { p, r: a }, ExactScalar::Fp { r: b, .. }) => {
                ExactScalar::Fp { p: *p, r: addmod(*a, *b, *p) }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &ExactScalar) -> ExactScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExactScalar) -> ExactScalar {
        self.check(other);
        match (self, other) {
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => ExactScalar::Rat(a * b),
            (ExactScalar::Fp { p, r: a }, ExactScalar::Fp { r: b, .. }) => {
                ExactScalar::Fp { p: *p, r: mulmod(*a, *b, *p) }
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Rat(a) => ExactScalar::Rat(-a),
            ExactScalar::Fp { p, r } => ExactScalar::Fp { p: *p, r: if *r == 0 { 0 } else { p - r } },
        }
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self) -> Option<ExactScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            ExactScalar::Rat(a) => ExactScalar::Rat(a.recip()),
            ExactScalar::Fp { p, r } => ExactScalar::Fp { p: *p, r: powmod(*r, p - 2, *p) },
        })
    }

    pub fn div(&self, other: &ExactScalar) -> Option<ExactScalar> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u32) -> ExactScalar {
        let mut acc = ExactScalar::one(self.domain());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// The underlying rational; panics in F_p (callers gate on the domain).
    pub fn as_rational(&self) -> &BigRational {
        match self {
            ExactScalar::Rat(q) => q,
            ExactScalar::Fp { .. } => panic!("prime-field scalar where a rational was required"),
        }
    }

    pub fn into_rational(self) -> Result<BigRational> {
        match self {
            ExactScalar::Rat(q) => Ok(q),
            ExactScalar::Fp { p, .. } => Err(Error::UnsupportedField(format!(
                "operation is defined over Q, not F_{p}"
            ))),
        }
    }
}

/// Render a rational in the canonical "p/q" or "p" form.
pub fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rat(q) => write!(f, "{}", render_rational(q)),
            ExactScalar::Fp { r, .. } => write!(f, "{r}"),
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: &BigInt) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: &BigInt) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(m);
        let (sign, digits) = r.to_u64_digits();
        match sign {
            Sign::NoSign => 0,
            Sign::Plus => digits[0],
            Sign::Minus => unreachable!("mod_floor of a positive modulus is nonnegative"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic_wraps() {
        let a = ExactScalar::from_i64(3, CoeffDomain::Fp(5));
        let b = ExactScalar::from_i64(4, CoeffDomain::Fp(5));
        assert_eq!(a.add(&b), ExactScalar::Fp { p: 5, r: 2 });
        assert_eq!(a.mul(&b), ExactScalar::Fp { p: 5, r: 2 });
        assert_eq!(a.inv().unwrap(), ExactScalar::Fp { p: 5, r: 2 });
        assert_eq!(ExactScalar::from_i64(-1, CoeffDomain::Fp(5)), ExactScalar::Fp { p: 5, r: 4 });
    }

    #[test]
    fn rational_normal_form() {
        let num = BigInt::from(6);
        let den = BigInt::from(-4);
        let q = ExactScalar::from_big_ratio(&num, &den, CoeffDomain::Rat).unwrap();
        assert_eq!(q.to_string(), "-3/2");
    }

    #[test]
    fn fp_rejects_denominator_in_characteristic() {
        let num = BigInt::from(1);
        let den = BigInt::from(10);
        assert!(ExactScalar::from_big_ratio(&num, &den, CoeffDomain::Fp(5)).is_err());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(CoeffDomain::fp(6).is_err());
        assert!(CoeffDomain::fp(5).is_ok());
    }
}
