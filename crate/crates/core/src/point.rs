//! Projective points with primitive integer coordinates.
//!
//! The normal form divides by the coordinate gcd and makes the first
//! nonzero coordinate positive, so equality of normal forms is equality of
//! projective points and printing is deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// A point of P^m over Q in primitive integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Normalize integer homogeneous coordinates. All-zero input is not a
    /// projective point.
    pub fn new(coords: Vec<BigInt>) -> Result<ProjPoint> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::DegenerateInput(
                "all-zero homogeneous coordinates".into(),
            ));
        }
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
        }
        let mut coords: Vec<BigInt> = coords.iter().map(|c| c / &g).collect();
        if coords
            .iter()
            .find(|c| !c.is_zero())
            .map_or(false, |c| c.is_negative())
        {
            for c in &mut coords {
                *c = -&*c;
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_rationals(coords: &[BigRational]) -> Result<ProjPoint> {
        let mut den = BigInt::from(1);
        for c in coords {
            den = den.lcm(c.denom());
        }
        ProjPoint::new(coords.iter().map(|c| (c * &den).to_integer()).collect())
    }

    /// Parse "[a:b:c]" (brackets optional) with integer or rational entries.
    pub fn parse_str(text: &str) -> Result<ProjPoint> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .unwrap_or(t);
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() < 2 {
            return Err(Error::SyntaxError {
                offset: 0,
                message: "projective point needs at least two coordinates".into(),
            });
        }
        let mut coords = Vec::with_capacity(parts.len());
        for p in parts {
            coords.push(crate::parse::parse_rational_str(p.trim())?);
        }
        ProjPoint::from_rationals(&coords)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim_ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn rational_coords(&self) -> Vec<BigRational> {
        self.coords
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(cs: &[i64]) -> ProjPoint {
        ProjPoint::new(cs.iter().map(|&c| BigInt::from(c)).collect()).unwrap()
    }

    #[test]
    fn normal_form() {
        assert_eq!(pt(&[2, 4]), pt(&[1, 2]));
        assert_eq!(pt(&[-1, 2]), pt(&[1, -2]));
        assert_eq!(pt(&[0, -3, 6]), pt(&[0, 1, -2]));
        assert_eq!(pt(&[6, 4]).to_string(), "[3:2]");
    }

    #[test]
    fn zero_rejected() {
        assert!(matches!(
            ProjPoint::new(vec![BigInt::zero(), BigInt::zero()]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(ProjPoint::parse_str("[0:1:1]").unwrap(), pt(&[0, 1, 1]));
        assert_eq!(ProjPoint::parse_str("1/2:1").unwrap(), pt(&[1, 2]));
        assert!(ProjPoint::parse_str("[5]").is_err());
    }
}
