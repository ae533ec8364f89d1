//! Polynomial text grammar and variable environments.
//!
//! Grammar (whitespace insignificant, unary minus allowed):
//!   expr     := sign? term (sign term)*
//!   term     := coeff ('*' monomial)* | monomial ('*' monomial)*
//!   monomial := var ('^' nonneg-int)?
//!   coeff    := int | int '/' positive-int | '(' coeff ')'
//!
//! Implicit multiplication is rejected: "3x" is a syntax error, "3*x" is
//! required. Rational coefficients appear only at the coeff position.
//! Errors carry the byte offset of the first offending position.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{default_names, MultiPoly, UniPoly};
use crate::scalar::{CoeffDomain, ExactScalar};

/// Ordered variable environment: storage position per display name, plus
/// accepted input aliases.
#[derive(Clone, Debug)]
pub struct VarEnv {
    names: Vec<String>,
    lookup: BTreeMap<String, usize>,
}

impl VarEnv {
    fn build(names: Vec<String>, aliases: &[(&str, usize)]) -> VarEnv {
        let mut lookup = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            lookup.insert(n.clone(), i);
        }
        for (a, i) in aliases {
            lookup.insert(a.to_string(), *i);
        }
        VarEnv { names, lookup }
    }

    /// Affine variables: canonical names x, y, z for N ≤ 3 (aliases x1..x3
    /// accepted), x1..xN above.
    pub fn affine(n: usize) -> VarEnv {
        assert!(n >= 1);
        let names = default_names(n);
        let mut aliases: Vec<(String, usize)> = Vec::new();
        if n <= 3 {
            for i in 0..n {
                aliases.push((format!("x{}", i + 1), i));
            }
        } else {
            for (i, a) in ["x", "y", "z"].iter().enumerate().take(3.min(n)) {
                aliases.push((a.to_string(), i));
            }
        }
        let alias_refs: Vec<(&str, usize)> =
            aliases.iter().map(|(s, i)| (s.as_str(), *i)).collect();
        VarEnv::build(names, &alias_refs)
    }

    /// Environment of an x0-homogenized polynomial: x1..xN then x0, matching
    /// the storage layout where the homogenizing variable is last.
    pub fn homogeneous(n_affine: usize) -> VarEnv {
        assert!(n_affine >= 1);
        let mut names: Vec<String> = (1..=n_affine).map(|i| format!("x{i}")).collect();
        names.push("x0".to_string());
        let mut aliases: Vec<(String, usize)> = Vec::new();
        if n_affine <= 3 {
            for (i, a) in ["x", "y", "z"].iter().enumerate().take(n_affine) {
                aliases.push((a.to_string(), i));
            }
        }
        let alias_refs: Vec<(&str, usize)> =
            aliases.iter().map(|(s, i)| (s.as_str(), *i)).collect();
        VarEnv::build(names, &alias_refs)
    }

    /// Binary forms on P^1 in X, Y.
    pub fn p1() -> VarEnv {
        VarEnv::build(vec!["X".into(), "Y".into()], &[])
    }

    /// Single parameter t.
    pub fn param() -> VarEnv {
        VarEnv::build(vec!["t".into()], &[])
    }

    pub fn custom(names: &[&str]) -> VarEnv {
        VarEnv::build(names.iter().map(|s| s.to_string()).collect(), &[])
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.names.iter().map(|s| s.as_str()).collect()
    }

    fn resolve(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }
}

/// Render with the environment's canonical names.
pub fn render_poly(p: &MultiPoly, env: &VarEnv) -> String {
    p.render(&env.names())
}

// ==== recursive-descent parser ==============================================

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Cursor<'a> {
        Cursor { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn err(&self, message: &str) -> Error {
        Error::SyntaxError { offset: self.pos, message: message.to_string() }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start || self.bytes[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.err("expected identifier"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().to_string())
    }
}

fn parse_coeff(c: &mut Cursor, domain: CoeffDomain) -> Result<ExactScalar> {
    match c.peek() {
        Some(b'(') => {
            c.bump();
            let inner = parse_coeff(c, domain)?;
            if c.peek() != Some(b')') {
                return Err(c.err("expected ')'"));
            }
            c.bump();
            Ok(inner)
        }
        Some(b'-') => {
            c.bump();
            Ok(parse_coeff(c, domain)?.neg())
        }
        _ => {
            let num = c.digits()?;
            if c.peek() == Some(b'/') {
                c.bump();
                let den = c.digits()?;
                if den.is_zero() {
                    return Err(Error::InvalidCoefficient("zero denominator".into()));
                }
                ExactScalar::from_big_ratio(&num, &den, domain)
            } else {
                ExactScalar::from_big_ratio(&num, &BigInt::from(1), domain)
            }
        }
    }
}

fn parse_monomial(c: &mut Cursor, env: &VarEnv, exps: &mut [u32]) -> Result<()> {
    let name = c.ident()?;
    let idx = env
        .resolve(&name)
        .ok_or(Error::UnknownVariable { name })?;
    let e: u32 = if c.peek() == Some(b'^') {
        c.bump();
        let d = c.digits()?;
        u32::try_from(&d).map_err(|_| c.err("exponent too large"))?
    } else {
        1
    };
    exps[idx] = exps[idx]
        .checked_add(e)
        .ok_or_else(|| c.err("exponent overflow"))?;
    Ok(())
}

fn parse_term(
    c: &mut Cursor,
    env: &VarEnv,
    domain: CoeffDomain,
    negate: bool,
    poly: &mut MultiPoly,
) -> Result<()> {
    let mut exps = vec![0u32; env.nvars()];
    let first = c.peek().ok_or_else(|| c.err("expected term"))?;
    let mut coeff = if first.is_ascii_digit() || first == b'(' || first == b'-' {
        parse_coeff(c, domain)?
    } else {
        let k = ExactScalar::one(domain);
        parse_monomial(c, env, &mut exps)?;
        k
    };
    while c.peek() == Some(b'*') {
        c.bump();
        parse_monomial(c, env, &mut exps)?;
    }
    if negate {
        coeff = coeff.neg();
    }
    let term = MultiPoly::from_terms(env.nvars(), domain, [(exps, coeff)]);
    *poly = poly.add(&term);
    Ok(())
}

/// Parse a polynomial in the given environment and coefficient domain.
pub fn parse_poly(text: &str, env: &VarEnv, domain: CoeffDomain) -> Result<MultiPoly> {
    let mut c = Cursor::new(text);
    let mut poly = MultiPoly::zero(env.nvars(), domain);
    let mut negate = match c.peek() {
        Some(b'-') => {
            c.bump();
            true
        }
        Some(b'+') => {
            c.bump();
            false
        }
        Some(_) => false,
        None => return Err(c.err("empty polynomial")),
    };
    loop {
        parse_term(&mut c, env, domain, negate, &mut poly)?;
        match c.peek() {
            None => return Ok(poly),
            Some(b'+') => {
                c.bump();
                negate = false;
            }
            Some(b'-') => {
                c.bump();
                negate = true;
            }
            Some(_) => return Err(c.err("expected '+', '-', or end of input")),
        }
    }
}

/// Parse "p" or "p/q" into an exact rational.
pub fn parse_rational_str(text: &str) -> Result<BigRational> {
    let mut c = Cursor::new(text.trim());
    let neg = match c.peek() {
        Some(b'-') => {
            c.bump();
            true
        }
        _ => false,
    };
    let num = c.digits()?;
    let den = if c.peek() == Some(b'/') {
        c.bump();
        let d = c.digits()?;
        if d.is_zero() {
            return Err(Error::InvalidCoefficient("zero denominator".into()));
        }
        d
    } else {
        BigInt::from(1)
    };
    if c.peek().is_some() {
        return Err(c.err("trailing input after rational"));
    }
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

fn strip_outer_parens(s: &str) -> &str {
    let mut t = s.trim();
    loop {
        let b = t.as_bytes();
        if b.len() >= 2 && b[0] == b'(' && b[b.len() - 1] == b')' {
            // Only strip when the parens actually match each other.
            let mut depth = 0i32;
            let mut matches = true;
            for (i, &ch) in b.iter().enumerate() {
                if ch == b'(' {
                    depth += 1;
                } else if ch == b')' {
                    depth -= 1;
                    if depth == 0 && i != b.len() - 1 {
                        matches = false;
                        break;
                    }
                }
            }
            if matches {
                t = t[1..t.len() - 1].trim();
                continue;
            }
        }
        return t;
    }
}

/// Parse a coordinate function "num" or "num/den" as a ratio of polynomials.
/// The whole string is tried as a polynomial first; otherwise each top-level
/// '/' is tried as the split point, with matching outer parentheses stripped
/// from the halves. So "1/2*t" is the polynomial t/2, while "(1)/(2*t)" is
/// the genuine ratio.
pub fn parse_ratio(text: &str, env: &VarEnv, domain: CoeffDomain) -> Result<(UniPoly, UniPoly)> {
    assert_eq!(env.nvars(), 1, "ratios are univariate");
    let whole = parse_poly(strip_outer_parens(text), env, domain);
    if let Ok(p) = whole {
        return Ok((p.to_uni(), UniPoly::one(domain)));
    }
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => {
                let left = strip_outer_parens(&text[..i]);
                let right = strip_outer_parens(&text[i + 1..]);
                if let (Ok(n), Ok(d)) = (
                    parse_poly(left, env, domain),
                    parse_poly(right, env, domain),
                ) {
                    let d = d.to_uni();
                    if d.is_zero() {
                        return Err(Error::DegenerateInput(
                            "zero denominator in coordinate function".into(),
                        ));
                    }
                    return Ok((n.to_uni(), d));
                }
            }
            _ => {}
        }
    }
    whole.map(|_| unreachable!())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CoeffDomain::Rat;

    #[test]
    fn parse_curve_example() {
        let env = VarEnv::affine(2);
        let p = parse_poly("x^2 - y^2 - 4", &env, Rat).unwrap();
        assert_eq!(p.term_count(), 3);
        assert_eq!(render_poly(&p, &env), "x^2 - y^2 - 4");
    }

    #[test]
    fn parse_rational_coeff_terms() {
        let env = VarEnv::affine(2);
        let p = parse_poly("3/2*x*y + x^4", &env, Rat).unwrap();
        assert_eq!(p.coeff(&[1, 1]).to_string(), "3/2");
        assert_eq!(p.coeff(&[4, 0]).to_string(), "1");
        assert_eq!(p.term_count(), 2);
    }

    #[test]
    fn syntax_error_offset() {
        let env = VarEnv::affine(1);
        match parse_poly("x^", &env, Rat) {
            Err(Error::SyntaxError { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let env = VarEnv::affine(2);
        assert!(matches!(
            parse_poly("3x", &env, Rat),
            Err(Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_poly("x y", &env, Rat),
            Err(Error::SyntaxError { .. })
        ));
    }

    #[test]
    fn unknown_variable_and_zero_denominator() {
        let env = VarEnv::affine(2);
        assert!(matches!(
            parse_poly("x + w", &env, Rat),
            Err(Error::UnknownVariable { .. })
        ));
        assert!(matches!(
            parse_poly("1/0*x", &env, Rat),
            Err(Error::InvalidCoefficient(_))
        ));
    }

    #[test]
    fn aliases_resolve() {
        let env = VarEnv::affine(2);
        let a = parse_poly("x1^2 - x2", &env, Rat).unwrap();
        let b = parse_poly("x^2 - y", &env, Rat).unwrap();
        assert_eq!(a, b);
        let henv = VarEnv::homogeneous(2);
        let h = parse_poly("x1^2 - x2^2 - 4*x0^2", &henv, Rat).unwrap();
        assert_eq!(render_poly(&h, &henv), "x1^2 - x2^2 - 4*x0^2");
    }

    #[test]
    fn round_trip_fixpoint() {
        let env = VarEnv::affine(2);
        for src in [
            "x^2 - y^2 - 4",
            "3/2*x*y + x^4",
            "-x + 1/3",
            "2*x*y",
            "0",
            "x*y - y*x", // cancels to zero
        ] {
            let once = render_poly(&parse_poly(src, &env, Rat).unwrap(), &env);
            let twice = render_poly(&parse_poly(&once, &env, Rat).unwrap(), &env);
            assert_eq!(once, twice, "not a fixpoint: {src}");
        }
    }

    #[test]
    fn unary_and_signs() {
        let env = VarEnv::affine(1);
        let p = parse_poly("-x^2 + -3*x", &env, Rat).unwrap();
        assert_eq!(render_poly(&p, &env), "-x^2 - 3*x");
        let q = parse_poly("(-1/2)*x", &env, Rat).unwrap();
        assert_eq!(render_poly(&q, &env), "-1/2*x");
    }

    #[test]
    fn ratio_parsing() {
        let env = VarEnv::param();
        // Whole-polynomial reading wins.
        let (n, d) = parse_ratio("1/2*t", &env, Rat).unwrap();
        assert_eq!(n, UniPoly::from_i64_coeffs(Rat, &[0, 1]).scale(&ExactScalar::from_big_ratio(&BigInt::from(1), &BigInt::from(2), Rat).unwrap()));
        assert!(d == UniPoly::one(Rat));
        // Ratio split when the whole string is not a polynomial.
        let (n, d) = parse_ratio("t^2+1/t", &env, Rat).unwrap();
        assert_eq!(n, UniPoly::from_i64_coeffs(Rat, &[1, 0, 1]));
        assert_eq!(d, UniPoly::x(Rat));
        let (n, d) = parse_ratio("(1)/(2*t)", &env, Rat).unwrap();
        assert_eq!(n, UniPoly::one(Rat));
        assert_eq!(d, UniPoly::from_i64_coeffs(Rat, &[0, 2]));
    }

    #[test]
    fn parse_rational_values() {
        assert_eq!(parse_rational_str("3/2").unwrap(), BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(parse_rational_str("-4").unwrap(), BigRational::from_integer(BigInt::from(-4)));
        assert!(parse_rational_str("1/0").is_err());
        assert!(parse_rational_str("a").is_err());
    }
}
