//! Sparse multivariate and dense univariate polynomials over Q and F_p.
//!
//! Representation notes:
//! - `MultiPoly` is a term map keyed by exponent vectors in graded-lex order;
//!   no zero coefficient is ever stored, so the zero polynomial is the empty
//!   map and equality is map equality.
//! - The degree of the zero polynomial is `None`, a real sentinel: the
//!   degree-gap convention needs "deg 0 ≤ d - k" to hold vacuously.
//! - The homogenizing variable is stored at the LAST index and sorts below
//!   every affine variable; its display name is x0. This makes the canonical
//!   rendering of x^2 - y^2 - 4 homogenized read "x1^2 - x2^2 - 4*x0^2".

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{render_rational, CoeffDomain, ExactScalar};

// ==== monomials =============================================================

/// Exponent vector. Ordered graded-lex: total degree first, then
/// lexicographic with earlier positions taking precedence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise quotient; None when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// ==== multivariate polynomials ==============================================

/// Sparse polynomial in a fixed number of variables over Q or F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    domain: CoeffDomain,
    nvars: usize,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, domain: CoeffDomain) -> MultiPoly {
        MultiPoly { domain, nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize, domain: CoeffDomain) -> MultiPoly {
        MultiPoly::constant(ExactScalar::one(domain), nvars)
    }

    pub fn constant(c: ExactScalar, nvars: usize) -> MultiPoly {
        let domain = c.domain();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(nvars), c);
        }
        MultiPoly { domain, nvars, terms }
    }

    pub fn var(i: usize, nvars: usize, domain: CoeffDomain) -> MultiPoly {
        assert!(i < nvars, "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(i, nvars), ExactScalar::one(domain));
        MultiPoly { domain, nvars, terms }
    }

    pub fn from_terms(
        nvars: usize,
        domain: CoeffDomain,
        terms: impl IntoIterator<Item = (Vec<u32>, ExactScalar)>,
    ) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars, domain);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    /// Number of stored terms (the quantity written N(f) in coefficient
    /// statistics).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; None is the zero-polynomial sentinel.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant term (zero scalar when absent).
    pub fn constant_term(&self) -> ExactScalar {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(|| ExactScalar::zero(self.domain))
    }

    /// Leading (graded-lex maximal) term.
    pub fn leading(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, exps: &[u32]) -> ExactScalar {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| ExactScalar::zero(self.domain))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    fn check(&self, other: &MultiPoly) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.domain, other.domain, "mixed coefficient domains");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        MultiPoly { domain: self.domain, nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars, self.domain);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect();
        MultiPoly { domain: self.domain, nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let mut out = MultiPoly::zero(self.nvars, self.domain);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars, self.domain);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, args: &[ExactScalar]) -> ExactScalar {
        assert_eq!(args.len(), self.nvars, "argument count mismatch");
        // Power cache per variable up to its maximal exponent.
        let mut pows: Vec<Vec<ExactScalar>> = Vec::with_capacity(self.nvars);
        for (i, a) in args.iter().enumerate() {
            let maxe = self.degree_in(i).unwrap_or(0) as usize;
            let mut col = Vec::with_capacity(maxe + 1);
            col.push(ExactScalar::one(self.domain));
            for _ in 0..maxe {
                col.push(col.last().unwrap().mul(a));
            }
            pows.push(col);
        }
        let mut acc = ExactScalar::zero(self.domain);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&pows[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval_rat(&self, args: &[BigRational]) -> BigRational {
        let scalars: Vec<ExactScalar> =
            args.iter().map(|q| ExactScalar::Rat(q.clone())).collect();
        self.eval(&scalars).as_rational().clone()
    }

    /// Substitute a polynomial for every variable.
    pub fn compose(&self, args: &[MultiPoly]) -> MultiPoly {
        assert_eq!(args.len(), self.nvars, "argument count mismatch");
        if self.terms.is_empty() {
            let (nv, dom) = args
                .first()
                .map(|a| (a.nvars, a.domain))
                .unwrap_or((0, self.domain));
            return MultiPoly::zero(nv, dom);
        }
        let nv = args[0].nvars;
        let dom = args[0].domain;
        assert_eq!(dom, self.domain, "mixed coefficient domains");
        for a in args {
            assert_eq!(a.nvars, nv, "substitution arity mismatch");
            assert_eq!(a.domain, dom, "mixed coefficient domains");
        }
        let mut pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (i, a) in args.iter().enumerate() {
            let maxe = self.degree_in(i).unwrap_or(0) as usize;
            let mut col = Vec::with_capacity(maxe + 1);
            col.push(MultiPoly::one(nv, dom));
            for _ in 0..maxe {
                col.push(col.last().unwrap().mul(a));
            }
            pows.push(col);
        }
        let mut acc = MultiPoly::zero(nv, dom);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone(), nv);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&pows[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        assert!(var < self.nvars);
        let mut out = MultiPoly::zero(self.nvars, self.domain);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] = e - 1;
            let factor = ExactScalar::from_i64(e as i64, self.domain);
            out.add_term(m2, c.mul(&factor));
        }
        out
    }

    /// Partial evaluation: fix one variable to a scalar and drop it.
    pub fn substitute_scalar(&self, var: usize, value: &ExactScalar) -> MultiPoly {
        assert!(var < self.nvars);
        assert_eq!(value.domain(), self.domain);
        let mut out = MultiPoly::zero(self.nvars - 1, self.domain);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps.remove(var);
            out.add_term(Monomial(exps), c.mul(&value.pow(e)));
        }
        out
    }

    /// Sum of the terms of maximal total degree, as a form.
    pub fn top_form(&self) -> Result<MultiPoly> {
        let d = self
            .degree()
            .ok_or_else(|| Error::DegenerateInput("top form of the zero polynomial".into()))?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(MultiPoly { domain: self.domain, nvars: self.nvars, terms })
    }

    /// x0-homogenization to the given degree. The new variable is appended
    /// at the last index (display name x0).
    pub fn homogenize(&self, target_degree: u32) -> Result<MultiPoly> {
        if let Some(d) = self.degree() {
            if target_degree < d {
                return Err(Error::InvalidDegree(format!(
                    "target degree {target_degree} below polynomial degree {d}"
                )));
            }
        }
        let mut out = MultiPoly::zero(self.nvars + 1, self.domain);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps.push(target_degree - m.degree());
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Inverse of homogenize: set x0 (the last variable) to 1 and drop it.
    pub fn dehomogenize(&self) -> MultiPoly {
        assert!(self.nvars >= 1, "dehomogenize needs at least one variable");
        self.substitute_scalar(self.nvars - 1, &ExactScalar::one(self.domain))
    }

    /// Restrict a form to the hyperplane x0 = 0 (last variable).
    pub fn restrict_x0_zero(&self) -> MultiPoly {
        assert!(self.nvars >= 1);
        self.substitute_scalar(self.nvars - 1, &ExactScalar::zero(self.domain))
    }

    /// Integer content and primitive part over Q: p = c * prim with prim
    /// having coprime integer coefficients and positive leading coefficient.
    /// Zero maps to (0, 0).
    pub fn content_primitive(&self) -> (BigRational, MultiPoly) {
        assert!(self.domain.is_rational(), "content is a rational-domain notion");
        if self.is_zero() {
            return (BigRational::zero(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.as_rational().denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.as_rational() * BigRational::from_integer(den_lcm.clone());
            num_gcd = num_gcd.gcd(scaled.numer());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        let lead = self.leading().unwrap().1.as_rational();
        if lead.is_negative() {
            content = -content;
        }
        let inv = ExactScalar::Rat(content.recip());
        (content, self.scale(&inv))
    }

    /// Exact quotient by a single divisor; None when not exactly divisible.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        self.check(divisor);
        let (dm, dc) = divisor.leading()?;
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars, self.domain);
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&dm)?;
            let qc = rc.div(&dc).expect("nonzero leading coefficient");
            let mut step = MultiPoly::zero(self.nvars, self.domain);
            step.add_term(qm, qc);
            rem = rem.sub(&step.mul(divisor));
            quot = quot.add(&step);
        }
        Some(quot)
    }

    /// Coefficients of powers of one variable, as polynomials in the others.
    pub fn coeffs_in_var(&self, var: usize) -> Vec<MultiPoly> {
        assert!(var < self.nvars);
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars - 1, self.domain); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps.remove(var);
            out[e].add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Re-embed into a larger variable set with `var_map[i]` the new index of
    /// old variable i.
    pub fn embed(&self, new_nvars: usize, var_map: &[usize]) -> MultiPoly {
        assert_eq!(var_map.len(), self.nvars);
        let mut out = MultiPoly::zero(new_nvars, self.domain);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[var_map[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    pub fn to_uni(&self) -> UniPoly {
        assert_eq!(self.nvars, 1, "univariate view of a multivariate polynomial");
        let deg = self.degree().unwrap_or(0) as usize;
        let mut coeffs = vec![ExactScalar::zero(self.domain); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.0[0] as usize] = c.clone();
        }
        UniPoly::new(self.domain, coeffs)
    }

    /// Canonical rendering with the given display names, one per variable in
    /// storage order. Terms descend in graded-lex order; factors within a
    /// term follow storage order.
    pub fn render(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars, "one display name per variable");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c {
                ExactScalar::Rat(q) => {
                    (q.is_negative(), render_rational(&q.abs()))
                }
                ExactScalar::Fp { r, .. } => (false, r.to_string()),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].to_string()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            if factors.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.render(&refs))
    }
}

/// Default affine display names: x, y, z up to three variables, x1..xN above.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// Display names for an x0-homogenized polynomial: x1..xN then x0 last,
/// matching the storage layout of `homogenize`.
pub fn homogeneous_names(nvars: usize) -> Vec<String> {
    assert!(nvars >= 1);
    let mut v: Vec<String> = (1..nvars).map(|i| format!("x{i}")).collect();
    v.push("x0".to_string());
    v
}

/// All exponent vectors of total degree d in nvars variables, in a
/// deterministic order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(cur, pos + 1, left - e, out);
        }
        cur[pos] = 0;
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

// ==== dense univariate polynomials ==========================================

/// Dense univariate polynomial; the coefficient of x^i sits at index i and
/// the last stored coefficient is nonzero (zero polynomial: empty vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    domain: CoeffDomain,
    coeffs: Vec<ExactScalar>,
}

impl UniPoly {
    pub fn new(domain: CoeffDomain, mut coeffs: Vec<ExactScalar>) -> UniPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { domain, coeffs }
    }

    pub fn zero(domain: CoeffDomain) -> UniPoly {
        UniPoly { domain, coeffs: Vec::new() }
    }

    pub fn one(domain: CoeffDomain) -> UniPoly {
        UniPoly::new(domain, vec![ExactScalar::one(domain)])
    }

    pub fn x(domain: CoeffDomain) -> UniPoly {
        UniPoly::new(domain, vec![ExactScalar::zero(domain), ExactScalar::one(domain)])
    }

    pub fn constant(c: ExactScalar) -> UniPoly {
        let domain = c.domain();
        UniPoly::new(domain, vec![c])
    }

    pub fn from_i64_coeffs(domain: CoeffDomain, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            domain,
            coeffs.iter().map(|&c| ExactScalar::from_i64(c, domain)).collect(),
        )
    }

    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ExactScalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| ExactScalar::zero(self.domain))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> ExactScalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| ExactScalar::zero(self.domain))
    }

    fn check(&self, other: &UniPoly) {
        assert_eq!(self.domain, other.domain, "mixed coefficient domains");
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        UniPoly::new(self.domain, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            domain: self.domain,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero(self.domain);
        }
        UniPoly {
            domain: self.domain,
            coeffs: self.coeffs.iter().map(|k| k.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.domain);
        }
        let mut coeffs =
            vec![ExactScalar::zero(self.domain); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(self.domain, coeffs)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::one(self.domain);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero(self.domain);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(self.domain);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&ExactScalar::from_i64(i as i64, self.domain)))
            .collect();
        UniPoly::new(self.domain, coeffs)
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        self.check(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let dlc_inv = divisor.lc().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![
            ExactScalar::zero(self.domain);
            self.coeffs.len().saturating_sub(dd)
        ];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let q = rem[k].mul(&dlc_inv);
            if !q.is_zero() {
                quot[k - dd] = q.clone();
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[k - dd + i] = rem[k - dd + i].sub(&q.mul(c));
                }
            }
            rem.pop();
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
        }
        (UniPoly::new(self.domain, quot), UniPoly::new(self.domain, rem))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    /// Monic gcd over the coefficient field.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer content and primitive part over Q, positive leading
    /// coefficient.
    pub fn content_primitive(&self) -> (BigRational, UniPoly) {
        let (c, p) = self.to_multi().content_primitive();
        (c, p.to_uni())
    }

    pub fn to_multi(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(1, self.domain);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_term(Monomial(vec![i as u32]), c.clone());
        }
        out
    }

    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(self.domain);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UniPoly::constant(c.clone()));
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multi().render(&["x"]))
    }
}

// ==== squarefree decomposition ==============================================

/// Yun decomposition over Q: pairwise-coprime squarefree factors with
/// strictly increasing multiplicities whose powers recompose the input up to
/// a nonzero scalar. Factors are primitive with positive leading coefficient.
pub fn squarefree_decompose(p: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    if p.is_zero() {
        return Err(Error::DegenerateInput(
            "squarefree decomposition of the zero polynomial".into(),
        ));
    }
    if !p.domain().is_rational() {
        return Err(Error::UnsupportedField(
            "squarefree decomposition requires rational coefficients".into(),
        ));
    }
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    let dp = p.derivative();
    if dp.is_zero() {
        // Nonzero constant.
        return Ok(out);
    }
    let g = p.gcd(&dp);
    let mut b = p.divrem(&g).0;
    let mut c = dp.divrem(&g).0;
    let mut mult = 0u32;
    while b.degree().unwrap_or(0) > 0 {
        mult += 1;
        let d = c.sub(&b.derivative());
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            let (_, prim) = a.content_primitive();
            out.push((prim, mult));
        }
        b = b.divrem(&a).0;
        c = d.divrem(&a).0;
    }
    Ok(out)
}

// ==== resultants ============================================================

/// Formal degree in the eliminated variable: total degree for a nonzero
/// homogeneous input (the binary-form convention, so vanishing leading
/// coefficients at [1:0] are still caught), actual degree otherwise.
fn formal_degree_in(p: &MultiPoly, var: usize) -> Option<u32> {
    if p.is_zero() {
        return None;
    }
    if p.is_homogeneous() {
        p.degree()
    } else {
        p.degree_in(var)
    }
}

/// Sylvester-determinant resultant eliminating one variable. The result
/// lives in the remaining variables; it vanishes identically iff the inputs
/// share a factor of positive degree in the eliminated variable (for actual
/// leading coefficients; homogeneous inputs use the form convention).
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly> {
    assert_eq!(p.nvars(), q.nvars(), "variable count mismatch");
    assert!(var < p.nvars(), "variable index out of range");
    let m = formal_degree_in(p, var).unwrap_or(0) as usize;
    let n = formal_degree_in(q, var).unwrap_or(0) as usize;
    if m == 0 || n == 0 {
        return Err(Error::InvalidDegree(
            "resultant needs positive degree in the eliminated variable".into(),
        ));
    }
    let rem_vars = p.nvars() - 1;
    let dom = p.domain();
    let mut pc = p.coeffs_in_var(var);
    let mut qc = q.coeffs_in_var(var);
    pc.resize(m + 1, MultiPoly::zero(rem_vars, dom));
    qc.resize(n + 1, MultiPoly::zero(rem_vars, dom));
    let size = m + n;
    let mut mat = vec![vec![MultiPoly::zero(rem_vars, dom); size]; size];
    for i in 0..n {
        for (j, c) in pc.iter().enumerate() {
            mat[i][i + (m - j)] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in qc.iter().enumerate() {
            mat[n + i][i + (n - j)] = c.clone();
        }
    }
    Ok(poly_det_bareiss(mat, rem_vars, dom))
}

/// Fraction-free Bareiss determinant over the polynomial ring; every
/// division is exact by the Bareiss identity.
fn poly_det_bareiss(mut m: Vec<Vec<MultiPoly>>, nvars: usize, dom: CoeffDomain) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(nvars, dom);
    }
    let mut sign_flip = false;
    let mut prev = MultiPoly::one(nvars, dom);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return MultiPoly::zero(nvars, dom),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(nvars, dom);
        }
        prev = m[k][k].clone();
    }
    let mut det = m[n - 1][n - 1].clone();
    if sign_flip {
        det = det.neg();
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CoeffDomain::Rat;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::from_i64(n, Rat)
    }

    fn xy_poly(terms: &[(u32, u32, i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            2,
            Rat,
            terms.iter().map(|&(a, b, c)| (vec![a, b], q(c))),
        )
    }

    #[test]
    fn graded_lex_term_order() {
        // x^2 > x*y > y^2 > x > 1
        let p = xy_poly(&[(0, 0, 1), (1, 0, 1), (2, 0, 1), (1, 1, 1), (0, 2, 1)]);
        assert_eq!(p.render(&["x", "y"]), "x^2 + x*y + y^2 + x + 1");
    }

    #[test]
    fn render_canonical_forms() {
        let p = xy_poly(&[(2, 0, 1), (0, 2, -1), (0, 0, -4)]);
        assert_eq!(p.render(&["x", "y"]), "x^2 - y^2 - 4");
        let h = p.homogenize(2).unwrap();
        assert_eq!(h.render(&["x1", "x2", "x0"]), "x1^2 - x2^2 - 4*x0^2");
        assert_eq!(h.dehomogenize(), p);
    }

    #[test]
    fn homogenize_cubic_and_constant() {
        let p = MultiPoly::from_terms(1, Rat, [(vec![3], q(1)), (vec![1], q(-3))]);
        let h = p.homogenize(3).unwrap();
        assert_eq!(h.render(&["x1", "x0"]), "x1^3 - 3*x1*x0^2");
        let one = MultiPoly::one(1, Rat);
        assert_eq!(one.homogenize(0).unwrap().render(&["x1", "x0"]), "1");
        assert!(matches!(p.homogenize(2), Err(Error::InvalidDegree(_))));
    }

    #[test]
    fn top_form_examples() {
        let p = MultiPoly::from_terms(1, Rat, [(vec![3], q(1)), (vec![1], q(-3))]);
        assert_eq!(p.top_form().unwrap().render(&["x"]), "x^3");
        let c = xy_poly(&[(2, 0, 1), (0, 2, -1), (0, 0, -4)]);
        assert_eq!(c.top_form().unwrap().render(&["x", "y"]), "x^2 - y^2");
        let z = MultiPoly::zero(2, Rat);
        assert!(matches!(z.top_form(), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(MultiPoly::zero(2, Rat).degree(), None);
        assert_eq!(MultiPoly::one(2, Rat).degree(), Some(0));
    }

    #[test]
    fn mul_degree_additivity() {
        let p = xy_poly(&[(2, 0, 1), (0, 1, 3)]);
        let r = xy_poly(&[(1, 1, 2), (0, 0, -1)]);
        let prod = p.mul(&r);
        assert_eq!(
            prod.degree().unwrap(),
            p.degree().unwrap() + r.degree().unwrap()
        );
        let tf = prod.top_form().unwrap();
        let expect = p.top_form().unwrap().mul(&r.top_form().unwrap());
        assert_eq!(tf, expect);
    }

    #[test]
    fn div_exact_detects_divisibility() {
        let a = xy_poly(&[(1, 0, 1), (0, 1, -1)]);
        let b = xy_poly(&[(1, 0, 1), (0, 1, 1)]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.add(&MultiPoly::one(2, Rat)).div_exact(&a).is_none());
    }

    #[test]
    fn resultant_spec_cases() {
        // Res_x(x^2 - y, x - y) = y^2 - y
        let p = xy_poly(&[(2, 0, 1), (0, 1, -1)]);
        let r = xy_poly(&[(1, 0, 1), (0, 1, -1)]);
        let res = resultant(&p, &r, 0).unwrap();
        assert_eq!(res.render(&["y"]), "y^2 - y");
        // Res_X(X^3, Y^3) = Y^9 under the binary-form convention
        let f = xy_poly(&[(3, 0, 1)]);
        let g = xy_poly(&[(0, 3, 1)]);
        let res = resultant(&f, &g, 0).unwrap();
        assert_eq!(res.render(&["Y"]), "Y^9");
        // Res_x(x, x) = 0
        let x1 = MultiPoly::from_terms(1, Rat, [(vec![1], q(1))]);
        let res = resultant(&x1, &x1, 0).unwrap();
        assert!(res.is_zero());
        // Degree-0 nonhomogeneous input in the eliminated variable errors.
        let c = xy_poly(&[(0, 1, 1), (0, 0, 1)]);
        assert!(matches!(resultant(&p, &c, 0), Err(Error::InvalidDegree(_))));
    }

    #[test]
    fn squarefree_spec_cases() {
        // x^3 - x is squarefree
        let p = UniPoly::from_i64_coeffs(Rat, &[0, -1, 0, 1]);
        let d = squarefree_decompose(&p).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, 1);
        assert_eq!(d[0].0, p);
        // x^2 (x - 1) = [(x-1, 1), (x, 2)]
        let p = UniPoly::from_i64_coeffs(Rat, &[0, 0, -1, 1]);
        let d = squarefree_decompose(&p).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].0, UniPoly::from_i64_coeffs(Rat, &[-1, 1]));
        assert_eq!(d[0].1, 1);
        assert_eq!(d[1].0, UniPoly::x(Rat));
        assert_eq!(d[1].1, 2);
        // 9 t^4 = [(t, 4)] up to scalar
        let p = UniPoly::from_i64_coeffs(Rat, &[0, 0, 0, 0, 9]);
        let d = squarefree_decompose(&p).unwrap();
        assert_eq!(d, vec![(UniPoly::x(Rat), 4)]);
    }

    #[test]
    fn squarefree_rejects_zero() {
        assert!(squarefree_decompose(&UniPoly::zero(Rat)).is_err());
    }

    #[test]
    fn compose_and_eval_agree() {
        let p = xy_poly(&[(2, 0, 1), (1, 1, -3), (0, 0, 5)]);
        let u = xy_poly(&[(1, 0, 2), (0, 1, 1)]);
        let v = xy_poly(&[(0, 1, 1), (0, 0, -1)]);
        let c = p.compose(&[u.clone(), v.clone()]);
        let at = [q(3), q(7)];
        assert_eq!(c.eval(&at), p.eval(&[u.eval(&at), v.eval(&at)]));
    }

    #[test]
    fn content_primitive_normalizes() {
        let p = xy_poly(&[(1, 0, -4), (0, 1, -6)]);
        let (c, prim) = p.content_primitive();
        assert_eq!(c, BigRational::from_integer(BigInt::from(-2)));
        assert_eq!(prim.render(&["x", "y"]), "2*x + 3*y");
        assert_eq!(prim.scale(&ExactScalar::Rat(c)), p);
    }

    #[test]
    fn unipoly_divrem_gcd() {
        let a = UniPoly::from_i64_coeffs(Rat, &[-1, 0, 1]); // x^2 - 1
        let b = UniPoly::from_i64_coeffs(Rat, &[1, 1]); // x + 1
        let (qq, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(qq, UniPoly::from_i64_coeffs(Rat, &[-1, 1]));
        assert_eq!(a.gcd(&b), b.monic());
    }

    #[test]
    fn fp_poly_arithmetic() {
        let f5 = CoeffDomain::Fp(5);
        let p = MultiPoly::from_terms(
            1,
            f5,
            [(vec![5], ExactScalar::from_i64(1, f5)), (vec![1], ExactScalar::from_i64(4, f5))],
        );
        // (x^5 + 4x)(x) over F_5
        let x = MultiPoly::var(0, 1, f5);
        let prod = p.mul(&x);
        assert_eq!(prod.degree(), Some(6));
        assert_eq!(
            prod.eval(&[ExactScalar::from_i64(2, f5)]),
            ExactScalar::from_i64(2 * (32 + 8) % 5, f5)
        );
    }
}
