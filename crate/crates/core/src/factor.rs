//! Univariate factorization over Q and the bivariate helpers built on it.
//!
//! The factorization route is classical Zassenhaus: reduce to a monic
//! integer polynomial, factor modulo a good odd prime (distinct-degree plus
//! Cantor-Zassenhaus splitting with a fixed-seed generator, so output is
//! deterministic), Hensel-lift above twice the factor coefficient bound,
//! and recombine subsets. Rational roots have an independent second route
//! (mod-p roots lifted by Newton iteration, then rational reconstruction)
//! so the two can cross-check each other in tests.
//!
//! Bivariate support is deliberately thin: primitive-PRS gcd, squarefree
//! part, and extraction of factors linear in one variable. No general
//! multivariate factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intutil::is_prime_u64;
use crate::poly::{squarefree_decompose, MultiPoly, UniPoly};
use crate::scalar::{CoeffDomain, ExactScalar};

// ==== dense polynomials over F_p (u64 prime) ================================

#[derive(Clone, Debug, PartialEq, Eq)]
struct ModPoly {
    p: u64,
    c: Vec<u64>, // c[i] is the coefficient of x^i; last entry nonzero
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
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

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl ModPoly {
    fn new(p: u64, mut c: Vec<u64>) -> ModPoly {
        for v in &mut c {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    fn zero(p: u64) -> ModPoly {
        ModPoly { p, c: Vec::new() }
    }

    fn x(p: u64) -> ModPoly {
        ModPoly::new(p, vec![0, 1])
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn deg(&self) -> usize {
        // Callers guard the zero polynomial.
        self.c.len() - 1
    }

    fn lc(&self) -> u64 {
        *self.c.last().unwrap()
    }

    fn sub(&self, o: &ModPoly) -> ModPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![0u64; n];
        for (i, item) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = o.c.get(i).copied().unwrap_or(0);
            *item = (a + self.p - b) % self.p;
        }
        ModPoly::new(self.p, c)
    }

    fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        ModPoly::new(self.p, c)
    }

    fn scale(&self, k: u64) -> ModPoly {
        ModPoly::new(self.p, self.c.iter().map(|&a| mulmod(a, k, self.p)).collect())
    }

    fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p))
    }

    fn divrem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero());
        let p = self.p;
        let dd = d.deg();
        let dinv = invmod(d.lc(), p);
        let mut rem = self.c.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![0u64; qlen];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let q = mulmod(rem[k], dinv, p);
            if q != 0 {
                quot[k - dd] = q;
                for (i, &dc) in d.c.iter().enumerate() {
                    let idx = k - dd + i;
                    rem[idx] = (rem[idx] + p - mulmod(q, dc, p)) % p;
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (ModPoly::new(p, quot), ModPoly::new(p, rem))
    }

    fn rem(&self, d: &ModPoly) -> ModPoly {
        self.divrem(d).1
    }

    fn gcd(&self, o: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: (g, s, t) with s*self + t*o = g, g monic.
    fn ext_gcd(&self, o: &ModPoly) -> (ModPoly, ModPoly, ModPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (ModPoly::new(p, vec![1]), ModPoly::zero(p));
        let (mut t0, mut t1) = (ModPoly::zero(p), ModPoly::new(p, vec![1]));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let norm = invmod(r0.lc(), p);
        (r0.scale(norm), s0.scale(norm), t0.scale(norm))
    }

    fn derivative(&self) -> ModPoly {
        if self.c.len() <= 1 {
            return ModPoly::zero(self.p);
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, (i as u64) % self.p, self.p))
            .collect();
        ModPoly::new(self.p, c)
    }

    fn pow_mod(&self, e: &BigUint, modulus: &ModPoly) -> ModPoly {
        let mut acc = ModPoly::new(self.p, vec![1]);
        let mut base = self.rem(modulus);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
        }
        acc
    }

    fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.c.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }
}

/// Fixed-seed xorshift for the Cantor-Zassenhaus splits; deterministic
/// output for identical inputs.
struct Rng64(u64);

impl Rng64 {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

// ==== factorization mod p ===================================================

/// Monic irreducible factors of a squarefree monic polynomial mod p (p odd).
fn factor_mod_p_squarefree(f: &ModPoly) -> Vec<ModPoly> {
    let p = f.p;
    let mut out = Vec::new();
    let mut g = f.monic();
    let x = ModPoly::x(p);
    let mut h = x.clone();
    let mut k = 0usize;
    while !g.is_zero() && g.deg() >= 1 {
        k += 1;
        if 2 * k > g.deg() {
            out.push(g.clone());
            break;
        }
        h = h.pow_mod(&BigUint::from(p), f);
        let d = g.gcd(&h.sub(&x));
        if !d.is_zero() && d.deg() >= 1 {
            split_equal_degree(&d, k, &mut out);
            g = g.divrem(&d).0;
        }
    }
    out.sort_by(|a, b| (a.deg(), &a.c).cmp(&(b.deg(), &b.c)));
    out
}

/// Cantor-Zassenhaus equal-degree splitting: every irreducible factor of h
/// has degree k.
fn split_equal_degree(h: &ModPoly, k: usize, out: &mut Vec<ModPoly>) {
    if h.deg() == k {
        out.push(h.monic());
        return;
    }
    let p = h.p;
    let e = (BigUint::from(p).pow(k as u32) - BigUint::one()) / BigUint::from(2u32);
    let mut rng = Rng64(0x9E37_79B9_7F4A_7C15 ^ (h.c.len() as u64) << 32 ^ h.c[0]);
    loop {
        let rc: Vec<u64> = (0..h.deg()).map(|_| rng.next() % p).collect();
        let r = ModPoly::new(p, rc);
        if r.is_zero() {
            continue;
        }
        let s = r.pow_mod(&e, h);
        let cand = s.sub(&ModPoly::new(p, vec![1]));
        let d = h.gcd(&cand);
        if !d.is_zero() && d.deg() >= 1 && d.deg() < h.deg() {
            let q = h.divrem(&d).0;
            split_equal_degree(&d, k, out);
            split_equal_degree(&q, k, out);
            return;
        }
    }
}

// ==== integer polynomial helpers ============================================

fn int_coeffs(f: &UniPoly) -> Vec<BigInt> {
    f.coeffs()
        .iter()
        .map(|c| {
            let q = c.as_rational();
            assert!(q.denom().is_one(), "integer polynomial expected");
            q.numer().clone()
        })
        .collect()
}

fn uni_from_int(coeffs: Vec<BigInt>) -> UniPoly {
    UniPoly::new(
        CoeffDomain::Rat,
        coeffs
            .into_iter()
            .map(|c| ExactScalar::Rat(BigRational::from_integer(c)))
            .collect(),
    )
}

fn reduce_mod_p(coeffs: &[BigInt], p: u64) -> ModPoly {
    let pm = BigInt::from(p);
    let c = coeffs
        .iter()
        .map(|a| {
            let r = a.mod_floor(&pm);
            r.to_u64().unwrap()
        })
        .collect();
    ModPoly::new(p, c)
}

fn max_abs_coeff(coeffs: &[BigInt]) -> BigInt {
    coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

fn one_norm(coeffs: &[BigInt]) -> BigInt {
    coeffs.iter().map(|c| c.abs()).sum()
}

/// Division of integer polynomials with monic divisor; None when the
/// remainder is nonzero.
fn int_div_exact_monic(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    assert!(d.last().map_or(false, |c| c.is_one()), "monic divisor required");
    let dd = d.len() - 1;
    let mut rem: Vec<BigInt> = f.to_vec();
    while rem.last().map_or(false, |c| c.is_zero()) {
        rem.pop();
    }
    if rem.len() < d.len() {
        return if rem.is_empty() { Some(vec![BigInt::zero()]) } else { None };
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1;
        let q = rem[k].clone();
        if !q.is_zero() {
            quot[k - dd] = q.clone();
            for (i, dc) in d.iter().enumerate() {
                rem[k - dd + i] -= &q * dc;
            }
        }
        rem.pop();
        while rem.last().map_or(false, |c| c.is_zero()) {
            rem.pop();
        }
    }
    if rem.is_empty() {
        Some(quot)
    } else {
        None
    }
}

// ==== Hensel lifting ========================================================

fn mod_reduce(coeffs: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = coeffs.iter().map(|a| a.mod_floor(m)).collect();
    while c.last().map_or(false, |v| v.is_zero()) {
        c.pop();
    }
    c
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    mod_reduce(&c, m)
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut c = vec![BigInt::zero(); n];
    for (i, item) in c.iter_mut().enumerate() {
        let mut v = BigInt::zero();
        if let Some(x) = a.get(i) {
            v += x;
        }
        if let Some(y) = b.get(i) {
            v += y;
        }
        *item = v;
    }
    mod_reduce(&c, m)
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut c = vec![BigInt::zero(); n];
    for (i, item) in c.iter_mut().enumerate() {
        let mut v = BigInt::zero();
        if let Some(x) = a.get(i) {
            v += x;
        }
        if let Some(y) = b.get(i) {
            v -= y;
        }
        *item = v;
    }
    mod_reduce(&c, m)
}

/// divrem by a monic polynomial over Z/m.
fn zdivrem_monic(f: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(d.last().map_or(false, |c| c.is_one()));
    let dd = d.len() - 1;
    let mut rem = f.to_vec();
    while rem.last().map_or(false, |c| c.is_zero()) {
        rem.pop();
    }
    let qlen = rem.len().saturating_sub(dd);
    let mut quot = vec![BigInt::zero(); qlen];
    while rem.len() > dd {
        let k = rem.len() - 1;
        let q = rem[k].clone();
        if !q.is_zero() {
            quot[k - dd] = q.clone();
            for (i, dc) in d.iter().enumerate() {
                let idx = k - dd + i;
                let v = (&rem[idx] - &q * dc).mod_floor(m);
                rem[idx] = v;
            }
        }
        rem.pop();
        while rem.last().map_or(false, |c| c.is_zero()) {
            rem.pop();
        }
    }
    (mod_reduce(&quot, m), rem)
}

/// One quadratic Hensel step: from f ≡ g·h (mod m), s·g + t·h ≡ 1 (mod m)
/// with h monic, produce the same data mod m².
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zsub(f, &zmul(g, h, &m2), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e, &m2), h, &m2);
    let g1 = zadd(&zadd(g, &zmul(t, &e, &m2), &m2), &zmul(&q, g, &m2), &m2);
    let h1 = zadd(h, &r, &m2);
    let b = zsub(&zadd(&zmul(s, &g1, &m2), &zmul(t, &h1, &m2), &m2), &[BigInt::one()], &m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b, &m2), &h1, &m2);
    let s1 = zsub(s, &d, &m2);
    let t1 = zsub(&zsub(t, &zmul(t, &b, &m2), &m2), &zmul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

fn modpoly_to_bigint(f: &ModPoly) -> Vec<BigInt> {
    f.c.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift the monic mod-p factorization of monic f to modulus M (a power of
/// p), recursively over a balanced factor tree.
fn hensel_lift_tree(
    f: &[BigInt],
    factors: &[ModPoly],
    p: u64,
    target: &BigInt,
) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![mod_reduce(f, target)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let gbar = left.iter().fold(ModPoly::new(p, vec![1]), |a, b| a.mul(b));
    let hbar = right.iter().fold(ModPoly::new(p, vec![1]), |a, b| a.mul(b));
    let (one, sbar, tbar) = gbar.ext_gcd(&hbar);
    assert_eq!(one.deg(), 0, "factor halves must be coprime");
    let mut g = modpoly_to_bigint(&gbar);
    let mut h = modpoly_to_bigint(&hbar);
    let mut s = modpoly_to_bigint(&sbar);
    let mut t = modpoly_to_bigint(&tbar);
    let mut m = BigInt::from(p);
    while &m < target {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    // g may have lost monicity only in representation; both g and h divide f
    // mod m with h monic by construction. Recurse with the working modulus.
    let mut out = hensel_lift_tree(&mod_reduce(&g, &m), left, p, &m);
    out.extend(hensel_lift_tree(&mod_reduce(&h, &m), right, p, &m));
    // Reduce to the caller's modulus view: keep the working modulus (≥
    // target) implicit; entries are already reduced mod m which the
    // recombination treats as the symmetric-range modulus.
    out
}

// ==== Zassenhaus over Z =====================================================

fn symmetric_rep(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn pick_prime(f: &[BigInt]) -> u64 {
    let lc = f.last().unwrap();
    let mut p = 3u64;
    loop {
        if is_prime_u64(p) && !(lc % BigInt::from(p)).is_zero() {
            let fb = reduce_mod_p(f, p);
            if fb.c.len() == f.len() {
                let d = fb.gcd(&fb.derivative());
                if d.deg() == 0 {
                    return p;
                }
            }
        }
        p += 2;
    }
}

/// Factor a monic squarefree integer polynomial into monic irreducible
/// integer factors.
fn factor_monic_squarefree(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let p = pick_prime(f);
    let fbar = reduce_mod_p(f, p);
    let modular = factor_mod_p_squarefree(&fbar);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // Coefficient bound: any monic factor of f has sup-norm at most
    // 2^n * ||f||_1, so lift past twice that.
    let bound = BigInt::from(2).pow(n as u32) * one_norm(f);
    let target = &bound * 4 + 1;
    let lifted = hensel_lift_tree(f, &modular, p, &target);
    // Recover the working modulus actually used (the tree doubles from p).
    let mut modulus = BigInt::from(p);
    while modulus < target {
        modulus = &modulus * &modulus;
    }

    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut current = f.to_vec();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut size = 1usize;
    while 2 * size <= remaining.len() {
        let mut found = true;
        while found && 2 * size <= remaining.len() {
            found = false;
            let idxs: Vec<usize> = (0..remaining.len()).collect();
            for combo in combinations(&idxs, size) {
                let mut prod = vec![BigInt::one()];
                for &i in &combo {
                    prod = zmul(&prod, &remaining[i], &modulus);
                }
                let cand: Vec<BigInt> =
                    prod.iter().map(|c| symmetric_rep(c, &modulus)).collect();
                if !cand.last().map_or(false, |c| c.is_one()) {
                    continue;
                }
                if let Some(q) = int_div_exact_monic(&current, &cand) {
                    out.push(cand);
                    current = q;
                    let mut keep = Vec::new();
                    for (i, fac) in remaining.into_iter().enumerate() {
                        if !combo.contains(&i) {
                            keep.push(fac);
                        }
                    }
                    remaining = keep;
                    found = true;
                    break;
                }
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        out.push(current);
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 0usize)];
    while let Some((cur, start)) = stack.pop() {
        if cur.len() == k {
            out.push(cur);
            continue;
        }
        for i in (start..items.len()).rev() {
            let mut next = cur.clone();
            next.push(items[i]);
            stack.push((next, i + 1));
        }
    }
    out
}

/// Deterministic ordering for polynomial factor lists.
fn cmp_uni(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    da.cmp(&db).then_with(|| {
        for i in (0..=da.max(db)).rev() {
            let ca = a.coeff(i);
            let cb = b.coeff(i);
            let ord = ca.as_rational().cmp(cb.as_rational());
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Irreducible factorization over Q. Factors are primitive with positive
/// leading coefficient, listed in a deterministic order with their
/// multiplicities; the overall rational content is dropped.
pub fn factor_unipoly(f: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::DegenerateInput("factorization of the zero polynomial".into()));
    }
    if !f.domain().is_rational() {
        return Err(Error::UnsupportedField(
            "irreducible factorization is implemented over Q".into(),
        ));
    }
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    for (sq, mult) in squarefree_decompose(f)? {
        for piece in factor_squarefree_primitive(&sq) {
            out.push((piece, mult));
        }
    }
    out.sort_by(|a, b| cmp_uni(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

fn factor_squarefree_primitive(f: &UniPoly) -> Vec<UniPoly> {
    let n = match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    if n == 1 {
        return vec![f.content_primitive().1];
    }
    let (_, prim) = f.content_primitive();
    let ic = int_coeffs(&prim);
    let b = ic.last().unwrap().clone();
    // Monic transform F(x) = b^(n-1) f(x/b); factors map back by x -> b x
    // followed by taking primitive parts.
    let monic: Vec<BigInt> = ic
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if i == n {
                BigInt::one()
            } else {
                a * b.pow((n - 1 - i) as u32)
            }
        })
        .collect();
    debug_assert!(monic.last().unwrap().is_one());
    let pieces = factor_monic_squarefree(&monic);
    pieces
        .into_iter()
        .map(|g| {
            let deg = g.len() - 1;
            let mapped: Vec<BigInt> =
                g.iter().enumerate().map(|(i, c)| c * b.pow(i as u32)).collect();
            let _ = deg;
            uni_from_int(mapped).content_primitive().1
        })
        .collect()
}

// ==== rational roots (independent route) ====================================

/// Exact rational roots with multiplicities, ascending. Found by lifting
/// mod-p roots with Newton iteration and rational reconstruction; every
/// candidate is verified by exact evaluation, and multiplicity by exact
/// division.
pub fn rational_roots(f: &UniPoly) -> Result<Vec<(BigRational, u32)>> {
    if f.is_zero() {
        return Err(Error::DegenerateInput("roots of the zero polynomial".into()));
    }
    if !f.domain().is_rational() {
        return Err(Error::UnsupportedField("rational roots are a Q-domain notion".into()));
    }
    let (_, prim) = f.content_primitive();
    if prim.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    // Strip x^k.
    let mut coeffs = int_coeffs(&prim);
    let mut zero_mult = 0u32;
    while coeffs.first().map_or(false, |c| c.is_zero()) {
        coeffs.remove(0);
        zero_mult += 1;
    }
    let mut roots: Vec<(BigRational, u32)> = Vec::new();
    if zero_mult > 0 {
        roots.push((BigRational::zero(), zero_mult));
    }
    if coeffs.len() > 1 {
        let stripped = uni_from_int(coeffs.clone());
        // Squarefree part for the lifting; multiplicities recovered after.
        let sqf_parts = squarefree_decompose(&stripped)?;
        let mut sqf = UniPoly::one(CoeffDomain::Rat);
        for (part, _) in &sqf_parts {
            sqf = sqf.mul(part);
        }
        let s = int_coeffs(&sqf.content_primitive().1);
        if s.len() > 1 {
            for root in lift_rational_roots(&s) {
                let mut mult = 0u32;
                let factor = UniPoly::new(
                    CoeffDomain::Rat,
                    vec![
                        ExactScalar::Rat(-root.clone()),
                        ExactScalar::Rat(BigRational::one()),
                    ],
                );
                let mut cur = stripped.clone();
                loop {
                    let (q, r) = cur.divrem(&factor);
                    if r.is_zero() {
                        mult += 1;
                        cur = q;
                    } else {
                        break;
                    }
                }
                if mult > 0 {
                    roots.push((root, mult));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

fn lift_rational_roots(s: &[BigInt]) -> Vec<BigRational> {
    let mut p = 101u64;
    let (p, sbar) = loop {
        if is_prime_u64(p) && !(s.last().unwrap() % BigInt::from(p)).is_zero() {
            let sb = reduce_mod_p(s, p);
            if sb.c.len() == s.len() {
                let d = sb.gcd(&sb.derivative());
                if d.deg() == 0 {
                    break (p, sb);
                }
            }
        }
        p += 2;
    };
    // Roots mod p by direct scan; p stays near 10^2..10^3.
    let residues: Vec<u64> = (0..p).filter(|&r| sbar.eval(r) == 0).collect();
    if residues.is_empty() {
        return Vec::new();
    }
    let norm = max_abs_coeff(s);
    let target = &norm * &norm * 2 + 1;
    let spoly = uni_from_int(s.to_vec());
    let sprime = spoly.derivative();
    let mut out = Vec::new();
    'roots: for r0 in residues {
        let mut m = BigInt::from(p);
        let mut r = BigInt::from(r0);
        while m < target {
            m = &m * &m;
            // Newton step mod m: r <- r - s(r) / s'(r).
            let sval = eval_int_mod(s, &r, &m);
            let dval = eval_int_mod(&int_coeffs(&sprime), &r, &m);
            let dinv = match mod_inverse(&dval, &m) {
                Some(v) => v,
                None => continue 'roots,
            };
            r = (&r - sval * dinv).mod_floor(&m);
        }
        if let Some((num, den)) = rational_reconstruct(&r, &m, &norm) {
            let cand = BigRational::new(num, den);
            if spoly.eval(&ExactScalar::Rat(cand.clone())).is_zero() {
                out.push(cand);
            }
        }
    }
    out
}

fn eval_int_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Find num/den ≡ r (mod m) with |num| ≤ bound, 0 < den ≤ bound.
fn rational_reconstruct(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1.abs() > *bound {
        if r1.is_zero() {
            return None;
        }
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    Some((num, den))
}

// ==== binary forms ==========================================================

/// Irreducible factorization of a nonzero homogeneous binary form over Q:
/// primitive factors with positive leading coefficient and multiplicities,
/// deterministic order. The [1:0] direction shows up as the factor in the
/// second variable alone.
pub fn factor_binary_form(form: &MultiPoly) -> Result<Vec<(MultiPoly, u32)>> {
    if form.is_zero() {
        return Err(Error::DegenerateInput("factorization of the zero form".into()));
    }
    assert_eq!(form.nvars(), 2, "binary form expected");
    if !form.domain().is_rational() {
        return Err(Error::UnsupportedField(
            "form factorization is implemented over Q".into(),
        ));
    }
    if !form.is_homogeneous() {
        return Err(Error::DegenerateInput("inhomogeneous input to form factorization".into()));
    }
    let d = form.degree().unwrap();
    // Dehomogenize at (t, 1); the missing degree is the multiplicity of the
    // second-variable factor.
    let dom = form.domain();
    let t = form.substitute_scalar(1, &ExactScalar::one(dom)).to_uni();
    let m_y = d - t.degree().unwrap_or(0) as u32;
    let mut out: Vec<(MultiPoly, u32)> = Vec::new();
    if m_y > 0 {
        out.push((MultiPoly::var(1, 2, dom), m_y));
    }
    for (fac, mult) in factor_unipoly(&t)? {
        let e = fac.degree().unwrap() as u32;
        let mut terms: Vec<(Vec<u32>, ExactScalar)> = Vec::new();
        for (i, c) in fac.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push((vec![i as u32, e - i as u32], c.clone()));
            }
        }
        let f2 = MultiPoly::from_terms(2, dom, terms);
        let (_, prim) = f2.content_primitive();
        out.push((prim, mult));
    }
    out.sort_by(|a, b| cmp_multi(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Deterministic total order on rational multivariate polynomials.
pub fn cmp_multi(a: &MultiPoly, b: &MultiPoly) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let da = a.degree();
    let db = b.degree();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    let ta: Vec<_> = a.terms().collect();
    let tb: Vec<_> = b.terms().collect();
    for (x, y) in ta.iter().rev().zip(tb.iter().rev()) {
        match x.0.cmp(y.0) {
            Ordering::Equal => {}
            o => return o,
        }
        match x.1.as_rational().cmp(y.1.as_rational()) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    ta.len().cmp(&tb.len())
}

// ==== bivariate gcd and squarefree part =====================================

fn to_rec(f: &MultiPoly) -> Vec<UniPoly> {
    f.coeffs_in_var(1).into_iter().map(|c| c.to_uni()).collect()
}

fn from_rec(v: &[UniPoly], dom: CoeffDomain) -> MultiPoly {
    let mut out = MultiPoly::zero(2, dom);
    for (i, c) in v.iter().enumerate() {
        let cm = c.to_multi().embed(2, &[0]);
        let yi = MultiPoly::var(1, 2, dom).pow(i as u32);
        out = out.add(&cm.mul(&yi));
    }
    out
}

fn rec_deg(v: &[UniPoly]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn rec_trim(mut v: Vec<UniPoly>) -> Vec<UniPoly> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rec_content(v: &[UniPoly]) -> UniPoly {
    let mut g = UniPoly::zero(CoeffDomain::Rat);
    for c in v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        g
    } else {
        g.content_primitive().1
    }
}

fn rec_div_uni(v: &[UniPoly], d: &UniPoly) -> Vec<UniPoly> {
    v.iter()
        .map(|c| {
            let (q, r) = c.divrem(d);
            assert!(r.is_zero(), "content division is exact");
            q
        })
        .collect()
}

fn rec_scale(v: &[UniPoly], k: &UniPoly) -> Vec<UniPoly> {
    v.iter().map(|c| c.mul(k)).collect()
}

fn rec_sub(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let n = a.len().max(b.len());
    let zero = UniPoly::zero(CoeffDomain::Rat);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x.sub(y));
    }
    rec_trim(out)
}

fn rec_shift_mul(v: &[UniPoly], k: usize) -> Vec<UniPoly> {
    let mut out = vec![UniPoly::zero(CoeffDomain::Rat); k];
    out.extend_from_slice(v);
    out
}

/// Pseudo-remainder of a by b in the main variable.
fn rec_prem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let db = rec_deg(b).expect("nonzero divisor");
    let lb = b[db].clone();
    let mut r: Vec<UniPoly> = a.to_vec();
    loop {
        let dr = match rec_deg(&r) {
            None => return Vec::new(),
            Some(d) => d,
        };
        if dr < db {
            return rec_trim(r);
        }
        let lr = r[dr].clone();
        let scaled = rec_scale(&r, &lb);
        let sub = rec_shift_mul(&rec_scale(b, &lr), dr - db);
        r = rec_sub(&scaled, &sub);
    }
}

fn rec_primitive(v: &[UniPoly]) -> Vec<UniPoly> {
    match rec_deg(v) {
        None => Vec::new(),
        Some(_) => {
            let c = rec_content(v);
            rec_div_uni(&rec_trim(v.to_vec()), &c)
        }
    }
}

/// Primitive gcd of two bivariate polynomials over Q (primitive integer
/// output with positive leading coefficient; gcd(0, 0) = 0).
pub fn gcd_bivariate(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    assert_eq!(f.nvars(), 2);
    assert_eq!(g.nvars(), 2);
    assert!(f.domain().is_rational() && g.domain().is_rational());
    let dom = f.domain();
    if f.is_zero() {
        return g.content_primitive().1;
    }
    if g.is_zero() {
        return f.content_primitive().1;
    }
    let fr = to_rec(f);
    let gr = to_rec(g);
    let cf = rec_content(&fr);
    let cg = rec_content(&gr);
    let c = cf.gcd(&cg).content_primitive().1;
    let mut a = rec_primitive(&fr);
    let mut b = rec_primitive(&gr);
    if rec_deg(&a) < rec_deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while rec_deg(&b).is_some() {
        let r = rec_prem(&a, &b);
        a = b;
        b = rec_primitive(&r);
        if rec_deg(&a) < rec_deg(&b) {
            std::mem::swap(&mut a, &mut b);
        }
    }
    let prim = from_rec(&a, dom);
    let cm = c.to_multi().embed(2, &[0]);
    prim.mul(&cm).content_primitive().1
}

/// Squarefree part of a bivariate polynomial over Q: the product of its
/// distinct irreducible factors, primitive with positive leading
/// coefficient.
pub fn squarefree_part_bivariate(f: &MultiPoly) -> Result<MultiPoly> {
    if f.is_zero() {
        return Err(Error::DegenerateInput("squarefree part of the zero polynomial".into()));
    }
    assert_eq!(f.nvars(), 2);
    let fx = f.derivative(0);
    let fy = f.derivative(1);
    let mut g = gcd_bivariate(f, &fx);
    g = gcd_bivariate(&g, &fy);
    let q = f
        .div_exact(&g)
        .expect("gcd divides the polynomial");
    Ok(q.content_primitive().1)
}

// ==== linear factor extraction ==============================================

/// Factors of a bivariate polynomial that are linear in one of the
/// variables (A(u)·v + B(u) with coprime A, B), pulled out by exact
/// division. `rest` is the primitive quotient; the search enumerates
/// divisor pairs of the leading and constant coefficients, capped, so it is
/// exhaustive for small inputs and conservative beyond the cap.
pub struct LinearExtraction {
    pub linear_factors: Vec<MultiPoly>,
    pub rest: MultiPoly,
}

const DIVISOR_CAP: usize = 512;

fn divisor_products(f: &UniPoly, cap: usize) -> Option<Vec<UniPoly>> {
    // All primitive monic-content divisors, built from the irreducible
    // factorization together with integer content divisors.
    let (content, prim) = f.content_primitive();
    let mut divisors: Vec<UniPoly> = vec![UniPoly::one(CoeffDomain::Rat)];
    let factors = factor_unipoly(&prim).ok()?;
    for (fac, mult) in factors {
        let mut next = Vec::new();
        for d in &divisors {
            let mut power = UniPoly::one(CoeffDomain::Rat);
            for _ in 0..=mult {
                next.push(d.mul(&power));
                power = power.mul(&fac);
                if next.len() > cap {
                    return None;
                }
            }
        }
        divisors = next;
    }
    // Integer content divisors.
    let cnum = content.numer().abs();
    let cint = cnum.to_biguint().unwrap();
    let mut int_divs: Vec<BigInt> = vec![BigInt::one()];
    if !cint.is_one() && !cint.is_zero() {
        let fact = crate::intutil::factor_u(&cint);
        for (p, e) in fact {
            let mut next = Vec::new();
            for d in &int_divs {
                let mut pw = BigInt::one();
                for _ in 0..=e {
                    next.push(d * &pw);
                    pw *= BigInt::from(p);
                    if next.len() > cap {
                        return None;
                    }
                }
            }
            int_divs = next;
        }
    }
    let mut out = Vec::new();
    for d in &divisors {
        for k in &int_divs {
            out.push(d.scale(&ExactScalar::Rat(BigRational::from_integer(k.clone()))));
            if out.len() > cap {
                return None;
            }
        }
    }
    Some(out)
}

pub fn extract_linear_factors(g: &MultiPoly) -> LinearExtraction {
    assert_eq!(g.nvars(), 2);
    assert!(g.domain().is_rational());
    let dom = g.domain();
    let mut rest = g.content_primitive().1;
    let mut out: Vec<MultiPoly> = Vec::new();
    for v in [1usize, 0usize] {
        // Pure factors in the other variable, from the content.
        let u = 1 - v;
        loop {
            if rest.degree_in(v).unwrap_or(0) == 0 {
                break;
            }
            let coeffs: Vec<UniPoly> =
                rest.coeffs_in_var(v).into_iter().map(|c| c.to_uni()).collect();
            let cont = coeffs
                .iter()
                .fold(UniPoly::zero(dom), |a, c| a.gcd(c));
            let mut progressed = false;
            if cont.degree().unwrap_or(0) >= 1 {
                if let Ok(roots) = rational_roots(&cont) {
                    for (r, _) in roots {
                        let lin = UniPoly::new(
                            dom,
                            vec![ExactScalar::Rat(-r), ExactScalar::Rat(BigRational::one())],
                        )
                        .content_primitive()
                        .1;
                        let lin2 = lin.to_multi().embed(2, &[u]);
                        while let Some(q) = rest.div_exact(&lin2) {
                            out.push(lin2.clone());
                            rest = q;
                            progressed = true;
                        }
                    }
                }
            }
            // v-linear factors A(u) v + B(u).
            let coeffs: Vec<UniPoly> =
                rest.coeffs_in_var(v).into_iter().map(|c| c.to_uni()).collect();
            let dv = rest.degree_in(v).unwrap_or(0) as usize;
            if dv == 0 {
                break;
            }
            let lead = coeffs[dv].clone();
            let cons = coeffs[0].clone();
            if cons.is_zero() {
                // v divides.
                let vfac = MultiPoly::var(v, 2, dom);
                if let Some(q) = rest.div_exact(&vfac) {
                    out.push(vfac);
                    rest = q;
                    continue;
                }
            }
            let mut found = false;
            if let (Some(da), Some(db)) = (
                divisor_products(&lead, DIVISOR_CAP),
                divisor_products(&cons, DIVISOR_CAP),
            ) {
                'search: for aa in &da {
                    for bb in &db {
                        if aa.is_zero() || aa.gcd(bb).degree().unwrap_or(0) >= 1 {
                            continue;
                        }
                        for sign in [1i64, -1] {
                            let bterm = bb.scale(&ExactScalar::from_i64(sign, dom));
                            let cand = aa
                                .to_multi()
                                .embed(2, &[u])
                                .mul(&MultiPoly::var(v, 2, dom))
                                .add(&bterm.to_multi().embed(2, &[u]));
                            if cand.degree().unwrap_or(0) == 0 {
                                continue;
                            }
                            // Composite integer content means a smaller
                            // candidate covers the same factor.
                            if !cand.content_primitive().0.abs().is_one() {
                                continue;
                            }
                            if let Some(q) = rest.div_exact(&cand) {
                                // A has positive leading coefficient by
                                // construction, so cand is already the
                                // normal form for a v-linear factor.
                                out.push(cand);
                                rest = q;
                                found = true;
                                break 'search;
                            }
                        }
                    }
                }
            }
            if !found && !progressed {
                break;
            }
        }
    }
    out.sort_by(cmp_multi);
    let rest = rest.content_primitive().1;
    LinearExtraction { linear_factors: out, rest }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, VarEnv};
    use crate::scalar::CoeffDomain::Rat;

    fn up(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64_coeffs(Rat, coeffs)
    }

    #[test]
    fn factor_small() {
        // x^2 - 1 = (x-1)(x+1)
        let f = up(&[-1, 0, 1]);
        let fs = factor_unipoly(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0, up(&[-1, 1]));
        assert_eq!(fs[1].0, up(&[1, 1]));
        // x^2 + 1 irreducible
        let f = up(&[1, 0, 1]);
        let fs = factor_unipoly(&f).unwrap();
        assert_eq!(fs, vec![(up(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn factor_with_multiplicity_and_content() {
        // 6 (x-1)^2 (x^2+x+1)
        let f = up(&[-1, 1])
            .mul(&up(&[-1, 1]))
            .mul(&up(&[1, 1, 1]))
            .scale(&ExactScalar::from_i64(6, Rat));
        let fs = factor_unipoly(&f).unwrap();
        assert_eq!(fs, vec![(up(&[-1, 1]), 2), (up(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn factor_nonmonic() {
        // (2x - 1)(3x + 5)(x^2 + 2)
        let f = up(&[-1, 2]).mul(&up(&[5, 3])).mul(&up(&[2, 0, 1]));
        let fs = factor_unipoly(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().any(|(p, _)| *p == up(&[-1, 2])));
        assert!(fs.iter().any(|(p, _)| *p == up(&[5, 3])));
        assert!(fs.iter().any(|(p, _)| *p == up(&[2, 0, 1])));
        // Recompose up to content.
        let mut prod = UniPoly::one(Rat);
        for (p, m) in &fs {
            prod = prod.mul(&p.pow(*m));
        }
        assert_eq!(prod.content_primitive().1, f.content_primitive().1);
    }

    #[test]
    fn factor_quintic_cyclotomic_like() {
        // x^5 - 1 = (x - 1)(x^4 + x^3 + x^2 + x + 1)
        let f = up(&[-1, 0, 0, 0, 0, 1]);
        let fs = factor_unipoly(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0, up(&[-1, 1]));
        assert_eq!(fs[1].0, up(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn rational_roots_cross_check() {
        // roots 3/2 (double), -1, 0
        let f = up(&[0, 1])
            .mul(&up(&[-3, 2]))
            .mul(&up(&[-3, 2]))
            .mul(&up(&[1, 1]))
            .mul(&up(&[1, 0, 1]));
        let roots = rational_roots(&f).unwrap();
        let expected = vec![
            (BigRational::from_integer(BigInt::from(-1)), 1u32),
            (BigRational::zero(), 1),
            (BigRational::new(BigInt::from(3), BigInt::from(2)), 2),
        ];
        assert_eq!(roots, expected);
        // Cross-check against the Zassenhaus route.
        let fs = factor_unipoly(&f).unwrap();
        let linear_count: u32 = fs
            .iter()
            .filter(|(p, _)| p.degree() == Some(1))
            .map(|(_, m)| m)
            .sum();
        let root_count: u32 = roots.iter().map(|(_, m)| m).sum();
        assert_eq!(linear_count, root_count);
    }

    #[test]
    fn binary_form_factorization() {
        let env = VarEnv::p1();
        // X^2 - Y^2 over (X, Y)
        let f = parse_poly("X^2 - Y^2", &env, Rat).unwrap();
        let fs = factor_binary_form(&f).unwrap();
        assert_eq!(fs.len(), 2);
        for (_, m) in &fs {
            assert_eq!(*m, 1);
        }
        // X^3 * Y: monomial directions
        let f = parse_poly("X^3*Y", &env, Rat).unwrap();
        let fs = factor_binary_form(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(parse_poly("X", &env, Rat).unwrap(), 3)));
        assert!(fs.contains(&(parse_poly("Y", &env, Rat).unwrap(), 1)));
        // 16 (X^2 + Y^2)(X^4 - 6 X^2 Y^2 + Y^4): irreducible pieces
        let f = parse_poly(
            "16*X^6 - 80*X^4*Y^2 - 80*X^2*Y^4 + 16*Y^6",
            &env,
            Rat,
        );
        let _ = f; // placeholder sanity; detailed fixture lives in endo tests
    }

    #[test]
    fn bivariate_gcd_and_squarefree() {
        let env = VarEnv::affine(2);
        let g = parse_poly("y - x^2", &env, Rat).unwrap();
        let h = parse_poly("y + x^2", &env, Rat).unwrap();
        let prod = g.mul(&h);
        // Output sign is pinned by the positive-leading normal form.
        assert_eq!(gcd_bivariate(&prod, &g), parse_poly("x^2 - y", &env, Rat).unwrap());
        let sq = prod.mul(&g);
        let sf = squarefree_part_bivariate(&sq).unwrap();
        assert_eq!(sf, parse_poly("x^4 - y^2", &env, Rat).unwrap());
        // Coprime inputs.
        let a = parse_poly("x + y", &env, Rat).unwrap();
        let b = parse_poly("x - y + 1", &env, Rat).unwrap();
        assert_eq!(gcd_bivariate(&a, &b).degree(), Some(0));
    }

    #[test]
    fn linear_extraction_pullback_shape() {
        let env = VarEnv::affine(2);
        // y^2 - x^4 = (y - x^2)(y + x^2)
        let g = parse_poly("y^2 - x^4", &env, Rat).unwrap();
        let ex = extract_linear_factors(&g);
        assert_eq!(ex.linear_factors.len(), 2);
        assert!(ex
            .linear_factors
            .contains(&parse_poly("y - x^2", &env, Rat).unwrap()));
        assert!(ex
            .linear_factors
            .contains(&parse_poly("y + x^2", &env, Rat).unwrap()));
        assert_eq!(ex.rest.degree(), Some(0));
        // x^2 - 2 has no rational linear factors.
        let g = parse_poly("x^2 - 2", &env, Rat).unwrap();
        let ex = extract_linear_factors(&g);
        assert!(ex.linear_factors.is_empty());
        assert_eq!(ex.rest, g);
        // Vertical line factor x - 2 out of (x - 2)(x^2 + y^2 + 1).
        let g = parse_poly("x - 2", &env, Rat)
            .unwrap()
            .mul(&parse_poly("x^2 + y^2 + 1", &env, Rat).unwrap());
        let ex = extract_linear_factors(&g);
        assert_eq!(
            ex.linear_factors,
            vec![parse_poly("x - 2", &env, Rat).unwrap()]
        );
        assert_eq!(ex.rest, parse_poly("x^2 + y^2 + 1", &env, Rat).unwrap());
    }
}
