//! Regular self-maps of A^N and the projective machinery around them:
//! validation with base-point-freeness certificates, degree gap, the
//! restriction to the hyperplane at infinity, iteration, linear
//! conjugation, and the symmetric-square construction on P^1 maps.
//!
//! Conventions: a point of A^N has coordinates x1..xN; the projective lift
//! lives in N+1 variables with the homogenizing variable x0 stored at the
//! last index. Projective representatives are normalized to primitive
//! integer coefficients (over Q) with the first form's leading coefficient
//! positive, so structural equality is equality of maps.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::{factor_binary_form, gcd_bivariate, rational_roots};
use crate::linalg;
use crate::point::ProjPoint;
use crate::poly::{monomials_of_degree, resultant, MultiPoly, UniPoly};
use crate::scalar::{render_rational, CoeffDomain, ExactScalar};

/// How base-point-freeness was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    /// Exact certificate (resultant or elimination rank).
    Certified,
    /// Probabilistic trials only; never produced for N ≤ 3.
    Attested,
}

/// Outcome of a base-point-freeness check on a tuple of forms.
#[derive(Clone, Debug)]
pub enum BpfOutcome {
    Free(Regularity),
    /// Common nonzero zero exists; witness in affine coordinates when a
    /// rational one was found.
    Zero(Option<Vec<BigRational>>),
}

const ITERATE_TERM_CAP: usize = 200_000;

// ==== base-point-freeness ===================================================

/// Decide whether n forms in n variables have a common nonzero zero.
/// Exact for n ≤ 3 (resultants / elimination rank); 64 random-line trials
/// for n ≥ 4, in which case a pass is only attested. Zero forms are allowed
/// and force a common zero for n ≥ 2.
pub fn check_base_point_free(forms: &[MultiPoly]) -> Result<BpfOutcome> {
    let n = forms.len();
    if n == 0 {
        return Err(Error::DegenerateInput("empty form tuple".into()));
    }
    for f in forms {
        assert_eq!(f.nvars(), n, "forms must be a self-map tuple");
    }
    match n {
        1 => Ok(if forms[0].is_zero() {
            BpfOutcome::Zero(Some(vec![BigRational::one()]))
        } else {
            BpfOutcome::Free(Regularity::Certified)
        }),
        2 => bpf_binary(forms),
        3 => bpf_ternary(forms),
        _ => bpf_attested(forms),
    }
}

fn bpf_binary(forms: &[MultiPoly]) -> Result<BpfOutcome> {
    let dom = forms[0].domain();
    if forms.iter().any(|f| f.is_zero()) {
        // The other form always has a zero over the closure; report a
        // rational witness when it splits one off.
        let witness = forms
            .iter()
            .find(|f| !f.is_zero())
            .and_then(|f| binary_form_rational_zero(f));
        return Ok(BpfOutcome::Zero(witness));
    }
    let rx = resultant(&forms[0], &forms[1], 0)?;
    let ry = resultant(&forms[0], &forms[1], 1)?;
    if !rx.is_zero() && !ry.is_zero() {
        return Ok(BpfOutcome::Free(Regularity::Certified));
    }
    let witness = if dom.is_rational() {
        let g = gcd_bivariate(&forms[0], &forms[1]);
        binary_form_rational_zero(&g)
    } else {
        None
    };
    Ok(BpfOutcome::Zero(witness))
}

/// A rational zero of a nonzero binary form, when one exists.
fn binary_form_rational_zero(f: &MultiPoly) -> Option<Vec<BigRational>> {
    if !f.domain().is_rational() || !f.is_homogeneous() {
        return None;
    }
    let factors = factor_binary_form(f).ok()?;
    for (fac, _) in factors {
        if fac.degree() == Some(1) {
            let a = fac.coeff(&[1, 0]).as_rational().clone();
            let b = fac.coeff(&[0, 1]).as_rational().clone();
            // aX + bY vanishes at (-b, a).
            let p = ProjPoint::from_rationals(&[-b, a]).ok()?;
            return Some(p.rational_coords());
        }
    }
    None
}

/// Elimination-rank certificate for three ternary forms of common degree d:
/// they have no common projective zero iff multiplication into degree
/// 3d - 2 is surjective.
fn bpf_ternary(forms: &[MultiPoly]) -> Result<BpfOutcome> {
    if forms.iter().any(|f| f.is_zero()) {
        return Ok(BpfOutcome::Zero(None));
    }
    let d = forms[0].degree().unwrap();
    for f in forms {
        assert_eq!(f.degree(), Some(d), "common degree expected");
    }
    let s = 3 * d - 2;
    let cols: Vec<Vec<u32>> = monomials_of_degree(3, s);
    let index: std::collections::BTreeMap<Vec<u32>, usize> =
        cols.iter().cloned().zip(0..).collect();
    let shifts = monomials_of_degree(3, s - d);
    let dom = forms[0].domain();
    let full = cols.len();
    let rank = if dom.is_rational() {
        let mut rows = Vec::new();
        for f in forms {
            for sh in &shifts {
                let row = f.mul(&MultiPoly::from_terms(
                    3,
                    dom,
                    vec![(sh.clone(), ExactScalar::one(dom))],
                ));
                let mut sparse = std::collections::BTreeMap::new();
                for (m, c) in row.terms() {
                    sparse.insert(index[&m.0], c.as_rational().clone());
                }
                rows.push(sparse);
            }
        }
        linalg::sparse_rank_rat(rows)
    } else {
        let mut rows = Vec::new();
        for f in forms {
            for sh in &shifts {
                let row = f.mul(&MultiPoly::from_terms(
                    3,
                    dom,
                    vec![(sh.clone(), ExactScalar::one(dom))],
                ));
                let mut dense = vec![ExactScalar::zero(dom); full];
                for (m, c) in row.terms() {
                    dense[index[&m.0]] = c.clone();
                }
                rows.push(dense);
            }
        }
        linalg::rank(&rows)
    };
    Ok(if rank == full {
        BpfOutcome::Free(Regularity::Certified)
    } else {
        BpfOutcome::Zero(None)
    })
}

/// Random-line trials for n ≥ 4: restrict the forms to 64 random lines and
/// look for a common root there. Finding one disproves freeness exactly;
/// passing all trials is only attested.
fn bpf_attested(forms: &[MultiPoly]) -> Result<BpfOutcome> {
    let n = forms.len();
    let dom = forms[0].domain();
    if forms.iter().any(|f| f.is_zero()) {
        return Ok(BpfOutcome::Zero(None));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xA77E57ED);
    for _ in 0..64 {
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..=9)).collect();
        let q: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..=9)).collect();
        if p.iter().all(|&c| c == 0) || q.iter().all(|&c| c == 0) {
            continue;
        }
        // Parametrize the line p + t q and restrict every form.
        let args: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let c = MultiPoly::constant(ExactScalar::from_i64(p[i], dom), 1);
                let tq = MultiPoly::var(0, 1, dom).scale(&ExactScalar::from_i64(q[i], dom));
                c.add(&tq)
            })
            .collect();
        let restricted: Vec<UniPoly> = forms.iter().map(|f| f.compose(&args).to_uni()).collect();
        if restricted.iter().all(|r| r.is_zero()) {
            // The whole line lies in the common zero locus.
            let w: Vec<BigRational> = p.iter().map(|&c| BigRational::from_integer(c.into())).collect();
            return Ok(BpfOutcome::Zero(dom.is_rational().then_some(w)));
        }
        let mut g = UniPoly::zero(dom);
        for r in &restricted {
            g = g.gcd(r);
        }
        if g.degree().unwrap_or(0) >= 1 {
            let witness = if dom.is_rational() {
                rational_roots(&g).ok().and_then(|roots| {
                    roots.first().map(|(t0, _)| {
                        (0..n)
                            .map(|i| {
                                BigRational::from_integer(p[i].into())
                                    + t0 * BigRational::from_integer(q[i].into())
                            })
                            .collect::<Vec<_>>()
                    })
                })
            } else {
                None
            };
            return Ok(BpfOutcome::Zero(witness));
        }
        // Also the direction point itself (t = infinity).
        let qs: Vec<ExactScalar> = q.iter().map(|&c| ExactScalar::from_i64(c, dom)).collect();
        if forms.iter().all(|f| f.eval(&qs).is_zero()) {
            let w: Vec<BigRational> = q.iter().map(|&c| BigRational::from_integer(c.into())).collect();
            return Ok(BpfOutcome::Zero(dom.is_rational().then_some(w)));
        }
    }
    Ok(BpfOutcome::Free(Regularity::Attested))
}

// ==== RegularEndo ===========================================================

/// A regular endomorphism of A^N: every component splits as a top form of
/// the common degree d plus a lower-degree tail, and the top forms have no
/// common nonzero zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularEndo {
    n: usize,
    d: u32,
    k: u32,
    components: Vec<MultiPoly>,
    top_forms: Vec<MultiPoly>,
    tails: Vec<MultiPoly>,
    lift: Vec<MultiPoly>,
    regularity: Regularity,
}

fn degree_d_part(p: &MultiPoly, d: u32) -> MultiPoly {
    let terms: Vec<(Vec<u32>, ExactScalar)> = p
        .terms()
        .filter(|(m, _)| m.degree() == d)
        .map(|(m, c)| (m.0.clone(), c.clone()))
        .collect();
    MultiPoly::from_terms(p.nvars(), p.domain(), terms)
}

pub fn make_regular_endo(components: Vec<MultiPoly>) -> Result<RegularEndo> {
    let n = components.len();
    if n == 0 {
        return Err(Error::DegenerateInput("empty component list".into()));
    }
    for c in &components {
        if c.nvars() != n {
            return Err(Error::DimensionError(format!(
                "{} components but a component in {} variables",
                n,
                c.nvars()
            )));
        }
        assert_eq!(c.domain(), components[0].domain(), "mixed coefficient domains");
    }
    let d = components
        .iter()
        .filter_map(|c| c.degree())
        .max()
        .unwrap_or(0);
    if d == 0 {
        return Err(Error::InvalidDegree(
            "a regular endomorphism has algebraic degree at least 1".into(),
        ));
    }
    let top_forms: Vec<MultiPoly> = components.iter().map(|c| degree_d_part(c, d)).collect();
    match check_base_point_free(&top_forms)? {
        BpfOutcome::Free(reg) => {
            let tails: Vec<MultiPoly> = components
                .iter()
                .zip(&top_forms)
                .map(|(c, t)| c.sub(t))
                .collect();
            let tail_deg = tails.iter().filter_map(|g| g.degree()).max();
            let k = match tail_deg {
                None => d,
                Some(e) => d - e,
            };
            let dom = components[0].domain();
            let mut lift = Vec::with_capacity(n + 1);
            lift.push(MultiPoly::var(n, n + 1, dom).pow(d));
            for c in &components {
                lift.push(c.homogenize(d)?);
            }
            Ok(RegularEndo { n, d, k, components, top_forms, tails, lift, regularity: reg })
        }
        BpfOutcome::Zero(witness) => Err(Error::NotRegular {
            witness: witness
                .map(|w| w.iter().map(render_rational).collect::<Vec<String>>()),
        }),
    }
}

impl RegularEndo {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// The degree gap k: the largest k in [1, d] with deg(g_i) ≤ d - k for
    /// every tail; k = d when all tails vanish.
    pub fn degree_gap(&self) -> u32 {
        self.k
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn top_forms(&self) -> &[MultiPoly] {
        &self.top_forms
    }

    pub fn tails(&self) -> &[MultiPoly] {
        &self.tails
    }

    /// The N+1 degree-d forms [x0^d, hom(f_1+g_1), ...] in x1..xN, x0 (x0
    /// stored last).
    pub fn lift(&self) -> &[MultiPoly] {
        &self.lift
    }

    pub fn domain(&self) -> CoeffDomain {
        self.components[0].domain()
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.n);
        self.components.iter().map(|c| c.eval_rat(x)).collect()
    }

    pub fn eval_scalar(&self, x: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(x.len(), self.n);
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

/// n-fold composition, exact. The degree of the result is d^n.
pub fn iterate(f: &RegularEndo, n: u32) -> Result<RegularEndo> {
    if n == 0 {
        return Err(Error::InvalidInput("iterate needs n >= 1".into()));
    }
    f.d.checked_pow(n)
        .ok_or_else(|| Error::ResourceLimit("iterate degree overflows".into()))?;
    let mut current = f.components.clone();
    for _ in 1..n {
        current = f
            .components
            .iter()
            .map(|c| c.compose(&current))
            .collect();
        let total: usize = current.iter().map(|c| c.term_count()).sum();
        if total > ITERATE_TERM_CAP {
            return Err(Error::ResourceLimit(format!(
                "iterate exceeded the {ITERATE_TERM_CAP} term cap"
            )));
        }
    }
    make_regular_endo(current)
}

/// Conjugation A ∘ f ∘ A⁻¹ by an invertible matrix over the coefficient
/// domain; degree and degree gap are preserved.
pub fn conjugate_linear(f: &RegularEndo, a: &[Vec<ExactScalar>]) -> Result<RegularEndo> {
    let n = f.n;
    assert_eq!(a.len(), n, "square matrix of the map dimension expected");
    for row in a {
        assert_eq!(row.len(), n);
    }
    let inv = linalg::invert(a).ok_or(Error::SingularMatrix)?;
    let dom = f.domain();
    let linear = |m: &[Vec<ExactScalar>], j: usize| -> MultiPoly {
        let mut p = MultiPoly::zero(n, dom);
        for (i, c) in m[j].iter().enumerate() {
            p = p.add(&MultiPoly::var(i, n, dom).scale(c));
        }
        p
    };
    let inv_subst: Vec<MultiPoly> = (0..n).map(|j| linear(&inv, j)).collect();
    let h: Vec<MultiPoly> = f.components.iter().map(|c| c.compose(&inv_subst)).collect();
    let new_components: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let mut acc = MultiPoly::zero(n, dom);
            for (j, hj) in h.iter().enumerate() {
                acc = acc.add(&hj.scale(&a[i][j]));
            }
            acc
        })
        .collect();
    make_regular_endo(new_components)
}

// ==== ProjEndo ==============================================================

/// A self-map of P^m given by m+1 forms of common degree with no common
/// nonzero zero, stored in the scalar-cleared normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjEndo {
    nvars: usize,
    degree: u32,
    forms: Vec<MultiPoly>,
    regularity: Regularity,
}

/// Clear a form tuple to its normal form: over Q, primitive integer
/// coefficients with the first nonzero form's leading coefficient positive
/// (one common scalar, never per-form); over F_p, first leading coefficient
/// one.
fn normalize_tuple(forms: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let dom = forms[0].domain();
    if dom.is_rational() {
        let mut den = num_bigint::BigInt::one();
        for f in &forms {
            for (_, c) in f.terms() {
                den = num_integer::Integer::lcm(&den, c.as_rational().denom());
            }
        }
        let mut num = num_bigint::BigInt::zero();
        for f in &forms {
            for (_, c) in f.terms() {
                let scaled = c.as_rational() * BigRational::from_integer(den.clone());
                num = num_integer::Integer::gcd(&num, scaled.numer());
            }
        }
        if num.is_zero() {
            return forms;
        }
        let mut scaler = BigRational::new(den, num);
        let first_lead = forms
            .iter()
            .find_map(|f| f.leading().map(|(_, c)| c.as_rational().clone()));
        if let Some(l) = first_lead {
            if (l * &scaler).is_negative() {
                scaler = -scaler;
            }
        }
        let s = ExactScalar::Rat(scaler);
        forms.iter().map(|f| f.scale(&s)).collect()
    } else {
        let lead = forms
            .iter()
            .find_map(|f| f.leading().map(|(_, c)| c.clone()));
        match lead.and_then(|l| l.inv()) {
            Some(inv) => forms.iter().map(|f| f.scale(&inv)).collect(),
            None => forms,
        }
    }
}

pub fn make_proj_endo(forms: Vec<MultiPoly>) -> Result<ProjEndo> {
    let nv = forms.len();
    if nv == 0 {
        return Err(Error::DegenerateInput("empty form tuple".into()));
    }
    for f in &forms {
        if f.nvars() != nv {
            return Err(Error::DimensionError(format!(
                "{} forms but a form in {} variables",
                nv,
                f.nvars()
            )));
        }
        if f.is_zero() || !f.is_homogeneous() {
            return Err(Error::DegenerateInput(
                "projective self-maps need nonzero homogeneous forms".into(),
            ));
        }
    }
    let d = forms[0].degree().unwrap();
    if d == 0 {
        return Err(Error::InvalidDegree("common degree must be at least 1".into()));
    }
    for f in &forms {
        if f.degree() != Some(d) {
            return Err(Error::InvalidDegree("forms must share a common degree".into()));
        }
    }
    match check_base_point_free(&forms)? {
        BpfOutcome::Free(reg) => Ok(ProjEndo {
            nvars: nv,
            degree: d,
            forms: normalize_tuple(forms),
            regularity: reg,
        }),
        BpfOutcome::Zero(witness) => Err(Error::NotRegular {
            witness: witness.map(|w| w.iter().map(render_rational).collect()),
        }),
    }
}

impl ProjEndo {
    /// Ambient projective dimension m (the map lives on P^m).
    pub fn ambient_dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn forms(&self) -> &[MultiPoly] {
        &self.forms
    }

    pub fn domain(&self) -> CoeffDomain {
        self.forms[0].domain()
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn eval(&self, p: &ProjPoint) -> Result<ProjPoint> {
        assert_eq!(p.coords().len(), self.nvars);
        let x = p.rational_coords();
        let image: Vec<BigRational> = self.forms.iter().map(|f| f.eval_rat(&x)).collect();
        ProjPoint::from_rationals(&image)
    }

    /// self ∘ inner. Skips the base-point-freeness re-check when both
    /// inputs are certified: a composition of base-point-free self-maps is
    /// base-point-free.
    pub fn compose(&self, inner: &ProjEndo) -> Result<ProjEndo> {
        assert_eq!(self.nvars, inner.nvars, "composable self-maps expected");
        let forms: Vec<MultiPoly> = self
            .forms
            .iter()
            .map(|f| f.compose(inner.forms()))
            .collect();
        let total: usize = forms.iter().map(|f| f.term_count()).sum();
        if total > ITERATE_TERM_CAP {
            return Err(Error::ResourceLimit(format!(
                "composition exceeded the {ITERATE_TERM_CAP} term cap"
            )));
        }
        let reg = match (self.regularity, inner.regularity) {
            (Regularity::Certified, Regularity::Certified) => Regularity::Certified,
            _ => Regularity::Attested,
        };
        self.degree
            .checked_mul(inner.degree)
            .ok_or_else(|| Error::ResourceLimit("composition degree overflows".into()))?;
        Ok(ProjEndo {
            nvars: self.nvars,
            degree: self.degree * inner.degree,
            forms: normalize_tuple(forms),
            regularity: reg,
        })
    }

    pub fn iterate(&self, n: u32) -> Result<ProjEndo> {
        if n == 0 {
            return Err(Error::InvalidInput("iterate needs n >= 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = self.compose(&out)?;
        }
        Ok(out)
    }
}

/// The restriction f_∞ of a regular endomorphism to the hyperplane at
/// infinity: the self-map of P^{N-1} given by the top forms, scalars
/// cleared.
pub fn restrict_infinity(f: &RegularEndo) -> ProjEndo {
    ProjEndo {
        nvars: f.n,
        degree: f.d,
        forms: normalize_tuple(f.top_forms.clone()),
        regularity: f.regularity,
    }
}

// ==== symmetric square ======================================================

/// The self-map induced on P^2, viewed as the space [a:b:c] of binary
/// quadratics aX² + bXY + cY², by pushing both roots through a degree-d
/// self-map of P^1. Computed exactly via the parametric resultant
/// Res_t(t² - e1 t + e2, G0(t,1) + u G1(t,1)) whose u-coefficients are the
/// needed symmetric functions.
pub fn symmetric_square(g: &ProjEndo) -> Result<ProjEndo> {
    if g.nvars() != 2 {
        return Err(Error::UnsupportedDimension(
            "symmetric square of a P^1 self-map only".into(),
        ));
    }
    let dom = g.domain();
    let d = g.degree();
    // Working variables: t = 0, e1 = 1, e2 = 2, u = 3.
    let t = MultiPoly::var(0, 4, dom);
    let e1 = MultiPoly::var(1, 4, dom);
    let e2 = MultiPoly::var(2, 4, dom);
    let u = MultiPoly::var(3, 4, dom);
    let p = t.pow(2).sub(&e1.mul(&t)).add(&e2);
    let one = ExactScalar::one(dom);
    let g0t = g.forms()[0].substitute_scalar(1, &one).embed(4, &[0]);
    let g1t = g.forms()[1].substitute_scalar(1, &one).embed(4, &[0]);
    let h = g0t.add(&g1t.mul(&u));
    // Eliminating t leaves a polynomial in (e1, e2, u); extracting the
    // u-coefficients leaves polynomials in (e1, e2).
    let r = resultant(&p, &h, 0)?;
    let by_u = r.coeffs_in_var(2);
    let pick = |i: usize| -> MultiPoly {
        by_u.get(i).cloned().unwrap_or_else(|| MultiPoly::zero(2, dom))
    };
    // Res = C' + S u + A' u² with A' = leading-coefficient product through
    // G1, C' through G0, and S the mixed sum; the image quadratic is
    // A' X² - S XY + C' Y².
    let a_new = pick(2);
    let b_new = pick(1).neg();
    let c_new = pick(0);
    let forms: Vec<MultiPoly> = [a_new, b_new, c_new]
        .iter()
        .map(|q| symmetric_to_abc(q, d, dom))
        .collect();
    make_proj_endo(forms)
}

/// Substitute e1 = -b/a, e2 = c/a into a polynomial in (e1, e2) of total
/// degree ≤ d and clear a^d, producing a degree-d form in (a, b, c).
fn symmetric_to_abc(q: &MultiPoly, d: u32, dom: CoeffDomain) -> MultiPoly {
    let mut terms: Vec<(Vec<u32>, ExactScalar)> = Vec::new();
    for (m, c) in q.terms() {
        let (i, j) = (m.0[0], m.0[1]);
        assert!(i + j <= d, "symmetric function degree exceeds d");
        let sign = if i % 2 == 1 {
            ExactScalar::from_i64(-1, dom)
        } else {
            ExactScalar::one(dom)
        };
        terms.push((vec![d - i - j, i, j], c.mul(&sign)));
    }
    MultiPoly::from_terms(3, dom, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, VarEnv};
    use crate::scalar::CoeffDomain::{Fp, Rat};

    fn affine2(s: &str) -> MultiPoly {
        parse_poly(s, &VarEnv::affine(2), Rat).unwrap()
    }

    fn p1(s: &str) -> MultiPoly {
        parse_poly(s, &VarEnv::p1(), Rat).unwrap()
    }

    #[test]
    fn example_maps_validate() {
        let f = make_regular_endo(vec![affine2("x^3 - 3*x"), affine2("y^3 + 3*y")]).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.degree_gap(), 2);
        assert_eq!(f.regularity(), Regularity::Certified);

        let f = make_regular_endo(vec![affine2("x^2"), affine2("y^2")]).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.degree_gap(), 2);

        match make_regular_endo(vec![affine2("x*y"), affine2("x^2")]) {
            Err(Error::NotRegular { witness: Some(w) }) => {
                assert_eq!(w, vec!["0".to_string(), "1".to_string()]);
            }
            other => panic!("expected NotRegular with witness, got {:?}", other),
        }
    }

    #[test]
    fn quartic_example_gap_and_infinity() {
        let f = make_regular_endo(vec![
            affine2("1/2*x^4 + 1/2*y^4 - 6"),
            affine2("1/2*x^3*y + 1/2*x*y^3"),
        ])
        .unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.degree_gap(), 4);
        let inf = restrict_infinity(&f);
        assert_eq!(inf.forms()[0], p1("X^4 + Y^4"));
        assert_eq!(inf.forms()[1], p1("X^3*Y + X*Y^3"));
    }

    #[test]
    fn restrict_infinity_top_terms() {
        let f = make_regular_endo(vec![affine2("x^2 + y"), affine2("y^2 + x")]).unwrap();
        let inf = restrict_infinity(&f);
        assert_eq!(inf.forms()[0], p1("X^2"));
        assert_eq!(inf.forms()[1], p1("Y^2"));
    }

    #[test]
    fn iterate_degree_and_gap() {
        let f = make_regular_endo(vec![affine2("x^2"), affine2("y^2")]).unwrap();
        let f2 = iterate(&f, 2).unwrap();
        assert_eq!(f2.components()[0], affine2("x^4"));
        assert_eq!(f2.components()[1], affine2("y^4"));
        assert_eq!(f2.degree_gap(), 4);

        let g = make_regular_endo(vec![affine2("x^3 - 3*x"), affine2("y^3 + 3*y")]).unwrap();
        let g2 = iterate(&g, 2).unwrap();
        assert_eq!(g2.degree(), 9);
        assert_eq!(iterate(&g, 1).unwrap(), g);
    }

    #[test]
    fn conjugation_examples() {
        let f = make_regular_endo(vec![affine2("x^2"), affine2("y^2")]).unwrap();
        let id = vec![
            vec![ExactScalar::from_i64(1, Rat), ExactScalar::from_i64(0, Rat)],
            vec![ExactScalar::from_i64(0, Rat), ExactScalar::from_i64(1, Rat)],
        ];
        assert_eq!(conjugate_linear(&f, &id).unwrap(), f);

        let diag = vec![
            vec![ExactScalar::from_i64(1, Rat), ExactScalar::from_i64(0, Rat)],
            vec![ExactScalar::from_i64(0, Rat), ExactScalar::from_i64(2, Rat)],
        ];
        let g = conjugate_linear(&f, &diag).unwrap();
        assert_eq!(g.components()[0], affine2("x^2"));
        assert_eq!(g.components()[1], affine2("1/2*y^2"));
        assert_eq!(g.degree_gap(), f.degree_gap());

        let singular = vec![
            vec![ExactScalar::from_i64(1, Rat), ExactScalar::from_i64(1, Rat)],
            vec![ExactScalar::from_i64(2, Rat), ExactScalar::from_i64(2, Rat)],
        ];
        assert!(matches!(conjugate_linear(&f, &singular), Err(Error::SingularMatrix)));
    }

    #[test]
    fn symmetric_square_of_squares() {
        let g = make_proj_endo(vec![p1("X^2"), p1("Y^2")]).unwrap();
        let s = symmetric_square(&g).unwrap();
        let env = VarEnv::custom(&["a", "b", "c"]);
        assert_eq!(s.forms()[0], parse_poly("a^2", &env, Rat).unwrap());
        assert_eq!(s.forms()[1], parse_poly("2*a*c - b^2", &env, Rat).unwrap());
        assert_eq!(s.forms()[2], parse_poly("c^2", &env, Rat).unwrap());
        // Split sample: roots 2, 3 map to 4, 9.
        let q = ProjPoint::parse_str("[1:-5:6]").unwrap();
        let img = s.eval(&q).unwrap();
        assert_eq!(img, ProjPoint::parse_str("[1:-13:36]").unwrap());
    }

    #[test]
    fn symmetric_square_identity() {
        let g = make_proj_endo(vec![p1("X"), p1("Y")]).unwrap();
        let s = symmetric_square(&g).unwrap();
        let env = VarEnv::custom(&["a", "b", "c"]);
        assert_eq!(s.forms()[0], parse_poly("a", &env, Rat).unwrap());
        assert_eq!(s.forms()[1], parse_poly("b", &env, Rat).unwrap());
        assert_eq!(s.forms()[2], parse_poly("c", &env, Rat).unwrap());
    }

    #[test]
    fn char_p_regular_map() {
        let env = VarEnv::affine(2);
        let c1 = parse_poly("x^5 + x^2*y^3 - y^5 - y^3", &env, Fp(5)).unwrap();
        let c2 = parse_poly("y^5", &env, Fp(5)).unwrap();
        let f = make_regular_endo(vec![c1, c2]).unwrap();
        assert_eq!(f.degree(), 5);
        assert_eq!(f.degree_gap(), 2);
    }

    #[test]
    fn no_rational_witness() {
        match make_regular_endo(vec![affine2("x^2 + y^2"), affine2("x^2 + y^2")]) {
            Err(Error::NotRegular { witness: None }) => {}
            other => panic!("expected NotRegular without witness, got {:?}", other),
        }
    }

    #[test]
    fn ternary_and_higher_bpf() {
        let env = VarEnv::affine(3);
        let sq: Vec<MultiPoly> = ["x^2", "y^2", "z^2"]
            .iter()
            .map(|s| parse_poly(s, &env, Rat).unwrap())
            .collect();
        assert!(matches!(
            check_base_point_free(&sq).unwrap(),
            BpfOutcome::Free(Regularity::Certified)
        ));
        let bad: Vec<MultiPoly> = ["x*y", "y*z", "z*x"]
            .iter()
            .map(|s| parse_poly(s, &env, Rat).unwrap())
            .collect();
        assert!(matches!(check_base_point_free(&bad).unwrap(), BpfOutcome::Zero(_)));

        let env4 = VarEnv::affine(4);
        let free: Vec<MultiPoly> = ["x1^2", "x2^2", "x3^2", "x4^2"]
            .iter()
            .map(|s| parse_poly(s, &env4, Rat).unwrap())
            .collect();
        assert!(matches!(
            check_base_point_free(&free).unwrap(),
            BpfOutcome::Free(Regularity::Attested)
        ));
        let hyper: Vec<MultiPoly> = ["x1^2", "x1*x2", "x1*x3", "x1*x4"]
            .iter()
            .map(|s| parse_poly(s, &env4, Rat).unwrap())
            .collect();
        assert!(matches!(check_base_point_free(&hyper).unwrap(), BpfOutcome::Zero(_)));
    }

    #[test]
    fn infinity_commutes_with_iterate() {
        let f = make_regular_endo(vec![affine2("x^2 + y"), affine2("y^2 - x + 1")]).unwrap();
        let lhs = restrict_infinity(&iterate(&f, 2).unwrap());
        let rhs = restrict_infinity(&f).iterate(2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lift_shape() {
        let f = make_regular_endo(vec![affine2("x^3 - 3*x"), affine2("y^3 + 3*y")]).unwrap();
        let lift = f.lift();
        assert_eq!(lift.len(), 3);
        // x0^3 first, stored with x0 at the last index.
        assert_eq!(lift[0].coeff(&[0, 0, 3]), ExactScalar::one(Rat));
        for g in lift {
            assert!(g.is_homogeneous());
            assert_eq!(g.degree(), Some(3));
        }
        // Restriction to x0 = 0 recovers the top forms.
        assert_eq!(lift[1].restrict_x0_zero(), f.top_forms()[0]);
    }
}
