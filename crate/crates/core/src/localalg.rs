//! Local multiplicities as Artin-ring lengths, ramification of maps of the
//! line, intersection numbers against the hyperplane at infinity, and a
//! seeded survey of maximal multiplicities.
//!
//! The length e_f(P) is computed from truncated quotients: the dimension of
//! k[x]/((translated components) + m^M) is the partial sum of the Hilbert
//! function of the associated graded ring, so two equal consecutive values
//! certify that the function reached zero and the dimension is final (the
//! associated graded ring is generated in degree one). The truncation trace
//! is kept on the result as an auditable certificate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{sample_plane_points, PlaneCurve};
use crate::endo::{make_proj_endo, make_regular_endo, ProjEndo, RegularEndo};
use crate::error::{Error, Result};
use crate::factor::{cmp_multi, factor_binary_form, rational_roots};
use crate::linalg::sparse_rank_rat;
use crate::point::ProjPoint;
use crate::poly::{monomials_of_degree, resultant, Monomial, MultiPoly, UniPoly};
use crate::scalar::{CoeffDomain, ExactScalar};

/// Truncation cap for the Macaulay dimension scan. Isolated desk-scale
/// multiplicities stabilize far below it.
pub const MACAULAY_CAP: u32 = 64;

// ==== multiplicity as Artin length ==========================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityResult {
    pub value: u64,
    pub truncation: u32,
    pub stabilized: bool,
    /// (M, dim of the degree-M truncated quotient), in scan order.
    pub trace: Vec<(u32, u64)>,
}

/// Length of the local ring of the fiber of Q at P: the stabilized
/// dimension of k[x]/((components translated to P, minus Q) + m^M), with M
/// doubling from 2. Rational points and rational coefficients only.
pub fn multiplicity_at(
    components: &[MultiPoly],
    p: &[BigRational],
    q: &[BigRational],
) -> Result<MultiplicityResult> {
    multiplicity_capped(components, p, q, MACAULAY_CAP)
}

fn multiplicity_capped(
    components: &[MultiPoly],
    p: &[BigRational],
    q: &[BigRational],
    cap: u32,
) -> Result<MultiplicityResult> {
    if components.is_empty() {
        return Err(Error::DegenerateInput("no map components".into()));
    }
    let n = components[0].nvars();
    if components.iter().any(|c| c.nvars() != n) || components.len() != n {
        return Err(Error::DimensionError(
            "multiplicity needs N components in N variables".into(),
        ));
    }
    if p.len() != n || q.len() != n {
        return Err(Error::DimensionError("point dimension mismatch".into()));
    }
    if components.iter().any(|c| !c.domain().is_rational()) {
        return Err(Error::UnsupportedField(
            "the Macaulay scan runs over exact rationals".into(),
        ));
    }
    for (c, qi) in components.iter().zip(q) {
        if &c.eval_rat(p) != qi {
            return Err(Error::InvalidInput(
                "the point does not map to the stated image".into(),
            ));
        }
    }

    // h_i(x) = f_i(x + P) - Q_i, so h_i(0) = 0 and the local ring sits at
    // the origin.
    let shift: Vec<MultiPoly> = (0..n)
        .map(|j| {
            let mut e = vec![0u32; n];
            e[j] = 1;
            MultiPoly::from_terms(
                n,
                CoeffDomain::Rat,
                [
                    (e, ExactScalar::Rat(BigRational::one())),
                    (vec![0; n], ExactScalar::Rat(p[j].clone())),
                ],
            )
        })
        .collect();
    let translated: Vec<MultiPoly> = components
        .iter()
        .zip(q)
        .map(|(c, qi)| {
            let con = MultiPoly::from_terms(
                n,
                CoeffDomain::Rat,
                [(vec![0; n], ExactScalar::Rat(qi.clone()))],
            );
            c.compose(&shift).sub(&con)
        })
        .collect();

    let mut trace: Vec<(u32, u64)> = Vec::new();
    let mut m = 2u32;
    let mut prev: Option<u64> = None;
    while m <= cap {
        let dim = truncated_dim(&translated, m);
        trace.push((m, dim));
        if prev == Some(dim) {
            return Ok(MultiplicityResult { value: dim, truncation: m, stabilized: true, trace });
        }
        prev = Some(dim);
        m *= 2;
    }
    Err(Error::NotIsolated { cap })
}

/// dim of k[x]/((h) + m^M): monomials of degree < M minus the rank of the
/// truncations of x^alpha * h_i. Every h_i vanishes at the origin, so
/// |alpha| <= M - 2 already spans all contributions below degree M.
fn truncated_dim(translated: &[MultiPoly], m: u32) -> u64 {
    let n = translated[0].nvars();
    let mut cols: BTreeMap<Monomial, usize> = BTreeMap::new();
    for deg in 0..m {
        for exps in monomials_of_degree(n, deg) {
            let idx = cols.len();
            cols.insert(Monomial(exps), idx);
        }
    }
    let mut rows: Vec<BTreeMap<usize, BigRational>> = Vec::new();
    for h in translated {
        for deg in 0..=m.saturating_sub(2) {
            for alpha in monomials_of_degree(n, deg) {
                let am = Monomial(alpha);
                let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (mono, coeff) in h.terms() {
                    let prod = am.mul(mono);
                    if prod.degree() < m {
                        let idx = cols[&prod];
                        let entry = row.entry(idx).or_insert_with(BigRational::zero);
                        *entry += coeff.as_rational();
                    }
                }
                row.retain(|_, v| !v.is_zero());
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    cols.len() as u64 - sparse_rank_rat(rows) as u64
}

// ==== ramification on the line ==============================================

/// A place of the line: a rational point or an irreducible binary form
/// grouping a conjugate orbit.
#[derive(Clone, Debug, PartialEq)]
pub enum RamifiedPlace {
    Rational(ProjPoint),
    Irreducible { form: MultiPoly, residue_degree: u32 },
}

impl RamifiedPlace {
    pub fn residue_degree(&self) -> u32 {
        match self {
            RamifiedPlace::Rational(_) => 1,
            RamifiedPlace::Irreducible { residue_degree, .. } => *residue_degree,
        }
    }

    fn from_factor(fac: MultiPoly) -> Result<RamifiedPlace> {
        if fac.degree() == Some(1) {
            let alpha = fac.coeff(&[1, 0]).as_rational().clone();
            let beta = fac.coeff(&[0, 1]).as_rational().clone();
            Ok(RamifiedPlace::Rational(ProjPoint::from_rationals(&[-beta, alpha])?))
        } else {
            let residue_degree = fac.degree().unwrap();
            Ok(RamifiedPlace::Irreducible { form: fac, residue_degree })
        }
    }
}

/// Places of the line carrying ramification, with residue degrees and
/// indices, plus the maximal index over all of P^1.
#[derive(Clone, Debug, PartialEq)]
pub struct RamificationProfile {
    pub entries: Vec<(RamifiedPlace, u32, u32)>,
    pub max_index: u32,
}

fn linear_form_through(p: &ProjPoint) -> MultiPoly {
    // P = [a : b] is the zero of b*X - a*Y.
    let a = ExactScalar::Rat(BigRational::from(p.coords()[0].clone()));
    let b = ExactScalar::Rat(BigRational::from(p.coords()[1].clone()));
    MultiPoly::from_terms(2, CoeffDomain::Rat, [(vec![1, 0], b), (vec![0, 1], a.neg())])
}

fn divide_out_count(form: &MultiPoly, linear: &MultiPoly) -> u32 {
    let mut v = form.clone();
    let mut e = 0u32;
    while let Some(qt) = v.div_exact(linear) {
        v = qt;
        e += 1;
    }
    e
}

/// Order of vanishing of g - g(P) at P, in a local coordinate on the line:
/// the multiplicity of P's linear form in beta*G0 - alpha*G1 for
/// g(P) = [alpha : beta].
pub fn ramification_index_p1(g: &ProjEndo, p: &ProjPoint) -> Result<u32> {
    if g.nvars() != 2 || p.coords().len() != 2 {
        return Err(Error::DimensionError("ramification index lives on the line".into()));
    }
    let img = g.eval(p)?;
    let alpha = ExactScalar::Rat(BigRational::from(img.coords()[0].clone()));
    let beta = ExactScalar::Rat(BigRational::from(img.coords()[1].clone()));
    let v = g.forms()[0].scale(&beta).sub(&g.forms()[1].scale(&alpha));
    assert!(!v.is_zero(), "fiber form of a degree >= 1 map cannot vanish");
    let e = divide_out_count(&v, &linear_form_through(p));
    debug_assert!(e >= 1);
    Ok(e)
}

/// The full fiber of the value q: each place with its residue degree and
/// local index, from the exact factorization of beta*G0 - alpha*G1.
pub fn fiber_profile_p1(g: &ProjEndo, q: &ProjPoint) -> Result<Vec<(RamifiedPlace, u32, u32)>> {
    if g.nvars() != 2 || q.coords().len() != 2 {
        return Err(Error::DimensionError("fibers here live on the line".into()));
    }
    let alpha = ExactScalar::Rat(BigRational::from(q.coords()[0].clone()));
    let beta = ExactScalar::Rat(BigRational::from(q.coords()[1].clone()));
    let v = g.forms()[0].scale(&beta).sub(&g.forms()[1].scale(&alpha));
    let mut out = Vec::new();
    for (fac, mult) in factor_binary_form(&v)? {
        let place = RamifiedPlace::from_factor(fac)?;
        let rd = place.residue_degree();
        out.push((place, rd, mult));
    }
    Ok(out)
}

/// Wronskian of the pair of defining forms; its root multiplicities are the
/// ramification indices minus one.
pub fn wronskian_p1(g: &ProjEndo) -> MultiPoly {
    let g0 = &g.forms()[0];
    let g1 = &g.forms()[1];
    g0.derivative(0).mul(&g1.derivative(1)).sub(&g0.derivative(1).mul(&g1.derivative(0)))
}

/// Ramification profile of a self-map of the line: every Wronskian factor
/// of multiplicity m contributes index 1 + m, the chart point at infinity
/// included through the homogeneous treatment.
pub fn max_multiplicity_p1(g: &ProjEndo) -> Result<RamificationProfile> {
    if g.nvars() != 2 {
        return Err(Error::DimensionError("the profile is for maps of the line".into()));
    }
    let w = wronskian_p1(g);
    if w.is_zero() {
        return Err(Error::UnsupportedField(
            "identically zero Wronskian (inseparable characteristic-p input)".into(),
        ));
    }
    if w.degree() == Some(0) {
        return Ok(RamificationProfile { entries: Vec::new(), max_index: 1 });
    }
    let mut entries = Vec::new();
    let mut max_index = 1u32;
    for (fac, mult) in factor_binary_form(&w)? {
        let place = RamifiedPlace::from_factor(fac)?;
        let rd = place.residue_degree();
        let index = 1 + mult;
        max_index = max_index.max(index);
        entries.push((place, rd, index));
    }
    entries.sort_by(|a, b| match (&a.0, &b.0) {
        (RamifiedPlace::Rational(p), RamifiedPlace::Rational(q)) => p.cmp(q),
        (RamifiedPlace::Rational(_), RamifiedPlace::Irreducible { .. }) => std::cmp::Ordering::Less,
        (RamifiedPlace::Irreducible { .. }, RamifiedPlace::Rational(_)) => {
            std::cmp::Ordering::Greater
        }
        (RamifiedPlace::Irreducible { form: f, .. }, RamifiedPlace::Irreducible { form: g, .. }) => {
            cmp_multi(f, g)
        }
    });
    Ok(RamificationProfile { entries, max_index })
}

// ==== intersection number at infinity =======================================

/// Local intersection multiplicity of the closure of C with {x0 = 0} at a
/// rational point P = [0 : a : b]: the multiplicity of P's linear form in
/// the top form.
pub fn intersection_number_at_infinity(c: &PlaneCurve, p: &ProjPoint) -> Result<u32> {
    if p.coords().len() != 3 {
        return Err(Error::DimensionError("points at infinity of the plane have three coordinates".into()));
    }
    if !p.coords()[0].is_zero() {
        return Err(Error::InvalidInput("the point must lie on the hyperplane at infinity".into()));
    }
    let a = BigRational::from(p.coords()[1].clone());
    let b = BigRational::from(p.coords()[2].clone());
    let top = c.top_form();
    if !top.eval_rat(&[a.clone(), b.clone()]).is_zero() {
        return Err(Error::NotOnCurve);
    }
    let linear = MultiPoly::from_terms(
        2,
        CoeffDomain::Rat,
        [
            (vec![1, 0], ExactScalar::Rat(b)),
            (vec![0, 1], ExactScalar::Rat(-a)),
        ],
    );
    Ok(divide_out_count(top, &linear))
}

// ==== seeded survey =========================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyResult {
    pub histogram: BTreeMap<u32, u64>,
    pub seed: u64,
    pub samples: usize,
    pub skipped_nonregular: u64,
}

/// Max multiplicity of one map of the line: the profile's max index.
pub fn sample_e_p1(g: &ProjEndo) -> Result<u32> {
    Ok(max_multiplicity_p1(g)?.max_index)
}

fn random_binary_form(rng: &mut ChaCha8Rng, d: u32, height: u32) -> MultiPoly {
    let h = height as i64;
    let terms = (0..=d).map(|i| {
        let c = rng.gen_range(-h..=h);
        (vec![i, d - i], ExactScalar::Rat(BigRational::from(BigInt::from(c))))
    });
    MultiPoly::from_terms(2, CoeffDomain::Rat, terms)
}

fn random_dense_poly(rng: &mut ChaCha8Rng, nvars: usize, d: u32, height: u32) -> MultiPoly {
    let h = height as i64;
    let mut terms = Vec::new();
    for deg in 0..=d {
        for exps in monomials_of_degree(nvars, deg) {
            let c = rng.gen_range(-h..=h);
            if c != 0 {
                terms.push((exps, ExactScalar::Rat(BigRational::from(BigInt::from(c)))));
            }
        }
    }
    MultiPoly::from_terms(nvars, CoeffDomain::Rat, terms)
}

/// Rational solutions of an expected-finite system of bivariate
/// polynomials, by resultant elimination with pragmatic fallbacks for
/// degenerate shapes (pure-x members, shared components). Capped output.
fn rational_system_solutions(system: &[MultiPoly], cap: usize) -> Result<Vec<Vec<BigRational>>> {
    let members: Vec<&MultiPoly> = system.iter().filter(|p| !p.is_zero()).collect();
    if members.len() < 2 {
        return Ok(Vec::new());
    }
    let mut xs: Vec<BigRational> = Vec::new();
    let push_roots = |xs: &mut Vec<BigRational>, u: &UniPoly| -> Result<()> {
        if u.degree().unwrap_or(0) >= 1 {
            for (r, _) in rational_roots(u)? {
                if !xs.contains(&r) {
                    xs.push(r);
                }
            }
        }
        Ok(())
    };
    for m in &members {
        if m.degree_in(1) == Some(0) {
            // Depends on x alone: its roots bound the x-coordinates.
            let u = to_unipoly_in(m, 0);
            push_roots(&mut xs, &u)?;
        }
    }
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].degree_in(1).unwrap_or(0) >= 1 && members[j].degree_in(1).unwrap_or(0) >= 1 {
                let r = resultant(members[i], members[j], 1)?;
                if !r.is_zero() {
                    push_roots(&mut xs, &to_unipoly_in(&r, 0))?;
                }
            }
        }
    }
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for x0 in xs {
        // First member not identically zero on the slice supplies the
        // y-candidates; the rest filter.
        let slices: Vec<UniPoly> = members.iter().map(|m| slice_at_x(m, &x0)).collect();
        let Some(pivot) = slices.iter().find(|u| !u.is_zero()) else { continue };
        let mut ys: Vec<BigRational> = Vec::new();
        if pivot.degree().unwrap_or(0) == 0 {
            continue;
        }
        push_roots(&mut ys, pivot)?;
        for y0 in ys {
            if slices.iter().all(|u| u.eval(&ExactScalar::Rat(y0.clone())).is_zero()) {
                let pt = vec![x0.clone(), y0];
                if !out.contains(&pt) {
                    out.push(pt);
                    if out.len() >= cap {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn to_unipoly_in(p: &MultiPoly, var: usize) -> UniPoly {
    let mut coeffs = vec![ExactScalar::zero(p.domain()); 0];
    for (mono, c) in p.terms() {
        let deg = mono.0[var] as usize;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, ExactScalar::zero(p.domain()));
        }
        coeffs[deg] = coeffs[deg].add(c);
    }
    UniPoly::new(p.domain(), coeffs)
}

fn slice_at_x(p: &MultiPoly, x0: &BigRational) -> UniPoly {
    let by_y = p.coeffs_in_var(1);
    let mut coeffs = vec![ExactScalar::zero(CoeffDomain::Rat); by_y.len()];
    for (i, cx) in by_y.iter().enumerate() {
        coeffs[i] = ExactScalar::Rat(cx.eval_rat(&[x0.clone()]));
    }
    UniPoly::new(CoeffDomain::Rat, coeffs)
}

/// Max multiplicity of a regular plane map: 1 when the Jacobian
/// determinant is a nonzero constant; otherwise at least 2, sharpened by
/// exact lengths at the rational candidates where the kernel direction of
/// the differential is tangent to the critical curve. Conjugate candidate
/// points outside Q are not visited; the reported value is a rational-scan
/// maximum.
pub fn dim2_max_multiplicity(f: &RegularEndo) -> Result<u32> {
    if f.dim() != 2 {
        return Err(Error::DimensionError("this scan is for plane maps".into()));
    }
    let f1 = &f.components()[0];
    let f2 = &f.components()[1];
    let jac = f1.derivative(0).mul(&f2.derivative(1)).sub(&f1.derivative(1).mul(&f2.derivative(0)));
    if jac.is_zero() {
        return Err(Error::InvalidInput("degenerate map: identically singular".into()));
    }
    if jac.degree() == Some(0) {
        return Ok(1);
    }
    let jx = jac.derivative(0);
    let jy = jac.derivative(1);
    // Kernel directions of the differential along the critical curve.
    let g1 = f1.derivative(1).mul(&jx).sub(&f1.derivative(0).mul(&jy));
    let g2 = f2.derivative(1).mul(&jx).sub(&f2.derivative(0).mul(&jy));
    let mut candidates = rational_system_solutions(&[jac.clone(), g1, g2], 64)?;
    if let Ok(cj) = PlaneCurve::new(jac.clone()) {
        for p in sample_plane_points(&cj, 4)? {
            if !candidates.contains(&p) {
                candidates.push(p);
            }
        }
    }
    let mut e = 2u32;
    for p in candidates {
        let q = f.eval_rational(&p);
        let m = multiplicity_at(f.components(), &p, &q)?;
        e = e.max(m.value as u32);
    }
    Ok(e)
}

/// Seeded Monte Carlo over integer-coefficient maps of the stated degree,
/// skipping non-regular draws (and, in dim 2, draws whose realized degree
/// drops). The histogram counts the max multiplicity per sampled map.
pub fn survey_max_multiplicity(
    ambient_dim: usize,
    d: u32,
    samples: usize,
    height: u32,
    seed: u64,
) -> Result<SurveyResult> {
    if !(1..=2).contains(&ambient_dim) {
        return Err(Error::UnsupportedDimension(
            "the survey covers ambient dimensions 1 and 2".into(),
        ));
    }
    if samples == 0 || d == 0 {
        return Err(Error::InvalidInput("need samples >= 1 and degree >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut skipped = 0u64;
    let mut collected = 0usize;
    let budget = 1000usize.saturating_mul(samples);
    let mut draws = 0usize;
    while collected < samples {
        if draws >= budget {
            return Err(Error::SamplingExhausted);
        }
        draws += 1;
        let e = if ambient_dim == 1 {
            let g0 = random_binary_form(&mut rng, d, height);
            let g1 = random_binary_form(&mut rng, d, height);
            match make_proj_endo(vec![g0, g1]) {
                Ok(g) => match sample_e_p1(&g) {
                    Ok(e) => e,
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                },
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            }
        } else {
            let f1 = random_dense_poly(&mut rng, 2, d, height);
            let f2 = random_dense_poly(&mut rng, 2, d, height);
            match make_regular_endo(vec![f1, f2]) {
                Ok(f) if f.degree() == d => match dim2_max_multiplicity(&f) {
                    Ok(e) => e,
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                },
                _ => {
                    skipped += 1;
                    continue;
                }
            }
        };
        *histogram.entry(e).or_insert(0) += 1;
        collected += 1;
    }
    Ok(SurveyResult { histogram, seed, samples, skipped_nonregular: skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::PlaneCurve;
    use crate::parse::{parse_poly, parse_rational_str, VarEnv};
    use crate::scalar::CoeffDomain::Rat;

    fn rats(ss: &[&str]) -> Vec<BigRational> {
        ss.iter().map(|s| parse_rational_str(s).unwrap()).collect()
    }

    fn comps(ss: &[&str]) -> Vec<MultiPoly> {
        let env = VarEnv::affine(ss.len());
        ss.iter().map(|s| parse_poly(s, &env, Rat).unwrap()).collect()
    }

    fn p1_map(a: &str, b: &str) -> ProjEndo {
        let env = VarEnv::p1();
        make_proj_endo(vec![
            parse_poly(a, &env, Rat).unwrap(),
            parse_poly(b, &env, Rat).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn multiplicity_identity_and_squares() {
        let id = multiplicity_at(&comps(&["x", "y"]), &rats(&["0", "0"]), &rats(&["0", "0"]))
            .unwrap();
        assert_eq!(id.value, 1);
        assert!(id.stabilized);

        let sq = multiplicity_at(
            &comps(&["x^2", "y^2"]),
            &rats(&["0", "0"]),
            &rats(&["0", "0"]),
        )
        .unwrap();
        assert_eq!(sq.value, 4);
        assert!(sq.stabilized);
        let last = sq.trace.len() - 1;
        assert_eq!(sq.trace[last].1, sq.trace[last - 1].1);
        assert_eq!(sq.trace[last].0, sq.truncation);
    }

    #[test]
    fn multiplicity_matches_elimination_oracle() {
        // Independent route for (2y - x^2, y^2) at the origin: eliminate y
        // by resultant, then read the root multiplicity of x = 0 off the
        // univariate eliminant. The fiber over (0,0) is the single point
        // (0,0), so the local length is the full eliminant multiplicity.
        let cs = comps(&["2*y - x^2", "y^2"]);
        let elim = resultant(&cs[0], &cs[1], 1).unwrap();
        let u = to_unipoly_in(&elim, 0);
        let oracle = rational_roots(&u)
            .unwrap()
            .into_iter()
            .find(|(r, _)| r.is_zero())
            .map(|(_, m)| m)
            .unwrap();
        assert_eq!(oracle, 4);

        let got = multiplicity_at(&cs, &rats(&["0", "0"]), &rats(&["0", "0"])).unwrap();
        assert_eq!(got.value, u64::from(oracle));
    }

    #[test]
    fn multiplicity_error_paths() {
        // Image mismatch.
        let err = multiplicity_at(&comps(&["x", "y"]), &rats(&["1", "0"]), &rats(&["0", "0"]));
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        // Non-isolated fiber: the ideal (x, x) cuts a line, the dimension
        // keeps growing; a small cap keeps the test cheap.
        let err = multiplicity_capped(
            &comps(&["x", "x"]),
            &rats(&["0", "0"]),
            &rats(&["0", "0"]),
            8,
        );
        assert!(matches!(err, Err(Error::NotIsolated { cap: 8 })));
    }

    #[test]
    fn ramification_examples() {
        let cube = p1_map("X^3", "Y^3");
        assert_eq!(
            ramification_index_p1(&cube, &ProjPoint::parse_str("[0:1]").unwrap()).unwrap(),
            3
        );
        assert_eq!(
            ramification_index_p1(&cube, &ProjPoint::parse_str("[1:1]").unwrap()).unwrap(),
            1
        );
        let id = p1_map("X", "Y");
        for s in ["[0:1]", "[1:1]", "[5:-3]"] {
            assert_eq!(
                ramification_index_p1(&id, &ProjPoint::parse_str(s).unwrap()).unwrap(),
                1
            );
        }
    }

    #[test]
    fn profile_examples() {
        // Restriction to infinity of the quartic pair: Wronskian
        // 4(X^6 + 3X^4Y^2 - 3X^2Y^4 - Y^6) = 4(X^2 - Y^2)(X^4 + 4X^2Y^2 + Y^4).
        let g = p1_map("X^4 + Y^4", "X^3*Y + X*Y^3");
        let w = wronskian_p1(&g);
        let env = VarEnv::p1();
        let expect = parse_poly(
            "4*X^6 + 12*X^4*Y^2 - 12*X^2*Y^4 - 4*Y^6",
            &env,
            Rat,
        )
        .unwrap();
        assert_eq!(w, expect);
        let prof = max_multiplicity_p1(&g).unwrap();
        assert_eq!(prof.max_index, 2);
        assert_eq!(prof.entries.len(), 3);
        let rational: Vec<_> = prof
            .entries
            .iter()
            .filter_map(|(pl, rd, e)| match pl {
                RamifiedPlace::Rational(p) => Some((p.clone(), *rd, *e)),
                _ => None,
            })
            .collect();
        assert_eq!(rational.len(), 2);
        assert!(rational.iter().all(|(_, rd, e)| *rd == 1 && *e == 2));
        assert!(prof.entries.iter().any(|(pl, rd, e)| matches!(pl, RamifiedPlace::Irreducible { .. }) && *rd == 4 && *e == 2));

        let cube = p1_map("X^3", "Y^3");
        let prof = max_multiplicity_p1(&cube).unwrap();
        assert_eq!(prof.max_index, 3);
        let pts: Vec<_> = prof
            .entries
            .iter()
            .map(|(pl, _, e)| match pl {
                RamifiedPlace::Rational(p) => (p.to_string(), *e),
                _ => panic!("expected rational places"),
            })
            .collect();
        assert_eq!(pts, vec![("[0:1]".to_string(), 3), ("[1:0]".to_string(), 3)]);

        let id = p1_map("X", "Y");
        let prof = max_multiplicity_p1(&id).unwrap();
        assert_eq!(prof.max_index, 1);
        assert!(prof.entries.is_empty());
    }

    #[test]
    fn degree_formula_on_fibers() {
        let maps = [
            p1_map("X^3", "Y^3"),
            p1_map("X^4 + Y^4", "X^3*Y + X*Y^3"),
            p1_map("X^2 - Y^2", "X*Y"),
        ];
        let values = ["[0:1]", "[1:1]", "[2:3]", "[1:0]"];
        for g in &maps {
            for v in values {
                let q = ProjPoint::parse_str(v).unwrap();
                let fiber = fiber_profile_p1(g, &q).unwrap();
                let total: u32 = fiber.iter().map(|(_, rd, e)| rd * e).sum();
                assert_eq!(total, g.degree(), "degree formula fails over {v}");
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let curve = |s: &str| PlaneCurve::new(parse_poly(s, &VarEnv::affine(2), Rat).unwrap()).unwrap();
        let p = |s: &str| ProjPoint::parse_str(s).unwrap();
        assert_eq!(
            intersection_number_at_infinity(&curve("x^2 - y^2 - 4"), &p("[0:1:1]")).unwrap(),
            1
        );
        assert_eq!(
            intersection_number_at_infinity(&curve("y - x^2"), &p("[0:0:1]")).unwrap(),
            2
        );
        assert_eq!(
            intersection_number_at_infinity(&curve("y"), &p("[0:1:0]")).unwrap(),
            1
        );
        assert!(matches!(
            intersection_number_at_infinity(&curve("x^2 - y^2 - 4"), &p("[0:1:0]")),
            Err(Error::NotOnCurve)
        ));
        assert!(matches!(
            intersection_number_at_infinity(&curve("x^2 - y^2 - 4"), &p("[1:1:1]")),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn survey_dim1_concentrates_at_two() {
        let res = survey_max_multiplicity(1, 3, 25, 9, 7).unwrap();
        assert_eq!(res.histogram.values().sum::<u64>(), 25);
        let (best, _) = res.histogram.iter().max_by_key(|(_, c)| **c).unwrap();
        assert_eq!(*best, 2);
        // Injected fixed maps run through the same per-sample scan.
        assert_eq!(sample_e_p1(&p1_map("X", "Y")).unwrap(), 1);
        assert_eq!(sample_e_p1(&p1_map("X^3", "Y^3")).unwrap(), 3);
    }

    #[test]
    fn survey_dim2_smoke() {
        let res = survey_max_multiplicity(2, 2, 4, 4, 3).unwrap();
        assert_eq!(res.histogram.values().sum::<u64>(), 4);
        assert!(res.histogram.keys().all(|e| (1..=4).contains(e)));
        // The squaring map has an exact length-4 point at the origin.
        let env = VarEnv::affine(2);
        let f = make_regular_endo(vec![
            parse_poly("x^2", &env, Rat).unwrap(),
            parse_poly("y^2", &env, Rat).unwrap(),
        ])
        .unwrap();
        assert_eq!(dim2_max_multiplicity(&f).unwrap(), 4);
    }

    #[test]
    fn chain_rule_on_samples() {
        // e_{g o f}(x) = e_f(x) * e_g(f(x)) on the line.
        let f = p1_map("X^2", "Y^2");
        let g = p1_map("X^3 - X*Y^2", "Y^3");
        let comp = f.compose(&g).unwrap();
        for s in ["[0:1]", "[1:1]", "[2:1]", "[1:0]", "[-1:2]"] {
            let x = ProjPoint::parse_str(s).unwrap();
            let fx = g.eval(&x).unwrap();
            let lhs = ramification_index_p1(&comp, &x).unwrap();
            let rhs = ramification_index_p1(&g, &x).unwrap()
                * ramification_index_p1(&f, &fx).unwrap();
            assert_eq!(lhs, rhs, "chain rule fails at {s}");
        }
    }
}
