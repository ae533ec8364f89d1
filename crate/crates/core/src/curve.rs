//! Affine plane curves and parametrized curves: the intersection with the
//! hyperplane at infinity, invariance and pullback under regular
//! endomorphisms, vertical-line detection, central projection, and exact
//! rational-point sampling.
//!
//! Plane curves are defined by one nonconstant polynomial in (x, y);
//! irreducibility is caller-asserted metadata and never verified here.
//! Dimensions N ≥ 3 are supported only through parametrized curves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::endo::RegularEndo;
use crate::error::{Error, Result};
use crate::factor::{cmp_multi, extract_linear_factors, factor_binary_form, rational_roots, squarefree_part_bivariate};
use crate::point::ProjPoint;
use crate::poly::{MultiPoly, UniPoly};
use crate::scalar::{CoeffDomain, ExactScalar};

// ==== plane curves ==========================================================

/// An affine plane curve {g(x, y) = 0}; g is stored in the primitive
/// positive-leading normal form over Q (monic-leading over F_p).
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve {
    poly: MultiPoly,
    top: MultiPoly,
}

impl PlaneCurve {
    pub fn new(poly: MultiPoly) -> Result<PlaneCurve> {
        if poly.nvars() != 2 {
            return Err(Error::DimensionError(
                "a plane curve needs exactly two variables".into(),
            ));
        }
        if poly.degree().unwrap_or(0) == 0 {
            return Err(Error::DegenerateInput(
                "a plane curve needs a nonconstant polynomial".into(),
            ));
        }
        let poly = if poly.domain().is_rational() {
            poly.content_primitive().1
        } else {
            match poly.leading().and_then(|(_, c)| c.inv()) {
                Some(inv) => poly.scale(&inv),
                None => poly,
            }
        };
        let top = poly.top_form()?;
        Ok(PlaneCurve { poly, top })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn top_form(&self) -> &MultiPoly {
        &self.top
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree().unwrap()
    }

    pub fn domain(&self) -> CoeffDomain {
        self.poly.domain()
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.poly.eval_rat(x).is_zero()
    }
}

/// A curve given by N coordinate functions of one parameter, each a ratio
/// of univariate polynomials.
#[derive(Clone, Debug)]
pub struct ParamCurve {
    coords: Vec<(UniPoly, UniPoly)>,
    excluded: Vec<BigRational>,
}

impl ParamCurve {
    pub fn new(coords: Vec<(UniPoly, UniPoly)>) -> Result<ParamCurve> {
        if coords.is_empty() {
            return Err(Error::DegenerateInput("a curve needs at least one coordinate".into()));
        }
        let mut excluded = Vec::new();
        for (_, den) in &coords {
            if den.is_zero() {
                return Err(Error::DegenerateInput("zero denominator in a coordinate".into()));
            }
            if den.domain().is_rational() && den.degree().unwrap_or(0) >= 1 {
                for (r, _) in rational_roots(den)? {
                    if !excluded.contains(&r) {
                        excluded.push(r);
                    }
                }
            }
        }
        excluded.sort();
        Ok(ParamCurve { coords, excluded })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(UniPoly, UniPoly)] {
        &self.coords
    }

    /// Parameter values where some coordinate has a pole.
    pub fn excluded(&self) -> &[BigRational] {
        &self.excluded
    }

    /// Exact evaluation; None at a pole.
    pub fn eval(&self, t: &BigRational) -> Option<Vec<BigRational>> {
        let ts = ExactScalar::Rat(t.clone());
        let mut out = Vec::with_capacity(self.coords.len());
        for (num, den) in &self.coords {
            let d = den.eval(&ts);
            if d.is_zero() {
                return None;
            }
            let n = num.eval(&ts);
            out.push(n.as_rational() / d.as_rational());
        }
        Some(out)
    }
}

// ==== infinity data =========================================================

/// Where the closure of a plane curve meets the hyperplane at infinity:
/// either a rational point [0 : a : b] or an irreducible top-form factor
/// grouping a conjugate orbit, with the intersection number i(P).
#[derive(Clone, Debug, PartialEq)]
pub enum InfinityPlace {
    Rational(ProjPoint),
    Irreducible { form: MultiPoly, residue_degree: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfinityPoint {
    pub place: InfinityPlace,
    pub intersection: u32,
}

/// The points of C̄ ∩ H_∞ from the factorization of the top form; rational
/// linear factors become points, the rest stay as irreducible factors with
/// their residue degrees. i(P) is the factor multiplicity.
pub fn infinity_points(c: &PlaneCurve) -> Result<Vec<InfinityPoint>> {
    if !c.domain().is_rational() {
        return Err(Error::UnsupportedField(
            "infinity data is computed over Q".into(),
        ));
    }
    let mut out = Vec::new();
    for (fac, mult) in factor_binary_form(c.top_form())? {
        let place = if fac.degree() == Some(1) {
            // alpha*x1 + beta*x2 vanishes at (x1, x2) = (-beta, alpha).
            let alpha = fac.coeff(&[1, 0]).as_rational().clone();
            let beta = fac.coeff(&[0, 1]).as_rational().clone();
            let p = ProjPoint::from_rationals(&[BigRational::zero(), -beta, alpha])?;
            InfinityPlace::Rational(p)
        } else {
            let residue_degree = fac.degree().unwrap();
            InfinityPlace::Irreducible { form: fac, residue_degree }
        };
        out.push(InfinityPoint { place, intersection: mult });
    }
    out.sort_by(|a, b| match (&a.place, &b.place) {
        (InfinityPlace::Rational(p), InfinityPlace::Rational(q)) => p.cmp(q),
        (InfinityPlace::Rational(_), InfinityPlace::Irreducible { .. }) => std::cmp::Ordering::Less,
        (InfinityPlace::Irreducible { .. }, InfinityPlace::Rational(_)) => {
            std::cmp::Ordering::Greater
        }
        (
            InfinityPlace::Irreducible { form: f, .. },
            InfinityPlace::Irreducible { form: g, .. },
        ) => cmp_multi(f, g),
    });
    Ok(out)
}

// ==== invariance and pullback ===============================================

/// True iff g∘f lies in the ideal (g): exact division test in graded-lex
/// order, which is complete for a principal ideal.
pub fn is_invariant(c: &PlaneCurve, f: &RegularEndo) -> Result<bool> {
    if f.dim() != 2 {
        return Err(Error::DimensionError(
            "curve invariance is a plane notion; the map must have N = 2".into(),
        ));
    }
    assert_eq!(c.domain(), f.domain(), "mixed coefficient domains");
    let pullback = c.poly().compose(f.components());
    Ok(pullback.div_exact(c.poly()).is_some())
}

/// The pullback f^{-1}(C): squarefree defining polynomial of g∘f plus the
/// rational factors linear in one variable (vertical-line components show
/// up there), reported separately.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub squarefree: MultiPoly,
    pub linear_factors: Vec<MultiPoly>,
}

pub fn pullback_curve(c: &PlaneCurve, f: &RegularEndo) -> Result<Pullback> {
    if f.dim() != 2 {
        return Err(Error::DimensionError(
            "pullback needs a plane map with N = 2".into(),
        ));
    }
    if !c.domain().is_rational() {
        return Err(Error::UnsupportedField("pullback reduction is computed over Q".into()));
    }
    let composed = c.poly().compose(f.components());
    let squarefree = squarefree_part_bivariate(&composed)?;
    let ex = extract_linear_factors(&squarefree);
    Ok(Pullback { squarefree, linear_factors: ex.linear_factors })
}

/// Some direction [0 : a : b] iff the curve is a straight line through the
/// origin (g proportional to b·x − a·y).
pub fn is_vertical_line(c: &PlaneCurve) -> Option<ProjPoint> {
    let g = c.poly();
    if g.degree() != Some(1) || !g.domain().is_rational() {
        return None;
    }
    if !g.constant_term().is_zero() {
        return None;
    }
    let b = g.coeff(&[1, 0]).as_rational().clone();
    let a = -g.coeff(&[0, 1]).as_rational().clone();
    ProjPoint::from_rationals(&[BigRational::zero(), a, b]).ok()
}

/// Central projection from the origin: x ↦ [0 : x1 : … : xN] on H_∞.
pub fn central_project(x: &[BigRational]) -> Result<ProjPoint> {
    if x.iter().all(|c| c.is_zero()) {
        return Err(Error::ProjectionUndefined);
    }
    let mut coords = vec![BigRational::zero()];
    coords.extend_from_slice(x);
    ProjPoint::from_rationals(&coords)
}

// ==== rational-point sampling ===============================================

/// Deterministic enumeration of Q: for H = 1, 2, … all reduced p/q with
/// max(|p|, q) = H, q ≥ 1, in ascending (p, q)-lexicographic order within
/// each H.
pub struct RationalSequence {
    h: i64,
    queue: std::collections::VecDeque<BigRational>,
}

impl RationalSequence {
    pub fn new() -> RationalSequence {
        let mut s = RationalSequence { h: 0, queue: Default::default() };
        s.queue.push_back(BigRational::zero());
        s
    }
}

impl Default for RationalSequence {
    fn default() -> Self {
        RationalSequence::new()
    }
}

impl Iterator for RationalSequence {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        while self.queue.is_empty() {
            self.h += 1;
            let h = self.h;
            for p in -h..=h {
                for q in 1..=h {
                    if p.abs().max(q) != h || p.abs().gcd(&q) > 1 && p != 0 {
                        continue;
                    }
                    if p == 0 && (q != 1 || h != 0) {
                        continue;
                    }
                    self.queue
                        .push_back(BigRational::new(BigInt::from(p), BigInt::from(q)));
                }
            }
        }
        self.queue.pop_front()
    }
}

/// Rational points on a parametrized curve: evaluate along the
/// deterministic parameter sequence, skipping poles, until the budget is
/// met.
pub fn sample_param_points(c: &ParamCurve, budget: usize) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    let mut seq = RationalSequence::new();
    let mut tried = 0usize;
    while out.len() < budget && tried < 100 * budget.max(1) + 100 {
        let t = seq.next().unwrap();
        tried += 1;
        if let Some(p) = c.eval(&t) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Rational points on a plane curve by slicing x at deterministic rational
/// values and extracting the exact rational roots in y. Every returned
/// point satisfies g = 0 exactly; fewer than budget may come back.
pub fn sample_plane_points(c: &PlaneCurve, budget: usize) -> Result<Vec<Vec<BigRational>>> {
    if !c.domain().is_rational() {
        return Err(Error::UnsupportedField("point sampling runs over Q".into()));
    }
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    let mut seq = RationalSequence::new();
    let mut slices = 0usize;
    while out.len() < budget && slices < 50 * budget.max(1) + 50 {
        let x0 = seq.next().unwrap();
        slices += 1;
        let sliced = c
            .poly()
            .coeffs_in_var(1)
            .iter()
            .enumerate()
            .fold(UniPoly::zero(CoeffDomain::Rat), |acc, (i, cx)| {
                // g(x0, y): substitute into the x-coefficients of y^i.
                let v = cx.eval_rat(&[x0.clone()]);
                let mut term = vec![ExactScalar::zero(CoeffDomain::Rat); i + 1];
                term[i] = ExactScalar::Rat(v);
                acc.add(&UniPoly::new(CoeffDomain::Rat, term))
            });
        if sliced.is_zero() {
            // The whole slice lies on the curve (vertical-line component):
            // take y values from the same deterministic sequence.
            let mut ys = RationalSequence::new();
            while out.len() < budget {
                let y = ys.next().unwrap();
                let p = vec![x0.clone(), y];
                if !out.contains(&p) {
                    out.push(p);
                }
            }
            break;
        }
        if sliced.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (y, _) in rational_roots(&sliced)? {
            let p = vec![x0.clone(), y];
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.truncate(budget);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::make_regular_endo;
    use crate::parse::{parse_poly, parse_ratio, VarEnv};
    use crate::scalar::CoeffDomain::Rat;

    fn curve(s: &str) -> PlaneCurve {
        PlaneCurve::new(parse_poly(s, &VarEnv::affine(2), Rat).unwrap()).unwrap()
    }

    fn endo2(a: &str, b: &str) -> RegularEndo {
        let env = VarEnv::affine(2);
        make_regular_endo(vec![
            parse_poly(a, &env, Rat).unwrap(),
            parse_poly(b, &env, Rat).unwrap(),
        ])
        .unwrap()
    }

    fn rat(s: &str) -> BigRational {
        crate::parse::parse_rational_str(s).unwrap()
    }

    #[test]
    fn infinity_points_examples() {
        let pts = infinity_points(&curve("x^2 - y^2 - 4")).unwrap();
        assert_eq!(pts.len(), 2);
        let expect: Vec<InfinityPlace> = ["[0:1:-1]", "[0:1:1]"]
            .iter()
            .map(|s| InfinityPlace::Rational(ProjPoint::parse_str(s).unwrap()))
            .collect();
        assert_eq!(pts[0].place, expect[0]);
        assert_eq!(pts[1].place, expect[1]);
        assert!(pts.iter().all(|p| p.intersection == 1));

        let pts = infinity_points(&curve("y - x^2")).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            pts[0].place,
            InfinityPlace::Rational(ProjPoint::parse_str("[0:0:1]").unwrap())
        );
        assert_eq!(pts[0].intersection, 2);

        let pts = infinity_points(&curve("x")).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            pts[0].place,
            InfinityPlace::Rational(ProjPoint::parse_str("[0:0:1]").unwrap())
        );
        assert_eq!(pts[0].intersection, 1);
    }

    #[test]
    fn bezout_at_infinity() {
        for s in ["x^2 - y^2 - 4", "y - x^2", "x^3 + y^3 - x*y + 7", "x^2 + y^2 - 1"] {
            let c = curve(s);
            let total: u32 = infinity_points(&c)
                .unwrap()
                .iter()
                .map(|p| {
                    let rd = match &p.place {
                        InfinityPlace::Rational(_) => 1,
                        InfinityPlace::Irreducible { residue_degree, .. } => *residue_degree,
                    };
                    rd * p.intersection
                })
                .sum();
            assert_eq!(total, c.degree(), "Bezout against H_inf fails for {s}");
        }
    }

    #[test]
    fn invariance_examples() {
        let c = curve("x^2 - y^2 - 4");
        let f = endo2("x^3 - 3*x", "y^3 + 3*y");
        assert!(is_invariant(&c, &f).unwrap());

        let sq = endo2("x^2", "y^2");
        assert!(!is_invariant(&c, &sq).unwrap());

        let parab = curve("y - x^2");
        assert!(is_invariant(&parab, &sq).unwrap());
    }

    #[test]
    fn pullback_examples() {
        let env = VarEnv::affine(2);
        let sq = endo2("x^2", "y^2");

        let line = curve("x - 2");
        let pb = pullback_curve(&line, &sq).unwrap();
        assert_eq!(pb.squarefree, parse_poly("x^2 - 2", &env, Rat).unwrap());
        assert!(pb.linear_factors.is_empty());

        let parab = curve("y - x^2");
        let pb = pullback_curve(&parab, &sq).unwrap();
        assert_eq!(pb.linear_factors.len(), 2);
        assert!(pb.linear_factors.contains(&parse_poly("y - x^2", &env, Rat).unwrap()));
        assert!(pb.linear_factors.contains(&parse_poly("y + x^2", &env, Rat).unwrap()));

        let c = curve("x^2 - y^2 - 4");
        let f = endo2("x^3 - 3*x", "y^3 + 3*y");
        let pb = pullback_curve(&c, &f).unwrap();
        assert_eq!(pb.squarefree.degree(), Some(6));
        assert!(pb.squarefree.div_exact(c.poly()).is_some());
    }

    #[test]
    fn vertical_line_examples() {
        assert_eq!(
            is_vertical_line(&curve("y - 2*x")),
            Some(ProjPoint::parse_str("[0:1:2]").unwrap())
        );
        assert_eq!(is_vertical_line(&curve("x - 2")), None);
        assert_eq!(is_vertical_line(&curve("x^2 - y^2 - 4")), None);
        assert_eq!(
            is_vertical_line(&curve("x")),
            Some(ProjPoint::parse_str("[0:0:1]").unwrap())
        );
    }

    #[test]
    fn central_projection_examples() {
        assert_eq!(
            central_project(&[rat("4"), rat("1/4")]).unwrap(),
            ProjPoint::parse_str("[0:16:1]").unwrap()
        );
        assert_eq!(
            central_project(&[rat("1"), rat("0")]).unwrap(),
            ProjPoint::parse_str("[0:1:0]").unwrap()
        );
        assert!(matches!(
            central_project(&[rat("0"), rat("0")]),
            Err(Error::ProjectionUndefined)
        ));
    }

    #[test]
    fn rational_sequence_order() {
        let seq: Vec<BigRational> = RationalSequence::new().take(8).collect();
        let expect: Vec<BigRational> =
            ["0", "-1", "1", "-2", "-1/2", "1/2", "2", "-3"].iter().map(|s| rat(s)).collect();
        assert_eq!(seq, expect);
    }

    #[test]
    fn param_sampling_hyperbola() {
        let tenv = VarEnv::param();
        let x = parse_ratio("(t^2 + 1)/t", &tenv, Rat).unwrap();
        let y = parse_ratio("(t^2 - 1)/t", &tenv, Rat).unwrap();
        let pc = ParamCurve::new(vec![x, y]).unwrap();
        assert_eq!(pc.excluded(), &[rat("0")]);
        let pts = sample_param_points(&pc, 12);
        assert_eq!(pts.len(), 12);
        let c = curve("x^2 - y^2 - 4");
        for p in &pts {
            assert!(c.contains(p), "sampled point off the curve: {:?}", p);
        }
        assert!(pts.contains(&vec![rat("2"), rat("0")]));
        assert!(pts.contains(&vec![rat("5/2"), rat("3/2")]));
    }

    #[test]
    fn plane_sampling_slices() {
        let c = curve("x^2 - y^2 - 4");
        let pts = sample_plane_points(&c, 4).unwrap();
        assert!(pts.contains(&vec![rat("2"), rat("0")]));
        for p in &pts {
            assert!(c.contains(p));
        }
        // Vertical line: identically-zero slice path.
        let line = curve("x - 2");
        let pts = sample_plane_points(&line, 5).unwrap();
        assert_eq!(pts.len(), 5);
        for p in &pts {
            assert!(line.contains(p));
        }
    }
}
