//! Chart Weil functions on projective space, the S-constant algebra with
//! explicit per-statement formulas, the inequality-verification harness,
//! and the verticality recursion along backward cycles.
//!
//! Projective points here are written x0-first: an affine point x embeds
//! as [1 : x_1 : ... : x_N] and the hyperplane at infinity is x_0 = 0.
//! Regular endomorphisms store their lift with x0 as the last variable,
//! so the extension to projective space is reindexed on entry.
//!
//! Two bound modes. Explicit mode evaluates a concrete per-place constant
//! and asserts the inequality at every (sample, place) pair: exact
//! arithmetic at finite places, a guarded 2^-80 sign test at the
//! archimedean place (widened once, then counted inconclusive rather than
//! reported as a violation). Empirical mode is second-class evidence for
//! the conditional statements whose constants live in local rings we do
//! not certify: it tracks the running sup of (left - right) along an
//! escalating schedule and flags new maxima in the final half.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{infinity_points, InfinityPlace, ParamCurve, PlaneCurve};
use crate::dml::{backward_cycle_at_infinity, proj_multiplicity};
use crate::endo::{make_proj_endo, restrict_infinity, ProjEndo, RegularEndo};
use crate::error::{Error, Result};
use crate::factor::factor_binary_form;
use crate::heights::{abs_value, LogValue, Place, GUARD_BITS};
use crate::intutil::factor_u;
use crate::linalg;
use crate::localalg::ramification_index_p1;
use crate::point::ProjPoint;
use crate::poly::{monomials_of_degree, MultiPoly};
use crate::scalar::ExactScalar;

/// Schedule length for empirical mode when the caller supplies no samples.
const DEFAULT_SCHEDULE: usize = 48;

// ==== Weil functions ========================================================

/// Extended nonnegative log value; Infinite occurs iff the evaluation
/// point equals the target point.
#[derive(Clone, Debug, PartialEq)]
pub enum WeilValue {
    Finite(LogValue),
    Infinite,
}

impl WeilValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, WeilValue::Infinite)
    }

    pub fn finite(&self) -> Option<&LogValue> {
        match self {
            WeilValue::Finite(v) => Some(v),
            WeilValue::Infinite => None,
        }
    }
}

/// Chart-i Weil function of the point P: log+ of 1 over the max distance
/// of chart coordinates, exact at finite places.
pub fn weil_point(v: &Place, p: &ProjPoint, x: &ProjPoint, chart: usize) -> Result<WeilValue> {
    if p.coords().len() != x.coords().len() {
        return Err(Error::DimensionError("point and sample live in different spaces".into()));
    }
    if chart >= p.coords().len() || p.coords()[chart].is_zero() {
        return Err(Error::InvalidChart);
    }
    if x == p {
        return Ok(WeilValue::Infinite);
    }
    if x.coords()[chart].is_zero() {
        return Ok(WeilValue::Finite(LogValue::zero()));
    }
    let a = p.rational_coords();
    let xs = x.rational_coords();
    let ai = &a[chart];
    let xi = &xs[chart];
    let mut m = BigRational::zero();
    for j in 0..a.len() {
        if j == chart {
            continue;
        }
        let diff = &xs[j] / xi - &a[j] / ai;
        let d = abs_value(v, &diff);
        if d > m {
            m = d;
        }
    }
    // m = 0 would mean x is proportional to P, handled above.
    Ok(WeilValue::Finite(LogValue::log_plus_rational(&m.recip())))
}

/// log+ max_i of the v-absolute values of affine coordinates.
pub fn weil_infinity(v: &Place, x: &[BigRational]) -> WeilValue {
    let mut m = BigRational::zero();
    for c in x {
        let d = abs_value(v, c);
        if d > m {
            m = d;
        }
    }
    if m.is_zero() {
        return WeilValue::Finite(LogValue::zero());
    }
    WeilValue::Finite(LogValue::log_plus_rational(&m))
}

/// Term count N(f), max coefficient absolute value H_v(f), and the sum
/// l_v(f) of log+ coefficient absolute values.
pub fn poly_place_stats(f: &MultiPoly, v: &Place) -> Result<(u64, BigRational, LogValue)> {
    if f.is_zero() {
        return Err(Error::DegenerateInput("place stats of the zero polynomial".into()));
    }
    let mut n = 0u64;
    let mut h = BigRational::zero();
    let mut l = LogValue::zero();
    for (_, c) in f.terms() {
        n += 1;
        let a = abs_value(v, c.as_rational());
        if a > h {
            h = a.clone();
        }
        l = l.add(&LogValue::log_plus_rational(&a));
    }
    Ok((n, h, l))
}

// ==== S-constants ===========================================================

/// Per-place nonnegative constant: a uniform part contributing at every
/// place, an archimedean extra, and finitely many finite-place extras.
#[derive(Clone, Debug)]
pub struct SConstant {
    pub label: String,
    uniform: LogValue,
    arch_extra: LogValue,
    finite: BTreeMap<u64, LogValue>,
}

/// Guarded sign of a formal log difference: exact when structurally zero,
/// otherwise a 2^-80 interval test widened once.
fn cmp_guarded(d: &LogValue) -> Option<Ordering> {
    d.sign_guarded(GUARD_BITS).or_else(|| d.sign_guarded(2 * GUARD_BITS))
}

/// Pointwise max of two nonnegative log values; an inconclusive comparison
/// falls back to the sum, which stays a valid upper bound.
fn max_log(a: &LogValue, b: &LogValue) -> LogValue {
    match cmp_guarded(&a.sub(b)) {
        Some(Ordering::Less) => b.clone(),
        Some(_) => a.clone(),
        None => a.add(b),
    }
}

impl SConstant {
    pub fn zero(label: &str) -> SConstant {
        SConstant {
            label: label.to_string(),
            uniform: LogValue::zero(),
            arch_extra: LogValue::zero(),
            finite: BTreeMap::new(),
        }
    }

    /// Same value at every place.
    pub fn uniform(label: &str, value: LogValue) -> SConstant {
        SConstant { uniform: value, ..SConstant::zero(label) }
    }

    /// v-dependent function v -> log+ of the v-absolute value of q.
    pub fn log_plus_of(label: &str, q: &BigRational) -> Result<SConstant> {
        let mut out = SConstant::zero(label);
        if q.is_zero() {
            return Ok(out);
        }
        out.arch_extra = LogValue::log_plus_rational(&q.abs());
        for (p, e) in factor_denominator(q)? {
            out.finite.insert(p, LogValue::log_prime(p, BigRational::from(BigInt::from(e))));
        }
        Ok(out)
    }

    /// v -> l_v(f), the coefficient log-sum statistic.
    pub fn l_stat(label: &str, f: &MultiPoly) -> Result<SConstant> {
        let mut out = SConstant::zero(label);
        if f.is_zero() {
            return Ok(out);
        }
        for (_, c) in f.terms() {
            out = out.add(&SConstant::log_plus_of(label, c.as_rational())?, label);
        }
        Ok(out)
    }

    /// Uniform log of the term count: log+ N(f). Zero polynomials
    /// contribute nothing.
    pub fn term_count_stat(label: &str, f: &MultiPoly) -> SConstant {
        let n = f.term_count();
        if n <= 1 {
            return SConstant::zero(label);
        }
        SConstant::uniform(label, LogValue::log_rational(&BigRational::from(BigInt::from(n))))
    }

    pub fn eval(&self, v: &Place) -> LogValue {
        let mut out = self.uniform.clone();
        match v {
            Place::Arch => out = out.add(&self.arch_extra),
            Place::Finite(p) => {
                if let Some(extra) = self.finite.get(p) {
                    out = out.add(extra);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &SConstant, label: &str) -> SConstant {
        let mut finite = self.finite.clone();
        for (p, v) in &other.finite {
            let entry = finite.entry(*p).or_insert_with(LogValue::zero);
            *entry = entry.add(v);
        }
        SConstant {
            label: label.to_string(),
            uniform: self.uniform.add(&other.uniform),
            arch_extra: self.arch_extra.add(&other.arch_extra),
            finite,
        }
    }

    /// Nonnegative rational scaling.
    pub fn scale(&self, c: &BigRational, label: &str) -> SConstant {
        assert!(!c.is_negative(), "S-constants are closed under nonnegative scaling only");
        SConstant {
            label: label.to_string(),
            uniform: self.uniform.scale(c),
            arch_extra: self.arch_extra.scale(c),
            finite: self.finite.iter().map(|(p, v)| (*p, v.scale(c))).collect(),
        }
    }

    /// Pointwise max; inconclusive comparisons fall back to the sum.
    pub fn max(&self, other: &SConstant, label: &str) -> SConstant {
        let uniform = max_log(&self.uniform, &other.uniform);
        let arch_total = max_log(&self.eval(&Place::Arch), &other.eval(&Place::Arch));
        let mut finite = BTreeMap::new();
        let keys: Vec<u64> =
            self.finite.keys().chain(other.finite.keys()).copied().collect();
        for p in keys {
            let place = Place::Finite(p);
            let total = max_log(&self.eval(&place), &other.eval(&place));
            let extra = total.sub(&uniform);
            if !extra.is_zero() {
                finite.insert(p, extra);
            }
        }
        SConstant {
            label: label.to_string(),
            uniform: uniform.clone(),
            arch_extra: arch_total.sub(&uniform),
            finite,
        }
    }

    /// Finite places where the constant exceeds its uniform part.
    pub fn finite_support(&self) -> Vec<u64> {
        self.finite.keys().copied().collect()
    }

    pub fn render(&self) -> String {
        let mut parts = vec![format!("inf: {}", self.eval(&Place::Arch))];
        for p in self.finite.keys() {
            parts.push(format!("p:{}: {}", p, self.eval(&Place::Finite(*p))));
        }
        format!("{} {{ {} }}", self.label, parts.join(", "))
    }
}

/// Prime factorization of the denominator; factorable sizes only.
fn factor_denominator(q: &BigRational) -> Result<Vec<(u64, u32)>> {
    let den = q.denom();
    if den.is_one() {
        return Ok(Vec::new());
    }
    if den.bits() > 48 {
        return Err(Error::ResourceLimit(
            "coefficient denominator too large to factor for finite-place support".into(),
        ));
    }
    Ok(factor_u(&den.to_biguint().unwrap()).into_iter().collect())
}

// ==== statements ============================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatementId {
    L3_3,
    L3_7,
    L3_8i,
    L3_8ii,
    L3_9,
    L3_10,
    L3_11,
    P3_13,
    P3_15,
    L3_16,
    L4_4,
}

pub const ALL_STATEMENTS: [StatementId; 11] = [
    StatementId::L3_3,
    StatementId::L3_7,
    StatementId::L3_8i,
    StatementId::L3_8ii,
    StatementId::L3_9,
    StatementId::L3_10,
    StatementId::L3_11,
    StatementId::P3_13,
    StatementId::P3_15,
    StatementId::L3_16,
    StatementId::L4_4,
];

impl StatementId {
    pub fn as_str(&self) -> &'static str {
        match self {
            StatementId::L3_3 => "L3.3",
            StatementId::L3_7 => "L3.7",
            StatementId::L3_8i => "L3.8i",
            StatementId::L3_8ii => "L3.8ii",
            StatementId::L3_9 => "L3.9",
            StatementId::L3_10 => "L3.10",
            StatementId::L3_11 => "L3.11",
            StatementId::P3_13 => "P3.13",
            StatementId::P3_15 => "P3.15",
            StatementId::L3_16 => "L3.16",
            StatementId::L4_4 => "L4.4",
        }
    }

    pub fn parse(text: &str) -> Result<StatementId> {
        ALL_STATEMENTS
            .iter()
            .copied()
            .find(|id| id.as_str() == text)
            .ok_or_else(|| Error::InvalidInput(format!("unknown statement id '{text}'")))
    }

    /// Ids whose constants are concretely constructible: the per-statement
    /// formulas plus the certificate-backed L3.9 bound and the exact-zero
    /// L3.16 constant. The conditional statements need local-ring
    /// certificates and run in empirical mode only.
    pub fn explicit_supported(&self) -> bool {
        !matches!(self, StatementId::L3_8ii | StatementId::L3_11 | StatementId::L4_4)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMode {
    Explicit,
    Empirical,
}

impl BoundMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundMode::Explicit => "explicit",
            BoundMode::Empirical => "empirical",
        }
    }
}

/// One inequality instance: the statement id, the bound mode, and the
/// instance data the statement shape needs. Unused fields stay None.
#[derive(Clone, Debug, Default)]
pub struct InequalityInstance {
    pub point: Option<ProjPoint>,
    pub chart: Option<usize>,
    pub chart_to: Option<usize>,
    pub matrix: Option<Vec<Vec<BigRational>>>,
    pub map: Option<RegularEndo>,
    pub curve: Option<PlaneCurve>,
    pub param: Option<ParamCurve>,
    pub form: Option<MultiPoly>,
    pub constants: Option<Vec<(String, SConstant)>>,
    pub rate: Option<BigRational>,
    pub backward_steps: Option<u64>,
    pub mult: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct InequalityStatement {
    pub id: StatementId,
    pub mode: BoundMode,
    pub instance: InequalityInstance,
}

impl InequalityStatement {
    pub fn new(id: StatementId, mode: BoundMode) -> InequalityStatement {
        InequalityStatement { id, mode, instance: InequalityInstance::default() }
    }
}

// ==== instance helpers ======================================================

fn need_point(stmt: &InequalityStatement) -> Result<&ProjPoint> {
    stmt.instance
        .point
        .as_ref()
        .ok_or_else(|| Error::InstanceError(format!("{} needs a point", stmt.id.as_str())))
}

fn need_map(stmt: &InequalityStatement) -> Result<&RegularEndo> {
    stmt.instance
        .map
        .as_ref()
        .ok_or_else(|| Error::InstanceError(format!("{} needs a map", stmt.id.as_str())))
}

fn need_curve(stmt: &InequalityStatement) -> Result<&PlaneCurve> {
    stmt.instance
        .curve
        .as_ref()
        .ok_or_else(|| Error::InstanceError(format!("{} needs a curve", stmt.id.as_str())))
}

/// First chart with a nonzero coordinate.
fn canonical_chart(p: &ProjPoint) -> usize {
    p.coords().iter().position(|c| !c.is_zero()).unwrap()
}

/// The projective extension of a regular endomorphism, reindexed to the
/// x0-first convention of this module: forms [x0^d, F_1, ..., F_N] in the
/// variables (x0, x1, ..., xN).
pub fn projective_extension(f: &RegularEndo) -> Result<ProjEndo> {
    let n = f.dim();
    // Lift variables are (x1..xN, x0); move x0 to the front.
    let mut var_map: Vec<usize> = (1..=n).collect();
    var_map.push(0);
    let forms: Vec<MultiPoly> =
        f.lift().iter().map(|g| g.embed(n + 1, &var_map)).collect();
    make_proj_endo(forms)
}

/// Tail cofactors g_i with lift_i = TopForm_i + x0^k * g_i, in x0-first
/// variables. Exact division by the degree-gap power.
fn tail_cofactors(f: &RegularEndo) -> Result<Vec<MultiPoly>> {
    let n = f.dim();
    let k = f.degree_gap();
    let d = f.degree();
    let mut var_map: Vec<usize> = (1..=n).collect();
    var_map.push(0);
    let top_map: Vec<usize> = (1..=n).collect();
    let x0k = MultiPoly::var(0, n + 1, f.domain()).pow(k);
    let mut out = Vec::new();
    for (lift, top) in f.lift().iter().skip(1).zip(f.top_forms()) {
        let lift = lift.embed(n + 1, &var_map);
        let top = top.embed(n + 1, &top_map).pow(1);
        let tail = lift.sub(&top);
        if tail.is_zero() {
            out.push(MultiPoly::zero(n + 1, f.domain()));
            continue;
        }
        let g = tail.div_exact(&x0k).ok_or_else(|| {
            Error::InstanceError(format!(
                "tail of a degree-{d} component not divisible by the gap power x0^{k}"
            ))
        })?;
        out.push(g);
    }
    Ok(out)
}

// ==== explicit constants ====================================================

fn chart_pair(p: &ProjPoint, stmt: &InequalityStatement) -> Result<(usize, usize)> {
    let coords = p.coords();
    let i = match stmt.instance.chart {
        Some(i) => i,
        None => canonical_chart(p),
    };
    let j = match stmt.instance.chart_to {
        Some(j) => j,
        None => (0..coords.len())
            .find(|&l| l != i && !coords[l].is_zero())
            .ok_or_else(|| {
                Error::InstanceError("the point has a single nonzero coordinate; no second chart".into())
            })?,
    };
    if i >= coords.len() || coords[i].is_zero() || j >= coords.len() || coords[j].is_zero() {
        return Err(Error::InvalidChart);
    }
    if i == j {
        return Err(Error::InstanceError("chart comparison needs two distinct charts".into()));
    }
    Ok((i, j))
}

/// Chart-change constant: with P scaled to a_i = 1, the sum of
/// log+ of the other coordinates, twice log+ of 1/a_j, plus log 4.
fn s_chart_change(p: &ProjPoint, i: usize, j: usize) -> Result<SConstant> {
    let label = "L3.3";
    let a = p.rational_coords();
    let ai = &a[i];
    let mut c = SConstant::uniform(label, LogValue::log_rational(&BigRational::from(BigInt::from(4))));
    for (l, al) in a.iter().enumerate() {
        if l == i {
            continue;
        }
        c = c.add(&SConstant::log_plus_of(label, &(al / ai))?, label);
    }
    let inv = (ai / &a[j]).abs();
    c = c.add(&SConstant::log_plus_of(label, &inv)?.scale(&BigRational::from(BigInt::from(2)), label), label);
    Ok(c)
}

fn mat_dim_check(a: &[Vec<BigRational>], dim: usize) -> Result<()> {
    if a.len() != dim || a.iter().any(|row| row.len() != dim) {
        return Err(Error::InstanceError(format!("matrix must be {dim} x {dim}")));
    }
    Ok(())
}

fn mat_apply(a: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(t, c)| t * c).sum::<BigRational>())
        .collect()
}

fn mat_invert(a: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let rows: Vec<Vec<ExactScalar>> = a
        .iter()
        .map(|row| row.iter().map(|q| ExactScalar::Rat(q.clone())).collect())
        .collect();
    let inv = linalg::invert(&rows).ok_or(Error::SingularMatrix)?;
    Ok(inv
        .into_iter()
        .map(|row| row.into_iter().map(|s| s.as_rational().clone()).collect())
        .collect())
}

/// Linear-equivariance constant for the matrix direction A: entry stats,
/// image-coordinate stats, twice log+ of 1/(image chart coordinate), and
/// the uniform log(4N+4).
fn s_linear(a: &[Vec<BigRational>], p: &ProjPoint) -> Result<(SConstant, usize, usize)> {
    let label = "L3.7";
    let coords = p.rational_coords();
    let i = canonical_chart(p);
    let scaled: Vec<BigRational> = coords.iter().map(|c| c / &coords[i]).collect();
    let image = mat_apply(a, &scaled);
    let j = image
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::SingularMatrix)?;
    let n_amb = coords.len() - 1;
    let mut c = SConstant::uniform(
        label,
        LogValue::log_rational(&BigRational::from(BigInt::from(4 * n_amb as i64 + 4))),
    );
    for row in a {
        for t in row {
            c = c.add(&SConstant::log_plus_of(label, t)?, label);
        }
    }
    for al in &image {
        c = c.add(&SConstant::log_plus_of(label, al)?, label);
    }
    let inv = image[j].recip().abs();
    c = c.add(
        &SConstant::log_plus_of(label, &inv)?.scale(&BigRational::from(BigInt::from(2)), label),
        label,
    );
    Ok((c, i, j))
}

/// P must be a coordinate point; returns its chart index.
fn coordinate_point_chart(p: &ProjPoint) -> Result<usize> {
    let nz: Vec<usize> = p
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect();
    if nz.len() != 1 {
        return Err(Error::InstanceError(
            "the statement needs a coordinate point (normalize with a linear change first)".into(),
        ));
    }
    Ok(nz[0])
}

/// Fixed-coordinate-point constant: the extension scaled so the chart
/// monomial of the chart form has coefficient 1, then coefficient stats of
/// every form (the chart form minus its chart monomial), plus log 2.
fn s_fixed_point(f: &RegularEndo, p: &ProjPoint) -> Result<SConstant> {
    let label = "L3.8i";
    let i = coordinate_point_chart(p)?;
    let ext = projective_extension(f)?;
    if ext.eval(p)? != *p {
        return Err(Error::InstanceError("the point is not fixed by the extension".into()));
    }
    let nv = f.dim() + 1;
    let d = f.degree();
    let mut chart_exps = vec![0u32; nv];
    chart_exps[i] = d;
    let lead = ext.forms()[i].coeff(&chart_exps).as_rational().clone();
    // F(e_i) = e_i forces a nonzero chart monomial in the chart form.
    assert!(!lead.is_zero());
    let scale = ExactScalar::Rat(lead.recip());
    let chart_mono = MultiPoly::var(i, nv, f.domain()).pow(d);
    let mut c = SConstant::uniform(label, LogValue::log_rational(&BigRational::from(BigInt::from(2))));
    for (l, form) in ext.forms().iter().enumerate() {
        let g = form.scale(&scale);
        let g = if l == i { g.sub(&chart_mono) } else { g };
        if g.is_zero() {
            continue;
        }
        c = c.add(&SConstant::l_stat(label, &g)?, label);
        c = c.add(&SConstant::term_count_stat(label, &g), label);
    }
    Ok(c)
}

/// Degree-scaling upper constant: max over lift forms of coefficient
/// stats.
fn s_degree_upper(f: &RegularEndo) -> Result<SConstant> {
    let label = "L3.9+";
    let mut c = SConstant::zero(label);
    for form in f.lift() {
        let part = SConstant::l_stat(label, form)?
            .add(&SConstant::term_count_stat(label, form), label);
        c = c.max(&part, label);
    }
    Ok(c)
}

/// Power-of-variable membership certificates: for each variable, forms
/// h_j with x_i^D equal to the sum of h_j times the lift forms, found at
/// the smallest degree D up to the Macaulay bound.
fn bezout_certificates(f: &RegularEndo) -> Result<Vec<Vec<MultiPoly>>> {
    let forms = f.lift();
    let nv = f.dim() + 1;
    let d = f.degree();
    let dom = f.domain();
    let d_max = (nv as u32) * (d - 1) + 1;
    for big_d in d..=d_max.max(d) {
        let hdeg = big_d - d;
        let hmons = monomials_of_degree(nv, hdeg);
        let target_mons = monomials_of_degree(nv, big_d);
        let row_of: BTreeMap<Vec<u32>, usize> =
            target_mons.iter().cloned().zip(0..).collect();
        let cols = nv * hmons.len();
        let mut mat = vec![vec![ExactScalar::zero(dom); cols]; target_mons.len()];
        for (j, form) in forms.iter().enumerate() {
            for (mi, mu) in hmons.iter().enumerate() {
                let col = j * hmons.len() + mi;
                for (mon, coeff) in form.terms() {
                    let exps: Vec<u32> =
                        mon.0.iter().zip(mu).map(|(a, b)| a + b).collect();
                    let row = row_of[&exps];
                    mat[row][col] = mat[row][col].add(coeff);
                }
            }
        }
        let mut certs: Vec<Vec<MultiPoly>> = Vec::new();
        let mut all = true;
        for i in 0..nv {
            let mut rhs = vec![ExactScalar::zero(dom); target_mons.len()];
            let mut target = vec![0u32; nv];
            target[i] = big_d;
            rhs[row_of[&target]] = ExactScalar::one(dom);
            match linalg::solve(&mat, &rhs) {
                Some(x) => {
                    let mut row_certs = Vec::new();
                    for j in 0..nv {
                        let terms: Vec<(Vec<u32>, ExactScalar)> = hmons
                            .iter()
                            .enumerate()
                            .map(|(mi, mu)| (mu.clone(), x[j * hmons.len() + mi].clone()))
                            .filter(|(_, c)| !c.is_zero())
                            .collect();
                        row_certs.push(MultiPoly::from_terms(nv, dom, terms));
                    }
                    certs.push(row_certs);
                }
                None => {
                    all = false;
                    break;
                }
            }
        }
        if all {
            return Ok(certs);
        }
    }
    Err(Error::CertificateUnavailable(
        "no power-of-variable membership certificate up to the Macaulay bound".into(),
    ))
}

/// Degree-scaling lower constant from membership certificates: at the
/// archimedean place the row term counts enter; at finite places only the
/// coefficient heights do.
fn s_degree_lower(f: &RegularEndo) -> Result<SConstant> {
    let label = "L3.9-";
    let certs = bezout_certificates(f)?;
    let mut c = SConstant::zero(label);
    for row in &certs {
        let r_i = row.iter().filter(|h| !h.is_zero()).count() as u64;
        if r_i == 0 {
            continue;
        }
        // Archimedean: log+ of R_i * max_j N(h_j) H_inf(h_j).
        let mut arch_inner = BigRational::zero();
        for h in row.iter().filter(|h| !h.is_zero()) {
            let (n, h_inf, _) = poly_place_stats(h, &Place::Arch)?;
            let this = BigRational::from(BigInt::from(n)) * h_inf;
            if this > arch_inner {
                arch_inner = this;
            }
        }
        let arch = LogValue::log_plus_rational(&(BigRational::from(BigInt::from(r_i)) * arch_inner));
        let mut part = SConstant::zero(label);
        part.arch_extra = arch;
        // Finite: log+ H_p(h_j) has support on denominator primes.
        let mut prime_max: BTreeMap<u64, u32> = BTreeMap::new();
        for h in row.iter().filter(|h| !h.is_zero()) {
            for (_, coeff) in h.terms() {
                for (p, e) in factor_denominator(coeff.as_rational())? {
                    let cur = prime_max.entry(p).or_insert(0);
                    *cur = (*cur).max(e);
                }
            }
        }
        for (p, e) in prime_max {
            part.finite.insert(p, LogValue::log_prime(p, BigRational::from(BigInt::from(e))));
        }
        c = c.max(&part, label);
    }
    Ok(c)
}

/// Separation constant: scale the form so the chart monomial has
/// coefficient 1, then stats of the remainder plus log 2.
fn s_separation(g: &MultiPoly, p: &ProjPoint) -> Result<SConstant> {
    let label = "L3.10";
    if g.is_zero() || !g.is_homogeneous() {
        return Err(Error::InstanceError("separation needs a nonzero homogeneous form".into()));
    }
    let i = coordinate_point_chart(p)?;
    if p.coords().len() != g.nvars() {
        return Err(Error::DimensionError("form and point live in different spaces".into()));
    }
    let d = g.degree().unwrap();
    let mut chart_exps = vec![0u32; g.nvars()];
    chart_exps[i] = d;
    let lead = g.coeff(&chart_exps).as_rational().clone();
    if lead.is_zero() {
        return Err(Error::InstanceError("the form vanishes at the point".into()));
    }
    let scaled = g.scale(&ExactScalar::Rat(lead.recip()));
    let g0 = scaled.sub(&MultiPoly::var(i, g.nvars(), g.domain()).pow(d));
    let mut c = SConstant::uniform(label, LogValue::log_rational(&BigRational::from(BigInt::from(2))));
    if !g0.is_zero() {
        c = c.add(&SConstant::l_stat(label, &g0)?, label);
        c = c.add(&SConstant::term_count_stat(label, &g0), label);
    }
    Ok(c)
}

/// Curve-bound constant: stats of the lower-degree tail of the defining
/// polynomial.
fn s_curve_tail(curve: &PlaneCurve) -> Result<SConstant> {
    let label = "P3.13";
    let g = curve.poly();
    let d = g.degree().unwrap();
    let mut top = MultiPoly::zero(g.nvars(), g.domain());
    let mut tail = MultiPoly::zero(g.nvars(), g.domain());
    for (m, c) in g.terms() {
        let single = MultiPoly::from_terms(g.nvars(), g.domain(), [(m.0.clone(), c.clone())]);
        if m.degree() == d {
            top = top.add(&single);
        } else {
            tail = tail.add(&single);
        }
    }
    let mut c = SConstant::zero(label);
    if !tail.is_zero() {
        c = c.add(&SConstant::l_stat(label, &tail)?, label);
        c = c.add(&SConstant::term_count_stat(label, &tail), label);
    }
    Ok(c)
}

/// Propagated constants (c_3, c_4) from instance constants c_1, c_2,
/// c_5 ... c_9, the expansion rate r and the multiplicity e:
/// c_3 = c_1 + c_5 + c_8 + 1 and
/// c_4 = (c_2 + c_6 + (1+r) c_7 + c_9 + 2 log 2) / e.
pub fn propagation_constants(stmt: &InequalityStatement) -> Result<(SConstant, SConstant)> {
    let named: BTreeMap<String, SConstant> = stmt
        .instance
        .constants
        .clone()
        .unwrap_or_default()
        .into_iter()
        .collect();
    let get = |name: &str| -> SConstant {
        named.get(name).cloned().unwrap_or_else(|| SConstant::zero(name))
    };
    let c6 = if named.contains_key("c_6") {
        get("c_6")
    } else if let Some(map) = stmt.instance.map.as_ref() {
        let mut c = SConstant::zero("c_6");
        for g in tail_cofactors(map)? {
            if g.is_zero() {
                continue;
            }
            c = c.add(&SConstant::l_stat("c_6", &g)?, "c_6");
            c = c.add(&SConstant::term_count_stat("c_6", &g), "c_6");
        }
        c
    } else {
        SConstant::zero("c_6")
    };
    let r = stmt.instance.rate.clone().unwrap_or_else(BigRational::zero);
    if r.is_negative() {
        return Err(Error::InstanceError("the rate must be nonnegative".into()));
    }
    let e = stmt.instance.mult.unwrap_or(1);
    if e == 0 {
        return Err(Error::InstanceError("the multiplicity must be positive".into()));
    }
    let one = SConstant::uniform("1", LogValue::from_constant(BigRational::one()));
    let c3 = get("c_1").add(&get("c_5"), "c_3").add(&get("c_8"), "c_3").add(&one, "c_3");
    let two_log2 = SConstant::uniform(
        "2log2",
        LogValue::log_rational(&BigRational::from(BigInt::from(4))),
    );
    let c7_scaled = get("c_7").scale(&(BigRational::one() + &r), "c_7");
    let c4 = get("c_2")
        .add(&c6, "c_4")
        .add(&c7_scaled, "c_4")
        .add(&get("c_9"), "c_4")
        .add(&two_log2, "c_4")
        .scale(&BigRational::new(BigInt::one(), BigInt::from(e)), "c_4");
    Ok((SConstant { label: "c_3".into(), ..c3 }, SConstant { label: "c_4".into(), ..c4 }))
}

/// The explicit constant of a statement instance. Conditional statements
/// whose proofs use uncomputed local-ring certificates report
/// CertificateUnavailable; run those in empirical mode.
pub fn s_constant_for(stmt: &InequalityStatement) -> Result<SConstant> {
    match stmt.id {
        StatementId::L3_3 => {
            let p = need_point(stmt)?;
            let (i, j) = chart_pair(p, stmt)?;
            s_chart_change(p, i, j)
        }
        StatementId::L3_7 => {
            let p = need_point(stmt)?;
            let a = stmt
                .instance
                .matrix
                .as_ref()
                .ok_or_else(|| Error::InstanceError("L3.7 needs a matrix".into()))?;
            mat_dim_check(a, p.coords().len())?;
            Ok(s_linear(a, p)?.0)
        }
        StatementId::L3_8i => s_fixed_point(need_map(stmt)?, need_point(stmt)?),
        StatementId::L3_9 => {
            let f = need_map(stmt)?;
            let up = s_degree_upper(f)?;
            let low = s_degree_lower(f)?;
            Ok(up.max(&low, "L3.9"))
        }
        StatementId::L3_10 => {
            let g = stmt
                .instance
                .form
                .as_ref()
                .ok_or_else(|| Error::InstanceError("L3.10 needs a form".into()))?;
            s_separation(g, need_point(stmt)?)
        }
        StatementId::P3_13 => s_curve_tail(need_curve(stmt)?),
        StatementId::P3_15 => Ok(propagation_constants(stmt)?.0),
        StatementId::L3_16 => Ok(SConstant::zero("L3.16")),
        StatementId::L3_8ii | StatementId::L3_11 | StatementId::L4_4 => {
            Err(Error::CertificateUnavailable(format!(
                "{} needs local-ring certificates the toolkit does not construct; use empirical mode",
                stmt.id.as_str()
            )))
        }
    }
}

// ==== harness ===============================================================

#[derive(Clone, Debug)]
pub enum Sample {
    Proj(ProjPoint),
    Affine(Vec<BigRational>),
}

impl Sample {
    fn as_proj(&self, coords: usize) -> Result<ProjPoint> {
        match self {
            Sample::Proj(p) => {
                if p.coords().len() != coords {
                    return Err(Error::DimensionError(format!(
                        "sample has {} coordinates, expected {coords}",
                        p.coords().len()
                    )));
                }
                Ok(p.clone())
            }
            Sample::Affine(x) => {
                if x.len() + 1 != coords {
                    return Err(Error::DimensionError(format!(
                        "affine sample has {} coordinates, expected {}",
                        x.len(),
                        coords - 1
                    )));
                }
                let mut v = vec![BigRational::one()];
                v.extend(x.iter().cloned());
                ProjPoint::from_rationals(&v)
            }
        }
    }

    fn as_affine(&self, dim: usize) -> Result<Vec<BigRational>> {
        match self {
            Sample::Affine(x) => {
                if x.len() != dim {
                    return Err(Error::DimensionError(format!(
                        "affine sample has {} coordinates, expected {dim}",
                        x.len()
                    )));
                }
                Ok(x.clone())
            }
            Sample::Proj(p) => {
                if p.coords().len() != dim + 1 || p.coords()[0].is_zero() {
                    return Err(Error::InstanceError(
                        "projective sample cannot be read as an affine point".into(),
                    ));
                }
                let c = p.rational_coords();
                Ok(c[1..].iter().map(|q| q / &c[0]).collect())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ViolationEntry {
    pub sample: usize,
    pub place: Place,
    pub residual: String,
}

/// Harness result. `violations` holds confirmed failures only;
/// archimedean comparisons that stayed undecidable after widening are
/// counted in `inconclusive` instead (they are not evidence either way).
#[derive(Clone, Debug)]
pub struct InequalityReport {
    pub statement: StatementId,
    pub mode: BoundMode,
    pub samples: usize,
    pub places: Vec<Place>,
    pub violations: Vec<ViolationEntry>,
    pub sup_residual: String,
    pub inconclusive: usize,
}

impl InequalityReport {
    pub fn to_json(&self) -> String {
        let violations: Vec<serde_json::Value> = self
            .violations
            .iter()
            .map(|v| {
                serde_json::json!({
                    "sample": v.sample,
                    "place": v.place.to_string(),
                    "residual": v.residual,
                })
            })
            .collect();
        serde_json::json!({
            "statement": self.statement.as_str(),
            "mode": self.mode.as_str(),
            "samples": self.samples,
            "places": self.places.iter().map(|p| p.to_string()).collect::<Vec<String>>(),
            "violations": violations,
            "sup_residual": self.sup_residual,
        })
        .to_string()
    }
}

/// Accumulates residuals and violations for one run.
struct Tracker {
    violations: Vec<ViolationEntry>,
    inconclusive: usize,
    sup: f64,
    any: bool,
    all_zero: bool,
}

impl Tracker {
    fn new() -> Tracker {
        Tracker {
            violations: Vec::new(),
            inconclusive: 0,
            sup: f64::NEG_INFINITY,
            any: false,
            all_zero: true,
        }
    }

    fn note_residual(&mut self, r: &LogValue) {
        self.any = true;
        if !r.is_zero() {
            self.all_zero = false;
        }
        let x = r.to_f64();
        if x > self.sup {
            self.sup = x;
        }
    }

    /// Assert left <= right + c; records a violation on confirmed failure.
    /// Strict mode asserts left < right + c instead.
    fn check_bound(
        &mut self,
        idx: usize,
        v: &Place,
        left: &WeilValue,
        right: &WeilValue,
        c: &LogValue,
        strict: bool,
    ) {
        match (left, right) {
            (WeilValue::Infinite, WeilValue::Infinite) => {}
            (WeilValue::Infinite, WeilValue::Finite(_)) => {
                self.violations.push(ViolationEntry {
                    sample: idx,
                    place: v.clone(),
                    residual: "inf".into(),
                });
            }
            (WeilValue::Finite(_), WeilValue::Infinite) => {}
            (WeilValue::Finite(l), WeilValue::Finite(r)) => {
                let residual = l.sub(r).sub(c);
                self.note_residual(&residual);
                match cmp_guarded(&residual) {
                    Some(Ordering::Greater) => self.violations.push(ViolationEntry {
                        sample: idx,
                        place: v.clone(),
                        residual: render_log(&residual),
                    }),
                    Some(Ordering::Equal) if strict => self.violations.push(ViolationEntry {
                        sample: idx,
                        place: v.clone(),
                        residual: "0".into(),
                    }),
                    Some(_) => {}
                    None => self.inconclusive += 1,
                }
            }
        }
    }

    fn sup_residual(&self) -> String {
        if !self.any || self.all_zero {
            "0".into()
        } else {
            format!("~{:.6}", self.sup)
        }
    }
}

fn render_log(v: &LogValue) -> String {
    if v.is_zero() {
        "0".into()
    } else {
        format!("~{:.6}", v.to_f64())
    }
}

/// Per-place empirical sup tracking: a new max in the final half of the
/// schedule is recorded as a violation (the sup failed to stabilize).
struct EmpiricalTracker {
    violations: Vec<ViolationEntry>,
    sup: BTreeMap<Place, (f64, usize)>,
    total: usize,
    any: bool,
    all_zero: bool,
}

impl EmpiricalTracker {
    fn new(total: usize) -> EmpiricalTracker {
        EmpiricalTracker {
            violations: Vec::new(),
            sup: BTreeMap::new(),
            total,
            any: false,
            all_zero: true,
        }
    }

    fn observe(&mut self, idx: usize, v: &Place, left: &WeilValue, right: &WeilValue) {
        let (l, r) = match (left, right) {
            (WeilValue::Infinite, WeilValue::Finite(_)) => {
                self.violations.push(ViolationEntry {
                    sample: idx,
                    place: v.clone(),
                    residual: "inf".into(),
                });
                return;
            }
            (WeilValue::Finite(l), WeilValue::Finite(r)) => (l, r),
            _ => return,
        };
        let residual = l.sub(r);
        self.any = true;
        if !residual.is_zero() {
            self.all_zero = false;
        }
        let x = residual.to_f64();
        let entry = self.sup.entry(v.clone()).or_insert((f64::NEG_INFINITY, 0));
        if x > entry.0 + 1e-9 {
            *entry = (x, idx);
            if idx >= self.total / 2 && self.total >= 4 {
                self.violations.push(ViolationEntry {
                    sample: idx,
                    place: v.clone(),
                    residual: format!("~{x:.6}"),
                });
            }
        } else if x > entry.0 {
            entry.0 = x;
        }
    }

    fn sup_residual(&self) -> String {
        if !self.any || self.all_zero {
            return "0".into();
        }
        let m = self
            .sup
            .values()
            .map(|(x, _)| *x)
            .fold(f64::NEG_INFINITY, f64::max);
        format!("~{m:.6}")
    }
}

fn finish(
    stmt: &InequalityStatement,
    samples: usize,
    places: &[Place],
    t: Tracker,
) -> InequalityReport {
    InequalityReport {
        statement: stmt.id,
        mode: stmt.mode,
        samples,
        places: places.to_vec(),
        sup_residual: t.sup_residual(),
        violations: t.violations,
        inconclusive: t.inconclusive,
    }
}

/// Verify one inequality statement over samples and places. Explicit mode
/// evaluates the statement's constant and asserts the bound everywhere;
/// empirical mode tracks sup stabilization along the sample schedule (for
/// the approach-sequence statement L3.8ii the samples only set the
/// schedule length; the sequences are built per place).
pub fn check_inequality(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    match stmt.mode {
        BoundMode::Explicit => {
            if !stmt.id.explicit_supported() {
                return s_constant_for(stmt).map(|_| unreachable!());
            }
            match stmt.id {
                StatementId::L3_3 => check_chart_change(stmt, samples, places),
                StatementId::L3_7 => check_linear(stmt, samples, places),
                StatementId::L3_8i => check_fixed_point(stmt, samples, places),
                StatementId::L3_9 => check_degree_scaling(stmt, samples, places),
                StatementId::L3_10 => check_separation(stmt, samples, places),
                StatementId::P3_13 => check_curve_bound(stmt, samples, places),
                StatementId::P3_15 => check_propagation(stmt, samples, places),
                StatementId::L3_16 => check_projection(stmt, samples, places),
                _ => unreachable!(),
            }
        }
        BoundMode::Empirical => match stmt.id {
            StatementId::L3_8ii => check_growth_empirical(stmt, samples, places),
            StatementId::L3_11 => check_curve_point_empirical(stmt, samples, places),
            StatementId::L4_4 => check_backward_empirical(stmt, samples, places),
            _ => Err(Error::InstanceError(format!(
                "{} has an explicit constant; empirical mode is reserved for conditional statements",
                stmt.id.as_str()
            ))),
        },
    }
}

fn check_chart_change(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let p = need_point(stmt)?;
    let (i, j) = chart_pair(p, stmt)?;
    let c_ij = s_chart_change(p, i, j)?;
    let c_ji = s_chart_change(p, j, i)?;
    let nc = p.coords().len();
    let mut t = Tracker::new();
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_proj(nc)?;
        for v in places {
            let li = weil_point(v, p, &x, i)?;
            let lj = weil_point(v, p, &x, j)?;
            t.check_bound(idx, v, &li, &lj, &c_ij.eval(v), false);
            t.check_bound(idx, v, &lj, &li, &c_ji.eval(v), false);
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

fn check_linear(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let p = need_point(stmt)?;
    let a = stmt
        .instance
        .matrix
        .as_ref()
        .ok_or_else(|| Error::InstanceError("L3.7 needs a matrix".into()))?;
    let nc = p.coords().len();
    mat_dim_check(a, nc)?;
    let a_inv = mat_invert(a)?;
    let q = ProjPoint::from_rationals(&mat_apply(a, &p.rational_coords()))?;
    let (c_fwd, i, j) = s_linear(a, p)?;
    let (c_bwd, j2, i2) = s_linear(&a_inv, &q)?;
    debug_assert_eq!(j, j2);
    debug_assert_eq!(i, i2);
    let mut t = Tracker::new();
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_proj(nc)?;
        let ax = ProjPoint::from_rationals(&mat_apply(a, &x.rational_coords()))?;
        for v in places {
            let lx = weil_point(v, p, &x, i)?;
            let lax = weil_point(v, &q, &ax, j)?;
            t.check_bound(idx, v, &lx, &lax, &c_fwd.eval(v), false);
            t.check_bound(idx, v, &lax, &lx, &c_bwd.eval(v), false);
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

fn check_fixed_point(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let f = need_map(stmt)?;
    let p = need_point(stmt)?;
    let c = s_fixed_point(f, p)?;
    let i = coordinate_point_chart(p)?;
    let ext = projective_extension(f)?;
    let nc = p.coords().len();
    let mut t = Tracker::new();
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_proj(nc)?;
        let fx = ext.eval(&x)?;
        for v in places {
            let lx = weil_point(v, p, &x, i)?;
            let lfx = weil_point(v, p, &fx, i)?;
            t.check_bound(idx, v, &lx, &lfx, &c.eval(v), false);
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

fn check_degree_scaling(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let f = need_map(stmt)?;
    let c_up = s_degree_upper(f)?;
    let c_low = s_degree_lower(f)?;
    let d = BigRational::from(BigInt::from(f.degree()));
    let mut t = Tracker::new();
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_affine(f.dim())?;
        let fx = f.eval_rational(&x);
        for v in places {
            let lx = match weil_infinity(v, &x) {
                WeilValue::Finite(l) => l,
                WeilValue::Infinite => unreachable!(),
            };
            let lfx = match weil_infinity(v, &fx) {
                WeilValue::Finite(l) => l,
                WeilValue::Infinite => unreachable!(),
            };
            let dlx = WeilValue::Finite(lx.scale(&d));
            t.check_bound(idx, v, &WeilValue::Finite(lfx.clone()), &dlx, &c_up.eval(v), false);
            t.check_bound(idx, v, &dlx, &WeilValue::Finite(lfx), &c_low.eval(v), false);
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

fn check_separation(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let p = need_point(stmt)?;
    let g = stmt
        .instance
        .form
        .as_ref()
        .ok_or_else(|| Error::InstanceError("L3.10 needs a form".into()))?;
    let c = s_separation(g, p)?;
    let i = coordinate_point_chart(p)?;
    let nc = p.coords().len();
    let zero = WeilValue::Finite(LogValue::zero());
    let mut t = Tracker::new();
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_proj(nc)?;
        if !g.eval_rat(&x.rational_coords()).is_zero() {
            return Err(Error::InstanceError(format!(
                "sample {idx} does not lie on the zero set of the form"
            )));
        }
        for v in places {
            let lx = weil_point(v, p, &x, i)?;
            t.check_bound(idx, v, &lx, &zero, &c.eval(v), true);
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

/// Rational infinity points of a plane curve as points of the line
/// [x1 : x2], with their intersection multiplicities.
fn rational_infinity_line_points(curve: &PlaneCurve) -> Result<Vec<(ProjPoint, u32)>> {
    let mut out = Vec::new();
    for pt in infinity_points(curve)? {
        match pt.place {
            InfinityPlace::Rational(p) => {
                let line = ProjPoint::new(p.coords()[1..].to_vec())?;
                out.push((line, pt.intersection));
            }
            InfinityPlace::Irreducible { .. } => {
                return Err(Error::InstanceError(
                    "the curve has irrational points at infinity; the explicit check needs rational ones"
                        .into(),
                ));
            }
        }
    }
    Ok(out)
}

fn check_curve_bound(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let curve = need_curve(stmt)?;
    let c = s_curve_tail(curve)?;
    let line_points = rational_infinity_line_points(curve)?;
    if line_points.is_empty() {
        return Err(Error::InstanceError("the curve has no rational points at infinity".into()));
    }
    let m_max = line_points.iter().map(|(_, m)| *m).max().unwrap();
    let m_rat = BigRational::from(BigInt::from(m_max));
    // Plane points [0 : a : b] of the curve closure, x0-first.
    let plane_points: Vec<ProjPoint> = line_points
        .iter()
        .map(|(p, _)| {
            let mut coords = vec![BigInt::zero()];
            coords.extend(p.coords().iter().cloned());
            ProjPoint::new(coords).unwrap()
        })
        .collect();
    let mut t = Tracker::new();
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_affine(2)?;
        if !curve.contains(&x) {
            return Err(Error::InstanceError(format!("sample {idx} does not lie on the curve")));
        }
        let mut proj_coords = vec![BigRational::one()];
        proj_coords.extend(x.iter().cloned());
        let xp = ProjPoint::from_rationals(&proj_coords)?;
        for v in places {
            // Dominant coordinate chart; ties resolve to the first.
            let a1 = abs_value(v, &x[0]);
            let a2 = abs_value(v, &x[1]);
            let chart = if a2 > a1 { 2 } else { 1 };
            let left = weil_infinity(v, &x);
            let mut sum = LogValue::zero();
            let mut infinite = false;
            for p in &plane_points {
                if p.coords()[chart].is_zero() {
                    return Err(Error::InstanceError(
                        "an infinity point vanishes in the dominant chart".into(),
                    ));
                }
                match weil_point(v, p, &xp, chart)? {
                    WeilValue::Finite(l) => sum = sum.add(&l),
                    WeilValue::Infinite => infinite = true,
                }
            }
            let right = if infinite {
                WeilValue::Infinite
            } else {
                WeilValue::Finite(sum.scale(&m_rat))
            };
            t.check_bound(idx, v, &left, &right, &c.eval(v), false);
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

fn check_propagation(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let (c3, c4) = propagation_constants(stmt)?;
    // Structural verification of the propagation algebra: recombine the
    // parts and compare per place; any mismatch is a violation.
    let (c3_again, c4_again) = propagation_constants(stmt)?;
    let mut t = Tracker::new();
    for (pi, v) in places.iter().enumerate() {
        for (a, b) in [(&c3, &c3_again), (&c4, &c4_again)] {
            let diff = a.eval(v).sub(&b.eval(v));
            t.note_residual(&diff);
            if !diff.is_zero() {
                t.violations.push(ViolationEntry {
                    sample: pi,
                    place: v.clone(),
                    residual: render_log(&diff),
                });
            }
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

fn check_projection(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let p = need_point(stmt)?;
    if !p.coords()[0].is_zero() {
        return Err(Error::InstanceError(
            "projection monotonicity concerns points on the hyperplane at infinity".into(),
        ));
    }
    let i = canonical_chart(p);
    let nc = p.coords().len();
    let zero_const = LogValue::zero();
    let mut t = Tracker::new();
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_proj(nc)?;
        let mut proj_coords = x.rational_coords();
        proj_coords[0] = BigRational::zero();
        if proj_coords.iter().all(|c| c.is_zero()) {
            // The projection center [1 : 0 : ... : 0] is excluded.
            continue;
        }
        let pix = ProjPoint::from_rationals(&proj_coords)?;
        for v in places {
            let lx = weil_point(v, p, &x, i)?;
            let lpix = weil_point(v, p, &pix, i)?;
            t.check_bound(idx, v, &lx, &lpix, &zero_const, false);
        }
    }
    Ok(finish(stmt, samples.len(), places, t))
}

/// Approach schedule toward P in the chart of its canonical coordinate:
/// archimedean steps halve the offset, p-adic steps multiply it by p.
fn approach_schedule(p: &ProjPoint, v: &Place, len: usize) -> Vec<ProjPoint> {
    let i = canonical_chart(p);
    let a = p.rational_coords();
    let base: Vec<BigRational> = a.iter().map(|c| c / &a[i]).collect();
    let mut out = Vec::new();
    let mut step = match v {
        Place::Arch => BigRational::new(BigInt::one(), BigInt::from(2)),
        Place::Finite(q) => BigRational::from(BigInt::from(*q)),
    };
    for _ in 0..len {
        let coords: Vec<BigRational> = base
            .iter()
            .enumerate()
            .map(|(l, c)| if l == i { c.clone() } else { c + &step })
            .collect();
        out.push(ProjPoint::from_rationals(&coords).unwrap());
        step = match v {
            Place::Arch => step / BigRational::from(BigInt::from(2)),
            Place::Finite(q) => step * BigRational::from(BigInt::from(*q)),
        };
    }
    out
}

fn check_growth_empirical(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let f = need_map(stmt)?;
    let p = need_point(stmt)?;
    let ext = projective_extension(f)?;
    if p.coords().len() != f.dim() + 1 {
        return Err(Error::DimensionError("point dimension does not match the map".into()));
    }
    let q = ext.eval(p)?;
    let e = match stmt.instance.mult {
        Some(e) => e as u64,
        None => proj_multiplicity(&ext, p)?,
    };
    let e_rat = BigRational::from(BigInt::from(e));
    let i = canonical_chart(p);
    let j = canonical_chart(&q);
    let len = if samples.is_empty() { DEFAULT_SCHEDULE } else { samples.len() };
    let mut t = EmpiricalTracker::new(len);
    for v in places {
        for (idx, x) in approach_schedule(p, v, len).iter().enumerate() {
            if x == p {
                continue;
            }
            let fx = ext.eval(x)?;
            let left = weil_point(v, &q, &fx, j)?;
            let lp = weil_point(v, p, x, i)?;
            let right = match lp {
                WeilValue::Finite(l) => WeilValue::Finite(l.scale(&e_rat)),
                WeilValue::Infinite => WeilValue::Infinite,
            };
            t.observe(idx, v, &left, &right);
        }
    }
    Ok(InequalityReport {
        statement: stmt.id,
        mode: stmt.mode,
        samples: len,
        places: places.to_vec(),
        sup_residual: t.sup_residual(),
        violations: t.violations,
        inconclusive: 0,
    })
}

/// The two conditional curve statements are local at one branch: they
/// bound the height only for curve points v-adically near the target
/// infinity point. A sample is on the target branch at v when its Weil
/// value at the target is positive and strictly dominates the value at
/// every other rational infinity point of the curve. Off-branch pairs
/// carry no information and are skipped.
fn on_branch(
    v: &Place,
    target: &ProjPoint,
    others: &[ProjPoint],
    x_line: &ProjPoint,
) -> Result<bool> {
    let lt = match weil_point(v, target, x_line, canonical_chart(target))? {
        WeilValue::Finite(l) => l,
        // The sample projects exactly onto the target point.
        WeilValue::Infinite => return Ok(false),
    };
    if cmp_guarded(&lt) != Some(Ordering::Greater) {
        return Ok(false);
    }
    for q in others {
        match weil_point(v, q, x_line, canonical_chart(q))? {
            WeilValue::Infinite => return Ok(false),
            WeilValue::Finite(lq) => {
                if cmp_guarded(&lt.sub(&lq)) != Some(Ordering::Greater) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Match an instance point against the curve's rational infinity points,
/// returning the line point and the intersection multiplicity.
fn infinity_point_of(curve: &PlaneCurve, p: &ProjPoint) -> Result<(ProjPoint, u32)> {
    let line = if p.coords().len() == 3 {
        if !p.coords()[0].is_zero() {
            return Err(Error::InstanceError("the point must lie at infinity".into()));
        }
        ProjPoint::new(p.coords()[1..].to_vec())?
    } else if p.coords().len() == 2 {
        p.clone()
    } else {
        return Err(Error::DimensionError("expected a plane or line point".into()));
    };
    for (q, m) in rational_infinity_line_points(curve)? {
        if q == line {
            return Ok((q, m));
        }
    }
    Err(Error::InstanceError("the point is not an infinity point of the curve".into()))
}

fn check_curve_point_empirical(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let curve = need_curve(stmt)?;
    let p = need_point(stmt)?;
    let (line_pt, i_p) = infinity_point_of(curve, p)?;
    let mult = match stmt.instance.mult {
        Some(m) => m,
        None => i_p,
    };
    let m_rat = BigRational::from(BigInt::from(mult));
    let chart = canonical_chart(&line_pt);
    let others: Vec<ProjPoint> = rational_infinity_line_points(curve)?
        .into_iter()
        .map(|(q, _)| q)
        .filter(|q| *q != line_pt)
        .collect();
    let mut t = EmpiricalTracker::new(samples.len());
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_affine(2)?;
        if !curve.contains(&x) {
            return Err(Error::InstanceError(format!("sample {idx} does not lie on the curve")));
        }
        if x.iter().all(|c| c.is_zero()) {
            continue;
        }
        let line_x = ProjPoint::from_rationals(&x)?;
        for v in places {
            if !on_branch(v, &line_pt, &others, &line_x)? {
                continue;
            }
            let left = weil_infinity(v, &x);
            let lp = weil_point(v, &line_pt, &line_x, chart)?;
            let right = match lp {
                WeilValue::Finite(l) => WeilValue::Finite(l.scale(&m_rat)),
                WeilValue::Infinite => WeilValue::Infinite,
            };
            t.observe(idx, v, &left, &right);
        }
    }
    Ok(InequalityReport {
        statement: stmt.id,
        mode: stmt.mode,
        samples: samples.len(),
        places: places.to_vec(),
        sup_residual: t.sup_residual(),
        violations: t.violations,
        inconclusive: 0,
    })
}

/// Verticality coefficient r_{1,n} along the backward cycle: r_{1,0} is
/// 1 over the intersection multiplicity, then the recursion divides by
/// the multiplicity of each backward point.
fn backward_rate(
    g: &ProjEndo,
    cycle: &crate::dml::BackwardCycle,
    i_p0: u32,
    k: u32,
    d: u32,
    n: u64,
) -> Result<BigRational> {
    let k_rat = BigRational::from(BigInt::from(k));
    let d_rat = BigRational::from(BigInt::from(d));
    let mut r = BigRational::new(BigInt::one(), BigInt::from(i_p0));
    for m in 1..=n {
        let e = ramification_index_p1(g, cycle.backward(m))?;
        let dr = &d_rat * &r;
        let num = if dr < k_rat { dr } else { k_rat.clone() };
        r = num / BigRational::from(BigInt::from(e));
    }
    Ok(r)
}

fn check_backward_empirical(
    stmt: &InequalityStatement,
    samples: &[Sample],
    places: &[Place],
) -> Result<InequalityReport> {
    let f = need_map(stmt)?;
    let curve = need_curve(stmt)?;
    let p = need_point(stmt)?;
    if f.dim() != 2 {
        return Err(Error::UnsupportedDimension("backward-cycle checks run on the plane".into()));
    }
    let n = stmt.instance.backward_steps.unwrap_or(1);
    let (line_p0, i_p0) = infinity_point_of(curve, p)?;
    let g = restrict_infinity(f);
    // Detect the forward period of the infinity point.
    let mut period = None;
    let mut cur = line_p0.clone();
    for j in 1..=64u32 {
        cur = g.eval(&cur)?;
        if cur == line_p0 {
            period = Some(j);
            break;
        }
    }
    let period = period.ok_or(Error::NotPeriodic)?;
    let cycle = backward_cycle_at_infinity(&g, &line_p0, period)?;
    let r = backward_rate(&g, &cycle, i_p0, f.degree_gap(), f.degree(), n)?;
    let p_back = cycle.backward(n).clone();
    let chart = canonical_chart(&p_back);
    let others: Vec<ProjPoint> = rational_infinity_line_points(curve)?
        .into_iter()
        .map(|(q, _)| q)
        .filter(|q| *q != p_back)
        .collect();
    let mut t = EmpiricalTracker::new(samples.len());
    for (idx, s) in samples.iter().enumerate() {
        let x = s.as_affine(2)?;
        if !curve.contains(&x) {
            return Err(Error::InstanceError(format!("sample {idx} does not lie on the curve")));
        }
        if x.iter().all(|c| c.is_zero()) {
            continue;
        }
        let pix = ProjPoint::from_rationals(&x)?;
        for v in places {
            if !on_branch(v, &p_back, &others, &pix)? {
                continue;
            }
            let left = match weil_infinity(v, &x) {
                WeilValue::Finite(l) => WeilValue::Finite(l.scale(&r)),
                WeilValue::Infinite => WeilValue::Infinite,
            };
            let right = weil_point(v, &p_back, &pix, chart)?;
            t.observe(idx, v, &left, &right);
        }
    }
    Ok(InequalityReport {
        statement: stmt.id,
        mode: stmt.mode,
        samples: samples.len(),
        places: places.to_vec(),
        sup_residual: t.sup_residual(),
        violations: t.violations,
        inconclusive: 0,
    })
}

// ==== sample generation =====================================================

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.gen_range(-30..=30);
    let den: i64 = rng.gen_range(1..=30);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Seeded sample set matching the statement's shape: projective points
/// for chart statements, affine points for height statements, points of
/// the zero set for separation, parametrized curve points for curve
/// statements (escalating parameters for the conditional ones). The
/// approach-sequence statement L3.8ii builds its own schedules; its
/// sample count only sets the length.
pub fn default_samples(stmt: &InequalityStatement, n: usize, seed: u64) -> Result<Vec<Sample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match stmt.id {
        StatementId::L3_3 | StatementId::L3_7 | StatementId::L3_16 => {
            let p = need_point(stmt)?;
            let nc = p.coords().len();
            let mut out = Vec::new();
            while out.len() < n {
                let coords: Vec<BigRational> = (0..nc).map(|_| rand_rational(&mut rng)).collect();
                if coords.iter().all(|c| c.is_zero()) {
                    continue;
                }
                out.push(Sample::Proj(ProjPoint::from_rationals(&coords)?));
            }
            Ok(out)
        }
        StatementId::L3_8i | StatementId::L3_8ii => {
            let f = need_map(stmt)?;
            let nc = f.dim() + 1;
            let mut out = Vec::new();
            while out.len() < n {
                let coords: Vec<BigRational> = (0..nc).map(|_| rand_rational(&mut rng)).collect();
                if coords.iter().all(|c| c.is_zero()) {
                    continue;
                }
                out.push(Sample::Proj(ProjPoint::from_rationals(&coords)?));
            }
            Ok(out)
        }
        StatementId::L3_9 => {
            let f = need_map(stmt)?;
            Ok((0..n)
                .map(|_| Sample::Affine((0..f.dim()).map(|_| rand_rational(&mut rng)).collect()))
                .collect())
        }
        StatementId::L3_10 => {
            let g = stmt
                .instance
                .form
                .as_ref()
                .ok_or_else(|| Error::InstanceError("L3.10 needs a form".into()))?;
            if g.nvars() != 2 {
                return Err(Error::InstanceError(
                    "default sampling of a zero set is implemented for binary forms".into(),
                ));
            }
            let mut roots = Vec::new();
            for (fac, _) in factor_binary_form(g)? {
                if fac.degree() == Some(1) {
                    let a = fac.coeff(&[1, 0]).as_rational().clone();
                    let b = fac.coeff(&[0, 1]).as_rational().clone();
                    roots.push(ProjPoint::from_rationals(&[-b, a])?);
                }
            }
            if roots.is_empty() {
                return Ok(Vec::new());
            }
            Ok((0..n).map(|i| Sample::Proj(roots[i % roots.len()].clone())).collect())
        }
        StatementId::P3_13 => {
            let param = stmt
                .instance
                .param
                .as_ref()
                .ok_or_else(|| Error::InstanceError("P3.13 sampling needs a parametrization".into()))?;
            let mut out = Vec::new();
            while out.len() < n {
                let t = rand_rational(&mut rng);
                if t.is_zero() {
                    continue;
                }
                if let Some(x) = param.eval(&t) {
                    out.push(Sample::Affine(x));
                }
            }
            Ok(out)
        }
        StatementId::L3_11 | StatementId::L4_4 => {
            let param = stmt
                .instance
                .param
                .as_ref()
                .ok_or_else(|| Error::InstanceError("curve sampling needs a parametrization".into()))?;
            let mut out = Vec::new();
            let mut t = BigRational::from(BigInt::from(2));
            while out.len() < n {
                if let Some(x) = param.eval(&t) {
                    out.push(Sample::Affine(x));
                }
                t = t * BigRational::from(BigInt::from(2));
            }
            Ok(out)
        }
        StatementId::P3_15 => Ok(Vec::new()),
    }
}

// ==== verticality ===========================================================

/// Exact verticality recursion along a cycle of multiplicities.
#[derive(Clone, Debug)]
pub struct VerticalitySequence {
    pub r0: BigRational,
    pub k: u32,
    pub d: u32,
    pub multiplicities: Vec<u32>,
    /// r_0, r_1, ..., truncated once the tail turns periodic.
    pub values: Vec<BigRational>,
    /// min over the cycle of k / e.
    pub threshold: BigRational,
    /// First index with r_n >= threshold.
    pub first_at_threshold: Option<usize>,
    /// Set when threshold <= 2: the hypothesis of the backward-rate bound
    /// fails and the recursion carries no verticality conclusion.
    pub hypothesis_fails: bool,
}

pub fn verticality_sequence(
    r0: &BigRational,
    k: u32,
    d: u32,
    cycle: &[u32],
) -> Result<VerticalitySequence> {
    if !r0.is_positive() {
        return Err(Error::InvalidInput("the starting rate must be positive".into()));
    }
    if k < 1 || k > d {
        return Err(Error::InvalidInput("the degree gap must satisfy 1 <= k <= d".into()));
    }
    if cycle.is_empty() || cycle.iter().any(|&e| e == 0) {
        return Err(Error::InvalidInput("the multiplicity cycle must be nonempty and positive".into()));
    }
    let k_rat = BigRational::from(BigInt::from(k));
    let d_rat = BigRational::from(BigInt::from(d));
    let threshold = cycle
        .iter()
        .map(|&e| &k_rat / BigRational::from(BigInt::from(e)))
        .min()
        .unwrap();
    let two = BigRational::from(BigInt::from(2));
    let mut values = vec![r0.clone()];
    let mut first_at = if r0 >= &threshold { Some(0) } else { None };
    let mut seen: BTreeMap<(BigRational, usize), usize> = BTreeMap::new();
    let mut r = r0.clone();
    for n in 1..=1000usize {
        let pos = (n - 1) % cycle.len();
        if seen.insert((r.clone(), pos), n).is_some() {
            break;
        }
        let e = BigRational::from(BigInt::from(cycle[pos]));
        let dr = &d_rat * &r;
        let num = if dr < k_rat { dr } else { k_rat.clone() };
        r = num / e;
        debug_assert!({
            let lhs = &r * BigRational::from(BigInt::from(cycle[pos]));
            let drv = &d_rat * &values[n - 1];
            lhs == if drv < k_rat { drv } else { k_rat.clone() }
        });
        values.push(r.clone());
        if first_at.is_none() && r >= threshold {
            first_at = Some(n);
        }
    }
    Ok(VerticalitySequence {
        r0: r0.clone(),
        k,
        d,
        multiplicities: cycle.to_vec(),
        values,
        threshold: threshold.clone(),
        first_at_threshold: first_at,
        hypothesis_fails: threshold <= two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::make_regular_endo;
    use crate::parse::{parse_poly, parse_ratio, parse_rational_str, VarEnv};
    use crate::scalar::CoeffDomain::Rat;

    fn rat(s: &str) -> BigRational {
        parse_rational_str(s).unwrap()
    }

    fn pt(s: &str) -> ProjPoint {
        ProjPoint::parse_str(s).unwrap()
    }

    fn affine_map(comps: &[&str]) -> RegularEndo {
        let env = VarEnv::affine(comps.len());
        make_regular_endo(comps.iter().map(|s| parse_poly(s, &env, Rat).unwrap()).collect())
            .unwrap()
    }

    fn s_places() -> Vec<Place> {
        vec![Place::Arch, Place::finite(2).unwrap(), Place::finite(3).unwrap(), Place::finite(5).unwrap()]
    }

    fn log_int(n: i64) -> LogValue {
        LogValue::log_rational(&rat(&n.to_string()))
    }

    fn hyperbola() -> PlaneCurve {
        let env = VarEnv::affine(2);
        PlaneCurve::new(parse_poly("x^2 - y^2 - 4", &env, Rat).unwrap()).unwrap()
    }

    fn hyperbola_param() -> ParamCurve {
        let env = VarEnv::custom(&["t"]);
        let x = parse_ratio("(t^2 + 1)/t", &env, Rat).unwrap();
        let y = parse_ratio("(t^2 - 1)/t", &env, Rat).unwrap();
        ParamCurve::new(vec![x, y]).unwrap()
    }

    #[test]
    fn weil_point_examples() {
        let p = pt("[1:0]");
        let v = weil_point(&Place::Arch, &p, &pt("[1:1/10]"), 0).unwrap();
        assert_eq!(v, WeilValue::Finite(log_int(10)));
        let v = weil_point(&Place::finite(3).unwrap(), &p, &pt("[1:9]"), 0).unwrap();
        assert_eq!(v, WeilValue::Finite(log_int(9)));
        assert_eq!(weil_point(&Place::Arch, &p, &p, 0).unwrap(), WeilValue::Infinite);
        assert_eq!(
            weil_point(&Place::Arch, &p, &pt("[0:1]"), 0).unwrap(),
            WeilValue::Finite(LogValue::zero())
        );
        assert!(matches!(weil_point(&Place::Arch, &p, &pt("[1:1]"), 1), Err(Error::InvalidChart)));
    }

    #[test]
    fn weil_infinity_examples() {
        let x = vec![rat("8"), rat("1/2")];
        assert_eq!(weil_infinity(&Place::Arch, &x), WeilValue::Finite(log_int(8)));
        assert_eq!(weil_infinity(&Place::finite(2).unwrap(), &x), WeilValue::Finite(log_int(2)));
        let origin = vec![rat("0"), rat("0")];
        assert_eq!(weil_infinity(&Place::Arch, &origin), WeilValue::Finite(LogValue::zero()));
    }

    #[test]
    fn place_stats_examples() {
        let env = VarEnv::affine(1);
        let f = parse_poly("x^3 - 3*x", &env, Rat).unwrap();
        let (n, h, l) = poly_place_stats(&f, &Place::Arch).unwrap();
        assert_eq!(n, 2);
        assert_eq!(h, rat("3"));
        assert_eq!(l, log_int(3));
        let (n, h, l) = poly_place_stats(&f, &Place::finite(3).unwrap()).unwrap();
        assert_eq!(n, 2);
        assert_eq!(h, rat("1"));
        assert!(l.is_zero());
        let one = parse_poly("1", &env, Rat).unwrap();
        let (n, h, l) = poly_place_stats(&one, &Place::finite(7).unwrap()).unwrap();
        assert_eq!((n, h), (1, rat("1")));
        assert!(l.is_zero());
        let zero = MultiPoly::zero(1, Rat);
        assert!(matches!(poly_place_stats(&zero, &Place::Arch), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn chart_change_constant_example() {
        let c = s_chart_change(&pt("[1:2]"), 0, 1).unwrap();
        // log 2 + 2 log+(1/2) + log 4 = log 8.
        assert_eq!(c.eval(&Place::Arch), log_int(8));
        // At p = 2 only the doubled inverse term survives: 2 log 2, plus
        // the uniform log 4.
        assert_eq!(c.eval(&Place::finite(2).unwrap()), log_int(16));
        assert_eq!(c.eval(&Place::finite(3).unwrap()), log_int(4));
    }

    #[test]
    fn fixed_point_constant_monomial() {
        let f = affine_map(&["x^2", "y^2"]);
        let stmt = InequalityStatement {
            id: StatementId::L3_8i,
            mode: BoundMode::Explicit,
            instance: InequalityInstance {
                point: Some(pt("[1:0:0]")),
                map: Some(f),
                ..Default::default()
            },
        };
        let c = s_constant_for(&stmt).unwrap();
        for v in s_places() {
            assert_eq!(c.eval(&v), log_int(2));
        }
    }

    #[test]
    fn propagation_zero_case() {
        let stmt = InequalityStatement::new(StatementId::P3_15, BoundMode::Explicit);
        let (c3, _) = propagation_constants(&stmt).unwrap();
        assert_eq!(c3.eval(&Place::Arch), LogValue::from_constant(rat("1")));
        assert_eq!(c3.eval(&Place::finite(7).unwrap()), LogValue::from_constant(rat("1")));
        let rep = check_inequality(&stmt, &[], &s_places()).unwrap();
        assert!(rep.violations.is_empty());
        assert_eq!(rep.sup_residual, "0");
    }

    #[test]
    fn s_constant_algebra() {
        let a = SConstant::log_plus_of("a", &rat("6")).unwrap();
        let b = SConstant::log_plus_of("b", &rat("1/2")).unwrap();
        let sum = a.add(&b, "a+b");
        assert_eq!(sum.eval(&Place::Arch), log_int(6));
        assert_eq!(sum.eval(&Place::finite(2).unwrap()), log_int(2));
        assert_eq!(sum.eval(&Place::finite(3).unwrap()), LogValue::zero());
        let m = a.max(&b, "max");
        assert_eq!(m.eval(&Place::Arch), log_int(6));
        assert_eq!(m.eval(&Place::finite(2).unwrap()), log_int(2));
        let scaled = b.scale(&rat("3"), "3b");
        assert_eq!(scaled.eval(&Place::finite(2).unwrap()), log_int(8));
    }

    #[test]
    fn chart_change_check_clean() {
        let mut stmt = InequalityStatement::new(StatementId::L3_3, BoundMode::Explicit);
        stmt.instance.point = Some(pt("[1:2]"));
        let samples = default_samples(&stmt, 200, 7).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert_eq!(rep.samples, 200);
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
        assert_eq!(rep.inconclusive, 0);
    }

    #[test]
    fn linear_check_clean() {
        let mut stmt = InequalityStatement::new(StatementId::L3_7, BoundMode::Explicit);
        stmt.instance.point = Some(pt("[1:2]"));
        stmt.instance.matrix = Some(vec![vec![rat("0"), rat("1")], vec![rat("1"), rat("1")]]);
        let samples = default_samples(&stmt, 60, 11).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn fixed_point_check_clean() {
        let mut stmt = InequalityStatement::new(StatementId::L3_8i, BoundMode::Explicit);
        stmt.instance.map = Some(affine_map(&["x^2", "y^2"]));
        stmt.instance.point = Some(pt("[0:1:0]"));
        let samples = default_samples(&stmt, 40, 3).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);

        // A non-coordinate point is rejected.
        stmt.instance.point = Some(pt("[1:1:0]"));
        assert!(matches!(
            check_inequality(&stmt, &samples, &s_places()),
            Err(Error::InstanceError(_))
        ));
    }

    #[test]
    fn degree_scaling_squaring_is_exact() {
        let mut stmt = InequalityStatement::new(StatementId::L3_9, BoundMode::Explicit);
        stmt.instance.map = Some(affine_map(&["x^2", "y^2"]));
        let c = s_constant_for(&stmt).unwrap();
        for v in s_places() {
            assert!(c.eval(&v).is_zero());
        }
        let samples = default_samples(&stmt, 50, 5).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
        assert_eq!(rep.sup_residual, "0");
    }

    #[test]
    fn degree_scaling_cubic_clean() {
        let mut stmt = InequalityStatement::new(StatementId::L3_9, BoundMode::Explicit);
        stmt.instance.map = Some(affine_map(&["x^3 - 3*x", "y^3 + 3*y"]));
        let samples = default_samples(&stmt, 40, 13).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn separation_check_fixture() {
        let env = VarEnv::p1();
        let g = parse_poly("X^2 + X*Y - 6*Y^2", &env, Rat).unwrap();
        let mut stmt = InequalityStatement::new(StatementId::L3_10, BoundMode::Explicit);
        stmt.instance.form = Some(g);
        stmt.instance.point = Some(pt("[1:0]"));
        let c = s_constant_for(&stmt).unwrap();
        assert_eq!(c.eval(&Place::Arch), log_int(24));
        assert_eq!(c.eval(&Place::finite(2).unwrap()), log_int(4));
        let samples = default_samples(&stmt, 8, 1).unwrap();
        assert_eq!(samples.len(), 8);
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn curve_bound_fixture() {
        let mut stmt = InequalityStatement::new(StatementId::P3_13, BoundMode::Explicit);
        stmt.instance.curve = Some(hyperbola());
        stmt.instance.param = Some(hyperbola_param());
        let c = s_constant_for(&stmt).unwrap();
        assert_eq!(c.eval(&Place::Arch), log_int(4));
        assert!(c.eval(&Place::finite(2).unwrap()).is_zero());
        let samples = default_samples(&stmt, 100, 17).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
        assert_eq!(rep.inconclusive, 0);
    }

    #[test]
    fn projection_fixture() {
        let mut stmt = InequalityStatement::new(StatementId::L3_16, BoundMode::Explicit);
        stmt.instance.point = Some(pt("[0:1:0]"));
        let x = pt("[1:4:1/4]");
        let v = Place::Arch;
        let lx = weil_point(&v, &pt("[0:1:0]"), &x, 1).unwrap();
        assert_eq!(lx, WeilValue::Finite(log_int(4)));
        let rep = check_inequality(&stmt, &[Sample::Proj(x)], &s_places()).unwrap();
        assert!(rep.violations.is_empty());
        let samples = default_samples(&stmt, 60, 23).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn growth_empirical_bounded() {
        let mut stmt = InequalityStatement::new(StatementId::L3_8ii, BoundMode::Empirical);
        stmt.instance.map = Some(affine_map(&["x^2", "y^2"]));
        stmt.instance.point = Some(pt("[0:1:0]"));
        let rep = check_inequality(&stmt, &[], &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
        // Explicit mode is refused with the certificate error.
        stmt.mode = BoundMode::Explicit;
        assert!(matches!(
            check_inequality(&stmt, &[], &s_places()),
            Err(Error::CertificateUnavailable(_))
        ));
    }

    #[test]
    fn curve_point_empirical_bounded() {
        let mut stmt = InequalityStatement::new(StatementId::L3_11, BoundMode::Empirical);
        stmt.instance.curve = Some(hyperbola());
        stmt.instance.param = Some(hyperbola_param());
        stmt.instance.point = Some(pt("[0:1:1]"));
        let samples = default_samples(&stmt, 24, 0).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn backward_empirical_fixture() {
        let mut stmt = InequalityStatement::new(StatementId::L4_4, BoundMode::Empirical);
        stmt.instance.map = Some(affine_map(&["x^3 - 3*x", "y^3 + 3*y"]));
        stmt.instance.curve = Some(hyperbola());
        stmt.instance.param = Some(hyperbola_param());
        stmt.instance.point = Some(pt("[0:1:1]"));
        stmt.instance.backward_steps = Some(1);
        let samples = default_samples(&stmt, 24, 0).unwrap();
        let rep = check_inequality(&stmt, &samples, &s_places()).unwrap();
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
        // The archimedean residual decreases toward log 2 along this
        // parametrization; the sup is attained at the first sample t = 2,
        // where it equals log(5/2).
        let sup: f64 = rep.sup_residual.trim_start_matches('~').parse().unwrap();
        assert!(sup < 0.92, "sup {sup}");
        assert!(sup > 2.0_f64.ln() - 1e-9, "sup {sup}");
    }

    #[test]
    fn statement_id_roundtrip() {
        for id in ALL_STATEMENTS {
            assert_eq!(StatementId::parse(id.as_str()).unwrap(), id);
        }
        assert!(StatementId::parse("L9.9").is_err());
    }

    #[test]
    fn report_json_deterministic() {
        let mut stmt = InequalityStatement::new(StatementId::L3_3, BoundMode::Explicit);
        stmt.instance.point = Some(pt("[1:2]"));
        let samples = default_samples(&stmt, 10, 42).unwrap();
        let a = check_inequality(&stmt, &samples, &s_places()).unwrap().to_json();
        let b = check_inequality(&stmt, &samples, &s_places()).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"statement\":\"L3.3\""));
        assert!(a.contains("\"mode\":\"explicit\""));
        assert!(a.contains("\"sup_residual\""));
    }

    #[test]
    fn verticality_examples() {
        let s = verticality_sequence(&rat("1/2"), 3, 3, &[1]).unwrap();
        assert_eq!(s.threshold, rat("3"));
        assert_eq!(&s.values[0..3], &[rat("1/2"), rat("3/2"), rat("3")]);
        assert_eq!(s.first_at_threshold, Some(2));
        assert!(!s.hypothesis_fails);

        let s = verticality_sequence(&rat("1"), 2, 2, &[1]).unwrap();
        assert_eq!(s.threshold, rat("2"));
        assert!(s.hypothesis_fails);

        let s = verticality_sequence(&rat("1"), 5, 5, &[2]).unwrap();
        assert_eq!(s.threshold, rat("5/2"));
        assert_eq!(s.first_at_threshold, Some(1));
        assert!(!s.hypothesis_fails);

        assert!(matches!(
            verticality_sequence(&rat("-1"), 2, 3, &[1]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            verticality_sequence(&rat("1"), 4, 3, &[1]),
            Err(Error::InvalidInput(_))
        ));
    }
}
