//! Orbits, return sets, periodic points on the projective line, backward
//! cycles at infinity, and the degree-gap condition verdict engine.
//!
//! Exactness discipline: orbit points are exact rationals while their
//! coordinates fit a bit cap; beyond that, return sets continue through
//! residues modulo a basket of large primes chosen coprime to every
//! denominator in sight. A nonzero residue at any basket prime excludes
//! membership exactly; simultaneous vanishing at every basket prime is
//! never reported as membership, it truncates the window honestly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::curve::PlaneCurve;
use crate::endo::{make_proj_endo, make_regular_endo, restrict_infinity, ProjEndo, RegularEndo};
use crate::error::{Error, Result};
use crate::factor::factor_binary_form;
use crate::heights::{naive_height_affine, LogValue};
use crate::intutil::is_prime_u64;
use crate::localalg::{
    max_multiplicity_p1, multiplicity_at, ramification_index_p1, wronskian_p1, RamifiedPlace,
};
use crate::point::ProjPoint;
use crate::poly::MultiPoly;
use crate::scalar::{CoeffDomain, ExactScalar};

/// Orbit coordinates beyond this many bits (numerator or denominator)
/// trigger the resource cap.
pub const ORBIT_COORD_BIT_CAP: u64 = 1 << 16;
/// Number of large primes used for modular return-set tracking.
const BASKET_SIZE: usize = 16;
/// Forward-iteration budget for periodicity detection on P¹.
const CYCLE_STEP_CAP: usize = 1000;
/// Fixed-point forms above this degree are refused.
const FIXED_FORM_DEGREE_CAP: u64 = 1000;

// ==== orbits ================================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    ReachedNMax,
    HeightCap,
    ResourceCap,
}

/// Exact orbit prefix with per-step naive heights.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub seed: Vec<BigRational>,
    pub points: Vec<Vec<BigRational>>,
    pub truncation: Truncation,
    pub heights: Vec<LogValue>,
}

fn coord_bits(x: &BigRational) -> u64 {
    x.numer().bits().max(x.denom().bits())
}

/// Primitive projective magnitude of an affine point: the max absolute
/// value of the primitive integer coordinates of [x : 1]. Exceeding a
/// rational cap H is exactly the condition naive height > log H.
fn proj_magnitude(x: &[BigRational]) -> Result<BigInt> {
    let mut coords = x.to_vec();
    coords.push(BigRational::one());
    let pt = ProjPoint::from_rationals(&coords)?;
    Ok(pt.coords().iter().map(|c| c.abs()).max().unwrap())
}

/// Exact orbit x, f(x), f²(x), … stopping at n_max, at the height cap
/// (naive height > log height_cap), or at the coordinate bit cap.
pub fn orbit(
    f: &RegularEndo,
    x0: &[BigRational],
    n_max: u64,
    height_cap: Option<&BigRational>,
) -> Result<OrbitRecord> {
    if x0.len() != f.dim() {
        return Err(Error::DimensionError(format!(
            "map has dimension {}, seed has {}",
            f.dim(),
            x0.len()
        )));
    }
    if !f.domain().is_rational() {
        return Err(Error::UnsupportedField("orbits need rational coefficients".into()));
    }
    if let Some(h) = height_cap {
        if !h.is_positive() {
            return Err(Error::InvalidInput("height cap must be positive".into()));
        }
    }
    let mut points: Vec<Vec<BigRational>> = Vec::new();
    let mut heights: Vec<LogValue> = Vec::new();
    let mut truncation = Truncation::ReachedNMax;
    let mut current = x0.to_vec();
    for n in 0..=n_max {
        if let Some(h) = height_cap {
            let m = proj_magnitude(&current)?;
            if BigRational::from(m) > *h {
                truncation = Truncation::HeightCap;
                break;
            }
        }
        if current.iter().any(|c| coord_bits(c) > ORBIT_COORD_BIT_CAP) {
            truncation = Truncation::ResourceCap;
            break;
        }
        heights.push(naive_height_affine(&current)?);
        points.push(current.clone());
        if n < n_max {
            current = f.eval_rational(&current);
        }
    }
    Ok(OrbitRecord { seed: x0.to_vec(), points, truncation, heights })
}

// ==== return sets ===========================================================

/// Return-set window report. Every index carries exact membership; a
/// truncated window means exactness could not be maintained past it.
/// Progressions (l, m) stand for {l + m·j} (m = 0 is the singleton {l});
/// the decomposition is a window heuristic, emitted only when it
/// reproduces the observed set exactly, and None when truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnSetReport {
    pub indices: Vec<u64>,
    pub decomposition: Option<Vec<(u64, u64)>>,
    pub truncated: bool,
    pub window: u64,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and a not divisible by p.
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "not invertible");
    (((t % p as i128) + p as i128) % p as i128) as u64
}

fn rational_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pv = BigInt::from(p);
    let den = x.denom().mod_floor(&pv).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    let num = x.numer().mod_floor(&pv).to_u64().unwrap();
    Some((num as u128 * inv_mod(den, p) as u128 % p as u128) as u64)
}

struct ModPoly {
    terms: Vec<(u64, Vec<u32>)>,
}

fn reduce_poly(f: &MultiPoly, p: u64) -> Option<ModPoly> {
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        terms.push((rational_mod(c.as_rational(), p)?, m.0.clone()));
    }
    Some(ModPoly { terms })
}

fn pow_mod(mut b: u64, mut e: u32, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn eval_mod(f: &ModPoly, x: &[u64], p: u64) -> u64 {
    let mut acc = 0u64;
    for (c, exps) in &f.terms {
        let mut t = *c as u128;
        for (i, e) in exps.iter().enumerate() {
            if *e > 0 {
                t = t * pow_mod(x[i], *e, p) as u128 % p as u128;
            }
        }
        acc = ((acc as u128 + t) % p as u128) as u64;
    }
    acc
}

/// Large primes avoiding every denominator among the map coefficients,
/// the curve coefficients, and the seed.
fn prime_basket(denominators: &[BigInt]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut cand = 1_000_000_007u64;
    while out.len() < BASKET_SIZE {
        if is_prime_u64(cand) {
            let pv = BigInt::from(cand);
            if denominators.iter().all(|d| !d.mod_floor(&pv).is_zero()) {
                out.push(cand);
            }
        }
        cand += 2;
    }
    out
}

fn greedy_progressions(s: &[u64], window: u64) -> Vec<(u64, u64)> {
    let set: std::collections::BTreeSet<u64> = s.iter().copied().collect();
    let mut remaining = set.clone();
    let mut out = Vec::new();
    while let Some(&l) = remaining.iter().next() {
        let mut chosen = None;
        for m in 1..=10u64 {
            let members: Vec<u64> = (l..=window).step_by(m as usize).collect();
            if members.len() >= 3 && members.iter().all(|n| set.contains(n)) {
                chosen = Some((m, members));
                break;
            }
        }
        match chosen {
            Some((m, members)) => {
                for n in &members {
                    remaining.remove(n);
                }
                out.push((l, m));
            }
            None => {
                remaining.remove(&l);
                out.push((l, 0));
            }
        }
    }
    out
}

/// Indices n in [0, n_max] with f^n(x0) on the curve, exact while the
/// orbit fits the bit cap and by basket-prime exclusion beyond it.
pub fn return_set(
    f: &RegularEndo,
    x0: &[BigRational],
    c: &PlaneCurve,
    n_max: u64,
) -> Result<ReturnSetReport> {
    if f.dim() != 2 || x0.len() != 2 {
        return Err(Error::DimensionError("return sets live on the affine plane".into()));
    }
    if !f.domain().is_rational() || !c.domain().is_rational() {
        return Err(Error::UnsupportedField("return sets need rational coefficients".into()));
    }
    let mut denominators: Vec<BigInt> = Vec::new();
    for comp in f.components() {
        for (_, coeff) in comp.terms() {
            denominators.push(coeff.as_rational().denom().clone());
        }
    }
    for x in x0 {
        denominators.push(x.denom().clone());
    }
    let mut indices: Vec<u64> = Vec::new();
    let mut truncated = false;
    let mut window = n_max;

    // Exact phase.
    let mut current = x0.to_vec();
    let mut n = 0u64;
    loop {
        if c.contains(&current) {
            indices.push(n);
        }
        if n == n_max {
            return Ok(ReturnSetReport {
                decomposition: Some(greedy_progressions(&indices, n_max)),
                indices,
                truncated: false,
                window: n_max,
            });
        }
        let next = f.eval_rational(&current);
        n += 1;
        if next.iter().any(|x| coord_bits(x) > ORBIT_COORD_BIT_CAP) {
            break;
        }
        current = next;
    }

    // Modular phase from index n onward: evaluate the orbit in residues.
    let basket = prime_basket(&denominators);
    let mut tracks: Vec<(u64, Vec<ModPoly>, ModPoly, Vec<u64>)> = Vec::new();
    for &p in &basket {
        let comps: Option<Vec<ModPoly>> =
            f.components().iter().map(|g| reduce_poly(g, p)).collect();
        let curve = reduce_poly(c.poly(), p);
        let seed: Option<Vec<u64>> = x0.iter().map(|x| rational_mod(x, p)).collect();
        match (comps, curve, seed) {
            (Some(comps), Some(curve), Some(seed)) => tracks.push((p, comps, curve, seed)),
            _ => continue,
        }
    }
    // Advance every track to step n.
    for (p, comps, _, coords) in tracks.iter_mut() {
        for _ in 0..n {
            let next: Vec<u64> = comps.iter().map(|g| eval_mod(g, coords, *p)).collect();
            *coords = next;
        }
    }
    for step in n..=n_max {
        let excluded = tracks.iter().any(|(p, _, curve, coords)| eval_mod(curve, coords, *p) != 0);
        if !excluded {
            truncated = true;
            window = step.saturating_sub(1);
            break;
        }
        if step < n_max {
            for (p, comps, _, coords) in tracks.iter_mut() {
                let next: Vec<u64> = comps.iter().map(|g| eval_mod(g, coords, *p)).collect();
                *coords = next;
            }
        }
    }
    let decomposition =
        if truncated { None } else { Some(greedy_progressions(&indices, window)) };
    Ok(ReturnSetReport { indices, decomposition, truncated, window })
}

// ==== periodic points on P¹ =================================================

/// Rational periodic points and irreducible period factors of a P¹ map.
#[derive(Clone, Debug)]
pub struct PeriodicPointsP1 {
    pub period: u32,
    /// Y·G0 − X·G1 for the p-th iterate; degree d^p + 1.
    pub fixed_form: MultiPoly,
    /// (point, exact period dividing p, multiplicity in the fixed form).
    pub rational: Vec<(ProjPoint, u32, u32)>,
    /// (irreducible form, residue degree, multiplicity).
    pub irreducible: Vec<(MultiPoly, u32, u32)>,
}

fn var_poly(nvars: usize, domain: CoeffDomain, var: usize) -> MultiPoly {
    let mut exps = vec![0u32; nvars];
    exps[var] = 1;
    MultiPoly::from_terms(nvars, domain, [(exps, ExactScalar::one(domain))])
}

/// Point of P¹ cut out by the linear binary form a·X + b·Y.
fn linear_form_point(form: &MultiPoly) -> Result<ProjPoint> {
    let a = form.coeff(&[1, 0]).as_rational().clone();
    let b = form.coeff(&[0, 1]).as_rational().clone();
    ProjPoint::from_rationals(&[-b, a])
}

/// Exact period of a point already known to satisfy g^p(pt) = pt.
fn exact_period(g: &ProjEndo, pt: &ProjPoint, p: u32) -> Result<u32> {
    let mut cur = pt.clone();
    for j in 1..=p {
        cur = g.eval(&cur)?;
        if cur == *pt {
            return Ok(j);
        }
    }
    Err(Error::NotPeriodic)
}

/// Y·G0 − X·G1 for the p-th iterate, without factoring it. Degree d^p + 1.
fn fixed_point_form(g: &ProjEndo, p: u32) -> Result<MultiPoly> {
    if g.ambient_dim() != 1 {
        return Err(Error::DimensionError("periodic-point analysis is for maps of P^1".into()));
    }
    if g.degree() < 2 {
        return Err(Error::UnsupportedDegree(
            "degree-1 maps may have infinitely many periodic points".into(),
        ));
    }
    if p < 1 {
        return Err(Error::InvalidInput("period must be at least 1".into()));
    }
    let mut dp: u64 = 1;
    for _ in 0..p {
        dp = dp.saturating_mul(g.degree() as u64);
        if dp > FIXED_FORM_DEGREE_CAP {
            return Err(Error::ResourceLimit(format!(
                "fixed-point form degree d^p exceeds {FIXED_FORM_DEGREE_CAP}"
            )));
        }
    }
    let gp = g.iterate(p)?;
    let domain = gp.domain();
    let x = var_poly(2, domain, 0);
    let y = var_poly(2, domain, 1);
    let forms = gp.forms();
    let fixed_form = y.mul(&forms[0]).sub(&x.mul(&forms[1]));
    if fixed_form.is_zero() {
        return Err(Error::Degenerate("fixed-point form vanishes identically".into()));
    }
    Ok(fixed_form)
}

/// Fixed-point form of the p-th iterate with its rational roots (exact
/// periods attached) and remaining irreducible factors.
pub fn periodic_points_p1(g: &ProjEndo, p: u32) -> Result<PeriodicPointsP1> {
    let fixed_form = fixed_point_form(g, p)?;
    let mut rational = Vec::new();
    let mut irreducible = Vec::new();
    for (form, mult) in factor_binary_form(&fixed_form)? {
        if form.degree() == Some(1) {
            let pt = linear_form_point(&form)?;
            let period = exact_period(g, &pt, p)?;
            rational.push((pt, period, mult));
        } else {
            let rd = form.degree().unwrap();
            irreducible.push((form, rd, mult));
        }
    }
    rational.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(PeriodicPointsP1 { period: p, fixed_form, rational, irreducible })
}

// ==== backward cycles =======================================================

/// The backward orbit of a p-periodic point, running along its cycle:
/// backward(n) = P_{-n} with g(P_{-n-1}) = P_{-n}.
#[derive(Clone, Debug)]
pub struct BackwardCycle {
    cycle: Vec<ProjPoint>,
    period: u32,
}

impl BackwardCycle {
    pub fn period(&self) -> u32 {
        self.period
    }

    /// Forward cycle point g^j(P0).
    pub fn forward(&self, j: u32) -> &ProjPoint {
        &self.cycle[(j % self.period) as usize]
    }

    pub fn backward(&self, n: u64) -> &ProjPoint {
        let p = self.period as u64;
        &self.cycle[((p - (n % p)) % p) as usize]
    }
}

/// Verify g^p(P0) = P0 exactly and lay out the cycle for backward reads.
pub fn backward_cycle_at_infinity(g: &ProjEndo, p0: &ProjPoint, p: u32) -> Result<BackwardCycle> {
    if p < 1 {
        return Err(Error::InvalidInput("period must be at least 1".into()));
    }
    let mut cycle = vec![p0.clone()];
    let mut cur = p0.clone();
    for _ in 0..p {
        cur = g.eval(&cur)?;
        if cycle.len() < p as usize {
            cycle.push(cur.clone());
        }
    }
    if cur != *p0 {
        return Err(Error::NotPeriodic);
    }
    Ok(BackwardCycle { cycle, period: p })
}

// ==== condition verdicts ====================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

/// How a ramified place (or candidate point) was classified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceStatus {
    /// Verified periodic with this exact period; a witness when k ≤ 2e.
    Periodic { period: u32 },
    /// The factor divides the period-p fixed form; its roots are periodic.
    PeriodicFactor { period: u32 },
    /// Orbit re-enters a cycle that does not contain the start point.
    Preperiodic { entered_at: u32 },
    /// k > 2e, so periodicity is irrelevant for the condition.
    Irrelevant,
    /// Not periodic with any period up to the search bound.
    NotPeriodicWithin { p_max: u32 },
    /// Orbit left the iteration budget without resolving.
    Escaped,
}

#[derive(Clone, Debug)]
pub struct CertEntry {
    pub place: String,
    pub index: u32,
    pub status: PlaceStatus,
}

/// Verdict on the degree-gap condition k > 2·max e over periodic points
/// at infinity, with the per-factor evidence that produced it.
#[derive(Clone, Debug)]
pub struct ConditionKVerdict {
    pub verdict: Verdict,
    pub p_max: u32,
    pub gap: u32,
    pub certificate: Vec<CertEntry>,
}

fn place_label(place: &RamifiedPlace) -> String {
    match place {
        RamifiedPlace::Rational(pt) => format!("{pt}"),
        RamifiedPlace::Irreducible { form, .. } => format!("{form}"),
    }
}

enum CycleOutcome {
    Periodic { period: u32 },
    Preperiodic { entered_at: u32 },
    Escaped,
}

fn detect_cycle(g: &ProjEndo, start: &ProjPoint) -> Result<CycleOutcome> {
    let mut seen: BTreeMap<ProjPoint, u32> = BTreeMap::new();
    let mut cur = start.clone();
    for step in 0..CYCLE_STEP_CAP as u32 {
        seen.insert(cur.clone(), step);
        cur = g.eval(&cur)?;
        if cur.coords().iter().any(|c| c.bits() > ORBIT_COORD_BIT_CAP) {
            return Ok(CycleOutcome::Escaped);
        }
        if let Some(&at) = seen.get(&cur) {
            return Ok(if at == 0 {
                CycleOutcome::Periodic { period: step + 1 }
            } else {
                CycleOutcome::Preperiodic { entered_at: at }
            });
        }
    }
    Ok(CycleOutcome::Escaped)
}

/// Multiplicity of the form as a factor of the fixed-point form of g^p,
/// used to read off e for a periodic factor witness.
fn form_multiplicity_in(w: &MultiPoly, form: &MultiPoly) -> u32 {
    let mut count = 0u32;
    let mut cur = w.clone();
    while let Some(q) = cur.div_exact(form) {
        count += 1;
        cur = q;
    }
    count
}

fn divides(a: &MultiPoly, b: &MultiPoly) -> bool {
    b.div_exact(a).is_some()
}

/// Degree-gap condition for a planar regular endomorphism: profile the
/// ramification of the restriction to infinity, then classify each
/// ramified place exactly where possible.
pub fn condition_k(f: &RegularEndo, p_max: u32) -> Result<ConditionKVerdict> {
    if f.dim() != 2 {
        return Err(Error::UnsupportedDimension(
            "full periodic-point enumeration needs the Wronskian on P^1; supply candidate points \
             for higher dimension"
                .into(),
        ));
    }
    if f.degree() < 2 {
        return Err(Error::UnsupportedDegree(
            "degree-1 maps have infinitely many periodic points at infinity".into(),
        ));
    }
    let g = restrict_infinity(f);
    let k = f.degree_gap();
    let profile = max_multiplicity_p1(&g)?;
    let wronskian = wronskian_p1(&g);
    let mut certificate: Vec<CertEntry> = Vec::new();
    let mut fails = false;
    let mut unresolved = false;

    for (place, _rd, e) in &profile.entries {
        let label = place_label(place);
        if k > 2 * e {
            certificate.push(CertEntry {
                place: label,
                index: *e,
                status: PlaceStatus::Irrelevant,
            });
            continue;
        }
        match place {
            RamifiedPlace::Rational(pt) => match detect_cycle(&g, pt)? {
                CycleOutcome::Periodic { period } => {
                    fails = true;
                    certificate.push(CertEntry {
                        place: label,
                        index: *e,
                        status: PlaceStatus::Periodic { period },
                    });
                }
                CycleOutcome::Preperiodic { entered_at } => {
                    certificate.push(CertEntry {
                        place: label,
                        index: *e,
                        status: PlaceStatus::Preperiodic { entered_at },
                    });
                }
                CycleOutcome::Escaped => {
                    unresolved = true;
                    certificate.push(CertEntry {
                        place: label,
                        index: *e,
                        status: PlaceStatus::Escaped,
                    });
                }
            },
            RamifiedPlace::Irreducible { form, .. } => {
                let mut found = None;
                let mut exhausted = true;
                for p in 1..=p_max {
                    let phi = match fixed_point_form(&g, p) {
                        Ok(w) => w,
                        Err(Error::ResourceLimit(_)) => {
                            exhausted = false;
                            break;
                        }
                        Err(e) => return Err(e),
                    };
                    if divides(form, &phi) {
                        found = Some(p);
                        break;
                    }
                }
                match found {
                    Some(p) => {
                        fails = true;
                        certificate.push(CertEntry {
                            place: label,
                            index: *e,
                            status: PlaceStatus::PeriodicFactor { period: p },
                        });
                    }
                    None => {
                        unresolved = true;
                        let status = if exhausted {
                            PlaceStatus::NotPeriodicWithin { p_max }
                        } else {
                            PlaceStatus::Escaped
                        };
                        certificate.push(CertEntry { place: label, index: *e, status });
                    }
                }
            }
        }
    }

    // k ≤ 2 fails against any periodic point at all: the fixed-point form
    // of g itself supplies one with e ≥ 1.
    if !fails && k <= 2 {
        let pts = periodic_points_p1(&g, 1)?;
        if let Some((pt, period, _)) = pts.rational.first() {
            let e = ramification_index_p1(&g, pt)?;
            certificate.push(CertEntry {
                place: format!("{pt}"),
                index: e,
                status: PlaceStatus::Periodic { period: *period },
            });
        } else {
            let (form, _, _) = &pts.irreducible[0];
            let e = form_multiplicity_in(&wronskian, form) + 1;
            certificate.push(CertEntry {
                place: format!("{form}"),
                index: e,
                status: PlaceStatus::PeriodicFactor { period: 1 },
            });
        }
        fails = true;
    }

    let verdict = if fails {
        Verdict::Fails
    } else if unresolved {
        Verdict::Undecided
    } else {
        Verdict::Holds
    };
    Ok(ConditionKVerdict { verdict, p_max, gap: k, certificate })
}

/// Multiplicity of a projective endomorphism at a rational point, through
/// the chart-local vanishing ideal (G_j·q_i − q_j·G_i cut to the chart).
pub fn proj_multiplicity(g: &ProjEndo, p: &ProjPoint) -> Result<u64> {
    if g.ambient_dim() == 1 {
        return Ok(ramification_index_p1(g, p)? as u64);
    }
    if !g.domain().is_rational() {
        return Err(Error::UnsupportedField("multiplicity needs rational coefficients".into()));
    }
    let q = g.eval(p)?;
    let nv = g.nvars();
    let l = p.coords().iter().position(|c| !c.is_zero()).unwrap();
    let i = q.coords().iter().position(|c| !c.is_zero()).unwrap();
    let qi = ExactScalar::from_rational(BigRational::from(q.coords()[i].clone()));
    let mut system: Vec<MultiPoly> = Vec::new();
    for j in 0..nv {
        if j == i {
            continue;
        }
        let qj = ExactScalar::from_rational(BigRational::from(q.coords()[j].clone()));
        let h = g.forms()[j].scale(&qi).sub(&g.forms()[i].scale(&qj));
        // Substitute x_l = 1, dropping the chart variable.
        let slices = h.coeffs_in_var(l);
        let mut dehom = MultiPoly::zero(nv - 1, h.domain());
        for s in slices {
            dehom = dehom.add(&s);
        }
        system.push(dehom);
    }
    let pl = BigRational::from(p.coords()[l].clone());
    let chart: Vec<BigRational> = p
        .coords()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != l)
        .map(|(_, c)| BigRational::from(c.clone()) / &pl)
        .collect();
    let zeros = vec![BigRational::zero(); nv - 1];
    Ok(multiplicity_at(&system, &chart, &zeros)?.value)
}

/// Condition verdict for ambient dimension at least 3: candidate periodic
/// points are checked exactly; absent a failing witness the verdict stays
/// undecided because the periodic locus is not enumerated.
pub fn condition_k_with_points(
    f: &RegularEndo,
    p_max: u32,
    candidates: &[ProjPoint],
) -> Result<ConditionKVerdict> {
    if f.dim() == 2 {
        return condition_k(f, p_max);
    }
    if f.dim() < 2 {
        return Err(Error::UnsupportedDimension("the condition concerns dimension at least 2".into()));
    }
    if candidates.is_empty() {
        return Err(Error::UnsupportedDimension(
            "periodic-point enumeration beyond P^1 is unsupported; supply candidate points".into(),
        ));
    }
    if f.degree() < 2 {
        return Err(Error::UnsupportedDegree(
            "degree-1 maps have infinitely many periodic points at infinity".into(),
        ));
    }
    let g = restrict_infinity(f);
    let k = f.degree_gap();
    let mut certificate = Vec::new();
    let mut fails = false;
    for pt in candidates {
        match detect_cycle(&g, pt)? {
            CycleOutcome::Periodic { period } => {
                let e = proj_multiplicity(&g, pt)? as u32;
                if k <= 2 * e {
                    fails = true;
                    certificate.push(CertEntry {
                        place: format!("{pt}"),
                        index: e,
                        status: PlaceStatus::Periodic { period },
                    });
                } else {
                    certificate.push(CertEntry {
                        place: format!("{pt}"),
                        index: e,
                        status: PlaceStatus::Irrelevant,
                    });
                }
            }
            CycleOutcome::Preperiodic { entered_at } => {
                certificate.push(CertEntry {
                    place: format!("{pt}"),
                    index: 0,
                    status: PlaceStatus::Preperiodic { entered_at },
                });
            }
            CycleOutcome::Escaped => {
                certificate.push(CertEntry {
                    place: format!("{pt}"),
                    index: 0,
                    status: PlaceStatus::Escaped,
                });
            }
        }
    }
    let verdict = if fails { Verdict::Fails } else { Verdict::Undecided };
    Ok(ConditionKVerdict { verdict, p_max, gap: k, certificate })
}

/// Monte Carlo regularity survey over random coefficient draws.
#[derive(Clone, Debug)]
pub struct SurveyReport {
    pub dim: usize,
    pub degree: u32,
    pub count: usize,
    pub seed: u64,
    /// Samples that are regular OF THE TARGET DEGREE (degree drops count
    /// as irregular).
    pub regular: usize,
    /// Histogram of the maximal ramification index of the associated line
    /// map over the regular samples: the projective extension itself in
    /// dimension 1, the restriction to infinity in dimension 2.
    pub mult_hist: BTreeMap<u32, usize>,
    pub max_mult: u32,
}

fn random_poly(rng: &mut rand_chacha::ChaCha8Rng, nvars: usize, degree: u32) -> MultiPoly {
    use rand::Rng;
    let mut terms: Vec<(Vec<u32>, ExactScalar)> = Vec::new();
    for d in 0..=degree {
        for exps in crate::poly::monomials_of_degree(nvars, d) {
            let c: i64 = rng.gen_range(-10..=10);
            if c != 0 {
                terms.push((exps, ExactScalar::from_i64(c, CoeffDomain::Rat)));
            }
        }
    }
    MultiPoly::from_terms(nvars, CoeffDomain::Rat, terms)
}

/// Sample `count` random maps of the target degree with dense coefficients
/// uniform in [-10, 10] and report how many are regular of that degree,
/// with the ramification statistics of their line maps.
pub fn survey(dim: usize, degree: u32, count: usize, seed: u64) -> Result<SurveyReport> {
    use rand::SeedableRng;
    if dim == 0 || dim > 2 {
        return Err(Error::UnsupportedDimension("surveys run in dimension 1 or 2".into()));
    }
    if degree < 2 {
        return Err(Error::InvalidInput("survey degree must be at least 2".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut regular = 0usize;
    let mut mult_hist: BTreeMap<u32, usize> = BTreeMap::new();
    let mut max_mult = 0u32;
    for _ in 0..count {
        let comps: Vec<MultiPoly> = (0..dim).map(|_| random_poly(&mut rng, dim, degree)).collect();
        let f = match make_regular_endo(comps) {
            Ok(f) if f.degree() == degree => f,
            _ => continue,
        };
        regular += 1;
        let line_map = if dim == 1 {
            // The lift [x0^d, F] is the projective extension up to a
            // coordinate swap, which preserves ramification indices.
            make_proj_endo(f.lift().to_vec())?
        } else {
            restrict_infinity(&f)
        };
        let profile = max_multiplicity_p1(&line_map)?;
        *mult_hist.entry(profile.max_index).or_insert(0) += 1;
        max_mult = max_mult.max(profile.max_index);
    }
    Ok(SurveyReport { dim, degree, count, seed, regular, mult_hist, max_mult })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{make_proj_endo, make_regular_endo};
    use crate::parse::{parse_poly, parse_rational_str, VarEnv};
    use crate::scalar::CoeffDomain::Rat;

    fn rat(s: &str) -> BigRational {
        parse_rational_str(s).unwrap()
    }

    fn affine_map(comps: &[&str]) -> RegularEndo {
        let env = VarEnv::affine(comps.len());
        make_regular_endo(comps.iter().map(|s| parse_poly(s, &env, Rat).unwrap()).collect())
            .unwrap()
    }

    fn p1_map(g0: &str, g1: &str) -> ProjEndo {
        let env = VarEnv::p1();
        make_proj_endo(vec![
            parse_poly(g0, &env, Rat).unwrap(),
            parse_poly(g1, &env, Rat).unwrap(),
        ])
        .unwrap()
    }

    fn pt(s: &str) -> ProjPoint {
        ProjPoint::parse_str(s).unwrap()
    }

    #[test]
    fn orbit_fixed_point_and_squaring() {
        let f = affine_map(&["x^3 - 3*x", "y^3 + 3*y"]);
        let rec = orbit(&f, &[rat("2"), rat("0")], 5, None).unwrap();
        assert_eq!(rec.points.len(), 6);
        assert!(rec.points.iter().all(|p| p == &vec![rat("2"), rat("0")]));
        assert_eq!(rec.truncation, Truncation::ReachedNMax);

        let sq = affine_map(&["x^2", "y^2"]);
        let rec = orbit(&sq, &[rat("2"), rat("3")], 3, None).unwrap();
        assert_eq!(rec.points.len(), 4);
        assert_eq!(rec.points[3], vec![rat("256"), rat("6561")]);
        for w in rec.points.windows(2) {
            assert_eq!(sq.eval_rational(&w[0]), w[1]);
        }
        // Heights nondecreasing along the expanding orbit.
        for w in rec.heights.windows(2) {
            let diff = w[1].sub(&w[0]);
            assert_ne!(diff.sign_guarded(40), Some(std::cmp::Ordering::Less));
        }
    }

    #[test]
    fn orbit_caps() {
        let sq = affine_map(&["x^2", "y^2"]);
        let rec = orbit(&sq, &[rat("2"), rat("3")], 10, Some(&rat("100"))).unwrap();
        assert_eq!(rec.points.len(), 3);
        assert_eq!(rec.points[2], vec![rat("16"), rat("81")]);
        assert_eq!(rec.truncation, Truncation::HeightCap);

        let rec = orbit(&sq, &[rat("2"), rat("3")], 50, None).unwrap();
        assert_eq!(rec.truncation, Truncation::ResourceCap);
        assert!(rec.points.len() < 25);
        assert!(rec
            .points
            .iter()
            .all(|p| p.iter().all(|c| coord_bits(c) <= ORBIT_COORD_BIT_CAP)));

        let bad = orbit(&sq, &[rat("2")], 1, None);
        assert!(matches!(bad, Err(Error::DimensionError(_))));
    }

    #[test]
    fn return_set_fixtures() {
        let env = VarEnv::affine(2);
        let hyper = PlaneCurve::new(parse_poly("x^2 - y^2 - 4", &env, Rat).unwrap()).unwrap();
        let f = affine_map(&["x^3 - 3*x", "y^3 + 3*y"]);
        let rep = return_set(&f, &[rat("2"), rat("0")], &hyper, 50).unwrap();
        assert_eq!(rep.indices, (0..=50).collect::<Vec<u64>>());
        assert_eq!(rep.decomposition, Some(vec![(0, 1)]));
        assert!(!rep.truncated);

        let sq = affine_map(&["x^2", "y^2"]);
        let line = PlaneCurve::new(parse_poly("x - 2", &env, Rat).unwrap()).unwrap();
        let rep = return_set(&sq, &[rat("2"), rat("3")], &line, 50).unwrap();
        assert_eq!(rep.indices, vec![0]);
        assert_eq!(rep.decomposition, Some(vec![(0, 0)]));
        assert!(!rep.truncated);

        let diag = PlaneCurve::new(parse_poly("x - y", &env, Rat).unwrap()).unwrap();
        let rep = return_set(&sq, &[rat("2"), rat("3")], &diag, 50).unwrap();
        assert!(rep.indices.is_empty());
        assert_eq!(rep.decomposition, Some(vec![]));
        assert!(!rep.truncated);
    }

    #[test]
    fn return_set_even_progression() {
        // Coordinate swap alternates (2,3) and (3,2): hits x = 2 at even n.
        let env = VarEnv::affine(2);
        let swap = affine_map(&["y", "x"]);
        let line = PlaneCurve::new(parse_poly("x - 2", &env, Rat).unwrap()).unwrap();
        let rep = return_set(&swap, &[rat("2"), rat("3")], &line, 50).unwrap();
        assert_eq!(rep.indices, (0..=50).step_by(2).collect::<Vec<u64>>());
        assert_eq!(rep.decomposition, Some(vec![(0, 2)]));
        // The decomposition reproduces the set exactly.
        let mut rebuilt: Vec<u64> = Vec::new();
        for (l, m) in rep.decomposition.unwrap() {
            if m == 0 {
                rebuilt.push(l);
            } else {
                rebuilt.extend((l..=50).step_by(m as usize));
            }
        }
        rebuilt.sort_unstable();
        rebuilt.dedup();
        assert_eq!(rebuilt, rep.indices);
    }

    #[test]
    fn periodic_points_examples() {
        let g = p1_map("X^2", "Y^2");
        let pp = periodic_points_p1(&g, 1).unwrap();
        assert_eq!(pp.fixed_form.degree(), Some(3));
        let pts: Vec<ProjPoint> = pp.rational.iter().map(|(p, _, _)| p.clone()).collect();
        assert!(pts.contains(&pt("[0:1]")) && pts.contains(&pt("[1:1]")) && pts.contains(&pt("[1:0]")));
        assert_eq!(pts.len(), 3);
        assert!(pp.irreducible.is_empty());

        let pp2 = periodic_points_p1(&g, 2).unwrap();
        assert_eq!(pp2.fixed_form.degree(), Some(5));
        assert_eq!(pp2.rational.len(), 3);
        assert!(pp2.rational.iter().all(|(_, period, _)| *period == 1));
        assert_eq!(pp2.irreducible.len(), 1);
        let (form, rd, _) = &pp2.irreducible[0];
        assert_eq!(*rd, 2);
        // t² + t + 1 as a binary form.
        let env = VarEnv::p1();
        assert_eq!(*form, parse_poly("X^2 + X*Y + Y^2", &env, Rat).unwrap());

        let swap = p1_map("Y^2", "X^2");
        let pp = periodic_points_p1(&swap, 2).unwrap();
        let two_cycle: Vec<&ProjPoint> = pp
            .rational
            .iter()
            .filter(|(_, period, _)| *period == 2)
            .map(|(p, _, _)| p)
            .collect();
        assert_eq!(two_cycle.len(), 2);
        assert!(two_cycle.contains(&&pt("[0:1]")) && two_cycle.contains(&&pt("[1:0]")));
    }

    #[test]
    fn periodic_points_errors() {
        let lin = p1_map("X + Y", "Y");
        assert!(matches!(periodic_points_p1(&lin, 1), Err(Error::UnsupportedDegree(_))));
        let g = p1_map("X^2", "Y^2");
        assert!(matches!(periodic_points_p1(&g, 10), Err(Error::ResourceLimit(_))));
        assert!(matches!(periodic_points_p1(&g, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn backward_cycle_examples() {
        let cube = p1_map("X^3", "Y^3");
        let bc = backward_cycle_at_infinity(&cube, &pt("[1:1]"), 1).unwrap();
        for n in 0..5 {
            assert_eq!(bc.backward(n), &pt("[1:1]"));
        }

        let swap = p1_map("Y^2", "X^2");
        let bc = backward_cycle_at_infinity(&swap, &pt("[1:0]"), 2).unwrap();
        assert_eq!(bc.backward(0), &pt("[1:0]"));
        assert_eq!(bc.backward(1), &pt("[0:1]"));
        assert_eq!(bc.backward(2), &pt("[1:0]"));
        assert_eq!(bc.backward(3), &pt("[0:1]"));
        // Composes forward: g(P_{-n-1}) = P_{-n}.
        for n in 0..6u64 {
            assert_eq!(&swap.eval(bc.backward(n + 1)).unwrap(), bc.backward(n));
        }

        let g = p1_map("X^2", "Y^2");
        assert!(matches!(
            backward_cycle_at_infinity(&g, &pt("[1:2]"), 1),
            Err(Error::NotPeriodic)
        ));
    }

    #[test]
    fn condition_k_failing_examples() {
        // Degree gap 2 with e = 3 at the fixed points [1:0], [0:1].
        let f = affine_map(&["x^3 - 3*x", "y^3 + 3*y"]);
        let v = condition_k(&f, 6).unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
        assert_eq!(v.gap, 2);
        assert!(v.certificate.iter().any(|c| c.index == 3
            && matches!(c.status, PlaceStatus::Periodic { period: 1 })));

        // Degree gap 4 with the fixed ramified point t = 1 of index 2.
        let f = affine_map(&["1/2*x^4 + 1/2*y^4 - 6", "1/2*x^3*y + 1/2*x*y^3"]);
        let v = condition_k(&f, 6).unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
        assert_eq!(v.gap, 4);
        assert!(v.certificate.iter().any(|c| c.place == "[1:1]"
            && c.index == 2
            && matches!(c.status, PlaceStatus::Periodic { period: 1 })));
    }

    #[test]
    fn condition_k_holding_example() {
        let f = affine_map(&["x^5 + y^5", "x^4*y"]);
        let v = condition_k(&f, 6).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert_eq!(v.gap, 5);
        // [0:1] has e = 4 but is only preperiodic; the quintic factor has
        // e = 2 and k = 5 > 4.
        assert!(v.certificate.iter().any(|c| c.place == "[0:1]"
            && c.index == 4
            && matches!(c.status, PlaceStatus::Preperiodic { .. })));
        assert!(v
            .certificate
            .iter()
            .any(|c| c.index == 2 && c.status == PlaceStatus::Irrelevant));
    }

    #[test]
    fn condition_k_dimension_paths() {
        let f3 = affine_map(&["x^2", "y^2", "z^2"]);
        assert!(matches!(condition_k(&f3, 6), Err(Error::UnsupportedDimension(_))));
        assert!(matches!(
            condition_k_with_points(&f3, 6, &[]),
            Err(Error::UnsupportedDimension(_))
        ));
        // [1:1:1] is fixed for [X²:Y²:Z²] with e = 1 and k = 2 ≤ 2.
        let v = condition_k_with_points(&f3, 6, &[pt("[1:1:1]")]).unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
        assert!(matches!(v.certificate[0].status, PlaceStatus::Periodic { period: 1 }));
        assert_eq!(v.certificate[0].index, 1);

        // A non-periodic candidate alone leaves the verdict undecided.
        let v = condition_k_with_points(&f3, 6, &[pt("[1:2:1]")]).unwrap();
        assert_eq!(v.verdict, Verdict::Undecided);
    }

    #[test]
    fn proj_multiplicity_matches_p1() {
        let g = p1_map("X^3", "Y^3");
        assert_eq!(proj_multiplicity(&g, &pt("[0:1]")).unwrap(), 3);
        assert_eq!(proj_multiplicity(&g, &pt("[1:1]")).unwrap(), 1);
        // Squaring on P²: ramification locus is the coordinate triangle.
        let env = VarEnv::custom(&["X", "Y", "Z"]);
        let g = make_proj_endo(vec![
            parse_poly("X^2", &env, Rat).unwrap(),
            parse_poly("Y^2", &env, Rat).unwrap(),
            parse_poly("Z^2", &env, Rat).unwrap(),
        ])
        .unwrap();
        assert_eq!(proj_multiplicity(&g, &pt("[1:1:1]")).unwrap(), 1);
        assert_eq!(proj_multiplicity(&g, &pt("[1:1:0]")).unwrap(), 2);
        assert_eq!(proj_multiplicity(&g, &pt("[1:0:0]")).unwrap(), 4);
    }

    #[test]
    fn infinite_looking_returns_have_periodic_infinity_points() {
        // The observed-theorem check on the bundled fixture: a window full
        // of returns forces the curve's infinity points to be periodic.
        use crate::curve::{infinity_points, InfinityPlace};
        let env = VarEnv::affine(2);
        let hyper = PlaneCurve::new(parse_poly("x^2 - y^2 - 4", &env, Rat).unwrap()).unwrap();
        let f = affine_map(&["x^3 - 3*x", "y^3 + 3*y"]);
        let rep = return_set(&f, &[rat("2"), rat("0")], &hyper, 50).unwrap();
        assert!(rep.indices.len() as u64 >= rep.window / 2);
        let inf = infinity_points(&hyper).unwrap();
        assert!(inf.len() <= 2);
        let g = restrict_infinity(&f);
        for pt in &inf {
            match &pt.place {
                InfinityPlace::Rational(p) => {
                    // Strip the leading zero coordinate to land on P¹.
                    let h_inf = ProjPoint::new(p.coords()[1..].to_vec()).unwrap();
                    assert!(matches!(
                        detect_cycle(&g, &h_inf).unwrap(),
                        CycleOutcome::Periodic { .. }
                    ));
                }
                InfinityPlace::Irreducible { .. } => panic!("fixture has rational places"),
            }
        }
    }
}
