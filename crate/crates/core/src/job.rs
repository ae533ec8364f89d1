//! JSON job documents: one fully validated specification per CLI
//! subcommand, plus the shared input-construction helpers the inline
//! flag path reuses. Schema violations carry the offending field path.

use num_rational::BigRational;
use num_traits::Signed;
use serde_json::Value;

use crate::curve::{ParamCurve, PlaneCurve};
use crate::endo::{make_regular_endo, RegularEndo};
use crate::error::{Error, Result};
use crate::heights::Place;
use crate::parse::{parse_poly, parse_ratio, parse_rational_str, VarEnv};
use crate::point::ProjPoint;
use crate::scalar::CoeffDomain;
use crate::weil::{
    BoundMode, InequalityStatement, SConstant, StatementId,
};
use crate::heights::LogValue;

/// One validated job, ready to execute.
#[derive(Clone, Debug)]
pub enum JobSpec {
    Orbit {
        f: RegularEndo,
        start: Vec<BigRational>,
        n_max: u64,
        height_cap: Option<BigRational>,
    },
    ReturnSet {
        f: RegularEndo,
        start: Vec<BigRational>,
        curve: PlaneCurve,
        n_max: u64,
    },
    Invariant {
        f: RegularEndo,
        curve: PlaneCurve,
    },
    Mult {
        map: Vec<crate::poly::MultiPoly>,
        at: Vec<BigRational>,
    },
    Infinity {
        curve: Option<PlaneCurve>,
        f: Option<RegularEndo>,
    },
    WeilCheck {
        statement: InequalityStatement,
        samples: usize,
        places: Vec<Place>,
        seed: u64,
    },
    ConditionK {
        f: RegularEndo,
        p_max: u32,
    },
    Survey {
        dim: usize,
        degree: u32,
        count: usize,
        seed: u64,
    },
    Height {
        at: Option<Vec<BigRational>>,
        bound: Option<u64>,
        dim: usize,
    },
}

impl JobSpec {
    /// The `kind` tag this job would carry in a document.
    pub fn kind_name(&self) -> &'static str {
        match self {
            JobSpec::Orbit { .. } => "orbit",
            JobSpec::ReturnSet { .. } => "return-set",
            JobSpec::Invariant { .. } => "invariant",
            JobSpec::Mult { .. } => "mult",
            JobSpec::Infinity { .. } => "infinity",
            JobSpec::WeilCheck { .. } => "weil-check",
            JobSpec::ConditionK { .. } => "condition-k",
            JobSpec::Survey { .. } => "survey",
            JobSpec::Height { .. } => "height",
        }
    }
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::SchemaError { path: path.to_string(), message: message.into() }
}

// ==== shared input builders =================================================

/// Affine map from component texts; the variable environment is fixed by
/// the component count (x, y, z with x1..xN aliases).
pub fn endo_from_components(texts: &[String]) -> Result<RegularEndo> {
    if texts.is_empty() {
        return Err(Error::InvalidInput("a map needs at least one component".into()));
    }
    let env = VarEnv::affine(texts.len());
    let comps = texts
        .iter()
        .map(|t| parse_poly(t, &env, CoeffDomain::Rat))
        .collect::<Result<Vec<_>>>()?;
    make_regular_endo(comps)
}

/// Comma-separated component list; the polynomial grammar has no commas.
pub fn split_components(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).collect()
}

pub fn curve_from_text(text: &str) -> Result<PlaneCurve> {
    let env = VarEnv::affine(2);
    PlaneCurve::new(parse_poly(text, &env, CoeffDomain::Rat)?)
}

pub fn rationals_from_texts(texts: &[String]) -> Result<Vec<BigRational>> {
    texts.iter().map(|t| parse_rational_str(t.trim())).collect()
}

/// Place list from tokens: "inf" or a prime (either "p:7" or plain "7").
pub fn places_from_texts(texts: &[String]) -> Result<Vec<Place>> {
    texts
        .iter()
        .map(|t| {
            let t = t.trim();
            match t.strip_prefix("p:") {
                Some(rest) => Place::parse_str(&format!("p:{rest}")),
                None if t == "inf" => Ok(Place::Arch),
                None => {
                    let p: u64 = t
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("not a place: '{t}'")))?;
                    Place::finite(p)
                }
            }
        })
        .collect()
}

pub fn param_from_texts(texts: &[String]) -> Result<ParamCurve> {
    let env = VarEnv::param();
    let coords = texts
        .iter()
        .map(|t| parse_ratio(t, &env, CoeffDomain::Rat))
        .collect::<Result<Vec<_>>>()?;
    ParamCurve::new(coords)
}

// ==== JSON field access =====================================================

fn field<'a>(doc: &'a Value, path: &str) -> Option<&'a Value> {
    doc.get(path)
}

fn req<'a>(doc: &'a Value, path: &str) -> Result<&'a Value> {
    field(doc, path).ok_or_else(|| schema(path, "missing required field"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

fn as_string_list(v: &Value, path: &str) -> Result<Vec<String>> {
    let arr = v.as_array().ok_or_else(|| schema(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, e)| {
            e.as_str()
                .map(|s| s.to_string())
                .ok_or_else(|| schema(&format!("{path}[{i}]"), "expected a string"))
        })
        .collect()
}

fn opt_u64(doc: &Value, path: &str) -> Result<Option<u64>> {
    match field(doc, path) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => Ok(Some(as_u64(v, path)?)),
    }
}

fn opt_str_list(doc: &Value, path: &str) -> Result<Option<Vec<String>>> {
    match field(doc, path) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => Ok(Some(as_string_list(v, path)?)),
    }
}

fn req_endo(doc: &Value, path: &str) -> Result<RegularEndo> {
    let texts = as_string_list(req(doc, path)?, path)?;
    endo_from_components(&texts)
}

fn req_rationals(doc: &Value, path: &str) -> Result<Vec<BigRational>> {
    rationals_from_texts(&as_string_list(req(doc, path)?, path)?)
}

fn req_curve(doc: &Value, path: &str) -> Result<PlaneCurve> {
    curve_from_text(as_str(req(doc, path)?, path)?)
}

/// Places may be written as strings ("inf", "p:7") or bare numbers.
fn places_field(doc: &Value, path: &str) -> Result<Vec<Place>> {
    let default = || {
        Ok(vec![
            Place::Arch,
            Place::finite(2).unwrap(),
            Place::finite(3).unwrap(),
            Place::finite(5).unwrap(),
        ])
    };
    let v = match field(doc, path) {
        None | Some(Value::Null) => return default(),
        Some(v) => v,
    };
    let arr = v.as_array().ok_or_else(|| schema(path, "expected an array of places"))?;
    arr.iter()
        .enumerate()
        .map(|(i, e)| {
            let p = format!("{path}[{i}]");
            match e {
                Value::String(s) if s == "inf" => Ok(Place::Arch),
                Value::String(s) => {
                    places_from_texts(&[s.clone()]).map(|mut v| v.pop().unwrap())
                }
                Value::Number(n) => {
                    let q = n.as_u64().ok_or_else(|| schema(&p, "expected a prime"))?;
                    Place::finite(q)
                }
                _ => Err(schema(&p, "expected \"inf\", \"p:N\", or a prime")),
            }
        })
        .collect()
}

// ==== per-kind parsers ======================================================

fn check_dim(f: &RegularEndo, pt_len: usize, path: &str) -> Result<()> {
    if pt_len != f.dim() {
        return Err(Error::DimensionError(format!(
            "{path}: the map has {} coordinates but the point has {pt_len}",
            f.dim()
        )));
    }
    Ok(())
}

fn parse_orbit(doc: &Value) -> Result<JobSpec> {
    let f = req_endo(doc, "f")?;
    let start = req_rationals(doc, "start")?;
    check_dim(&f, start.len(), "start")?;
    let n_max = as_u64(req(doc, "n_max")?, "n_max")?;
    let height_cap = match field(doc, "height_cap") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let c = parse_rational_str(as_str(v, "height_cap")?)?;
            if !c.is_positive() {
                return Err(schema("height_cap", "expected a positive rational"));
            }
            Some(c)
        }
    };
    Ok(JobSpec::Orbit { f, start, n_max, height_cap })
}

fn parse_return_set(doc: &Value) -> Result<JobSpec> {
    let f = req_endo(doc, "f")?;
    let start = req_rationals(doc, "start")?;
    check_dim(&f, start.len(), "start")?;
    let curve = req_curve(doc, "curve")?;
    if f.dim() != 2 {
        return Err(Error::DimensionError(
            "curve: return sets against a plane curve need a 2-dimensional map".into(),
        ));
    }
    let n_max = as_u64(req(doc, "n_max")?, "n_max")?;
    Ok(JobSpec::ReturnSet { f, start, curve, n_max })
}

fn parse_invariant(doc: &Value) -> Result<JobSpec> {
    let f = req_endo(doc, "f")?;
    if f.dim() != 2 {
        return Err(Error::DimensionError(
            "curve: invariance of a plane curve needs a 2-dimensional map".into(),
        ));
    }
    Ok(JobSpec::Invariant { f, curve: req_curve(doc, "curve")? })
}

fn parse_mult(doc: &Value) -> Result<JobSpec> {
    let texts = as_string_list(req(doc, "map")?, "map")?;
    let env = VarEnv::affine(texts.len());
    let map = texts
        .iter()
        .map(|t| parse_poly(t, &env, CoeffDomain::Rat))
        .collect::<Result<Vec<_>>>()?;
    let at = req_rationals(doc, "at")?;
    if at.len() != texts.len() {
        return Err(Error::DimensionError(format!(
            "at: the system has {} components but the point has {} coordinates",
            texts.len(),
            at.len()
        )));
    }
    Ok(JobSpec::Mult { map, at })
}

fn parse_infinity(doc: &Value) -> Result<JobSpec> {
    let curve = match field(doc, "curve") {
        None | Some(Value::Null) => None,
        Some(v) => Some(curve_from_text(as_str(v, "curve")?)?),
    };
    let f = match field(doc, "f") {
        None | Some(Value::Null) => None,
        Some(v) => Some(endo_from_components(&as_string_list(v, "f")?)?),
    };
    if curve.is_none() && f.is_none() {
        return Err(schema("curve", "infinity jobs need a curve or a map"));
    }
    Ok(JobSpec::Infinity { curve, f })
}

fn parse_weil_check(doc: &Value) -> Result<JobSpec> {
    let id = StatementId::parse(as_str(req(doc, "statement")?, "statement")?)
        .map_err(|e| schema("statement", e.to_string()))?;
    let mode = match field(doc, "mode") {
        None | Some(Value::Null) => {
            if id.explicit_supported() {
                BoundMode::Explicit
            } else {
                BoundMode::Empirical
            }
        }
        Some(v) => match as_str(v, "mode")? {
            "explicit" => BoundMode::Explicit,
            "empirical" => BoundMode::Empirical,
            other => return Err(schema("mode", format!("unknown mode '{other}'"))),
        },
    };
    let mut stmt = InequalityStatement::new(id, mode);
    if let Some(v) = field(doc, "point") {
        if !v.is_null() {
            stmt.instance.point = Some(ProjPoint::parse_str(as_str(v, "point")?)?);
        }
    }
    if let Some(n) = opt_u64(doc, "chart")? {
        stmt.instance.chart = Some(n as usize);
    }
    if let Some(n) = opt_u64(doc, "chart_to")? {
        stmt.instance.chart_to = Some(n as usize);
    }
    if let Some(texts) = opt_str_list(doc, "f")? {
        stmt.instance.map = Some(endo_from_components(&texts)?);
    }
    if let Some(v) = field(doc, "curve") {
        if !v.is_null() {
            stmt.instance.curve = Some(curve_from_text(as_str(v, "curve")?)?);
        }
    }
    if let Some(texts) = opt_str_list(doc, "param")? {
        stmt.instance.param = Some(param_from_texts(&texts)?);
    }
    if let Some(v) = field(doc, "form") {
        if !v.is_null() {
            let env = VarEnv::p1();
            stmt.instance.form = Some(parse_poly(as_str(v, "form")?, &env, CoeffDomain::Rat)?);
        }
    }
    if let Some(v) = field(doc, "matrix") {
        if !v.is_null() {
            let rows = v.as_array().ok_or_else(|| schema("matrix", "expected an array"))?;
            let mut m = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                let texts = as_string_list(row, &format!("matrix[{i}]"))?;
                m.push(rationals_from_texts(&texts)?);
            }
            stmt.instance.matrix = Some(m);
        }
    }
    if let Some(v) = field(doc, "constants") {
        if !v.is_null() {
            let obj = v
                .as_object()
                .ok_or_else(|| schema("constants", "expected an object of rationals"))?;
            let mut consts = Vec::new();
            for (name, val) in obj {
                let q = parse_rational_str(as_str(val, &format!("constants.{name}"))?)?;
                if q.is_negative() {
                    return Err(schema(&format!("constants.{name}"), "constants are nonnegative"));
                }
                consts.push((name.clone(), SConstant::uniform(name, LogValue::from_constant(q))));
            }
            stmt.instance.constants = Some(consts);
        }
    }
    if let Some(v) = field(doc, "rate") {
        if !v.is_null() {
            stmt.instance.rate = Some(parse_rational_str(as_str(v, "rate")?)?);
        }
    }
    if let Some(n) = opt_u64(doc, "mult")? {
        stmt.instance.mult = Some(n as u32);
    }
    if let Some(n) = opt_u64(doc, "backward_steps")? {
        stmt.instance.backward_steps = Some(n);
    }
    let samples = opt_u64(doc, "samples")?.unwrap_or(100) as usize;
    let seed = opt_u64(doc, "seed")?.unwrap_or(0);
    let places = places_field(doc, "places")?;
    Ok(JobSpec::WeilCheck { statement: stmt, samples, places, seed })
}

fn parse_condition_k(doc: &Value) -> Result<JobSpec> {
    let f = req_endo(doc, "f")?;
    let p_max = opt_u64(doc, "p_max")?.unwrap_or(4) as u32;
    if p_max == 0 {
        return Err(schema("p_max", "expected a positive period bound"));
    }
    Ok(JobSpec::ConditionK { f, p_max })
}

fn parse_survey(doc: &Value) -> Result<JobSpec> {
    let dim = opt_u64(doc, "dim")?.unwrap_or(1) as usize;
    if dim == 0 || dim > 2 {
        return Err(schema("dim", "surveys run in dimension 1 or 2"));
    }
    let degree = opt_u64(doc, "degree")?.unwrap_or(3) as u32;
    if degree < 2 {
        return Err(schema("degree", "expected degree at least 2"));
    }
    let count = opt_u64(doc, "count")?.unwrap_or(100) as usize;
    let seed = opt_u64(doc, "seed")?.unwrap_or(0);
    Ok(JobSpec::Survey { dim, degree, count, seed })
}

fn parse_height(doc: &Value) -> Result<JobSpec> {
    let at = match field(doc, "at") {
        None | Some(Value::Null) => None,
        Some(v) => Some(rationals_from_texts(&as_string_list(v, "at")?)?),
    };
    let bound = opt_u64(doc, "bound")?;
    let dim = opt_u64(doc, "dim")?.unwrap_or(1) as usize;
    match (&at, &bound) {
        (None, None) => Err(schema("at", "height jobs need a point or a bound")),
        (Some(_), Some(_)) => Err(schema("bound", "give a point or a bound, not both")),
        _ => Ok(JobSpec::Height { at, bound, dim }),
    }
}

/// Parse and validate one JSON job document.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    if !doc.is_object() {
        return Err(schema("", "expected a JSON object"));
    }
    let kind = as_str(req(&doc, "kind")?, "kind")?;
    match kind {
        "orbit" => parse_orbit(&doc),
        "return-set" => parse_return_set(&doc),
        "invariant" => parse_invariant(&doc),
        "mult" => parse_mult(&doc),
        "infinity" => parse_infinity(&doc),
        "weil-check" => parse_weil_check(&doc),
        "condition-k" => parse_condition_k(&doc),
        "survey" => parse_survey(&doc),
        "height" => parse_height(&doc),
        other => Err(schema("kind", format!("unknown job kind '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_job_roundtrip() {
        let doc = r#"{
            "kind": "orbit",
            "f": ["x^3-3*x", "y^3+3*y"],
            "start": ["2", "0"],
            "n_max": 5
        }"#;
        match parse_job(doc).unwrap() {
            JobSpec::Orbit { f, start, n_max, height_cap } => {
                assert_eq!(f.dim(), 2);
                assert_eq!(f.degree(), 3);
                assert_eq!(start.len(), 2);
                assert_eq!(n_max, 5);
                assert!(height_cap.is_none());
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let doc = r#"{
            "kind": "orbit",
            "f": ["x^3-3*x", "y^3+3*y"],
            "start": ["2", "0", "1"],
            "n_max": 5
        }"#;
        assert!(matches!(parse_job(doc), Err(Error::DimensionError(_))));
    }

    #[test]
    fn empty_document_is_schema_error() {
        match parse_job("{}") {
            Err(Error::SchemaError { path, .. }) => assert_eq!(path, "kind"),
            other => panic!("expected SchemaError, got {other:?}"),
        }
        assert!(matches!(parse_job("not json"), Err(Error::SchemaError { .. })));
    }

    #[test]
    fn weil_job_with_defaults() {
        let doc = r#"{
            "kind": "weil-check",
            "statement": "L3.3",
            "point": "[1:2]",
            "samples": 20,
            "seed": 7
        }"#;
        match parse_job(doc).unwrap() {
            JobSpec::WeilCheck { statement, samples, places, seed } => {
                assert_eq!(statement.id.as_str(), "L3.3");
                assert_eq!(statement.mode, BoundMode::Explicit);
                assert_eq!(samples, 20);
                assert_eq!(seed, 7);
                assert_eq!(places.len(), 4);
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn empirical_defaults_for_conditional_statement() {
        let doc = r#"{
            "kind": "weil-check",
            "statement": "L4.4",
            "f": ["x^3-3*x", "y^3+3*y"],
            "curve": "x^2-y^2-4",
            "param": ["(t^2+1)/t", "(t^2-1)/t"],
            "point": "[0:1:1]",
            "backward_steps": 1
        }"#;
        match parse_job(doc).unwrap() {
            JobSpec::WeilCheck { statement, .. } => {
                assert_eq!(statement.mode, BoundMode::Empirical);
                assert_eq!(statement.instance.backward_steps, Some(1));
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn bad_place_token_rejected() {
        let doc = r#"{
            "kind": "weil-check",
            "statement": "L3.3",
            "point": "[1:2]",
            "places": ["inf", 4]
        }"#;
        assert!(parse_job(doc).is_err());
    }
}
