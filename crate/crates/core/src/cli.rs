//! Command-line front-end: one subcommand per job kind plus the bundled
//! fixture suite. Inputs come from inline flags or a JSON job file (never
//! both). JSON output is byte-deterministic for identical inputs and
//! seeds; human output renders exact log values with a decimal column.

use std::collections::BTreeMap;

use clap::{Arg, ArgAction, ArgMatches, Command};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::curve::{infinity_points, is_invariant, InfinityPlace, PlaneCurve};
use crate::dml::{
    condition_k, orbit, return_set, survey, PlaceStatus, Truncation, Verdict,
};
use crate::endo::{restrict_infinity, RegularEndo};
use crate::error::{Error, Result};
use crate::heights::{
    naive_height, points_of_bounded_height, LogValue, Place, DEFAULT_PRECISION_BITS,
};
use crate::job::{self, JobSpec};
use crate::localalg::{multiplicity_at, ramification_index_p1};
use crate::parse::parse_rational_str;
use crate::point::ProjPoint;
use crate::weil::{check_inequality, default_samples, s_constant_for, BoundMode};

/// Archimedean rendering precision, overridable via REGDYN_PRECISION_BITS.
fn precision_bits() -> u32 {
    std::env::var("REGDYN_PRECISION_BITS")
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .filter(|b| (32..=65536).contains(b))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// Exact log rendering with the decimal approximation column.
fn log_human(v: &LogValue) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let approx = v.numeric(precision_bits()).to_f64().unwrap_or(f64::NAN);
    format!("{} ≈ {approx:.6}", v.render_exact())
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

// ==== command definition ====================================================

fn arg(name: &'static str, value_name: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).value_name(value_name).help(help)
}

fn input_arg(name: &'static str, value_name: &'static str, help: &'static str) -> Arg {
    // Inline input; mutually exclusive with a job file.
    arg(name, value_name, help).conflicts_with("job")
}

fn job_arg() -> Arg {
    arg("job", "FILE", "JSON job file replacing the inline input flags")
}

fn build_command() -> Command {
    let f_help = "comma-separated affine components, e.g. \"x^3-3*x,y^3+3*y\"";
    Command::new("regdyn")
        .about("Exact arithmetic for regular self-maps of affine space")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .disable_help_subcommand(true)
        .arg(
            Arg::new("json")
                .long("json")
                .help("machine-readable JSON output")
                .action(ArgAction::SetTrue)
                .global(true),
        )
        .subcommand(
            Command::new("orbit")
                .about("Exact forward orbit with per-step heights")
                .arg(input_arg("f", "MAP", f_help).required_unless_present("job"))
                .arg(
                    input_arg("start", "POINT", "comma-separated rational coordinates")
                        .required_unless_present("job"),
                )
                .arg(input_arg("n-max", "N", "step budget (default 50)"))
                .arg(input_arg("height-cap", "H", "stop once the height exceeds this rational"))
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("return-set")
                .about("Orbit indices landing on a plane curve, with progression structure")
                .arg(input_arg("f", "MAP", f_help).required_unless_present("job"))
                .arg(
                    input_arg("start", "POINT", "comma-separated rational coordinates")
                        .required_unless_present("job"),
                )
                .arg(
                    input_arg("curve", "POLY", "plane curve, e.g. \"x^2-y^2-4\"")
                        .required_unless_present("job"),
                )
                .arg(input_arg("n-max", "N", "window size (default 50)"))
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("invariant")
                .about("Is the plane curve invariant under the map, and what is the degree gap")
                .arg(input_arg("f", "MAP", f_help).required_unless_present("job"))
                .arg(
                    input_arg("curve", "POLY", "plane curve polynomial")
                        .required_unless_present("job"),
                )
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("mult")
                .about("Local multiplicity (Artin-ring length) of a square system at a point")
                .arg(
                    input_arg("map", "MAP", "comma-separated components of a square system")
                        .alias("f")
                        .required_unless_present("job"),
                )
                .arg(
                    input_arg("at", "POINT", "comma-separated rational coordinates")
                        .required_unless_present("job"),
                )
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("infinity")
                .about("Points at infinity of a curve, or the restriction of a map to infinity")
                .arg(input_arg("curve", "POLY", "plane curve polynomial"))
                .arg(input_arg("f", "MAP", f_help))
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("weil-check")
                .about("Verify one local-height inequality over samples and places")
                .arg(
                    input_arg("statement", "ID", "statement id, e.g. L3.3")
                        .required_unless_present("job"),
                )
                .arg(input_arg("mode", "MODE", "explicit or empirical (default by statement)"))
                .arg(input_arg("point", "P", "projective point, e.g. \"[1:2]\""))
                .arg(input_arg("chart", "I", "chart index"))
                .arg(input_arg("chart-to", "J", "second chart index"))
                .arg(input_arg("f", "MAP", f_help))
                .arg(input_arg("curve", "POLY", "plane curve polynomial"))
                .arg(input_arg("form", "FORM", "binary form in X, Y"))
                .arg(input_arg("param", "RATIOS", "comma-separated rational functions of t"))
                .arg(input_arg("rate", "R", "expansion rate (rational)"))
                .arg(input_arg("mult", "E", "multiplicity override"))
                .arg(input_arg("backward-steps", "N", "backward steps along the cycle"))
                .arg(input_arg("samples", "N", "sample count (default 100)"))
                .arg(input_arg("places", "LIST", "comma-separated places (default inf,2,3,5)"))
                .arg(input_arg("seed", "SEED", "sampling seed (default 0, echoed)"))
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("condition-k")
                .about("Degree-gap condition verdict over periodic places at infinity")
                .arg(input_arg("f", "MAP", f_help).required_unless_present("job"))
                .arg(input_arg("p-max", "P", "period search bound (default 4)"))
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("survey")
                .about("Monte Carlo regularity and ramification survey")
                .arg(input_arg("dim", "N", "ambient dimension, 1 or 2 (default 1)"))
                .arg(input_arg("degree", "D", "map degree (default 3)"))
                .arg(input_arg("count", "N", "sample count (default 100)"))
                .arg(input_arg("seed", "SEED", "sampling seed (default 0, echoed)"))
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("height")
                .about("Naive height of a point, or all points of bounded height")
                .arg(input_arg("at", "POINT", "comma-separated rational coordinates"))
                .arg(input_arg("bound", "B", "height bound for enumeration"))
                .arg(input_arg("dim", "N", "projective dimension for enumeration (default 1)"))
                .arg(job_arg()),
        )
        .subcommand(
            Command::new("fixtures")
                .about("Run the bundled example suite and print a pass/fail table"),
        )
}

// ==== flag parsing ==========================================================

fn get_str<'a>(m: &'a ArgMatches, name: &str) -> Option<&'a String> {
    m.get_one::<String>(name)
}

fn parse_u64_flag(m: &ArgMatches, name: &str) -> CliResult<Option<u64>> {
    match get_str(m, name) {
        None => Ok(None),
        Some(s) => s
            .parse::<u64>()
            .map(Some)
            .map_err(|_| usage(format!("--{name} expects a nonnegative integer, got '{s}'"))),
    }
}

fn split_csv(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).collect()
}

fn job_from_file(m: &ArgMatches, kind: &str) -> CliResult<Option<JobSpec>> {
    let Some(path) = get_str(m, "job") else { return Ok(None) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(Error::InvalidInput(format!("cannot read '{path}': {e}"))))?;
    let spec = job::parse_job(&text)?;
    if spec.kind_name() != kind {
        return Err(CliError::Domain(Error::InvalidInput(format!(
            "job file '{path}' has kind '{}' but the subcommand is '{kind}'",
            spec.kind_name()
        ))));
    }
    Ok(Some(spec))
}

fn job_from_matches(kind: &str, m: &ArgMatches) -> CliResult<JobSpec> {
    if let Some(spec) = job_from_file(m, kind)? {
        return Ok(spec);
    }
    let endo = |name: &str| -> CliResult<RegularEndo> {
        let text = get_str(m, name).expect("required by clap");
        Ok(job::endo_from_components(&job::split_components(text))?)
    };
    let rationals = |name: &str| -> CliResult<Vec<BigRational>> {
        let text = get_str(m, name).expect("required by clap");
        Ok(job::rationals_from_texts(&split_csv(text))?)
    };
    match kind {
        "orbit" => {
            let f = endo("f")?;
            let start = rationals("start")?;
            check_dim(&f, start.len())?;
            let n_max = parse_u64_flag(m, "n-max")?.unwrap_or(50);
            let height_cap = match get_str(m, "height-cap") {
                None => None,
                Some(s) => {
                    let c = parse_rational_str(s)?;
                    if !c.is_positive() {
                        return Err(usage("--height-cap expects a positive rational"));
                    }
                    Some(c)
                }
            };
            Ok(JobSpec::Orbit { f, start, n_max, height_cap })
        }
        "return-set" => {
            let f = endo("f")?;
            let start = rationals("start")?;
            check_dim(&f, start.len())?;
            let curve = job::curve_from_text(get_str(m, "curve").expect("required"))?;
            let n_max = parse_u64_flag(m, "n-max")?.unwrap_or(50);
            Ok(JobSpec::ReturnSet { f, start, curve, n_max })
        }
        "invariant" => Ok(JobSpec::Invariant {
            f: endo("f")?,
            curve: job::curve_from_text(get_str(m, "curve").expect("required"))?,
        }),
        "mult" => {
            let texts = job::split_components(get_str(m, "map").expect("required"));
            let env = crate::parse::VarEnv::affine(texts.len());
            let map = texts
                .iter()
                .map(|t| crate::parse::parse_poly(t, &env, crate::scalar::CoeffDomain::Rat))
                .collect::<Result<Vec<_>>>()?;
            let at = rationals("at")?;
            if at.len() != map.len() {
                return Err(CliError::Domain(Error::DimensionError(format!(
                    "the system has {} components but the point has {} coordinates",
                    map.len(),
                    at.len()
                ))));
            }
            Ok(JobSpec::Mult { map, at })
        }
        "infinity" => {
            let curve = match get_str(m, "curve") {
                None => None,
                Some(s) => Some(job::curve_from_text(s)?),
            };
            let f = match get_str(m, "f") {
                None => None,
                Some(s) => Some(job::endo_from_components(&job::split_components(s))?),
            };
            if curve.is_none() && f.is_none() {
                return Err(usage("infinity needs --curve or --f (or a --job file)"));
            }
            Ok(JobSpec::Infinity { curve, f })
        }
        "weil-check" => weil_job_from_flags(m),
        "condition-k" => {
            let p_max = parse_u64_flag(m, "p-max")?.unwrap_or(4) as u32;
            if p_max == 0 {
                return Err(usage("--p-max expects a positive period bound"));
            }
            Ok(JobSpec::ConditionK { f: endo("f")?, p_max })
        }
        "survey" => {
            let dim = parse_u64_flag(m, "dim")?.unwrap_or(1) as usize;
            let degree = parse_u64_flag(m, "degree")?.unwrap_or(3) as u32;
            let count = parse_u64_flag(m, "count")?.unwrap_or(100) as usize;
            let seed = parse_u64_flag(m, "seed")?.unwrap_or(0);
            Ok(JobSpec::Survey { dim, degree, count, seed })
        }
        "height" => {
            let at = match get_str(m, "at") {
                None => None,
                Some(s) => Some(job::rationals_from_texts(&split_csv(s))?),
            };
            let bound = parse_u64_flag(m, "bound")?;
            let dim = parse_u64_flag(m, "dim")?.unwrap_or(1) as usize;
            match (&at, &bound) {
                (None, None) => Err(usage("height needs --at or --bound")),
                (Some(_), Some(_)) => Err(usage("give --at or --bound, not both")),
                _ => Ok(JobSpec::Height { at, bound, dim }),
            }
        }
        other => unreachable!("unknown subcommand {other}"),
    }
}

fn check_dim(f: &RegularEndo, pt_len: usize) -> CliResult<()> {
    if pt_len != f.dim() {
        return Err(CliError::Domain(Error::DimensionError(format!(
            "the map has {} coordinates but the point has {pt_len}",
            f.dim()
        ))));
    }
    Ok(())
}

fn weil_job_from_flags(m: &ArgMatches) -> CliResult<JobSpec> {
    use crate::weil::{InequalityStatement, StatementId};
    let id = StatementId::parse(get_str(m, "statement").expect("required"))?;
    let mode = match get_str(m, "mode").map(|s| s.as_str()) {
        None => {
            if id.explicit_supported() {
                BoundMode::Explicit
            } else {
                BoundMode::Empirical
            }
        }
        Some("explicit") => BoundMode::Explicit,
        Some("empirical") => BoundMode::Empirical,
        Some(other) => return Err(usage(format!("unknown mode '{other}'"))),
    };
    let mut stmt = InequalityStatement::new(id, mode);
    if let Some(s) = get_str(m, "point") {
        stmt.instance.point = Some(ProjPoint::parse_str(s)?);
    }
    stmt.instance.chart = parse_u64_flag(m, "chart")?.map(|n| n as usize);
    stmt.instance.chart_to = parse_u64_flag(m, "chart-to")?.map(|n| n as usize);
    if let Some(s) = get_str(m, "f") {
        stmt.instance.map = Some(job::endo_from_components(&job::split_components(s))?);
    }
    if let Some(s) = get_str(m, "curve") {
        stmt.instance.curve = Some(job::curve_from_text(s)?);
    }
    if let Some(s) = get_str(m, "param") {
        stmt.instance.param = Some(job::param_from_texts(&split_csv(s))?);
    }
    if let Some(s) = get_str(m, "form") {
        let env = crate::parse::VarEnv::p1();
        stmt.instance.form =
            Some(crate::parse::parse_poly(s, &env, crate::scalar::CoeffDomain::Rat)?);
    }
    if let Some(s) = get_str(m, "rate") {
        stmt.instance.rate = Some(parse_rational_str(s)?);
    }
    stmt.instance.mult = parse_u64_flag(m, "mult")?.map(|n| n as u32);
    stmt.instance.backward_steps = parse_u64_flag(m, "backward-steps")?;
    let samples = parse_u64_flag(m, "samples")?.unwrap_or(100) as usize;
    let seed = parse_u64_flag(m, "seed")?.unwrap_or(0);
    let places = match get_str(m, "places") {
        None => vec![
            Place::Arch,
            Place::finite(2).unwrap(),
            Place::finite(3).unwrap(),
            Place::finite(5).unwrap(),
        ],
        Some(s) => job::places_from_texts(&split_csv(s))?,
    };
    Ok(JobSpec::WeilCheck { statement: stmt, samples, places, seed })
}

// ==== execution =============================================================

struct Report {
    json: Value,
    human: String,
    exit: i32,
}

fn ok_report(json: Value, human: String) -> Report {
    Report { json, human, exit: 0 }
}

fn rational_strings(xs: &[BigRational]) -> Vec<Value> {
    xs.iter().map(|c| Value::String(c.to_string())).collect()
}

fn execute(spec: JobSpec) -> Result<Report> {
    match spec {
        JobSpec::Orbit { f, start, n_max, height_cap } => {
            let rec = orbit(&f, &start, n_max, height_cap.as_ref())?;
            let truncation = match rec.truncation {
                Truncation::ReachedNMax => "n-max",
                Truncation::HeightCap => "height-cap",
                Truncation::ResourceCap => "resource-cap",
            };
            let points: Vec<Value> =
                rec.points.iter().map(|p| Value::Array(rational_strings(p))).collect();
            let heights: Vec<Value> = rec
                .heights
                .iter()
                .map(|h| Value::String(h.render_exact()))
                .collect();
            let mut human = String::new();
            for (n, (p, h)) in rec.points.iter().zip(&rec.heights).enumerate() {
                let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                human.push_str(&format!("{n:4}  ({})  H = {}\n", coords.join(", "), log_human(h)));
            }
            human.push_str(&format!("truncation: {truncation}\n"));
            Ok(ok_report(
                json!({
                    "heights": heights,
                    "points": points,
                    "truncation": truncation,
                }),
                human,
            ))
        }
        JobSpec::ReturnSet { f, start, curve, n_max } => {
            let rep = return_set(&f, &start, &curve, n_max)?;
            let decomposition: Value = match &rep.decomposition {
                None => Value::Null,
                Some(parts) => Value::Array(
                    parts.iter().map(|(l, m)| json!([l, m])).collect(),
                ),
            };
            let mut human = format!(
                "return indices in [0, {}]: {{{}}}\n",
                rep.window,
                rep.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
            );
            match &rep.decomposition {
                None => human.push_str("no progression decomposition within the window\n"),
                Some(parts) => {
                    for (l, md) in parts {
                        if *md == 0 {
                            human.push_str(&format!("  singleton {{{l}}}\n"));
                        } else {
                            human.push_str(&format!("  progression {l} + {md}*Z>=0\n"));
                        }
                    }
                }
            }
            if rep.truncated {
                human.push_str("(exact tracking truncated; indices past the window unknown)\n");
            }
            Ok(ok_report(
                json!({
                    "decomposition": decomposition,
                    "indices": rep.indices,
                    "truncated": rep.truncated,
                    "window": rep.window,
                }),
                human,
            ))
        }
        JobSpec::Invariant { f, curve } => {
            let inv = is_invariant(&curve, &f)?;
            let gap = f.degree_gap();
            Ok(ok_report(
                json!({ "gap": gap, "invariant": inv }),
                format!("invariant: {inv}\ndegree gap: {gap}\n"),
            ))
        }
        JobSpec::Mult { map, at } => {
            let q: Vec<BigRational> = map.iter().map(|c| c.eval_rat(&at)).collect();
            let res = multiplicity_at(&map, &at, &q)?;
            if !res.stabilized {
                return Err(Error::ResourceLimit(
                    "the local length did not stabilize within the degree cap".into(),
                ));
            }
            Ok(ok_report(json!({ "e": res.value }), format!("e = {}\n", res.value)))
        }
        JobSpec::Infinity { curve, f } => exec_infinity(curve, f),
        JobSpec::WeilCheck { statement, samples, places, seed } => {
            exec_weil(statement, samples, places, seed)
        }
        JobSpec::ConditionK { f, p_max } => {
            let v = condition_k(&f, p_max)?;
            let verdict = match v.verdict {
                Verdict::Holds => "HOLDS",
                Verdict::Fails => "FAILS",
                Verdict::Undecided => "UNDECIDED",
            };
            let cert: Vec<Value> = v
                .certificate
                .iter()
                .map(|e| {
                    json!({
                        "index": e.index,
                        "place": e.place,
                        "status": status_string(&e.status),
                    })
                })
                .collect();
            let mut human = format!("verdict: {verdict} (gap {}, periods up to {})\n", v.gap, v.p_max);
            for e in &v.certificate {
                human.push_str(&format!(
                    "  {}  e = {}  {}\n",
                    e.place,
                    e.index,
                    status_string(&e.status)
                ));
            }
            Ok(ok_report(
                json!({
                    "certificate": cert,
                    "gap": v.gap,
                    "p_max": v.p_max,
                    "verdict": verdict,
                }),
                human,
            ))
        }
        JobSpec::Survey { dim, degree, count, seed } => {
            let rep = survey(dim, degree, count, seed)?;
            let hist: BTreeMap<String, usize> =
                rep.mult_hist.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            let mut human = format!(
                "dim {dim}, degree {degree}, {count} samples, seed {seed}\nregular of degree {degree}: {}\n",
                rep.regular
            );
            for (e, n) in &rep.mult_hist {
                human.push_str(&format!("  max ramification {e}: {n}\n"));
            }
            Ok(ok_report(
                json!({
                    "count": rep.count,
                    "degree": rep.degree,
                    "dim": rep.dim,
                    "max_mult": rep.max_mult,
                    "mult_hist": hist,
                    "regular": rep.regular,
                    "seed": rep.seed,
                }),
                human,
            ))
        }
        JobSpec::Height { at, bound, dim } => exec_height(at, bound, dim),
    }
}

fn status_string(s: &PlaceStatus) -> String {
    match s {
        PlaceStatus::Periodic { period } => format!("periodic({period})"),
        PlaceStatus::PeriodicFactor { period } => format!("periodic-factor({period})"),
        PlaceStatus::Preperiodic { entered_at } => format!("preperiodic({entered_at})"),
        PlaceStatus::Irrelevant => "irrelevant".to_string(),
        PlaceStatus::NotPeriodicWithin { p_max } => format!("not-periodic-within({p_max})"),
        PlaceStatus::Escaped => "escaped".to_string(),
    }
}

fn exec_infinity(curve: Option<PlaneCurve>, f: Option<RegularEndo>) -> Result<Report> {
    let mut obj = serde_json::Map::new();
    let mut human = String::new();
    let g = match &f {
        Some(f) => {
            if f.dim() != 2 {
                return Err(Error::UnsupportedDimension(
                    "the infinity restriction report runs on the plane".into(),
                ));
            }
            let g = restrict_infinity(f);
            let forms: Vec<String> =
                g.forms().iter().map(|p| p.render(&["X", "Y"])).collect();
            obj.insert("degree".into(), json!(f.degree()));
            obj.insert("gap".into(), json!(f.degree_gap()));
            obj.insert("restriction".into(), json!(forms));
            human.push_str(&format!(
                "degree {}, gap {}\nrestriction to infinity: [{} : {}]\n",
                f.degree(),
                f.degree_gap(),
                forms[0],
                forms[1]
            ));
            Some(g)
        }
        None => None,
    };
    if let Some(curve) = &curve {
        let mut pts = Vec::new();
        for pt in infinity_points(curve)? {
            match &pt.place {
                InfinityPlace::Rational(p) => {
                    let mut entry = serde_json::Map::new();
                    entry.insert("i".into(), json!(pt.intersection));
                    entry.insert("point".into(), json!(p.to_string()));
                    human.push_str(&format!("{}  i = {}", p, pt.intersection));
                    if let Some(g) = &g {
                        let line = ProjPoint::new(p.coords()[1..].to_vec())?;
                        let e = ramification_index_p1(g, &line)?;
                        entry.insert("e".into(), json!(e));
                        human.push_str(&format!("  e = {e}"));
                    }
                    human.push('\n');
                    pts.push(Value::Object(entry));
                }
                InfinityPlace::Irreducible { form, residue_degree } => {
                    let text = form.render(&["X", "Y"]);
                    human.push_str(&format!(
                        "irreducible place {text} (degree {residue_degree})  i = {}\n",
                        pt.intersection
                    ));
                    pts.push(json!({
                        "form": text,
                        "i": pt.intersection,
                        "residue_degree": residue_degree,
                    }));
                }
            }
        }
        obj.insert("points".into(), Value::Array(pts));
    }
    Ok(ok_report(Value::Object(obj), human))
}

fn exec_weil(
    stmt: crate::weil::InequalityStatement,
    n_samples: usize,
    places: Vec<Place>,
    seed: u64,
) -> Result<Report> {
    let samples = default_samples(&stmt, n_samples, seed)?;
    let report = check_inequality(&stmt, &samples, &places)?;
    let rep_json: Value = serde_json::from_str(&report.to_json()).expect("report JSON is valid");
    let mut human = format!(
        "statement {} ({} mode), {} samples, seed {seed}\n",
        stmt.id.as_str(),
        stmt.mode.as_str(),
        report.samples
    );
    if stmt.mode == BoundMode::Explicit {
        let c = s_constant_for(&stmt)?;
        for v in &places {
            human.push_str(&format!("  c({v}) = {}\n", log_human(&c.eval(v))));
        }
    }
    human.push_str(&format!(
        "violations: {}\nsup residual: {}\n",
        report.violations.len(),
        report.sup_residual
    ));
    for viol in &report.violations {
        human.push_str(&format!(
            "  VIOLATION sample {} at {}: residual {}\n",
            viol.sample, viol.place, viol.residual
        ));
    }
    if report.inconclusive > 0 {
        human.push_str(&format!(
            "inconclusive archimedean comparisons: {}\n",
            report.inconclusive
        ));
    }
    Ok(ok_report(json!({ "report": rep_json, "seed": seed }), human))
}

fn exec_height(at: Option<Vec<BigRational>>, bound: Option<u64>, dim: usize) -> Result<Report> {
    if let Some(x) = at {
        let mut coords = vec![BigRational::from_integer(1.into())];
        coords.extend(x.iter().cloned());
        let p = ProjPoint::from_rationals(&coords)?;
        let h_mult = p.coords().iter().map(|c| c.magnitude().clone()).max().unwrap();
        let h_log = naive_height(&p);
        return Ok(ok_report(
            json!({
                "height": h_mult.to_string(),
                "log_height": h_log.render_exact(),
                "point": p.to_string(),
            }),
            format!("H({p}) = {h_mult}\nlog H = {}\n", log_human(&h_log)),
        ));
    }
    let b = bound.expect("validated");
    if dim == 0 || dim > 4 {
        return Err(Error::UnsupportedDimension(
            "bounded-height enumeration runs in projective dimension 1 to 4".into(),
        ));
    }
    let pts = points_of_bounded_height(dim, b);
    let list: Vec<Value> = pts.iter().map(|p| Value::String(p.to_string())).collect();
    let mut human = format!("{} points of height <= {b} in P^{dim}\n", pts.len());
    for chunk in pts.chunks(8) {
        let row: Vec<String> = chunk.iter().map(|p| p.to_string()).collect();
        human.push_str(&format!("  {}\n", row.join("  ")));
    }
    Ok(ok_report(json!({ "bound": b, "count": pts.len(), "dim": dim, "points": list }), human))
}

// ==== fixtures ==============================================================

struct Fixture {
    name: &'static str,
    detail: String,
    pass: bool,
}

fn fixture(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> Fixture {
    match run() {
        Ok((pass, detail)) => Fixture { name, detail, pass },
        Err(e) => Fixture { name, detail: format!("error: {e}"), pass: false },
    }
}

fn run_fixtures() -> Result<Report> {
    use crate::endo::{make_proj_endo, symmetric_square};
    use crate::parse::{parse_poly, VarEnv};
    use crate::scalar::CoeffDomain;

    let env2 = VarEnv::affine(2);
    let rat = CoeffDomain::Rat;
    let cubic = job::endo_from_components(&[
        "x^3 - 3*x".to_string(),
        "y^3 + 3*y".to_string(),
    ])?;
    let quartic = job::endo_from_components(&[
        "1/2*x^4 + 1/2*y^4 - 6".to_string(),
        "1/2*x^3*y + 1/2*x*y^3".to_string(),
    ])?;
    let hyperbola = job::curve_from_text("x^2 - y^2 - 4")?;

    let mut results = Vec::new();

    results.push(fixture("cubic-pair: hyperbola invariant, gap 2", || {
        let inv = is_invariant(&hyperbola, &cubic)?;
        let gap = cubic.degree_gap();
        Ok((inv && gap == 2, format!("invariant {inv}, gap {gap}")))
    }));

    results.push(fixture("cubic-pair: two simple unramified points at infinity", || {
        let pts = infinity_points(&hyperbola)?;
        let g = restrict_infinity(&cubic);
        let mut labels = Vec::new();
        let mut ok = pts.len() == 2;
        for pt in &pts {
            match &pt.place {
                InfinityPlace::Rational(p) => {
                    let line = ProjPoint::new(p.coords()[1..].to_vec())?;
                    let e = ramification_index_p1(&g, &line)?;
                    ok &= pt.intersection == 1 && e == 1;
                    labels.push(format!("{p} i={} e={e}", pt.intersection));
                }
                InfinityPlace::Irreducible { .. } => ok = false,
            }
        }
        Ok((ok, labels.join(", ")))
    }));

    results.push(fixture("cubic-pair: full return set from (2, 0)", || {
        let start = vec![
            BigRational::from_integer(2.into()),
            BigRational::from_integer(0.into()),
        ];
        let rep = return_set(&cubic, &start, &hyperbola, 20)?;
        let all: Vec<u64> = (0..=20).collect();
        let ok = rep.indices == all && rep.decomposition == Some(vec![(0, 1)]);
        Ok((ok, format!("{} of 21 indices return", rep.indices.len())))
    }));

    results.push(fixture("cubic-pair: degree-gap condition fails", || {
        let v = condition_k(&cubic, 2)?;
        Ok((v.verdict == Verdict::Fails, format!("verdict {:?}", v.verdict)))
    }));

    results.push(fixture("quartic-pair: hyperbola invariant, gap 4", || {
        let inv = is_invariant(&hyperbola, &quartic)?;
        let gap = quartic.degree_gap();
        Ok((inv && gap == 4, format!("invariant {inv}, gap {gap}")))
    }));

    results.push(fixture("quartic-pair: max multiplicity 2 at infinity", || {
        let g = restrict_infinity(&quartic);
        let prof = crate::localalg::max_multiplicity_p1(&g)?;
        Ok((prof.max_index == 2, format!("max index {}", prof.max_index)))
    }));

    results.push(fixture("quartic-pair: degree-gap condition fails", || {
        let v = condition_k(&quartic, 2)?;
        Ok((v.verdict == Verdict::Fails, format!("verdict {:?}", v.verdict)))
    }));

    results.push(fixture("quotient square map: degree 4, max multiplicity 2", || {
        let envp = VarEnv::p1();
        let lattes = make_proj_endo(vec![
            parse_poly("(X^2 + Y^2)^2", &envp, rat)
                .or_else(|_| parse_poly("X^4 + 2*X^2*Y^2 + Y^4", &envp, rat))?,
            parse_poly("4*X^3*Y - 4*X*Y^3", &envp, rat)?,
        ])?;
        let prof = crate::localalg::max_multiplicity_p1(&lattes)?;
        let ok = lattes.degree() == 4 && prof.max_index == 2;
        Ok((ok, format!("degree {}, max index {}", lattes.degree(), prof.max_index)))
    }));

    results.push(fixture("symmetric square of the squaring map", || {
        let envp = VarEnv::p1();
        let g = make_proj_endo(vec![
            parse_poly("X^2", &envp, rat)?,
            parse_poly("Y^2", &envp, rat)?,
        ])?;
        let s = symmetric_square(&g)?;
        let env3 = VarEnv::custom(&["A", "B", "C"]);
        let expected = [
            parse_poly("A^2", &env3, rat)?,
            parse_poly("2*A*C - B^2", &env3, rat)?,
            parse_poly("C^2", &env3, rat)?,
        ];
        let ok = s.forms() == &expected[..];
        Ok((ok, s.forms().iter().map(|p| p.render(&["A", "B", "C"])).collect::<Vec<_>>().join(", ")))
    }));

    results.push(fixture("tangency length at the origin", || {
        let map = vec![
            parse_poly("2*y - x^2", &env2, rat)?,
            parse_poly("y^2", &env2, rat)?,
        ];
        let zero = vec![
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
        ];
        let res = multiplicity_at(&map, &zero, &zero)?;
        Ok((res.value == 4 && res.stabilized, format!("e = {}", res.value)))
    }));

    results.push(fixture("chain rule for local lengths", || {
        let f = [
            parse_poly("2*y - x^2", &env2, rat)?,
            parse_poly("y^2", &env2, rat)?,
        ];
        let g = [
            parse_poly("x^2", &env2, rat)?,
            parse_poly("y^2", &env2, rat)?,
        ];
        // g o f componentwise: g = (x^2, y^2) squares each component.
        let comp = [f[0].mul(&f[0]), f[1].mul(&f[1])];
        let zero = vec![
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
        ];
        let e_f = multiplicity_at(&f, &zero, &zero)?.value;
        let e_g = multiplicity_at(&g, &zero, &zero)?.value;
        let e_comp = multiplicity_at(&comp, &zero, &zero)?.value;
        Ok((
            e_comp == e_f * e_g,
            format!("e(f) = {e_f}, e(g) = {e_g}, e(g o f) = {e_comp}"),
        ))
    }));

    results.push(fixture("prime-field invariant curve", || {
        let f5 = crate::scalar::CoeffDomain::fp(5)?;
        let f = crate::endo::make_regular_endo(vec![
            parse_poly("x^5 + x^2*y^3 - y^5 - y^3", &env2, f5)?,
            parse_poly("y^5", &env2, f5)?,
        ])?;
        let c = PlaneCurve::new(parse_poly("x^2 - y^2 - 1", &env2, f5)?)?;
        let inv = is_invariant(&c, &f)?;
        Ok((inv && f.degree_gap() == 2, format!("invariant {inv}, gap {}", f.degree_gap())))
    }));

    let failures = results.iter().filter(|r| !r.pass).count();
    let mut human = String::new();
    for r in &results {
        human.push_str(&format!(
            "{}  {}  ({})\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        ));
    }
    human.push_str(&format!("{} of {} fixtures pass\n", results.len() - failures, results.len()));
    let json_results: Vec<Value> = results
        .iter()
        .map(|r| json!({ "detail": r.detail, "name": r.name, "pass": r.pass }))
        .collect();
    Ok(Report {
        json: json!({ "failures": failures, "results": json_results }),
        human,
        exit: if failures == 0 { 0 } else { 1 },
    })
}

// ==== entry =================================================================

fn dispatch(matches: &ArgMatches) -> CliResult<Report> {
    let (kind, sub) = matches.subcommand().expect("subcommand required");
    if kind == "fixtures" {
        return Ok(run_fixtures()?);
    }
    let spec = job_from_matches(kind, sub)?;
    Ok(execute(spec)?)
}

/// Entry point used by the `regdyn` binary; returns the process exit code.
pub fn cli_main() -> i32 {
    let matches = match build_command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            // Help and version requests are successful exits.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let json_mode = matches.get_flag("json");
    match dispatch(&matches) {
        Ok(report) => {
            if json_mode {
                println!("{}", report.json);
            } else {
                print!("{}", report.human);
            }
            report.exit
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            1
        }
    }
}
