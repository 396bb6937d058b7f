use std::time::Instant;

use serde_json::Value;
use toric_core::bounds::bound_report;
use toric_core::code::{
    distance_bounds, min_distance_exhaustive, projective_count, reed_muller, rm_predicted_params, LinearCode, Method,
    AUTO_EXHAUSTIVE_LIMIT,
};
use toric_core::corpus::{self, golden, reproduce_row, ReproduceOptions, RowParams, RowStatus, TableId};
use toric_core::decoder::{self, Condition, DecodeStatus, SetupOptions};
use toric_core::toric_code::{hansen_fan, HansenCase};
use toric_core::{build, Divisor, Field, FieldElement, ToricCodeSpec};

use crate::job::{self, BoundsSpec, CodeFile, Input, JobSpec};
use crate::output::{self, Format, Record};
use crate::CliError;

fn indices(v: &[FieldElement]) -> Vec<u16> {
    v.iter().map(|x| x.0).collect()
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

/// The geometric description behind an input file.
fn toric_input(input: &Input) -> Result<(ToricCodeSpec, Option<&JobSpec>), CliError> {
    match input {
        Input::Job(job) => Ok((job.toric_spec()?, Some(job))),
        Input::Code(cf) => cf
            .toric_spec()
            .map(|r| r.map(|s| (s, None)))
            .unwrap_or_else(|| Err(CliError::Validation("code file has no fan/divisor block".into()))),
    }
}

pub fn cmd_build(path: &str, out: Option<&str>, format: Format) -> Result<String, CliError> {
    let Input::Job(job) = job::read_input(path)? else {
        return Err(CliError::Validation(format!("{path}: expected a job spec, found a code file")));
    };
    let tc = build(job.toric_spec()?).map_err(compute)?;
    let file = CodeFile::from_code(&job, &tc);
    let text = job::to_toml(&file);
    let Some(out) = out else { return Ok(text) };
    std::fs::write(out, &text).map_err(|e| compute(format!("{out}: {e}")))?;
    let mut r = Record::new();
    r.push("n", tc.n())
        .push("k", tc.k())
        .push("kc", tc.kc)
        .push("injective", tc.injective)
        .push("warnings", tc.warnings.clone())
        .push("output", out);
    Ok(output::record(&r, format))
}

fn linear_code(input: &Input) -> Result<LinearCode, CliError> {
    match input {
        Input::Job(job) => Ok(build(job.toric_spec()?).map_err(compute)?.code),
        Input::Code(cf) => cf.linear_code(),
    }
}

pub fn parse_method(s: &str) -> Result<Method, CliError> {
    match s {
        "auto" => Ok(Method::Auto),
        "exhaustive" => Ok(Method::Exhaustive),
        "infoset" | "information-set" => Ok(Method::InfoSet),
        other => Err(CliError::Validation(format!(
            "mindist.method: unknown method {other:?}; expected auto, exhaustive or infoset"
        ))),
    }
}

/// Distance search honouring the chosen engine. Exhaustive search refuses to
/// run past the cap; the information-set engine reports a certified interval.
pub fn distance_record(code: &LinearCode, method: Method, work_cap: u64) -> Result<Record, CliError> {
    if code.k() == 0 {
        return Err(compute("empty code"));
    }
    let exhaustive = match method {
        Method::Exhaustive => true,
        Method::InfoSet => false,
        Method::Auto => projective_count(code.field().order(), code.k()) <= AUTO_EXHAUSTIVE_LIMIT,
    };
    let mut r = Record::new();
    r.push("n", code.n()).push("k", code.k());
    if exhaustive {
        let w = min_distance_exhaustive(code, work_cap).map_err(compute)?;
        r.push("d", w.d)
            .push("lower", w.d)
            .push("upper", w.d)
            .push("exact", true)
            .push("method", w.method.to_string())
            .push("work", w.work)
            .push("witness", indices(&w.witness));
    } else {
        let s = distance_bounds(code, work_cap).map_err(compute)?;
        r.push("d", if s.exact { Value::from(s.lower) } else { Value::Null })
            .push("lower", s.lower)
            .push("upper", s.upper)
            .push("exact", s.exact)
            .push("method", "information-set")
            .push("work", s.work)
            .push("witness", s.witness.as_deref().map(indices).unwrap_or_default());
    }
    Ok(r)
}

pub fn cmd_mindist(path: &str, method: Option<Method>, work_cap: Option<u64>, format: Format) -> Result<String, CliError> {
    let input = job::read_input(path)?;
    let block = match &input {
        Input::Job(j) => j.mindist.clone().unwrap_or_default(),
        Input::Code(_) => Default::default(),
    };
    let method = match (method, &block.method) {
        (Some(m), _) => m,
        (None, Some(s)) => parse_method(s)?,
        (None, None) => Method::Auto,
    };
    let cap = work_cap.or(block.work_cap).unwrap_or(toric_core::code::DEFAULT_WORK_CAP);
    let code = linear_code(&input)?;
    Ok(output::record(&distance_record(&code, method, cap)?, format))
}

/// Workers requested inside the input file, used when no flag is given.
pub fn file_workers(path: &str) -> Option<usize> {
    match job::read_input(path).ok()? {
        Input::Job(j) => j.mindist.and_then(|m| m.workers),
        Input::Code(_) => None,
    }
}

/// Corpus rows built from the same fan, divisor and field, on the torus.
fn table_refs(spec: &ToricCodeSpec) -> Vec<String> {
    let torus = spec.points().len() == ((spec.field().order() - 1) as usize).pow(2)
        && spec.points().iter().all(|p| matches!(p, toric_core::EvalPoint::Torus { .. }));
    if !torus {
        return Vec::new();
    }
    let q = spec.field().order();
    let mut out = Vec::new();
    for t in TableId::ALL {
        for row in golden(t).iter().filter(|r| r.q == q) {
            let (rays, div) = match &row.params {
                RowParams::Divisor(d) => match t.fan() {
                    Some(f) => (f.rays().to_vec(), d.clone()),
                    None => continue,
                },
                RowParams::HansenB { a } => match hansen_fan(HansenCase::B, *a, 0, 0) {
                    Ok((f, d)) => (f.rays().to_vec(), d.coeffs),
                    Err(_) => continue,
                },
                RowParams::ReedMuller { .. } => continue,
            };
            if rays == spec.fan().rays() && div == spec.divisor().coeffs {
                let note = if row.note.is_empty() { String::new() } else { format!(" ({})", row.note) };
                out.push(format!("{t} q={} {}: ({},{},{}){note}", row.q, row.params, row.n, row.k, row.d));
            }
        }
    }
    out
}

pub fn cmd_bounds(path: &str, method: Option<Method>, work_cap: Option<u64>, format: Format) -> Result<String, CliError> {
    let input = job::read_input(path)?;
    let toggles = match &input {
        Input::Job(j) => j.bounds.clone().unwrap_or_default(),
        Input::Code(_) => BoundsSpec::default(),
    };
    let (spec, _) = toric_input(&input)?;
    let tc = build(spec).map_err(compute)?;
    let opts = ReproduceOptions {
        method: method.unwrap_or(Method::Auto),
        work_cap: work_cap.unwrap_or(toric_core::code::DEFAULT_WORK_CAP),
    };
    let (lo, hi, engine, _) = corpus::distance_interval(&tc.code, opts);
    let b = bound_report(&tc, lo, hi).map_err(compute)?;
    let mut r = Record::new();
    r.push("q", b.q)
        .push("n", b.n)
        .push("k", b.k)
        .push("d_lower", b.d_lower)
        .push("d_upper", b.d_upper)
        .push("method", engine.to_string())
        .push("singleton_defect", b.singleton_defect);
    if toggles.segment {
        r.push("segment_upper", b.segment_upper);
    }
    if toggles.gv {
        r.push("gv_rate", b.gv_rate).push("rate", b.k as f64 / b.n as f64).push("beats_gv", b.beats_gv);
    }
    if toggles.conjectures {
        match &b.conj1 {
            Some(c) => r.push("conj1_n", c.n_value).push("conj1_lower", c.lower_bound.to_string()),
            None => r.push("conj1_n", Value::Null).push("conj1_lower", Value::Null),
        };
        r.push("conj2_k", b.conj2.predicted_k)
            .push("conj2_lower", b.conj2.lower_bound)
            .push("conj2_applicable", b.conj2.applicable);
    }
    r.push("table_ref", table_refs(&tc.spec).join("; "));
    Ok(output::record(&r, format))
}

fn condition_name(c: Condition) -> &'static str {
    match c {
        Condition::Verified => "verified",
        Condition::Violated => "violated",
        Condition::Unverified => "unverified",
    }
}

pub fn cmd_decode(
    path: &str,
    received: &str,
    gprime: Option<Vec<i64>>,
    work_cap: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    let input = job::read_input(path)?;
    let (spec, job) = toric_input(&input)?;
    let block = job.and_then(|j| j.decoder.clone());
    let gprime = match (gprime, &block) {
        (Some(g), _) => g,
        (None, Some(b)) => b.gprime.clone(),
        (None, None) => return Err(CliError::Validation("decoder.gprime: not given in the file or by --gprime".into())),
    };
    if gprime.len() != spec.fan().len() {
        return Err(CliError::Validation(format!(
            "decoder.gprime: has {} coefficients but the fan has {} rays",
            gprime.len(),
            spec.fan().len()
        )));
    }
    let defaults = SetupOptions::default();
    let opts = SetupOptions {
        work_cap: work_cap.or(block.as_ref().and_then(|b| b.work_cap)).unwrap_or(defaults.work_cap),
        list_cap: block.as_ref().and_then(|b| b.list_cap).unwrap_or(defaults.list_cap),
    };
    let field: Field = spec.field().clone();
    let r = job::read_vector(received, &field, spec.points().len())?;
    let setup = decoder::setup(&spec, &Divisor::new(gprime), opts).map_err(compute)?;
    let out = setup.decode(&r).map_err(compute)?;

    let mut rec = Record::new();
    let status = match &out.status {
        DecodeStatus::Unique => "unique".to_string(),
        DecodeStatus::List => "list".to_string(),
        DecodeStatus::Fail(why) => format!("fail: {why}"),
    };
    rec.push("status", status)
        .push("n", setup.n())
        .push("radius", setup.radius())
        .push("zero_cap", setup.zero_cap)
        .push("condition_c", condition_name(setup.condition_c))
        .push("locator", out.locator.as_deref().map(indices))
        .push("zero_set", out.zero_set.clone())
        .push("within_zero_cap", out.within_zero_cap)
        .push("candidates", out.errors.len());
    for (i, e) in out.errors.iter().enumerate() {
        rec.push(&format!("error_{}", i + 1), indices(e));
    }
    if out.status == DecodeStatus::Unique {
        let c: Vec<FieldElement> = r.iter().zip(&out.errors[0]).map(|(&x, &e)| field.sub(x, e)).collect();
        rec.push("corrected", indices(&c));
    }
    Ok(output::record(&rec, format))
}

fn parse_tables(name: &str) -> Result<Vec<TableId>, CliError> {
    if name == "all" {
        return Ok(TableId::ALL.to_vec());
    }
    name.parse::<TableId>().map(|t| vec![t]).map_err(CliError::Validation)
}

pub fn cmd_reproduce(name: &str, method: Option<Method>, work_cap: Option<u64>, format: Format) -> Result<String, CliError> {
    let tables = parse_tables(name)?;
    let opts = ReproduceOptions {
        method: method.unwrap_or(Method::Auto),
        work_cap: work_cap.unwrap_or(toric_core::code::DEFAULT_WORK_CAP),
    };
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let mut counts = [0usize; 4];
    for t in tables {
        for g in golden(t) {
            let (res, _) = reproduce_row(t, &g, opts).map_err(compute)?;
            let d = if res.exact() { res.d_lower.to_string() } else { format!("{}..{}", res.d_lower, res.d_upper) };
            let status = match &res.status {
                RowStatus::Match => {
                    counts[0] += 1;
                    "match".to_string()
                }
                RowStatus::BoundOnly => {
                    counts[1] += 1;
                    "bound-only".to_string()
                }
                RowStatus::Flagged => {
                    counts[2] += 1;
                    format!("flagged: {}", g.flag.unwrap_or_default())
                }
                RowStatus::Mismatch(why) => {
                    counts[3] += 1;
                    mismatches.push(format!("{t} q={} {}: {why}", g.q, g.params));
                    format!("mismatch: {why}")
                }
            };
            let mut r = Record::new();
            r.push("table", t.name())
                .push("q", g.q)
                .push("params", g.params.to_string())
                .push("n", res.n)
                .push("k", res.k)
                .push("d", d)
                .push("golden", format!("({},{},{})", g.n, g.k, g.d))
                .push("method", res.method.to_string())
                .push("work", res.work)
                .push("status", status)
                .push("note", g.note);
            rows.push(r);
        }
    }
    eprintln!(
        "{} rows: {} match, {} bound-only, {} flagged, {} mismatch ({:.1}s)",
        rows.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        start.elapsed().as_secs_f64()
    );
    let text = output::table(&rows, format);
    if mismatches.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Mismatch(mismatches.join("\n")))
    }
}

pub fn cmd_rm(q: u32, m: u32, l: u32, distance: bool, work_cap: Option<u64>, format: Format) -> Result<String, CliError> {
    let field = Field::with_order(q).map_err(|e| CliError::Validation(format!("q: {e}")))?;
    let predicted = rm_predicted_params(q, m, l).map_err(|e| CliError::Validation(format!("l: {e}")))?;
    let code = reed_muller(&field, m, l).map_err(|e| CliError::Validation(e.to_string()))?;
    let mut r = Record::new();
    r.push("q", q).push("m", m).push("l", l).push("n", code.n()).push("k", code.k());
    let mut agree = code.n() as u64 == predicted.n && code.k() as u64 == predicted.k;
    if distance {
        let dr = distance_record(&code, Method::Auto, work_cap.unwrap_or(toric_core::code::DEFAULT_WORK_CAP))?;
        let d = dr.0.iter().find(|(k, _)| k == "d").map(|(_, v)| v.clone()).unwrap_or(Value::Null);
        if let Some(d) = d.as_u64() {
            agree &= d == predicted.d;
        }
        r.push("d", d);
    }
    r.push("predicted_n", predicted.n)
        .push("predicted_k", predicted.k)
        .push("predicted_d", predicted.d)
        .push("agree", agree);
    let text = output::record(&r, format);
    if agree {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Mismatch("constructed parameters differ from the closed form".into()))
    }
}
