use serde::Serialize;
use serde_json::{json, Map, Value};

use crs_core::arith::{jordan_totient, klee_phi, sigma, tau_s, RealApprox};
use crs_core::correlation::{
    admissible_diagonal, admissible_shifted, correlate, decade_checkpoints, jordan_correlation_constant,
    predicted_shifted, sigma_correlation_constant, verify_lemma_bounds, write_records_csv, CorrelationReport,
    FunctionDescriptor, Lemma, LemmaGrid, Shifts,
};
use crs_core::crs::{crs_direct, crs_exact, crs_fast, CrsParams};
use crs_core::expansion::{eval_euler_product, eval_truncated, extract_coeff, CoefficientFamily, TabulatedFunction};
use crs_core::verify::{run_suite, Suite};
use crs_core::Scalar;

use crate::args::*;
use crate::config::RunConfig;
use crate::error::CliError;

/// What a command produced, in every output format.
pub struct Output {
    pub result: Value,
    pub csv: Option<String>,
    pub plain: String,
    /// A verification did not hold; exit 1.
    pub failed: bool,
}

impl Output {
    fn new(result: Value, plain: String) -> Self {
        Self {
            result,
            csv: None,
            plain,
            failed: false,
        }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn int(v: i128, exact: bool) -> Value {
    match i64::try_from(v) {
        Ok(x) if !exact => json!(x),
        _ => Value::String(v.to_string()),
    }
}

fn uint(v: u128, exact: bool) -> Value {
    match u64::try_from(v) {
        Ok(x) if !exact => json!(x),
        _ => Value::String(v.to_string()),
    }
}

fn scalar<T: Scalar>(v: &T, exact: bool) -> Value {
    let real = v.to_real();
    if exact || !real.is_finite() {
        Value::String(if exact { v.to_literal() } else { real.to_string() })
    } else {
        json!(real)
    }
}

fn approx(v: &RealApprox) -> Value {
    json!({ "value": v.value, "abs_error_bound": v.abs_error_bound })
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Usage(e.to_string()))
}

fn csv_rows(headers: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Core(crs_core::Error::Io(e.to_string()));
    w.write_record(headers).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Table(a) => table(a),
        Command::Totient(a) => totient(a),
        Command::Expand { command } => match command {
            ExpandCommand::Eval(a) if a.exact => expand_eval::<num_rational::BigRational>(a),
            ExpandCommand::Eval(a) => expand_eval::<f64>(a),
            ExpandCommand::Coeffs(a) if a.exact => expand_coeffs::<num_rational::BigRational>(a),
            ExpandCommand::Coeffs(a) => expand_coeffs::<f64>(a),
            ExpandCommand::Extract(a) if a.exact => expand_extract::<num_rational::BigRational>(a),
            ExpandCommand::Extract(a) => expand_extract::<f64>(a),
        },
        Command::Correlate(a) => correlate_cmd(a),
        Command::Constants(a) => constants(a),
        Command::Lemmas(a) => lemmas(a),
        Command::Verify(a) => verify(a),
        Command::Replay(a) => replay(a),
    }
}

fn eval(a: &EvalArgs) -> Result<Output, CliError> {
    let p = CrsParams::new(a.r, a.s)?;
    let n = Value::String(a.n.to_string());
    Ok(match a.method {
        CrsMethod::Exact | CrsMethod::Fast => {
            let v = if a.method == CrsMethod::Exact { crs_exact(&p, a.n)? } else { crs_fast(&p, a.n)? };
            Output::new(json!({ "r": a.r, "s": a.s, "n": n, "value": int(v, false) }), v.to_string())
        }
        CrsMethod::Direct => {
            let v = crs_direct(&p, a.n)?;
            Output::new(
                json!({ "r": a.r, "s": a.s, "n": n, "value": v.value, "abs_error_bound": v.abs_error_bound }),
                format!("{} +- {:e}", v.value, v.abs_error_bound),
            )
        }
    })
}

fn table(a: &TableArgs) -> Result<Output, CliError> {
    if a.r_max == 0 {
        return Err(crs_core::Error::ZeroArgument("r-max").into());
    }
    let mut rows = Vec::new();
    let mut plain = String::new();
    for r in 1..=a.r_max {
        let p = CrsParams::new(r, a.s)?;
        let values = (0..=a.n_max as u128).map(|n| crs_exact(&p, n)).collect::<Result<Vec<_>, _>>()?;
        plain.push_str(&format!(
            "r={r}: {}\n",
            values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        ));
        rows.extend(values.into_iter().enumerate().map(|(n, v)| (r, n as u64, v)));
    }
    let json_rows: Vec<Value> = rows.iter().map(|&(r, n, v)| json!({ "r": r, "n": n, "value": int(v, false) })).collect();
    let csv = csv_rows(&["r", "n", "value"], rows.iter().map(|(r, n, v)| vec![r.to_string(), n.to_string(), v.to_string()]))?;
    Ok(Output::new(json!({ "s": a.s, "rows": json_rows }), plain.trim_end().to_string()).with_csv(csv))
}

fn totient(a: &TotientArgs) -> Result<Output, CliError> {
    let (value, plain) = match a.kind {
        TotientKind::Jordan => {
            let v = jordan_totient(a.s, a.n)?;
            (uint(v, a.exact), v.to_string())
        }
        TotientKind::Klee => {
            let v = klee_phi(a.s, a.n)?;
            (uint(v as u128, a.exact), v.to_string())
        }
        TotientKind::TauS => {
            let v = tau_s(a.s, a.n)?;
            (uint(v as u128, a.exact), v.to_string())
        }
        TotientKind::Sigma => {
            let v = sigma(a.t, a.n)?;
            (scalar(&v, a.exact), if a.exact { v.to_literal() } else { v.to_real().to_string() })
        }
    };
    let mut result = json!({ "kind": a.kind, "s": a.s, "n": a.n, "value": value });
    if a.kind == TotientKind::Sigma {
        result["t"] = json!(a.t);
    }
    Ok(Output::new(result, plain))
}

fn expand_eval<T: Scalar>(a: &ExpandEvalArgs) -> Result<Output, CliError> {
    let family = CoefficientFamily::<T>::parse(&a.family, a.s)?;
    Ok(match a.method {
        ExpandMethod::Truncated => {
            let e = eval_truncated(&family, a.n, a.rank)?;
            Output::new(
                json!({
                    "family": family.describe(),
                    "s": a.s,
                    "n": a.n,
                    "rank": a.rank,
                    "partial_sum": scalar(&e.partial_sum, a.exact),
                    "tail_bound": e.tail_bound,
                }),
                match e.tail_bound {
                    Some(t) => format!("{} +- {t:e}", e.partial_sum.to_literal()),
                    None => e.partial_sum.to_literal(),
                },
            )
        }
        ExpandMethod::EulerProduct => {
            let v = eval_euler_product(&family, a.n, a.prime_cutoff)?;
            let mut result = approx(&v);
            result["family"] = json!(family.describe());
            result["s"] = json!(a.s);
            result["n"] = json!(a.n);
            result["prime_cutoff"] = json!(a.prime_cutoff);
            Output::new(result, format!("{} +- {:e}", v.value, v.abs_error_bound))
        }
    })
}

fn expand_coeffs<T: Scalar>(a: &ExpandCoeffsArgs) -> Result<Output, CliError> {
    let family = CoefficientFamily::<T>::parse(&a.family, a.s)?;
    let coeffs = (1..=a.r_max).map(|r| family.coeff(r)).collect::<Result<Vec<T>, _>>()?;
    let rows: Vec<Value> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| json!({ "r": i + 1, "coeff": scalar(c, a.exact) }))
        .collect();
    let plain = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{} {}", i + 1, c.to_literal()))
        .collect::<Vec<_>>()
        .join("\n");
    let csv = csv_rows(&["r", "coeff"], coeffs.iter().enumerate().map(|(i, c)| vec![(i + 1).to_string(), c.to_literal()]))?;
    Ok(Output::new(json!({ "family": family.describe(), "s": a.s, "coefficients": rows }), plain).with_csv(csv))
}

fn expand_extract<T: Scalar>(a: &ExpandExtractArgs) -> Result<Output, CliError> {
    let table = TabulatedFunction::<T>::read_csv_path(&a.input)?;
    let v = extract_coeff(table.values(), a.s, a.r, a.x)?;
    Ok(Output::new(
        json!({ "s": a.s, "r": a.r, "x": a.x, "coeff": scalar(&v, a.exact) }),
        v.to_literal(),
    ))
}

fn correlate_cmd(a: &CorrelateArgs) -> Result<Output, CliError> {
    let f = FunctionDescriptor::parse(&a.f)?;
    let g = FunctionDescriptor::parse(&a.g)?;
    let families = (f.family(a.s)?, g.family(a.s)?);
    let (predicted, admissible) = match (a.constant, &families) {
        (Some(c), _) => (RealApprox::exact(c), None),
        (None, (Some(ff), Some(gf))) => {
            let ok = if a.h == 0 { admissible_diagonal(ff, gf) } else { admissible_shifted(ff, gf) };
            (predicted_shifted(ff, gf, a.h, a.rank)?, Some(ok))
        }
        (None, _) => {
            return Err(CliError::Usage(format!(
                "no expansion with s = {} is known for `{}` or `{}`; pass --constant",
                a.s, a.f, a.g
            )))
        }
    };
    let checkpoints = if a.checkpoints.is_empty() { decade_checkpoints(a.n) } else { a.checkpoints.clone() };
    let sums = correlate(&f, &g, a.h, a.n, &checkpoints)?;
    let report = CorrelationReport::new(&sums, predicted);
    let mut result = Map::new();
    result.insert("theorem".into(), json!(if a.h == 0 { "diagonal" } else { "shifted" }));
    result.insert("f".into(), json!(f.to_string()));
    result.insert("g".into(), json!(g.to_string()));
    result.insert("admissible".into(), json!(admissible));
    if let Value::Object(fields) = to_value(&report)? {
        result.extend(fields);
    }
    let plain = std::iter::once(format!(
        "sum = {}, predicted constant = {}, ratio = {}",
        report.empirical, report.predicted_constant.value, report.ratio
    ))
    .chain(report.trace.iter().map(|t| format!("N={} ratio={}", t.n, t.ratio)))
    .collect::<Vec<_>>()
    .join("\n");
    let csv = csv_rows(&["N", "ratio"], report.trace.iter().map(|t| vec![t.n.to_string(), t.ratio.to_string()]))?;
    Ok(Output::new(Value::Object(result), plain).with_csv(csv))
}

fn constants(a: &ConstantsArgs) -> Result<Output, CliError> {
    let v = match a.which {
        Which::Cor1 => sigma_correlation_constant(a.s, a.a, a.b, a.m)?,
        Which::Cor2 => {
            let integral = |x: f64| (x.fract() == 0.0 && x >= 0.0 && x <= u32::MAX as f64).then_some(x as u32);
            match (integral(a.a), integral(a.b)) {
                (Some(x), Some(y)) => jordan_correlation_constant(a.s, x, y, a.m, a.prime_cutoff)?,
                _ => return Err(CliError::Usage("cor2 needs integer a and b".into())),
            }
        }
    };
    let mut result = approx(&v);
    result["which"] = json!(a.which);
    Ok(Output::new(result, format!("{}", v.value)))
}

fn lemmas(a: &LemmasArgs) -> Result<Output, CliError> {
    let lemma: Lemma = a.lemma.parse()?;
    let mut grid = LemmaGrid::default_for(lemma);
    grid.r_max = a.r_max;
    grid.k_max = a.k_max;
    grid.s_values = a.s.clone();
    if a.all_shifts {
        grid.shifts = Shifts::UpToN;
    } else if !a.h.is_empty() {
        grid.shifts = Shifts::List(a.h.clone());
    }
    if !a.n.is_empty() {
        grid.n_values = a.n.clone();
    }
    let records = verify_lemma_bounds(lemma, &grid)?;
    let violations = records.iter().filter(|r| !r.satisfied).count();
    let max_ratio = records.iter().map(|r| r.residual_ratio).fold(0.0, f64::max);
    let mut csv = Vec::new();
    write_records_csv(&records, &mut csv)?;
    let plain = format!(
        "{lemma}: {} cells, {violations} violations, max measured/allowed {max_ratio}",
        records.len()
    );
    let mut out = Output::new(
        json!({
            "lemma": lemma,
            "grid": to_value(&grid)?,
            "cells": records.len(),
            "violations": violations,
            "max_residual_ratio": max_ratio,
            "records": to_value(&records)?,
        }),
        plain,
    )
    .with_csv(String::from_utf8(csv).map_err(|e| CliError::Usage(e.to_string()))?);
    out.failed = lemma != Lemma::Lem2 && violations > 0;
    Ok(out)
}

fn verify(a: &VerifyArgs) -> Result<Output, CliError> {
    let suite: Suite = a.suite.parse()?;
    let outcomes = run_suite(suite);
    let passed = outcomes.iter().all(|o| o.passed);
    let plain = outcomes
        .iter()
        .flat_map(|o| std::iter::once(o.to_string()).chain(o.log.iter().map(|l| format!("    {l}"))))
        .collect::<Vec<_>>()
        .join("\n");
    let csv = csv_rows(
        &["id", "name", "passed", "detail"],
        outcomes
            .iter()
            .map(|o| vec![o.id.clone(), o.name.clone(), o.passed.to_string(), o.detail.clone()]),
    )?;
    let mut out = Output::new(json!({ "suite": suite, "passed": passed, "outcomes": to_value(&outcomes)? }), plain)
        .with_csv(csv);
    out.failed = !passed;
    Ok(out)
}

/// Drops wall-clock fields, which legitimately differ between runs.
fn without_timing(v: &Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| k.as_str() != "elapsed_secs")
                .map(|(k, v)| (k.clone(), without_timing(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(without_timing).collect()),
        other => other.clone(),
    }
}

fn replay(a: &ReplayArgs) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(&a.report)?;
    let report: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("report is not JSON: {e}")))?;
    let config: RunConfig = serde_json::from_value(report["config"].clone())
        .map_err(|e| CliError::Usage(format!("report has no usable config echo: {e}")))?;
    if config.command == "replay" {
        return Err(CliError::Usage("refusing to replay a replay".into()));
    }
    let argv = config.to_argv()?;
    let cli = <Cli as clap::Parser>::try_parse_from(&argv).map_err(|e| CliError::Usage(e.to_string()))?;
    let rerun = execute(&cli.command)?;
    let reproduced = without_timing(&rerun.result) == without_timing(&report["result"]);
    let mut out = Output::new(
        json!({ "command": config.command, "argv": argv, "reproduced": reproduced }),
        format!("{} {}", config.command, if reproduced { "reproduced" } else { "differs" }),
    );
    out.failed = !reproduced;
    Ok(out)
}
