//! Text, JSON and CSV rendering of command results.

use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use tanlie_core::families::ClaimValue;
use tanlie_core::harness::{ComparisonReport, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Every JSON document carries the tool version and the invocation.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub invocation: &'a [String],
    pub command: &'static str,
    pub result: T,
}

pub fn json<T: Serialize>(envelope: &Envelope<T>) -> Result<String> {
    Ok(serde_json::to_string_pretty(envelope)? + "\n")
}

/// `0.5 e - u1`; `0` for the zero vector.
pub fn combination(coords: &[f64], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, l) in coords.iter().zip(labels) {
        if *c == 0.0 {
            continue;
        }
        let (sign, mag) = if *c < 0.0 { ("-", -c) } else { ("+", *c) };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag == 1.0 {
            out.push_str(l);
        } else {
            let _ = write!(out, "{} {l}", num(mag));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e16)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn value_text(v: &ClaimValue) -> String {
    match v {
        ClaimValue::Scalar(s) => num(*s),
        ClaimValue::Vector(v) => format!(
            "[{}]",
            v.iter().map(|c| num(*c)).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn value_csv(v: &ClaimValue) -> String {
    v.coords()
        .iter()
        .map(|c| num(*c))
        .collect::<Vec<_>>()
        .join(";")
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}

pub fn report_text(r: &ComparisonReport, out: &mut String) {
    let name = r.instance.name.as_deref().unwrap_or("input");
    let _ = writeln!(out, "instance {name}: {}", r.instance.provenance);
    let _ = writeln!(
        out,
        "dimension {} (lifted {}), tolerance {:e}, seed {}",
        r.instance.dimension, r.instance.lifted_dimension, r.tolerance, r.seed
    );
    if let Some(cs) = &r.constant_sectional {
        let _ = writeln!(
            out,
            "constant sectional curvature: {} (value {}, max deviation {:e}, {} planes)",
            cs.is_constant, cs.value, cs.max_deviation, cs.planes
        );
    }
    out.push('\n');
    for e in &r.entries {
        let gate = match e.gating {
            tanlie_core::families::Gating::Required => "",
            tanlie_core::families::Gating::ReportOnly => " (report-only)",
        };
        let _ = write!(
            out,
            "{:<5} {} [{}]{gate} claimed {}",
            status_text(e.status),
            e.formula_id,
            e.argument_desc,
            value_text(&e.claimed)
        );
        match (&e.oracle, e.abs_diff, &e.error) {
            (Some(o), Some(d), _) => {
                let _ = writeln!(out, " oracle {} diff {d:e}", value_text(o));
            }
            (_, _, Some(err)) => {
                let _ = writeln!(out, " error: {err}");
            }
            _ => out.push('\n'),
        }
    }
    if !r.conflicts.is_empty() {
        let _ = writeln!(out, "\nconflicting claims:");
        for c in &r.conflicts {
            let oracle = c
                .oracle
                .as_ref()
                .map(value_text)
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "  {} [{}] claims {} ({}) vs {} [{}] claims {} ({}); oracle {oracle}",
                c.first.formula_id,
                c.first.argument_desc,
                value_text(&c.first.claimed),
                status_text(c.first.status),
                c.second.formula_id,
                c.second.argument_desc,
                value_text(&c.second.claimed),
                status_text(c.second.status),
            );
        }
    }
    let _ = writeln!(out, "\nsummary:");
    for (id, t) in &r.summary.per_formula {
        let _ = writeln!(
            out,
            "  {id:<18} pass {:>3}  fail {:>3}  error {:>3}",
            t.pass, t.fail, t.error
        );
    }
    let t = r.summary.total;
    let _ = writeln!(
        out,
        "total: pass {} fail {} error {}; required failures {}",
        t.pass, t.fail, t.error, r.summary.required_failures
    );
}

pub const CSV_HEADER: [&str; 9] = [
    "instance",
    "formula_id",
    "argument_desc",
    "space",
    "gating",
    "status",
    "claimed",
    "oracle",
    "abs_diff",
];

pub fn reports_csv(reports: &[ComparisonReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in reports {
        let name = r.instance.name.as_deref().unwrap_or("input");
        for e in &r.entries {
            let space = serde_json::to_value(e.space)?;
            let gating = serde_json::to_value(e.gating)?;
            let status = serde_json::to_value(e.status)?;
            w.write_record([
                name,
                &e.formula_id,
                &e.argument_desc,
                space.as_str().unwrap_or_default(),
                gating.as_str().unwrap_or_default(),
                status.as_str().unwrap_or_default(),
                &value_csv(&e.claimed),
                &e.oracle.as_ref().map(value_csv).unwrap_or_default(),
                &e.abs_diff.map(num).unwrap_or_default(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
