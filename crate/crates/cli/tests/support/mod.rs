#![allow(dead_code)]

pub mod brute;

use std::path::PathBuf;
use std::process::{Command, Output};

use serde::{Deserialize, Serialize};
use tanlie_core::families::Space;
use tanlie_core::harness::{ComparisonReport, FamilySpec};
use tanlie_core::{lifted_connection_closed_form, tangent_lift, LiftIndexing, Vector};

use brute::Brute;

pub const TOL: f64 = 1e-9;
pub const SEED: u64 = 0;

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_path(name: &str) -> PathBuf {
    workspace_root()
        .join("fixtures")
        .join(format!("{name}.json"))
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

pub fn tanlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanlie"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub formula_id: String,
    pub argument_desc: String,
    pub oracle: Option<Vec<f64>>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub fixture: String,
    pub tolerance: f64,
    pub seed: u64,
    pub entries: Vec<GoldenEntry>,
}

fn status(claimed: &[f64], oracle: Option<&[f64]>) -> String {
    match oracle {
        None => "error".into(),
        Some(o) => {
            let diff = claimed
                .iter()
                .zip(o)
                .fold(0.0f64, |m, (c, o)| m.max((c - o).abs()));
            if diff <= TOL { "pass" } else { "fail" }.into()
        }
    }
}

/// Oracle values and verdicts for every entry of the suite, computed with
/// the brute-force reference instead of the library's geometry.
pub fn golden_for(name: &str, spec: &FamilySpec) -> Golden {
    let base = spec.build().expect("fixture builds");
    let lifted = tangent_lift(&base).expect("lift");
    let brute_base = Brute::from_algebra(&base);
    let brute_lift = brute_base.lift();
    let ix = LiftIndexing::new(base.dim());
    let closed = lifted_connection_closed_form(&base).expect("closed form");
    let m = lifted.dim();

    let mut entries = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let oracle = brute_lift.nabla(&Vector::basis(m, i), &Vector::basis(m, j));
            let (ki, _) = ix.split(i);
            let (kj, _) = ix.split(j);
            entries.push(GoldenEntry {
                formula_id: format!("E4.nabla_x{}_y{}", ki.suffix(), kj.suffix()),
                argument_desc: format!("{}, {}", lifted.labels()[i], lifted.labels()[j]),
                status: status(closed.pair(i, j), Some(&oracle)),
                oracle: Some(oracle),
            });
        }
    }
    for c in spec.closed_forms(SEED).expect("claims").claims {
        let reference = match c.space {
            Space::Base => &brute_base,
            Space::Lifted => &brute_lift,
        };
        let oracle = reference.evaluate(&c.query);
        entries.push(GoldenEntry {
            formula_id: c.formula_id.clone(),
            argument_desc: c.argument_desc.clone(),
            status: status(c.value.coords(), oracle.as_deref()),
            oracle,
        });
    }
    Golden {
        fixture: name.to_string(),
        tolerance: TOL,
        seed: SEED,
        entries,
    }
}

/// Differences between a report and its golden file; empty when they agree.
pub fn golden_mismatches(report: &ComparisonReport, golden: &Golden) -> Vec<String> {
    let mut out = Vec::new();
    if report.entries.len() != golden.entries.len() {
        out.push(format!(
            "{} entries in report, {} in golden file",
            report.entries.len(),
            golden.entries.len()
        ));
        return out;
    }
    for (e, g) in report.entries.iter().zip(&golden.entries) {
        let at = format!("{} [{}]", g.formula_id, g.argument_desc);
        if e.formula_id != g.formula_id || e.argument_desc != g.argument_desc {
            out.push(format!(
                "{at}: report has {} [{}]",
                e.formula_id, e.argument_desc
            ));
            continue;
        }
        let status = serde_json::to_value(e.status).unwrap();
        if status.as_str() != Some(g.status.as_str()) {
            out.push(format!("{at}: status {status} vs golden {}", g.status));
        }
        match (&e.oracle, &g.oracle) {
            (Some(o), Some(go)) => {
                let diff = o
                    .coords()
                    .iter()
                    .zip(go)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                if o.coords().len() != go.len() || !(diff <= TOL) {
                    out.push(format!("{at}: oracle differs from golden by {diff:e}"));
                }
            }
            (None, None) => {}
            _ => out.push(format!("{at}: oracle presence differs from golden")),
        }
    }
    out
}
