mod input;
mod render;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tanlie_core::geometry::constant_sectional_check;
use tanlie_core::harness::{
    classify, fixtures, run_paper_suite, ComparisonReport, FamilySpec, FixtureInstance,
};
use tanlie_core::{tangent_lift, Geometry, Tolerances, Validation};

use input::{read_spec, Input};
use render::{combination, Envelope, Format};

#[derive(Parser)]
#[command(
    name = "tanlie",
    version,
    about = "Left-invariant geometry of Lie algebras and their tangent lifts"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Absolute tolerance for claim comparisons.
    #[arg(long, global = true, default_value_t = Tolerances::default().cmp)]
    tol: f64,
    /// Seed for sampled planes and directions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Jacobi residual bound, relative to the squared largest constant.
    #[arg(long, global = true, default_value_t = Tolerances::default().jacobi)]
    tol_jacobi: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, labels and validation verdict.
    Describe { spec: PathBuf },
    /// Levi-Civita connection on basis pairs.
    Connection { spec: PathBuf },
    /// Curvature tensor, sectional curvatures or Ricci tensor.
    Curvature {
        spec: PathBuf,
        #[arg(long, conflicts_with = "ricci")]
        sectional: bool,
        #[arg(long)]
        ricci: bool,
    },
    /// Write the tangent lift as a generic spec.
    Lift {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every closed-form claim against the computed geometry.
    Verify {
        #[arg(
            required_unless_present = "all_fixtures",
            conflicts_with = "all_fixtures"
        )]
        spec: Option<PathBuf>,
        /// Verify every built-in fixture; generic ones are skipped.
        #[arg(long)]
        all_fixtures: bool,
    },
    /// Write the built-in fixtures as spec files.
    Fixtures {
        /// Target directory, created if missing.
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Describe { .. } => "describe",
            Command::Connection { .. } => "connection",
            Command::Curvature { .. } => "curvature",
            Command::Lift { .. } => "lift",
            Command::Verify { .. } => "verify",
            Command::Fixtures { .. } => "fixtures",
        }
    }
}

/// Rendered output plus the exit code it implies.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

struct Ctx<'a> {
    global: &'a Global,
    invocation: Vec<String>,
    command: &'static str,
}

impl Ctx<'_> {
    fn json<T: Serialize>(&self, result: T) -> Result<String> {
        render::json(&Envelope {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            invocation: &self.invocation,
            command: self.command,
            result,
        })
    }

    fn no_csv(&self) -> Result<()> {
        if self.global.format == Format::Csv {
            bail!("--format csv is only available for verify");
        }
        Ok(())
    }

    fn spec(&self, path: &Path) -> Result<Input> {
        read_spec(path, self.global.tol_jacobi)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation: Vec<String> = std::iter::once("tanlie".to_string())
        .chain(std::env::args().skip(1))
        .collect();
    let ctx = Ctx {
        global: &cli.global,
        invocation,
        command: cli.command.name(),
    };
    match run(&ctx, &cli.command).and_then(|o| emit(&cli.global, o)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(global: &Global, outcome: Outcome) -> Result<u8> {
    match &global.output {
        Some(path) => std::fs::write(path, &outcome.text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(outcome.text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other.context("cannot write to standard output")?,
            }
        }
    }
    Ok(outcome.code)
}

fn run(ctx: &Ctx, command: &Command) -> Result<Outcome> {
    match command {
        Command::Describe { spec } => describe(ctx, spec),
        Command::Connection { spec } => connection(ctx, spec),
        Command::Curvature {
            spec,
            sectional,
            ricci,
        } => curvature(ctx, spec, *sectional, *ricci),
        Command::Lift { spec, out } => lift(ctx, spec, out.as_deref()),
        Command::Verify { spec, all_fixtures } => {
            if *all_fixtures {
                verify_fixtures(ctx)
            } else {
                verify(ctx, spec.as_deref().expect("clap requires a spec"))
            }
        }
        Command::Fixtures { dir } => write_fixtures(ctx, dir),
    }
}

#[derive(Serialize)]
struct Description {
    dimension: usize,
    labels: Vec<String>,
    provenance: String,
    family: Option<String>,
    metric: Vec<Vec<f64>>,
    validation: Validation,
}

fn describe(ctx: &Ctx, path: &Path) -> Result<Outcome> {
    ctx.no_csv()?;
    let mla = ctx.spec(path)?.algebra()?;
    let family = classify(&mla).ok().map(|f| match f {
        FamilySpec::Special(s) => format!("special(n={}, lambda={})", s.n(), s.lambda()),
        FamilySpec::OneDimCommutator(s) => format!("one-dim-commutator(n={})", s.n()),
    });
    let d = Description {
        dimension: mla.dim(),
        labels: mla.labels().to_vec(),
        provenance: mla.provenance().to_string(),
        family,
        metric: mla.metric().rows(),
        validation: mla.validate(ctx.global.tol_jacobi),
    };
    if ctx.global.format == Format::Json {
        return Ok(Outcome::ok(ctx.json(&d)?));
    }
    let mut out = String::new();
    let _ = writeln!(out, "dimension: {}", d.dimension);
    let _ = writeln!(out, "labels: {}", d.labels.join(", "));
    let _ = writeln!(out, "provenance: {}", d.provenance);
    let _ = writeln!(out, "family: {}", d.family.as_deref().unwrap_or("none"));
    let verdict = if d.validation.is_ok() {
        "ok"
    } else {
        "invalid"
    };
    let _ = writeln!(
        out,
        "validation: {verdict} (max Jacobi residual {})",
        render::num(d.validation.max_jacobi_residual)
    );
    for v in &d.validation.violations {
        let _ = writeln!(out, "  {v}");
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct PairValue<'a> {
    x: &'a str,
    y: &'a str,
    value: Vec<f64>,
}

fn connection(ctx: &Ctx, path: &Path) -> Result<Outcome> {
    ctx.no_csv()?;
    let mla = ctx.spec(path)?.algebra()?;
    let geo = Geometry::compute(&mla)?;
    let labels = mla.labels();
    let n = mla.dim();
    let rows: Vec<PairValue> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| PairValue {
            x: &labels[i],
            y: &labels[j],
            value: geo.connection.pair(i, j).to_vec(),
        })
        .collect();
    if ctx.global.format == Format::Json {
        return Ok(Outcome::ok(ctx.json(&rows)?));
    }
    let mut out = String::new();
    for r in &rows {
        let _ = writeln!(
            out,
            "nabla_{} {} = {}",
            r.x,
            r.y,
            combination(&r.value, labels)
        );
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct TripleValue<'a> {
    x: &'a str,
    y: &'a str,
    z: &'a str,
    value: Vec<f64>,
}

#[derive(Serialize)]
struct PlaneValue<'a> {
    x: &'a str,
    y: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct RicciTable<'a> {
    labels: &'a [String],
    matrix: Vec<Vec<f64>>,
    scalar: f64,
}

fn curvature(ctx: &Ctx, path: &Path, sectional: bool, ricci: bool) -> Result<Outcome> {
    ctx.no_csv()?;
    let mla = ctx.spec(path)?.algebra()?;
    let geo = Geometry::compute(&mla)?;
    let labels = mla.labels();
    let n = mla.dim();
    let json = ctx.global.format == Format::Json;
    let mut out = String::new();
    if sectional {
        let mut planes = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                planes.push(PlaneValue {
                    x: &labels[i],
                    y: &labels[j],
                    value: geo.sectional(&mla.basis(i), &mla.basis(j))?,
                });
            }
        }
        if json {
            return Ok(Outcome::ok(ctx.json(&planes)?));
        }
        for p in &planes {
            let _ = writeln!(out, "K({}, {}) = {}", p.x, p.y, p.value);
        }
        if n >= 2 {
            let cs = constant_sectional_check(
                &mla,
                &geo.curvature,
                100,
                ctx.global.seed,
                ctx.global.tol,
            )?;
            let _ = writeln!(
                out,
                "constant: {} (mean {}, max deviation {:e} over {} planes)",
                cs.is_constant, cs.value, cs.max_deviation, cs.planes
            );
        }
    } else if ricci {
        let flat = geo.ricci_matrix();
        let matrix: Vec<Vec<f64>> = flat.chunks(n).map(|r| r.to_vec()).collect();
        let ginv = mla.metric().inverse();
        let scalar = (0..n * n).map(|k| ginv[k] * flat[k]).sum();
        let table = RicciTable {
            labels,
            matrix,
            scalar,
        };
        if json {
            return Ok(Outcome::ok(ctx.json(&table)?));
        }
        for (i, row) in table.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let _ = writeln!(out, "Ric({}, {}) = {v}", labels[i], labels[j]);
            }
        }
        let _ = writeln!(out, "scalar curvature = {}", table.scalar);
    } else {
        let mut triples = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    triples.push(TripleValue {
                        x: &labels[i],
                        y: &labels[j],
                        z: &labels[k],
                        value: geo.curvature.triple(i, j, k).to_vec(),
                    });
                }
            }
        }
        if json {
            return Ok(Outcome::ok(ctx.json(&triples)?));
        }
        for t in &triples {
            let _ = writeln!(
                out,
                "R({}, {}) {} = {}",
                t.x,
                t.y,
                t.z,
                combination(&t.value, labels)
            );
        }
    }
    Ok(Outcome::ok(out))
}

fn lift(ctx: &Ctx, path: &Path, out: Option<&Path>) -> Result<Outcome> {
    ctx.no_csv()?;
    let mla = ctx.spec(path)?.algebra()?;
    let lifted = tangent_lift(&mla)?;
    let text = serde_json::to_string_pretty(&input::generic_file(&lifted))? + "\n";
    match out {
        Some(p) => {
            std::fs::write(p, &text).with_context(|| format!("cannot write {}", p.display()))?;
            Ok(Outcome::ok(format!(
                "wrote {} (dimension {})\n",
                p.display(),
                lifted.dim()
            )))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn family_of(input: Input) -> Result<FamilySpec> {
    match input {
        Input::Family(f) => Ok(f),
        Input::Generic(m) => Ok(classify(&m)?),
    }
}

fn verify(ctx: &Ctx, path: &Path) -> Result<Outcome> {
    let family = family_of(ctx.spec(path)?)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let report = run_paper_suite(&family, ctx.global.seed, ctx.global.tol)?.with_name(name);
    let code = if report.all_required_pass() { 0 } else { 1 };
    let text = match ctx.global.format {
        Format::Json => ctx.json(&report)?,
        Format::Csv => render::reports_csv(std::slice::from_ref(&report))?,
        Format::Text => {
            let mut s = String::new();
            render::report_text(&report, &mut s);
            s
        }
    };
    Ok(Outcome { text, code })
}

#[derive(Serialize)]
struct Skipped {
    name: &'static str,
    reason: String,
}

#[derive(Serialize)]
struct FixtureReports {
    reports: Vec<ComparisonReport>,
    skipped: Vec<Skipped>,
}

fn verify_fixtures(ctx: &Ctx) -> Result<Outcome> {
    let mut all = FixtureReports {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    for f in fixtures() {
        let family = match &f.instance {
            FixtureInstance::Family(spec) => Ok(spec.clone()),
            FixtureInstance::Generic(mla) => classify(mla),
        };
        match family {
            Ok(spec) => all
                .reports
                .push(run_paper_suite(&spec, ctx.global.seed, ctx.global.tol)?.with_name(f.name)),
            Err(e) => all.skipped.push(Skipped {
                name: f.name,
                reason: e.to_string(),
            }),
        }
    }
    let code = if all.reports.iter().all(ComparisonReport::all_required_pass) {
        0
    } else {
        1
    };
    let text = match ctx.global.format {
        Format::Json => ctx.json(&all)?,
        Format::Csv => render::reports_csv(&all.reports)?,
        Format::Text => {
            let mut s = String::new();
            for r in &all.reports {
                render::report_text(r, &mut s);
                s.push('\n');
            }
            for sk in &all.skipped {
                let _ = writeln!(s, "skipped {}: {}", sk.name, sk.reason);
            }
            for r in &all.reports {
                let _ = writeln!(
                    s,
                    "{:<16} required failures {}",
                    r.instance.name.as_deref().unwrap_or("input"),
                    r.summary.required_failures
                );
            }
            s
        }
    };
    Ok(Outcome { text, code })
}

fn write_fixtures(ctx: &Ctx, dir: &Path) -> Result<Outcome> {
    ctx.no_csv()?;
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut out = String::new();
    for f in fixtures() {
        let path = dir.join(format!("{}.json", f.name));
        std::fs::write(&path, input::fixture_json(&f)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(Outcome::ok(out))
}
