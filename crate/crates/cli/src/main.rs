//! Command-line front end: parse a problem file, run the resolver, and
//! emit the tree, trace, and certificate. Exit codes: 0 success,
//! 1 certification failure, 2 input error, 3 budget exhausted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use toric_desing::driver::{self, ResolveReport, ResolveStatus};
use toric_desing::invariant::{Entry, InvariantValue};
use toric_desing::io::{self, ProblemFile};
use toric_desing::lattice::Boundary;
use toric_desing::rat;

#[derive(Parser)]
#[command(
    name = "toric-desing",
    about = "Embedded desingularization of toric varieties given by binomial data",
    version
)]
struct Args {
    /// Problem file: JSON with integers as decimal strings
    #[arg(
        long,
        value_name = "PATH",
        required_unless_present = "seed_check",
        conflicts_with = "seed_check"
    )]
    input: Option<PathBuf>,
    /// Write the resolution tree to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print one line per recorded blow-up step
    #[arg(long)]
    trace: bool,
    /// Re-check the finished tree; certification failure exits nonzero
    #[arg(long)]
    certify: bool,
    /// Budget of blow-up rounds before giving up
    #[arg(long, value_name = "N", default_value_t = 1000)]
    max_steps: usize,
    /// Format of the file written by --out
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run the built-in regression example and diff against expectations
    #[arg(long)]
    seed_check: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(args: &Args) -> Result<u8, Failure> {
    check_thread_cap()?;
    if args.seed_check {
        return seed_check();
    }
    let path = args.input.as_ref().expect("clap requires --input");
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))?;
    let problem = io::parse_problem(&text).map_err(|e| fail(2, e.to_string()))?;
    let state = problem.to_state().map_err(|e| fail(2, e.to_string()))?;
    let report = driver::resolve(&state, args.max_steps).map_err(|e| fail(2, e.to_string()))?;

    if args.trace {
        for (k, step) in report.tree.steps.iter().enumerate() {
            println!("step {}: invariant {}; centers: {}", k + 1, step.value, {
                let parts: Vec<String> = step
                    .centers
                    .iter()
                    .map(|(chart, s)| format!("chart {chart} {}", coords(s)))
                    .collect();
                parts.join("; ")
            });
        }
    }

    let cert = args.certify.then(|| driver::certify(&report));
    if let Some(out) = &args.out {
        let rendered = match args.format {
            Format::Json => io::emit_report(&report, cert.as_ref()),
            Format::Text => render_text(&problem, &report, cert.as_ref()),
        };
        std::fs::write(out, rendered)
            .map_err(|e| fail(2, format!("cannot write {}: {e}", out.display())))?;
    }

    let leaves = report.tree.leaves().count();
    println!(
        "status: {}; steps: {}; charts: {}; leaves: {}",
        status_str(report.status),
        report.tree.steps.len(),
        report.tree.nodes.len(),
        leaves
    );
    match report.status {
        ResolveStatus::BudgetExhausted => {
            eprintln!(
                "budget exhausted ({} recorded steps); partial tree",
                report.tree.steps.len()
            );
            return Ok(3);
        }
        ResolveStatus::Stalled => {
            eprintln!("invariant failed to drop; tree left at the stall point");
        }
        ResolveStatus::Terminal => {}
    }
    if let Some(cert) = &cert {
        if !cert.ok {
            eprintln!("certification failure");
            return Ok(1);
        }
        println!(
            "certificate: ok; untouched charts: {}",
            cert.iso_leaves
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    Ok(0)
}

/// The engine is single-process and single-threaded, so any positive cap
/// is honored; reject caps that cannot be.
fn check_thread_cap() -> Result<(), Failure> {
    match std::env::var("TORIC_DESING_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(fail(
                2,
                format!("TORIC_DESING_THREADS must be a positive integer, got {v:?}"),
            )),
        },
        Err(_) => Ok(()),
    }
}

fn status_str(s: ResolveStatus) -> &'static str {
    match s {
        ResolveStatus::Terminal => "terminal",
        ResolveStatus::BudgetExhausted => "budget-exhausted",
        ResolveStatus::Stalled => "stalled",
    }
}

fn coords(s: &Boundary) -> String {
    let parts: Vec<String> = s.iter().map(|&j| (j + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn render_text(problem: &ProblemFile, report: &ResolveReport, cert: Option<&driver::Certificate>) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "dim: {}", report.tree.dim).unwrap();
    if let Some(names) = &problem.names {
        writeln!(w, "names: {}", names.join(" ")).unwrap();
    }
    writeln!(w, "status: {}", status_str(report.status)).unwrap();
    writeln!(w, "steps:").unwrap();
    for (k, step) in report.tree.steps.iter().enumerate() {
        let centers: Vec<String> = step
            .centers
            .iter()
            .map(|(chart, s)| format!("chart {chart} {}", coords(s)))
            .collect();
        writeln!(
            w,
            "  {}: invariant {}; centers: {}",
            k + 1,
            step.value,
            centers.join("; ")
        )
        .unwrap();
    }
    writeln!(w, "charts:").unwrap();
    for node in &report.tree.nodes {
        let origin = match node.chart.lineage.last() {
            Some(l) => format!(
                "parent {} center {} coord {}",
                l.parent,
                coords(&l.center),
                l.coord + 1
            ),
            None => "root".to_string(),
        };
        let gens: Vec<String> = node
            .ideal
            .gens()
            .iter()
            .map(|g| format!("{:?}-{:?}", g.plus(), g.minus()))
            .collect();
        writeln!(
            w,
            "  {}: E={} H={} ({origin}) generators {}",
            node.chart.id,
            coords(&node.chart.e),
            coords(&node.chart.h),
            gens.join(", ")
        )
        .unwrap();
    }
    let leaves: Vec<String> = report.tree.leaves().map(|i| i.to_string()).collect();
    writeln!(w, "leaves: {}", leaves.join(" ")).unwrap();
    if let Some(cert) = cert {
        writeln!(w, "certificate: {}", if cert.ok { "ok" } else { "FAILED" }).unwrap();
        for leaf in &cert.leaves {
            writeln!(
                w,
                "  chart {}: transversal={} jacobian_ok={}",
                leaf.chart_id, leaf.transversal, leaf.jacobian_ok
            )
            .unwrap();
        }
    }
    out
}

/// The built-in regression fixture: x^2 - y^3 and xyz - w^2 in affine
/// four-space with every coordinate hyperplane in E.
const SEED_PROBLEM: &str = r#"{
  "dim": "4",
  "names": ["x", "y", "z", "w"],
  "binomials": [
    {"plus": ["2", "0", "0", "0"], "minus": ["0", "3", "0", "0"]},
    {"plus": ["1", "1", "1", "0"], "minus": ["0", "0", "0", "2"]}
  ]
}"#;

fn seed_expectations() -> (Vec<(InvariantValue, Vec<(usize, Boundary)>)>, ResolveStatus) {
    let val = |hcodim, entries: Vec<Entry>| InvariantValue { hcodim, entries };
    let q = |n, d| Entry::Val(rat(n) / rat(d));
    let steps = vec![
        (
            val(2, vec![q(2, 1), q(3, 2), q(7, 3), Entry::Inf]),
            vec![(0, [0, 1, 2, 3].into_iter().collect())],
        ),
        (
            val(2, vec![q(2, 1), q(1, 1), q(5, 2), Entry::Inf]),
            vec![(3, [0, 1, 3].into_iter().collect())],
        ),
        (
            val(2, vec![q(2, 1), q(1, 1), q(1, 1), Entry::Inf]),
            vec![(2, [0, 1, 2, 3].into_iter().collect())],
        ),
    ];
    (steps, ResolveStatus::Stalled)
}

fn seed_check() -> Result<u8, Failure> {
    let problem = io::parse_problem(SEED_PROBLEM).expect("fixture parses");
    let state = problem.to_state().expect("fixture is saturated");
    let report = driver::resolve(&state, 1000).map_err(|e| fail(2, e.to_string()))?;
    let (want_steps, want_status) = seed_expectations();
    let mut diffs = Vec::new();
    if report.status != want_status {
        diffs.push(format!(
            "status: expected {}, got {}",
            status_str(want_status),
            status_str(report.status)
        ));
    }
    if report.tree.steps.len() != want_steps.len() {
        diffs.push(format!(
            "steps: expected {}, got {}",
            want_steps.len(),
            report.tree.steps.len()
        ));
    }
    for (k, (want, got)) in want_steps.iter().zip(&report.tree.steps).enumerate() {
        if got.value != want.0 {
            diffs.push(format!(
                "step {} invariant: expected {}, got {}",
                k + 1,
                want.0,
                got.value
            ));
        }
        if got.centers != want.1 {
            let render = |cs: &[(usize, Boundary)]| {
                cs.iter()
                    .map(|(c, s)| format!("chart {c} {}", coords(s)))
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            diffs.push(format!(
                "step {} centers: expected {}, got {}",
                k + 1,
                render(&want.1),
                render(&got.centers)
            ));
        }
    }
    if diffs.is_empty() {
        println!(
            "seed check passed: {} recorded blow-ups, status {}",
            report.tree.steps.len(),
            status_str(report.status)
        );
        Ok(0)
    } else {
        Err(fail(1, format!("seed check failed:\n  {}", diffs.join("\n  "))))
    }
}
