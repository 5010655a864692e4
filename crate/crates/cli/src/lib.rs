//! Command-line front end: scene loading, method dispatch, cross-checking
//! and reporting. [`run`] does all the work and returns the exit status, so
//! the binary is a thin wrapper.
//!
//! Exit status: 0 when every check passes, 2 when methods disagree with each
//! other or with a declared value, 1 on input errors.

pub mod args;
pub mod error;
pub mod methods;
pub mod report;
pub mod source;

use std::io::Write;
use std::time::Instant;

use linkproj::geometry::{PatchManifold, Scene};
use linkproj::oracles::{gamma_identity_lhs, gamma_identity_rhs};
use serde::Serialize;

use args::{Cli, Command, ConvergenceArgs, GammaArgs, IntegralMethod, LkArgs, Method, SceneArgs, VerifyArgs};
pub use error::CliError;
use methods::{Kind, MethodReport, Settings, Status};
use report::{PairReport, RunReport, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DISAGREE: i32 = 2;

/// Gamma-table rows must agree to this accuracy.
pub const GAMMA_TOL: f64 = 1e-9;

/// Runs a parsed command line, writing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Lk(a) => lk(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Convergence(a) => convergence(a, out),
        Command::Gamma(a) => gamma(a, out),
        Command::Scene(a) => scene(a, out),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::new(format!("writing output: {e}"))
}

fn manifold<'a>(scene: &'a Scene, name: &str) -> Result<&'a PatchManifold, CliError> {
    scene.object(name).map(|o| &o.manifold).map_err(|e| {
        let names: Vec<&str> = scene.objects().iter().map(|o| o.name.as_str()).collect();
        CliError::from(e).with_hint(format!("objects in this scene: {}", names.join(", ")))
    })
}

/// Linking dimensions must add up to `d - 1`.
fn check_dims(scene: &Scene, a: &PatchManifold, b: &PatchManifold, pair: &[String; 2]) -> Result<(), CliError> {
    let (m, n, d) = (a.intrinsic_dim(), b.intrinsic_dim(), scene.ambient_dim());
    if m + n + 1 != d {
        return Err(CliError::new(format!(
            "pair ({}, {}) has dimensions {m} and {n}; linking in R^{d} needs {m} + {n} = {}",
            pair[0],
            pair[1],
            d - 1
        )));
    }
    Ok(())
}

/// The declared value for the ordered pair, adjusting for a reversed entry.
fn expected_for(scene: &Scene, a: &PatchManifold, b: &PatchManifold, pair: &[String; 2]) -> Option<i64> {
    let e = scene.expectation(&pair[0], &pair[1])?;
    if e.pair[0] == pair[0] {
        Some(e.value)
    } else {
        let mn = a.intrinsic_dim() * b.intrinsic_dim();
        Some(if (mn + 1) % 2 == 0 { e.value } else { -e.value })
    }
}

fn evaluate_pair(scene: &Scene, pair: [String; 2], kinds: &[Kind], settings: &Settings) -> Result<PairReport, CliError> {
    let a = manifold(scene, &pair[0])?;
    let b = manifold(scene, &pair[1])?;
    if pair[0] == pair[1] {
        return Err(CliError::new(format!("pair names the same object `{}` twice", pair[0])));
    }
    check_dims(scene, a, b, &pair)?;
    let reports: Vec<MethodReport> = kinds.iter().map(|&k| methods::run(k, a, b, settings)).collect();
    let expected = expected_for(scene, a, b, &pair);
    Ok(PairReport::new(pair, expected, reports))
}

fn emit(report: &RunReport, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    if json {
        writeln!(out, "{}", report.to_json_line()).map_err(io)
    } else {
        write!(out, "{}", report.to_text()).map_err(io)
    }
}

fn exit_for(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_DISAGREE,
    }
}

fn all_pairs(scene: &Scene) -> Vec<[String; 2]> {
    scene
        .pairs()
        .into_iter()
        .map(|(a, b)| [a.name.clone(), b.name.clone()])
        .collect()
}

fn check_settings(s: &Settings) -> Result<(), CliError> {
    if !(s.tol > 0.0) || !s.tol.is_finite() {
        return Err(CliError::new(format!("--tol must be positive, got {}", s.tol)));
    }
    if let Some(n) = s.max_nodes {
        if !(16..=4096).contains(&n) {
            return Err(CliError::new(format!("--max-nodes must lie in 16..=4096, got {n}")));
        }
    }
    if s.grid < 8 {
        return Err(CliError::new(format!("--grid must be at least 8, got {}", s.grid)));
    }
    Ok(())
}

fn lk(a: &LkArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::from(&a.common);
    check_settings(&settings)?;
    let scene = source::load(&a.scene)?;
    let pairs = match &a.pair {
        Some(p) => vec![source::parse_pair(p)?],
        None => all_pairs(&scene),
    };
    if pairs.is_empty() {
        return Err(CliError::new("scene has fewer than two objects"));
    }
    let kinds: Vec<Kind> = match a.method {
        Method::All => Kind::ALL.to_vec(),
        Method::Gauss => vec![Kind::Gauss],
        Method::Degree => vec![Kind::Degree],
        Method::Reduce => vec![Kind::Reduce],
        Method::Crossings => vec![Kind::Crossings],
    };
    let mut reports = Vec::new();
    for pair in pairs {
        let r = evaluate_pair(&scene, pair, &kinds, &settings)?;
        // An explicitly requested method must apply.
        if a.method != Method::All {
            if let Some(m) = r.methods.iter().find(|m| m.status == Status::NotApplicable) {
                return Err(CliError::new(format!(
                    "{} on ({}, {}): {}",
                    m.method,
                    r.pair[0],
                    r.pair[1],
                    m.detail.as_deref().unwrap_or("not applicable")
                ))
                .with_hint("use --method all to run every applicable method"));
            }
        }
        reports.push(r);
    }
    let report = RunReport::new(scene.name().to_string(), scene.ambient_dim(), reports);
    emit(&report, a.common.json, out)?;
    Ok(exit_for(report.verdict))
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::from(&a.common);
    check_settings(&settings)?;
    let scenes = source::load_target(&a.target)?;
    let mut status = EXIT_OK;
    for scene in &scenes {
        let pairs = all_pairs(scene);
        if pairs.is_empty() {
            return Err(CliError::new(format!("scene `{}` has no pairs", scene.name())));
        }
        let reports = pairs
            .into_iter()
            .map(|p| evaluate_pair(scene, p, &Kind::ALL, &settings))
            .collect::<Result<Vec<_>, _>>()?;
        let report = RunReport::new(scene.name().to_string(), scene.ambient_dim(), reports);
        emit(&report, a.common.json, out)?;
        status = status.max(exit_for(report.verdict));
    }
    if !a.common.json && scenes.len() > 1 {
        let word = if status == EXIT_OK { "PASS" } else { "FAIL" };
        writeln!(out, "suite {word} ({} scenes)", scenes.len()).map_err(io)?;
    }
    Ok(status)
}

/// One row of a convergence table.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub value: f64,
    pub abs_error_vs_final: f64,
    pub evaluations: u64,
    pub cumulative_evaluations: u64,
    #[serde(skip)]
    pub wall_ms: f64,
}

/// Where a convergence run first got within `target` of its final value.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceSummary {
    pub scene: String,
    pub pair: [String; 2],
    pub method: &'static str,
    pub target: f64,
    /// First node count, before the last, whose value is within `target` of
    /// the final one.
    pub reached_at_nodes: Option<usize>,
    pub evaluations_to_reach: Option<u64>,
    pub final_value: f64,
}

pub const CSV_HEADER: &str = "nodes,value,abs_error_vs_final,wall_ms";

fn convergence(a: &ConvergenceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let schedule = source::parse_schedule(&a.schedule)?;
    if !(a.target > 0.0) {
        return Err(CliError::new("--target must be positive"));
    }
    let scene = source::load(&a.scene)?;
    let pair = match &a.pair {
        Some(p) => source::parse_pair(p)?,
        None => all_pairs(&scene)
            .into_iter()
            .next()
            .ok_or_else(|| CliError::new("scene has fewer than two objects"))?,
    };
    let x = manifold(&scene, &pair[0])?;
    let y = manifold(&scene, &pair[1])?;
    check_dims(&scene, x, y, &pair)?;
    let kind = match a.method {
        IntegralMethod::Gauss => Kind::Gauss,
        IntegralMethod::Degree => Kind::Degree,
        IntegralMethod::Reduce => Kind::Reduce,
    };
    let plan = if kind == Kind::Reduce {
        match methods::plan(x, y, a.grid)? {
            Ok(p) => Some(p),
            Err(why) => return Err(CliError::new(format!("reduce: {why}"))),
        }
    } else {
        None
    };
    let mut rows = Vec::with_capacity(schedule.len());
    let mut cumulative = 0;
    for &n in &schedule {
        let start = Instant::now();
        let (value, evaluations) = methods::fixed_nodes(kind, x, y, plan.as_ref(), n)?;
        cumulative += evaluations;
        rows.push(ConvergenceRow {
            nodes: n,
            value,
            abs_error_vs_final: 0.0,
            evaluations,
            cumulative_evaluations: cumulative,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    let final_value = rows.last().map(|r| r.value).unwrap_or_default();
    for r in &mut rows {
        r.abs_error_vs_final = (r.value - final_value).abs();
    }
    let reached = rows[..rows.len() - 1]
        .iter()
        .find(|r| r.abs_error_vs_final < a.target);
    let summary = ConvergenceSummary {
        scene: scene.name().to_string(),
        pair,
        method: kind.name(),
        target: a.target,
        reached_at_nodes: reached.map(|r| r.nodes),
        evaluations_to_reach: reached.map(|r| r.cumulative_evaluations),
        final_value,
    };

    let csv = || {
        let mut s = format!("{CSV_HEADER}\n");
        for r in &rows {
            s.push_str(&format!(
                "{},{:.17e},{:.3e},{:.3}\n",
                r.nodes, r.value, r.abs_error_vs_final, r.wall_ms
            ));
        }
        s
    };
    if let Some(path) = &a.csv {
        std::fs::write(path, csv())
            .map_err(|e| CliError::new(format!("{}: {e}", path.display())))?;
    }
    if a.json {
        for r in &rows {
            writeln!(out, "{}", serde_json::to_string(r).expect("rows serialize")).map_err(io)?;
        }
        writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serializes")).map_err(io)?;
    } else {
        write!(out, "{}", csv()).map_err(io)?;
        match (summary.reached_at_nodes, summary.evaluations_to_reach) {
            (Some(n), Some(e)) => writeln!(
                out,
                "# {} within {:e} of the final value at {n} nodes after {e} evaluations",
                summary.method, summary.target
            ),
            _ => writeln!(
                out,
                "# {} did not get within {:e} of the final value before the last row",
                summary.method, summary.target
            ),
        }
        .map_err(io)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaRow {
    pub p: u32,
    pub a: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

fn gamma(a: &GammaArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ps = source::parse_int_range(&a.p, "--p")?;
    let values = source::parse_numbers(&a.a, "--a")?;
    if values.is_empty() {
        return Err(CliError::new("--a lists no values"));
    }
    if let Some(bad) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(CliError::new(format!("--a values must be positive, got {bad}")));
    }
    let mut rows = Vec::new();
    for &p in &ps {
        for &av in &values {
            let lhs = gamma_identity_lhs(p, av)?;
            let rhs = gamma_identity_rhs(p, av)?;
            rows.push(GammaRow {
                p,
                a: av,
                lhs,
                rhs,
                abs_diff: (lhs - rhs).abs(),
            });
        }
    }
    let pass = rows.iter().all(|r| r.abs_diff < GAMMA_TOL);
    if a.json {
        for r in &rows {
            writeln!(out, "{}", serde_json::to_string(r).expect("rows serialize")).map_err(io)?;
        }
    } else {
        writeln!(out, "{:>3} {:>8} {:>22} {:>22} {:>10}", "p", "a", "lhs", "rhs", "|diff|").map_err(io)?;
        for r in &rows {
            writeln!(
                out,
                "{:>3} {:>8} {:>22.15} {:>22.15} {:>10.1e}",
                r.p, r.a, r.lhs, r.rhs, r.abs_diff
            )
            .map_err(io)?;
        }
        writeln!(out, "verdict {}", if pass { "PASS" } else { "FAIL" }).map_err(io)?;
    }
    Ok(if pass { EXIT_OK } else { EXIT_DISAGREE })
}

fn scene(a: &SceneArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let scene = source::builtin(&a.name, a.params.as_deref().unwrap_or(""), a.seed)?;
    writeln!(out, "{}", linkproj::geometry::scene_to_json(&scene)).map_err(io)?;
    Ok(EXIT_OK)
}
