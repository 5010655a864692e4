use std::fmt::Write;

use serde::Serialize;

use crate::methods::{MethodReport, Status};

pub const REDUCE_NOTE: &str = "reduce takes the scene as already deformed into reduced position; it does not search for the deformation";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub pair: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<i64>,
    pub methods: Vec<MethodReport>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl PairReport {
    /// PASS iff every computed method is certified, no method failed, all
    /// rounded values agree, and they equal the declared value if any.
    pub fn new(pair: [String; 2], expected: Option<i64>, methods: Vec<MethodReport>) -> Self {
        let reason = judge(&pair, expected, &methods);
        Self {
            pair,
            expected,
            methods,
            verdict: if reason.is_none() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            reason,
        }
    }
}

fn judge(pair: &[String; 2], expected: Option<i64>, methods: &[MethodReport]) -> Option<String> {
    let label = format!("({}, {})", pair[0], pair[1]);
    if let Some(m) = methods.iter().find(|m| m.status == Status::Failed) {
        return Some(format!("{label}: {} failed", m.method));
    }
    let ok: Vec<&MethodReport> = methods.iter().filter(|m| m.status == Status::Ok).collect();
    if ok.is_empty() {
        return Some(format!("{label}: no applicable method"));
    }
    if let Some(m) = ok.iter().find(|m| !m.certified()) {
        return Some(format!(
            "{label}: {} residual {:.1e} is not below 1e-3",
            m.method,
            m.residual.unwrap_or(f64::NAN)
        ));
    }
    let values: Vec<i64> = ok.iter().filter_map(|m| m.rounded).collect();
    if values.iter().any(|&v| v != values[0]) {
        let listing: Vec<String> = ok
            .iter()
            .map(|m| format!("{} {}", m.method, m.rounded.unwrap_or_default()))
            .collect();
        return Some(format!("{label}: methods disagree: {}", listing.join(", ")));
    }
    match expected {
        Some(e) if e != values[0] => Some(format!(
            "{label}: expected {e}, methods give {}",
            values[0]
        )),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scene: String,
    pub ambient_dim: usize,
    pub pairs: Vec<PairReport>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn new(scene: String, ambient_dim: usize, pairs: Vec<PairReport>) -> Self {
        let verdict = if pairs.iter().all(|p| p.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let mut warnings = Vec::new();
        for p in &pairs {
            for m in &p.methods {
                if let Some(w) = &m.warning {
                    warnings.push(format!("({}, {}) {}: {w}", p.pair[0], p.pair[1], m.method));
                }
            }
        }
        let reduced = pairs
            .iter()
            .flat_map(|p| &p.methods)
            .any(|m| m.method == "reduce" && m.status == Status::Ok);
        let notes = if reduced {
            vec![REDUCE_NOTE.to_string()]
        } else {
            Vec::new()
        };
        Self {
            scene,
            ambient_dim,
            pairs,
            verdict,
            warnings,
            notes,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scene {} (d = {})", self.scene, self.ambient_dim);
        for p in &self.pairs {
            let _ = write!(out, "  pair {}, {}", p.pair[0], p.pair[1]);
            if let Some(e) = p.expected {
                let _ = write!(out, "  (expected {e})");
            }
            out.push('\n');
            for m in &p.methods {
                let _ = writeln!(out, "    {}", method_line(m));
            }
            let _ = write!(out, "    {}", verdict_word(p.verdict));
            if let Some(r) = &p.reason {
                let _ = write!(out, ": {r}");
            }
            out.push('\n');
        }
        for w in &self.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let _ = writeln!(out, "verdict {}", verdict_word(self.verdict));
        out
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
    }
}

fn method_line(m: &MethodReport) -> String {
    let name = format!("{:<10}", m.method);
    match m.status {
        Status::NotApplicable => {
            format!("{name}{}", m.detail.as_deref().unwrap_or("not applicable"))
        }
        Status::Failed => {
            let mut s = format!("{name}error: {}", m.error.as_deref().unwrap_or("unknown"));
            if let Some(h) = &m.hint {
                let _ = write!(s, " (hint: {h})");
            }
            s
        }
        Status::Ok => {
            let mut s = format!(
                "{name}{:>18.12}  -> {:>3}  residual {:.1e}",
                m.raw.unwrap_or(f64::NAN),
                m.rounded.unwrap_or_default(),
                m.residual.unwrap_or(f64::NAN)
            );
            if !m.nodes.is_empty() {
                let dims: Vec<String> = m.nodes.iter().map(usize::to_string).collect();
                let _ = write!(s, "  nodes {}", dims.join("x"));
            }
            if let Some(e) = m.evaluations {
                let _ = write!(s, "  evals {e}");
            }
            let _ = write!(s, "  {:.1} ms", m.wall_ms);
            if let Some(d) = &m.detail {
                let _ = write!(s, "  [{d}]");
            }
            s
        }
    }
}
