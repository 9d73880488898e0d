//! Report records and their JSON / table renderings.

use std::fmt::Write as _;

use curvlab_core::identities::IdentityReport;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessJson {
    pub point: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub tag: String,
    pub residual: f64,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    /// Exact rational residual on frames; table output only.
    #[serde(skip)]
    pub exact: Option<String>,
}

impl Check {
    pub fn plain(tag: impl Into<String>, residual: f64, verdict: bool) -> Check {
        Check { tag: tag.into(), residual, verdict, witness: None, exact: None }
    }
}

impl From<&IdentityReport> for Check {
    fn from(r: &IdentityReport) -> Check {
        Check {
            tag: r.tag.clone(),
            residual: r.residual,
            verdict: r.verdict,
            witness: r.witness.as_ref().map(|w| WitnessJson {
                point: w.point.clone(),
                vectors: w.vectors.clone(),
                labels: w.labels.clone(),
            }),
            exact: r.exact.map(|e| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub target: String,
    pub seed: u64,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    /// Derived labels (`sasakian: true`, ...) shown under the table.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "target: {}  seed: {}  tolerance: {:e}", self.target, self.seed, self.tolerance);
        let width = self.checks.iter().map(|c| c.tag.len()).max().unwrap_or(3).max(5);
        let _ = writeln!(out, "{:<width$}  {:>14}  verdict  witness", "check", "residual");
        for c in &self.checks {
            let res = match &c.exact {
                Some(e) => e.clone(),
                None => format!("{:.3e}", c.residual),
            };
            let verdict = if c.verdict { "pass" } else { "FAIL" };
            let wit = match &c.witness {
                Some(w) if !c.verdict => match &w.labels {
                    Some(l) => format!("({})", l.join(", ")),
                    None => format!("at {:?}", w.point.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>()),
                },
                _ => String::new(),
            };
            let line = format!("{:<width$}  {:>14}  {:<7}  {}", c.tag, res, verdict, wit);
            let _ = writeln!(out, "{}", line.trim_end());
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }
}
