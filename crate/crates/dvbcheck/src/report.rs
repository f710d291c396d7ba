//! Suite reports: one record per suite run, serializable to JSON, with a
//! capped list of failing cases for reproduction.

use serde::Serialize;

/// Most failures a report will carry; `max_residual` still reflects all cases.
pub const MAX_FAILURES: usize = 10;

/// Sentinel residual recorded when a case produces a non-finite value or an
/// operation rejects its inputs: always a failure, and JSON-safe.
pub const NON_FINITE_RESIDUAL: f64 = 9e99;

/// One failing case: the case index (which, with the seed, reproduces the
/// sample exactly), a human-readable input summary, and the residual.
#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub case: u64,
    pub inputs: String,
    pub residual: f64,
}

/// Outcome of one suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_ms: u64,
    pub failures: Vec<FailureRecord>,
}

impl SuiteReport {
    /// One-line summary plus one indented line per recorded failure.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "[{}] {}  max_residual={:.3e}  tolerance={:.3e}  trials={}  seed={}  wall_ms={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.max_residual,
            self.tolerance,
            self.trials,
            self.seed,
            self.wall_ms,
        );
        for f in &self.failures {
            out.push_str(&format!(
                "\n    case {}: residual={:.3e}  {}",
                f.case, f.residual, f.inputs
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_mentions_verdict_and_failures() {
        let report = SuiteReport {
            suite: "interchange".into(),
            seed: 7,
            trials: 10,
            max_residual: 2.0,
            tolerance: 1e-12,
            pass: false,
            wall_ms: 3,
            failures: vec![FailureRecord {
                case: 4,
                inputs: "shape=(1,1,1,1)".into(),
                residual: 2.0,
            }],
        };
        let text = report.render_text();
        assert!(text.starts_with("[FAIL] interchange"));
        assert!(text.contains("case 4"));
        assert!(text.contains("shape=(1,1,1,1)"));
    }
}
