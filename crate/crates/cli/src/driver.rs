//! Running an analysis from parsed input.

use std::path::Path;
use std::time::{Duration, Instant};

use lcstrs_core::processors::{check_proof, solve, Budget, Outcome, Proof, ProofNode, Strategy, Verdict};
use lcstrs_core::sdp::Goal;
use lcstrs_core::solver::{Solver, SolverStats};
use lcstrs_core::trs::Lcstrs;

/// Stops the strategy once a wall-clock deadline has passed.
pub struct Deadline(pub Instant);

impl Deadline {
    pub fn after(d: Duration) -> Deadline {
        Deadline(Instant::now() + d)
    }
}

impl Budget for Deadline {
    fn exhausted(&mut self) -> bool {
        Instant::now() >= self.0
    }
}

pub struct Analysis {
    pub proof: Proof,
    pub elapsed: Duration,
    pub stats: SolverStats,
    /// Set when the replayed witnesses did not hold up; the verdict is
    /// then downgraded.
    pub check_failure: Option<String>,
}

/// Solves and replays every witness of a positive answer.
pub fn analyze(system: &Lcstrs, goal: Goal, solver: &mut Solver, timeout: Duration) -> Analysis {
    let start = Instant::now();
    let mut proof = solve(system, goal, solver, &Strategy::default(), &mut Deadline(start + timeout));
    let mut check_failure = None;
    if proof.verdict == Verdict::Yes {
        if let Err(e) = check_proof(system, &proof, solver) {
            check_failure = Some(e.to_string());
            proof.verdict = Verdict::Maybe;
            proof.reason = Some(format!("proof check failed: {e}"));
        }
    }
    Analysis { proof, elapsed: start.elapsed(), stats: solver.stats(), check_failure }
}

/// One line per proof node, indented by depth, followed by solver
/// statistics.
pub fn trace(a: &Analysis) -> String {
    fn walk(n: &ProofNode, depth: usize, out: &mut String) {
        let what = match &n.outcome {
            Outcome::Empty => "empty".to_string(),
            Outcome::Unresolved(r) => format!("unresolved ({r})"),
            Outcome::Applied { witness, .. } => format!("{}: {witness}", witness.kind()),
        };
        out.push_str(&format!("{}{} {what}\n", "  ".repeat(depth), n.problem));
        if let Outcome::Applied { children, .. } = &n.outcome {
            for c in children {
                walk(c, depth + 1, out);
            }
        }
    }
    let mut out = String::new();
    if let Some(r) = &a.proof.root {
        walk(r, 0, &mut out);
    }
    let s = a.stats;
    out.push_str(&format!(
        "verdict {} in {} ms; solver queries {} (folded {}, sat {}, unsat {}, unknown {})\n",
        a.proof.verdict,
        a.elapsed.as_millis(),
        s.queries,
        s.folded,
        s.sat,
        s.unsat,
        s.unknown
    ));
    if let Some(f) = &a.check_failure {
        out.push_str(&format!("proof check failed: {f}\n"));
    }
    out
}

pub fn write_trace(path: &Path, a: &Analysis) -> std::io::Result<()> {
    std::fs::write(path, trace(a))
}
