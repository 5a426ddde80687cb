//! The worklist loop, proof trees and an independent proof checker.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::access::{find_afp_ordering, AfpSearch, SortOrdering};
use crate::kernel::build;
use crate::sdp::{gen_all, is_public, DpProblem, Flag, Goal, Sdp};
use crate::solver::{Solver, SolverError};
use crate::theory::Guarded;
use crate::trs::Lcstrs;

use super::graph::{build_graph, edge_possible, graph_processor, reachability, GraphApprox};
use super::intmap::{free_indices, integer_mapping, orientation, position_var};
use super::modify::{constraint_modification, replace_conjunct, split_atom};
use super::subterm::{orient, subterm_criterion, Orientation};
use super::theory_arg::{extend, fixes, theory_argument, violation};
use super::{Application, Ids, ProcessorKind, Witness};

/// Checked before every processor application.
pub trait Budget {
    fn exhausted(&mut self) -> bool;
}

pub struct Unlimited;

impl Budget for Unlimited {
    fn exhausted(&mut self) -> bool {
        false
    }
}

/// Allows a fixed number of processor attempts.
pub struct Steps(pub usize);

impl Budget for Steps {
    fn exhausted(&mut self) -> bool {
        if self.0 == 0 {
            return true;
        }
        self.0 -= 1;
        false
    }
}

/// Processor order per flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub an: Vec<ProcessorKind>,
    pub pu: Vec<ProcessorKind>,
    pub max_depth: usize,
}

impl Default for Strategy {
    fn default() -> Strategy {
        use ProcessorKind::*;
        Strategy {
            an: vec![Graph, Subterm, IntegerMapping, ConstraintModification, TheoryArgument],
            pu: vec![Reachability, ConstraintModification, Graph, Subterm, IntegerMapping, TheoryArgument],
            max_depth: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    Maybe,
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::Maybe => "MAYBE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Empty,
    Applied { witness: Witness, children: Vec<ProofNode> },
    Unresolved(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub problem: DpProblem,
    pub outcome: Outcome,
}

impl ProofNode {
    pub fn is_closed(&self) -> bool {
        match &self.outcome {
            Outcome::Empty => true,
            Outcome::Applied { children, .. } => children.iter().all(ProofNode::is_closed),
            Outcome::Unresolved(_) => false,
        }
    }

    /// Every witness in preorder.
    pub fn witnesses(&self) -> Vec<&Witness> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if let Outcome::Applied { witness, .. } = &n.outcome {
                out.push(witness);
            }
        });
        out
    }

    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a ProofNode)) {
        visit(self);
        if let Outcome::Applied { children, .. } = &self.outcome {
            for c in children {
                c.walk(visit);
            }
        }
    }

    /// Every distinct SDP mentioned anywhere, by label.
    pub fn all_sdps(&self) -> Vec<Sdp> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.walk(&mut |n| {
            for p in &n.problem.sdps {
                if seen.insert(p.id) {
                    out.push(p.clone());
                }
            }
        });
        out.sort_by_key(|p| p.id);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub goal: Goal,
    pub verdict: Verdict,
    pub ordering: Option<SortOrdering>,
    /// Why the analysis stopped before building a tree.
    pub reason: Option<String>,
    pub root: Option<ProofNode>,
}

struct Run<'a> {
    system: &'a Lcstrs,
    solver: &'a mut Solver,
    strategy: &'a Strategy,
    budget: &'a mut dyn Budget,
    ids: Ids,
}

impl Run<'_> {
    fn process(&mut self, problem: DpProblem, depth: usize) -> ProofNode {
        if problem.is_empty() {
            return ProofNode { problem, outcome: Outcome::Empty };
        }
        if depth > self.strategy.max_depth {
            return ProofNode { problem, outcome: Outcome::Unresolved("depth limit reached".into()) };
        }
        let order = match problem.flag {
            Flag::An => &self.strategy.an,
            Flag::Pu => &self.strategy.pu,
        };
        let mut graph: Option<GraphApprox> = None;
        for &kind in order {
            if self.budget.exhausted() {
                return ProofNode { problem, outcome: Outcome::Unresolved("budget exhausted".into()) };
            }
            match self.apply(kind, &problem, &mut graph) {
                Ok(Some(app)) => {
                    debug_assert!(problem.flag == Flag::Pu || app.children.iter().all(|c| c.flag == Flag::An));
                    let children = app.children.into_iter().map(|c| self.process(c, depth + 1)).collect();
                    return ProofNode { problem, outcome: Outcome::Applied { witness: app.witness, children } };
                }
                Ok(None) => {}
                Err(e) => return ProofNode { problem, outcome: Outcome::Unresolved(format!("solver error: {e}")) },
            }
        }
        ProofNode { problem, outcome: Outcome::Unresolved("no processor applies".into()) }
    }

    fn apply(
        &mut self,
        kind: ProcessorKind,
        problem: &DpProblem,
        graph: &mut Option<GraphApprox>,
    ) -> Result<Option<Application>, SolverError> {
        let needs_graph =
            matches!(kind, ProcessorKind::Graph | ProcessorKind::Reachability | ProcessorKind::ConstraintModification);
        if needs_graph && graph.is_none() {
            *graph = Some(build_graph(problem, self.system, self.solver)?);
        }
        Ok(match kind {
            ProcessorKind::Graph => graph_processor(problem, graph.as_ref().expect("built above")),
            ProcessorKind::Reachability => reachability(problem, graph.as_ref().expect("built above"), self.system),
            ProcessorKind::ConstraintModification => {
                constraint_modification(problem, graph.as_ref().expect("built above"), &mut self.ids)
            }
            ProcessorKind::Subterm => subterm_criterion(problem, self.solver)?,
            ProcessorKind::IntegerMapping => integer_mapping(problem, self.solver)?,
            ProcessorKind::TheoryArgument => theory_argument(problem, self.system, &mut self.ids),
        })
    }
}

/// Runs the analysis for `goal`. Deterministic for a deterministic solver.
pub fn solve(
    system: &Lcstrs,
    goal: Goal,
    solver: &mut Solver,
    strategy: &Strategy,
    budget: &mut dyn Budget,
) -> Proof {
    let maybe = |reason: String| Proof { goal, verdict: Verdict::Maybe, ordering: None, reason: Some(reason), root: None };
    let ordering = match find_afp_ordering(system, solver) {
        Ok(AfpSearch::Found(o)) => o,
        Ok(AfpSearch::NotAfp(v)) => return maybe(format!("not accessible function passing: {v}")),
        Ok(AfpSearch::Unknown(r)) => return maybe(format!("accessible function passing undecided: {r}")),
        Err(e) => return maybe(format!("solver error: {e}")),
    };
    let initial = gen_all(system, goal);
    let mut run = Run { system, solver, strategy, budget, ids: Ids::after(initial.max_id()) };
    let root = run.process(initial, 0);
    let verdict = if root.is_closed() { Verdict::Yes } else { Verdict::Maybe };
    Proof { goal, verdict, ordering: Some(ordering), reason: None, root: Some(root) }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("{processor} on {problem}: {message}")]
    Invalid { processor: ProcessorKind, problem: String, message: String },
    #[error("node {0} is marked empty but is not")]
    NotEmpty(String),
    #[error("verdict {0} does not match the tree")]
    Verdict(Verdict),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn same_problem(a: &DpProblem, b: &DpProblem) -> bool {
    a.flag == b.flag && a.len() == b.len() && a.sdps.iter().all(|p| b.sdps.iter().any(|q| q.id == p.id && q.same_pair(p)))
}

fn without(problem: &DpProblem, removed: &[usize], flag: Flag) -> DpProblem {
    DpProblem::new(problem.sdps.iter().filter(|p| !removed.contains(&p.id)).cloned().collect(), flag)
}

/// Re-validates every witness against the side conditions of its
/// processor, recomputing what the witness does not carry.
pub fn check_proof(system: &Lcstrs, proof: &Proof, solver: &mut Solver) -> Result<(), ProofError> {
    let closed = proof.root.as_ref().is_some_and(ProofNode::is_closed);
    if (proof.verdict == Verdict::Yes) != closed {
        return Err(ProofError::Verdict(proof.verdict));
    }
    if let Some(root) = &proof.root {
        if !same_problem(&root.problem, &gen_all(system, proof.goal)) {
            return Err(ProofError::Invalid {
                processor: ProcessorKind::Graph,
                problem: root.problem.to_string(),
                message: "root is not the initial problem".into(),
            });
        }
        check_node(system, root, solver)?;
    }
    Ok(())
}

fn check_node(system: &Lcstrs, node: &ProofNode, solver: &mut Solver) -> Result<(), ProofError> {
    match &node.outcome {
        Outcome::Empty if !node.problem.is_empty() => Err(ProofError::NotEmpty(node.problem.to_string())),
        Outcome::Empty | Outcome::Unresolved(_) => Ok(()),
        Outcome::Applied { witness, children } => {
            let kids: Vec<DpProblem> = children.iter().map(|c| c.problem.clone()).collect();
            check_application(system, &node.problem, witness, &kids, solver)?;
            for c in children {
                check_node(system, c, solver)?;
            }
            Ok(())
        }
    }
}

fn check_absent_edges(
    system: &Lcstrs,
    problem: &DpProblem,
    edges: &[(usize, usize)],
    solver: &mut Solver,
) -> Result<Option<String>, SolverError> {
    for p0 in &problem.sdps {
        for p1 in &problem.sdps {
            if !edges.contains(&(p0.id, p1.id)) && edge_possible(p0, p1, system, solver)? {
                return Ok(Some(format!("edge {} → {} is missing", p0.id, p1.id)));
            }
        }
    }
    Ok(None)
}

fn labelled_graph(problem: &DpProblem, edges: &[(usize, usize)]) -> GraphApprox {
    let ids = problem.ids();
    let pos = |l: usize| ids.iter().position(|&i| i == l);
    let edges = edges.iter().filter_map(|&(a, b)| Some((pos(a)?, pos(b)?))).collect();
    GraphApprox { ids, edges }
}

fn check_application(
    system: &Lcstrs,
    problem: &DpProblem,
    witness: &Witness,
    children: &[DpProblem],
    solver: &mut Solver,
) -> Result<(), ProofError> {
    let fail = |message: String| ProofError::Invalid { processor: witness.kind(), problem: problem.to_string(), message };
    if problem.flag == Flag::An && children.iter().any(|c| c.flag == Flag::Pu) {
        return Err(fail("an problem produced a pu problem".into()));
    }
    let expect_children = |expected: Vec<DpProblem>| -> Result<(), ProofError> {
        let ok = expected.len() == children.len() && expected.iter().zip(children).all(|(a, b)| same_problem(a, b));
        if ok {
            Ok(())
        } else {
            Err(fail("children do not match the witness".into()))
        }
    };
    match witness {
        Witness::Graph { edges, sccs } => {
            if let Some(m) = check_absent_edges(system, problem, edges, solver)? {
                return Err(fail(m));
            }
            let g = labelled_graph(problem, edges);
            let recomputed: Vec<Vec<usize>> =
                g.nontrivial_sccs().iter().map(|c| c.iter().map(|&i| g.ids[i]).collect()).collect();
            if &recomputed != sccs {
                return Err(fail("SCC partition does not match the edges".into()));
            }
            let expected = sccs
                .iter()
                .map(|c| DpProblem::new(problem.sdps.iter().filter(|p| c.contains(&p.id)).cloned().collect(), Flag::An))
                .collect();
            expect_children(expected)
        }
        Witness::Reach { edges, sources, removed } => {
            if problem.flag != Flag::Pu {
                return Err(fail("reachability on an an problem".into()));
            }
            if let Some(m) = check_absent_edges(system, problem, edges, solver)? {
                return Err(fail(m));
            }
            let public: Vec<usize> =
                problem.sdps.iter().filter(|p| is_public(p, &system.hidden)).map(|p| p.id).collect();
            if &public != sources {
                return Err(fail("sources are not the public pairs".into()));
            }
            let g = labelled_graph(problem, edges);
            let src: Vec<usize> = (0..g.ids.len()).filter(|&i| public.contains(&g.ids[i])).collect();
            let reach = g.reachable_from(&src);
            let unreachable: Vec<usize> = (0..g.ids.len()).filter(|i| !reach.contains(i)).map(|i| g.ids[i]).collect();
            if &unreachable != removed || removed.is_empty() {
                return Err(fail("removed pairs are not exactly the unreachable ones".into()));
            }
            expect_children(vec![without(problem, removed, Flag::Pu)])
        }
        Witness::Subterm { nu, removed } => {
            for p in &problem.sdps {
                let want = if removed.contains(&p.id) { Orientation::Strict } else { Orientation::Equal };
                if orient(p, nu) != want {
                    return Err(fail(format!("pair {} is not oriented as claimed", p.id)));
                }
            }
            if removed.is_empty() {
                return Err(fail("nothing removed".into()));
            }
            expect_children(vec![without(problem, removed, Flag::An)])
        }
        Witness::IntMap { j, removed } => {
            for (f, t) in j {
                let fi = free_indices(problem, f);
                if !t.vars().iter().all(|x| fi.iter().any(|&i| position_var(i) == *x)) {
                    return Err(fail(format!("J({f}) uses a position outside FI")));
                }
            }
            for p in &problem.sdps {
                let got = orientation(p, j, solver)?;
                let ok = if removed.contains(&p.id) { got == Some(true) } else { got.is_some() };
                if !ok {
                    return Err(fail(format!("pair {} is not oriented as claimed", p.id)));
                }
            }
            if removed.is_empty() {
                return Err(fail("nothing removed".into()));
            }
            expect_children(vec![without(problem, removed, Flag::An)])
        }
        Witness::TheoryArg { tau, fixed } => {
            if let Some((f, i)) = violation(problem, tau) {
                return Err(fail(format!("position {i} of {f} breaks the closure conditions")));
            }
            for (f, set) in tau {
                let (tys, _) = f.ty().split();
                if set.iter().any(|&i| i == 0 || i > tys.len() || !tys[i - 1].as_sort().is_some_and(|s| s.is_theory())) {
                    return Err(fail(format!("τ({f}) contains a non-theory position")));
                }
            }
            let really: Vec<usize> = problem.sdps.iter().filter(|p| fixes(tau, p)).map(|p| p.id).collect();
            if fixed.is_empty() || fixed.iter().any(|i| !really.contains(i)) {
                return Err(fail("claimed fixed pairs are not fixed".into()));
            }
            let public = |p: &Sdp| is_public(p, &system.hidden);
            let ext = |p: &Sdp| extend(p, tau);
            let matches = |a: &DpProblem, b: &DpProblem| {
                a.flag == b.flag && a.len() == b.len() && a.sdps.iter().all(|x| b.sdps.iter().any(|y| x.same_pair(y)))
            };
            let all_public_fixed =
                problem.flag == Flag::Pu && problem.sdps.iter().filter(|p| public(p)).all(|p| fixed.contains(&p.id));
            let expected = if all_public_fixed {
                vec![DpProblem::new(
                    problem.sdps.iter().map(|p| if public(p) { p.clone() } else { ext(p) }).collect(),
                    Flag::Pu,
                )]
            } else {
                vec![
                    DpProblem::new(problem.sdps.iter().map(ext).collect(), Flag::An),
                    without(problem, fixed, problem.flag),
                ]
            };
            if expected.len() != children.len() || !expected.iter().zip(children).all(|(a, b)| matches(a, b)) {
                return Err(fail("children do not match the witness".into()));
            }
            Ok(())
        }
        Witness::Split { sdp, atom, into } => {
            let Some(p) = problem.sdps.iter().find(|p| p.id == *sdp) else {
                return Err(fail(format!("pair {sdp} is not in the problem")));
            };
            let phi = Guarded::constraint(p);
            let conj = build::conjuncts(phi);
            let Some(k) = conj.iter().position(|c| c == atom) else {
                return Err(fail("atom is not a conjunct".into()));
            };
            let Some(alts) = split_atom(atom) else { return Err(fail("atom cannot be split".into())) };
            let [child] = children else { return Err(fail("expected one child".into())) };
            if child.flag != problem.flag {
                return Err(fail("flag changed".into()));
            }
            let variants: Vec<&Sdp> = child.sdps.iter().filter(|q| into.contains(&q.id)).collect();
            if variants.len() != alts.len() {
                return Err(fail("variants missing".into()));
            }
            for (q, a) in variants.iter().zip(&alts) {
                let same_shape = q.lhs() == p.lhs() && q.rhs() == p.rhs() && q.lvars() == p.lvars();
                if !same_shape || Guarded::constraint(*q) != &replace_conjunct(phi, k, a.clone()) {
                    return Err(fail(format!("pair {} is not a variant of {sdp}", q.id)));
                }
            }
            let disj = build::or_all(variants.iter().map(|q| Guarded::constraint(*q).clone()));
            if !solver.check_entailment(phi, &disj)?.is_valid() {
                return Err(fail("variants do not cover the original".into()));
            }
            let others_kept = problem.sdps.iter().filter(|q| q.id != *sdp).all(|q| child.sdps.contains(q))
                && child.len() == problem.len() - 1 + variants.len();
            if !others_kept {
                return Err(fail("other pairs changed".into()));
            }
            Ok(())
        }
    }
}
