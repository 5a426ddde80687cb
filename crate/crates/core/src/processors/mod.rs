//! DP processors and the strategy loop.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kernel::Term;
use crate::sdp::DpProblem;

pub mod graph;
pub mod intmap;
pub mod modify;
pub mod rpair;
pub mod strategy;
pub mod subterm;
pub mod theory_arg;

pub use graph::{build_graph, graph_processor, reachability, zeta, GraphApprox};
pub use intmap::{integer_mapping, IntegerMapping};
pub use modify::constraint_modification;
pub use strategy::{check_proof, solve, Budget, Outcome, Proof, ProofError, ProofNode, Steps, Strategy, Unlimited, Verdict};
pub use subterm::{subterm_criterion, Projection};
pub use theory_arg::{theory_argument, TheoryArgMap};

/// Source of fresh SDP labels.
#[derive(Clone, Debug)]
pub struct Ids(usize);

impl Ids {
    /// Labels strictly above `max`.
    pub fn after(max: usize) -> Ids {
        Ids(max)
    }

    pub fn fresh(&mut self) -> usize {
        self.0 += 1;
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessorKind {
    Graph,
    Subterm,
    IntegerMapping,
    TheoryArgument,
    ConstraintModification,
    Reachability,
}

impl ProcessorKind {
    pub fn name(self) -> &'static str {
        match self {
            ProcessorKind::Graph => "graph",
            ProcessorKind::Subterm => "subterm criterion",
            ProcessorKind::IntegerMapping => "integer mapping",
            ProcessorKind::TheoryArgument => "theory argument",
            ProcessorKind::ConstraintModification => "constraint modification",
            ProcessorKind::Reachability => "reachability",
        }
    }
}

impl fmt::Display for ProcessorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a processor found; SDPs are referred to by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Graph { edges: Vec<(usize, usize)>, sccs: Vec<Vec<usize>> },
    Subterm { nu: Projection, removed: Vec<usize> },
    IntMap { j: IntegerMapping, removed: Vec<usize> },
    TheoryArg { tau: TheoryArgMap, fixed: Vec<usize> },
    Split { sdp: usize, atom: Term, into: Vec<usize> },
    Reach { edges: Vec<(usize, usize)>, sources: Vec<usize>, removed: Vec<usize> },
}

impl Witness {
    pub fn kind(&self) -> ProcessorKind {
        match self {
            Witness::Graph { .. } => ProcessorKind::Graph,
            Witness::Subterm { .. } => ProcessorKind::Subterm,
            Witness::IntMap { .. } => ProcessorKind::IntegerMapping,
            Witness::TheoryArg { .. } => ProcessorKind::TheoryArgument,
            Witness::Split { .. } => ProcessorKind::ConstraintModification,
            Witness::Reach { .. } => ProcessorKind::Reachability,
        }
    }
}

pub(crate) fn label_set(ids: &[usize]) -> String {
    let parts: Vec<String> = ids.iter().map(|i| format!("{i}")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Graph { sccs, .. } if sccs.is_empty() => f.write_str("no cycles"),
            Witness::Graph { sccs, .. } => {
                let parts: Vec<String> = sccs.iter().map(|c| label_set(c)).collect();
                write!(f, "SCCs {}", parts.join(", "))
            }
            Witness::Subterm { nu, removed } => {
                let parts: Vec<String> = nu.iter().map(|(g, i)| format!("ν({g})={i}")).collect();
                write!(f, "{}; removes {}", parts.join(", "), label_set(removed))
            }
            Witness::IntMap { j, removed } => {
                let parts: Vec<String> = j.iter().map(|(g, t)| format!("J({g})={t}")).collect();
                write!(f, "{}; removes {}", parts.join(", "), label_set(removed))
            }
            Witness::TheoryArg { tau, fixed } => {
                let parts: Vec<String> = tau
                    .iter()
                    .map(|(g, s)| format!("τ({g})={}", label_set(&s.iter().copied().collect::<Vec<_>>())))
                    .collect();
                write!(f, "{}; fixes {}", parts.join(", "), label_set(fixed))
            }
            Witness::Split { sdp, atom, into } => write!(f, "{sdp} split on {atom} into {}", label_set(into)),
            Witness::Reach { sources, removed, .. } => {
                write!(f, "public {}; removes {}", label_set(sources), label_set(removed))
            }
        }
    }
}

/// A successful processor application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Application {
    pub witness: Witness,
    pub children: Vec<DpProblem>,
}
