//! Constraint modification: splitting `≠` and `∨` conjuncts.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{build, Term, TheoryOp};
use crate::sdp::{DpProblem, Sdp};
use crate::theory::Guarded;

use super::graph::GraphApprox;
use super::{Application, Ids, Witness};

/// The alternatives replacing a conjunct, if it can be split.
pub fn split_atom(atom: &Term) -> Option<Vec<Term>> {
    let op = atom.head_symbol()?.theory_op()?;
    let args = atom.args();
    match op {
        TheoryOp::Neq(false) if args.len() == 2 => {
            Some(vec![build::lt(args[0].clone(), args[1].clone()), build::gt(args[0].clone(), args[1].clone())])
        }
        TheoryOp::Or if args.len() == 2 => Some(vec![args[0].clone(), args[1].clone()]),
        TheoryOp::Not if args.len() == 1 => {
            let inner = args[0];
            match inner.head_symbol()?.theory_op()? {
                TheoryOp::Eq(false) => split_atom(&build::neq(inner.args()[0].clone(), inner.args()[1].clone())),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Rebuilds a constraint with the `k`-th conjunct replaced.
pub fn replace_conjunct(phi: &Term, k: usize, by: Term) -> Term {
    let mut parts = build::conjuncts(phi);
    parts[k] = by;
    build::and_all(parts)
}

/// Splits the first splittable conjunct of the first pair on a cycle of
/// the graph.
pub fn constraint_modification(problem: &DpProblem, graph: &GraphApprox, ids: &mut Ids) -> Option<Application> {
    let cyclic: Vec<usize> = graph.nontrivial_sccs().into_iter().flatten().collect();
    for (i, p) in problem.sdps.iter().enumerate() {
        if !cyclic.contains(&i) {
            continue;
        }
        let phi = Guarded::constraint(p);
        for (k, atom) in build::conjuncts(phi).into_iter().enumerate() {
            let Some(alts) = split_atom(&atom) else { continue };
            let variants: Vec<Sdp> = alts
                .into_iter()
                .map(|a| {
                    let c = replace_conjunct(phi, k, a);
                    Sdp::new(p.lhs().clone(), p.rhs().clone(), c, p.lvars().clone())
                        .expect("same variables")
                        .with_id(ids.fresh())
                })
                .collect();
            let into = variants.iter().map(|q| q.id).collect();
            let mut sdps: Vec<Sdp> = Vec::new();
            for q in &problem.sdps {
                if q.id == p.id {
                    sdps.extend(variants.iter().cloned());
                } else {
                    sdps.push(q.clone());
                }
            }
            return Some(Application {
                witness: Witness::Split { sdp: p.id, atom, into },
                children: vec![DpProblem::new(sdps, problem.flag)],
            });
        }
    }
    None
}
