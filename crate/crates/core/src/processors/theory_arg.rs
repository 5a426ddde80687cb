//! Theory argument mappings and their fixpoint search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{Symbol, Var};
use crate::sdp::{is_public, DpProblem, Flag, Sdp};
use crate::theory::{is_theory_term, is_theory_term_any, Guarded};
use crate::trs::Lcstrs;

use super::{Application, Ids, Witness};

pub type TheoryArgMap = BTreeMap<Symbol, BTreeSet<usize>>;

fn positions(tau: &TheoryArgMap, f: &Symbol) -> BTreeSet<usize> {
    tau.get(f).cloned().unwrap_or_default()
}

/// `L ∪ ⋃ Var(s_i)` over the lhs τ-positions.
pub fn extended_l(p: &Sdp, tau: &TheoryArgMap) -> BTreeSet<Var> {
    let mut l = p.lvars().clone();
    let args = p.lhs().args();
    for i in positions(tau, p.lhs_head()) {
        args[i - 1].collect_vars(&mut l);
    }
    l
}

/// `τ̄(p)`, unlabelled when `L` grows.
pub fn extend(p: &Sdp, tau: &TheoryArgMap) -> Sdp {
    let l = extended_l(p, tau);
    if &l == p.lvars() {
        return p.clone();
    }
    Sdp::new(p.lhs().clone(), p.rhs().clone(), Guarded::constraint(p).clone(), l).expect("closure keeps L theory-sorted")
}

/// The first closure violation of `τ`, as (head, position).
pub fn violation(problem: &DpProblem, tau: &TheoryArgMap) -> Option<(Symbol, usize)> {
    for p in &problem.sdps {
        let f = p.lhs_head();
        let ss = p.lhs().args();
        for i in positions(tau, f) {
            if !is_theory_term_any(ss[i - 1]) {
                return Some((f.clone(), i));
            }
        }
        let allowed = extended_l(p, tau);
        let g = p.rhs_head();
        let ts = p.rhs().args();
        for j in positions(tau, g) {
            if !is_theory_term(ts[j - 1], &allowed) {
                return Some((g.clone(), j));
            }
        }
    }
    None
}

/// Whether `τ` fixes `p`.
pub fn fixes(tau: &TheoryArgMap, p: &Sdp) -> bool {
    let ts = p.rhs().args();
    positions(tau, p.rhs_head()).into_iter().all(|j| ts[j - 1].vars().is_subset(p.lvars()))
}

fn theory_positions(f: &Symbol) -> BTreeSet<usize> {
    let (tys, _) = f.ty().split();
    tys.iter().enumerate().filter(|(_, t)| t.as_sort().is_some_and(|s| s.is_theory())).map(|(i, _)| i + 1).collect()
}

/// Starts from all theory positions, forces `p0` to be fixed and removes
/// offending positions until the closure conditions hold.
pub fn fixpoint(problem: &DpProblem, p0: &Sdp) -> TheoryArgMap {
    let mut tau: TheoryArgMap = problem.heads().into_iter().map(|f| {
        let ps = theory_positions(&f);
        (f, ps)
    }).collect();
    let ts = p0.rhs().args();
    if let Some(set) = tau.get_mut(p0.rhs_head()) {
        set.retain(|&j| ts[j - 1].vars().is_subset(p0.lvars()) && is_theory_term_any(ts[j - 1]));
    }
    while let Some((f, i)) = violation(problem, &tau) {
        tau.get_mut(&f).expect("violations name heads").remove(&i);
    }
    tau
}

pub fn theory_argument(problem: &DpProblem, system: &Lcstrs, ids: &mut Ids) -> Option<Application> {
    for p0 in &problem.sdps {
        let tau = fixpoint(problem, p0);
        let fixed: Vec<usize> = problem.sdps.iter().filter(|p| fixes(&tau, p)).map(|p| p.id).collect();
        if fixed.is_empty() {
            continue;
        }
        let public = |p: &Sdp| is_public(p, &system.hidden);
        let all_public_fixed =
            problem.flag == Flag::Pu && problem.sdps.iter().filter(|p| public(p)).all(|p| fixed.contains(&p.id));
        let grows = |p: &Sdp| extended_l(p, &tau) != *p.lvars();
        let changes = if all_public_fixed {
            problem.sdps.iter().any(|p| !public(p) && grows(p))
        } else {
            problem.sdps.iter().any(grows)
        };
        if !changes {
            continue;
        }
        let mut relabel = |p: &Sdp| {
            let q = extend(p, &tau);
            if q.same_pair(p) {
                p.clone()
            } else {
                q.with_id(ids.fresh())
            }
        };
        let children = if all_public_fixed {
            let sdps = problem.sdps.iter().map(|p| if public(p) { p.clone() } else { relabel(p) }).collect();
            vec![DpProblem::new(sdps, Flag::Pu)]
        } else {
            let extended = problem.sdps.iter().map(&mut relabel).collect();
            let rest = problem.sdps.iter().filter(|p| !fixed.contains(&p.id)).cloned().collect();
            vec![DpProblem::new(extended, Flag::An), DpProblem::new(rest, problem.flag)]
        };
        return Some(Application { witness: Witness::TheoryArg { tau, fixed }, children });
    }
    None
}
