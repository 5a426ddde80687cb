//! Extension point for constrained reduction pairs. No instance ships with
//! the crate and the strategy never calls it.

use alloc::vec;
use alloc::vec::Vec;

use crate::sdp::{DpProblem, Flag, Sdp};
use crate::trs::Lcstrs;

/// A constrained reduction pair `(≿, ≻)` supplied by the caller.
pub trait ReductionPair {
    /// `s♯ ≻ t♯ [φ] L`.
    fn orient_strict(&mut self, p: &Sdp) -> bool;
    /// `s♯ ≿ t♯ [φ] L`.
    fn orient_weak(&mut self, p: &Sdp) -> bool;
    /// `ℓ ≿ r [φ] Var(φ) ∪ (Var(r) \ Var(ℓ))` for every rule.
    fn orient_rules(&mut self, system: &Lcstrs) -> bool;
}

/// Removes the strictly oriented pairs. Not applicable to `pu` problems,
/// which quantify over unknown extensions.
pub fn reduction_pair_processor(
    problem: &DpProblem,
    system: &Lcstrs,
    pair: &mut dyn ReductionPair,
) -> Option<Vec<DpProblem>> {
    if problem.flag == Flag::Pu || !pair.orient_rules(system) {
        return None;
    }
    let mut rest = Vec::new();
    let mut removed = false;
    for p in &problem.sdps {
        if pair.orient_strict(p) {
            removed = true;
        } else if pair.orient_weak(p) {
            rest.push(p.clone());
        } else {
            return None;
        }
    }
    removed.then(|| vec![DpProblem::new(rest, Flag::An)])
}
