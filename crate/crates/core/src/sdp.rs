//! Marked symbols, static dependency pairs, DP problems and a bounded chain
//! enumerator used as a test oracle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::kernel::{build, Sort, Subst, Symbol, Term, Var};
use crate::theory::{self, is_theory_term_any, Guarded, Instantiation};
use crate::trs::{self, Lcstrs};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SdpError {
    #[error("{0} is not headed by a defined symbol")]
    NotDefined(Term),
    #[error("{0} is not a full application of a marked symbol")]
    NotMarked(Term),
    #[error("constraint variable {0} is missing from L")]
    ConstraintVarOutsideL(String),
    #[error("variable {0} in L does not have a theory sort")]
    NonTheoryL(String),
    #[error("{0} is not a logical constraint")]
    BadConstraint(Term),
}

/// `t♯` for `t = f t1 … tn` with `f` defined.
pub fn mark(t: &Term, system: &Lcstrs) -> Result<Term, SdpError> {
    match t.head_symbol() {
        Some(f) if system.is_defined(f) => Ok(t.with_head(f.marked()).expect("marked symbol keeps argument types")),
        _ => Err(SdpError::NotDefined(t.clone())),
    }
}

/// `⟨lhs ⇒ rhs [constraint] L⟩`, with a numeric label used in proofs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sdp {
    pub id: usize,
    lhs: Term,
    rhs: Term,
    constraint: Term,
    lvars: BTreeSet<Var>,
}

fn is_full_marked(t: &Term) -> bool {
    t.ty().as_sort() == Some(&Sort::dp()) && t.head_symbol().is_some_and(Symbol::is_marked)
}

impl Sdp {
    pub fn new(lhs: Term, rhs: Term, constraint: Term, lvars: BTreeSet<Var>) -> Result<Sdp, SdpError> {
        for t in [&lhs, &rhs] {
            if !is_full_marked(t) {
                return Err(SdpError::NotMarked(t.clone()));
            }
        }
        if !constraint.ty().as_sort().is_some_and(|s| s.is_bool()) || !is_theory_term_any(&constraint) {
            return Err(SdpError::BadConstraint(constraint));
        }
        if let Some(x) = constraint.vars().into_iter().find(|x| !lvars.contains(x)) {
            return Err(SdpError::ConstraintVarOutsideL(x.name().into()));
        }
        if let Some(x) = lvars.iter().find(|x| !x.has_theory_sort()) {
            return Err(SdpError::NonTheoryL(x.name().into()));
        }
        Ok(Sdp { id: 0, lhs, rhs, constraint, lvars })
    }

    pub fn with_id(mut self, id: usize) -> Sdp {
        self.id = id;
        self
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn lvars(&self) -> &BTreeSet<Var> {
        &self.lvars
    }

    pub fn lhs_head(&self) -> &Symbol {
        self.lhs.head_symbol().expect("checked on construction")
    }

    pub fn rhs_head(&self) -> &Symbol {
        self.rhs.head_symbol().expect("checked on construction")
    }

    /// All variables of the pair.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        out.extend(self.lvars.iter().cloned());
        out
    }

    /// Same pair up to the label.
    pub fn same_pair(&self, other: &Sdp) -> bool {
        self.lhs == other.lhs && self.rhs == other.rhs && self.constraint == other.constraint && self.lvars == other.lvars
    }

    /// Renames every variable by appending `suffix`.
    pub fn renamed(&self, suffix: &str) -> Sdp {
        let r = |x: &Var| x.suffixed(suffix);
        Sdp {
            id: self.id,
            lhs: self.lhs.rename_vars(&r),
            rhs: self.rhs.rename_vars(&r),
            constraint: self.constraint.rename_vars(&r),
            lvars: self.lvars.iter().map(r).collect(),
        }
    }
}

impl Guarded for Sdp {
    fn constraint(&self) -> &Term {
        &self.constraint
    }
    fn guarded_vars(&self) -> BTreeSet<Var> {
        self.lvars.clone()
    }
    fn instantiation(&self) -> Instantiation {
        Instantiation::GroundTheoryTerms
    }
}

impl fmt::Display for Sdp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⇒ {}", self.lhs, self.rhs)?;
        if !build::is_true(&self.constraint) {
            write!(f, " [{}]", self.constraint)?;
        }
        let names: Vec<&str> = self.lvars.iter().map(Var::name).collect();
        write!(f, " {{{}}}", names.join(", "))
    }
}

/// The SDPs of one rule, innermost candidate subterms first. Labels are
/// left at 0.
pub fn gen_sdps(system: &Lcstrs, rule_index: usize) -> Vec<Sdp> {
    let rule = &system.rules[rule_index];
    let Some(f) = rule.head() else { return Vec::new() };
    let tag = rule_index + 1;
    let (arg_tys, _) = f.ty().split();
    let given = rule.lhs().arg_count();
    let xs: Vec<Term> = arg_tys[given..]
        .iter()
        .enumerate()
        .map(|(i, ty)| Term::var(Var::new(&format!("_x{tag}_{}", given + i + 1), (*ty).clone())))
        .collect();
    let lhs = Term::apply(rule.lhs().with_head(f.marked()).expect("marking keeps types"), xs.iter().cloned())
        .expect("fresh variables have the argument types");
    let rhs = Term::apply(rule.rhs().clone(), xs).expect("rule sides share a type");
    let phi = Guarded::constraint(rule).clone();
    let lvars = rule.logical_vars();

    let mut out: Vec<Sdp> = Vec::new();
    for u in innermost_first(&rhs) {
        let Some(g) = u.head_symbol() else { continue };
        if !system.is_defined(g) {
            continue;
        }
        let (g_tys, _) = g.ty().split();
        let q = u.arg_count();
        let ys = g_tys[q..]
            .iter()
            .enumerate()
            .map(|(j, ty)| Term::var(Var::new(&format!("_y{tag}_{}", q + j + 1), (*ty).clone())));
        let t = Term::apply(u.with_head(g.marked()).expect("marking keeps types"), ys).expect("typed padding");
        let p = Sdp::new(lhs.clone(), t, phi.clone(), lvars.clone()).expect("generated pairs are well-formed");
        if !out.iter().any(|o| o.same_pair(&p)) {
            out.push(p);
        }
    }
    out
}

/// Subterms of `t` in post-order: arguments left to right before the
/// term itself.
fn innermost_first(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    push_post(t, &mut out);
    let mut seen = BTreeSet::new();
    out.retain(|u| seen.insert(u.clone()));
    out
}

fn push_post(t: &Term, out: &mut Vec<Term>) {
    for a in t.args() {
        push_post(a, out);
    }
    out.push(t.clone());
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    /// Any computable chain.
    An,
    /// Public computability: only chains from public SDPs matter.
    Pu,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::An => "an",
            Flag::Pu => "pu",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Termination,
    Public,
}

/// A set of SDPs with a flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpProblem {
    pub sdps: Vec<Sdp>,
    pub flag: Flag,
}

impl DpProblem {
    pub fn new(sdps: Vec<Sdp>, flag: Flag) -> DpProblem {
        let mut out: Vec<Sdp> = Vec::new();
        for p in sdps {
            if !out.iter().any(|o| o.same_pair(&p)) {
                out.push(p);
            }
        }
        out.sort_by_key(|p| p.id);
        DpProblem { sdps: out, flag }
    }

    pub fn is_empty(&self) -> bool {
        self.sdps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sdps.len()
    }

    pub fn ids(&self) -> Vec<usize> {
        self.sdps.iter().map(|p| p.id).collect()
    }

    pub fn max_id(&self) -> usize {
        self.sdps.iter().map(|p| p.id).max().unwrap_or(0)
    }

    /// Marked symbols heading either side of some pair.
    pub fn heads(&self) -> BTreeSet<Symbol> {
        self.sdps.iter().flat_map(|p| [p.lhs_head().clone(), p.rhs_head().clone()]).collect()
    }

    pub fn same_as(&self, other: &DpProblem) -> bool {
        self.flag == other.flag && {
            let mut a = self.ids();
            let mut b = other.ids();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        }
    }
}

impl fmt::Display for DpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.sdps.iter().map(|p| format!("{}", p.id)).collect();
        write!(f, "({{{}}}, {})", ids.join(", "), self.flag)
    }
}

/// `SDP(R)` labelled `1, 2, …` in rule order.
pub fn gen_all(system: &Lcstrs, goal: Goal) -> DpProblem {
    let flag = match goal {
        Goal::Termination => Flag::An,
        Goal::Public => Flag::Pu,
    };
    let mut all = Vec::new();
    for i in 0..system.rules.len() {
        for p in gen_sdps(system, i) {
            if !all.iter().any(|o: &Sdp| o.same_pair(&p)) {
                let id = all.len() + 1;
                all.push(p.with_id(id));
            }
        }
    }
    DpProblem::new(all, flag)
}

/// Whether the unmarked lhs head is not hidden.
pub fn is_public(p: &Sdp, hidden: &BTreeSet<Symbol>) -> bool {
    let name = p.lhs_head().name();
    !hidden.iter().any(|h| h.name() == name)
}

/// One element of a chain: a pair (by position in the input slice) and the
/// substitution instantiating it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub sdp: usize,
    pub subst: Subst,
}

/// Every chain of length at most `max_len` whose substitutions draw from
/// `pool` and whose links are connected within `steps` rewrite steps. The
/// empty chain comes first.
pub fn enumerate_chains(
    pairs: &[Sdp],
    system: &Lcstrs,
    max_len: usize,
    pool: &[Term],
    steps: usize,
) -> Vec<Vec<ChainLink>> {
    let values: Vec<theory::Value> = pool.iter().filter_map(|t| theory::interpret(t).ok()).collect();
    let instances: Vec<(ChainLink, Term, Term)> = pairs
        .iter()
        .enumerate()
        .flat_map(|(i, p)| {
            instantiations(p, pool)
                .into_iter()
                .filter(|s| theory::respects(s, p).unwrap_or(false))
                .map(move |s| {
                    let l = p.lhs().substitute(&s);
                    let r = p.rhs().substitute(&s);
                    (ChainLink { sdp: i, subst: s }, l, r)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut reach: BTreeMap<usize, BTreeSet<Term>> = BTreeMap::new();
    let mut out: Vec<Vec<ChainLink>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    if max_len >= 1 {
        frontier = (0..instances.len()).map(|i| vec![i]).collect();
    }
    let mut len = 1;
    while !frontier.is_empty() {
        for c in &frontier {
            out.push(c.iter().map(|&i| instances[i].0.clone()).collect());
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for c in frontier {
            let last = *c.last().expect("non-empty");
            let reachable = reach
                .entry(last)
                .or_insert_with(|| reachable_within(system, &instances[last].2, steps, &values));
            for (j, inst) in instances.iter().enumerate() {
                if reachable.contains(&inst.1) {
                    let mut d = c.clone();
                    d.push(j);
                    next.push(d);
                }
            }
        }
        frontier = next;
        len += 1;
    }
    out
}

/// Terms reachable from `t` in at most `steps` steps.
pub fn reachable_within(system: &Lcstrs, t: &Term, steps: usize, values: &[theory::Value]) -> BTreeSet<Term> {
    let mut seen = BTreeSet::new();
    seen.insert(t.clone());
    let mut layer = vec![t.clone()];
    for _ in 0..steps {
        let mut next = Vec::new();
        for u in &layer {
            for s in trs::reducts(system, u, values) {
                if seen.insert(s.result.clone()) {
                    next.push(s.result);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    seen
}

/// Every substitution mapping the pair's variables to pool terms of the
/// right type.
fn instantiations(p: &Sdp, pool: &[Term]) -> Vec<Subst> {
    let mut acc = vec![Subst::new()];
    for x in p.vars() {
        let cands: Vec<&Term> = pool.iter().filter(|t| t.ty() == x.ty()).collect();
        acc = acc
            .into_iter()
            .flat_map(|s| {
                let x = &x;
                cands.iter().filter_map(move |t| s.clone().with(x.clone(), (*t).clone()).ok())
            })
            .collect();
    }
    acc
}

/// Whether `t` contains a marked symbol below its head.
pub fn marked_inside(t: &Term) -> bool {
    t.args().into_iter().any(|a| a.any_symbol(&Symbol::is_marked))
}

#[cfg(test)]
mod tests;
