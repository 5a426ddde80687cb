//! Sort orderings, accessible argument positions and the accessible
//! function passing (AFP) condition.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kernel::{build, Sort, Symbol, Term, TermKind, Type, Var};
use crate::solver::{Solver, SolverError, SolverVerdict};
use crate::theory::{Guarded, Value};
use crate::trs::Lcstrs;

/// A quasi-ordering on sorts given by integer ranks: `a ≿ b` iff
/// `rank(a) >= rank(b)`. Sorts without a rank have rank 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SortOrdering {
    ranks: BTreeMap<Sort, i64>,
}

impl SortOrdering {
    /// Every sort equivalent to every other.
    pub fn all_equal() -> SortOrdering {
        SortOrdering::default()
    }

    pub fn from_ranks<I: IntoIterator<Item = (Sort, i64)>>(ranks: I) -> SortOrdering {
        SortOrdering { ranks: ranks.into_iter().collect() }
    }

    pub fn rank(&self, s: &Sort) -> i64 {
        self.ranks.get(s).copied().unwrap_or(0)
    }

    pub fn ge(&self, a: &Sort, b: &Sort) -> bool {
        self.rank(a) >= self.rank(b)
    }

    pub fn gt(&self, a: &Sort, b: &Sort) -> bool {
        self.rank(a) > self.rank(b)
    }

    /// Number of ordered pairs `(a, b)` from `sorts` with `a ≻ b`.
    pub fn strict_pairs(&self, sorts: &[Sort]) -> usize {
        sorts.iter().flat_map(|a| sorts.iter().map(move |b| (a, b))).filter(|(a, b)| self.gt(a, b)).count()
    }
}

impl fmt::Display for SortOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut by_rank: BTreeMap<i64, Vec<&str>> = BTreeMap::new();
        for (s, r) in &self.ranks {
            by_rank.entry(*r).or_default().push(s.name());
        }
        if by_rank.len() <= 1 {
            return f.write_str("all sorts equivalent");
        }
        let groups: Vec<String> = by_rank.values().rev().map(|g| g.join(" ≈ ")).collect();
        f.write_str(&groups.join(" ≻ "))
    }
}

/// `a ⊒+ b`.
pub fn plus(ord: &SortOrdering, a: &Sort, b: &Type) -> bool {
    let (args, c) = b.split();
    ord.ge(a, c) && args.into_iter().all(|bi| minus(ord, a, bi))
}

/// `a ⊒− b`.
pub fn minus(ord: &SortOrdering, a: &Sort, b: &Type) -> bool {
    let (args, c) = b.split();
    ord.gt(a, c) && args.into_iter().all(|bi| plus(ord, a, bi))
}

/// `Acc(f)`, one-based.
pub fn acc_positions(f: &Symbol, ord: &SortOrdering) -> BTreeSet<usize> {
    let (args, out) = f.ty().split();
    args.into_iter().enumerate().filter(|(_, ai)| plus(ord, out, ai)).map(|(i, _)| i + 1).collect()
}

/// Every variable `x` with `t ⊵acc x`.
pub fn acc_subterm_vars(t: &Term, ord: &SortOrdering) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_acc(t, ord, &mut out);
    out
}

fn collect_acc(t: &Term, ord: &SortOrdering, out: &mut BTreeSet<Var>) {
    if let TermKind::Var(x) = t.kind() {
        out.insert(x.clone());
        return;
    }
    if let Some(f) = t.head_symbol() {
        let acc = acc_positions(f, ord);
        for (i, a) in t.args().into_iter().enumerate() {
            if acc.contains(&(i + 1)) {
                collect_acc(a, ord, out);
            }
        }
    }
}

/// A variable the AFP condition cannot reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AfpViolation {
    /// Zero-based rule index.
    pub rule: usize,
    pub var: Var,
}

impl fmt::Display for AfpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "variable {} of rule {} is not an accessible subterm of any left-hand side argument",
            self.var.name(),
            self.rule + 1
        )
    }
}

/// Variables that must be accessible: `Var(ℓ) ∩ Var(r) \ Var(φ)`.
fn obligations(system: &Lcstrs) -> Vec<(usize, Var, Vec<Term>)> {
    let mut out = Vec::new();
    for (i, r) in system.rules.iter().enumerate() {
        let phi_vars = Guarded::constraint(r).vars();
        let rhs_vars = r.rhs().vars();
        let args: Vec<Term> = r.lhs().args().into_iter().cloned().collect();
        for x in r.lhs().vars() {
            if rhs_vars.contains(&x) && !phi_vars.contains(&x) {
                out.push((i, x, args.clone()));
            }
        }
    }
    out
}

/// Checks the AFP condition for a given ordering by direct unfolding.
pub fn check_afp(system: &Lcstrs, ord: &SortOrdering) -> Result<(), AfpViolation> {
    for (rule, var, args) in obligations(system) {
        if !args.iter().any(|s| acc_subterm_vars(s, ord).contains(&var)) {
            return Err(AfpViolation { rule, var });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AfpSearch {
    Found(SortOrdering),
    /// No ordering exists; the violation is the one reported for the
    /// all-equal ordering.
    NotAfp(AfpViolation),
    Unknown(String),
}

/// Searches for an AFP witness with the fewest strict pairs.
pub fn find_afp_ordering(system: &Lcstrs, solver: &mut Solver) -> Result<AfpSearch, SolverError> {
    let flat = SortOrdering::all_equal();
    let first_violation = match check_afp(system, &flat) {
        Ok(()) => return Ok(AfpSearch::Found(flat)),
        Err(v) => v,
    };
    let sorts: Vec<Sort> = system.signature.sorts().to_vec();
    let n = sorts.len() as i64;
    let rank_var = |s: &Sort| Var::new(&format!("rank {}", s.name()), Type::int());
    let rank = |s: &Sort| Term::var(rank_var(s));

    let mut base = Vec::new();
    for s in &sorts {
        base.push(build::ge(rank(s), Term::int(0)));
        base.push(build::lt(rank(s), Term::int(n)));
    }
    for (_, var, args) in obligations(system) {
        let alts = args.iter().map(|s| acc_formula(s, &var, &rank)).collect::<Vec<_>>();
        base.push(build::or_all(alts));
    }
    let mut counters = Vec::new();
    for a in &sorts {
        for b in &sorts {
            if a == b {
                continue;
            }
            let c = Term::var(Var::new(&format!("strict {}>{}", a.name(), b.name()), Type::int()));
            base.push(build::ge(c.clone(), Term::int(0)));
            base.push(build::le(c.clone(), Term::int(1)));
            base.push(build::or(build::le(rank(a), rank(b)), build::eq(c.clone(), Term::int(1))));
            counters.push(c);
        }
    }
    let total = counters.into_iter().reduce(build::add).unwrap_or_else(|| Term::int(0));
    let max = sorts.len() * sorts.len().saturating_sub(1) / 2;
    let mut unknown = None;
    for k in 1..=max.max(1) {
        let phi = build::and(build::and_all(base.iter().cloned()), build::le(total.clone(), Term::int(k as i64)));
        match solver.check_sat(&phi)? {
            SolverVerdict::Sat(model) => {
                let ord = SortOrdering::from_ranks(sorts.iter().map(|s| {
                    let r = match model.get(&rank_var(s)) {
                        Some(Value::Int(r)) => i64::try_from(r.clone()).unwrap_or(0),
                        _ => 0,
                    };
                    (s.clone(), r)
                }));
                return Ok(match check_afp(system, &ord) {
                    Ok(()) => AfpSearch::Found(ord),
                    Err(v) => AfpSearch::Unknown(format!("rank model failed the direct check: {v}")),
                });
            }
            SolverVerdict::Unsat => {}
            SolverVerdict::Unknown(r) => unknown = Some(r),
        }
    }
    Ok(match unknown {
        Some(r) => AfpSearch::Unknown(r),
        None => AfpSearch::NotAfp(first_violation),
    })
}

/// A constraint over sort ranks that holds iff `s ⊵acc x`.
fn acc_formula(s: &Term, x: &Var, rank: &dyn Fn(&Sort) -> Term) -> Term {
    if s.as_var() == Some(x) {
        return build::tt();
    }
    if !s.contains_var(x) {
        return build::ff();
    }
    let Some(f) = s.head_symbol() else { return build::ff() };
    let (tys, out) = f.ty().split();
    let alts = s
        .args()
        .into_iter()
        .zip(tys)
        .map(|(si, ai)| build::and(plus_formula(out, ai, rank), acc_formula(si, x, rank)))
        .collect::<Vec<_>>();
    build::or_all(alts)
}

fn plus_formula(a: &Sort, b: &Type, rank: &dyn Fn(&Sort) -> Term) -> Term {
    let (args, c) = b.split();
    let head = if a == c { build::tt() } else { build::ge(rank(a), rank(c)) };
    build::and_all(core::iter::once(head).chain(args.into_iter().map(|bi| minus_formula(a, bi, rank))))
}

fn minus_formula(a: &Sort, b: &Type, rank: &dyn Fn(&Sort) -> Term) -> Term {
    let (args, c) = b.split();
    if a == c {
        return build::ff();
    }
    let head = build::gt(rank(a), rank(c));
    build::and_all(core::iter::once(head).chain(args.into_iter().map(|bi| plus_formula(a, bi, rank))))
}
