//! Integer mappings: candidate generation, orientation checks and an SMT
//! selection of one candidate per head.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{build, Subst, Symbol, Term, TheoryOp, Type, Var};
use crate::sdp::{DpProblem, Flag, Sdp};
use crate::solver::{Solver, SolverError, SolverVerdict};
use crate::theory::{is_theory_term, Guarded};

use super::{Application, Witness};

pub type IntegerMapping = BTreeMap<Symbol, Term>;

/// `x_{f♯,i}`; the head is implicit in the mapping.
pub fn position_var(i: usize) -> Var {
    Var::new(&format!("x{i}"), Type::int())
}

/// `FI(f♯)`, one-based, restricted to `Int` positions.
pub fn free_indices(problem: &DpProblem, f: &Symbol) -> BTreeSet<usize> {
    let (tys, _) = f.ty().split();
    let mut out: BTreeSet<usize> =
        tys.iter().enumerate().filter(|(_, t)| t.as_sort().is_some_and(|s| s.is_int())).map(|(i, _)| i + 1).collect();
    for p in &problem.sdps {
        for side in [p.lhs(), p.rhs()] {
            if side.head_symbol() != Some(f) {
                continue;
            }
            let args = side.args();
            out.retain(|&i| is_theory_term(args[i - 1], p.lvars()));
        }
    }
    out
}

/// `J̄(t)`.
pub fn apply_mapping(j: &IntegerMapping, t: &Term) -> Option<Term> {
    let f = t.head_symbol()?;
    let body = j.get(f)?;
    let sigma: Subst = t
        .args()
        .into_iter()
        .enumerate()
        .map(|(i, a)| (position_var(i + 1), a.clone()))
        .filter(|(x, _)| body.contains_var(x))
        .collect();
    Some(body.substitute(&sigma))
}

/// A nonnegativity witness `e` with `atom ⊨ e >= 0`.
fn witness_of(atom: &Term) -> Option<Term> {
    let op = atom.head_symbol()?.theory_op()?.clone();
    let args = atom.args();
    if args.len() != 2 || !args[0].ty().as_sort().is_some_and(|s| s.is_int()) {
        return None;
    }
    let (a, b) = (args[0].clone(), args[1].clone());
    Some(match op {
        TheoryOp::Lt => build::sub(build::sub(b, a), Term::int(1)),
        TheoryOp::Le => build::sub(b, a),
        TheoryOp::Gt => build::sub(build::sub(a, b), Term::int(1)),
        TheoryOp::Ge => build::sub(a, b),
        _ => return None,
    })
}

/// Interpretation candidates for `f♯`, in a fixed order.
pub fn candidates(problem: &DpProblem, f: &Symbol) -> Vec<Term> {
    let fi: Vec<usize> = free_indices(problem, f).into_iter().collect();
    let x = |i: usize| Term::var(position_var(i));
    let mut consts: BTreeSet<i64> = BTreeSet::new();
    let mut derived = Vec::new();
    for p in &problem.sdps {
        let phi = Guarded::constraint(p);
        for atom in build::conjuncts(phi) {
            for s in atom.subterms() {
                if let Some(c) = s.as_int().and_then(|c| i64::try_from(c.clone()).ok()) {
                    if c != 0 {
                        consts.insert(c);
                    }
                }
            }
            if p.lhs_head() != f {
                continue;
            }
            let Some(e) = witness_of(&atom) else { continue };
            let mut sigma = Subst::new();
            let args = p.lhs().args();
            for &i in &fi {
                if let Some(y) = args[i - 1].as_var() {
                    if sigma.get(y).is_none() {
                        sigma = sigma.with(y.clone(), x(i)).expect("both Int");
                    }
                }
            }
            let e = e.substitute(&sigma);
            if e.vars().iter().all(|v| fi.iter().any(|&i| position_var(i) == *v)) && !e.vars().is_empty() {
                derived.push(e);
            }
        }
    }
    let mut out = Vec::new();
    for &i in &fi {
        out.push(x(i));
    }
    for &i in &fi {
        out.push(build::neg(x(i)));
    }
    for &i in &fi {
        for &k in &fi {
            if i < k {
                out.push(build::add(x(i), x(k)));
            }
            if i != k {
                out.push(build::sub(x(i), x(k)));
            }
        }
    }
    out.extend(derived);
    for &c in &consts {
        for &i in &fi {
            out.push(build::sub(x(i), Term::int(c)));
            out.push(build::sub(Term::int(c), x(i)));
            for &k in &fi {
                if i != k {
                    out.push(build::sub(build::sub(x(i), x(k)), Term::int(c)));
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|t| seen.insert(t.clone()));
    if !out.is_empty() {
        out.push(Term::int(0));
    }
    out
}

/// Whether `J` orients `p` strictly (`Some(true)`), weakly (`Some(false)`)
/// or not at all. Unknown verdicts count as not oriented.
pub fn orientation(p: &Sdp, j: &IntegerMapping, solver: &mut Solver) -> Result<Option<bool>, SolverError> {
    let (Some(s), Some(t)) = (apply_mapping(j, p.lhs()), apply_mapping(j, p.rhs())) else { return Ok(None) };
    let phi = Guarded::constraint(p);
    if !solver.check_entailment(phi, &build::ge(s.clone(), t.clone()))?.is_valid() {
        return Ok(None);
    }
    let strict = build::and(build::ge(s.clone(), Term::int(0)), build::gt(s, t));
    Ok(Some(solver.check_entailment(phi, &strict)?.is_valid()))
}

pub fn integer_mapping(problem: &DpProblem, solver: &mut Solver) -> Result<Option<Application>, SolverError> {
    let heads: Vec<Symbol> = problem.heads().into_iter().collect();
    let pools: Vec<Vec<Term>> = heads.iter().map(|f| candidates(problem, f)).collect();
    if problem.is_empty() || pools.iter().all(|c| c.len() <= 1) {
        return Ok(None);
    }
    let pools: Vec<Vec<Term>> = pools.into_iter().map(|c| if c.is_empty() { vec![Term::int(0)] } else { c }).collect();
    let index = |f: &Symbol| heads.iter().position(|h| h == f).expect("head of P");

    // per pair: the candidate index pairs orienting it weakly / strictly
    let mut weak: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut strict: Vec<Vec<(usize, usize)>> = Vec::new();
    for p in &problem.sdps {
        let (fi, gi) = (index(p.lhs_head()), index(p.rhs_head()));
        let (mut w, mut s) = (Vec::new(), Vec::new());
        for a in 0..pools[fi].len() {
            for b in 0..pools[gi].len() {
                if fi == gi && a != b {
                    continue;
                }
                let mut j = IntegerMapping::new();
                j.insert(p.lhs_head().clone(), pools[fi][a].clone());
                j.insert(p.rhs_head().clone(), pools[gi][b].clone());
                match orientation(p, &j, solver)? {
                    Some(true) => {
                        w.push((a, b));
                        s.push((a, b));
                    }
                    Some(false) => w.push((a, b)),
                    None => {}
                }
            }
        }
        if w.is_empty() {
            return Ok(None);
        }
        weak.push(w);
        strict.push(s);
    }
    if strict.iter().all(Vec::is_empty) {
        return Ok(None);
    }

    let sel_var = |k: usize| Var::new(&format!("sel {}", heads[k].name()), Type::int());
    let sel = |k: usize| Term::var(sel_var(k));
    let picks = |p: &Sdp, pairs: &[(usize, usize)]| {
        let (fi, gi) = (index(p.lhs_head()), index(p.rhs_head()));
        build::or_all(pairs.iter().map(|&(a, b)| {
            build::and(build::eq(sel(fi), Term::int(a as i64)), build::eq(sel(gi), Term::int(b as i64)))
        }))
    };
    let mut parts = Vec::new();
    for (k, pool) in pools.iter().enumerate() {
        parts.push(build::ge(sel(k), Term::int(0)));
        parts.push(build::lt(sel(k), Term::int(pool.len() as i64)));
    }
    for (p, w) in problem.sdps.iter().zip(&weak) {
        parts.push(picks(p, w));
    }
    parts.push(build::or_all(problem.sdps.iter().zip(&strict).map(|(p, s)| picks(p, s))));
    let mut phi = build::and_all(parts);

    // lexicographically least selection
    let mut chosen = Vec::new();
    for (k, pool) in pools.iter().enumerate().take(heads.len()) {
        let mut found = None;
        for c in 0..pool.len() {
            let fixed = build::and(phi.clone(), build::eq(sel(k), Term::int(c as i64)));
            match solver.check_sat(&fixed)? {
                SolverVerdict::Sat(_) => {
                    found = Some(c);
                    phi = fixed;
                    break;
                }
                SolverVerdict::Unsat => {}
                SolverVerdict::Unknown(_) => return Ok(None),
            }
        }
        let Some(c) = found else { return Ok(None) };
        chosen.push(c);
    }
    let j: IntegerMapping = heads.iter().zip(&chosen).map(|(f, &c)| (f.clone(), pools[index(f)][c].clone())).collect();
    let removed: Vec<usize> = problem
        .sdps
        .iter()
        .zip(&strict)
        .filter(|(p, s)| s.contains(&(chosen[index(p.lhs_head())], chosen[index(p.rhs_head())])))
        .map(|(p, _)| p.id)
        .collect();
    let rest = problem.sdps.iter().filter(|p| !removed.contains(&p.id)).cloned().collect();
    Ok(Some(Application { witness: Witness::IntMap { j, removed }, children: vec![DpProblem::new(rest, Flag::An)] }))
}
