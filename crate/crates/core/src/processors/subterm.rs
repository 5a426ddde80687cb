//! The subterm criterion with an SMT search for the projection.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{build, Symbol, Term, Type, Var};
use crate::sdp::{DpProblem, Flag, Sdp};
use crate::solver::{Solver, SolverError, SolverVerdict};
use crate::theory::Value;

use super::{Application, Witness};

pub type Projection = BTreeMap<Symbol, usize>;

/// `ν̄(t)` for a projection, one-based.
pub fn project<'a>(t: &'a Term, nu: &Projection) -> Option<&'a Term> {
    let f = t.head_symbol()?;
    let i = *nu.get(f)?;
    t.args().get(i.checked_sub(1)?).copied()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Strict,
    Equal,
    Neither,
}

/// How a projection orients one pair.
pub fn orient(p: &Sdp, nu: &Projection) -> Orientation {
    match (project(p.lhs(), nu), project(p.rhs(), nu)) {
        (Some(s), Some(t)) if s.has_proper_subterm(t) => Orientation::Strict,
        (Some(s), Some(t)) if s == t => Orientation::Equal,
        _ => Orientation::Neither,
    }
}

/// Pairs strictly oriented by `nu` if it orients all of `P`; `None`
/// otherwise or if nothing is strict.
pub fn strictly_oriented(problem: &DpProblem, nu: &Projection) -> Option<Vec<usize>> {
    let mut strict = Vec::new();
    for p in &problem.sdps {
        match orient(p, nu) {
            Orientation::Strict => strict.push(p.id),
            Orientation::Equal => {}
            Orientation::Neither => return None,
        }
    }
    (!strict.is_empty()).then_some(strict)
}

fn arity(f: &Symbol) -> usize {
    f.ty().split().0.len()
}

pub fn subterm_criterion(problem: &DpProblem, solver: &mut Solver) -> Result<Option<Application>, SolverError> {
    let Some(nu) = find_projection(problem, solver)? else { return Ok(None) };
    let Some(removed) = strictly_oriented(problem, &nu) else { return Ok(None) };
    let rest = problem.sdps.iter().filter(|p| !removed.contains(&p.id)).cloned().collect();
    Ok(Some(Application {
        witness: Witness::Subterm { nu, removed },
        children: vec![DpProblem::new(rest, Flag::An)],
    }))
}

/// Integer `N_f` per head and boolean `strict_p` per pair; the per-pair
/// requirement is a case split over the finitely many projections of its
/// two heads.
pub fn find_projection(problem: &DpProblem, solver: &mut Solver) -> Result<Option<Projection>, SolverError> {
    let heads: Vec<Symbol> = problem.heads().into_iter().collect();
    if problem.is_empty() || heads.iter().any(|f| arity(f) == 0) {
        return Ok(None);
    }
    let n_var = |f: &Symbol| Var::new(&format!("nu {}", f.name()), Type::int());
    let n = |f: &Symbol| Term::var(n_var(f));
    let mut parts = Vec::new();
    for f in &heads {
        parts.push(build::ge(n(f), Term::int(1)));
        parts.push(build::le(n(f), Term::int(arity(f) as i64)));
    }
    let mut stricts = Vec::new();
    for p in &problem.sdps {
        let strict = Term::var(Var::new(&format!("strict {}", p.id), Type::bool()));
        let (f, g) = (p.lhs_head(), p.rhs_head());
        let (ss, ts) = (p.lhs().args(), p.rhs().args());
        let mut cases = Vec::new();
        for (i, s) in ss.iter().enumerate() {
            for (j, t) in ts.iter().enumerate() {
                if f == g && i != j {
                    continue;
                }
                let pick = build::and(build::eq(n(f), Term::int(i as i64 + 1)), build::eq(n(g), Term::int(j as i64 + 1)));
                let ok = if s.has_proper_subterm(t) {
                    build::tt()
                } else if s == t {
                    build::not(strict.clone())
                } else {
                    continue;
                };
                cases.push(build::and(pick, ok));
            }
        }
        parts.push(build::or_all(cases));
        stricts.push(strict);
    }
    parts.push(build::or_all(stricts));
    let model = match solver.check_sat(&build::and_all(parts))? {
        SolverVerdict::Sat(m) => m,
        SolverVerdict::Unsat | SolverVerdict::Unknown(_) => return Ok(None),
    };
    let mut nu = Projection::new();
    for f in heads {
        let i = match model.get(&n_var(&f)) {
            Some(Value::Int(i)) => usize::try_from(i.clone()).unwrap_or(1),
            _ => 1,
        };
        nu.insert(f, i);
    }
    Ok(Some(nu))
}
