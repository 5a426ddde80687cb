//! Satisfiability and entailment of logical constraints.
//!
//! The actual decision procedure is external: a [`SmtBackend`] receives
//! SMT-LIB text and answers with raw solver output. [`Solver`] prepares
//! queries, folds ground constraints internally, and checks every model it
//! receives against the internal evaluator before trusting it.

pub mod smtlib;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::kernel::{build, Subst, Term, TheoryOp, Var};
use crate::theory::{self, apply_op, is_theory_term_any, TheoryError, Value};

pub use smtlib::{Logic, SmtQuery, VarNames};

/// An assignment of values to constraint variables.
pub type Model = BTreeMap<Var, Value>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverVerdict {
    Sat(Model),
    Unsat,
    Unknown(String),
}

impl SolverVerdict {
    /// Whether the constraint may be satisfiable (`Sat` or `Unknown`).
    pub fn maybe_sat(&self) -> bool {
        !matches!(self, SolverVerdict::Unsat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entailment {
    Valid,
    Invalid(Model),
    Unknown(String),
}

impl Entailment {
    pub fn is_valid(&self) -> bool {
        matches!(self, Entailment::Valid)
    }
}

/// What a backend answered for one query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawAnswer {
    /// `sat`, with the text of the `get-value` reply (`()` when nothing was
    /// declared).
    Sat(String),
    Unsat,
    Unknown(String),
}

/// A decision procedure reachable through SMT-LIB text.
pub trait SmtBackend {
    fn check(&mut self, query: &SmtQuery) -> RawAnswer;
}

/// A backend that knows nothing. Every non-ground query is `Unknown`.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoBackend;

impl SmtBackend for NoBackend {
    fn check(&mut self, _: &SmtQuery) -> RawAnswer {
        RawAnswer::Unknown("no SMT solver configured".into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub executable: String,
    pub timeout_ms: u64,
    /// Forces one logic for every query; `None` picks `QF_LIA` for linear
    /// queries and `QF_NIA` otherwise.
    pub logic: Option<Logic>,
}

impl SolverConfig {
    pub const DEFAULT_TIMEOUT_MS: u64 = 5000;

    pub fn new(executable: &str, timeout_ms: u64) -> Result<SolverConfig, SolverError> {
        if timeout_ms == 0 {
            return Err(SolverError::ZeroTimeout);
        }
        Ok(SolverConfig { executable: executable.to_string(), timeout_ms, logic: None })
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { executable: "z3".into(), timeout_ms: Self::DEFAULT_TIMEOUT_MS, logic: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{0} is not a constraint (a theory term of sort Bool over theory-sorted variables)")]
    NotAConstraint(Term),
    #[error("no value for {0} in the assignment")]
    IncompleteAssignment(String),
    #[error("solver model {model} does not satisfy {formula}")]
    ModelMismatch { formula: Term, model: String },
    #[error("could not read solver model: {0}")]
    BadModel(#[from] smtlib::ParseSexpError),
    #[error("per-query timeout must be positive")]
    ZeroTimeout,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub queries: u64,
    pub folded: u64,
    pub sat: u64,
    pub unsat: u64,
    pub unknown: u64,
}

pub struct Solver {
    backend: Box<dyn SmtBackend>,
    logic: Option<Logic>,
    stats: SolverStats,
}

impl fmt::Debug for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solver").field("stats", &self.stats).finish_non_exhaustive()
    }
}

impl Solver {
    pub fn new(backend: Box<dyn SmtBackend>) -> Solver {
        Solver { backend, logic: None, stats: SolverStats::default() }
    }

    /// A solver that can only decide ground constraints.
    pub fn offline() -> Solver {
        Solver::new(Box::new(NoBackend))
    }

    pub fn with_logic(mut self, logic: Option<Logic>) -> Solver {
        self.logic = logic;
        self
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn check_sat(&mut self, phi: &Term) -> Result<SolverVerdict, SolverError> {
        check_constraint(phi)?;
        let formula = build::and(defined(phi), phi.clone());
        self.decide(&formula)
    }

    /// Satisfiability of `phi ∧ extra` where only `phi` must be defined.
    /// `extra` is read with the solver's total semantics for division, which
    /// over-approximates equations between stuck terms such as `5 mod 0`.
    pub fn check_sat_with(&mut self, phi: &Term, extra: &Term) -> Result<SolverVerdict, SolverError> {
        check_constraint(phi)?;
        check_constraint(extra)?;
        let formula = build::and(build::and(defined(phi), phi.clone()), extra.clone());
        self.decide(&formula)
    }

    /// `phi ⊨ psi`: every assignment making `phi` true makes `psi` true.
    pub fn check_entailment(&mut self, phi: &Term, psi: &Term) -> Result<Entailment, SolverError> {
        check_constraint(phi)?;
        check_constraint(psi)?;
        let holds = build::and(defined(psi), psi.clone());
        let formula = build::and(build::and(defined(phi), phi.clone()), build::not(holds));
        Ok(match self.decide(&formula)? {
            SolverVerdict::Unsat => Entailment::Valid,
            SolverVerdict::Sat(m) => Entailment::Invalid(m),
            SolverVerdict::Unknown(r) => Entailment::Unknown(r),
        })
    }

    fn decide(&mut self, formula: &Term) -> Result<SolverVerdict, SolverError> {
        self.stats.queries += 1;
        let formula = theory::kappa_normalize(formula);
        let verdict = if formula.is_ground() {
            self.stats.folded += 1;
            match eval_lazy(&formula) {
                Ok(Value::Bool(true)) => SolverVerdict::Sat(Model::new()),
                Ok(_) => SolverVerdict::Unsat,
                Err(e) => SolverVerdict::Unknown(e.to_string()),
            }
        } else {
            self.ask_backend(&formula)?
        };
        match &verdict {
            SolverVerdict::Sat(_) => self.stats.sat += 1,
            SolverVerdict::Unsat => self.stats.unsat += 1,
            SolverVerdict::Unknown(_) => self.stats.unknown += 1,
        }
        Ok(verdict)
    }

    fn ask_backend(&mut self, formula: &Term) -> Result<SolverVerdict, SolverError> {
        let vars = formula.vars();
        let names = VarNames::for_vars(&vars);
        let declarations = names
            .iter()
            .map(|(v, n)| {
                let sort = if v.ty().as_sort().is_some_and(|s| s.is_bool()) { "Bool" } else { "Int" };
                (n.clone(), sort)
            })
            .collect();
        let query = SmtQuery {
            logic: self.logic.unwrap_or_else(|| smtlib::logic_for(formula)),
            declarations,
            assertion: smtlib::render(formula, &names),
        };
        match self.backend.check(&query) {
            RawAnswer::Unsat => Ok(SolverVerdict::Unsat),
            RawAnswer::Unknown(r) => Ok(SolverVerdict::Unknown(r)),
            RawAnswer::Sat(text) => {
                let model = smtlib::parse_model(&text, &names)?;
                if let Some(missing) = vars.iter().find(|v| !model.contains_key(*v)) {
                    return Err(SolverError::IncompleteAssignment(missing.name().to_string()));
                }
                let grounded = formula.substitute(&to_subst(&model));
                match eval_lazy(&theory::kappa_normalize(&grounded)) {
                    Ok(Value::Bool(true)) => Ok(SolverVerdict::Sat(model)),
                    Err(TheoryError::DivisionByZero(_)) => {
                        Ok(SolverVerdict::Unknown("model divides by zero".into()))
                    }
                    _ => Err(SolverError::ModelMismatch { formula: formula.clone(), model: show_model(&model) }),
                }
            }
        }
    }
}

fn check_constraint(phi: &Term) -> Result<(), SolverError> {
    let is_bool = phi.ty().as_sort().is_some_and(|s| s.is_bool());
    if is_bool && is_theory_term_any(phi) {
        Ok(())
    } else {
        Err(SolverError::NotAConstraint(phi.clone()))
    }
}

/// `d ≠ 0` for every divisor `d` of a `div` or `mod` in `t` that is not a
/// non-zero literal.
pub fn defined(t: &Term) -> Term {
    let mut guards = BTreeSet::new();
    collect_divisors(t, &mut guards);
    build::and_all(guards.into_iter().map(|d| build::neq(d, Term::int(0))))
}

fn collect_divisors(t: &Term, out: &mut BTreeSet<Term>) {
    let args = t.args();
    if let Some(TheoryOp::Div | TheoryOp::Mod) = t.head_symbol().and_then(|s| s.theory_op()) {
        if args.len() == 2 {
            let d = args[1];
            let literal_nonzero = d.as_int().is_some_and(|n| *n != 0.into());
            if !literal_nonzero {
                out.insert(d.clone());
            }
        }
    }
    for a in args {
        collect_divisors(a, out);
    }
}

/// Evaluates a ground theory term, deciding `∧` and `∨` left to right so
/// that a guard on the left protects a division on the right.
fn eval_lazy(t: &Term) -> Result<Value, TheoryError> {
    let op = t.head_symbol().and_then(|s| s.theory_op());
    let args = t.args();
    match (op, args.as_slice()) {
        (Some(TheoryOp::And), [a, b]) => match eval_lazy(a)? {
            Value::Bool(false) => Ok(Value::Bool(false)),
            _ => eval_lazy(b),
        },
        (Some(TheoryOp::Or), [a, b]) => match eval_lazy(a)? {
            Value::Bool(true) => Ok(Value::Bool(true)),
            _ => eval_lazy(b),
        },
        (Some(op), _) if !args.is_empty() => {
            let vals = args.iter().map(|a| eval_lazy(a)).collect::<Result<Vec<_>, _>>()?;
            apply_op(op, &vals).ok_or_else(|| TheoryError::DivisionByZero(t.clone()))
        }
        _ => theory::interpret(t),
    }
}

fn to_subst(model: &Model) -> Subst {
    model.iter().map(|(v, val)| (v.clone(), val.to_term())).collect()
}

pub fn show_model(model: &Model) -> String {
    let parts: Vec<String> = model.iter().map(|(v, val)| alloc::format!("{}↦{}", v.name(), val)).collect();
    alloc::format!("{{{}}}", parts.join(", "))
}

/// `⟦φσ⟧` for an assignment covering the variables of `φ`.
pub fn eval_ground(phi: &Term, sigma: &Model) -> Result<bool, SolverError> {
    check_constraint(phi)?;
    for v in phi.vars() {
        if !sigma.contains_key(&v) {
            return Err(SolverError::IncompleteAssignment(v.name().to_string()));
        }
    }
    let grounded = theory::kappa_normalize(&phi.substitute(&to_subst(sigma)));
    match theory::interpret(&grounded) {
        Ok(Value::Bool(b)) => Ok(b),
        Ok(Value::Int(_)) => unreachable!("constraints have sort Bool"),
        Err(TheoryError::DivisionByZero(_)) => Ok(false),
        Err(e) => unreachable!("ground theory term failed to evaluate: {e}"),
    }
}
