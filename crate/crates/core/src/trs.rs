//! Constrained rewrite rules, LCSTRSs, matching, the rewrite relation and
//! hierarchical extensions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::kernel::{build, Path, Signature, Subst, Symbol, Term, TermKind, Var};
use crate::theory::{self, calculation_step, is_theory_term_any, Guarded, Instantiation, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrsError {
    #[error("rule sides have different types: {lhs} : {} but {rhs} : {}", lhs.ty(), rhs.ty())]
    TypeMismatch { lhs: Term, rhs: Term },
    #[error("constraint {0} does not have type Bool")]
    ConstraintType(Term),
    #[error("{0} is not a defined symbol")]
    NotDefined(Term),
}

/// `lhs → rhs [constraint]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    lhs: Term,
    rhs: Term,
    constraint: Term,
}

impl Rule {
    /// Checks only typing; the remaining rule conditions are reported by
    /// [`validate`].
    pub fn new(lhs: Term, rhs: Term, constraint: Term) -> Result<Rule, TrsError> {
        if lhs.ty() != rhs.ty() {
            return Err(TrsError::TypeMismatch { lhs, rhs });
        }
        if !constraint.ty().as_sort().is_some_and(|s| s.is_bool()) {
            return Err(TrsError::ConstraintType(constraint));
        }
        Ok(Rule { lhs, rhs, constraint })
    }

    pub fn unconstrained(lhs: Term, rhs: Term) -> Result<Rule, TrsError> {
        Rule::new(lhs, rhs, build::tt())
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn head(&self) -> Option<&Symbol> {
        self.lhs.head_symbol()
    }

    /// `Var(r) \ Var(ℓ)`.
    pub fn fresh_vars(&self) -> BTreeSet<Var> {
        let l = self.lhs.vars();
        self.rhs.vars().into_iter().filter(|x| !l.contains(x)).collect()
    }

    /// `Var(φ) ∪ (Var(r) \ Var(ℓ))`, the variables a respecting
    /// substitution must map to values.
    pub fn logical_vars(&self) -> BTreeSet<Var> {
        let mut out = self.constraint.vars();
        out.extend(self.fresh_vars());
        out
    }
}

impl Guarded for Rule {
    fn constraint(&self) -> &Term {
        &self.constraint
    }
    fn guarded_vars(&self) -> BTreeSet<Var> {
        self.logical_vars()
    }
    fn instantiation(&self) -> Instantiation {
        Instantiation::Values
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)?;
        if !build::is_true(&self.constraint) {
            write!(f, " [{}]", self.constraint)?;
        }
        Ok(())
    }
}

/// A logically constrained simply-typed term rewriting system.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lcstrs {
    pub signature: Signature,
    pub rules: Vec<Rule>,
    pub hidden: BTreeSet<Symbol>,
}

impl Lcstrs {
    pub fn new(signature: Signature, rules: Vec<Rule>) -> Lcstrs {
        Lcstrs { signature, rules, hidden: BTreeSet::new() }
    }

    /// Heads of the left-hand sides.
    pub fn defined_symbols(&self) -> BTreeSet<Symbol> {
        self.rules.iter().filter_map(|r| r.head().cloned()).collect()
    }

    pub fn is_defined(&self, f: &Symbol) -> bool {
        self.rules.iter().any(|r| r.head() == Some(f))
    }

    /// Declared symbols that are neither defined nor theory symbols. Values
    /// are constructors too but are built in and not listed.
    pub fn constructors(&self) -> BTreeSet<Symbol> {
        let d = self.defined_symbols();
        self.signature.symbols().filter(|f| !f.is_theory() && !d.contains(*f)).cloned().collect()
    }

    pub fn is_hidden(&self, f: &Symbol) -> bool {
        self.hidden.contains(f)
    }

    /// Rules whose head is `f`.
    pub fn rules_for<'a>(&'a self, f: &'a Symbol) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.head() == Some(f))
    }
}

impl fmt::Display for Lcstrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signature.sorts() {
            if !s.is_theory() {
                writeln!(f, "sort {};", s.name())?;
            }
        }
        for sym in self.signature.symbols() {
            writeln!(f, "fun {} : {};", sym.name(), sym.ty())?;
        }
        for r in &self.rules {
            writeln!(f, "{r};")?;
        }
        if !self.hidden.is_empty() {
            let names: Vec<&str> = self.hidden.iter().map(Symbol::name).collect();
            writeln!(f, "hidden: {};", names.join(", "))?;
        }
        Ok(())
    }
}

/// A well-formedness violation. `rule` is the zero-based rule index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Some(i) => write!(f, "rule {}: {}", i + 1, self.message),
            None => f.write_str(&self.message),
        }
    }
}

pub fn validate(system: &Lcstrs) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (i, rule) in system.rules.iter().enumerate() {
        let mut report = |message: String| out.push(Diagnostic { rule: Some(i), message });
        let lhs = rule.lhs();
        if lhs.is_var() {
            report("lhs is a bare variable".into());
        } else if lhs.head_symbol().is_none() {
            report("lhs head is not a function symbol".into());
        } else if !lhs.is_pattern() {
            report("lhs is not a pattern".into());
        }
        if !lhs.any_symbol(&|s| !s.is_theory()) {
            report("lhs contains no non-theory function symbol".into());
        }
        let phi = Guarded::constraint(rule);
        if !is_theory_term_any(phi) {
            report(format!("constraint {phi} is not a logical constraint"));
        }
        for x in rule.fresh_vars() {
            if !x.has_theory_sort() {
                report(format!("fresh rhs variable {} of non-theory sort {}", x.name(), x.ty()));
            }
        }
        let mut used = BTreeSet::new();
        lhs.symbols(&mut used);
        rule.rhs().symbols(&mut used);
        for s in used.iter().filter(|s| !s.is_theory()) {
            if system.signature.symbol(s.name()) != Some(s) {
                report(format!("undeclared symbol {s}"));
            }
        }
    }
    for h in &system.hidden {
        if system.signature.symbol(h.name()) != Some(h) {
            out.push(Diagnostic { rule: None, message: format!("hidden symbol {h} is not declared") });
        }
    }
    out
}

/// The matcher `σ` with `pattern σ = subject`, if any.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Subst> {
    let mut sigma = Subst::new();
    if match_into(pattern, subject, &mut sigma) {
        Some(sigma)
    } else {
        None
    }
}

fn match_into(p: &Term, s: &Term, sigma: &mut Subst) -> bool {
    if p.ty() != s.ty() {
        return false;
    }
    match (p.kind(), s.kind()) {
        (TermKind::Var(x), _) => match sigma.get(x) {
            Some(bound) => bound == s,
            None => sigma.insert(x.clone(), s.clone()).is_ok(),
        },
        (TermKind::Sym(f), TermKind::Sym(g)) => f == g,
        (TermKind::App(p0, p1), TermKind::App(s0, s1)) => match_into(p0, s0, sigma) && match_into(p1, s1, sigma),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// A rule step with the zero-based rule index and the respecting
    /// substitution.
    Rule { index: usize, subst: Subst },
    Calc,
}

/// One rewrite step `t → result` at `path`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub path: Path,
    pub kind: StepKind,
    pub result: Term,
}

/// Constants occurring in the system plus `{-1, 0, 1}` and both booleans;
/// used to instantiate variables that occur only in the constraint or the
/// right-hand side.
pub fn default_pool(system: &Lcstrs) -> Vec<Value> {
    let mut pool: BTreeSet<Value> =
        [-1, 0, 1].into_iter().map(|n| Value::Int(n.into())).chain([Value::Bool(false), Value::Bool(true)]).collect();
    for r in &system.rules {
        for t in [r.lhs(), r.rhs(), Guarded::constraint(r)] {
            for (_, u) in t.positions() {
                if let Some(s) = u.as_symbol().filter(|s| s.is_value()) {
                    if let Ok(v) = theory::interpret(&Term::sym(s.clone())) {
                        pool.insert(v);
                    }
                }
            }
        }
    }
    pool.into_iter().collect()
}

/// All one-step successors of `t`, leftmost-outermost. Variables a rule
/// introduces outside its left-hand side range over `pool`.
pub fn reducts(system: &Lcstrs, t: &Term, pool: &[Value]) -> Vec<Step> {
    let mut out = Vec::new();
    for (path, u) in t.positions() {
        for (index, rule) in system.rules.iter().enumerate() {
            let Some(sigma) = match_term(rule.lhs(), &u) else { continue };
            for subst in extensions(rule, sigma, pool) {
                if !theory::respects(&subst, rule).unwrap_or(false) {
                    continue;
                }
                let reduct = rule.rhs().substitute(&subst);
                let result = t.replace_at(&path, reduct).expect("rule sides share a type");
                out.push(Step { path: path.clone(), kind: StepKind::Rule { index, subst }, result });
            }
        }
        if let Some(v) = calculation_step(&u) {
            let result = t.replace_at(&path, v).expect("calculation keeps the type");
            out.push(Step { path: path.clone(), kind: StepKind::Calc, result });
        }
    }
    out
}

/// Extends a matcher by every assignment from `pool` to the rule's
/// variables outside the left-hand side.
fn extensions(rule: &Rule, sigma: Subst, pool: &[Value]) -> Vec<Subst> {
    let lhs_vars = rule.lhs().vars();
    let extra: Vec<Var> = rule.logical_vars().into_iter().filter(|x| !lhs_vars.contains(x)).collect();
    let mut acc = vec![sigma];
    for x in extra {
        let candidates: Vec<Term> =
            pool.iter().map(Value::to_term).filter(|v| v.ty() == x.ty()).collect();
        acc = acc
            .into_iter()
            .flat_map(|s| {
                let x = &x;
                candidates.iter().filter_map(move |v| s.clone().with(x.clone(), v.clone()).ok())
            })
            .collect();
    }
    acc
}

/// How an extension relates to a base system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionVerdict {
    Hierarchical,
    /// Hierarchical and free of hidden symbols.
    Public,
    Rejected(String),
}

impl ExtensionVerdict {
    pub fn is_hierarchical(&self) -> bool {
        !matches!(self, ExtensionVerdict::Rejected(_))
    }
}

pub fn check_extension(base: &Lcstrs, ext: &Lcstrs) -> ExtensionVerdict {
    for f in ext.signature.symbols() {
        if let Some(g) = base.signature.symbol(f.name()) {
            if g.ty() != f.ty() {
                return ExtensionVerdict::Rejected(format!(
                    "{} is declared with type {} in the base and {} in the extension",
                    f.name(),
                    g.ty(),
                    f.ty()
                ));
            }
        }
    }
    for r in &ext.rules {
        if let Some(f) = r.head() {
            if !f.is_theory() && base.signature.symbol(f.name()).is_some() {
                return ExtensionVerdict::Rejected(format!("the extension defines base symbol {f}"));
            }
        }
    }
    let mentions_hidden = ext.rules.iter().any(|r| {
        [r.lhs(), r.rhs()].into_iter().any(|t| t.any_symbol(&|s| base.hidden.iter().any(|h| h.name() == s.name())))
    });
    if mentions_hidden {
        ExtensionVerdict::Hierarchical
    } else {
        ExtensionVerdict::Public
    }
}

#[cfg(test)]
mod tests;
