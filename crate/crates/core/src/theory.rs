//! The built-in theory of integers and booleans: interpretation of ground
//! theory terms, calculation steps and κ-normal forms.
//!
//! `div` and `mod` follow the SMT-LIB convention: for a non-zero divisor
//! `n`, `m = n * (m div n) + (m mod n)` with `0 <= m mod n < |n|`. Division
//! by zero has no value, so a term such as `5 mod 0` is not a calculation
//! redex and stays in normal form.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Euclid, Zero};
use thiserror::Error;

use crate::kernel::{Dir, Path, Subst, Symbol, Term, TermKind, TheoryOp, Var};

/// A value of a theory sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
}

impl Value {
    pub fn to_term(&self) -> Term {
        match self {
            Value::Int(n) => Term::int(n.clone()),
            Value::Bool(b) => Term::boolean(*b),
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Int(_) => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            Value::Bool(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("{0} is not ground")]
    NotGround(Term),
    #[error("{0} contains the non-theory symbol {1}")]
    NotTheory(Term, Symbol),
    #[error("{0} is a partial application; only terms of a theory sort have a value")]
    Partial(Term),
    #[error("division by zero in {0}")]
    DivisionByZero(Term),
}

/// `⟦t⟧` for a ground theory term `t` of a theory sort.
pub fn interpret(t: &Term) -> Result<Value, TheoryError> {
    if !t.ty().is_base() {
        return Err(TheoryError::Partial(t.clone()));
    }
    eval(t)
}

fn eval(t: &Term) -> Result<Value, TheoryError> {
    let head = t.head();
    let sym = match head.kind() {
        TermKind::Sym(s) => s,
        TermKind::Var(_) => return Err(TheoryError::NotGround(t.clone())),
        TermKind::App(..) => unreachable!("head is a leaf"),
    };
    let op = match sym.theory_op() {
        Some(op) => op,
        None => return Err(TheoryError::NotTheory(t.clone(), sym.clone())),
    };
    let args = t.args();
    if args.len() != sym.arity() {
        return Err(TheoryError::Partial(t.clone()));
    }
    let vals = args.into_iter().map(eval).collect::<Result<Vec<_>, _>>()?;
    apply_op(op, &vals).ok_or_else(|| TheoryError::DivisionByZero(t.clone()))
}

/// Applies an operator to values of the right sorts. `None` only for
/// division by zero.
pub fn apply_op(op: &TheoryOp, vals: &[Value]) -> Option<Value> {
    let int = |i: usize| vals[i].as_int().expect("well-typed operand");
    let boolean = |i: usize| vals[i].as_bool().expect("well-typed operand");
    Some(match op {
        TheoryOp::Int(n) => Value::Int(n.clone()),
        TheoryOp::True => Value::Bool(true),
        TheoryOp::False => Value::Bool(false),
        TheoryOp::Add => Value::Int(int(0) + int(1)),
        TheoryOp::Sub => Value::Int(int(0) - int(1)),
        TheoryOp::Mul => Value::Int(int(0) * int(1)),
        TheoryOp::Div => {
            if int(1).is_zero() {
                return None;
            }
            Value::Int(int(0).div_euclid(int(1)))
        }
        TheoryOp::Mod => {
            if int(1).is_zero() {
                return None;
            }
            Value::Int(int(0).rem_euclid(int(1)))
        }
        TheoryOp::Lt => Value::Bool(int(0) < int(1)),
        TheoryOp::Le => Value::Bool(int(0) <= int(1)),
        TheoryOp::Gt => Value::Bool(int(0) > int(1)),
        TheoryOp::Ge => Value::Bool(int(0) >= int(1)),
        TheoryOp::Eq(_) => Value::Bool(vals[0] == vals[1]),
        TheoryOp::Neq(_) => Value::Bool(vals[0] != vals[1]),
        TheoryOp::And => Value::Bool(boolean(0) && boolean(1)),
        TheoryOp::Or => Value::Bool(boolean(0) || boolean(1)),
        TheoryOp::Not => Value::Bool(!boolean(0)),
    })
}

fn value_of(t: &Term) -> Option<Value> {
    match t.as_symbol()?.theory_op()? {
        TheoryOp::Int(n) => Some(Value::Int(n.clone())),
        TheoryOp::True => Some(Value::Bool(true)),
        TheoryOp::False => Some(Value::Bool(false)),
        _ => None,
    }
}

/// If `t` is a calculation redex `f v1 ... vn`, the value it steps to.
pub fn calculation_step(t: &Term) -> Option<Term> {
    let sym = t.head_symbol()?;
    if !sym.is_calculation() {
        return None;
    }
    let args = t.args();
    if args.len() != sym.arity() {
        return None;
    }
    let vals = args.into_iter().map(value_of).collect::<Option<Vec<_>>>()?;
    apply_op(sym.theory_op()?, &vals).map(|v| v.to_term())
}

/// Positions of all calculation redexes, outermost first then left to right.
pub fn kappa_redexes(t: &Term) -> Vec<(Path, Term)> {
    t.positions()
        .into_iter()
        .filter_map(|(p, u)| calculation_step(&u).map(|v| (p, v)))
        .collect()
}

/// `⌊t⌋κ`, computed bottom-up.
pub fn kappa_normalize(t: &Term) -> Term {
    match t.kind() {
        TermKind::Sym(_) | TermKind::Var(_) => t.clone(),
        TermKind::App(f, a) => {
            let f2 = kappa_normalize(f);
            let a2 = kappa_normalize(a);
            let node = if f2 == *f && a2 == *a {
                t.clone()
            } else {
                Term::app(f2, a2).expect("normalization preserves types")
            };
            calculation_step(&node).unwrap_or(node)
        }
    }
}

/// `⌊t⌋κ` by repeatedly contracting the outermost, rightmost redex.
/// Agrees with [`kappa_normalize`]; kept as an independent route.
pub fn kappa_normalize_outermost(t: &Term) -> Term {
    let mut cur = t.clone();
    loop {
        let redexes = kappa_redexes(&cur);
        let Some(min_depth) = redexes.iter().map(|(p, _)| depth(p)).min() else {
            return cur;
        };
        let (path, value) = redexes
            .into_iter()
            .rfind(|(p, _)| depth(p) == min_depth)
            .expect("non-empty");
        cur = cur.replace_at(&path, value).expect("value has the redex type");
    }
}

fn depth(p: &[Dir]) -> usize {
    p.iter().filter(|d| **d == Dir::Arg).count()
}

/// All symbols are theory symbols and `Var(t) ⊆ allowed`.
pub fn is_theory_term(t: &Term, allowed: &BTreeSet<Var>) -> bool {
    t.all_symbols(&Symbol::is_theory) && t.vars().is_subset(allowed)
}

/// All symbols are theory symbols and every variable has a theory sort.
pub fn is_theory_term_any(t: &Term) -> bool {
    t.all_symbols(&Symbol::is_theory) && t.vars().iter().all(Var::has_theory_sort)
}

/// A ground theory term (not necessarily a value).
pub fn is_ground_theory_term(t: &Term) -> bool {
    t.is_ground() && t.all_symbols(&Symbol::is_theory)
}

/// What a respecting substitution must assign to the guarded variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instantiation {
    /// Rewrite rules: values.
    Values,
    /// Dependency pairs: ground theory terms.
    GroundTheoryTerms,
}

/// Objects carrying a logical constraint and a set of variables that a
/// substitution must instantiate with theory data.
pub trait Guarded {
    fn constraint(&self) -> &Term;
    fn guarded_vars(&self) -> BTreeSet<Var>;
    fn instantiation(&self) -> Instantiation;
}

/// Whether `sigma` respects a rule or a dependency pair. Errors when the
/// instantiated constraint is not ground.
pub fn respects<G: Guarded + ?Sized>(sigma: &Subst, g: &G) -> Result<bool, TheoryError> {
    for x in g.guarded_vars() {
        let ok = match sigma.get(&x) {
            None => false,
            Some(t) => match g.instantiation() {
                Instantiation::Values => t.is_value(),
                Instantiation::GroundTheoryTerms => is_ground_theory_term(t),
            },
        };
        if !ok {
            return Ok(false);
        }
    }
    let phi = g.constraint().substitute(sigma);
    if !phi.is_ground() {
        return Err(TheoryError::NotGround(phi));
    }
    match interpret(&phi) {
        Ok(v) => Ok(v == Value::Bool(true)),
        Err(TheoryError::DivisionByZero(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build, Type};
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn int(n: i64) -> Term {
        Term::int(n)
    }

    #[test]
    fn interpret_examples() {
        assert_eq!(interpret(&build::sub(int(1), int(5))).unwrap(), Value::Int((-4).into()));
        assert_eq!(
            interpret(&build::mul(int(7), build::mul(int(3), int(2)))).unwrap(),
            Value::Int(42.into())
        );
        let m = Symbol::theory(TheoryOp::Mod);
        let t = Term::apply(Term::sym(m), [int(42), int(24)]).unwrap();
        assert_eq!(interpret(&t).unwrap(), Value::Int(18.into()));
    }

    #[test]
    fn interpret_errors() {
        let partial = Term::app(Term::sym(Symbol::theory(TheoryOp::Add)), int(1)).unwrap();
        assert!(matches!(interpret(&partial), Err(TheoryError::Partial(_))));
        let f = Symbol::plain("f", Type::arrow(Type::int(), Type::int()));
        let t = build::add(Term::app(Term::sym(f), int(1)).unwrap(), int(2));
        assert!(matches!(interpret(&t), Err(TheoryError::NotTheory(..))));
        let x = Term::var(Var::new("x", Type::int()));
        assert!(matches!(interpret(&build::add(x, int(1))), Err(TheoryError::NotGround(_))));
    }

    #[test]
    fn euclidean_division_matches_smtlib() {
        let d = Symbol::theory(TheoryOp::Div);
        let m = Symbol::theory(TheoryOp::Mod);
        // (m, n, m div n, m mod n) with 0 <= mod < |n|.
        for (a, b, q, r) in [(7, 2, 3, 1), (-7, 2, -4, 1), (7, -2, -3, 1), (-7, -2, 4, 1), (6, 3, 2, 0)] {
            let dq = Term::apply(Term::sym(d.clone()), [int(a), int(b)]).unwrap();
            let mr = Term::apply(Term::sym(m.clone()), [int(a), int(b)]).unwrap();
            assert_eq!(interpret(&dq).unwrap(), Value::Int(q.into()), "{a} div {b}");
            assert_eq!(interpret(&mr).unwrap(), Value::Int(r.into()), "{a} mod {b}");
        }
    }

    #[test]
    fn kappa_examples() {
        let f = Symbol::plain("f", Type::arrow(Type::int(), Type::int()));
        let t = Term::app(Term::sym(f), build::mul(int(7), build::mul(int(3), int(2)))).unwrap();
        assert_eq!(kappa_normalize(&t).to_string(), "f 42");
        assert_eq!(kappa_normalize(&int(42)), int(42));

        let ii = Type::arrow(Type::int(), Type::int());
        let fact = Symbol::plain("fact", Type::function(vec![Type::int(), ii.clone()], Type::int()));
        let k = Term::var(Var::new("k", ii));
        let t = Term::apply(Term::sym(fact), [build::sub(int(1), int(1)), k]).unwrap();
        assert_eq!(kappa_normalize(&t).to_string(), "fact 0 k");
    }

    #[test]
    fn division_by_zero_is_not_a_redex() {
        let m = Symbol::theory(TheoryOp::Mod);
        let t = Term::apply(Term::sym(m), [int(5), int(0)]).unwrap();
        assert!(calculation_step(&t).is_none());
        assert_eq!(kappa_normalize(&t), t);
        let outer = build::add(t.clone(), build::add(int(1), int(1)));
        assert_eq!(kappa_normalize(&outer), build::add(t, int(2)));
    }

    #[test]
    fn partial_application_is_kappa_normal() {
        let times = Term::app(Term::sym(Symbol::theory(TheoryOp::Mul)), build::add(int(1), int(2))).unwrap();
        assert_eq!(kappa_normalize(&times).to_string(), "(*) 3");
    }

    #[test]
    fn theory_terms() {
        let m = Var::new("m", Type::int());
        let n = Var::new("n", Type::int());
        let set: BTreeSet<Var> = [m.clone(), n.clone()].into_iter().collect();
        let modmn = Term::apply(Term::sym(Symbol::theory(TheoryOp::Mod)), [Term::var(m.clone()), Term::var(n.clone())]).unwrap();
        assert!(is_theory_term(&modmn, &set));
        let gcd = Symbol::plain("gcd", Type::function(vec![Type::int(), Type::int()], Type::int()));
        let g = Term::apply(Term::sym(gcd), [Term::var(m), Term::var(n.clone())]).unwrap();
        assert!(!is_theory_term(&g, &set));
        assert!(!is_theory_term(&build::sub(Term::var(n), int(1)), &BTreeSet::new()));
    }

    struct Guard {
        phi: Term,
        vars: BTreeSet<Var>,
        inst: Instantiation,
    }

    impl Guarded for Guard {
        fn constraint(&self) -> &Term {
            &self.phi
        }
        fn guarded_vars(&self) -> BTreeSet<Var> {
            self.vars.clone()
        }
        fn instantiation(&self) -> Instantiation {
            self.inst
        }
    }

    #[test]
    fn respects_rule_and_pair() {
        let m = Var::new("m", Type::int());
        let n = Var::new("n", Type::int());
        let phi = build::and(build::ge(Term::var(m.clone()), int(0)), build::gt(Term::var(n.clone()), int(0)));
        let rule = Guard { phi: phi.clone(), vars: [m.clone(), n.clone()].into(), inst: Instantiation::Values };
        let s = Subst::new().with(m.clone(), int(42)).unwrap().with(n.clone(), int(24)).unwrap();
        assert!(respects(&s, &rule).unwrap());
        let s = Subst::new().with(m.clone(), int(-1)).unwrap().with(n.clone(), int(24)).unwrap();
        assert!(!respects(&s, &rule).unwrap());

        // 1 + 2 is a ground theory term but not a value.
        let x = Var::new("x", Type::int());
        let phi = build::gt(Term::var(x.clone()), int(2));
        let s = Subst::new().with(x.clone(), build::add(int(1), int(2))).unwrap();
        let pair = Guard { phi: phi.clone(), vars: [x.clone()].into(), inst: Instantiation::GroundTheoryTerms };
        assert_eq!(interpret(&phi.substitute(&s)).unwrap(), Value::Bool(true));
        assert!(respects(&s, &pair).unwrap());
        let as_rule = Guard { phi, vars: [x].into(), inst: Instantiation::Values };
        assert!(!respects(&s, &as_rule).unwrap());
    }

    #[test]
    fn respects_needs_ground_constraint() {
        let x = Var::new("x", Type::int());
        let g = Guard { phi: build::gt(Term::var(x), int(0)), vars: BTreeSet::new(), inst: Instantiation::Values };
        assert!(matches!(respects(&Subst::new(), &g), Err(TheoryError::NotGround(_))));
    }

    pub(crate) fn arb_ground_theory(depth: u32) -> BoxedStrategy<Term> {
        let leaf = (-6i64..7).prop_map(Term::int).boxed();
        if depth == 0 {
            return leaf;
        }
        let sub = arb_ground_theory(depth - 1);
        let ops = vec![TheoryOp::Add, TheoryOp::Sub, TheoryOp::Mul, TheoryOp::Div, TheoryOp::Mod];
        prop_oneof![
            leaf,
            (prop::sample::select(ops), sub.clone(), sub).prop_map(|(op, a, b)| {
                Term::apply(Term::sym(Symbol::theory(op)), [a, b]).unwrap()
            }),
        ]
        .boxed()
    }

    proptest! {
        #[test]
        fn kappa_strategies_agree(t in arb_ground_theory(4)) {
            let a = kappa_normalize(&t);
            let b = kappa_normalize_outermost(&t);
            prop_assert_eq!(&a, &b);
            prop_assert!(kappa_redexes(&a).is_empty());
            match interpret(&t) {
                Ok(v) => prop_assert_eq!(interpret(&a).unwrap(), v),
                Err(TheoryError::DivisionByZero(_)) => prop_assert!(!a.is_value()),
                Err(e) => prop_assert!(false, "unexpected {}", e),
            }
        }
    }
}
