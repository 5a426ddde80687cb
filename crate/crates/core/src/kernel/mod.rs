//! Sorts, simple types, signatures and typed applicative terms.

mod signature;
mod subst;
mod symbol;
mod term;
mod types;

pub use signature::Signature;
pub use subst::Subst;
pub use symbol::{Symbol, SymbolKind, TheoryOp, Var};
pub use term::{show_path, Dir, Path, Term, TermKind};
pub use types::{Sort, Type, BOOL, DP, INT};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("cannot apply {fun}: expected an argument of type {expected}, got {found}")]
    ArgumentMismatch { fun: Term, expected: Type, found: Type },
    #[error("{fun} is not a function and cannot be applied")]
    NotAFunction { fun: Term },
    #[error("substitution maps {var:?} to {term}, which has type {}", term.ty())]
    SubstitutionType { var: Var, term: Term },
    #[error("duplicate declaration of {0}")]
    Duplicate(alloc::string::String),
    #[error("unknown sort {0}")]
    UnknownSort(alloc::string::String),
}

/// Shorthand constructors for theory terms, used when processors build
/// constraints and interpretations.
pub mod build {
    use super::{Symbol, Term, TheoryOp};

    fn bin(op: TheoryOp, a: Term, b: Term) -> Term {
        Term::apply(Term::sym(Symbol::theory(op)), [a, b]).expect("well-typed theory operands")
    }

    pub fn add(a: Term, b: Term) -> Term {
        bin(TheoryOp::Add, a, b)
    }
    pub fn sub(a: Term, b: Term) -> Term {
        bin(TheoryOp::Sub, a, b)
    }
    pub fn mul(a: Term, b: Term) -> Term {
        bin(TheoryOp::Mul, a, b)
    }
    pub fn neg(a: Term) -> Term {
        sub(Term::int(0), a)
    }
    pub fn lt(a: Term, b: Term) -> Term {
        bin(TheoryOp::Lt, a, b)
    }
    pub fn le(a: Term, b: Term) -> Term {
        bin(TheoryOp::Le, a, b)
    }
    pub fn gt(a: Term, b: Term) -> Term {
        bin(TheoryOp::Gt, a, b)
    }
    pub fn ge(a: Term, b: Term) -> Term {
        bin(TheoryOp::Ge, a, b)
    }
    /// Equality at the operands' sort.
    pub fn eq(a: Term, b: Term) -> Term {
        let on_bool = a.ty().as_sort().is_some_and(|s| s.is_bool());
        bin(TheoryOp::Eq(on_bool), a, b)
    }
    pub fn neq(a: Term, b: Term) -> Term {
        let on_bool = a.ty().as_sort().is_some_and(|s| s.is_bool());
        bin(TheoryOp::Neq(on_bool), a, b)
    }
    pub fn not(a: Term) -> Term {
        Term::app(Term::sym(Symbol::theory(TheoryOp::Not)), a).expect("boolean operand")
    }
    pub fn tt() -> Term {
        Term::boolean(true)
    }
    pub fn ff() -> Term {
        Term::boolean(false)
    }

    /// Binary conjunction, dropping `true` operands and absorbing `false`.
    pub fn and(a: Term, b: Term) -> Term {
        if is_true(&a) || is_false(&b) {
            return b;
        }
        if is_true(&b) || is_false(&a) {
            return a;
        }
        bin(TheoryOp::And, a, b)
    }

    /// Binary disjunction, dropping `false` operands and absorbing `true`.
    pub fn or(a: Term, b: Term) -> Term {
        if is_false(&a) || is_true(&b) {
            return b;
        }
        if is_false(&b) || is_true(&a) {
            return a;
        }
        bin(TheoryOp::Or, a, b)
    }

    pub fn and_all<I: IntoIterator<Item = Term>>(parts: I) -> Term {
        parts.into_iter().fold(tt(), and)
    }

    pub fn or_all<I: IntoIterator<Item = Term>>(parts: I) -> Term {
        let mut it = parts.into_iter();
        match it.next() {
            None => ff(),
            Some(first) => it.fold(first, or),
        }
    }

    pub fn is_true(t: &Term) -> bool {
        matches!(t.as_symbol().and_then(Symbol::theory_op), Some(TheoryOp::True))
    }

    pub fn is_false(t: &Term) -> bool {
        matches!(t.as_symbol().and_then(Symbol::theory_op), Some(TheoryOp::False))
    }

    /// The operands of a top-level conjunction, flattened.
    pub fn conjuncts(t: &Term) -> alloc::vec::Vec<Term> {
        let mut out = alloc::vec::Vec::new();
        push_conjuncts(t, &mut out);
        out
    }

    fn push_conjuncts(t: &Term, out: &mut alloc::vec::Vec<Term>) {
        if let Some(TheoryOp::And) = t.head_symbol().and_then(Symbol::theory_op) {
            let args = t.args();
            if args.len() == 2 {
                push_conjuncts(args[0], out);
                push_conjuncts(args[1], out);
                return;
            }
        }
        if !is_true(t) {
            out.push(t.clone());
        }
    }
}
