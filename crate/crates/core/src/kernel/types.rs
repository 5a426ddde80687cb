//! Sorts and simple types.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A base type. `Int` and `Bool` are the theory sorts of the built-in theory.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Arc<str>);

pub const INT: &str = "Int";
pub const BOOL: &str = "Bool";
/// Sort of marked terms; reserved, never declared by users.
pub const DP: &str = "dp";

impl Sort {
    pub fn new(name: &str) -> Sort {
        Sort(Arc::from(name))
    }

    pub fn int() -> Sort {
        Sort::new(INT)
    }

    pub fn bool() -> Sort {
        Sort::new(BOOL)
    }

    pub fn dp() -> Sort {
        Sort::new(DP)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_theory(&self) -> bool {
        &*self.0 == INT || &*self.0 == BOOL
    }

    pub fn is_int(&self) -> bool {
        &*self.0 == INT
    }

    pub fn is_bool(&self) -> bool {
        &*self.0 == BOOL
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A simple type: a sort or an arrow. Arrows associate to the right in
/// the textual form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Base(Sort),
    Arrow(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn base(sort: Sort) -> Type {
        Type::Base(sort)
    }

    pub fn int() -> Type {
        Type::Base(Sort::int())
    }

    pub fn bool() -> Type {
        Type::Base(Sort::bool())
    }

    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::Arrow(Arc::new(domain), Arc::new(codomain))
    }

    /// `A1 -> ... -> An -> result`.
    pub fn function<I>(args: I, result: Type) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter().rev().fold(result, |acc, a| Type::arrow(a, acc))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Base(_))
    }

    pub fn as_sort(&self) -> Option<&Sort> {
        match self {
            Type::Base(s) => Some(s),
            Type::Arrow(..) => None,
        }
    }

    pub fn domain(&self) -> Option<&Type> {
        match self {
            Type::Arrow(d, _) => Some(d),
            Type::Base(_) => None,
        }
    }

    pub fn codomain(&self) -> Option<&Type> {
        match self {
            Type::Arrow(_, c) => Some(c),
            Type::Base(_) => None,
        }
    }

    /// Number of arrows along the spine.
    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut t = self;
        while let Type::Arrow(_, c) = t {
            n += 1;
            t = c;
        }
        n
    }

    /// Splits `A1 -> ... -> An -> B` into `([A1, ..., An], B)`.
    pub fn split(&self) -> (Vec<&Type>, &Sort) {
        let mut args = Vec::new();
        let mut t = self;
        loop {
            match t {
                Type::Arrow(d, c) => {
                    args.push(&**d);
                    t = c;
                }
                Type::Base(s) => return (args, s),
            }
        }
    }

    pub fn output_sort(&self) -> &Sort {
        self.split().1
    }

    /// The type left after applying `n` arguments.
    pub fn drop_args(&self, n: usize) -> Option<&Type> {
        let mut t = self;
        for _ in 0..n {
            t = t.codomain()?;
        }
        Some(t)
    }

    /// Every domain along the spine and the final codomain are theory sorts.
    pub fn is_theory_type(&self) -> bool {
        match self {
            Type::Base(s) => s.is_theory(),
            Type::Arrow(d, c) => {
                matches!(&**d, Type::Base(s) if s.is_theory()) && c.is_theory_type()
            }
        }
    }

    pub fn is_theory_sort(&self) -> bool {
        matches!(self, Type::Base(s) if s.is_theory())
    }

    /// All sorts occurring anywhere in the type.
    pub fn sorts(&self, out: &mut Vec<Sort>) {
        match self {
            Type::Base(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Type::Arrow(d, c) => {
                d.sorts(out);
                c.sorts(out);
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(s) => write!(f, "{s}"),
            Type::Arrow(d, c) => {
                if d.is_base() {
                    write!(f, "{d} -> {c}")
                } else {
                    write!(f, "({d}) -> {c}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn s(n: &str) -> Type {
        Type::base(Sort::new(n))
    }

    #[test]
    fn display_is_right_associative() {
        let t = Type::function(vec![Type::arrow(Type::int(), Type::int()), s("funlist")], s("funlist"));
        assert_eq!(t.to_string(), "(Int -> Int) -> funlist -> funlist");
        assert_eq!(t.arity(), 2);
        assert_eq!(t.output_sort().name(), "funlist");
    }

    #[test]
    fn theory_types() {
        let t = Type::function(vec![Type::int(), Type::int()], Type::bool());
        assert!(t.is_theory_type());
        let h = Type::arrow(Type::arrow(Type::int(), Type::int()), Type::int());
        assert!(!h.is_theory_type());
        assert!(!s("intlist").is_theory_type());
    }
}
