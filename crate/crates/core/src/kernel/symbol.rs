//! Function symbols, variables and the built-in theory operators.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use num_bigint::BigInt;

use super::types::{Sort, Type};

/// The operators of the fixed integer/boolean theory.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TheoryOp {
    Int(BigInt),
    True,
    False,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    /// Equality over `Int` (`false`) or `Bool` (`true`).
    Eq(bool),
    Neq(bool),
    And,
    Or,
    Not,
}

impl TheoryOp {
    pub fn ty(&self) -> Type {
        let i = Type::int;
        let b = Type::bool;
        match self {
            TheoryOp::Int(_) => i(),
            TheoryOp::True | TheoryOp::False => b(),
            TheoryOp::Add | TheoryOp::Sub | TheoryOp::Mul | TheoryOp::Div | TheoryOp::Mod => {
                Type::arrow(i(), Type::arrow(i(), i()))
            }
            TheoryOp::Lt | TheoryOp::Le | TheoryOp::Gt | TheoryOp::Ge => {
                Type::arrow(i(), Type::arrow(i(), b()))
            }
            TheoryOp::Eq(on_bool) | TheoryOp::Neq(on_bool) => {
                let a = if *on_bool { b() } else { i() };
                Type::arrow(a.clone(), Type::arrow(a, b()))
            }
            TheoryOp::And | TheoryOp::Or => Type::arrow(b(), Type::arrow(b(), b())),
            TheoryOp::Not => Type::arrow(b(), b()),
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, TheoryOp::Int(_) | TheoryOp::True | TheoryOp::False)
    }

    /// Concrete-syntax spelling.
    pub fn spelling(&self) -> String {
        use alloc::string::ToString;
        match self {
            TheoryOp::Int(n) => n.to_string(),
            TheoryOp::True => "true".into(),
            TheoryOp::False => "false".into(),
            TheoryOp::Add => "+".into(),
            TheoryOp::Sub => "-".into(),
            TheoryOp::Mul => "*".into(),
            TheoryOp::Div => "div".into(),
            TheoryOp::Mod => "mod".into(),
            TheoryOp::Lt => "<".into(),
            TheoryOp::Le => "<=".into(),
            TheoryOp::Gt => ">".into(),
            TheoryOp::Ge => ">=".into(),
            TheoryOp::Eq(_) => "=".into(),
            TheoryOp::Neq(_) => "!=".into(),
            TheoryOp::And => "/\\".into(),
            TheoryOp::Or => "\\/".into(),
            TheoryOp::Not => "not".into(),
        }
    }

    /// Binding strength when printed infix; `None` for non-infix operators.
    pub fn infix_level(&self) -> Option<u8> {
        match self {
            TheoryOp::Or => Some(1),
            TheoryOp::And => Some(2),
            TheoryOp::Lt
            | TheoryOp::Le
            | TheoryOp::Gt
            | TheoryOp::Ge
            | TheoryOp::Eq(_)
            | TheoryOp::Neq(_) => Some(3),
            TheoryOp::Add | TheoryOp::Sub => Some(4),
            TheoryOp::Mul | TheoryOp::Div | TheoryOp::Mod => Some(5),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SymbolKind {
    Plain,
    Theory(TheoryOp),
    /// The marked copy `f♯` of a defined symbol `f`.
    Marked,
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Hash)]
struct SymbolData {
    kind: SymbolKind,
    name: Arc<str>,
    ty: Type,
}

/// A typed function symbol. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<SymbolData>);

impl Symbol {
    pub fn plain(name: &str, ty: Type) -> Symbol {
        Symbol(Arc::new(SymbolData { kind: SymbolKind::Plain, name: Arc::from(name), ty }))
    }

    pub fn theory(op: TheoryOp) -> Symbol {
        let ty = op.ty();
        let name = Arc::from(op.spelling().as_str());
        Symbol(Arc::new(SymbolData { kind: SymbolKind::Theory(op), name, ty }))
    }

    pub fn int<N: Into<BigInt>>(n: N) -> Symbol {
        Symbol::theory(TheoryOp::Int(n.into()))
    }

    pub fn boolean(b: bool) -> Symbol {
        Symbol::theory(if b { TheoryOp::True } else { TheoryOp::False })
    }

    /// `f♯ : A1 -> ... -> An -> dp` for `f : A1 -> ... -> An -> B`.
    pub fn marked(&self) -> Symbol {
        let (args, _) = self.ty().split();
        let ty = Type::function(args.into_iter().cloned(), Type::base(Sort::dp()));
        Symbol(Arc::new(SymbolData { kind: SymbolKind::Marked, name: self.0.name.clone(), ty }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.0.kind
    }

    pub fn theory_op(&self) -> Option<&TheoryOp> {
        match &self.0.kind {
            SymbolKind::Theory(op) => Some(op),
            _ => None,
        }
    }

    pub fn is_theory(&self) -> bool {
        matches!(self.0.kind, SymbolKind::Theory(_))
    }

    pub fn is_value(&self) -> bool {
        matches!(&self.0.kind, SymbolKind::Theory(op) if op.is_value())
    }

    /// Theory symbols that are not values.
    pub fn is_calculation(&self) -> bool {
        matches!(&self.0.kind, SymbolKind::Theory(op) if !op.is_value())
    }

    pub fn is_marked(&self) -> bool {
        matches!(self.0.kind, SymbolKind::Marked)
    }

    pub fn arity(&self) -> usize {
        self.0.ty.arity()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            SymbolKind::Plain => f.write_str(&self.0.name),
            SymbolKind::Marked => write!(f, "{}♯", self.0.name),
            SymbolKind::Theory(op) if op.is_value() => f.write_str(&self.0.name),
            SymbolKind::Theory(TheoryOp::Not) => f.write_str("not"),
            SymbolKind::Theory(_) => write!(f, "({})", self.0.name),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A typed variable, identified by name and type.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    name: Arc<str>,
    ty: Type,
}

impl Var {
    pub fn new(name: &str, ty: Type) -> Var {
        Var { name: Arc::from(name), ty }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }

    pub fn has_theory_sort(&self) -> bool {
        self.ty.is_theory_sort()
    }

    /// Same type, name extended by `suffix`.
    pub fn suffixed(&self, suffix: &str) -> Var {
        let mut n = String::from(&*self.name);
        n.push_str(suffix);
        Var::new(&n, self.ty.clone())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}
