//! Immutable applicative terms.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::subst::Subst;
use super::symbol::{Symbol, SymbolKind, TheoryOp, Var};
use super::types::Type;
use super::KernelError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Sym(Symbol),
    Var(Var),
    App(Term, Term),
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Node {
    kind: TermKind,
    ty: Type,
}

/// A well-typed term. Equality is syntactic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(Arc<Node>);

/// One step in a path through the binary application tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dir {
    Fun,
    Arg,
}

pub type Path = Vec<Dir>;

impl Term {
    pub fn sym(s: Symbol) -> Term {
        let ty = s.ty().clone();
        Term(Arc::new(Node { kind: TermKind::Sym(s), ty }))
    }

    pub fn var(v: Var) -> Term {
        let ty = v.ty().clone();
        Term(Arc::new(Node { kind: TermKind::Var(v), ty }))
    }

    pub fn int<N: Into<num_bigint::BigInt>>(n: N) -> Term {
        Term::sym(Symbol::int(n))
    }

    pub fn boolean(b: bool) -> Term {
        Term::sym(Symbol::boolean(b))
    }

    pub fn app(fun: Term, arg: Term) -> Result<Term, KernelError> {
        match fun.ty() {
            Type::Arrow(d, c) if **d == *arg.ty() => {
                let ty = (**c).clone();
                Ok(Term(Arc::new(Node { kind: TermKind::App(fun, arg), ty })))
            }
            Type::Arrow(d, _) => Err(KernelError::ArgumentMismatch {
                fun: fun.clone(),
                expected: (**d).clone(),
                found: arg.ty().clone(),
            }),
            Type::Base(_) => Err(KernelError::NotAFunction { fun: fun.clone() }),
        }
    }

    pub fn apply<I: IntoIterator<Item = Term>>(fun: Term, args: I) -> Result<Term, KernelError> {
        args.into_iter().try_fold(fun, Term::app)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    pub fn as_var(&self) -> Option<&Var> {
        match &self.0.kind {
            TermKind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match &self.0.kind {
            TermKind::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self.0.kind, TermKind::Var(_))
    }

    /// The leftmost leaf of the application spine.
    pub fn head(&self) -> &Term {
        let mut t = self;
        while let TermKind::App(f, _) = &t.0.kind {
            t = f;
        }
        t
    }

    pub fn head_symbol(&self) -> Option<&Symbol> {
        self.head().as_symbol()
    }

    /// Arguments of the head, left to right.
    pub fn args(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut t = self;
        while let TermKind::App(f, a) = &t.0.kind {
            out.push(a);
            t = f;
        }
        out.reverse();
        out
    }

    pub fn arg_count(&self) -> usize {
        let mut n = 0;
        let mut t = self;
        while let TermKind::App(f, _) = &t.0.kind {
            n += 1;
            t = f;
        }
        n
    }

    /// If this is an integer literal, its value.
    pub fn as_int(&self) -> Option<&num_bigint::BigInt> {
        match self.as_symbol()?.theory_op()? {
            TheoryOp::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        self.as_symbol().is_some_and(Symbol::is_value)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match &self.0.kind {
            TermKind::Sym(_) => {}
            TermKind::Var(v) => {
                out.insert(v.clone());
            }
            TermKind::App(f, a) => {
                f.collect_vars(out);
                a.collect_vars(out);
            }
        }
    }

    /// `Var(t)`.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        match &self.0.kind {
            TermKind::Sym(_) => true,
            TermKind::Var(_) => false,
            TermKind::App(f, a) => f.is_ground() && a.is_ground(),
        }
    }

    pub fn contains_var(&self, x: &Var) -> bool {
        match &self.0.kind {
            TermKind::Sym(_) => false,
            TermKind::Var(v) => v == x,
            TermKind::App(f, a) => f.contains_var(x) || a.contains_var(x),
        }
    }

    pub fn symbols(&self, out: &mut BTreeSet<Symbol>) {
        match &self.0.kind {
            TermKind::Sym(s) => {
                out.insert(s.clone());
            }
            TermKind::Var(_) => {}
            TermKind::App(f, a) => {
                f.symbols(out);
                a.symbols(out);
            }
        }
    }

    pub fn all_symbols(&self, pred: &dyn Fn(&Symbol) -> bool) -> bool {
        match &self.0.kind {
            TermKind::Sym(s) => pred(s),
            TermKind::Var(_) => true,
            TermKind::App(f, a) => f.all_symbols(pred) && a.all_symbols(pred),
        }
    }

    pub fn any_symbol(&self, pred: &dyn Fn(&Symbol) -> bool) -> bool {
        !self.all_symbols(&|s| !pred(s))
    }

    /// All `u` with `self ⊵ u`: the term itself and, recursively, the
    /// subterms of its arguments. Partial applications of the head are not
    /// subterms. Leftmost-outermost order, duplicates removed.
    pub fn subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.push_subterms(&mut out);
        out
    }

    fn push_subterms(&self, out: &mut Vec<Term>) {
        if !out.contains(self) {
            out.push(self.clone());
        }
        for a in self.args() {
            a.push_subterms(out);
        }
    }

    pub fn proper_subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        for a in self.args() {
            a.push_subterms(&mut out);
        }
        out
    }

    /// `self ⊵ t`.
    pub fn has_subterm(&self, t: &Term) -> bool {
        self == t || self.has_proper_subterm(t)
    }

    /// `self ▷ t`.
    pub fn has_proper_subterm(&self, t: &Term) -> bool {
        self.args().into_iter().any(|a| a.has_subterm(t))
    }

    /// Every subterm is a variable or headed by a function symbol.
    pub fn is_pattern(&self) -> bool {
        if self.is_var() {
            return true;
        }
        self.head_symbol().is_some() && self.args().into_iter().all(Term::is_pattern)
    }

    pub fn substitute(&self, sigma: &Subst) -> Term {
        match &self.0.kind {
            TermKind::Sym(_) => self.clone(),
            TermKind::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            TermKind::App(f, a) => {
                let f2 = f.substitute(sigma);
                let a2 = a.substitute(sigma);
                if f2 == *f && a2 == *a {
                    self.clone()
                } else {
                    Term::rebuild(f2, a2, self.ty().clone())
                }
            }
        }
    }

    // Callers guarantee the types line up.
    fn rebuild(f: Term, a: Term, ty: Type) -> Term {
        Term(Arc::new(Node { kind: TermKind::App(f, a), ty }))
    }

    /// Renames every variable through `rename`, which must preserve types.
    pub fn rename_vars(&self, rename: &dyn Fn(&Var) -> Var) -> Term {
        match &self.0.kind {
            TermKind::Sym(_) => self.clone(),
            TermKind::Var(v) => Term::var(rename(v)),
            TermKind::App(f, a) => {
                Term::rebuild(f.rename_vars(rename), a.rename_vars(rename), self.ty().clone())
            }
        }
    }

    /// Replaces the head symbol, keeping the arguments. The new head must
    /// accept the same argument types.
    pub fn with_head(&self, head: Symbol) -> Result<Term, KernelError> {
        Term::apply(Term::sym(head), self.args().into_iter().cloned())
    }

    pub fn at(&self, path: &[Dir]) -> Option<&Term> {
        let mut t = self;
        for d in path {
            match (&t.0.kind, d) {
                (TermKind::App(f, _), Dir::Fun) => t = f,
                (TermKind::App(_, a), Dir::Arg) => t = a,
                _ => return None,
            }
        }
        Some(t)
    }

    /// Replaces the subterm at `path` by `new`, which must have the same type.
    pub fn replace_at(&self, path: &[Dir], new: Term) -> Option<Term> {
        match path.split_first() {
            None => {
                if new.ty() == self.ty() {
                    Some(new)
                } else {
                    None
                }
            }
            Some((d, rest)) => match (&self.0.kind, d) {
                (TermKind::App(f, a), Dir::Fun) => {
                    Some(Term::rebuild(f.replace_at(rest, new)?, a.clone(), self.ty().clone()))
                }
                (TermKind::App(f, a), Dir::Arg) => {
                    Some(Term::rebuild(f.clone(), a.replace_at(rest, new)?, self.ty().clone()))
                }
                _ => None,
            },
        }
    }

    /// Every node of the application tree with its path, outermost first,
    /// then left to right.
    pub fn positions(&self) -> Vec<(Path, Term)> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.push_positions(&mut path, &mut out);
        out
    }

    fn push_positions(&self, path: &mut Path, out: &mut Vec<(Path, Term)>) {
        out.push((path.clone(), self.clone()));
        if let TermKind::App(f, a) = &self.0.kind {
            path.push(Dir::Fun);
            f.push_positions(path, out);
            path.pop();
            path.push(Dir::Arg);
            a.push_positions(path, out);
            path.pop();
        }
    }

    pub fn size(&self) -> usize {
        match &self.0.kind {
            TermKind::Sym(_) | TermKind::Var(_) => 1,
            TermKind::App(f, a) => f.size() + a.size(),
        }
    }

    /// Recomputes the type bottom-up without trusting the cached one.
    pub fn recompute_type(&self) -> Option<Type> {
        match &self.0.kind {
            TermKind::Sym(s) => Some(s.ty().clone()),
            TermKind::Var(v) => Some(v.ty().clone()),
            TermKind::App(f, a) => match f.recompute_type()? {
                Type::Arrow(d, c) if *d == a.recompute_type()? => Some((*c).clone()),
                _ => None,
            },
        }
    }
}

/// Renders a path through the application tree as argument positions:
/// `ε` for the root, `2.1` for the first argument of the second argument,
/// and a trailing `[k]` when the position is a head prefix with `k`
/// arguments.
pub fn show_path(term: &Term, path: &[Dir]) -> alloc::string::String {
    use alloc::string::{String, ToString};
    let mut parts: Vec<String> = Vec::new();
    let mut t = term;
    let mut i = 0;
    while i < path.len() {
        // Descend to the argument: some number of Fun steps then one Arg.
        let mut funs = 0;
        while i < path.len() && path[i] == Dir::Fun {
            funs += 1;
            i += 1;
        }
        let mut node = t;
        for _ in 0..funs {
            node = node.at(&[Dir::Fun]).expect("valid path");
        }
        if i == path.len() {
            let kept = node.arg_count();
            parts.push(alloc::format!("[{kept}]"));
            break;
        }
        i += 1;
        let argc = t.arg_count();
        parts.push((argc - funs).to_string());
        t = node.at(&[Dir::Arg]).expect("valid path");
    }
    if parts.is_empty() {
        return "ε".into();
    }
    let mut s = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k > 0 && !p.starts_with('[') {
            s.push('.');
        }
        s.push_str(p);
    }
    s
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Precedence of the context a term is printed in.
const TOP: u8 = 0;
const UNARY: u8 = 6;
const ATOM: u8 = 7;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, TOP, f)
    }
}

fn infix_parts(t: &Term) -> Option<(&TheoryOp, Term, Term)> {
    let op = t.head_symbol()?.theory_op()?;
    op.infix_level()?;
    let args = t.args();
    if args.len() != 2 {
        return None;
    }
    Some((op, args[0].clone(), args[1].clone()))
}

/// `0 - t` with `t` not a literal prints as `-t`.
fn negation_of(t: &Term) -> Option<Term> {
    let (op, l, r) = infix_parts(t)?;
    if *op == TheoryOp::Sub && l.as_int().is_some_and(|n| n == &num_bigint::BigInt::from(0)) && r.as_int().is_none() {
        Some(r)
    } else {
        None
    }
}

fn write_term(t: &Term, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t.kind() {
        TermKind::Var(v) => return write!(f, "{v}"),
        TermKind::Sym(s) => {
            if ctx >= ATOM && s.as_int_negative() {
                return write!(f, "({s})");
            }
            return write!(f, "{s}");
        }
        TermKind::App(..) => {}
    }
    if let Some(inner) = negation_of(t) {
        if ctx > UNARY {
            f.write_str("(")?;
        }
        f.write_str("-")?;
        write_term(&inner, ATOM, f)?;
        if ctx > UNARY {
            f.write_str(")")?;
        }
        return Ok(());
    }
    if let Some((op, l, r)) = infix_parts(t) {
        let level = op.infix_level().unwrap_or(0);
        let paren = ctx >= level;
        if paren {
            f.write_str("(")?;
        }
        // Left-associative operators accept an equal-level left operand;
        // comparisons do not chain.
        let left_ctx = if level == 3 { level } else { level - 1 };
        write_term(&l, left_ctx, f)?;
        write!(f, " {} ", op.spelling())?;
        write_term(&r, level, f)?;
        if paren {
            f.write_str(")")?;
        }
        return Ok(());
    }
    let paren = ctx >= ATOM;
    if paren {
        f.write_str("(")?;
    }
    write_term(t.head(), ATOM, f)?;
    for a in t.args() {
        f.write_str(" ")?;
        write_term(a, ATOM, f)?;
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl Symbol {
    fn as_int_negative(&self) -> bool {
        matches!(self.kind(), SymbolKind::Theory(TheoryOp::Int(n)) if n.sign() == num_bigint::Sign::Minus)
    }
}
