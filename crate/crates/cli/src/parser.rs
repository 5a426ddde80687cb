//! The `.lctrs` format: declarations, rules and directives.
//!
//! ```text
//! file  = { decl | rule | directive }
//! decl  = "sort" name ";" | "fun" name ":" type ";"
//! type  = atom { "->" type }                 (right-associative)
//! rule  = term "->" term [ "[" term "]" ] ";"
//! directive = "hidden:" name { "," name } ";" | "goal:" ("termination" | "public") ";"
//! ```
//!
//! Terms are applicative (`f x y`) with the infix operators
//! `\/ < /\ < comparisons < + - < * div mod < unary -`, and operator
//! sections such as `(*)`. Variable types are inferred per rule.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use lcstrs_core::kernel::{Signature, Sort, Symbol, Term, TheoryOp, Type, Var};
use lcstrs_core::sdp::Goal;
use lcstrs_core::trs::{validate, Lcstrs, Rule};
use num_bigint::BigInt;

use crate::diag::{Diagnostic, InputError, Pos};
use crate::lexer::{lex, Tok, Token};

/// A parsed and validated input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputFile {
    pub system: Lcstrs,
    pub goal: Option<Goal>,
}

const RESERVED: [&str; 9] = ["sort", "fun", "hidden", "goal", "div", "mod", "not", "true", "false"];
/// Reserved words that cannot start a term.
const STRUCTURAL: [&str; 6] = ["sort", "fun", "hidden", "goal", "div", "mod"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Neq,
    And,
    Or,
}

impl Op {
    fn of_tok(t: &Tok) -> Option<Op> {
        Some(match t {
            Tok::Plus => Op::Add,
            Tok::Minus => Op::Sub,
            Tok::Star => Op::Mul,
            Tok::Lt => Op::Lt,
            Tok::Le => Op::Le,
            Tok::Gt => Op::Gt,
            Tok::Ge => Op::Ge,
            Tok::Eq => Op::Eq,
            Tok::Neq => Op::Neq,
            Tok::And => Op::And,
            Tok::Or => Op::Or,
            Tok::Ident(s) if s == "div" => Op::Div,
            Tok::Ident(s) if s == "mod" => Op::Mod,
            _ => return None,
        })
    }

    fn theory(self, on_bool: bool) -> TheoryOp {
        match self {
            Op::Add => TheoryOp::Add,
            Op::Sub => TheoryOp::Sub,
            Op::Mul => TheoryOp::Mul,
            Op::Div => TheoryOp::Div,
            Op::Mod => TheoryOp::Mod,
            Op::Lt => TheoryOp::Lt,
            Op::Le => TheoryOp::Le,
            Op::Gt => TheoryOp::Gt,
            Op::Ge => TheoryOp::Ge,
            Op::Eq => TheoryOp::Eq(on_bool),
            Op::Neq => TheoryOp::Neq(on_bool),
            Op::And => TheoryOp::And,
            Op::Or => TheoryOp::Or,
        }
    }
}

#[derive(Clone, Debug)]
enum Expr {
    Name(String, Pos),
    Int(BigInt, Pos),
    Op(Op, Pos),
    App(Box<Expr>, Vec<Expr>),
}

impl Expr {
    fn pos(&self) -> Pos {
        match self {
            Expr::Name(_, p) | Expr::Int(_, p) | Expr::Op(_, p) => *p,
            Expr::App(h, _) => h.pos(),
        }
    }

    fn binary(op: Op, pos: Pos, l: Expr, r: Expr) -> Expr {
        Expr::App(Box::new(Expr::Op(op, pos)), vec![l, r])
    }
}

#[derive(Clone, Debug)]
enum TypeExpr {
    Name(String, Pos),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
}

#[derive(Clone, Debug)]
enum Stmt {
    Sort(String, Pos),
    Fun(String, TypeExpr, Pos),
    Rule { lhs: Expr, rhs: Expr, constraint: Option<Expr>, pos: Pos },
    Hidden(Vec<(String, Pos)>),
    Goal(String, Pos),
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    end: Pos,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.i + k).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::new(self.pos(), format!("expected {wanted}, found {t}")),
            None => Diagnostic::new(self.end, format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    fn name(&mut self) -> PResult<(String, Pos)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.i += 1;
                Ok((s, pos))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn keyword_directive(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) && self.peek_at(1) == Some(&Tok::Colon)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        if self.eat(&Tok::Ident("sort".into())) {
            let (n, p) = self.name()?;
            self.expect(Tok::Semi)?;
            return Ok(Stmt::Sort(n, p));
        }
        if self.eat(&Tok::Ident("fun".into())) {
            let (n, p) = self.name()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Semi)?;
            return Ok(Stmt::Fun(n, ty, p));
        }
        if self.keyword_directive("hidden") {
            self.i += 2;
            let mut names = vec![self.name()?];
            while self.eat(&Tok::Comma) {
                names.push(self.name()?);
            }
            self.expect(Tok::Semi)?;
            return Ok(Stmt::Hidden(names));
        }
        if self.keyword_directive("goal") {
            self.i += 2;
            let p = self.pos();
            let g = match self.peek() {
                Some(Tok::Ident(s)) => s.clone(),
                _ => return Err(self.unexpected("`termination` or `public`")),
            };
            self.i += 1;
            self.expect(Tok::Semi)?;
            return Ok(Stmt::Goal(g, p));
        }
        let lhs = self.expr()?;
        self.expect(Tok::Arrow)?;
        let rhs = self.expr()?;
        let constraint = if self.eat(&Tok::LBrack) {
            let c = self.expr()?;
            self.expect(Tok::RBrack)?;
            Some(c)
        } else {
            None
        };
        self.expect(Tok::Semi)?;
        Ok(Stmt::Rule { lhs, rhs, constraint, pos })
    }

    fn ty(&mut self) -> PResult<TypeExpr> {
        let dom = if self.eat(&Tok::LParen) {
            let t = self.ty()?;
            self.expect(Tok::RParen)?;
            t
        } else {
            let pos = self.pos();
            match self.peek() {
                Some(Tok::Ident(s)) => {
                    let s = s.clone();
                    self.i += 1;
                    TypeExpr::Name(s, pos)
                }
                _ => return Err(self.unexpected("a type")),
            }
        };
        if self.eat(&Tok::Arrow) {
            Ok(TypeExpr::Arrow(Box::new(dom), Box::new(self.ty()?)))
        } else {
            Ok(dom)
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut l = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            let pos = self.pos();
            self.i += 1;
            let r = self.and()?;
            l = Expr::binary(Op::Or, pos, l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> PResult<Expr> {
        let mut l = self.comparison()?;
        while self.peek() == Some(&Tok::And) {
            let pos = self.pos();
            self.i += 1;
            let r = self.comparison()?;
            l = Expr::binary(Op::And, pos, l, r);
        }
        Ok(l)
    }

    fn comparison_op(&self) -> Option<Op> {
        let op = Op::of_tok(self.peek()?)?;
        matches!(op, Op::Lt | Op::Le | Op::Gt | Op::Ge | Op::Eq | Op::Neq).then_some(op)
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let l = self.sum()?;
        let Some(op) = self.comparison_op() else { return Ok(l) };
        let pos = self.pos();
        self.i += 1;
        let r = self.sum()?;
        if self.comparison_op().is_some() {
            return Err(Diagnostic::new(self.pos(), "comparisons do not chain; add parentheses"));
        }
        Ok(Expr::binary(op, pos, l, r))
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut l = self.product()?;
        while let Some(op @ (Op::Add | Op::Sub)) = self.peek().and_then(Op::of_tok) {
            let pos = self.pos();
            self.i += 1;
            let r = self.product()?;
            l = Expr::binary(op, pos, l, r);
        }
        Ok(l)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut l = self.unary()?;
        while let Some(op @ (Op::Mul | Op::Div | Op::Mod)) = self.peek().and_then(Op::of_tok) {
            let pos = self.pos();
            self.i += 1;
            let r = self.unary()?;
            l = Expr::binary(op, pos, l, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.peek() != Some(&Tok::Minus) {
            return self.application();
        }
        let pos = self.pos();
        self.i += 1;
        if let Some(Tok::Int(n)) = self.peek() {
            let n = -n.clone();
            self.i += 1;
            return Ok(Expr::Int(n, pos));
        }
        let e = self.unary()?;
        Ok(Expr::binary(Op::Sub, pos, Expr::Int(BigInt::from(0), pos), e))
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => !STRUCTURAL.contains(&s.as_str()),
            Some(Tok::Int(_) | Tok::LParen) => true,
            _ => false,
        }
    }

    fn application(&mut self) -> PResult<Expr> {
        let head = self.atom()?;
        let mut args = Vec::new();
        while self.starts_atom() {
            args.push(self.atom()?);
        }
        Ok(if args.is_empty() { head } else { Expr::App(Box::new(head), args) })
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) if !STRUCTURAL.contains(&s.as_str()) => {
                let s = s.clone();
                self.i += 1;
                Ok(Expr::Name(s, pos))
            }
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.i += 1;
                Ok(Expr::Int(n, pos))
            }
            Some(Tok::LParen) => {
                if let Some(op) = self.peek_at(1).and_then(Op::of_tok) {
                    if self.peek_at(2) == Some(&Tok::RParen) {
                        self.i += 3;
                        return Ok(Expr::Op(op, pos));
                    }
                }
                self.i += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    /// Skips past the next `;` after an error.
    fn recover(&mut self) {
        while let Some(t) = self.peek() {
            let semi = *t == Tok::Semi;
            self.i += 1;
            if semi {
                break;
            }
        }
    }
}

fn statements(text: &str) -> Result<Vec<Stmt>, InputError> {
    let toks = lex(text).map_err(InputError::one)?;
    let end = end_pos(text);
    let mut p = Parser { toks, i: 0, end };
    let mut out = Vec::new();
    let mut errors = Vec::new();
    while p.peek().is_some() {
        match p.statement() {
            Ok(s) => out.push(s),
            Err(d) => {
                errors.push(d);
                p.recover();
            }
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(InputError { diagnostics: errors })
    }
}

fn end_pos(text: &str) -> Pos {
    let line = text.lines().count().max(1);
    let col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, col }
}

/// Types with unification variables.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Var(usize),
    Base(Sort),
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn of(t: &Type) -> Ty {
        match t {
            Type::Base(s) => Ty::Base(s.clone()),
            Type::Arrow(d, c) => Ty::Arrow(Box::new(Ty::of(d)), Box::new(Ty::of(c))),
        }
    }

    fn arrow(d: Ty, c: Ty) -> Ty {
        Ty::Arrow(Box::new(d), Box::new(c))
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Var(_) => f.write_str("?"),
            Ty::Base(s) => write!(f, "{s}"),
            Ty::Arrow(d, c) if matches!(**d, Ty::Arrow(..)) => write!(f, "({d}) -> {c}"),
            Ty::Arrow(d, c) => write!(f, "{d} -> {c}"),
        }
    }
}

#[derive(Default)]
struct Infer {
    bound: Vec<Option<Ty>>,
    /// Instantiation variable of every `=`/`!=` occurrence.
    eq_at: HashMap<Pos, usize>,
}

impl Infer {
    fn fresh(&mut self) -> Ty {
        self.bound.push(None);
        Ty::Var(self.bound.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match &self.bound[*v] {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            Ty::Base(_) => t.clone(),
            Ty::Arrow(d, c) => Ty::arrow(self.resolve(d), self.resolve(c)),
        }
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(w) => v == w,
            Ty::Base(_) => false,
            Ty::Arrow(d, c) => self.occurs(v, &d) || self.occurs(v, &c),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Ty::Var(v), Ty::Var(w)) if v == w => true,
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                if self.occurs(*v, t) {
                    return false;
                }
                self.bound[*v] = Some(t.clone());
                true
            }
            (Ty::Base(s), Ty::Base(t)) => s == t,
            (Ty::Arrow(d1, c1), Ty::Arrow(d2, c2)) => self.unify(d1, d2) && self.unify(c1, c2),
            _ => false,
        }
    }

    /// Unresolved variables default to `Int`.
    fn finish(&self, t: &Ty) -> Type {
        match self.resolve(t) {
            Ty::Var(_) => Type::int(),
            Ty::Base(s) => Type::base(s),
            Ty::Arrow(d, c) => Type::arrow(self.finish(&d), self.finish(&c)),
        }
    }
}

struct Elaborator<'a> {
    sig: &'a Signature,
    inf: Infer,
    vars: BTreeMap<String, Ty>,
}

impl Elaborator<'_> {
    fn infer(&mut self, e: &Expr) -> PResult<Ty> {
        match e {
            Expr::Int(..) => Ok(Ty::Base(Sort::int())),
            Expr::Op(op, pos) => {
                let t = match op {
                    Op::Eq | Op::Neq => {
                        let a = self.inf.fresh();
                        let Ty::Var(v) = a else { unreachable!() };
                        self.inf.eq_at.insert(*pos, v);
                        Ty::arrow(a.clone(), Ty::arrow(a, Ty::Base(Sort::bool())))
                    }
                    _ => Ty::of(&op.theory(false).ty()),
                };
                Ok(t)
            }
            Expr::Name(n, _) => Ok(match n.as_str() {
                "true" | "false" => Ty::Base(Sort::bool()),
                "not" => Ty::of(&TheoryOp::Not.ty()),
                _ => match self.sig.symbol(n) {
                    Some(f) => Ty::of(f.ty()),
                    None => match self.vars.get(n) {
                        Some(t) => t.clone(),
                        None => {
                            let t = self.inf.fresh();
                            self.vars.insert(n.clone(), t.clone());
                            t
                        }
                    },
                },
            }),
            Expr::App(h, args) => {
                let mut t = self.infer(h)?;
                for a in args {
                    let ta = self.infer(a)?;
                    let r = self.inf.fresh();
                    let expected = self.inf.resolve(&t);
                    if !self.inf.unify(&t, &Ty::arrow(ta.clone(), r.clone())) {
                        let msg = match &expected {
                            Ty::Arrow(d, _) => format!(
                                "argument has type {} but {} is expected",
                                self.inf.resolve(&ta),
                                self.inf.resolve(d)
                            ),
                            other => format!("too many arguments: the applied term has type {other}"),
                        };
                        return Err(Diagnostic::new(a.pos(), msg));
                    }
                    t = r;
                }
                Ok(t)
            }
        }
    }

    fn build(&self, e: &Expr) -> PResult<Term> {
        match e {
            Expr::Int(n, _) => Ok(Term::int(n.clone())),
            Expr::Op(op, pos) => {
                let on_bool = match self.inf.eq_at.get(pos) {
                    None => false,
                    Some(&v) => match self.inf.finish(&Ty::Var(v)) {
                        t if t == Type::int() => false,
                        t if t == Type::bool() => true,
                        t => return Err(Diagnostic::new(*pos, format!("equality on {t}; only Int and Bool compare"))),
                    },
                };
                Ok(Term::sym(Symbol::theory(op.theory(on_bool))))
            }
            Expr::Name(n, _) => Ok(match n.as_str() {
                "true" => Term::boolean(true),
                "false" => Term::boolean(false),
                "not" => Term::sym(Symbol::theory(TheoryOp::Not)),
                _ => match self.sig.symbol(n) {
                    Some(f) => Term::sym(f.clone()),
                    None => Term::var(Var::new(n, self.inf.finish(&self.vars[n]))),
                },
            }),
            Expr::App(h, args) => {
                let mut t = self.build(h)?;
                for a in args {
                    t = Term::app(t, self.build(a)?).map_err(|err| Diagnostic::new(a.pos(), err.to_string()))?;
                }
                Ok(t)
            }
        }
    }

    fn rule(&mut self, lhs: &Expr, rhs: &Expr, constraint: Option<&Expr>, pos: Pos) -> PResult<Rule> {
        let tl = self.infer(lhs)?;
        let tr = self.infer(rhs)?;
        if !self.inf.unify(&tl, &tr) {
            return Err(Diagnostic::new(
                rhs.pos(),
                format!("left-hand side has type {} but right-hand side has type {}", self.inf.resolve(&tl), self.inf.resolve(&tr)),
            ));
        }
        if let Some(c) = constraint {
            let tc = self.infer(c)?;
            if !self.inf.unify(&tc, &Ty::Base(Sort::bool())) {
                return Err(Diagnostic::new(c.pos(), format!("constraint has type {} instead of Bool", self.inf.resolve(&tc))));
            }
        }
        let l = self.build(lhs)?;
        let r = self.build(rhs)?;
        let phi = match constraint {
            Some(c) => self.build(c)?,
            None => Term::boolean(true),
        };
        Rule::new(l, r, phi).map_err(|e| Diagnostic::new(pos, e.to_string()))
    }
}

fn sort_of(sig: &Signature, t: &TypeExpr) -> PResult<Type> {
    match t {
        TypeExpr::Name(n, pos) => sig
            .sort(n)
            .map(|s| Type::base(s.clone()))
            .ok_or_else(|| Diagnostic::new(*pos, format!("undeclared sort `{n}`"))),
        TypeExpr::Arrow(d, c) => Ok(Type::arrow(sort_of(sig, d)?, sort_of(sig, c)?)),
    }
}

/// Builds a system from statements on top of `sig`.
fn elaborate(stmts: Vec<Stmt>, mut sig: Signature, allow_directives: bool) -> Result<InputFile, InputError> {
    let mut errors = Vec::new();
    for s in &stmts {
        if let Stmt::Sort(n, pos) = s {
            if n == "Int" || n == "Bool" {
                errors.push(Diagnostic::new(*pos, format!("sort `{n}` is built in")));
            } else if sig.sort(n).is_some() {
                errors.push(Diagnostic::new(*pos, format!("sort `{n}` declared twice")));
            } else if let Err(e) = sig.add_sort(n) {
                errors.push(Diagnostic::new(*pos, e.to_string()));
            }
        }
    }
    for s in &stmts {
        if let Stmt::Fun(n, t, pos) = s {
            let declared = sort_of(&sig, t).and_then(|ty| {
                if sig.symbol(n).is_some_and(|f| *f.ty() != ty) {
                    return Err(Diagnostic::new(*pos, format!("`{n}` declared twice with different types")));
                }
                sig.declare(n, ty).map_err(|e| Diagnostic::new(*pos, e.to_string()))
            });
            if let Err(d) = declared {
                errors.push(d);
            }
        }
    }
    let mut rules = Vec::new();
    let mut rule_pos = Vec::new();
    for s in &stmts {
        if let Stmt::Rule { lhs, rhs, constraint, pos } = s {
            let mut el = Elaborator { sig: &sig, inf: Infer::default(), vars: BTreeMap::new() };
            match el.rule(lhs, rhs, constraint.as_ref(), *pos) {
                Ok(r) => {
                    rules.push(r);
                    rule_pos.push(*pos);
                }
                Err(d) => errors.push(d),
            }
        }
    }
    let mut hidden = Vec::new();
    let mut goal = None;
    for s in &stmts {
        match s {
            Stmt::Hidden(names) if allow_directives => {
                for (n, pos) in names {
                    match sig.symbol(n) {
                        Some(f) => hidden.push(f.clone()),
                        None => errors.push(Diagnostic::new(*pos, format!("hidden symbol `{n}` is not declared"))),
                    }
                }
            }
            Stmt::Goal(g, pos) if allow_directives => {
                let parsed = match g.as_str() {
                    "termination" => Goal::Termination,
                    "public" => Goal::Public,
                    _ => {
                        errors.push(Diagnostic::new(*pos, format!("unknown goal `{g}`; expected `termination` or `public`")));
                        continue;
                    }
                };
                if goal.replace(parsed).is_some() {
                    errors.push(Diagnostic::new(*pos, "goal given twice"));
                }
            }
            Stmt::Hidden(names) => errors.push(Diagnostic::new(names[0].1, "directives are not allowed here")),
            Stmt::Goal(_, pos) => errors.push(Diagnostic::new(*pos, "directives are not allowed here")),
            _ => {}
        }
    }
    let mut system = Lcstrs::new(sig, rules);
    system.hidden.extend(hidden);
    if errors.is_empty() {
        for d in validate(&system) {
            let pos = d.rule.and_then(|i| rule_pos.get(i).copied()).unwrap_or_default();
            errors.push(Diagnostic::new(pos, d.message));
        }
    }
    if errors.is_empty() {
        Ok(InputFile { system, goal })
    } else {
        errors.sort_by_key(|d| d.pos);
        Err(InputError { diagnostics: errors })
    }
}

/// Parses and validates a complete input file.
pub fn parse(text: &str) -> Result<InputFile, InputError> {
    elaborate(statements(text)?, Signature::new(), true)
}

/// Parses an extension of `base`: it may use the sorts and symbols of the
/// base and declare new ones, but carries no directives.
pub fn parse_extension(text: &str, base: &Lcstrs) -> Result<Lcstrs, InputError> {
    let mut file = elaborate(statements(text)?, base.signature.clone(), false)?;
    file.system.hidden.clear();
    Ok(file.system)
}

#[cfg(test)]
mod tests;
