//! Example systems built directly through the kernel API, shared by the
//! unit tests of every module.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{build, Signature, Sort, Symbol, Term, TheoryOp, Type, Var};
use crate::trs::{Lcstrs, Rule};

pub fn int() -> Type {
    Type::int()
}

pub fn ii() -> Type {
    Type::arrow(int(), int())
}

pub fn iii() -> Type {
    Type::function(vec![int(), int()], int())
}

pub fn var(name: &str, ty: Type) -> Term {
    Term::var(Var::new(name, ty))
}

pub fn ivar(name: &str) -> Term {
    var(name, int())
}

pub fn app(f: &Symbol, args: Vec<Term>) -> Term {
    Term::apply(Term::sym(f.clone()), args).unwrap()
}

pub fn apt(f: Term, args: Vec<Term>) -> Term {
    Term::apply(f, args).unwrap()
}

pub fn op(o: TheoryOp) -> Term {
    Term::sym(Symbol::theory(o))
}

pub fn modulo(a: Term, b: Term) -> Term {
    apt(op(TheoryOp::Mod), vec![a, b])
}

pub fn rule(l: Term, r: Term, phi: Term) -> Rule {
    Rule::new(l, r, phi).unwrap()
}

pub struct Gcdlist {
    pub system: Lcstrs,
    pub gcdlist: Symbol,
    pub fold: Symbol,
    pub gcd: Symbol,
    pub nil: Symbol,
    pub cons: Symbol,
}

pub fn gcdlist() -> Gcdlist {
    let mut sig = Signature::new();
    let list = Type::base(sig.add_sort("intlist").unwrap());
    let nil = sig.declare("nil", list.clone()).unwrap();
    let cons = sig.declare("cons", Type::function(vec![int(), list.clone()], list.clone())).unwrap();
    let gcdlist = sig.declare("gcdlist", Type::arrow(list.clone(), int())).unwrap();
    let fold = sig.declare("fold", Type::function(vec![iii(), int(), list.clone()], int())).unwrap();
    let gcd = sig.declare("gcd", iii()).unwrap();
    let (f, y, x, l) = (var("f", iii()), ivar("y"), ivar("x"), var("l", list));
    let (m, n) = (ivar("m"), ivar("n"));
    let rules = vec![
        rule(Term::sym(gcdlist.clone()), app(&fold, vec![Term::sym(gcd.clone()), Term::int(0)]), build::tt()),
        rule(app(&fold, vec![f.clone(), y.clone(), Term::sym(nil.clone())]), y.clone(), build::tt()),
        rule(
            app(&fold, vec![f.clone(), y.clone(), app(&cons, vec![x.clone(), l.clone()])]),
            apt(f.clone(), vec![x, app(&fold, vec![f, y, l])]),
            build::tt(),
        ),
        rule(
            app(&gcd, vec![m.clone(), n.clone()]),
            app(&gcd, vec![build::neg(m.clone()), n.clone()]),
            build::lt(m.clone(), Term::int(0)),
        ),
        rule(
            app(&gcd, vec![m.clone(), n.clone()]),
            app(&gcd, vec![m.clone(), build::neg(n.clone())]),
            build::lt(n.clone(), Term::int(0)),
        ),
        rule(app(&gcd, vec![m.clone(), Term::int(0)]), m.clone(), build::ge(m.clone(), Term::int(0))),
        rule(
            app(&gcd, vec![m.clone(), n.clone()]),
            app(&gcd, vec![n.clone(), modulo(m.clone(), n.clone())]),
            build::and(build::ge(m, Term::int(0)), build::gt(n, Term::int(0))),
        ),
    ];
    Gcdlist { system: Lcstrs::new(sig, rules), gcdlist, fold, gcd, nil, cons }
}

pub struct Fact {
    pub system: Lcstrs,
    pub fact: Symbol,
    pub comp: Symbol,
    pub id: Symbol,
}

/// Factorial in continuation-passing style.
pub fn fact() -> Fact {
    let mut sig = Signature::new();
    let fact = sig.declare("fact", Type::function(vec![int(), ii()], int())).unwrap();
    let comp = sig.declare("comp", Type::function(vec![ii(), ii(), int()], int())).unwrap();
    let id = sig.declare("id", ii()).unwrap();
    let (n, k, g, f, x) = (ivar("n"), var("k", ii()), var("g", ii()), var("f", ii()), ivar("x"));
    let times_n = apt(op(TheoryOp::Mul), vec![n.clone()]);
    let rules = vec![
        rule(app(&fact, vec![n.clone(), k.clone()]), apt(k.clone(), vec![Term::int(1)]), build::le(n.clone(), Term::int(0))),
        rule(
            app(&fact, vec![n.clone(), k.clone()]),
            app(&fact, vec![build::sub(n.clone(), Term::int(1)), app(&comp, vec![k, times_n])]),
            build::gt(n, Term::int(0)),
        ),
        rule(
            app(&comp, vec![g.clone(), f.clone(), x.clone()]),
            apt(g, vec![apt(f, vec![x.clone()])]),
            build::tt(),
        ),
        rule(app(&id, vec![x.clone()]), x, build::tt()),
    ];
    Fact { system: Lcstrs::new(sig, rules), fact, comp, id }
}

pub struct FactInit {
    pub system: Lcstrs,
    pub fact: Symbol,
    pub comp: Symbol,
    pub init: Symbol,
}

/// The factorial variant with an `init` entry point; `fact` hidden when
/// `hide` is set.
pub fn fact_init(hide: bool) -> FactInit {
    let mut sig = Signature::new();
    let fact = sig.declare("fact", Type::function(vec![int(), ii()], int())).unwrap();
    let comp = sig.declare("comp", Type::function(vec![ii(), ii(), int()], int())).unwrap();
    let init = sig.declare("init", Type::arrow(ii(), int())).unwrap();
    let (n, k, g, f, x) = (ivar("n"), var("k", ii()), var("g", ii()), var("f", ii()), ivar("x"));
    let times_n = apt(op(TheoryOp::Mul), vec![n.clone()]);
    let rules = vec![
        rule(app(&fact, vec![n.clone(), k.clone()]), apt(k.clone(), vec![Term::int(1)]), build::eq(n.clone(), Term::int(0))),
        rule(
            app(&fact, vec![n.clone(), k.clone()]),
            app(&fact, vec![build::sub(n.clone(), Term::int(1)), app(&comp, vec![k.clone(), times_n])]),
            build::neq(n, Term::int(0)),
        ),
        rule(
            app(&comp, vec![g.clone(), f.clone(), x.clone()]),
            apt(g, vec![apt(f, vec![x])]),
            build::tt(),
        ),
        rule(app(&init, vec![k.clone()]), app(&fact, vec![Term::int(42), k]), build::tt()),
    ];
    let mut system = Lcstrs::new(sig, rules);
    if hide {
        system.hidden.insert(fact.clone());
    }
    FactInit { system, fact, comp, init }
}

pub struct Complst {
    pub system: Lcstrs,
    pub funlist: Sort,
    pub fcons: Symbol,
}

pub fn complst() -> Complst {
    let mut sig = Signature::new();
    let funlist = sig.add_sort("funlist").unwrap();
    let fl = Type::base(funlist.clone());
    let fnil = sig.declare("fnil", fl.clone()).unwrap();
    let fcons = sig.declare("fcons", Type::function(vec![ii(), fl.clone()], fl.clone())).unwrap();
    let complst = sig.declare("complst", Type::function(vec![fl.clone(), int()], int())).unwrap();
    let (x, f, l) = (ivar("x"), var("f", ii()), var("l", fl));
    let rules = vec![
        rule(app(&complst, vec![Term::sym(fnil), x.clone()]), x.clone(), build::tt()),
        rule(
            app(&complst, vec![app(&fcons, vec![f.clone(), l.clone()]), x.clone()]),
            app(&complst, vec![l, apt(f, vec![x])]),
            build::tt(),
        ),
    ];
    Complst { system: Lcstrs::new(sig, rules), funlist, fcons }
}

pub struct Applam {
    pub system: Lcstrs,
    pub app: Symbol,
    pub lam: Symbol,
}

/// `app (lam f) → f` over a sort `o`.
pub fn applam() -> Applam {
    let mut sig = Signature::new();
    let o = Type::base(sig.add_sort("o").unwrap());
    let oo = Type::arrow(o.clone(), o.clone());
    let lam = sig.declare("lam", Type::arrow(oo.clone(), o.clone())).unwrap();
    let appf = sig.declare("app", Type::arrow(o.clone(), oo.clone())).unwrap();
    let f = var("f", oo);
    let rules = vec![rule(app(&appf, vec![app(&lam, vec![f.clone()])]), f, build::tt())];
    Applam { system: Lcstrs::new(sig, rules), app: appf, lam }
}

/// Runs `z3` once per query; for unit tests only.
pub struct OneShotZ3;

impl crate::solver::SmtBackend for OneShotZ3 {
    fn check(&mut self, q: &crate::solver::SmtQuery) -> crate::solver::RawAnswer {
        use crate::solver::RawAnswer;
        use std::io::Write;
        use std::string::String;
        let mut script = alloc::format!("(set-logic {})\n", q.logic.as_str());
        for (n, s) in &q.declarations {
            script.push_str(&alloc::format!("(declare-const {n} {s})\n"));
        }
        script.push_str(&alloc::format!("(assert {})\n(check-sat)\n", q.assertion));
        let names: Vec<&str> = q.names().collect();
        if !names.is_empty() {
            script.push_str(&alloc::format!("(get-value ({}))\n", names.join(" ")));
        }
        let mut child = std::process::Command::new("z3")
            .args(["-in", "-smt2", "-t:10000"])
            .stdin(std::process::Stdio::piped())
            .stdout(std::process::Stdio::piped())
            .spawn()
            .expect("z3 on PATH");
        child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
        let out = child.wait_with_output().unwrap();
        let text = String::from_utf8_lossy(&out.stdout).into_owned();
        let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
        match first.trim() {
            "sat" => RawAnswer::Sat(if names.is_empty() { "()".into() } else { rest.trim().into() }),
            "unsat" => RawAnswer::Unsat,
            other => RawAnswer::Unknown(other.into()),
        }
    }
}

pub fn z3() -> crate::solver::Solver {
    crate::solver::Solver::new(alloc::boxed::Box::new(OneShotZ3))
}
