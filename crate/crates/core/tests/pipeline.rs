//! End-to-end runs through the public API with an external solver process
//! started once per query.

use std::io::Write;
use std::process::{Command, Stdio};

use lcstrs_core::kernel::{build, Signature, Symbol, Term, Type, Var};
use lcstrs_core::processors::{check_proof, solve, Outcome, Steps, Strategy, Unlimited, Verdict, Witness};
use lcstrs_core::sdp::Goal;
use lcstrs_core::solver::{RawAnswer, SmtBackend, SmtQuery, Solver};
use lcstrs_core::trs::{Lcstrs, Rule};

struct Z3;

impl SmtBackend for Z3 {
    fn check(&mut self, q: &SmtQuery) -> RawAnswer {
        let mut script = format!("(set-logic {})\n", q.logic.as_str());
        for (n, s) in &q.declarations {
            script += &format!("(declare-const {n} {s})\n");
        }
        script += &format!("(assert {})\n(check-sat)\n", q.assertion);
        let names: Vec<&str> = q.names().collect();
        if !names.is_empty() {
            script += &format!("(get-value ({}))\n", names.join(" "));
        }
        let mut child = Command::new("z3")
            .args(["-in", "-smt2", "-t:10000"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .expect("z3 on PATH");
        child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
        let text = String::from_utf8(child.wait_with_output().unwrap().stdout).unwrap();
        let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
        match first.trim() {
            "sat" => RawAnswer::Sat(if names.is_empty() { "()".into() } else { rest.trim().into() }),
            "unsat" => RawAnswer::Unsat,
            other => RawAnswer::Unknown(other.into()),
        }
    }
}

fn z3() -> Solver {
    Solver::new(Box::new(Z3))
}

fn x() -> Term {
    Term::var(Var::new("x", Type::int()))
}

fn call(f: &Symbol, arg: Term) -> Term {
    Term::app(Term::sym(f.clone()), arg).unwrap()
}

/// `f x → f (x - 1) [x > 0]`
fn countdown() -> Lcstrs {
    let mut sig = Signature::new();
    let f = sig.declare("f", Type::arrow(Type::int(), Type::int())).unwrap();
    let rule = Rule::new(call(&f, x()), call(&f, build::sub(x(), Term::int(1))), build::gt(x(), Term::int(0))).unwrap();
    Lcstrs::new(sig, vec![rule])
}

/// `f x → f (x + 1) [x > 0]`
fn countup() -> Lcstrs {
    let mut sig = Signature::new();
    let f = sig.declare("f", Type::arrow(Type::int(), Type::int())).unwrap();
    let rule = Rule::new(call(&f, x()), call(&f, build::add(x(), Term::int(1))), build::gt(x(), Term::int(0))).unwrap();
    Lcstrs::new(sig, vec![rule])
}

#[test]
fn countdown_terminates_and_the_proof_checks() {
    let sys = countdown();
    let proof = solve(&sys, Goal::Termination, &mut z3(), &Strategy::default(), &mut Unlimited);
    assert_eq!(proof.verdict, Verdict::Yes);
    let mut mappings = 0;
    proof.root.as_ref().unwrap().walk(&mut |n| {
        if let Outcome::Applied { witness: Witness::IntMap { .. }, .. } = &n.outcome {
            mappings += 1;
        }
    });
    assert_eq!(mappings, 1);
    check_proof(&sys, &proof, &mut z3()).unwrap();
}

#[test]
fn countup_is_not_proven() {
    let proof = solve(&countup(), Goal::Termination, &mut z3(), &Strategy::default(), &mut Unlimited);
    assert_eq!(proof.verdict, Verdict::Maybe);
}

#[test]
fn proofs_do_not_transfer_between_systems() {
    let proof = solve(&countdown(), Goal::Termination, &mut z3(), &Strategy::default(), &mut Unlimited);
    assert!(check_proof(&countup(), &proof, &mut z3()).is_err());
}

#[test]
fn without_a_solver_nothing_is_claimed() {
    let proof = solve(&countdown(), Goal::Termination, &mut Solver::offline(), &Strategy::default(), &mut Unlimited);
    assert_eq!(proof.verdict, Verdict::Maybe);
}

#[test]
fn an_exhausted_budget_gives_maybe() {
    let proof = solve(&countdown(), Goal::Termination, &mut z3(), &Strategy::default(), &mut Steps(0));
    assert_eq!(proof.verdict, Verdict::Maybe);
}
