use std::collections::BTreeSet;

use lcstrs_core::kernel::{Signature, Symbol, Term, TheoryOp, Type, Var};
use lcstrs_core::sdp::Goal;
use lcstrs_core::theory::Guarded;
use proptest::prelude::*;

use super::*;
use crate::printer::{print_file, print_system};

const GCDLIST: &str = include_str!("../../corpus/gcdlist.lctrs");

fn errors(text: &str) -> Vec<String> {
    parse(text).unwrap_err().diagnostics.iter().map(|d| d.to_string()).collect()
}

fn rhs_of(text: &str) -> String {
    parse(text).unwrap().system.rules[0].rhs().to_string()
}

#[test]
fn gcdlist_has_seven_rules() {
    let f = parse(GCDLIST).unwrap();
    assert_eq!(f.system.rules.len(), 7);
    let d: BTreeSet<String> = f.system.defined_symbols().iter().map(|s| s.name().to_string()).collect();
    assert_eq!(d, ["fold", "gcd", "gcdlist"].map(String::from).into_iter().collect());
    assert_eq!(f.goal, Some(Goal::Termination));
    let fold = f.system.signature.symbol("fold").unwrap();
    assert_eq!(fold.ty().to_string(), "(Int -> Int -> Int) -> Int -> intlist -> Int");
    assert_eq!(f.system.rules[3].to_string_pair(), ("gcd m n".into(), "gcd (-m) n".into(), "m < 0".into()));
}

trait Shown {
    fn to_string_pair(&self) -> (String, String, String);
}

impl Shown for Rule {
    fn to_string_pair(&self) -> (String, String, String) {
        (self.lhs().to_string(), self.rhs().to_string(), Guarded::constraint(self).to_string())
    }
}

#[test]
fn minimal_file() {
    let f = parse("fun f : Int -> Int; f x -> f (x - 1) [x > 0];").unwrap();
    assert_eq!(f.system.rules.len(), 1);
    assert_eq!(f.goal, None);
    let x = f.system.rules[0].lhs().args()[0].as_var().unwrap().clone();
    assert_eq!(*x.ty(), Type::int());
}

#[test]
fn fresh_variable_of_non_theory_sort() {
    let e = errors("sort intlist;\nfun f : Int -> intlist;\nf x -> y;\n");
    assert_eq!(e.len(), 1);
    assert!(e[0].starts_with("3:1:"), "{e:?}");
    assert!(e[0].contains("fresh"), "{e:?}");
}

#[test]
fn bare_variable_lhs() {
    let e = errors("fun f : Int -> Int;\nx -> f x;");
    assert!(e[0].starts_with("2:1:"), "{e:?}");
}

#[test]
fn syntax_errors_are_positioned_and_recovered() {
    let text = "fun f : Int -> Int;\nf x -> [x > 0];\nfun g Int;\nf x -> f x x;\n";
    let e = errors(text);
    assert_eq!(e.len(), 2, "{e:?}");
    assert!(e[0].starts_with("2:8: expected a term"), "{e:?}");
    assert!(e[1].starts_with("3:7: expected `:`"), "{e:?}");
    // the type error on line 4 only shows once the syntax is clean
    let e = errors("fun f : Int -> Int;\nf x -> f x x;\n");
    assert!(e[0].starts_with("2:12: too many arguments"), "{e:?}");
    assert!(errors("fun f : Int -> Int;\nf x -> f (x")[0].starts_with("2:12: expected `)`, found end of input"));
}

#[test]
fn type_errors() {
    let e = errors("sort o;\nfun a : o;\nfun f : Int -> Int;\nf x -> f a;\n");
    assert!(e[0].starts_with("4:10: argument has type o but Int is expected"), "{e:?}");
    let e = errors("fun f : Int -> Int;\nf x -> f x [x + 1];\n");
    assert!(e[0].contains("constraint has type Int instead of Bool"), "{e:?}");
    let e = errors("sort o;\nfun f : o -> o;\nf x -> x [x = x];\n");
    assert!(e[0].contains("equality on o"), "{e:?}");
    let e = errors("fun f : Int -> Int;\nf -> 1;\n");
    assert!(e[0].contains("left-hand side has type Int -> Int but right-hand side has type Int"), "{e:?}");
}

#[test]
fn declarations_are_checked() {
    assert!(errors("sort Int;")[0].contains("built in"));
    assert!(errors("fun f : nat;")[0].contains("undeclared sort `nat`"));
    assert!(errors("fun f : Int; fun f : Bool;")[0].contains("declared twice"));
    assert!(errors("fun f : Int; hidden: g;")[0].contains("`g` is not declared"));
    assert!(errors("goal: public; goal: termination;")[0].contains("goal given twice"));
    assert!(errors("goal: forever;")[0].contains("unknown goal"));
    assert!(errors("fun mod : Int;")[0].contains("expected a name"));
    assert!(errors("1 $ 2")[0].contains("unexpected character"));
}

#[test]
fn precedence_and_associativity() {
    let decl = "fun f : Int -> Int -> Int; fun p : Bool -> Int;";
    let show = |rhs: &str| rhs_of(&format!("{decl} f x y -> {rhs};"));
    let args = |rhs: &str| {
        let f = parse(&format!("{decl} f x y -> {rhs};")).unwrap();
        f.system.rules[0].rhs().clone()
    };
    assert_eq!(show("x + y * x"), "x + y * x");
    assert_eq!(show("(x + y) * x"), "(x + y) * x");
    assert_eq!(show("x - y - 1"), "x - y - 1");
    assert_eq!(show("x - (y - 1)"), "x - (y - 1)");
    assert_eq!(show("-x * y"), "-x * y");
    assert_eq!(show("f (-3) (x mod y div 2)"), "f (-3) (x mod y div 2)");
    assert_eq!(show("p (x < y /\\ y < 3 \\/ x = y)"), "p (x < y /\\ y < 3 \\/ x = y)");
    assert_eq!(show("p (not (x <= y))"), "p (not (x <= y))");
    assert_eq!(show("(+) x y"), "x + y");
    assert_eq!(show("f x ((*) 2 y)"), "f x (2 * y)");
    // unary minus on a literal is a literal, otherwise a subtraction from 0
    assert_eq!(args("-3").as_int().unwrap(), &num_bigint::BigInt::from(-3));
    assert_eq!(args("-(3)").to_string(), "0 - 3");
    assert!(errors(&format!("{decl} f x y -> p (x < y < 3);"))[0].contains("do not chain"));
}

#[test]
fn boolean_equality_is_inferred() {
    let f = parse("fun f : Bool -> Bool -> Int; f a b -> 0 [a = b];").unwrap();
    let phi = Guarded::constraint(&f.system.rules[0]).clone();
    assert_eq!(phi.head_symbol().unwrap().theory_op(), Some(&TheoryOp::Eq(true)));
    let f = parse("fun f : Int -> Int; f a -> 0 [a != 2];").unwrap();
    let phi = Guarded::constraint(&f.system.rules[0]).clone();
    assert_eq!(phi.head_symbol().unwrap().theory_op(), Some(&TheoryOp::Neq(false)));
}

#[test]
fn higher_order_variables() {
    let f = parse(include_str!("../../corpus/fact.lctrs")).unwrap();
    let k = f.system.rules[0].lhs().args()[1].as_var().unwrap().clone();
    assert_eq!(k.ty().to_string(), "Int -> Int");
    assert_eq!(f.system.rules[1].rhs().to_string(), "fact (n - 1) (comp k ((*) n))");
}

#[test]
fn directives() {
    let f = parse(include_str!("../../corpus/fact_init.lctrs")).unwrap();
    assert_eq!(f.goal, Some(Goal::Public));
    let hidden: Vec<&str> = f.system.hidden.iter().map(Symbol::name).collect();
    assert_eq!(hidden, ["fact"]);
}

#[test]
fn extensions_see_the_base() {
    let base = parse(include_str!("../../corpus/applam.lctrs")).unwrap().system;
    let ext = parse_extension(include_str!("../../corpus/applam_ext.lctrs"), &base).unwrap();
    assert_eq!(ext.rules.len(), 1);
    assert_eq!(ext.rules[0].rhs().to_string(), "app x x");
    assert!(parse_extension("goal: public;", &base).unwrap_err().to_string().contains("not allowed"));
}

#[test]
fn corpus_round_trips() {
    for text in [
        GCDLIST,
        include_str!("../../corpus/fact.lctrs"),
        include_str!("../../corpus/fact_init.lctrs"),
        include_str!("../../corpus/complst.lctrs"),
        include_str!("../../corpus/parity.lctrs"),
    ] {
        let once = parse(text).unwrap();
        let printed = print_file(&once);
        let twice = parse(&printed).unwrap();
        assert_eq!(once, twice);
        assert_eq!(print_file(&twice), printed);
    }
}

fn op(o: TheoryOp, args: Vec<Term>) -> Term {
    Term::apply(Term::sym(Symbol::theory(o)), args).unwrap()
}

fn int_term() -> impl Strategy<Value = Term> {
    let x = Term::var(Var::new("x", Type::int()));
    let y = Term::var(Var::new("y", Type::int()));
    let leaf = prop_oneof![Just(x), Just(y), (-4i64..5).prop_map(Term::int)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let bin = prop_oneof![
            Just(TheoryOp::Add),
            Just(TheoryOp::Sub),
            Just(TheoryOp::Mul),
            Just(TheoryOp::Div),
            Just(TheoryOp::Mod)
        ];
        prop_oneof![
            (bin, inner.clone(), inner.clone()).prop_map(|(o, a, b)| op(o, vec![a, b])),
            inner.prop_map(|a| op(TheoryOp::Sub, vec![Term::int(0), a])),
        ]
    })
}

fn bool_term() -> impl Strategy<Value = Term> {
    let cmp = prop_oneof![
        Just(TheoryOp::Lt),
        Just(TheoryOp::Le),
        Just(TheoryOp::Gt),
        Just(TheoryOp::Ge),
        Just(TheoryOp::Eq(false)),
        Just(TheoryOp::Neq(false))
    ];
    let atom = prop_oneof![
        (cmp, int_term(), int_term()).prop_map(|(o, a, b)| op(o, vec![a, b])),
        any::<bool>().prop_map(Term::boolean),
    ];
    atom.prop_recursive(3, 12, 2, |inner| {
        let conn = prop_oneof![Just(TheoryOp::And), Just(TheoryOp::Or), Just(TheoryOp::Eq(true)), Just(TheoryOp::Neq(true))];
        prop_oneof![
            (conn, inner.clone(), inner.clone()).prop_map(|(o, a, b)| op(o, vec![a, b])),
            inner.prop_map(|a| op(TheoryOp::Not, vec![a])),
        ]
    })
}

const PIECES: [&str; 18] = ["f", "x", "(", ")", "->", "[", "]", ";", ":", "-", "1", "fun", "sort", "Int", "=", "/\\", "hidden:", "#"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn token_soup_never_panics(picks in proptest::collection::vec(0..PIECES.len(), 0..16)) {
        let text: Vec<&str> = picks.iter().map(|&i| PIECES[i]).collect();
        let _ = parse(&text.join(" "));
    }

    #[test]
    fn any_text_never_panics(text in any::<String>()) {
        let _ = parse(&text);
    }

    #[test]
    fn printed_systems_reparse_identically(t in int_term(), phi in bool_term()) {
        let mut sig = Signature::new();
        let f = sig.declare("f", Type::function(vec![Type::int(), Type::int()], Type::int())).unwrap();
        let x = Term::var(Var::new("x", Type::int()));
        let y = Term::var(Var::new("y", Type::int()));
        let lhs = Term::apply(Term::sym(f.clone()), vec![x, y.clone()]).unwrap();
        let rhs = Term::apply(Term::sym(f), vec![t, y]).unwrap();
        let system = Lcstrs::new(sig, vec![Rule::new(lhs, rhs, phi).unwrap()]);
        let text = print_system(&system);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text}\n{e}")))?;
        prop_assert_eq!(back.system, system);
    }
}
