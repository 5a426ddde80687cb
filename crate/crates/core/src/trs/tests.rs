use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::fixtures::*;
use crate::kernel::{Dir, Type};

#[test]
fn example_systems_validate() {
    assert_eq!(validate(&gcdlist().system), vec![]);
    assert_eq!(validate(&fact().system), vec![]);
    assert_eq!(validate(&fact_init(true).system), vec![]);
    assert_eq!(validate(&complst().system), vec![]);
    assert_eq!(validate(&applam().system), vec![]);
}

#[test]
fn validation_diagnostics() {
    let mut sys = Lcstrs::default();
    sys.rules.push(Rule::unconstrained(ivar("x"), ivar("x")).unwrap());
    let d = validate(&sys);
    assert!(d.iter().any(|d| d.to_string() == "rule 1: lhs is a bare variable"), "{d:?}");

    let mut sig = Signature::new();
    let list = Type::base(sig.add_sort("intlist").unwrap());
    let f = sig.declare("f", Type::arrow(int(), list.clone())).unwrap();
    let r = Rule::unconstrained(app(&f, vec![ivar("x")]), var("y", list)).unwrap();
    let d = validate(&Lcstrs::new(sig, vec![r]));
    assert_eq!(d.len(), 1);
    assert!(d[0].message.starts_with("fresh rhs variable y of non-theory sort"), "{}", d[0]);
}

#[test]
fn defined_symbols_and_constructors() {
    let g = gcdlist();
    let d: Vec<_> = g.system.defined_symbols().iter().map(|s| s.name().to_string()).collect();
    assert_eq!(d, ["fold", "gcd", "gcdlist"]);
    let c: Vec<_> = g.system.constructors().iter().map(|s| s.name().to_string()).collect();
    assert_eq!(c, ["cons", "nil"]);
}

#[test]
fn matching_examples() {
    let g = gcdlist();
    let pat = app(&g.gcd, vec![ivar("m"), ivar("n")]);
    let subj = app(&g.gcd, vec![Term::int(42), Term::int(24)]);
    let s = match_term(&pat, &subj).unwrap();
    assert_eq!(s.to_string(), "[m↦42, n↦24]");

    let f = var("f", iii());
    let pat = app(&g.fold, vec![f, ivar("y"), Term::sym(g.nil.clone())]);
    let one = app(&g.cons, vec![Term::int(1), Term::sym(g.nil.clone())]);
    let subj = app(&g.fold, vec![Term::sym(g.gcd.clone()), Term::int(0), one]);
    assert_eq!(match_term(&pat, &subj), None);

    let s = match_term(&ivar("x"), &subj.args()[1].clone()).unwrap();
    assert_eq!(s.len(), 1);
}

fn kinds(steps: &[Step]) -> Vec<Option<usize>> {
    steps
        .iter()
        .map(|s| match &s.kind {
            StepKind::Rule { index, .. } => Some(*index),
            StepKind::Calc => None,
        })
        .collect()
}

#[test]
fn factorial_sequence() {
    let fx = fact();
    let sys = &fx.system;
    let pool = default_pool(sys);
    let id = Term::sym(fx.id.clone());
    let mut t = app(&fx.fact, vec![Term::int(1), id]);
    let expected = [
        ("fact (1 - 1) (comp id ((*) 1))", Some(1)),
        ("fact 0 (comp id ((*) 1))", None),
        ("comp id ((*) 1) 1", Some(0)),
        ("id (1 * 1)", Some(2)),
        ("id 1", None),
        ("1", Some(3)),
    ];
    for (shown, kind) in expected {
        let steps = reducts(sys, &t, &pool);
        let step = steps
            .iter()
            .find(|s| s.result.to_string() == shown)
            .unwrap_or_else(|| panic!("{t} does not step to {shown}"));
        assert_eq!(kinds(core::slice::from_ref(step)), vec![kind]);
        t = step.result.clone();
    }
    assert!(reducts(sys, &Term::int(42), &pool).is_empty());
}

#[test]
fn head_positions_can_rewrite() {
    // an arrow-typed rule fires at a head prefix
    let mut sig = Signature::new();
    let f = sig.declare("f", ii()).unwrap();
    let g = sig.declare("g", ii()).unwrap();
    let sys = Lcstrs::new(sig, vec![Rule::unconstrained(Term::sym(f.clone()), Term::sym(g.clone())).unwrap()]);
    let t = app(&f, vec![Term::int(3)]);
    let steps = reducts(&sys, &t, &[]);
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].path, vec![Dir::Fun]);
    assert_eq!(steps[0].result, app(&g, vec![Term::int(3)]));
}

#[test]
fn fresh_variables_range_over_the_pool() {
    let mut sig = Signature::new();
    let f = sig.declare("f", Type::arrow(int(), int())).unwrap();
    let r = Rule::new(app(&f, vec![ivar("x")]), ivar("y"), build::gt(ivar("y"), ivar("x"))).unwrap();
    let sys = Lcstrs::new(sig, vec![r]);
    let pool: Vec<Value> = (-2..=2).map(|n| Value::Int(n.into())).collect();
    let steps = reducts(&sys, &app(&f, vec![Term::int(0)]), &pool);
    let results: Vec<_> = steps.iter().map(|s| s.result.to_string()).collect();
    assert_eq!(results, ["1", "2"]);
}

#[test]
fn extension_checks() {
    let base = applam();
    let mut sig = base.system.signature.clone();
    let o = Type::base(sig.sort("o").unwrap().clone());
    let w = sig.declare("w", Type::arrow(o.clone(), o.clone())).unwrap();
    let x = var("x", o.clone());
    let rhs = app(&base.app, vec![x.clone(), x.clone()]);
    let ext = Lcstrs::new(sig.clone(), vec![Rule::unconstrained(app(&w, vec![x.clone()]), rhs).unwrap()]);
    assert_eq!(check_extension(&base.system, &ext), ExtensionVerdict::Public);

    let mut hidden_base = base.system.clone();
    hidden_base.hidden.insert(base.app.clone());
    assert_eq!(check_extension(&hidden_base, &ext), ExtensionVerdict::Hierarchical);

    let f = var("f", Type::arrow(o.clone(), o.clone()));
    let redefine = Rule::unconstrained(app(&base.lam, vec![f.clone()]), app(&base.lam, vec![f])).unwrap();
    let ext = Lcstrs::new(sig, vec![redefine]);
    assert!(matches!(check_extension(&base.system, &ext), ExtensionVerdict::Rejected(_)));

    let mut clash = Signature::new();
    clash.add_sort("o").unwrap();
    clash.declare("lam", int()).unwrap();
    let ext = Lcstrs::new(clash, vec![]);
    assert!(!check_extension(&base.system, &ext).is_hierarchical());
}

// Random first-order terms over gcd/cons/nil and a few variables, for the
// matching properties.

fn small_term(depth: u32) -> BoxedStrategy<Term> {
    let g = gcdlist();
    let gcd = g.gcd.clone();
    let leaf = prop_oneof![
        (-2i64..3).prop_map(Term::int),
        prop::sample::select(vec!["a", "b"]).prop_map(ivar),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = small_term(depth - 1);
    prop_oneof![leaf, (sub.clone(), sub).prop_map(move |(a, b)| app(&gcd, vec![a, b]))].boxed()
}

fn ground(depth: u32) -> BoxedStrategy<Term> {
    let gcd = gcdlist().gcd;
    let leaf = (-2i64..3).prop_map(Term::int);
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = ground(depth - 1);
    prop_oneof![leaf, (sub.clone(), sub).prop_map(move |(a, b)| app(&gcd, vec![a, b]))].boxed()
}

/// Every term obtained from `p` by substituting terms drawn from the
/// subterms of `s`; the exhaustive matcher for small inputs.
fn brute_force_match(p: &Term, s: &Term) -> bool {
    let vars: Vec<Var> = p.vars().into_iter().collect();
    let cands = s.subterms();
    let mut assignments: Vec<Subst> = vec![Subst::new()];
    for x in &vars {
        assignments = assignments
            .into_iter()
            .flat_map(|a| cands.iter().filter_map(move |c| a.clone().with(x.clone(), c.clone()).ok()))
            .collect();
    }
    assignments.iter().any(|a| p.substitute(a) == *s)
}

proptest! {
    #[test]
    fn matching_is_sound_and_complete(p in small_term(2), s in ground(3)) {
        match match_term(&p, &s) {
            Some(sigma) => prop_assert_eq!(p.substitute(&sigma), s),
            None => prop_assert!(!brute_force_match(&p, &s)),
        }
    }

    #[test]
    fn reducts_reconstruct(m in -3i64..4, n in -3i64..4) {
        let g = gcdlist();
        let t = app(&g.gcd, vec![build::add(Term::int(m), Term::int(1)), Term::int(n)]);
        let pool = default_pool(&g.system);
        let redexes = crate::theory::kappa_redexes(&t);
        let mut calc_paths = Vec::new();
        for step in reducts(&g.system, &t, &pool) {
            prop_assert_eq!(step.result.ty(), t.ty());
            let u = t.at(&step.path).unwrap();
            match &step.kind {
                StepKind::Rule { index, subst } => {
                    let rule = &g.system.rules[*index];
                    prop_assert_eq!(&rule.lhs().substitute(subst), u);
                    prop_assert!(crate::theory::respects(subst, rule).unwrap());
                    let rebuilt = t.replace_at(&step.path, rule.rhs().substitute(subst)).unwrap();
                    prop_assert_eq!(rebuilt, step.result.clone());
                }
                StepKind::Calc => {
                    let v = crate::theory::calculation_step(u).unwrap();
                    prop_assert_eq!(t.replace_at(&step.path, v).unwrap(), step.result.clone());
                    calc_paths.push(step.path.clone());
                }
            }
        }
        let redex_paths: Vec<_> = redexes.into_iter().map(|(p, _)| p).collect();
        prop_assert_eq!(calc_paths, redex_paths);
    }
}
