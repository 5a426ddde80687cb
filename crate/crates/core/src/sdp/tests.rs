use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::fixtures::*;
use crate::kernel::Type;

fn shown(p: &DpProblem) -> Vec<String> {
    p.sdps.iter().map(|s| format!("{}: {s}", s.id)).collect()
}

#[test]
fn gcdlist_pairs() {
    let g = gcdlist();
    let p = gen_all(&g.system, Goal::Termination);
    assert_eq!(p.flag, Flag::An);
    assert_eq!(
        shown(&p),
        [
            "1: gcdlist♯ _x1_1 ⇒ gcd♯ _y1_1 _y1_2 {}",
            "2: gcdlist♯ _x1_1 ⇒ fold♯ gcd 0 _x1_1 {}",
            "3: fold♯ f y (cons x l) ⇒ fold♯ f y l {}",
            "4: gcd♯ m n ⇒ gcd♯ (-m) n [m < 0] {m}",
            "5: gcd♯ m n ⇒ gcd♯ m (-n) [n < 0] {n}",
            "6: gcd♯ m n ⇒ gcd♯ n (m mod n) [m >= 0 /\\ n > 0] {m, n}",
        ]
    );
    for s in &p.sdps {
        assert!(!marked_inside(s.lhs()) && !marked_inside(s.rhs()));
        assert_eq!(s.lhs().ty(), &Type::base(Sort::dp()));
    }
}

#[test]
fn factorial_pairs_and_publicity() {
    let f = fact_init(true);
    let p = gen_all(&f.system, Goal::Public);
    assert_eq!(p.flag, Flag::Pu);
    assert_eq!(
        shown(&p),
        [
            "1: fact♯ n k ⇒ comp♯ k ((*) n) _y2_3 [n != 0] {n}",
            "2: fact♯ n k ⇒ fact♯ (n - 1) (comp k ((*) n)) [n != 0] {n}",
            "3: init♯ k ⇒ fact♯ 42 k {}",
        ]
    );
    let public: Vec<bool> = p.sdps.iter().map(|s| is_public(s, &f.system.hidden)).collect();
    assert_eq!(public, [false, false, true]);
    // no pair for the comp rule: its rhs has a variable head
    assert!(gen_sdps(&f.system, 2).is_empty());
}

#[test]
fn renaming_and_validation() {
    let g = gcdlist();
    let p = &gen_all(&g.system, Goal::Termination).sdps[5];
    let q = p.renamed("~0");
    assert!(q.vars().iter().all(|x| x.name().ends_with("~0")));
    assert!(!q.same_pair(p));
    let lhs = p.lhs().clone();
    assert!(matches!(Sdp::new(lhs.clone(), lhs.clone(), build::gt(ivar("z"), Term::int(0)), BTreeSet::new()),
        Err(SdpError::ConstraintVarOutsideL(z)) if z == "z"));
    let unmarked = app(&g.gcd, vec![ivar("m"), ivar("n")]);
    assert!(matches!(Sdp::new(unmarked, lhs.clone(), build::tt(), BTreeSet::new()), Err(SdpError::NotMarked(_))));
    assert_eq!(mark(&app(&g.gcd, vec![Term::int(1), Term::int(2)]), &g.system).unwrap().to_string(), "gcd♯ 1 2");
    assert!(mark(&Term::sym(g.nil.clone()), &g.system).is_err());
}

fn link(c: &ChainLink, pairs: &[Sdp], name: &str) -> Option<String> {
    let x = pairs[c.sdp].vars().into_iter().find(|x| x.name() == name)?;
    c.subst.get(&x).map(|t| t.to_string())
}

#[test]
fn gcd_chain_is_found() {
    let g = gcdlist();
    let p = gen_all(&g.system, Goal::Termination);
    let mut pool: Vec<Term> = [42, 24, 18, 6].into_iter().map(Term::int).collect();
    pool.push(Term::sym(g.nil.clone()));
    let chains = enumerate_chains(&p.sdps, &g.system, 4, &pool, 2);
    assert!(chains[0].is_empty());
    let wanted = [(0, "42", "24"), (5, "42", "24"), (5, "24", "18"), (5, "18", "6")];
    let found = chains.iter().any(|c| {
        c.len() == 4
            && c.iter().zip(wanted).enumerate().all(|(i, (l, (id, m, n)))| {
                let (mv, nv) = if i == 0 { ("_y1_1", "_y1_2") } else { ("m", "n") };
                l.sdp == id && link(l, &p.sdps, mv).as_deref() == Some(m) && link(l, &p.sdps, nv).as_deref() == Some(n)
            })
    });
    assert!(found);
    // later links respect their pairs
    for c in chains.iter().filter(|c| c.len() >= 2) {
        for w in c.windows(2) {
            assert!(theory::respects(&w[1].subst, &p.sdps[w[1].sdp]).unwrap());
        }
    }
}

proptest! {
    // every generated pair comes from a subterm of an rhs whose head is
    // defined, and the lhs is the marked rule lhs
    #[test]
    fn generated_pairs_trace_back(which in 0usize..4) {
        let sys = match which {
            0 => gcdlist().system,
            1 => fact().system,
            2 => fact_init(false).system,
            _ => complst().system,
        };
        for i in 0..sys.rules.len() {
            let rule = &sys.rules[i];
            let defined_subterms = rule.rhs().subterms().into_iter()
                .filter(|u| u.head_symbol().is_some_and(|g| sys.is_defined(g)))
                .count();
            let pairs = gen_sdps(&sys, i);
            prop_assert!(pairs.len() <= defined_subterms + 1);
            for s in pairs {
                prop_assert_eq!(s.lhs_head().name(), rule.head().unwrap().name());
                prop_assert!(sys.is_defined(&sys.signature.symbol(s.rhs_head().name()).unwrap().clone()));
                prop_assert_eq!(Guarded::constraint(&s), Guarded::constraint(rule));
            }
        }
    }
}
