//! Prints systems back in the input format.

use std::fmt::Write;

use lcstrs_core::kernel::build;
use lcstrs_core::sdp::Goal;
use lcstrs_core::theory::Guarded;
use lcstrs_core::trs::{Lcstrs, Rule};

use crate::parser::InputFile;

pub fn print_rule(rule: &Rule) -> String {
    let phi = Guarded::constraint(rule);
    if build::is_true(phi) {
        format!("{} -> {};", rule.lhs(), rule.rhs())
    } else {
        format!("{} -> {} [{}];", rule.lhs(), rule.rhs(), phi)
    }
}

/// Declarations, then rules, then the `hidden:` directive.
pub fn print_system(system: &Lcstrs) -> String {
    let mut out = String::new();
    for s in system.signature.sorts().iter().filter(|s| !s.is_theory()) {
        writeln!(out, "sort {s};").unwrap();
    }
    for f in system.signature.symbols() {
        writeln!(out, "fun {} : {};", f.name(), f.ty()).unwrap();
    }
    for r in &system.rules {
        writeln!(out, "{}", print_rule(r)).unwrap();
    }
    if !system.hidden.is_empty() {
        let names: Vec<&str> = system.hidden.iter().map(|f| f.name()).collect();
        writeln!(out, "hidden: {};", names.join(", ")).unwrap();
    }
    out
}

pub fn print_file(file: &InputFile) -> String {
    let mut out = print_system(&file.system);
    match file.goal {
        Some(Goal::Termination) => out.push_str("goal: termination;\n"),
        Some(Goal::Public) => out.push_str("goal: public;\n"),
        None => {}
    }
    out
}
