//! Text and JSON views of a proof.

use std::collections::BTreeSet;
use std::fmt::Write;

use lcstrs_core::processors::{Outcome, Proof, ProofNode, Witness};
use lcstrs_core::sdp::{Goal, Sdp};
use serde_json::{json, Map, Value};

/// Version tag of the JSON layout.
pub const SCHEMA: &str = "lcstrs-proof/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn goal_name(g: Goal) -> &'static str {
    match g {
        Goal::Termination => "termination",
        Goal::Public => "public",
    }
}

fn is_trivial(proof: &Proof) -> bool {
    proof.root.as_ref().is_some_and(|r| r.problem.is_empty())
}

fn sdp_line(p: &Sdp) -> String {
    format!("  ({}) {p}\n", p.id)
}

/// Verdict on the first line, then the proof tree.
pub fn text(proof: &Proof) -> String {
    let mut out = format!("{}\n", proof.verdict);
    writeln!(out, "goal: {}", goal_name(proof.goal)).unwrap();
    if let Some(r) = &proof.reason {
        writeln!(out, "reason: {r}").unwrap();
    }
    if let Some(o) = &proof.ordering {
        writeln!(out, "sort ordering: {o}").unwrap();
    }
    let Some(root) = &proof.root else { return out };
    if is_trivial(proof) {
        out.push_str("no dependency pairs; trivially terminating\n");
        return out;
    }
    out.push_str("dependency pairs:\n");
    for p in &root.problem.sdps {
        out.push_str(&sdp_line(p));
    }
    out.push_str("proof:\n");
    node_text(root, 1, &mut out);
    out
}

fn node_text(node: &ProofNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match &node.outcome {
        Outcome::Empty => writeln!(out, "{pad}{} is empty", node.problem).unwrap(),
        Outcome::Unresolved(why) => writeln!(out, "{pad}{} unresolved: {why}", node.problem).unwrap(),
        Outcome::Applied { witness, children } => {
            writeln!(out, "{pad}{} by {}: {witness}", node.problem, witness.kind()).unwrap();
            let known: BTreeSet<usize> = node.problem.sdps.iter().map(|p| p.id).collect();
            let mut shown = BTreeSet::new();
            for c in children {
                for p in &c.problem.sdps {
                    if !known.contains(&p.id) && shown.insert(p.id) {
                        writeln!(out, "{pad}  new ({}) {p}", p.id).unwrap();
                    }
                }
            }
            for c in children {
                node_text(c, depth + 1, out);
            }
        }
    }
}

fn labels(ids: &[usize]) -> Value {
    json!(ids)
}

fn edges(es: &[(usize, usize)]) -> Value {
    Value::Array(es.iter().map(|(a, b)| json!([a, b])).collect())
}

fn witness_json(w: &Witness) -> Value {
    let mut m = Map::new();
    m.insert("processor".into(), json!(w.kind().name()));
    match w {
        Witness::Graph { edges: es, sccs } => {
            m.insert("edges".into(), edges(es));
            m.insert("sccs".into(), json!(sccs));
        }
        Witness::Subterm { nu, removed } => {
            let nu: Map<String, Value> = nu.iter().map(|(f, i)| (f.to_string(), json!(i))).collect();
            m.insert("nu".into(), Value::Object(nu));
            m.insert("removed".into(), labels(removed));
        }
        Witness::IntMap { j, removed } => {
            let j: Map<String, Value> = j.iter().map(|(f, t)| (f.to_string(), json!(t.to_string()))).collect();
            m.insert("j".into(), Value::Object(j));
            m.insert("removed".into(), labels(removed));
        }
        Witness::TheoryArg { tau, fixed } => {
            let tau: Map<String, Value> = tau.iter().map(|(f, s)| (f.to_string(), json!(s))).collect();
            m.insert("tau".into(), Value::Object(tau));
            m.insert("fixed".into(), labels(fixed));
        }
        Witness::Split { sdp, atom, into } => {
            m.insert("sdp".into(), json!(sdp));
            m.insert("atom".into(), json!(atom.to_string()));
            m.insert("into".into(), labels(into));
        }
        Witness::Reach { edges: es, sources, removed } => {
            m.insert("edges".into(), edges(es));
            m.insert("sources".into(), labels(sources));
            m.insert("removed".into(), labels(removed));
        }
    }
    m.insert("text".into(), json!(w.to_string()));
    Value::Object(m)
}

fn node_json(node: &ProofNode) -> Value {
    let ids: Vec<usize> = node.problem.sdps.iter().map(|p| p.id).collect();
    let outcome = match &node.outcome {
        Outcome::Empty => json!({ "kind": "empty" }),
        Outcome::Unresolved(why) => json!({ "kind": "unresolved", "reason": why }),
        Outcome::Applied { witness, children } => json!({
            "kind": "applied",
            "witness": witness_json(witness),
            "children": children.iter().map(node_json).collect::<Vec<_>>(),
        }),
    };
    json!({
        "problem": { "flag": node.problem.flag.to_string(), "sdps": ids },
        "outcome": outcome,
    })
}

fn sdp_json(p: &Sdp) -> Value {
    use lcstrs_core::theory::Guarded;
    let lvars: Vec<&str> = p.lvars().iter().map(|v| v.name()).collect();
    json!({
        "id": p.id,
        "lhs": p.lhs().to_string(),
        "rhs": p.rhs().to_string(),
        "constraint": Guarded::constraint(p).to_string(),
        "lvars": lvars,
        "text": p.to_string(),
    })
}

/// The proof as a JSON document; every pair appearing anywhere is listed
/// once under `pairs`.
pub fn json(proof: &Proof) -> Value {
    let pairs: Vec<Value> = proof.root.as_ref().map(|r| r.all_sdps()).unwrap_or_default().iter().map(sdp_json).collect();
    json!({
        "schema": SCHEMA,
        "verdict": proof.verdict.to_string(),
        "goal": goal_name(proof.goal),
        "reason": proof.reason,
        "ordering": proof.ordering.as_ref().map(|o| o.to_string()),
        "trivial": is_trivial(proof),
        "pairs": pairs,
        "root": proof.root.as_ref().map(node_json),
    })
}

pub fn render(proof: &Proof, format: Format) -> String {
    match format {
        Format::Text => text(proof),
        Format::Json => {
            let body = serde_json::to_string_pretty(&json(proof)).expect("serializable");
            format!("{}\n{body}\n", proof.verdict)
        }
    }
}
