//! Graph approximation, SCC decomposition and reachability.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{build, Term, Var};
use crate::sdp::{is_public, DpProblem, Flag, Sdp};
use crate::solver::{Solver, SolverError};
use crate::theory::{is_theory_term, is_theory_term_any, Guarded};
use crate::trs::Lcstrs;

use super::{Application, Witness};

/// The Cap-style constraint under which `u` may reduce to an instance of
/// `v`. `l0` is the `L` of the pair `u` comes from.
pub fn zeta(u: &Term, v: &Term, l0: &BTreeSet<Var>, system: &Lcstrs) -> Term {
    if let Some(f) = u.head_symbol() {
        let n = u.arg_count();
        let has_rule = system.rules.iter().any(|r| r.head() == Some(f) && r.lhs().arg_count() <= n);
        if !has_rule {
            if let Some(g) = v.head_symbol() {
                if g == f && v.arg_count() == n {
                    let parts = u.args().into_iter().zip(v.args()).map(|(a, b)| zeta(a, b, l0, system));
                    return build::and_all(parts);
                }
                if g != f && (!f.is_theory() || !g.is_value()) {
                    return build::ff();
                }
            }
        }
    }
    if u.ty().is_base() && is_theory_term(u, l0) && is_theory_term_any(v) {
        return build::eq(u.clone(), v.clone());
    }
    build::tt()
}

/// Vertices are the positions of `P.sdps`; `θ` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphApprox {
    pub ids: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl GraphApprox {
    /// Edges as pairs of SDP labels.
    pub fn labelled_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(a, b)| (self.ids[a], self.ids[b])).collect()
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.ids.len()];
        for &(a, b) in &self.edges {
            out[a].push(b);
        }
        out
    }

    /// Strongly connected components with at least one internal edge,
    /// ordered by their smallest vertex.
    pub fn nontrivial_sccs(&self) -> Vec<Vec<usize>> {
        let mut sccs: Vec<Vec<usize>> = tarjan(&self.successors())
            .into_iter()
            .filter(|c| c.len() > 1 || self.edges.contains(&(c[0], c[0])))
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        sccs.sort();
        sccs
    }

    /// Vertices reachable from `sources` (sources included).
    pub fn reachable_from(&self, sources: &[usize]) -> BTreeSet<usize> {
        let succ = self.successors();
        let mut seen: BTreeSet<usize> = sources.iter().copied().collect();
        let mut stack: Vec<usize> = sources.to_vec();
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// The formula whose satisfiability decides the edge `p0 → p1`, split into
/// the guarded constraints and the unguarded `ζ` part.
pub fn edge_query(p0: &Sdp, p1: &Sdp, system: &Lcstrs) -> (Term, Term) {
    let a = p0.renamed("~0");
    let b = p1.renamed("~1");
    let phi = build::and(Guarded::constraint(&a).clone(), Guarded::constraint(&b).clone());
    (phi, zeta(a.rhs(), b.lhs(), a.lvars(), system))
}

/// Whether the edge `p0 → p1` must be present. Unknown keeps the edge.
pub fn edge_possible(p0: &Sdp, p1: &Sdp, system: &Lcstrs, solver: &mut Solver) -> Result<bool, SolverError> {
    let (phi, z) = edge_query(p0, p1, system);
    if build::is_false(&z) {
        return Ok(false);
    }
    Ok(solver.check_sat_with(&phi, &z)?.maybe_sat())
}

pub fn build_graph(problem: &DpProblem, system: &Lcstrs, solver: &mut Solver) -> Result<GraphApprox, SolverError> {
    let mut edges = BTreeSet::new();
    for (i, p0) in problem.sdps.iter().enumerate() {
        for (j, p1) in problem.sdps.iter().enumerate() {
            if edge_possible(p0, p1, system, solver)? {
                edges.insert((i, j));
            }
        }
    }
    Ok(GraphApprox { ids: problem.ids(), edges })
}

/// Tarjan's algorithm; components in reverse topological order.
pub fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        succ: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in &s.succ[v] {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("v is on the stack");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }
    let n = succ.len();
    let mut s = State {
        succ,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// One `an` problem per non-trivial SCC. `None` when that would give back
/// the input.
pub fn graph_processor(problem: &DpProblem, graph: &GraphApprox) -> Option<Application> {
    let sccs = graph.nontrivial_sccs();
    if sccs.len() == 1 && sccs[0].len() == problem.len() {
        return None;
    }
    let children: Vec<DpProblem> = sccs
        .iter()
        .map(|c| DpProblem::new(c.iter().map(|&i| problem.sdps[i].clone()).collect(), Flag::An))
        .collect();
    let witness = Witness::Graph {
        edges: graph.labelled_edges(),
        sccs: sccs.iter().map(|c| c.iter().map(|&i| graph.ids[i]).collect()).collect(),
    };
    Some(Application { witness, children })
}

/// Keeps the pairs reachable from a public pair. Only for `pu` problems.
pub fn reachability(problem: &DpProblem, graph: &GraphApprox, system: &Lcstrs) -> Option<Application> {
    if problem.flag != Flag::Pu {
        return None;
    }
    let sources: Vec<usize> =
        (0..problem.len()).filter(|&i| is_public(&problem.sdps[i], &system.hidden)).collect();
    let keep = graph.reachable_from(&sources);
    if keep.len() == problem.len() {
        return None;
    }
    let removed = (0..problem.len()).filter(|i| !keep.contains(i)).map(|i| problem.sdps[i].id).collect();
    let child = DpProblem::new(keep.iter().map(|&i| problem.sdps[i].clone()).collect(), Flag::Pu);
    let witness = Witness::Reach {
        edges: graph.labelled_edges(),
        sources: sources.iter().map(|&i| problem.sdps[i].id).collect(),
        removed,
    };
    Some(Application { witness, children: vec![child] })
}

/// Adjacency by label, for renderers.
pub fn adjacency(edges: &[(usize, usize)]) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        out.entry(a).or_default().push(b);
    }
    out
}
