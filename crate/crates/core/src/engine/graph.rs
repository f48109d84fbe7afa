//! The reachability graph of the partial-evaluation relation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{check_expression, total_evaluation_witness, Witness};
use crate::error::{Error, Result};
use crate::monad::{Algebra, Limits};
use crate::value::Nested;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    /// Number of distinct nestings witnessing the edge.
    pub witnesses: usize,
}

/// Nodes are depth-1 expressions in canonical order; edges are sorted by
/// `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionGraph {
    nodes: Vec<Nested>,
    edges: Vec<Edge>,
    seed: usize,
    total_evaluation: Option<usize>,
}

impl ReductionGraph {
    /// Checks that nodes are sorted and distinct, that edges reference nodes,
    /// are sorted without repeats, and carry at least one witness.
    pub fn new(
        nodes: Vec<Nested>,
        edges: Vec<Edge>,
        seed: usize,
        total_evaluation: Option<usize>,
    ) -> Result<Self> {
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStructure(
                "nodes must be sorted and distinct".into(),
            ));
        }
        let n = nodes.len();
        if seed >= n || total_evaluation.is_some_and(|t| t >= n) {
            return Err(Error::IndexOutOfRange {
                index: seed.max(total_evaluation.unwrap_or(0)),
                max: n.saturating_sub(1),
            });
        }
        for e in &edges {
            if e.source >= n || e.target >= n {
                return Err(Error::IndexOutOfRange {
                    index: e.source.max(e.target),
                    max: n - 1,
                });
            }
            if e.witnesses == 0 {
                return Err(Error::InvalidStructure(format!(
                    "edge {} → {} has no witness",
                    e.source, e.target
                )));
            }
        }
        if edges
            .windows(2)
            .any(|w| (w[0].source, w[0].target) >= (w[1].source, w[1].target))
        {
            return Err(Error::InvalidStructure(
                "edges must be sorted and distinct".into(),
            ));
        }
        Ok(ReductionGraph {
            nodes,
            edges,
            seed,
            total_evaluation,
        })
    }

    pub fn nodes(&self) -> &[Nested] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Index of the expression the graph was grown from.
    pub fn seed(&self) -> usize {
        self.seed
    }

    /// Index of η(e(seed)), when it is a node.
    pub fn total_evaluation(&self) -> Option<usize> {
        self.total_evaluation
    }

    pub fn node_index(&self, x: &Nested) -> Option<usize> {
        self.nodes.binary_search(x).ok()
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.edge(source, target).is_some()
    }

    pub fn edge(&self, source: usize, target: usize) -> Option<&Edge> {
        self.edges
            .binary_search_by(|e| (e.source, e.target).cmp(&(source, target)))
            .ok()
            .map(|i| &self.edges[i])
    }

    pub fn successors(&self, source: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.edges.partition_point(|e| e.source < source);
        self.edges[start..]
            .iter()
            .take_while(move |e| e.source == source)
            .map(|e| e.target)
    }

    /// A copy with one edge deleted.
    pub fn without_edge(&self, source: usize, target: usize) -> Self {
        let mut g = self.clone();
        g.edges.retain(|e| (e.source, e.target) != (source, target));
        g
    }
}

/// Grows the graph of everything reachable from `p` by repeated partial
/// evaluation, breadth first.
pub fn reduction_graph(alg: &dyn Algebra, p: &Nested, limits: &Limits) -> Result<ReductionGraph> {
    check_expression(alg, p)?;
    let m = alg.monad();
    let mut seen: BTreeSet<Nested> = BTreeSet::from([p.clone()]);
    let mut queue = VecDeque::from([p.clone()]);
    let mut counts: BTreeMap<(Nested, Nested), usize> = BTreeMap::new();
    while let Some(s) = queue.pop_front() {
        for k in m.mu_fiber(s.value(), limits)? {
            let w = Witness::from_nesting(alg, Nested::new(2, k)?)?;
            *counts.entry((s.clone(), w.target.clone())).or_default() += 1;
            if seen.insert(w.target.clone()) {
                if seen.len() > limits.nodes {
                    return Err(Error::EnumerationLimitExceeded {
                        what: "reduction graph nodes",
                        size: seen.len(),
                        limit: limits.nodes,
                    });
                }
                queue.push_back(w.target);
            }
        }
    }
    let nodes: Vec<Nested> = seen.into_iter().collect();
    let index = |x: &Nested| nodes.binary_search(x).expect("every target is a node");
    let edges = counts
        .iter()
        .map(|((s, t), &c)| Edge {
            source: index(s),
            target: index(t),
            witnesses: c,
        })
        .collect();
    let total = total_evaluation_witness(alg, p)?.target;
    let total_evaluation = nodes.binary_search(&total).ok();
    ReductionGraph::new(nodes.clone(), edges, index(p), total_evaluation)
}

/// Relation-level properties of a reduction graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArsReport {
    /// Every node has a self-loop.
    pub reflexive: bool,
    /// Every fork `t ← s → u` has a common successor.
    pub confluent: bool,
    /// Every fork is joined at the total-evaluation node.
    pub joined_by_total_evaluation: bool,
    /// `s → t → u` implies `s → u`.
    pub transitive: bool,
    /// A few offending node indices per failed property, for diagnostics.
    pub violations: Vec<String>,
}

impl ArsReport {
    pub fn all_hold(&self) -> bool {
        self.reflexive && self.confluent && self.transitive
    }
}

const MAX_VIOLATIONS: usize = 10;

pub fn check_ars_properties(g: &ReductionGraph) -> ArsReport {
    let n = g.nodes().len();
    let succ: Vec<BTreeSet<usize>> = (0..n).map(|s| g.successors(s).collect()).collect();
    let mut violations = Vec::new();
    let mut note = |msg: String| {
        if violations.len() < MAX_VIOLATIONS {
            violations.push(msg);
        }
    };

    let mut reflexive = true;
    for (s, out) in succ.iter().enumerate() {
        if !out.contains(&s) {
            reflexive = false;
            note(format!("no self-loop at node {s}"));
        }
    }

    let mut transitive = true;
    for (s, out) in succ.iter().enumerate() {
        for &t in out {
            for &u in &succ[t] {
                if !out.contains(&u) {
                    transitive = false;
                    note(format!("{s} → {t} → {u} but no edge {s} → {u}"));
                }
            }
        }
    }

    let z = g.total_evaluation();
    let mut confluent = true;
    let mut by_total = true;
    for (s, out) in succ.iter().enumerate() {
        let out: Vec<usize> = out.iter().copied().collect();
        for (i, &t) in out.iter().enumerate() {
            for &u in &out[i..] {
                let at_total = z.is_some_and(|z| succ[t].contains(&z) && succ[u].contains(&z));
                if at_total {
                    continue;
                }
                by_total = false;
                if succ[t].intersection(&succ[u]).next().is_none() {
                    confluent = false;
                    note(format!("fork {t} ← {s} → {u} has no common successor"));
                }
            }
        }
    }

    ArsReport {
        reflexive,
        confluent,
        joined_by_total_evaluation: by_total,
        transitive,
        violations,
    }
}
