//! `μ`-rewriting over a [`Csrs`], bounded exploration of reduction graphs,
//! loop detection, and bounded verdicts for `μ`-termination on original terms.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::ctrs::{Fuel, Reduction, ReductionStep, StepKind};
use crate::error::{Error, Result};
use crate::term::{active_positions, is_original, FunSym, Signature, Term};
use crate::unravel::{steps_at, Csrs};

/// All single `μ`-steps from `s`, ordered by active position then rule.
pub fn mu_steps(s: &Term, csrs: &Csrs) -> Result<Vec<ReductionStep>> {
    let mut out = Vec::new();
    for p in active_positions(s, &csrs.mu)? {
        steps_at(s, &p, &csrs.rules, StepKind::Mu, &mut out);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MuVerdict {
    /// Fully explored, acyclic; `bound` is the longest derivation length.
    TerminatesWithin {
        bound: usize,
    },
    /// A reduction whose last term already occurred earlier.
    LoopFound {
        witness: Reduction,
    },
    Unknown {
        exhausted: Fuel,
    },
}

impl MuVerdict {
    fn rank(&self) -> u8 {
        match self {
            MuVerdict::LoopFound { .. } => 2,
            MuVerdict::Unknown { .. } => 1,
            MuVerdict::TerminatesWithin { .. } => 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub step: ReductionStep,
}

/// The explored part of `->_μ` from a root term. Node 0 is the root.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionGraph {
    pub nodes: Vec<Term>,
    pub edges: Vec<GraphEdge>,
    /// Nodes whose successors were computed.
    pub expanded: Vec<bool>,
    #[serde(skip)]
    index: HashMap<Term, usize>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
}

impl ReductionGraph {
    fn new(root: Term) -> Self {
        ReductionGraph {
            index: HashMap::from([(root.clone(), 0)]),
            nodes: vec![root],
            edges: Vec::new(),
            expanded: vec![false],
            out: vec![Vec::new()],
        }
    }

    fn add_node(&mut self, t: Term) -> (usize, bool) {
        if let Some(&i) = self.index.get(&t) {
            return (i, false);
        }
        let i = self.nodes.len();
        self.index.insert(t.clone(), i);
        self.nodes.push(t);
        self.expanded.push(false);
        self.out.push(Vec::new());
        (i, true)
    }

    pub fn node_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = &GraphEdge> {
        self.out[node].iter().map(|&e| &self.edges[e])
    }

    /// A path from the root that closes a cycle, if the graph has one.
    pub fn find_loop(&self) -> Option<Reduction> {
        // iterative DFS; colour 1 = on stack, 2 = done
        let mut colour = vec![0u8; self.nodes.len()];
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        let mut path_edges: Vec<usize> = Vec::new();
        colour[0] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&e) = self.out[node].get(*next) {
                *next += 1;
                let to = self.edges[e].to;
                match colour[to] {
                    0 => {
                        colour[to] = 1;
                        path_edges.push(e);
                        stack.push((to, 0));
                    }
                    1 => {
                        path_edges.push(e);
                        return Some(Reduction {
                            start: self.nodes[0].clone(),
                            steps: path_edges
                                .iter()
                                .map(|&e| self.edges[e].step.clone())
                                .collect(),
                        });
                    }
                    _ => {}
                }
            } else {
                colour[node] = 2;
                stack.pop();
                path_edges.pop();
            }
        }
        None
    }

    /// Length of the longest path from the root. Requires an acyclic graph.
    pub fn longest_path(&self) -> usize {
        let mut memo: Vec<Option<usize>> = vec![None; self.nodes.len()];
        // post-order without recursion
        let mut stack = vec![(0usize, false)];
        while let Some((node, done)) = stack.pop() {
            if memo[node].is_some() {
                continue;
            }
            if done {
                let best = self.out[node]
                    .iter()
                    .map(|&e| 1 + memo[self.edges[e].to].unwrap_or(0))
                    .max()
                    .unwrap_or(0);
                memo[node] = Some(best);
            } else {
                stack.push((node, true));
                for &e in &self.out[node] {
                    let to = self.edges[e].to;
                    if memo[to].is_none() {
                        stack.push((to, false));
                    }
                }
            }
        }
        memo[0].unwrap_or(0)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph reduction {\n  node [shape=box];\n");
        for (i, t) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(&t.to_string()));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  n{} -> n{} [label=\"{} @ {}\"];",
                e.from,
                e.to,
                escape(&e.step.rule),
                e.step.position
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Debug, Clone, Serialize)]
pub struct Exploration {
    pub graph: ReductionGraph,
    pub verdict: MuVerdict,
}

/// Breadth-first expansion of `->_μ` from `s`, deduplicating terms globally.
pub fn explore(s: &Term, csrs: &Csrs, fuel: Fuel) -> Result<Exploration> {
    let mut graph = ReductionGraph::new(s.clone());
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    while let Some(node) = queue.pop_front() {
        let term = graph.nodes[node].clone();
        if term.size() > fuel.max_term_size {
            truncated = true;
            continue;
        }
        let steps = mu_steps(&term, csrs)?;
        graph.expanded[node] = true;
        for step in steps {
            let (to, fresh) = match graph.node_of(&step.target) {
                Some(i) => (i, false),
                None if graph.nodes.len() >= fuel.max_steps => {
                    truncated = true;
                    graph.expanded[node] = false;
                    continue;
                }
                None => graph.add_node(step.target.clone()),
            };
            if fresh {
                queue.push_back(to);
            }
            let e = graph.edges.len();
            graph.edges.push(GraphEdge {
                from: node,
                to,
                step,
            });
            graph.out[node].push(e);
        }
    }
    let verdict = if let Some(witness) = graph.find_loop() {
        MuVerdict::LoopFound { witness }
    } else if truncated {
        MuVerdict::Unknown { exhausted: fuel }
    } else {
        MuVerdict::TerminatesWithin {
            bound: graph.longest_path(),
        }
    };
    Ok(Exploration { graph, verdict })
}

/// Explores every seed and combines the verdicts: a loop from any seed wins,
/// then an inconclusive seed; otherwise the largest bound is reported.
pub fn mu_terminating_on_seeds(seeds: &[Term], csrs: &Csrs, fuel: Fuel) -> Result<MuVerdict> {
    if let Some(bad) = seeds.iter().find(|t| !is_original(t)) {
        return Err(Error::NonOriginalSeed(bad.to_string()));
    }
    let verdicts: Vec<MuVerdict> = seeds
        .par_iter()
        .map(|s| explore(s, csrs, fuel).map(|e| e.verdict))
        .collect::<Result<_>>()?;
    let mut best = MuVerdict::TerminatesWithin { bound: 0 };
    for v in verdicts {
        best = match (&best, &v) {
            (
                MuVerdict::TerminatesWithin { bound: a },
                MuVerdict::TerminatesWithin { bound: b },
            ) => MuVerdict::TerminatesWithin { bound: *a.max(b) },
            _ if v.rank() > best.rank() => v,
            _ => best,
        };
    }
    Ok(best)
}

/// Options for seed enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedOptions {
    pub max_size: usize,
    /// Number of distinct variables (`x1`, `x2`, ...) allowed as leaves,
    /// standing in for arbitrary open terms.
    pub variables: usize,
}

impl SeedOptions {
    pub fn ground(max_size: usize) -> Self {
        SeedOptions {
            max_size,
            variables: 0,
        }
    }
}

/// All ground terms over the original symbols of `sig` with at most
/// `max_size` nodes, ordered by size, then root symbol, then arguments.
///
/// This is a finite under-approximation of the set of original terms.
pub fn enumerate_original_terms(sig: &Signature, max_size: usize) -> Vec<Term> {
    enumerate_seeds(sig, SeedOptions::ground(max_size))
}

pub fn enumerate_seeds(sig: &Signature, opts: SeedOptions) -> Vec<Term> {
    let symbols: Vec<&FunSym> = sig.originals().collect();
    let leaves: Vec<Term> = (1..=opts.variables)
        .map(|i| Term::Var(Arc::from(format!("x{i}"))))
        .collect();
    // by_size[n] = terms with exactly n nodes
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); opts.max_size + 1];
    for n in 1..=opts.max_size {
        let mut level = Vec::new();
        if n == 1 {
            level.extend(leaves.iter().cloned());
        }
        for f in &symbols {
            if f.arity() == 0 {
                if n == 1 {
                    level.push(Term::constant((*f).clone()));
                }
                continue;
            }
            if n < 1 + f.arity() {
                continue;
            }
            for args in tuples(&by_size, f.arity(), n - 1) {
                level.push(Term::app((*f).clone(), args));
            }
        }
        by_size[n] = level;
    }
    by_size.into_iter().flatten().collect()
}

/// Argument tuples of length `k` with total size exactly `total`.
fn tuples(by_size: &[Vec<Term>], k: usize, total: usize) -> Vec<Vec<Term>> {
    if k == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(k - 1) {
        if first >= by_size.len() {
            break;
        }
        let rests = tuples(by_size, k - 1, total - first);
        if rests.is_empty() {
            continue;
        }
        for t in &by_size[first] {
            for rest in &rests {
                let mut args = Vec::with_capacity(k);
                args.push(t.clone());
                args.extend(rest.iter().cloned());
                out.push(args);
            }
        }
    }
    out
}
