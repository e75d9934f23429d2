//! Bounded validation of the witness order
//! `≻ = (->_{U_CS(R)} ∪ ▷_μ)+ ∩ (original × original)`
//! against the four requirements of quasi-decreasingness.
//!
//! The relation is sampled on the closure of the seeds under `->_μ` and
//! `▷_μ`, truncated by fuel. Checks that run into truncated parts of the
//! sample are counted as incomplete, never as failures.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::checker::simulation::{check_simulation, mu_reduction, SimulationOutcome};
use crate::csrewrite::mu_steps;
use crate::ctrs::{all_conditional_steps, reachable, solve_conditions, Dctrs, Fuel, Reduction};
use crate::error::{Error, Result};
use crate::term::{
    apply_subst, is_original, match_term, mu_proper_subterms, proper_subterms, Term,
};
use crate::unravel::{unravel_cs, unravel_rule, Csrs, UNamer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObligationReport {
    pub number: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub incomplete: bool,
}

impl ObligationReport {
    fn new(number: u8, name: &'static str) -> Self {
        ObligationReport {
            number,
            name,
            passed: true,
            checked: 0,
            failures: Vec::new(),
            incomplete: false,
        }
    }

    fn fail(&mut self, msg: String) {
        self.passed = false;
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

/// `ℓσ ->+ U_{i+1}(s_{i+1}, ...)σ ▷_μ s_{i+1}σ`
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainInstance {
    pub rule: String,
    /// The condition `i + 1` whose left side is reached.
    pub condition: usize,
    pub lhs_instance: Term,
    pub reduction: Reduction,
    pub condition_instance: Term,
    /// Reductions `s_j σ ->* t_j σ` for `j ≤ i`.
    pub discharged: Vec<Reduction>,
}

#[derive(Debug, Clone)]
pub struct WitnessOrderReport {
    /// Terms of the sample; pairs index into this.
    pub nodes: Vec<Term>,
    /// Sampled pairs `(s, t)` with `s ≻ t`, both original.
    pub pairs: Vec<(usize, usize)>,
    pub obligations: Vec<ObligationReport>,
    /// A cycle `t ≻ ... ≻ t` when obligation 1 fails.
    pub cycle: Option<Vec<Term>>,
    pub chains: Vec<ChainInstance>,
    pub incomplete: bool,
}

impl WitnessOrderReport {
    pub fn passed(&self) -> bool {
        self.obligations.iter().all(|o| o.passed)
    }

    pub fn sampled_pairs(&self) -> impl Iterator<Item = (&Term, &Term)> {
        self.pairs
            .iter()
            .map(|&(a, b)| (&self.nodes[a], &self.nodes[b]))
    }

    pub fn obligation(&self, number: u8) -> &ObligationReport {
        &self.obligations[usize::from(number) - 1]
    }
}

/// The closure of the seeds under `->_μ` and `▷_μ`.
struct Sample {
    nodes: Vec<Term>,
    index: HashMap<Term, usize>,
    out: Vec<Vec<usize>>,
    expanded: Vec<bool>,
    truncated: bool,
}

impl Sample {
    fn build(seeds: &[Term], cs: &Csrs, fuel: Fuel) -> Result<Sample> {
        let budget = fuel.max_steps.saturating_mul(seeds.len().max(1));
        let mut sample = Sample {
            nodes: Vec::new(),
            index: HashMap::new(),
            out: Vec::new(),
            expanded: Vec::new(),
            truncated: false,
        };
        let mut queue = VecDeque::new();
        for s in seeds {
            if let Some(i) = sample.add(s.clone(), budget) {
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            let t = sample.nodes[i].clone();
            if t.size() > fuel.max_term_size {
                sample.truncated = true;
                continue;
            }
            let mut next: Vec<Term> = mu_steps(&t, cs)?.into_iter().map(|s| s.target).collect();
            next.extend(mu_proper_subterms(&t, &cs.mu)?);
            let mut complete = true;
            for u in next {
                let known = sample.index.get(&u).copied();
                let j = match known {
                    Some(j) => j,
                    None => match sample.add(u, budget) {
                        Some(j) => {
                            queue.push_back(j);
                            j
                        }
                        None => {
                            complete = false;
                            continue;
                        }
                    },
                };
                if !sample.out[i].contains(&j) {
                    sample.out[i].push(j);
                }
            }
            sample.expanded[i] = complete;
        }
        Ok(sample)
    }

    fn add(&mut self, t: Term, budget: usize) -> Option<usize> {
        if let Some(&i) = self.index.get(&t) {
            return Some(i);
        }
        if self.nodes.len() >= budget {
            self.truncated = true;
            return None;
        }
        let i = self.nodes.len();
        self.index.insert(t.clone(), i);
        self.nodes.push(t);
        self.out.push(Vec::new());
        self.expanded.push(false);
        Some(i)
    }

    /// Nodes reachable in one or more edges, and whether every visited node
    /// was fully expanded.
    fn reach(&self, from: usize) -> (HashSet<usize>, bool) {
        let mut seen = HashSet::new();
        let mut complete = true;
        let mut stack = vec![from];
        let mut visited_from = false;
        while let Some(x) = stack.pop() {
            if x == from && visited_from {
                continue;
            }
            visited_from |= x == from;
            complete &= self.expanded[x];
            for &y in &self.out[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        (seen, complete)
    }

    /// Shortest path `from ->+ from`, as terms.
    fn cycle_through(&self, from: usize) -> Option<Vec<Term>> {
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.out[x] {
                if y == from {
                    let mut path = vec![from, x];
                    let mut cur = x;
                    while cur != from {
                        cur = parent[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    // path now starts and ends at `from`
                    let mut terms: Vec<Term> =
                        path.iter().map(|&i| self.nodes[i].clone()).collect();
                    if x == from {
                        terms.truncate(2);
                    }
                    return Some(terms);
                }
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(y) {
                    e.insert(x);
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

/// Samples the witness order from `seeds` and checks the four obligations:
/// (1) acyclicity, (2) closure under `▷` on original terms, (3) every
/// sampled `R`-step lies in the order, (4) `ℓσ ≻ s_{i+1}σ` whenever the
/// first `i` conditions hold.
pub fn validate_witness_order(
    rules: &Dctrs,
    seeds: &[Term],
    fuel: Fuel,
) -> Result<WitnessOrderReport> {
    if let Some(bad) = seeds.iter().find(|t| !is_original(t)) {
        return Err(Error::NonOriginalSeed(bad.to_string()));
    }
    let cs = unravel_cs(rules);
    let sample = Sample::build(seeds, &cs, fuel)?;
    let originals: Vec<usize> = (0..sample.nodes.len())
        .filter(|&i| is_original(&sample.nodes[i]))
        .collect();

    let reaches: Vec<(usize, HashSet<usize>, bool)> = originals
        .par_iter()
        .map(|&a| {
            let (r, complete) = sample.reach(a);
            (a, r, complete)
        })
        .collect();
    let reach_of: HashMap<usize, (&HashSet<usize>, bool)> =
        reaches.iter().map(|(a, r, c)| (*a, (r, *c))).collect();

    let mut pairs = Vec::new();
    for (a, r, _) in &reaches {
        let mut targets: Vec<usize> = r
            .iter()
            .copied()
            .filter(|&b| is_original(&sample.nodes[b]))
            .collect();
        targets.sort_unstable();
        pairs.extend(targets.into_iter().map(|b| (*a, b)));
    }

    // (1) well-foundedness, as acyclicity of the sample
    let mut ob1 = ObligationReport::new(1, "well-founded (sampled relation is acyclic)");
    let mut cycle = None;
    for (a, r, _) in &reaches {
        ob1.checked += 1;
        if r.contains(a) {
            ob1.fail(format!("{} ≻+ {}", sample.nodes[*a], sample.nodes[*a]));
            if cycle.is_none() {
                cycle = sample.cycle_through(*a);
            }
        }
    }
    ob1.incomplete = sample.truncated;

    // (2) ≻ = (≻ ∪ ▷)+ on original terms
    let mut ob2 = ObligationReport::new(2, "closed under proper subterms");
    for (a, r, complete) in &reaches {
        let mut sources: Vec<usize> = vec![*a];
        sources.extend(r.iter().copied().filter(|&b| is_original(&sample.nodes[b])));
        for u in sources {
            for t in proper_subterms(&sample.nodes[u]) {
                ob2.checked += 1;
                let ok = sample.index.get(&t).is_some_and(|j| r.contains(j));
                if !ok {
                    if *complete {
                        ob2.fail(format!(
                            "{} ≻ {} ▷ {} but not {} ≻ {}",
                            sample.nodes[*a], sample.nodes[u], t, sample.nodes[*a], t
                        ));
                    } else {
                        ob2.incomplete = true;
                    }
                }
            }
        }
    }

    // (3) ->_R ⊆ ≻
    let ob3_rows: Vec<(usize, Vec<String>, bool)> = originals
        .par_iter()
        .filter(|&&a| sample.expanded[a])
        .map(|&a| {
            let source = &sample.nodes[a];
            let found = all_conditional_steps(source, rules, fuel);
            let mut failures = Vec::new();
            let mut incomplete = found.exhausted;
            let (r, complete) = reach_of[&a];
            for step in &found.steps {
                match check_simulation(step, &cs, fuel) {
                    Ok(SimulationOutcome::Found { .. }) => {}
                    Ok(SimulationOutcome::Exhausted) => incomplete = true,
                    Ok(SimulationOutcome::Alarm) => {
                        failures.push(format!("ALARM: R-step {step} has no U_CS(R) simulation"))
                    }
                    Err(e) => failures.push(e.to_string()),
                }
                let in_order = sample
                    .index
                    .get(&step.target)
                    .is_some_and(|j| r.contains(j));
                if !in_order {
                    if complete {
                        failures.push(format!("R-step {step} is not in the sampled order"));
                    } else {
                        incomplete = true;
                    }
                }
            }
            (found.steps.len(), failures, incomplete)
        })
        .collect();
    let mut ob3 = ObligationReport::new(3, "contains the conditional rewrite relation");
    for (n, failures, incomplete) in ob3_rows {
        ob3.checked += n;
        ob3.incomplete |= incomplete;
        for f in failures {
            ob3.fail(f);
        }
    }

    // (4) ℓσ ≻ s_{i+1}σ once conditions 1..=i hold
    let mut ob4 = ObligationReport::new(4, "decreasing into condition left-hand sides");
    let mut chains = Vec::new();
    let namer = UNamer::avoiding(rules.signature());
    for rule in rules.conditional_rules() {
        let unraveled = unravel_rule(rule, &namer)?;
        for &a in &originals {
            let lhs_instance = &sample.nodes[a];
            let Some(sigma0) = match_term(&rule.lhs, lhs_instance) else {
                continue;
            };
            for (i, u_rule) in unraveled.iter().enumerate().take(rule.conditions.len()) {
                let (sigmas, truncated) =
                    solve_conditions(rules, &rule.id, sigma0.clone(), i, fuel)?;
                ob4.incomplete |= truncated;
                for sigma in sigmas {
                    ob4.checked += 1;
                    let mut discharged = Vec::new();
                    for (s, t) in &rule.conditions[..i] {
                        let out = reachable(
                            &apply_subst(s, &sigma),
                            &apply_subst(t, &sigma),
                            rules,
                            fuel,
                        );
                        match out.reduction {
                            Some(red) => discharged.push(red),
                            None => ob4.incomplete = true,
                        }
                    }
                    let u_term = apply_subst(&u_rule.rhs, &sigma);
                    let condition_instance = apply_subst(&rule.conditions[i].0, &sigma);
                    match mu_reduction(lhs_instance, &u_term, &cs, fuel)? {
                        SimulationOutcome::Found { reduction } => {
                            if !mu_proper_subterms(&u_term, &cs.mu)?.contains(&condition_instance) {
                                ob4.fail(format!(
                                    "{condition_instance} is not an active subterm of {u_term}"
                                ));
                                continue;
                            }
                            let (r, complete) = reach_of[&a];
                            let in_order = sample
                                .index
                                .get(&condition_instance)
                                .is_some_and(|j| r.contains(j));
                            if !in_order {
                                if complete {
                                    ob4.fail(format!(
                                        "{lhs_instance} ≻ {condition_instance} missing from the sample"
                                    ));
                                } else {
                                    ob4.incomplete = true;
                                }
                            }
                            chains.push(ChainInstance {
                                rule: rule.id.to_string(),
                                condition: i + 1,
                                lhs_instance: lhs_instance.clone(),
                                reduction,
                                condition_instance,
                                discharged,
                            });
                        }
                        SimulationOutcome::Exhausted => ob4.incomplete = true,
                        SimulationOutcome::Alarm => ob4.fail(format!(
                            "no U_CS(R) reduction from {lhs_instance} to {u_term}"
                        )),
                    }
                }
            }
        }
    }

    let obligations = vec![ob1, ob2, ob3, ob4];
    let incomplete = sample.truncated || obligations.iter().any(|o| o.incomplete);
    Ok(WitnessOrderReport {
        nodes: sample.nodes,
        pairs,
        obligations,
        cycle,
        chains,
        incomplete,
    })
}
