//! Simulation of conditional steps by `U_CS(R)`-reductions, and the
//! constructive commutation of `▷_μ` over `->_μ`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::csrewrite::mu_steps;
use crate::ctrs::{Fuel, Reduction, ReductionStep};
use crate::error::{Error, Result};
use crate::term::{active_positions, mu_proper_subterms, replace_at, subterm_at, Position, Term};
use crate::unravel::Csrs;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SimulationOutcome {
    Found {
        reduction: Reduction,
    },
    /// The search hit its bounds first.
    Exhausted,
    /// Every reachable term was visited and the target was not among them.
    /// For a genuine `R`-step this contradicts simulation completeness.
    Alarm,
}

impl SimulationOutcome {
    pub fn reduction(&self) -> Option<&Reduction> {
        match self {
            SimulationOutcome::Found { reduction } => Some(reduction),
            _ => None,
        }
    }
}

/// Shortest non-empty `μ`-reduction from `step.source` to `step.target`.
pub fn check_simulation(
    step: &ReductionStep,
    csrs: &Csrs,
    fuel: Fuel,
) -> Result<SimulationOutcome> {
    mu_reduction(&step.source, &step.target, csrs, fuel)
}

/// Shortest non-empty `μ`-reduction from `source` to `target`, breadth first.
pub fn mu_reduction(
    source: &Term,
    target: &Term,
    csrs: &Csrs,
    fuel: Fuel,
) -> Result<SimulationOutcome> {
    let mut parent: HashMap<Term, ReductionStep> = HashMap::new();
    let mut queue = VecDeque::from([source.clone()]);
    let mut visited = 1usize;
    let mut exhausted = false;
    while let Some(x) = queue.pop_front() {
        if x.size() > fuel.max_term_size {
            exhausted = true;
            continue;
        }
        for st in mu_steps(&x, csrs)? {
            if &st.target == target {
                let mut steps = vec![st];
                let mut cur = x.clone();
                while let Some(prev) = parent.get(&cur) {
                    steps.push(prev.clone());
                    cur = prev.source.clone();
                }
                steps.reverse();
                return Ok(SimulationOutcome::Found {
                    reduction: Reduction {
                        start: source.clone(),
                        steps,
                    },
                });
            }
            if &st.target == source || parent.contains_key(&st.target) {
                continue;
            }
            if visited >= fuel.max_steps {
                exhausted = true;
                continue;
            }
            visited += 1;
            queue.push_back(st.target.clone());
            parent.insert(st.target.clone(), st);
        }
    }
    Ok(if exhausted {
        SimulationOutcome::Exhausted
    } else {
        SimulationOutcome::Alarm
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Commutation {
    /// `v = C[u]`
    pub v: Term,
    /// Active position of `t` in `s`.
    pub position: Position,
    /// The step `s ->_μ v`.
    pub step: ReductionStep,
}

/// Given `s ▷_μ t ->_μ u`, builds `v = C[u]` with `s ->_μ v ▷_μ u`.
pub fn check_commutation(s: &Term, t: &Term, u: &Term, csrs: &Csrs) -> Result<Commutation> {
    let position = active_positions(s, &csrs.mu)?
        .into_iter()
        .find(|p| !p.is_root() && subterm_at(s, p).map(|x| x == t).unwrap_or(false))
        .ok_or_else(|| Error::Precondition(format!("{s} has no active proper subterm {t}")))?;
    if !mu_steps(t, csrs)?.iter().any(|st| &st.target == u) {
        return Err(Error::Precondition(format!(
            "{t} does not mu-rewrite to {u}"
        )));
    }
    let v = replace_at(s, &position, u.clone())?;
    let step = mu_steps(s, csrs)?
        .into_iter()
        .find(|st| st.target == v && position.is_prefix_of(&st.position))
        .ok_or_else(|| Error::Alarm(format!("{s} does not mu-rewrite to {v}")))?;
    if !mu_proper_subterms(&v, &csrs.mu)?.contains(u) {
        return Err(Error::Alarm(format!("{u} is not an active subterm of {v}")));
    }
    Ok(Commutation { v, position, step })
}
