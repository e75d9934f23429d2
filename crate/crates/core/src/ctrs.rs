//! Deterministic oriented 3-CTRSs and their level-indexed rewrite relation.
//!
//! Conditional rewriting is undecidable in general, so every search here runs
//! under a [`Fuel`] budget and reports whether the budget cut it short. A
//! negative answer with `exhausted == false` is a proof that no step (or
//! reduction) exists; with `exhausted == true` it only means none was found.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{
    apply_subst, match_into, match_term, positions, replace_at, subterm_at, vars_of, FunSym,
    Position, Signature, Substitution, Term,
};

/// `lhs -> rhs <= s1 == t1, ..., sn == tn`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalRule {
    pub id: Arc<str>,
    pub lhs: Term,
    pub rhs: Term,
    pub conditions: Vec<(Term, Term)>,
}

impl ConditionalRule {
    pub fn new(id: &str, lhs: Term, rhs: Term, conditions: Vec<(Term, Term)>) -> Self {
        ConditionalRule {
            id: id.into(),
            lhs,
            rhs,
            conditions,
        }
    }

    pub fn unconditional(id: &str, lhs: Term, rhs: Term) -> Self {
        ConditionalRule::new(id, lhs, rhs, Vec::new())
    }

    pub fn is_conditional(&self) -> bool {
        !self.conditions.is_empty()
    }

    /// Variables that are bound once conditions `1..=i` have been solved:
    /// `Var(lhs, t1, ..., ti)`.
    pub fn bound_vars(&self, i: usize) -> Vec<Arc<str>> {
        vars_of(std::iter::once(&self.lhs).chain(self.conditions[..i].iter().map(|(_, t)| t)))
    }

    /// Violations of the DCTRS variable conditions.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.lhs.is_var() {
            out.push(Violation::VariableLhs {
                rule: self.id.to_string(),
            });
        }
        for i in 0..self.conditions.len() {
            let bound = self.bound_vars(i);
            let free: Vec<String> = vars_of([&self.conditions[i].0])
                .into_iter()
                .filter(|x| !bound.contains(x))
                .map(|x| x.to_string())
                .collect();
            if !free.is_empty() {
                out.push(Violation::Determinism {
                    rule: self.id.to_string(),
                    condition: i + 1,
                    vars: free,
                });
            }
        }
        let all = vars_of(
            std::iter::once(&self.lhs).chain(self.conditions.iter().flat_map(|(s, t)| [s, t])),
        );
        let extra: Vec<String> = vars_of([&self.rhs])
            .into_iter()
            .filter(|x| !all.contains(x))
            .map(|x| x.to_string())
            .collect();
        if !extra.is_empty() {
            out.push(Violation::ExtraRhsVariables {
                rule: self.id.to_string(),
                vars: extra,
            });
        }
        out
    }
}

impl fmt::Display for ConditionalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)?;
        for (i, (s, t)) in self.conditions.iter().enumerate() {
            f.write_str(if i == 0 { " | " } else { ", " })?;
            write!(f, "{s} == {t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    VariableLhs {
        rule: String,
    },
    ExtraRhsVariables {
        rule: String,
        vars: Vec<String>,
    },
    Determinism {
        rule: String,
        condition: usize,
        vars: Vec<String>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VariableLhs { rule } => {
                write!(f, "rule {rule}: left-hand side is a variable")
            }
            Violation::ExtraRhsVariables { rule, vars } => write!(
                f,
                "rule {rule}: right-hand side variables {} not bound by the left-hand side or conditions",
                vars.join(", ")
            ),
            Violation::Determinism {
                rule,
                condition,
                vars,
            } => write!(
                f,
                "rule {rule}, condition {condition}: variables {} not bound by the left-hand side or earlier conditions",
                vars.join(", ")
            ),
        }
    }
}

/// A validated deterministic oriented 3-CTRS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dctrs {
    signature: Signature,
    rules: Vec<ConditionalRule>,
}

impl Dctrs {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[ConditionalRule] {
        &self.rules
    }

    pub fn rule(&self, id: &str) -> Option<&ConditionalRule> {
        self.rules.iter().find(|r| &*r.id == id)
    }

    pub fn rule_index(&self, id: &str) -> Option<usize> {
        self.rules.iter().position(|r| &*r.id == id)
    }

    /// Adds symbols that occur in no rule, such as constructors only used in
    /// queries. U-symbols are rejected.
    pub fn with_symbols(mut self, symbols: impl IntoIterator<Item = FunSym>) -> Result<Self> {
        for f in symbols {
            if !f.is_original() {
                return Err(Error::Precondition(format!(
                    "{f} is not an original symbol"
                )));
            }
            if let Some(g) = self.signature.by_name(f.name()) {
                if g.arity() != f.arity() {
                    return Err(Error::Precondition(format!("{f} clashes with {g}")));
                }
                continue;
            }
            self.signature.insert(f);
        }
        Ok(self)
    }

    /// `R_c`
    pub fn conditional_rules(&self) -> impl Iterator<Item = &ConditionalRule> {
        self.rules.iter().filter(|r| r.is_conditional())
    }

    /// `R_u`
    pub fn unconditional_rules(&self) -> impl Iterator<Item = &ConditionalRule> {
        self.rules.iter().filter(|r| !r.is_conditional())
    }
}

/// Checks the DCTRS conditions on every rule, reporting all violations.
pub fn validate_dctrs(rules: Vec<ConditionalRule>) -> std::result::Result<Dctrs, Vec<Violation>> {
    let violations: Vec<Violation> = rules.iter().flat_map(|r| r.violations()).collect();
    if !violations.is_empty() {
        return Err(violations);
    }
    let mut signature = Signature::new();
    for r in &rules {
        signature.extend_from_term(&r.lhs);
        signature.extend_from_term(&r.rhs);
        for (s, t) in &r.conditions {
            signature.extend_from_term(s);
            signature.extend_from_term(t);
        }
    }
    Ok(Dctrs { signature, rules })
}

/// Search bounds.
///
/// `max_steps` caps the number of distinct terms a single search visits;
/// `max_term_size` stops expansion of larger terms; `max_level` caps the
/// nesting depth of condition evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fuel {
    pub max_level: usize,
    pub max_steps: usize,
    pub max_term_size: usize,
}

impl Fuel {
    pub fn new(max_level: usize, max_steps: usize, max_term_size: usize) -> Result<Self> {
        let fuel = Fuel {
            max_level,
            max_steps,
            max_term_size,
        };
        fuel.check()?;
        Ok(fuel)
    }

    pub fn check(&self) -> Result<()> {
        if self.max_level == 0 || self.max_steps == 0 || self.max_term_size == 0 {
            return Err(Error::InvalidFuel);
        }
        Ok(())
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel {
            max_level: 8,
            max_steps: 500,
            max_term_size: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// Step of `R_level`; `level` is the least level witnessing it.
    Conditional(usize),
    Mu,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ReductionStep {
    pub source: Term,
    pub target: Term,
    pub position: Position,
    pub rule: Arc<str>,
    #[serde(rename = "substitution")]
    pub sigma: Substitution,
    pub kind: StepKind,
}

impl ReductionStep {
    /// Rechecks `source|p = lhs σ` and `target = source[rhs σ]_p`.
    pub fn is_instance_of(&self, lhs: &Term, rhs: &Term) -> bool {
        let Ok(redex) = subterm_at(&self.source, &self.position) else {
            return false;
        };
        if *redex != apply_subst(lhs, &self.sigma) {
            return false;
        }
        replace_at(&self.source, &self.position, apply_subst(rhs, &self.sigma))
            .map(|t| t == self.target)
            .unwrap_or(false)
    }
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}  [{} at {}",
            self.source, self.target, self.rule, self.position
        )?;
        match self.kind {
            StepKind::Conditional(level) => write!(f, ", level {level}]"),
            StepKind::Mu => f.write_str(", mu]"),
            StepKind::Plain => f.write_str("]"),
        }
    }
}

/// A finite rewrite sequence `start -> ... -> end`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub start: Term,
    pub steps: Vec<ReductionStep>,
}

impl Reduction {
    pub fn empty(start: Term) -> Self {
        Reduction {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &Term {
        self.steps.last().map(|s| &s.target).unwrap_or(&self.start)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.target))
    }

    /// Consecutive steps connect and the first leaves `start`.
    pub fn is_connected(&self) -> bool {
        let mut cur = &self.start;
        for s in &self.steps {
            if &s.source != cur {
                return false;
            }
            cur = &s.target;
        }
        true
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.steps {
            write!(f, "\n  -> {}  [{} at {}]", s.target, s.rule, s.position)?;
        }
        Ok(())
    }
}

/// Steps found by a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSearch {
    pub steps: Vec<ReductionStep>,
    /// Some bound was hit; steps may be missing.
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachOutcome {
    pub reduction: Option<Reduction>,
    pub exhausted: bool,
}

pub fn conditional_step_at(
    s: &Term,
    rules: &Dctrs,
    p: &Position,
    rule_id: &str,
    fuel: Fuel,
) -> Result<StepSearch> {
    subterm_at(s, p)?;
    let ri = rules
        .rule_index(rule_id)
        .ok_or_else(|| Error::UnknownRule(rule_id.to_string()))?;
    Ok(Engine::new(rules, fuel).steps_by_level(s, Some((p, ri))))
}

/// Every `R`-step from `s`, ordered by position, then rule, then target.
pub fn all_conditional_steps(s: &Term, rules: &Dctrs, fuel: Fuel) -> StepSearch {
    Engine::new(rules, fuel).steps_by_level(s, None)
}

/// Breadth-first search for `s ->*_R t`.
pub fn reachable(s: &Term, t: &Term, rules: &Dctrs, fuel: Fuel) -> ReachOutcome {
    Engine::new(rules, fuel).shortest_reduction(s, t)
}

/// All extensions of `sigma` (a match of rule `rule_id`'s lhs) that satisfy
/// the first `upto` conditions under `->*_R`. The flag reports truncation.
pub fn solve_conditions(
    rules: &Dctrs,
    rule_id: &str,
    sigma: Substitution,
    upto: usize,
    fuel: Fuel,
) -> Result<(Vec<Substitution>, bool)> {
    let ri = rules
        .rule_index(rule_id)
        .ok_or_else(|| Error::UnknownRule(rule_id.to_string()))?;
    let n = rules.rules[ri].conditions.len();
    if upto > n {
        return Err(Error::ConditionIndex {
            rule: rule_id.to_string(),
            index: upto,
            len: n,
        });
    }
    let mut engine = Engine::new(rules, fuel);
    Ok(engine.solve(ri, 0, upto, sigma, fuel.max_level))
}

struct Successor {
    position: Position,
    rule: usize,
    sigma: Substitution,
    target: Term,
}

struct Successors {
    items: Vec<Successor>,
    incomplete: bool,
}

struct Reach {
    terms: Vec<Term>,
    incomplete: bool,
}

/// Memoizing evaluator for the level-indexed relations `->_{R_n}`.
///
/// `successors(t, n)` computes the `R_n`-steps from `t`: conditions of a rule
/// are discharged with `->*_{R_(n-1)}`. Level 0 is empty; it reports
/// incompleteness whenever some left-hand side matches, since a higher
/// level might fire there.
struct Engine<'r> {
    rules: &'r Dctrs,
    fuel: Fuel,
    step_memo: HashMap<(Term, usize), Rc<Successors>>,
    reach_memo: HashMap<(Term, usize), Rc<Reach>>,
}

impl<'r> Engine<'r> {
    fn new(rules: &'r Dctrs, fuel: Fuel) -> Self {
        Engine {
            rules,
            fuel,
            step_memo: HashMap::new(),
            reach_memo: HashMap::new(),
        }
    }

    fn successors(&mut self, t: &Term, level: usize) -> Rc<Successors> {
        if let Some(hit) = self.step_memo.get(&(t.clone(), level)) {
            return hit.clone();
        }
        let mut items = Vec::new();
        let mut incomplete = false;
        for p in positions(t) {
            for ri in 0..self.rules.rules.len() {
                self.redex_steps(t, &p, ri, level, &mut items, &mut incomplete);
            }
        }
        let out = Rc::new(Successors {
            items: dedup_successors(items),
            incomplete,
        });
        self.step_memo.insert((t.clone(), level), out.clone());
        out
    }

    fn redex_steps(
        &mut self,
        t: &Term,
        p: &Position,
        ri: usize,
        level: usize,
        out: &mut Vec<Successor>,
        incomplete: &mut bool,
    ) {
        let rules = self.rules;
        let rule = &rules.rules[ri];
        let redex = subterm_at(t, p).expect("position of t");
        let Some(sigma0) = match_term(&rule.lhs, redex) else {
            return;
        };
        if level == 0 {
            *incomplete = true;
            return;
        }
        let (sigmas, inc) = self.solve(ri, 0, rule.conditions.len(), sigma0, level - 1);
        *incomplete |= inc;
        for sigma in sigmas {
            let contractum = apply_subst(&rule.rhs, &sigma);
            let target = replace_at(t, p, contractum).expect("position of t");
            out.push(Successor {
                position: p.clone(),
                rule: ri,
                sigma,
                target,
            });
        }
    }

    /// Extends `sigma` over conditions `i..upto` using `->*_{R_level}`.
    fn solve(
        &mut self,
        ri: usize,
        i: usize,
        upto: usize,
        sigma: Substitution,
        level: usize,
    ) -> (Vec<Substitution>, bool) {
        if i == upto {
            return (vec![sigma], false);
        }
        let rules = self.rules;
        let (s, t) = &rules.rules[ri].conditions[i];
        let start = apply_subst(s, &sigma);
        let reach = self.reach(&start, level);
        let mut incomplete = reach.incomplete;
        let mut out: Vec<Substitution> = Vec::new();
        for u in &reach.terms {
            let mut extended = sigma.clone();
            if match_into(t, u, &mut extended) {
                let (more, inc) = self.solve(ri, i + 1, upto, extended, level);
                incomplete |= inc;
                for m in more {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            }
        }
        (out, incomplete)
    }

    fn reach(&mut self, s: &Term, level: usize) -> Rc<Reach> {
        if let Some(hit) = self.reach_memo.get(&(s.clone(), level)) {
            return hit.clone();
        }
        let mut seen: HashSet<Term> = HashSet::new();
        let mut terms = vec![s.clone()];
        let mut queue = VecDeque::from([s.clone()]);
        let mut incomplete = false;
        seen.insert(s.clone());
        'bfs: while let Some(x) = queue.pop_front() {
            if x.size() > self.fuel.max_term_size {
                incomplete = true;
                continue;
            }
            let succ = self.successors(&x, level);
            incomplete |= succ.incomplete;
            for item in &succ.items {
                if seen.contains(&item.target) {
                    continue;
                }
                if terms.len() >= self.fuel.max_steps {
                    incomplete = true;
                    break 'bfs;
                }
                seen.insert(item.target.clone());
                terms.push(item.target.clone());
                queue.push_back(item.target.clone());
            }
        }
        let out = Rc::new(Reach { terms, incomplete });
        self.reach_memo.insert((s.clone(), level), out.clone());
        out
    }

    /// Raises the level until the step set is complete or `max_level` is
    /// reached, tagging each step with the least level that produced it.
    fn steps_by_level(&mut self, s: &Term, only: Option<(&Position, usize)>) -> StepSearch {
        let mut found: Vec<(usize, ReductionStep)> = Vec::new();
        let mut keys: HashSet<(Term, Position, usize)> = HashSet::new();
        let mut exhausted = true;
        for level in 1..=self.fuel.max_level {
            let (items, incomplete) = match only {
                Some((p, ri)) => {
                    let mut items = Vec::new();
                    let mut incomplete = false;
                    self.redex_steps(s, p, ri, level, &mut items, &mut incomplete);
                    (dedup_successors(items), incomplete)
                }
                None => {
                    let succ = self.successors(s, level);
                    let items = succ
                        .items
                        .iter()
                        .map(|i| Successor {
                            position: i.position.clone(),
                            rule: i.rule,
                            sigma: i.sigma.clone(),
                            target: i.target.clone(),
                        })
                        .collect();
                    (items, succ.incomplete)
                }
            };
            for item in items {
                if keys.insert((item.target.clone(), item.position.clone(), item.rule)) {
                    found.push((item.rule, self.make_step(s, item, level)));
                }
            }
            if !incomplete {
                exhausted = false;
                break;
            }
        }
        found.sort_by(|(ra, a), (rb, b)| {
            (&a.position, ra, &a.target).cmp(&(&b.position, rb, &b.target))
        });
        StepSearch {
            steps: found.into_iter().map(|(_, s)| s).collect(),
            exhausted,
        }
    }

    fn make_step(&self, source: &Term, item: Successor, level: usize) -> ReductionStep {
        ReductionStep {
            source: source.clone(),
            target: item.target,
            position: item.position,
            rule: self.rules.rules[item.rule].id.clone(),
            sigma: item.sigma,
            kind: StepKind::Conditional(level),
        }
    }

    fn shortest_reduction(&mut self, s: &Term, t: &Term) -> ReachOutcome {
        if s == t {
            return ReachOutcome {
                reduction: Some(Reduction::empty(s.clone())),
                exhausted: false,
            };
        }
        let level = self.fuel.max_level;
        let mut parent: HashMap<Term, (Term, Position, usize)> = HashMap::new();
        let mut seen: HashSet<Term> = HashSet::from([s.clone()]);
        let mut queue = VecDeque::from([s.clone()]);
        let mut exhausted = false;
        let mut hit = false;
        'bfs: while let Some(x) = queue.pop_front() {
            if x.size() > self.fuel.max_term_size {
                exhausted = true;
                continue;
            }
            let succ = self.successors(&x, level);
            exhausted |= succ.incomplete;
            for item in &succ.items {
                if seen.contains(&item.target) {
                    continue;
                }
                if seen.len() >= self.fuel.max_steps {
                    exhausted = true;
                    break 'bfs;
                }
                seen.insert(item.target.clone());
                parent.insert(
                    item.target.clone(),
                    (x.clone(), item.position.clone(), item.rule),
                );
                if &item.target == t {
                    hit = true;
                    break 'bfs;
                }
                queue.push_back(item.target.clone());
            }
        }
        if !hit {
            return ReachOutcome {
                reduction: None,
                exhausted,
            };
        }
        let mut chain = Vec::new();
        let mut cur = t.clone();
        while let Some((prev, p, ri)) = parent.get(&cur).cloned() {
            chain.push((prev.clone(), p, ri, cur.clone()));
            cur = prev;
        }
        chain.reverse();
        let mut steps = Vec::with_capacity(chain.len());
        for (source, p, ri, target) in chain {
            let redone = self.steps_by_level(&source, Some((&p, ri)));
            let step = redone
                .steps
                .into_iter()
                .find(|st| st.target == target)
                .expect("step found by the search is reproducible");
            steps.push(step);
        }
        ReachOutcome {
            reduction: Some(Reduction {
                start: s.clone(),
                steps,
            }),
            exhausted: false,
        }
    }
}

fn dedup_successors(items: Vec<Successor>) -> Vec<Successor> {
    let mut seen: HashSet<(Term, Position, usize)> = HashSet::new();
    items
        .into_iter()
        .filter(|i| seen.insert((i.target.clone(), i.position.clone(), i.rule)))
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::term::tests::{c, f, v};

    pub fn s(a: Term) -> Term {
        f("s", vec![a])
    }
    pub fn less(a: Term, b: Term) -> Term {
        f("<", vec![a, b])
    }
    pub fn cons(a: Term, b: Term) -> Term {
        f(":", vec![a, b])
    }

    pub fn bubble_rules() -> Vec<ConditionalRule> {
        vec![
            ConditionalRule::unconditional("r1", less(v("x"), c("0")), c("false")),
            ConditionalRule::unconditional("r2", less(c("0"), s(v("y"))), c("true")),
            ConditionalRule::unconditional("r3", less(s(v("x")), s(v("y"))), less(v("x"), v("y"))),
            ConditionalRule::new(
                "r4",
                cons(v("x"), cons(v("y"), v("ys"))),
                cons(v("y"), cons(v("x"), v("ys"))),
                vec![(less(v("x"), v("y")), c("true"))],
            ),
        ]
    }

    pub fn bubble() -> Dctrs {
        validate_dctrs(bubble_rules())
            .unwrap()
            .with_symbols([FunSym::new("nil", 0)])
            .unwrap()
    }

    #[test]
    fn bubble_sort_is_a_dctrs() {
        let r = bubble();
        assert_eq!(r.conditional_rules().count(), 1);
        assert_eq!(r.unconditional_rules().count(), 3);
    }

    #[test]
    fn variable_lhs_and_free_rhs_variable() {
        let errs =
            validate_dctrs(vec![ConditionalRule::unconditional("r1", v("x"), v("y"))]).unwrap_err();
        assert_eq!(errs.len(), 2);
        assert!(matches!(errs[0], Violation::VariableLhs { .. }));
        assert!(matches!(errs[1], Violation::ExtraRhsVariables { .. }));
    }

    #[test]
    fn determinism_violation_names_condition() {
        let rule = ConditionalRule::new(
            "r1",
            f("f", vec![v("x")]),
            v("x"),
            vec![(f("g", vec![v("y")]), v("z"))],
        );
        let errs = validate_dctrs(vec![rule]).unwrap_err();
        assert_eq!(
            errs,
            vec![Violation::Determinism {
                rule: "r1".into(),
                condition: 1,
                vars: vec!["y".into()]
            }]
        );
    }

    #[test]
    fn swap_step_needs_level_two() {
        let r = bubble();
        let t = cons(c("0"), cons(s(c("0")), c("nil")));
        let found = conditional_step_at(&t, &r, &Position::root(), "r4", Fuel::default()).unwrap();
        assert!(!found.exhausted);
        assert_eq!(found.steps.len(), 1);
        let step = &found.steps[0];
        assert_eq!(step.target, cons(s(c("0")), cons(c("0"), c("nil"))));
        assert_eq!(step.kind, StepKind::Conditional(2));
        assert!(step.is_instance_of(&r.rules()[3].lhs, &r.rules()[3].rhs));
    }

    #[test]
    fn failing_condition_is_a_proof_of_absence() {
        let r = bubble();
        let t = cons(s(c("0")), cons(c("0"), c("nil")));
        let found = conditional_step_at(&t, &r, &Position::root(), "r4", Fuel::default()).unwrap();
        assert!(found.steps.is_empty());
        assert!(!found.exhausted);
    }

    #[test]
    fn level_one_cannot_fire_conditional_rules() {
        let r = bubble();
        let t = cons(c("0"), cons(s(c("0")), c("nil")));
        let fuel = Fuel::new(1, 500, 200).unwrap();
        let found = conditional_step_at(&t, &r, &Position::root(), "r4", fuel).unwrap();
        assert!(found.steps.is_empty());
        assert!(found.exhausted);
    }

    #[test]
    fn successor_enumeration() {
        let r = bubble();
        let steps = all_conditional_steps(&less(c("0"), s(c("0"))), &r, Fuel::default());
        assert_eq!(steps.steps.len(), 1);
        assert_eq!(steps.steps[0].target, c("true"));
        assert_eq!(steps.steps[0].kind, StepKind::Conditional(1));

        let nf = all_conditional_steps(&c("true"), &r, Fuel::default());
        assert!(nf.steps.is_empty() && !nf.exhausted);

        let t = cons(c("0"), cons(s(c("0")), c("nil")));
        let steps = all_conditional_steps(&t, &r, Fuel::default());
        assert_eq!(steps.steps.len(), 1);
        assert_eq!(steps.steps[0].position, Position::root());
        assert_eq!(&*steps.steps[0].rule, "r4");
    }

    #[test]
    fn reachability() {
        let r = bubble();
        let fuel = Fuel::default();
        let red = reachable(&less(c("0"), s(c("0"))), &c("true"), &r, fuel)
            .reduction
            .unwrap();
        assert_eq!(red.len(), 1);
        let t = less(c("0"), c("0"));
        assert!(reachable(&t, &t, &r, fuel).reduction.unwrap().is_empty());
        let miss = reachable(&c("true"), &c("false"), &r, fuel);
        assert!(miss.reduction.is_none() && !miss.exhausted);
    }

    #[test]
    fn extra_variables_bound_by_conditions() {
        // f(x) -> z <= g(x) == y, h(y) == z
        let rules = vec![
            ConditionalRule::new(
                "r1",
                f("f", vec![v("x")]),
                v("z"),
                vec![
                    (f("g", vec![v("x")]), v("y")),
                    (f("h", vec![v("y")]), v("z")),
                ],
            ),
            ConditionalRule::unconditional("r2", f("g", vec![v("x")]), s(v("x"))),
            ConditionalRule::unconditional("r3", f("h", vec![v("x")]), s(v("x"))),
        ];
        let r = validate_dctrs(rules).unwrap();
        let t = f("f", vec![c("0")]);
        let found = all_conditional_steps(&t, &r, Fuel::default());
        let targets: Vec<String> = found.steps.iter().map(|s| s.target.to_string()).collect();
        // y ranges over {g(0), s(0)}, z over the reducts of h(y)
        assert!(targets.contains(&"s(s(0))".to_string()));
        assert!(targets.contains(&"h(g(0))".to_string()));
        assert!(!found.exhausted);
        for st in &found.steps {
            assert!(st.is_instance_of(&r.rules()[0].lhs, &r.rules()[0].rhs));
        }
    }

    #[test]
    fn open_terms_do_not_capture_rule_variables() {
        // subject uses the rule's own variable names
        let r = bubble();
        let t = cons(v("y"), cons(v("x"), v("ys")));
        let found = all_conditional_steps(&t, &r, Fuel::default());
        assert!(found.steps.is_empty());
    }

    #[test]
    fn solve_conditions_prefix() {
        let r = bubble();
        let sigma =
            match_term(&r.rules()[3].lhs, &cons(c("0"), cons(s(c("0")), c("nil")))).unwrap();
        let (sols, inc) = solve_conditions(&r, "r4", sigma.clone(), 1, Fuel::default()).unwrap();
        assert_eq!(sols, vec![sigma.clone()]);
        assert!(!inc);
        let (sols, _) = solve_conditions(&r, "r4", sigma.clone(), 0, Fuel::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(solve_conditions(&r, "r4", sigma, 2, Fuel::default()).is_err());
    }

    #[test]
    fn zero_fuel_rejected() {
        assert!(Fuel::new(0, 1, 1).is_err());
        assert!(Fuel::new(1, 0, 1).is_err());
        assert!(Fuel::new(1, 1, 0).is_err());
    }
}
