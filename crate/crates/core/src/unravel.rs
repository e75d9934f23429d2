//! The unraveling `U(R)` of a DCTRS into an unconditional TRS, and its
//! context-sensitive refinement `U_CS(R)`, which only lets `U`-symbols be
//! rewritten in their first argument.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::ctrs::{ConditionalRule, Dctrs, ReductionStep, StepKind};
use crate::error::{Error, Result};
use crate::term::{
    apply_subst, match_term, positions, replace_at, subterm_at, vars_of, FunSym, Position,
    ReplacementMap, Signature, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    pub id: Arc<str>,
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    pub fn new(id: &str, lhs: Term, rhs: Term) -> Self {
        RewriteRule {
            id: id.into(),
            lhs,
            rhs,
        }
    }

    /// Non-variable lhs and `Var(rhs) ⊆ Var(lhs)`.
    pub fn is_well_formed(&self) -> bool {
        if self.lhs.is_var() {
            return false;
        }
        let lv = vars_of([&self.lhs]);
        vars_of([&self.rhs]).iter().all(|x| lv.contains(x))
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trs {
    pub signature: Signature,
    pub rules: Vec<RewriteRule>,
}

impl Trs {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        let mut signature = Signature::new();
        for r in &rules {
            signature.extend_from_term(&r.lhs);
            signature.extend_from_term(&r.rhs);
        }
        Trs { signature, rules }
    }

    /// Like [`Trs::new`], with extra symbols that may occur in no rule.
    pub fn with_signature(rules: Vec<RewriteRule>, extra: &Signature) -> Self {
        let mut trs = Trs::new(rules);
        for f in extra.iter() {
            trs.signature.insert(f.clone());
        }
        trs
    }

    /// Same rules (ignoring ids) over the same signature.
    pub fn same_rules(&self, other: &Trs) -> bool {
        self.signature == other.signature
            && self.rules.len() == other.rules.len()
            && self
                .rules
                .iter()
                .zip(&other.rules)
                .all(|(a, b)| a.lhs == b.lhs && a.rhs == b.rhs)
    }
}

/// A TRS with a replacement map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csrs {
    pub signature: Signature,
    pub rules: Vec<RewriteRule>,
    pub mu: ReplacementMap,
}

impl Csrs {
    /// Checks rule well-formedness and that `mu` covers the signature. Symbols
    /// listed in `mu` but absent from the rules stay in the signature.
    pub fn new(rules: Vec<RewriteRule>, mu: ReplacementMap) -> Result<Self> {
        if let Some(bad) = rules.iter().find(|r| !r.is_well_formed()) {
            return Err(Error::Precondition(format!(
                "rule {} ({bad}) has a variable lhs or unbound rhs variables",
                bad.id
            )));
        }
        let listed: Signature = mu.iter().map(|(f, _)| f.clone()).collect();
        let trs = Trs::with_signature(rules, &listed);
        for f in trs.signature.iter() {
            mu.get(f)?;
        }
        Ok(Csrs {
            signature: trs.signature,
            rules: trs.rules,
            mu,
        })
    }

    pub fn trs(&self) -> Trs {
        Trs {
            signature: self.signature.clone(),
            rules: self.rules.clone(),
        }
    }

    /// `μ(f) = {1..arity}` on original symbols and `{1}` on `U`-symbols.
    pub fn has_unraveling_mu(&self) -> bool {
        self.signature.iter().all(|f| match self.mu.get(f) {
            Ok(set) if f.is_original() => set.iter().copied().eq(1..=f.arity()),
            Ok(set) => set.len() == 1 && set.contains(&1),
            Err(_) => false,
        })
    }

    pub fn same_system(&self, other: &Csrs) -> bool {
        self.mu == other.mu && self.trs().same_rules(&other.trs())
    }
}

/// Assigns names to `U`-symbols: `U{index}_{rule}`, primed until it avoids
/// every reserved name.
#[derive(Debug, Clone, Default)]
pub struct UNamer {
    reserved: BTreeSet<String>,
}

impl UNamer {
    pub fn avoiding(sig: &Signature) -> Self {
        UNamer {
            reserved: sig.iter().map(|f| f.name().to_string()).collect(),
        }
    }

    pub fn name(&self, rule: &str, index: usize) -> String {
        let mut name = format!("U{index}_{rule}");
        while self.reserved.contains(&name) {
            name.push('\'');
        }
        name
    }
}

/// `EV(t_i) = Var(t_i) \ Var(lhs, t_1, ..., t_(i-1))`, in first-occurrence order.
pub fn evar_sequence(rule: &ConditionalRule, i: usize) -> Result<Vec<Arc<str>>> {
    if i == 0 || i > rule.conditions.len() {
        return Err(Error::ConditionIndex {
            rule: rule.id.to_string(),
            index: i,
            len: rule.conditions.len(),
        });
    }
    let bound = rule.bound_vars(i - 1);
    Ok(vars_of([&rule.conditions[i - 1].1])
        .into_iter()
        .filter(|x| !bound.contains(x))
        .collect())
}

/// The `n + 1` rules replacing an `n`-condition rule; an unconditional rule
/// comes back unchanged. Rule ids are `{id}.{k}` for `k = 1..=n+1`.
pub fn unravel_rule(rule: &ConditionalRule, namer: &UNamer) -> Result<Vec<RewriteRule>> {
    let violations = rule.violations();
    if !violations.is_empty() {
        return Err(Error::InvalidRules(violations));
    }
    let n = rule.conditions.len();
    if n == 0 {
        return Ok(vec![RewriteRule {
            id: rule.id.clone(),
            lhs: rule.lhs.clone(),
            rhs: rule.rhs.clone(),
        }]);
    }
    let lhs_vars: Vec<Term> = vars_of([&rule.lhs]).into_iter().map(Term::Var).collect();
    // threaded[i] = Var(lhs) ++ EV(t_1) ++ ... ++ EV(t_i)
    let mut threaded = vec![lhs_vars];
    for i in 1..=n {
        let mut next = threaded[i - 1].clone();
        next.extend(evar_sequence(rule, i)?.into_iter().map(Term::Var));
        threaded.push(next);
    }
    let u = |i: usize, first: &Term| -> Term {
        let mut args = vec![first.clone()];
        args.extend(threaded[i - 1].iter().cloned());
        let sym = FunSym::fresh(namer.name(&rule.id, i), args.len(), &rule.id, i);
        Term::app(sym, args)
    };
    let id = |k: usize| format!("{}.{k}", rule.id);
    let mut out = Vec::with_capacity(n + 1);
    out.push(RewriteRule::new(
        &id(1),
        rule.lhs.clone(),
        u(1, &rule.conditions[0].0),
    ));
    for i in 1..n {
        out.push(RewriteRule::new(
            &id(i + 1),
            u(i, &rule.conditions[i - 1].1),
            u(i + 1, &rule.conditions[i].0),
        ));
    }
    out.push(RewriteRule::new(
        &id(n + 1),
        u(n, &rule.conditions[n - 1].1),
        rule.rhs.clone(),
    ));
    debug_assert!(out.iter().all(RewriteRule::is_well_formed));
    Ok(out)
}

/// `U(R) = R_u ∪ ⋃ U(ρ)`, keeping the input rule order.
pub fn unravel(rules: &Dctrs) -> Trs {
    let namer = UNamer::avoiding(rules.signature());
    let mut out = Vec::new();
    for r in rules.rules() {
        out.extend(unravel_rule(r, &namer).expect("validated DCTRS"));
    }
    let trs = Trs::with_signature(out, rules.signature());
    assert!(
        trs.rules.iter().all(RewriteRule::is_well_formed),
        "unraveling produced an unbound rhs variable"
    );
    trs
}

/// `U(R)` with `μ` full on original symbols and `{1}` on `U`-symbols.
pub fn unravel_cs(rules: &Dctrs) -> Csrs {
    let trs = unravel(rules);
    let mut mu = ReplacementMap::new();
    for f in trs.signature.iter() {
        let active: Vec<usize> = if f.is_original() {
            (1..=f.arity()).collect()
        } else {
            vec![1]
        };
        mu.set(f.clone(), active).expect("indices within arity");
    }
    Csrs {
        signature: trs.signature,
        rules: trs.rules,
        mu,
    }
}

/// Unrestricted rewrite steps from `t`, ordered by position then rule.
pub fn plain_steps(t: &Term, rules: &[RewriteRule]) -> Vec<ReductionStep> {
    let mut out = Vec::new();
    for p in positions(t) {
        steps_at(t, &p, rules, StepKind::Plain, &mut out);
    }
    out
}

pub(crate) fn steps_at(
    t: &Term,
    p: &Position,
    rules: &[RewriteRule],
    kind: StepKind,
    out: &mut Vec<ReductionStep>,
) {
    let redex = subterm_at(t, p).expect("position of t");
    for r in rules {
        if let Some(sigma) = match_term(&r.lhs, redex) {
            let target = replace_at(t, p, apply_subst(&r.rhs, &sigma)).expect("position of t");
            out.push(ReductionStep {
                source: t.clone(),
                target,
                position: p.clone(),
                rule: r.id.clone(),
                sigma,
                kind,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctrs::tests::{bubble, cons, less, s};
    use crate::ctrs::validate_dctrs;
    use crate::term::tests::{c, f, v};

    pub fn two_conditions() -> ConditionalRule {
        ConditionalRule::new(
            "r1",
            f("f", vec![v("x")]),
            v("z"),
            vec![
                (f("g", vec![v("x")]), v("y")),
                (f("h", vec![v("y")]), v("z")),
            ],
        )
    }

    fn names(xs: Vec<Arc<str>>) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn extra_variable_sequences() {
        let r = two_conditions();
        assert_eq!(names(evar_sequence(&r, 1).unwrap()), ["y"]);
        assert_eq!(names(evar_sequence(&r, 2).unwrap()), ["z"]);
        assert!(evar_sequence(&r, 3).is_err());
        assert!(evar_sequence(&r, 0).is_err());
        let swap = &bubble().rules()[3].clone();
        assert!(evar_sequence(swap, 1).unwrap().is_empty());
    }

    #[test]
    fn swap_rule_unravels_to_two_rules() {
        let swap = bubble().rules()[3].clone();
        let out = unravel_rule(&swap, &UNamer::default()).unwrap();
        assert_eq!(out.len(), 2);
        let u = FunSym::fresh("U1_r4", 4, "r4", 1);
        let xs = vec![v("x"), v("y"), v("ys")];
        let mut a1 = vec![less(v("x"), v("y"))];
        a1.extend(xs.clone());
        let mut a2 = vec![c("true")];
        a2.extend(xs);
        assert_eq!(out[0].lhs, cons(v("x"), cons(v("y"), v("ys"))));
        assert_eq!(out[0].rhs, Term::app(u.clone(), a1));
        assert_eq!(out[1].lhs, Term::app(u, a2));
        assert_eq!(out[1].rhs, cons(v("y"), cons(v("x"), v("ys"))));
    }

    #[test]
    fn unconditional_rule_passes_through() {
        let r = bubble().rules()[1].clone();
        let out = unravel_rule(&r, &UNamer::default()).unwrap();
        assert_eq!(out, vec![RewriteRule::new("r2", r.lhs, r.rhs)]);
    }

    #[test]
    fn two_condition_schema() {
        let out = unravel_rule(&two_conditions(), &UNamer::default()).unwrap();
        let rendered: Vec<String> = out.iter().map(|r| r.to_string()).collect();
        assert_eq!(
            rendered,
            [
                "f(x) -> U1_r1(g(x), x)",
                "U1_r1(y, x) -> U2_r1(h(y), x, y)",
                "U2_r1(z, x, y) -> z",
            ]
        );
        assert_eq!(out[1].lhs.root().unwrap().arity(), 2);
        assert_eq!(out[2].lhs.root().unwrap().arity(), 3);
    }

    #[test]
    fn invalid_rule_is_rejected() {
        let bad = ConditionalRule::new(
            "r1",
            f("f", vec![v("x")]),
            v("x"),
            vec![(f("g", vec![v("y")]), v("z"))],
        );
        assert!(matches!(
            unravel_rule(&bad, &UNamer::default()),
            Err(Error::InvalidRules(_))
        ));
    }

    #[test]
    fn rule_counts() {
        assert_eq!(unravel(&bubble()).rules.len(), 5);
        let only_cond = validate_dctrs(vec![two_conditions()]).unwrap();
        let trs = unravel(&only_cond);
        assert_eq!(trs.rules.len(), 3);
        assert_eq!(trs.signature.iter().filter(|f| !f.is_original()).count(), 2);
        let uncond = validate_dctrs(bubble().rules()[..3].to_vec()).unwrap();
        assert_eq!(unravel(&uncond).rules.len(), 3);
    }

    #[test]
    fn bubble_replacement_map() {
        let cs = unravel_cs(&bubble());
        let mu_of = |name: &str| -> Vec<usize> {
            let f = cs.signature.by_name(name).unwrap();
            cs.mu.get(f).unwrap().iter().copied().collect()
        };
        assert_eq!(mu_of("<"), [1, 2]);
        assert_eq!(mu_of(":"), [1, 2]);
        assert_eq!(mu_of("s"), [1]);
        assert_eq!(mu_of("U1_r4"), [1]);
        for k in ["0", "true", "false", "nil"] {
            assert!(mu_of(k).is_empty());
        }
        assert!(cs.has_unraveling_mu());
    }

    #[test]
    fn two_condition_replacement_map() {
        let cs = unravel_cs(&validate_dctrs(vec![two_conditions()]).unwrap());
        for name in ["U1_r1", "U2_r1"] {
            let u = cs.signature.by_name(name).unwrap();
            assert_eq!(
                cs.mu.get(u).unwrap().iter().copied().collect::<Vec<_>>(),
                [1]
            );
        }
    }

    #[test]
    fn fresh_names_avoid_the_signature() {
        let rules = vec![ConditionalRule::new(
            "r1",
            f("f", vec![v("x")]),
            v("x"),
            vec![(v("x"), c("U1_r1"))],
        )];
        let trs = unravel(&validate_dctrs(rules).unwrap());
        let fresh: Vec<&str> = trs
            .signature
            .iter()
            .filter(|f| !f.is_original())
            .map(|f| f.name())
            .collect();
        assert_eq!(fresh, ["U1_r1'"]);
    }

    #[test]
    fn unconditional_unraveling_has_full_mu() {
        let uncond = validate_dctrs(bubble().rules()[..3].to_vec()).unwrap();
        let cs = unravel_cs(&uncond);
        assert_eq!(cs.mu, ReplacementMap::full(&cs.signature));
    }

    #[test]
    fn plain_rewriting() {
        let trs = unravel(&bubble());
        let t = s(less(c("0"), s(c("0"))));
        let steps = plain_steps(&t, &trs.rules);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].target, s(c("true")));
    }
}
