#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unravel_core::ctrs::{validate_dctrs, ConditionalRule, Dctrs};
use unravel_core::term::{FunSym, ReplacementMap, Term};
use unravel_core::unravel::RewriteRule;

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub symbols: Vec<FunSym>,
}

impl Gen {
    /// Up to `max_symbols` symbols of arity at most 3, at least one constant.
    pub fn new(seed: u64, max_symbols: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=max_symbols);
        let mut symbols: Vec<FunSym> = (0..n)
            .map(|i| FunSym::new(format!("f{i}"), rng.gen_range(0..=3)))
            .collect();
        if !symbols.iter().any(|f| f.arity() == 0) {
            let last = symbols.len() - 1;
            symbols[last] = FunSym::new(format!("f{last}"), 0);
        }
        Gen { rng, symbols }
    }

    pub fn constant(&mut self) -> Term {
        let cs: Vec<&FunSym> = self.symbols.iter().filter(|f| f.arity() == 0).collect();
        Term::constant(cs[self.rng.gen_range(0..cs.len())].clone())
    }

    pub fn term(&mut self, depth: usize, vars: &[&str]) -> Term {
        if depth == 0 || self.rng.gen_bool(0.25) {
            if !vars.is_empty() && self.rng.gen_bool(0.5) {
                return Term::var(vars[self.rng.gen_range(0..vars.len())]);
            }
            return self.constant();
        }
        let f = self.symbols[self.rng.gen_range(0..self.symbols.len())].clone();
        let args = (0..f.arity()).map(|_| self.term(depth - 1, vars)).collect();
        Term::app(f, args)
    }

    pub fn non_var(&mut self, depth: usize, vars: &[&str]) -> Term {
        loop {
            let t = self.term(depth, vars);
            if !t.is_var() {
                return t;
            }
        }
    }

    pub fn context_hole(&mut self, depth: usize, hole: Term) -> Term {
        let unary_or_more: Vec<FunSym> = self
            .symbols
            .iter()
            .filter(|f| f.arity() > 0)
            .cloned()
            .collect();
        if unary_or_more.is_empty() || depth == 0 {
            return hole;
        }
        let f = unary_or_more[self.rng.gen_range(0..unary_or_more.len())].clone();
        let at = self.rng.gen_range(0..f.arity());
        let args = (0..f.arity())
            .map(|i| {
                if i == at {
                    self.context_hole(depth - 1, hole.clone())
                } else {
                    self.term(1, &[])
                }
            })
            .collect();
        Term::app(f, args)
    }

    pub fn mu(&mut self) -> ReplacementMap {
        let mut mu = ReplacementMap::new();
        for f in self.symbols.clone() {
            let active: Vec<usize> = (1..=f.arity()).filter(|_| self.rng.gen_bool(0.6)).collect();
            mu.set(f, active).unwrap();
        }
        mu
    }

    pub fn trs(&mut self, n: usize) -> Vec<RewriteRule> {
        (0..n)
            .map(|k| {
                let lhs = self.non_var(2, &["x", "y"]);
                let bound: Vec<String> = var_names(&lhs);
                let refs: Vec<&str> = bound.iter().map(|s| s.as_str()).collect();
                let rhs = self.term(2, &refs);
                RewriteRule::new(&format!("r{}", k + 1), lhs, rhs)
            })
            .collect()
    }

    /// A random DCTRS: every condition only uses variables bound by the
    /// lhs and earlier right-hand sides of conditions.
    pub fn dctrs(&mut self, max_rules: usize, max_conditions: usize) -> Dctrs {
        let n = self.rng.gen_range(1..=max_rules);
        let mut rules = Vec::new();
        for k in 0..n {
            let lhs = self.non_var(2, &["x", "y"]);
            let mut bound: Vec<String> = var_names(&lhs);
            let mut conditions = Vec::new();
            for i in 0..self.rng.gen_range(0..=max_conditions) {
                let refs: Vec<&str> = bound.iter().map(|s| s.as_str()).collect();
                let s = self.term(2, &refs);
                let fresh = [format!("u{i}"), format!("w{i}")];
                let mut t_vars = refs.clone();
                t_vars.extend(fresh.iter().map(|s| s.as_str()));
                let t = self.term(2, &t_vars);
                for v in var_names(&t) {
                    if !bound.contains(&v) {
                        bound.push(v);
                    }
                }
                conditions.push((s, t));
            }
            let refs: Vec<&str> = bound.iter().map(|s| s.as_str()).collect();
            let rhs = self.term(2, &refs);
            rules.push(ConditionalRule::new(
                &format!("r{}", k + 1),
                lhs,
                rhs,
                conditions,
            ));
        }
        validate_dctrs(rules)
            .expect("generated rules satisfy the DCTRS conditions")
            .with_symbols(self.symbols.clone())
            .unwrap()
    }
}

pub fn var_names(t: &Term) -> Vec<String> {
    fn go(t: &Term, out: &mut Vec<String>) {
        match t {
            Term::Var(x) => {
                if !out.iter().any(|y| **y == **x) {
                    out.push(x.to_string());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

/// Naive syntactic matching, written independently of the library.
pub fn naive_match(pattern: &Term, subject: &Term, sigma: &mut Vec<(String, Term)>) -> bool {
    match (pattern, subject) {
        (Term::Var(x), _) => match sigma.iter().find(|(y, _)| **y == **x) {
            Some((_, t)) => t == subject,
            None => {
                sigma.push((x.to_string(), subject.clone()));
                true
            }
        },
        (Term::App(f, ps), Term::App(g, ss)) => {
            f == g
                && ps
                    .iter()
                    .zip(ss.iter())
                    .all(|(p, s)| naive_match(p, s, sigma))
        }
        _ => false,
    }
}

pub fn naive_apply(t: &Term, sigma: &[(String, Term)]) -> Term {
    match t {
        Term::Var(x) => sigma
            .iter()
            .find(|(y, _)| **y == **x)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::app(
            f.clone(),
            args.iter().map(|a| naive_apply(a, sigma)).collect(),
        ),
    }
}

/// Every `(position, target)` of a one-step rewrite with `rules`, visiting
/// only arguments allowed by `active` (all of them when `None`).
pub fn naive_steps(
    t: &Term,
    rules: &[RewriteRule],
    active: Option<&ReplacementMap>,
) -> BTreeSet<(Vec<usize>, String)> {
    fn go(
        t: &Term,
        rules: &[RewriteRule],
        active: Option<&ReplacementMap>,
        path: &mut Vec<usize>,
        out: &mut BTreeSet<(Vec<usize>, String)>,
        wrap: &dyn Fn(Term) -> Term,
    ) {
        for r in rules {
            let mut sigma = Vec::new();
            if naive_match(&r.lhs, t, &mut sigma) {
                out.insert((path.clone(), wrap(naive_apply(&r.rhs, &sigma)).to_string()));
            }
        }
        if let Term::App(f, args) = t {
            for i in 0..args.len() {
                if let Some(mu) = active {
                    if !mu.get(f).unwrap().contains(&(i + 1)) {
                        continue;
                    }
                }
                path.push(i + 1);
                let rebuild = |u: Term| {
                    let mut new_args: Vec<Term> = args.to_vec();
                    new_args[i] = u;
                    wrap(Term::app(f.clone(), new_args))
                };
                go(&args[i], rules, active, path, out, &rebuild);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, rules, active, &mut Vec::new(), &mut out, &|u| u);
    out
}
