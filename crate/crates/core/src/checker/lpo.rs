//! Lexicographic path order and exhaustive precedence search.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::term::{FunSym, Term};
use crate::unravel::Trs;

/// Default bound on the signature size accepted by [`search_precedence`].
pub const DEFAULT_PRECEDENCE_CAP: usize = 10;

/// A strict total order on symbols, greatest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Precedence {
    order: Vec<FunSym>,
    #[serde(skip)]
    rank: HashMap<FunSym, usize>,
}

impl Precedence {
    /// Panics if a symbol is listed twice.
    pub fn new(order: Vec<FunSym>) -> Self {
        let rank: HashMap<FunSym, usize> = order
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        assert_eq!(rank.len(), order.len(), "duplicate symbol in precedence");
        Precedence { order, rank }
    }

    pub fn symbols(&self) -> &[FunSym] {
        &self.order
    }

    pub fn contains(&self, f: &FunSym) -> bool {
        self.rank.contains_key(f)
    }

    pub fn greater(&self, f: &FunSym, g: &FunSym) -> bool {
        match (self.rank.get(f), self.rank.get(g)) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }
}

impl std::fmt::Display for Precedence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<&str> = self.order.iter().map(|s| s.name()).collect();
        f.write_str(&names.join(" > "))
    }
}

/// `s >_lpo t` under `prec`, with left-to-right lexicographic status.
pub fn lpo_greater(s: &Term, t: &Term, prec: &Precedence) -> Result<bool> {
    for term in [s, t] {
        if let Some(f) = term.symbols().iter().find(|f| !prec.contains(f)) {
            return Err(Error::UnknownSymbol(f.name().to_string()));
        }
    }
    Ok(lpo_with(s, t, &|f, g| prec.greater(f, g)))
}

/// LPO over an arbitrary symbol relation. The result is monotone in `gt`:
/// enlarging the relation never removes pairs.
pub(crate) fn lpo_with(s: &Term, t: &Term, gt: &dyn Fn(&FunSym, &FunSym) -> bool) -> bool {
    let (f, ss) = match s {
        Term::Var(_) => return false,
        Term::App(f, ss) => (f, ss),
    };
    let (g, ts) = match t {
        Term::Var(x) => return s.contains_var(x),
        Term::App(g, ts) => (g, ts),
    };
    if ss.iter().any(|si| si == t || lpo_with(si, t, gt)) {
        return true;
    }
    if f == g {
        let lex = ss
            .iter()
            .zip(ts.iter())
            .find(|(a, b)| a != b)
            .is_some_and(|(a, b)| lpo_with(a, b, gt));
        lex && ts.iter().all(|tj| lpo_with(s, tj, gt))
    } else if gt(f, g) {
        ts.iter().all(|tj| lpo_with(s, tj, gt))
    } else {
        false
    }
}

/// Finds a precedence under which every rule satisfies `lhs >_lpo rhs`.
///
/// Candidates are enumerated greatest-symbol-first over the symbols sorted by
/// `(name, arity)`, i.e. in lexicographic permutation order, so the first
/// hit is reproducible. A partial assignment is pruned as soon as some rule
/// fails under the most permissive relation any completion could give.
pub fn search_precedence(trs: &Trs, cap: usize) -> Result<Option<Precedence>> {
    let mut symbols: Vec<FunSym> = trs.signature.iter().cloned().collect();
    if symbols.len() > cap {
        return Err(Error::SignatureTooLarge {
            size: symbols.len(),
            cap,
        });
    }
    symbols.sort_by(|a, b| (a.name(), a.arity()).cmp(&(b.name(), b.arity())));
    let rules: Vec<(&Term, &Term)> = trs.rules.iter().map(|r| (&r.lhs, &r.rhs)).collect();
    let mut search = Search {
        symbols: &symbols,
        rules: &rules,
        rank: vec![None; symbols.len()],
        placed: Vec::new(),
        index: symbols
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect(),
    };
    Ok(search
        .run()
        .map(|order| Precedence::new(order.into_iter().map(|i| symbols[i].clone()).collect())))
}

struct Search<'a> {
    symbols: &'a [FunSym],
    rules: &'a [(&'a Term, &'a Term)],
    rank: Vec<Option<usize>>,
    placed: Vec<usize>,
    index: HashMap<FunSym, usize>,
}

impl Search<'_> {
    /// Placed symbols sit above all unplaced ones; unplaced pairs are
    /// related both ways.
    fn optimistic(&self, f: &FunSym, g: &FunSym) -> bool {
        let (a, b) = (self.rank[self.index[f]], self.rank[self.index[g]]);
        match (a, b) {
            (Some(a), Some(b)) => a < b,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => f != g,
        }
    }

    fn feasible(&self) -> bool {
        let gt = |f: &FunSym, g: &FunSym| self.optimistic(f, g);
        self.rules.iter().all(|(l, r)| lpo_with(l, r, &gt))
    }

    fn run(&mut self) -> Option<Vec<usize>> {
        if !self.feasible() {
            return None;
        }
        if self.placed.len() == self.symbols.len() {
            return Some(self.placed.clone());
        }
        for i in 0..self.symbols.len() {
            if self.rank[i].is_some() {
                continue;
            }
            self.rank[i] = Some(self.placed.len());
            self.placed.push(i);
            if let Some(found) = self.run() {
                return Some(found);
            }
            self.placed.pop();
            self.rank[i] = None;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctrs::tests::{bubble, bubble_rules, cons, less, s};
    use crate::ctrs::validate_dctrs;
    use crate::term::tests::{c, f, sym, v};
    use crate::unravel::{unravel, RewriteRule};

    fn prec(names: &[(&str, usize)]) -> Precedence {
        Precedence::new(names.iter().map(|&(n, a)| sym(n, a)).collect())
    }

    #[test]
    fn lex_case() {
        let p = prec(&[("s", 1), ("<", 2)]);
        let lhs = less(s(v("x")), s(v("y")));
        let rhs = less(v("x"), v("y"));
        assert!(lpo_greater(&lhs, &rhs, &p).unwrap());
        let q = prec(&[("<", 2), ("s", 1)]);
        assert!(lpo_greater(&lhs, &rhs, &q).unwrap());
    }

    #[test]
    fn irreflexive_and_variables_minimal() {
        let p = prec(&[("<", 2), ("s", 1), ("0", 0)]);
        let t = less(s(v("x")), c("0"));
        assert!(!lpo_greater(&t, &t, &p).unwrap());
        assert!(!lpo_greater(&v("x"), &c("0"), &p).unwrap());
        assert!(lpo_greater(&s(v("x")), &v("x"), &p).unwrap());
        assert!(!lpo_greater(&s(v("x")), &v("y"), &p).unwrap());
    }

    #[test]
    fn unknown_symbol() {
        let p = prec(&[("s", 1)]);
        assert!(matches!(
            lpo_greater(&s(c("0")), &c("0"), &p),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn less_rules_are_oriented() {
        let r = validate_dctrs(bubble_rules()[..3].to_vec()).unwrap();
        let trs = unravel(&r);
        let p = search_precedence(&trs, DEFAULT_PRECEDENCE_CAP)
            .unwrap()
            .expect("orientable");
        for rule in &trs.rules {
            assert!(lpo_greater(&rule.lhs, &rule.rhs, &p).unwrap());
        }
        let lt = sym("<", 2);
        assert!(p.greater(&lt, &sym("true", 0)));
        assert!(p.greater(&lt, &sym("false", 0)));
    }

    #[test]
    fn bubble_unraveling_has_no_lpo_precedence() {
        let trs = unravel(&bubble());
        assert_eq!(
            search_precedence(&trs, DEFAULT_PRECEDENCE_CAP).unwrap(),
            None
        );
    }

    /// Brute force over all permutations, no pruning.
    fn brute_force(trs: &Trs) -> Option<Vec<String>> {
        fn perms(items: Vec<FunSym>) -> Vec<Vec<FunSym>> {
            if items.is_empty() {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.clone();
                let head = rest.remove(i);
                for mut tail in perms(rest) {
                    tail.insert(0, head.clone());
                    out.push(tail);
                }
            }
            out
        }
        let mut syms: Vec<FunSym> = trs.signature.iter().cloned().collect();
        syms.sort_by(|a, b| (a.name(), a.arity()).cmp(&(b.name(), b.arity())));
        perms(syms).into_iter().find_map(|order| {
            let p = Precedence::new(order.clone());
            trs.rules
                .iter()
                .all(|r| lpo_greater(&r.lhs, &r.rhs, &p).unwrap())
                .then(|| order.iter().map(|f| f.name().to_string()).collect())
        })
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        let systems = vec![
            unravel(&validate_dctrs(bubble_rules()[..3].to_vec()).unwrap()),
            unravel(&bubble()),
            Trs::new(vec![
                RewriteRule::new("r1", f("f", vec![v("x")]), f("g", vec![v("x"), v("x")])),
                RewriteRule::new("r2", f("g", vec![c("a"), v("x")]), f("f", vec![c("b")])),
            ]),
            Trs::new(vec![RewriteRule::new(
                "r1",
                cons(v("x"), v("y")),
                cons(v("y"), v("x")),
            )]),
        ];
        for trs in systems {
            let fast = search_precedence(&trs, DEFAULT_PRECEDENCE_CAP)
                .unwrap()
                .map(|p| p.symbols().iter().map(|f| f.name().to_string()).collect());
            assert_eq!(fast, brute_force(&trs));
        }
    }

    #[test]
    fn empty_and_oversized() {
        let empty = Trs::new(Vec::new());
        assert_eq!(
            search_precedence(&empty, DEFAULT_PRECEDENCE_CAP).unwrap(),
            Some(Precedence::new(Vec::new()))
        );
        assert!(matches!(
            search_precedence(&unravel(&bubble()), 3),
            Err(Error::SignatureTooLarge { size: 8, cap: 3 })
        ));
    }
}
