//! First-order terms over a signature, positions, substitutions and matching,
//! plus the replacement-map aware notions of active positions and
//! `μ`-subterms.
//!
//! Terms are immutable and cheap to clone: argument lists sit behind an
//! [`Arc`], so sharing a subterm never copies it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Where a function symbol comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Original,
    /// Fresh symbol introduced by unraveling condition `index` (1-based) of `rule`.
    USymbol {
        rule: Arc<str>,
        index: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunSym {
    name: Arc<str>,
    arity: usize,
    origin: Origin,
}

impl FunSym {
    pub fn new(name: impl Into<Arc<str>>, arity: usize) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "function symbols need a name");
        FunSym {
            name,
            arity,
            origin: Origin::Original,
        }
    }

    pub fn fresh(name: impl Into<Arc<str>>, arity: usize, rule: &str, index: usize) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "function symbols need a name");
        assert!(index >= 1, "condition indices start at 1");
        FunSym {
            name,
            arity,
            origin: Origin::USymbol {
                rule: rule.into(),
                index,
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn is_original(&self) -> bool {
        self.origin == Origin::Original
    }
}

impl fmt::Display for FunSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl Serialize for FunSym {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

/// A set of function symbols, ordered by `(name, arity, origin)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature(BTreeSet<FunSym>);

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn insert(&mut self, f: FunSym) -> bool {
        self.0.insert(f)
    }

    pub fn contains(&self, f: &FunSym) -> bool {
        self.0.contains(f)
    }

    pub fn by_name(&self, name: &str) -> Option<&FunSym> {
        self.0.iter().find(|f| f.name() == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FunSym> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn originals(&self) -> impl Iterator<Item = &FunSym> {
        self.0.iter().filter(|f| f.is_original())
    }

    /// Adds every symbol occurring in `t`.
    pub fn extend_from_term(&mut self, t: &Term) {
        if let Term::App(f, args) = t {
            if !self.0.contains(f) {
                self.0.insert(f.clone());
            }
            for a in args.iter() {
                self.extend_from_term(a);
            }
        }
    }
}

impl FromIterator<FunSym> for Signature {
    fn from_iter<I: IntoIterator<Item = FunSym>>(iter: I) -> Self {
        Signature(iter.into_iter().collect())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Arc<str>),
    App(FunSym, Arc<[Term]>),
}

impl Term {
    pub fn var(name: impl Into<Arc<str>>) -> Term {
        Term::Var(name.into())
    }

    /// Builds `f(args)`. Panics if the argument count differs from the arity.
    pub fn app(f: FunSym, args: Vec<Term>) -> Term {
        assert_eq!(
            f.arity(),
            args.len(),
            "symbol {} applied to {} arguments",
            f,
            args.len()
        );
        Term::App(f, args.into())
    }

    pub fn constant(f: FunSym) -> Term {
        Term::app(f, Vec::new())
    }

    pub fn root(&self) -> Option<&FunSym> {
        match self {
            Term::App(f, _) => Some(f),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn symbols(&self) -> Signature {
        let mut sig = Signature::new();
        sig.extend_from_term(self);
        sig
    }

    /// Renders binary symbols with non-alphanumeric names infix, e.g. `x : (y : ys)`.
    pub fn infix(&self) -> Infix<'_> {
        Infix(self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::App(g, args) if args.is_empty() => f.write_str(g.name()),
            Term::App(g, args) => {
                write!(f, "{}(", g.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub struct Infix<'a>(&'a Term);

fn is_operator(name: &str) -> bool {
    !name.chars().any(|c| c.is_alphanumeric() || c == '_')
}

impl fmt::Display for Infix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::App(g, args) if args.len() == 2 && is_operator(g.name()) => {
                    write!(f, "({})", Infix(t))
                }
                _ => write!(f, "{}", Infix(t)),
            }
        }
        match self.0 {
            Term::Var(x) => f.write_str(x),
            Term::App(g, args) if args.is_empty() => f.write_str(g.name()),
            Term::App(g, args) if args.len() == 2 && is_operator(g.name()) => {
                operand(&args[0], f)?;
                write!(f, " {} ", g.name())?;
                operand(&args[1], f)
            }
            Term::App(g, args) => {
                write!(f, "{}(", g.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", Infix(a))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A path from the root; `ε` is the empty path. Indices are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut p = self.0.clone();
        p.extend_from_slice(&other.0);
        Position(p)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<Vec<usize>> for Position {
    fn from(path: Vec<usize>) -> Self {
        Position(path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "e" || s == "ε" || s.is_empty() {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|part| match part.parse::<usize>() {
                Ok(0) | Err(_) => Err(format!("bad position component {part:?}")),
                Ok(i) => Ok(i),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Substitution(BTreeMap<Arc<str>, Term>);

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn insert(&mut self, x: impl Into<Arc<str>>, t: Term) -> Option<Term> {
        self.0.insert(x.into(), t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.0.iter().map(|(k, v)| (&**k, v))
    }
}

impl<K: Into<Arc<str>>> FromIterator<(K, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (K, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// `μ`: the argument positions of each symbol below which rewriting is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplacementMap(BTreeMap<FunSym, BTreeSet<usize>>);

impl ReplacementMap {
    pub fn new() -> Self {
        ReplacementMap::default()
    }

    /// `μ(f) = {1, …, arity(f)}` for every `f` in the signature.
    pub fn full(sig: &Signature) -> Self {
        ReplacementMap(
            sig.iter()
                .map(|f| (f.clone(), (1..=f.arity()).collect()))
                .collect(),
        )
    }

    pub fn set(&mut self, f: FunSym, indices: impl IntoIterator<Item = usize>) -> Result<()> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > f.arity()) {
            return Err(Error::MuOutOfRange {
                symbol: f.name().to_string(),
                index: bad,
                arity: f.arity(),
            });
        }
        self.0.insert(f, indices);
        Ok(())
    }

    pub fn get(&self, f: &FunSym) -> Result<&BTreeSet<usize>> {
        self.0
            .get(f)
            .ok_or_else(|| Error::MissingMu(f.name().to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FunSym, &BTreeSet<usize>)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All positions of `t` in pre-order (which is also lexicographic order).
pub fn positions(t: &Term) -> Vec<Position> {
    fn go(t: &Term, here: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(here.clone()));
        for (i, a) in t.args().iter().enumerate() {
            here.push(i + 1);
            go(a, here, out);
            here.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn subterm_at<'a>(t: &'a Term, p: &Position) -> Result<&'a Term> {
    let mut cur = t;
    for &i in p.path() {
        match cur.args().get(i.wrapping_sub(1)) {
            Some(next) if i >= 1 => cur = next,
            _ => {
                return Err(Error::InvalidPosition {
                    position: p.to_string(),
                    term: t.to_string(),
                })
            }
        }
    }
    Ok(cur)
}

pub fn replace_at(t: &Term, p: &Position, u: Term) -> Result<Term> {
    fn go(t: &Term, path: &[usize], u: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(u),
            Some((&i, rest)) => match t {
                Term::App(f, args) if i >= 1 && i <= args.len() => {
                    let mut new_args = args.to_vec();
                    new_args[i - 1] = go(&args[i - 1], rest, u)?;
                    Some(Term::App(f.clone(), new_args.into()))
                }
                _ => None,
            },
        }
    }
    go(t, p.path(), u).ok_or_else(|| Error::InvalidPosition {
        position: p.to_string(),
        term: t.to_string(),
    })
}

/// Variables in order of first occurrence in a left-to-right depth-first
/// traversal of `terms`, without duplicates.
pub fn vars_of<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Vec<Arc<str>> {
    fn go(t: &Term, out: &mut Vec<Arc<str>>) {
        match t {
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
        }
    }
    let mut out = Vec::new();
    for t in terms {
        go(t, &mut out);
    }
    out
}

/// First-order matching: finds `σ` with `pattern σ = subject`.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    match_into(pattern, subject, &mut sigma).then_some(sigma)
}

/// Extends `sigma` so that `pattern sigma = subject`. Variables already bound
/// in `sigma` must agree. On failure `sigma` may be partially extended.
pub fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match pattern {
        Term::Var(x) => match sigma.0.get(x) {
            Some(bound) => bound == subject,
            None => {
                sigma.0.insert(x.clone(), subject.clone());
                true
            }
        },
        Term::App(f, pargs) => match subject {
            Term::App(g, sargs) if f == g => pargs
                .iter()
                .zip(sargs.iter())
                .all(|(p, s)| match_into(p, s, sigma)),
            _ => false,
        },
    }
}

pub fn apply_subst(t: &Term, sigma: &Substitution) -> Term {
    match t {
        Term::Var(x) => sigma.0.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(_, args) if args.is_empty() => t.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| apply_subst(a, sigma)).collect(),
        ),
    }
}

/// `Pos_μ(t)`, in pre-order.
pub fn active_positions(t: &Term, mu: &ReplacementMap) -> Result<Vec<Position>> {
    fn go(
        t: &Term,
        mu: &ReplacementMap,
        here: &mut Vec<usize>,
        out: &mut Vec<Position>,
    ) -> Result<()> {
        out.push(Position(here.clone()));
        if let Term::App(f, args) = t {
            let active = mu.get(f)?;
            for (i, a) in args.iter().enumerate() {
                if active.contains(&(i + 1)) {
                    here.push(i + 1);
                    go(a, mu, here, out)?;
                    here.pop();
                }
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(t, mu, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// The distinct terms `u` with `t ▷_μ u`, in order of their first active position.
pub fn mu_proper_subterms(t: &Term, mu: &ReplacementMap) -> Result<Vec<Term>> {
    let mut out: Vec<Term> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for p in active_positions(t, mu)? {
        if p.is_root() {
            continue;
        }
        let u = subterm_at(t, &p)?;
        if seen.insert(u.clone()) {
            out.push(u.clone());
        }
    }
    Ok(out)
}

/// Distinct proper subterms (ordinary `▷`).
pub fn proper_subterms(t: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for p in positions(t).into_iter().skip(1) {
        let u = subterm_at(t, &p).expect("own position");
        if seen.insert(u.clone()) {
            out.push(u.clone());
        }
    }
    out
}

/// True iff no fresh (unraveling) symbol occurs in `t`.
pub fn is_original(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, args) => f.is_original() && args.iter().all(is_original),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn sym(name: &str, arity: usize) -> FunSym {
        FunSym::new(name, arity)
    }

    pub fn c(name: &str) -> Term {
        Term::constant(sym(name, 0))
    }

    pub fn v(name: &str) -> Term {
        Term::var(name)
    }

    pub fn f(name: &str, args: Vec<Term>) -> Term {
        Term::app(sym(name, args.len()), args)
    }

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    fn less(a: Term, b: Term) -> Term {
        f("<", vec![a, b])
    }

    fn s(a: Term) -> Term {
        f("s", vec![a])
    }

    fn u_sym() -> FunSym {
        FunSym::fresh("U1_r4", 4, "r4", 1)
    }

    fn bubble_mu() -> ReplacementMap {
        let mut mu = ReplacementMap::new();
        for (name, arity) in [
            ("<", 2),
            (":", 2),
            ("s", 1),
            ("0", 0),
            ("true", 0),
            ("nil", 0),
        ] {
            mu.set(sym(name, arity), 1..=arity).unwrap();
        }
        mu.set(u_sym(), [1]).unwrap();
        mu
    }

    #[test]
    fn positions_enumerates_every_node() {
        assert_eq!(positions(&v("x")), vec![Position::root()]);
        let t = less(c("0"), s(c("0")));
        assert_eq!(
            positions(&t),
            vec![pos("e"), pos("1"), pos("2"), pos("2.1")]
        );
        let t = less(s(v("x")), s(v("y")));
        assert_eq!(
            positions(&t),
            vec![pos("e"), pos("1"), pos("1.1"), pos("2"), pos("2.1")]
        );
        assert_eq!(positions(&t).len(), t.size());
    }

    #[test]
    fn subterm_and_replace() {
        let t = less(c("0"), s(c("0")));
        assert_eq!(subterm_at(&t, &pos("e")).unwrap(), &t);
        assert_eq!(subterm_at(&t, &pos("2.1")).unwrap(), &c("0"));
        assert!(matches!(
            subterm_at(&v("x"), &pos("1")),
            Err(Error::InvalidPosition { .. })
        ));
        assert!(subterm_at(&t, &pos("3")).is_err());

        let st = s(less(c("0"), c("0")));
        assert_eq!(replace_at(&st, &pos("1"), c("true")).unwrap(), s(c("true")));
        assert_eq!(replace_at(&st, &pos("e"), c("nil")).unwrap(), c("nil"));
        assert_eq!(
            replace_at(&t, &pos("2"), c("0")).unwrap(),
            less(c("0"), c("0"))
        );
        assert!(replace_at(&c("0"), &pos("1"), c("0")).is_err());
    }

    #[test]
    fn vars_in_first_occurrence_order() {
        let names = |ts: &[Term]| -> Vec<String> {
            vars_of(ts.iter()).iter().map(|x| x.to_string()).collect()
        };
        assert_eq!(names(&[less(v("x"), v("y"))]), ["x", "y"]);
        assert_eq!(
            names(&[f("f", vec![v("y"), v("x")]), f("g", vec![v("y")])]),
            ["y", "x"]
        );
        assert!(names(&[c("0")]).is_empty());
    }

    #[test]
    fn matching() {
        let sigma = match_term(&less(v("x"), v("y")), &less(c("0"), s(c("0")))).unwrap();
        assert_eq!(sigma.get("x"), Some(&c("0")));
        assert_eq!(sigma.get("y"), Some(&s(c("0"))));
        assert!(match_term(&less(s(v("x")), s(v("y"))), &less(c("0"), s(c("0")))).is_none());
        assert!(match_term(&f("f", vec![v("x"), v("x")]), &f("f", vec![c("a"), c("b")])).is_none());
        assert!(match_term(&f("f", vec![v("x"), v("x")]), &f("f", vec![c("a"), c("a")])).is_some());
    }

    #[test]
    fn substitution_application() {
        let sigma: Substitution = [("x", c("0")), ("y", s(c("0")))].into_iter().collect();
        assert_eq!(
            apply_subst(&less(v("x"), v("y")), &sigma),
            less(c("0"), s(c("0")))
        );
        let t = f("f", vec![v("x"), v("z")]);
        assert_eq!(apply_subst(&t, &Substitution::new()), t);
        let sigma: Substitution = [("x", f("g", vec![v("y")]))].into_iter().collect();
        assert_eq!(
            apply_subst(&f("f", vec![v("x"), v("x")]), &sigma),
            f("f", vec![f("g", vec![v("y")]), f("g", vec![v("y")])])
        );
    }

    #[test]
    fn active_positions_respect_mu() {
        let mu = bubble_mu();
        let u = Term::app(u_sym(), vec![c("true"), v("x"), v("y"), v("ys")]);
        assert_eq!(active_positions(&u, &mu).unwrap(), vec![pos("e"), pos("1")]);
        assert_eq!(active_positions(&v("x"), &mu).unwrap(), vec![pos("e")]);
        let cons = |a, b| f(":", vec![a, b]);
        let t = cons(v("x"), cons(v("y"), v("ys")));
        assert_eq!(
            active_positions(&t, &mu).unwrap(),
            vec![pos("e"), pos("1"), pos("2"), pos("2.1"), pos("2.2")]
        );
        assert!(matches!(
            active_positions(&c("false"), &mu),
            Err(Error::MissingMu(_))
        ));
    }

    #[test]
    fn mu_subterms() {
        let mu = bubble_mu();
        let lt = less(c("0"), s(c("0")));
        let u = Term::app(u_sym(), vec![lt.clone(), c("0"), s(c("0")), c("nil")]);
        assert_eq!(
            mu_proper_subterms(&u, &mu).unwrap(),
            vec![lt, c("0"), s(c("0"))]
        );
        assert!(mu_proper_subterms(&v("x"), &mu).unwrap().is_empty());

        let mut frozen = ReplacementMap::new();
        frozen.set(sym("s", 1), []).unwrap();
        frozen.set(sym("0", 0), []).unwrap();
        assert!(mu_proper_subterms(&s(s(c("0"))), &frozen)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn originality() {
        assert!(is_original(&less(c("0"), s(c("0")))));
        let u = Term::app(u_sym(), vec![c("true"), v("x"), v("y"), v("ys")]);
        assert!(!is_original(&u));
        let u2 = Term::app(FunSym::fresh("U", 2, "r1", 1), vec![v("x"), v("y")]);
        assert!(!is_original(&s(u2)));
    }

    #[test]
    fn mu_rejects_out_of_range_indices() {
        let mut mu = ReplacementMap::new();
        assert!(mu.set(sym("s", 1), [2]).is_err());
        assert!(mu.set(sym("s", 1), [0]).is_err());
    }

    #[test]
    fn rendering() {
        let cons = |a, b| f(":", vec![a, b]);
        let t = cons(v("x"), cons(v("y"), v("ys")));
        assert_eq!(t.to_string(), ":(x, :(y, ys))");
        assert_eq!(t.infix().to_string(), "x : (y : ys)");
        assert_eq!(pos("e").to_string(), "e");
        assert_eq!(pos("2.1").to_string(), "2.1");
        assert!("0.1".parse::<Position>().is_err());
    }
}
