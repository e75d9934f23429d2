//! Reader for the Cops CTRS format and the classic TRS format with an
//! optional `(STRATEGY CONTEXTSENSITIVE ...)` block.
//!
//! ```text
//! (CONDITIONTYPE ORIENTED)
//! (VAR x y ys)
//! (RULES
//!   <(x, 0) -> false
//!   :(x, :(y, ys)) -> :(y, :(x, ys)) | <(x, y) == true
//! )
//! ```
//!
//! Symbols such as `<` and `:` are ordinary identifiers used in prefix
//! form. Identifiers not declared in `VAR` are function symbols; their
//! arity is taken from the first occurrence and must agree everywhere.
//! An optional `(SIGNATURE (nil 0) ...)` block declares symbols that occur
//! in no rule.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ctrs::{validate_dctrs, ConditionalRule, Dctrs, Violation};
use crate::term::{FunSym, ReplacementMap, Signature, Term};
use crate::unravel::{Csrs, RewriteRule, Trs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("{span}: condition type {tag} is not supported, only ORIENTED")]
    UnsupportedConditionType { span: Span, tag: String },
    #[error("not a DCTRS: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

impl ParseError {
    pub fn span(&self) -> Option<Span> {
        match self {
            ParseError::Syntax { span, .. } | ParseError::UnsupportedConditionType { span, .. } => {
                Some(*span)
            }
            ParseError::Invalid(_) => None,
        }
    }
}

fn syntax<T>(span: Span, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        span,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionType {
    Oriented,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtrsProblem {
    pub dctrs: Dctrs,
    /// Declared variables, in declaration order.
    pub vars: Vec<String>,
    pub condition_type: ConditionType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrsProblem {
    pub trs: Trs,
    pub vars: Vec<String>,
    /// Present when the file has a context-sensitive strategy.
    pub mu: Option<ReplacementMap>,
}

impl TrsProblem {
    pub fn csrs(&self) -> Option<crate::Result<Csrs>> {
        self.mu
            .as_ref()
            .map(|mu| Csrs::new(self.trs.rules.clone(), mu.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Arrow,
    Pipe,
    Equals,
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("'('"),
            Tok::Close => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Pipe => f.write_str("'|'"),
            Tok::Equals => f.write_str("'=='"),
            Tok::Ident(s) => write!(f, "'{s}'"),
        }
    }
}

fn lex(text: &str) -> Vec<(Tok, Span)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let starts = |i: usize, pat: &str| {
        pat.chars()
            .enumerate()
            .all(|(k, c)| chars.get(i + k) == Some(&c))
    };
    while i < chars.len() {
        let span = Span { line, column };
        let c = chars[i];
        let (tok, len) = if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        } else if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        } else if c == '(' {
            (Tok::Open, 1)
        } else if c == ')' {
            (Tok::Close, 1)
        } else if c == ',' {
            (Tok::Comma, 1)
        } else if c == '|' {
            (Tok::Pipe, 1)
        } else if starts(i, "->") {
            (Tok::Arrow, 2)
        } else if starts(i, "==") {
            (Tok::Equals, 2)
        } else {
            let mut j = i;
            while j < chars.len() {
                let d = chars[j];
                if d.is_whitespace()
                    || matches!(d, '(' | ')' | ',' | '|')
                    || (j > i && (starts(j, "->") || starts(j, "==")))
                {
                    break;
                }
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        };
        out.push((tok, span));
        i += len;
        column += len;
    }
    out
}

/// Terms before variables and arities are resolved.
#[derive(Debug, Clone)]
struct Raw {
    name: String,
    span: Span,
    args: Option<Vec<Raw>>,
}

#[derive(Debug, Default)]
struct RawRule {
    lhs: Option<Raw>,
    rhs: Option<Raw>,
    conditions: Vec<(Raw, Raw)>,
    pipe: Option<Span>,
}

#[derive(Debug, Default)]
struct RawFile {
    condition_type: Option<(String, Span)>,
    vars: Vec<(String, Span)>,
    rules: Vec<RawRule>,
    signature: Vec<(String, usize, Span)>,
    strategy: Option<Vec<(String, Vec<usize>, Span)>>,
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

impl Parser {
    fn new(text: &str) -> Self {
        let lines = text.split('\n').count();
        let last = text.rsplit('\n').next().unwrap_or("").chars().count();
        Parser {
            toks: lex(text),
            pos: 0,
            end: Span {
                line: lines,
                column: last + 1,
            },
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map(|(_, s)| *s).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Span, ParseError> {
        match self.next() {
            Some((t, s)) if t == want => Ok(s),
            Some((t, s)) => syntax(s, format!("expected {want}, found {t}")),
            None => syntax(self.end, format!("expected {want}, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.next() {
            Some((Tok::Ident(name), s)) => Ok((name, s)),
            Some((t, s)) => syntax(s, format!("expected an identifier, found {t}")),
            None => syntax(self.end, "expected an identifier, found end of input"),
        }
    }

    fn file(&mut self) -> Result<RawFile, ParseError> {
        let mut file = RawFile::default();
        while self.peek().is_some() {
            self.expect(Tok::Open)?;
            let (kw, span) = self.ident()?;
            match kw.as_str() {
                "CONDITIONTYPE" => {
                    let tag = self.ident()?;
                    file.condition_type = Some(tag);
                    self.expect(Tok::Close)?;
                }
                "VAR" => {
                    while let Some(Tok::Ident(_)) = self.peek() {
                        file.vars.push(self.ident()?);
                    }
                    self.expect(Tok::Close)?;
                }
                "RULES" => {
                    while !matches!(self.peek(), Some(Tok::Close) | None) {
                        file.rules.push(self.rule()?);
                    }
                    self.expect(Tok::Close)?;
                }
                "SIGNATURE" => {
                    while let Some(Tok::Open) = self.peek() {
                        self.next();
                        let (name, s) = self.ident()?;
                        let (n, ns) = self.ident()?;
                        let arity = n.parse().or_else(|_| {
                            syntax(ns, format!("arity must be a number, found {n}"))
                        })?;
                        file.signature.push((name, arity, s));
                        self.expect(Tok::Close)?;
                    }
                    self.expect(Tok::Close)?;
                }
                "STRATEGY" => {
                    let (kind, ks) = self.ident()?;
                    if kind != "CONTEXTSENSITIVE" {
                        return syntax(ks, format!("unsupported strategy {kind}"));
                    }
                    let mut entries = Vec::new();
                    while let Some(Tok::Open) = self.peek() {
                        self.next();
                        let (name, s) = self.ident()?;
                        let mut indices = Vec::new();
                        while let Some(Tok::Ident(_)) = self.peek() {
                            let (n, ns) = self.ident()?;
                            indices.push(n.parse().or_else(|_| {
                                syntax(ns, format!("argument index must be a number, found {n}"))
                            })?);
                        }
                        entries.push((name, indices, s));
                        self.expect(Tok::Close)?;
                    }
                    file.strategy = Some(entries);
                    self.expect(Tok::Close)?;
                }
                "COMMENT" => self.skip_balanced()?,
                other => return syntax(span, format!("unknown block {other}")),
            }
        }
        Ok(file)
    }

    fn skip_balanced(&mut self) -> Result<(), ParseError> {
        let mut depth = 1;
        while depth > 0 {
            match self.next() {
                Some((Tok::Open, _)) => depth += 1,
                Some((Tok::Close, _)) => depth -= 1,
                Some(_) => {}
                None => return syntax(self.end, "unterminated block"),
            }
        }
        Ok(())
    }

    fn rule(&mut self) -> Result<RawRule, ParseError> {
        let lhs = self.term()?;
        self.expect(Tok::Arrow)?;
        let rhs = self.term()?;
        let mut rule = RawRule {
            lhs: Some(lhs),
            rhs: Some(rhs),
            ..RawRule::default()
        };
        if let Some(Tok::Pipe) = self.peek() {
            rule.pipe = Some(self.span());
            self.next();
            loop {
                let s = self.term()?;
                self.expect(Tok::Equals)?;
                let t = self.term()?;
                rule.conditions.push((s, t));
                if let Some(Tok::Comma) = self.peek() {
                    self.next();
                } else {
                    break;
                }
            }
        }
        Ok(rule)
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let (name, span) = self.ident()?;
        if self.peek() != Some(&Tok::Open) {
            return Ok(Raw {
                name,
                span,
                args: None,
            });
        }
        self.next();
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::Close) {
            self.next();
        } else {
            loop {
                args.push(self.term()?);
                match self.next() {
                    Some((Tok::Comma, _)) => {}
                    Some((Tok::Close, _)) => break,
                    Some((t, s)) => return syntax(s, format!("expected ',' or ')', found {t}")),
                    None => return syntax(self.end, "unclosed argument list"),
                }
            }
        }
        Ok(Raw {
            name,
            span,
            args: Some(args),
        })
    }
}

/// Maps names to symbols, fixing arities on first sight.
struct Resolver<'a> {
    vars: &'a BTreeSet<String>,
    symbols: BTreeMap<String, FunSym>,
    make: fn(&str, usize) -> FunSym,
}

impl Resolver<'_> {
    fn declare(&mut self, name: &str, arity: usize, span: Span) -> Result<FunSym, ParseError> {
        if self.vars.contains(name) {
            return syntax(span, format!("{name} is declared as a variable"));
        }
        match self.symbols.get(name) {
            Some(f) if f.arity() == arity => Ok(f.clone()),
            Some(f) => syntax(
                span,
                format!(
                    "{name} is used with {arity} arguments but has arity {}",
                    f.arity()
                ),
            ),
            None => {
                let f = (self.make)(name, arity);
                self.symbols.insert(name.to_string(), f.clone());
                Ok(f)
            }
        }
    }

    fn term(&mut self, raw: &Raw) -> Result<Term, ParseError> {
        if self.vars.contains(&raw.name) {
            return match &raw.args {
                None => Ok(Term::var(raw.name.as_str())),
                Some(_) => syntax(
                    raw.span,
                    format!("variable {} cannot take arguments", raw.name),
                ),
            };
        }
        let args = match &raw.args {
            None => Vec::new(),
            Some(a) => a.iter().map(|t| self.term(t)).collect::<Result<_, _>>()?,
        };
        let f = self.declare(&raw.name, args.len(), raw.span)?;
        Ok(Term::app(f, args))
    }
}

/// `U{i}_{rule}` with optional trailing primes, as produced by the unraveling.
pub fn u_symbol_origin(name: &str) -> Option<(String, usize)> {
    let rest = name.strip_prefix('U')?;
    let digits = rest.find(|c: char| !c.is_ascii_digit())?;
    let index: usize = rest[..digits].parse().ok()?;
    let rule = rest[digits..].strip_prefix('_')?.trim_end_matches('\'');
    (index >= 1 && !rule.is_empty()).then(|| (rule.to_string(), index))
}

fn u_aware(name: &str, arity: usize) -> FunSym {
    match u_symbol_origin(name) {
        Some((rule, index)) => FunSym::fresh(name, arity, &rule, index),
        None => FunSym::new(name, arity),
    }
}

fn resolve_signature(
    file: &RawFile,
    resolver: &mut Resolver<'_>,
) -> Result<Vec<FunSym>, ParseError> {
    file.signature
        .iter()
        .map(|(name, arity, span)| resolver.declare(name, *arity, *span))
        .collect()
}

fn declared_vars(file: &RawFile) -> Result<(Vec<String>, BTreeSet<String>), ParseError> {
    let mut set = BTreeSet::new();
    let mut list = Vec::new();
    for (v, span) in &file.vars {
        if !set.insert(v.clone()) {
            return syntax(*span, format!("variable {v} declared twice"));
        }
        list.push(v.clone());
    }
    Ok((list, set))
}

pub fn parse_ctrs(text: &str) -> Result<CtrsProblem, ParseError> {
    let file = Parser::new(text).file()?;
    if let Some((tag, span)) = &file.condition_type {
        if tag != "ORIENTED" {
            return Err(ParseError::UnsupportedConditionType {
                span: *span,
                tag: tag.clone(),
            });
        }
    }
    if let Some(entries) = &file.strategy {
        let span = entries
            .first()
            .map(|e| e.2)
            .unwrap_or(Span { line: 1, column: 1 });
        return syntax(span, "a conditional system cannot carry a strategy");
    }
    let (vars, var_set) = declared_vars(&file)?;
    let mut resolver = Resolver {
        vars: &var_set,
        symbols: BTreeMap::new(),
        make: |n, a| FunSym::new(n, a),
    };
    let mut rules = Vec::new();
    for (k, raw) in file.rules.iter().enumerate() {
        let lhs = resolver.term(raw.lhs.as_ref().expect("parsed"))?;
        let rhs = resolver.term(raw.rhs.as_ref().expect("parsed"))?;
        let conditions = raw
            .conditions
            .iter()
            .map(|(s, t)| Ok((resolver.term(s)?, resolver.term(t)?)))
            .collect::<Result<Vec<_>, ParseError>>()?;
        rules.push(ConditionalRule::new(
            &format!("r{}", k + 1),
            lhs,
            rhs,
            conditions,
        ));
    }
    let extra = resolve_signature(&file, &mut resolver)?;
    let dctrs = validate_dctrs(rules)
        .map_err(ParseError::Invalid)?
        .with_symbols(extra)
        .expect("original symbols with consistent arities");
    Ok(CtrsProblem {
        dctrs,
        vars,
        condition_type: ConditionType::Oriented,
    })
}

/// Unconditional systems. Symbols named like unraveling output (`U1_r4`)
/// are read back as `U`-symbols.
pub fn parse_trs(text: &str) -> Result<TrsProblem, ParseError> {
    let file = Parser::new(text).file()?;
    if let Some((tag, span)) = &file.condition_type {
        return syntax(
            *span,
            format!("unconditional system with condition type {tag}"),
        );
    }
    let (vars, var_set) = declared_vars(&file)?;
    let mut resolver = Resolver {
        vars: &var_set,
        symbols: BTreeMap::new(),
        make: u_aware,
    };
    let mut rules = Vec::new();
    for (k, raw) in file.rules.iter().enumerate() {
        if let Some(span) = raw.pipe {
            return syntax(
                span,
                "conditions are not allowed in an unconditional system",
            );
        }
        let lhs = resolver.term(raw.lhs.as_ref().expect("parsed"))?;
        let rhs = resolver.term(raw.rhs.as_ref().expect("parsed"))?;
        let rule = RewriteRule::new(&format!("r{}", k + 1), lhs, rhs);
        if !rule.is_well_formed() {
            let span = raw.lhs.as_ref().expect("parsed").span;
            return syntax(
                span,
                format!("rule {rule} has a variable lhs or unbound rhs variables"),
            );
        }
        rules.push(rule);
    }
    let extra: Signature = resolve_signature(&file, &mut resolver)?
        .into_iter()
        .collect();
    let mu = match &file.strategy {
        None => None,
        Some(entries) => {
            let mut mu = ReplacementMap::new();
            for (name, indices, span) in entries {
                let Some(f) = resolver.symbols.get(name) else {
                    return syntax(*span, format!("strategy names unknown symbol {name}"));
                };
                if let Err(e) = mu.set(f.clone(), indices.iter().copied()) {
                    return syntax(*span, e.to_string());
                }
            }
            for f in resolver.symbols.values() {
                if mu.get(f).is_err() {
                    return syntax(
                        file.strategy_span(),
                        format!("strategy has no entry for {}", f.name()),
                    );
                }
            }
            Some(mu)
        }
    };
    Ok(TrsProblem {
        trs: Trs::with_signature(rules, &extra),
        vars,
        mu,
    })
}

impl RawFile {
    fn strategy_span(&self) -> Span {
        self.strategy
            .as_ref()
            .and_then(|e| e.first())
            .map(|e| e.2)
            .unwrap_or(Span { line: 1, column: 1 })
    }
}

/// A single term in the rule grammar. Names in `vars` are variables; other
/// names are looked up in `sig` by name, and unknown ones become fresh
/// original symbols with the arity they are used at.
pub fn parse_term(text: &str, vars: &[String], sig: &Signature) -> Result<Term, ParseError> {
    let mut parser = Parser::new(text);
    let raw = parser.term()?;
    if let Some((t, s)) = parser.next() {
        return syntax(s, format!("unexpected {t} after the term"));
    }
    let var_set: BTreeSet<String> = vars.iter().cloned().collect();
    let mut resolver = Resolver {
        vars: &var_set,
        symbols: sig
            .iter()
            .map(|f| (f.name().to_string(), f.clone()))
            .collect(),
        make: |n, a| FunSym::new(n, a),
    };
    resolver.term(&raw)
}
