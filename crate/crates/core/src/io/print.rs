//! Writers for the formats read by [`super::parse`]. Output is deterministic
//! and parses back to the same system.

use std::fmt::Write;

use crate::ctrs::Dctrs;
use crate::term::{vars_of, Signature, Term};
use crate::unravel::{Csrs, Trs};

fn var_block<'a>(out: &mut String, terms: impl IntoIterator<Item = &'a Term>) {
    let vars = vars_of(terms);
    if vars.is_empty() {
        out.push_str("(VAR)\n");
    } else {
        let names: Vec<&str> = vars.iter().map(|v| &**v).collect();
        let _ = writeln!(out, "(VAR {})", names.join(" "));
    }
}

/// Symbols of `sig` that no rule mentions.
fn signature_block<'a>(
    out: &mut String,
    sig: &Signature,
    terms: impl IntoIterator<Item = &'a Term>,
) {
    let mut used = Signature::new();
    for t in terms {
        used.extend_from_term(t);
    }
    let extra: Vec<String> = sig
        .iter()
        .filter(|f| !used.contains(f))
        .map(|f| format!("({} {})", f.name(), f.arity()))
        .collect();
    if !extra.is_empty() {
        let _ = writeln!(out, "(SIGNATURE {})", extra.join(" "));
    }
}

fn rules_block(out: &mut String, lines: Vec<String>) {
    if lines.is_empty() {
        out.push_str("(RULES)\n");
        return;
    }
    out.push_str("(RULES\n");
    for l in lines {
        let _ = writeln!(out, "  {l}");
    }
    out.push_str(")\n");
}

pub fn print_ctrs(r: &Dctrs) -> String {
    let terms: Vec<&Term> = r
        .rules()
        .iter()
        .flat_map(|rule| {
            std::iter::once(&rule.lhs)
                .chain(std::iter::once(&rule.rhs))
                .chain(rule.conditions.iter().flat_map(|(s, t)| [s, t]))
        })
        .collect();
    let mut out = String::from("(CONDITIONTYPE ORIENTED)\n");
    var_block(&mut out, terms.iter().copied());
    signature_block(&mut out, r.signature(), terms.iter().copied());
    let lines = r
        .rules()
        .iter()
        .map(|rule| {
            let mut l = format!("{} -> {}", rule.lhs, rule.rhs);
            if rule.is_conditional() {
                let conds: Vec<String> = rule
                    .conditions
                    .iter()
                    .map(|(s, t)| format!("{s} == {t}"))
                    .collect();
                let _ = write!(l, " | {}", conds.join(", "));
            }
            l
        })
        .collect();
    rules_block(&mut out, lines);
    out
}

fn print_unconditional(trs: &Trs) -> String {
    let terms: Vec<&Term> = trs.rules.iter().flat_map(|r| [&r.lhs, &r.rhs]).collect();
    let mut out = String::new();
    var_block(&mut out, terms.iter().copied());
    signature_block(&mut out, &trs.signature, terms.iter().copied());
    rules_block(
        &mut out,
        trs.rules
            .iter()
            .map(|r| format!("{} -> {}", r.lhs, r.rhs))
            .collect(),
    );
    out
}

pub fn print_trs(trs: &Trs) -> String {
    print_unconditional(trs)
}

/// Every symbol gets a strategy entry, with no indices when `μ(f) = ∅`.
pub fn print_csrs(cs: &Csrs) -> String {
    let mut out = print_unconditional(&cs.trs());
    let entries: Vec<String> = cs
        .signature
        .iter()
        .map(|f| {
            let mut e = format!("({}", f.name());
            for i in cs.mu.get(f).expect("replacement map covers the signature") {
                let _ = write!(e, " {i}");
            }
            e.push(')');
            e
        })
        .collect();
    if entries.is_empty() {
        out.push_str("(STRATEGY CONTEXTSENSITIVE)\n");
    } else {
        out.push_str("(STRATEGY CONTEXTSENSITIVE\n");
        for e in entries {
            let _ = writeln!(out, "  {e}");
        }
        out.push_str(")\n");
    }
    out
}
