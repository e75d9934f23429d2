//! Quasi-decreasingness verdicts through the unraveling.
//!
//! YES: an LPO precedence orients `U(R)`. Then `U(R)` terminates, so does its
//! context-sensitive restriction `U_CS(R)` on every term, and `R` is
//! quasi-decreasing.
//!
//! NO: a `U_CS(R)`-reduction from an original term revisits a term. Then
//! `U_CS(R)` is not `μ`-terminating on original terms, and `R` is not
//! quasi-decreasing.

use std::fmt;

use serde::Serialize;

use crate::checker::lpo::{lpo_greater, search_precedence, Precedence, DEFAULT_PRECEDENCE_CAP};
use crate::csrewrite::{
    enumerate_seeds, mu_steps, mu_terminating_on_seeds, MuVerdict, SeedOptions,
};
use crate::ctrs::{Dctrs, Fuel, Reduction};
use crate::term::{is_original, Term};
use crate::unravel::{unravel, unravel_cs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Yes,
    No,
    Maybe,
}

impl Verdict {
    /// CLI exit status: 0 YES, 1 NO, 2 MAYBE.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 1,
            Verdict::Maybe => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Maybe => "MAYBE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    Precedence { precedence: Precedence },
    Loop { reduction: Reduction },
    BoundsExhausted { fuel: Fuel },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Search for a `μ`-loop of `U_CS(R)` from enumerated original seeds.
    LoopSearch,
    /// LPO precedence search on `U(R)`.
    UnraveledLpo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::LoopSearch => "loop-search",
            Method::UnraveledLpo => "unraveled-lpo",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteReport {
    pub method: Method,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofOutcome {
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub provenance: Vec<String>,
    pub routes: Vec<RouteReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverConfig {
    pub fuel: Fuel,
    pub seeds: SeedOptions,
    pub precedence_cap: usize,
    /// Run the loop search even after the LPO route succeeded.
    pub all_routes: bool,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            fuel: Fuel::default(),
            seeds: SeedOptions::ground(5),
            precedence_cap: DEFAULT_PRECEDENCE_CAP,
            all_routes: false,
        }
    }
}

pub fn prove_quasi_decreasing(rules: &Dctrs, fuel: Fuel, seeds: Option<&[Term]>) -> ProofOutcome {
    prove_with(
        rules,
        &ProverConfig {
            fuel,
            ..ProverConfig::default()
        },
        seeds,
    )
}

pub fn prove_with(rules: &Dctrs, config: &ProverConfig, seeds: Option<&[Term]>) -> ProofOutcome {
    let mut routes = Vec::new();

    let trs = unravel(rules);
    let precedence = match search_precedence(&trs, config.precedence_cap) {
        Ok(Some(p)) => {
            routes.push(RouteReport {
                method: Method::UnraveledLpo,
                verdict: Verdict::Yes,
                detail: format!("precedence {p}"),
            });
            Some(p)
        }
        Ok(None) => {
            routes.push(RouteReport {
                method: Method::UnraveledLpo,
                verdict: Verdict::Maybe,
                detail: "no precedence orients U(R)".into(),
            });
            None
        }
        Err(e) => {
            routes.push(RouteReport {
                method: Method::UnraveledLpo,
                verdict: Verdict::Maybe,
                detail: e.to_string(),
            });
            None
        }
    };

    if let (Some(p), false) = (&precedence, config.all_routes) {
        return yes(p.clone(), routes);
    }

    let cs = unravel_cs(rules);
    let owned;
    let seeds = match seeds {
        Some(s) => s,
        None => {
            owned = enumerate_seeds(rules.signature(), config.seeds);
            &owned
        }
    };
    let (loop_witness, loop_route) = match mu_terminating_on_seeds(seeds, &cs, config.fuel) {
        Ok(MuVerdict::LoopFound { witness }) => {
            let detail = format!("loop from seed {}", witness.start);
            (Some(witness), (Verdict::No, detail))
        }
        Ok(MuVerdict::TerminatesWithin { bound }) => (
            None,
            (
                Verdict::Maybe,
                format!(
                    "{} seeds terminate within {bound} steps; no loop found",
                    seeds.len()
                ),
            ),
        ),
        Ok(MuVerdict::Unknown { .. }) => (
            None,
            (
                Verdict::Maybe,
                "bounds exhausted on some seed; no loop found".into(),
            ),
        ),
        Err(e) => (None, (Verdict::Maybe, e.to_string())),
    };
    routes.push(RouteReport {
        method: Method::LoopSearch,
        verdict: loop_route.0,
        detail: loop_route.1,
    });

    match (precedence, loop_witness) {
        (Some(_), Some(w)) => {
            // Both certificates at once would mean an unsound route.
            let mut provenance = vec![format!(
                "ALARM: U(R) is LPO-oriented but a loop was found from {}",
                w.start
            )];
            provenance.push("refusing to answer".into());
            ProofOutcome {
                verdict: Verdict::Maybe,
                certificate: Certificate::BoundsExhausted { fuel: config.fuel },
                provenance,
                routes,
            }
        }
        (Some(p), None) => yes(p, routes),
        (None, Some(w)) => {
            let provenance = vec![
                format!(
                    "U_CS(R) reduction of length {} from original term {} returns to {}",
                    w.len(),
                    w.start,
                    w.end()
                ),
                "so U_CS(R) is not mu-terminating on original terms".into(),
                "quasi-decreasing R would make U_CS(R) mu-terminating on original terms, hence R is not quasi-decreasing".into(),
            ];
            ProofOutcome {
                verdict: Verdict::No,
                certificate: Certificate::Loop { reduction: w },
                provenance,
                routes,
            }
        }
        (None, None) => ProofOutcome {
            verdict: Verdict::Maybe,
            certificate: Certificate::BoundsExhausted { fuel: config.fuel },
            provenance: routes
                .iter()
                .map(|r| format!("{}: {}", r.method, r.detail))
                .collect(),
            routes,
        },
    }
}

fn yes(p: Precedence, routes: Vec<RouteReport>) -> ProofOutcome {
    let provenance = vec![
        format!("LPO with precedence {p} orients every rule of U(R)"),
        "so U(R) terminates".into(),
        "U_CS(R) rewrites a subset of U(R), so it is mu-terminating on original terms".into(),
        "mu-termination of U_CS(R) on original terms implies R is quasi-decreasing".into(),
    ];
    ProofOutcome {
        verdict: Verdict::Yes,
        certificate: Certificate::Precedence { precedence: p },
        provenance,
        routes,
    }
}

impl ProofOutcome {
    /// Re-checks the certificate from scratch against `rules`.
    pub fn revalidate(&self, rules: &Dctrs) -> bool {
        match (&self.verdict, &self.certificate) {
            (Verdict::Yes, Certificate::Precedence { precedence }) => unravel(rules)
                .rules
                .iter()
                .all(|r| lpo_greater(&r.lhs, &r.rhs, precedence).unwrap_or(false)),
            (Verdict::No, Certificate::Loop { reduction }) => {
                validate_loop(reduction, &unravel_cs(rules))
            }
            (Verdict::Maybe, Certificate::BoundsExhausted { .. }) => true,
            _ => false,
        }
    }
}

/// A non-empty connected `μ`-reduction from an original term whose final term
/// occurs earlier in the sequence.
pub fn validate_loop(reduction: &Reduction, cs: &crate::unravel::Csrs) -> bool {
    if reduction.is_empty() || !is_original(&reduction.start) || !reduction.is_connected() {
        return false;
    }
    let every_step_valid = reduction.steps.iter().all(|st| {
        mu_steps(&st.source, cs)
            .map(|all| {
                all.iter().any(|m| {
                    m.target == st.target && m.position == st.position && m.rule == st.rule
                })
            })
            .unwrap_or(false)
    });
    let end = reduction.end();
    every_step_valid && reduction.terms().take(reduction.len()).any(|t| t == end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctrs::tests::{bubble, bubble_rules};
    use crate::ctrs::{validate_dctrs, ConditionalRule};
    use crate::term::tests::c;

    #[test]
    fn less_is_yes() {
        let r = validate_dctrs(bubble_rules()[..3].to_vec()).unwrap();
        let out = prove_quasi_decreasing(&r, Fuel::default(), None);
        assert_eq!(out.verdict, Verdict::Yes);
        assert!(out.revalidate(&r));
    }

    #[test]
    fn self_loop_is_no() {
        let r = validate_dctrs(vec![ConditionalRule::unconditional("r1", c("a"), c("a"))]).unwrap();
        let out = prove_quasi_decreasing(&r, Fuel::default(), None);
        assert_eq!(out.verdict, Verdict::No);
        match &out.certificate {
            Certificate::Loop { reduction } => {
                assert_eq!(reduction.start, c("a"));
                assert_eq!(reduction.len(), 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(out.revalidate(&r));
    }

    #[test]
    fn bubble_sort_stays_open() {
        let out = prove_quasi_decreasing(&bubble(), Fuel::default(), None);
        assert_eq!(out.verdict, Verdict::Maybe);
        assert!(out.revalidate(&bubble()));
        assert_eq!(out.routes.len(), 2);
    }

    #[test]
    fn forged_certificates_are_rejected() {
        let r = bubble();
        let mut out = prove_quasi_decreasing(&r, Fuel::default(), None);
        out.verdict = Verdict::Yes;
        assert!(!out.revalidate(&r));
    }
}
