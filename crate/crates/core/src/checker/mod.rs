pub mod lpo;
pub mod prover;
pub mod simulation;
pub mod witness;

pub use lpo::{lpo_greater, search_precedence, Precedence, DEFAULT_PRECEDENCE_CAP};
pub use prover::{
    prove_quasi_decreasing, prove_with, validate_loop, Certificate, Method, ProofOutcome,
    ProverConfig, RouteReport, Verdict,
};
pub use simulation::{
    check_commutation, check_simulation, mu_reduction, Commutation, SimulationOutcome,
};
pub use witness::{validate_witness_order, ChainInstance, ObligationReport, WitnessOrderReport};
