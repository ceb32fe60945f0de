//! Numerical verification of close-to-convexity, starlikeness and
//! subordination criteria for multivalent analytic functions
//! `f(z) = z^p + a_{p+n} z^{p+n} + ...` on the unit disk.
//!
//! The crate evaluates the closed-form constants of each criterion, reproduces
//! them by brute-force boundary extremization, and checks the implications on
//! seeded corpora of polynomials.

pub mod cli;
pub mod corpus;
pub mod criteria;
pub mod disk;
pub mod error;
pub mod series;
pub mod subordination;
pub mod verifier;

pub use corpus::{classical_function, load_corpus, random_polynomial, save_corpus, CorpusEntry, DrawMode, Provenance};
pub use criteria::{
    bound_t21, bound_t22, bound_t23, bound_t24, concl_value, hyp_value, lambda_range, theta_oracle, LambdaRange,
    OracleResult, T23Kind, Theorem, TheoremParams,
};
pub use disk::{inf_re_on_circle, sup_mod_on_circle, winding_number, GridSpec};
pub use error::{Error, Result};
pub use series::{differentiate, eval_shifted, make_function, quotient_eval, FunctionSpec, Series, TestFunction};
pub use subordination::{containment_subordination_check, disk_inequality_margin, MobiusTarget};
pub use verifier::{
    jack_check, run_corpus, search_counterexample, verify_implication, CorpusReport, JackReport, SearchConfig,
    SearchMode, SearchOutcome, Status, VerificationReport,
};
