//! Exact certificates for closed-form identities and inequalities, and
//! brute-force oracles for the cross-intersecting bounds.

mod certificate;
mod oracles;
mod suites;
mod trace_bounds;

pub use certificate::{to_json_array, to_json_lines, Certificate, Verdict};
pub use oracles::{
    hilton_corollary_oracle, hilton_lemma_exhaustive, hilton_lemma_random, sum_bound_oracle, MAX_A_SETS, MAX_B_SETS,
};
pub use suites::{verify_identity_suite, Rel, SuiteId, SweepRange};
pub use trace_bounds::{default_windows, hypothesis_windows, trace_bound_check, trace_bounds_certificate, TraceReport};
