//! Evidence-graded decision procedures for boundedness and compactness of
//! `W_{ψ,φ}` between growth spaces.

pub mod membership;
pub mod stilde;
pub mod theorems;
pub mod trace;

pub use membership::{
    condition_n_mu, gap_window_radii, lemma_inf_lambda, membership_class, products_in_space, symbol_membership,
    ConditionReport, LambdaReport, Membership, MembershipReport, RadiiPlan,
};
pub use trace::{RadialTrace, Thresholds, TraceClass};
pub use theorems::{
    boundedness_a1, boundedness_a2, compactness_c1, compactness_c2, resolve_n0, CriterionConfig, CriterionReport,
    Restriction, Theorem, Verdict,
};
pub use stilde::{stilde_membership, StildeConfig, StildeEvidence};
