//! Named, runnable reproductions of the worked examples and lemma-level
//! checks.

pub mod lacunary;
pub mod lemmas;
pub mod maps;
pub mod scenarios;

pub use lacunary::{lacunary_lowerbound_check, minimal_working_q, LowerBoundReport, WindowMargin};
pub use lemmas::{lemma31_transfer_check, lemma32_cgamma_check, CgammaReport, TransferReport, TransferWeight};
pub use scenarios::{registry, run_scenario, scenario_ids, Check, Scenario, ScenarioOutcome};
