//! Bundled data sets used by the CLI defaults and the test suites.

/// Acyclic two-component-system / quorum-sensing GRN of *P. aeruginosa*.
pub const PA_GRN: &str = include_str!("../fixtures/pa_tcs_qs.tsv");
/// Three-node chain `A → B → C`.
pub const CHAIN_GRN: &str = include_str!("../fixtures/chain.tsv");
/// Environment condition at 30 °C (neutral hn21 → rhlR multiplier).
pub const ENV_30C: &str = include_str!("../fixtures/env_30C.tsv");
/// Environment condition at 37 °C (amplified hn21 → rhlR edge).
pub const ENV_37C: &str = include_str!("../fixtures/env_37C.tsv");
/// Ten-species human gut bacteria population network.
pub const HGB_SPECIES: &str = include_str!("../fixtures/hgb_species.tsv");
/// Target edge weights for [`HGB_SPECIES`].
pub const HGB_TARGET: &str = include_str!("../fixtures/hgb_target.tsv");
/// Weight scale the HGB fixtures were built with.
pub const HGB_WEIGHT_SCALE: f64 = 1.0;
