//! Exact analysis of majority decision rules for committees deciding a
//! two-premise conjunction.
//!
//! A committee of odd size votes on two premises; the vote pattern is a
//! four-cell contingency table. This crate enumerates those tables, models
//! them probabilistically (multinomial for homogeneous committees, exact
//! convolution otherwise), evaluates decision rules through ROC-style
//! quality measures (TPR, FPR, AOT and its weighted variant), and computes
//! the threshold curves that say which rule to prefer for given competence
//! and error weights. All probability computations are exact rational
//! arithmetic; floating point appears only in clearly labeled fast paths
//! and in the Monte Carlo oracle.

pub mod analysis;
pub mod error;
pub mod mc;
pub mod model;
pub mod numeric;
pub mod rates;
pub mod rules;
pub mod tables;

pub use analysis::{
    competence_threshold_c, min_committee_size, paradox_probability, weight_order_intervals,
    weight_threshold_d, SizeMetric, ThresholdCurve, WeightInterval,
};
pub use error::{Error, Result};
pub use mc::{estimate_rates, simulate_votes, SimulationReport};
pub use model::{
    state_probs, table_distribution, table_pmf, CellProbabilities, CompetenceModel, StateOfNature,
    TableDistribution,
};
pub use numeric::Rational;
pub use rates::{
    acceptance_probability, false_positive_rate, metrics, rate_polynomial, true_positive_rate,
    Metrics, RatePolynomial,
};
pub use rules::{
    count_admissible, disagreement_set, enumerate_admissible, is_admissible, score, AcceptSet,
    Admissibility, AdmissibilityViolation, BuiltinRule, DecisionRule, RuleSpec, ScoreKind,
};
pub use tables::{enumerate_tables, table_leq, transpose, ContingencyTable, TableSpace};
