//! Monte Carlo simulation of committee voting, used as a statistical oracle
//! for the exact engine and exposed so custom models can be sanity-checked
//! from the command line.
//!
//! Randomness is counter-based: every draw is a pure function of
//! (seed, trial, voter, premise), so reports are bit-reproducible no matter
//! how trials are scheduled.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CompetenceModel, StateOfNature};
use crate::numeric::to_f64;
use crate::rules::DecisionRule;
use crate::tables::{check_committee_size, ContingencyTable};

/// SplitMix64 finalizer: a bijective mixer with good avalanche behaviour.
#[inline]
fn mix64(mut v: u64) -> u64 {
    v = (v ^ (v >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    v = (v ^ (v >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    v ^ (v >> 31)
}

const STREAM_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Uniform draw in [0, 1) indexed by (seed, trial, voter, premise).
pub fn unit_uniform(seed: u64, trial: u64, voter: u64, premise: u64) -> f64 {
    let mut h = mix64(seed ^ STREAM_SALT);
    h = mix64(h ^ trial);
    h = mix64(h ^ voter);
    h = mix64(h ^ premise);
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent derived seed for a labelled substream (one per state of
/// nature in [`estimate_rates`]).
fn substream(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(STREAM_SALT.wrapping_mul(index + 1)))
}

/// Point estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

fn rate_estimate(hits: u64, trials: u64) -> RateEstimate {
    let p = hits as f64 / trials as f64;
    RateEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
    }
}

/// Aggregated outcome of a simulation run.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    /// Named rate estimates; empty for plain vote simulations.
    pub empirical_rates: BTreeMap<String, RateEstimate>,
    /// Table frequencies summing to `trials`, keyed by state label and
    /// listed in table enumeration order.
    pub empirical_table_freqs: BTreeMap<String, Vec<(ContingencyTable, u64)>>,
}

/// Per-voter sampling plan, with thresholds converted to f64 once. The
/// oracle deliberately allows the closed bounds theta in [0, 1], so perfect
/// or hopeless voters can be simulated even though the exact model keeps
/// competences strictly inside (0, 1).
enum SamplingPlan {
    /// One correctness threshold per voter, applied to both premises.
    PremiseWise(Vec<f64>),
    /// (theta_p, theta_q_given_p, theta_q_given_notp) per voter.
    Conditional(Vec<(f64, f64, f64)>),
    /// Cumulative cell probabilities per voter, one draw per voter.
    CellWise(Vec<[f64; 4]>),
}

fn sampling_plan(n: u32, model: &CompetenceModel, state: StateOfNature) -> Result<SamplingPlan> {
    let check = |theta: &crate::numeric::Rational| -> Result<f64> {
        let v = to_f64(theta);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain("competence outside [0, 1]".to_string()));
        }
        Ok(v)
    };
    match model {
        CompetenceModel::Homogeneous(theta) => {
            let t = check(&theta.0)?;
            Ok(SamplingPlan::PremiseWise(vec![t; n as usize]))
        }
        CompetenceModel::PerVoter(thetas) => {
            if thetas.len() != n as usize {
                return Err(Error::domain(format!(
                    "model describes {} voters, committee has {n}",
                    thetas.len()
                )));
            }
            Ok(SamplingPlan::PremiseWise(
                thetas.iter().map(|t| check(&t.0)).collect::<Result<_>>()?,
            ))
        }
        CompetenceModel::Conditional(voters) => {
            if voters.len() != n as usize {
                return Err(Error::domain(format!(
                    "model describes {} voters, committee has {n}",
                    voters.len()
                )));
            }
            Ok(SamplingPlan::Conditional(
                voters
                    .iter()
                    .map(|c| {
                        Ok((
                            check(&c.theta_p.0)?,
                            check(&c.theta_q_given_p.0)?,
                            check(&c.theta_q_given_notp.0)?,
                        ))
                    })
                    .collect::<Result<_>>()?,
            ))
        }
        CompetenceModel::Cells(_) => {
            let cells = model.voter_cells(n, state)?;
            Ok(SamplingPlan::CellWise(
                cells
                    .iter()
                    .map(|c| {
                        let p: Vec<f64> = c.as_array().iter().map(|r| to_f64(r)).collect();
                        [p[0], p[0] + p[1], p[0] + p[1] + p[2], 1.0]
                    })
                    .collect(),
            ))
        }
    }
}

fn run_trials(
    n: u32,
    plan: &SamplingPlan,
    state: StateOfNature,
    trials: u64,
    seed: u64,
) -> BTreeMap<ContingencyTable, u64> {
    let (p_true, q_true) = state.truths();
    let mut freqs: BTreeMap<ContingencyTable, u64> = BTreeMap::new();
    for trial in 0..trials {
        let mut counts = [0u32; 4];
        for voter in 0..u64::from(n) {
            let cell = match plan {
                SamplingPlan::PremiseWise(thetas) => {
                    let theta = thetas[voter as usize];
                    let correct_p = unit_uniform(seed, trial, voter, 0) < theta;
                    let correct_q = unit_uniform(seed, trial, voter, 1) < theta;
                    cell_of(correct_p == p_true, correct_q == q_true)
                }
                SamplingPlan::Conditional(voters) => {
                    let (tp, tqp, tqn) = voters[voter as usize];
                    let correct_p = unit_uniform(seed, trial, voter, 0) < tp;
                    let tq = if correct_p { tqp } else { tqn };
                    let correct_q = unit_uniform(seed, trial, voter, 1) < tq;
                    cell_of(correct_p == p_true, correct_q == q_true)
                }
                SamplingPlan::CellWise(cum) => {
                    let u = unit_uniform(seed, trial, voter, 0);
                    let c = &cum[voter as usize];
                    match () {
                        _ if u < c[0] => 0,
                        _ if u < c[1] => 1,
                        _ if u < c[2] => 2,
                        _ => 3,
                    }
                }
            };
            counts[cell] += 1;
        }
        let table = ContingencyTable::new(counts[0], counts[1], counts[2], counts[3])
            .expect("counts sum to n");
        *freqs.entry(table).or_insert(0) += 1;
    }
    freqs
}

// votes ("premise true", "premise true") land in cell x, and so on
fn cell_of(vote_p: bool, vote_q: bool) -> usize {
    match (vote_p, vote_q) {
        (true, true) => 0,
        (true, false) => 1,
        (false, true) => 2,
        (false, false) => 3,
    }
}

/// Simulate `trials` committee votes under one state of nature and tally
/// the resulting contingency tables.
pub fn simulate_votes(
    n: u32,
    model: &CompetenceModel,
    state: StateOfNature,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    check_committee_size(n)?;
    if trials == 0 {
        return Err(Error::domain("need at least one trial".to_string()));
    }
    let plan = sampling_plan(n, model, state)?;
    let freqs = run_trials(n, &plan, state, trials, seed);
    let mut empirical_table_freqs = BTreeMap::new();
    empirical_table_freqs.insert(
        state.label().to_string(),
        freqs.into_iter().collect::<Vec<_>>(),
    );
    Ok(SimulationReport {
        trials,
        seed,
        empirical_rates: BTreeMap::new(),
        empirical_table_freqs,
    })
}

/// Simulate under all four states and report the empirical acceptance rate
/// of the rule per state, plus the derived TPR and (max-over-negative-states)
/// FPR estimates.
pub fn estimate_rates(
    n: u32,
    model: &CompetenceModel,
    rule: &DecisionRule,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    check_committee_size(n)?;
    if trials == 0 {
        return Err(Error::domain("need at least one trial".to_string()));
    }
    if rule.n() != n {
        return Err(Error::domain(format!(
            "rule is for committee size {}, simulating {n}",
            rule.n()
        )));
    }
    let mut empirical_rates = BTreeMap::new();
    let mut empirical_table_freqs = BTreeMap::new();
    let mut acceptances: BTreeMap<StateOfNature, u64> = BTreeMap::new();
    for (idx, state) in StateOfNature::ALL.into_iter().enumerate() {
        let plan = sampling_plan(n, model, state)?;
        let freqs = run_trials(n, &plan, state, trials, substream(seed, idx as u64));
        let mut accepted = 0u64;
        for (table, count) in &freqs {
            if rule.decide(table)? {
                accepted += count;
            }
        }
        acceptances.insert(state, accepted);
        empirical_rates.insert(
            format!("acc_{}", state.label()),
            rate_estimate(accepted, trials),
        );
        empirical_table_freqs.insert(
            state.label().to_string(),
            freqs.into_iter().collect::<Vec<_>>(),
        );
    }
    empirical_rates.insert(
        "tpr".to_string(),
        rate_estimate(acceptances[&StateOfNature::PQ], trials),
    );
    let max_negative = StateOfNature::NEGATIVE
        .iter()
        .map(|s| acceptances[s])
        .max()
        .expect("three states");
    empirical_rates.insert("fpr".to_string(), rate_estimate(max_negative, trials));
    Ok(SimulationReport {
        trials,
        seed,
        empirical_rates,
        empirical_table_freqs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use crate::rules::BuiltinRule;

    #[test]
    fn perfect_competence_is_deterministic() {
        let model = CompetenceModel::homogeneous(ratio(1, 1));
        let report = simulate_votes(5, &model, StateOfNature::PQ, 200, 7).unwrap();
        let freqs = &report.empirical_table_freqs["PQ"];
        assert_eq!(freqs.len(), 1);
        let unanimous = ContingencyTable::new(5, 0, 0, 0).unwrap();
        assert_eq!(freqs[0], (unanimous, 200));
    }

    #[test]
    fn reports_are_reproducible() {
        let model = CompetenceModel::homogeneous(ratio(7, 10));
        let rule = DecisionRule::builtin(5, BuiltinRule::IssueByIssue).unwrap();
        let a = estimate_rates(5, &model, &rule, 2000, 42).unwrap();
        let b = estimate_rates(5, &model, &rule, 2000, 42).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = estimate_rates(5, &model, &rule, 2000, 43).unwrap();
        assert_ne!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&c).unwrap()
        );
    }

    #[test]
    fn frequencies_sum_to_trials() {
        let model = CompetenceModel::per_voter(vec![ratio(6, 10), ratio(7, 10), ratio(8, 10)]);
        let report = simulate_votes(3, &model, StateOfNature::NotPQ, 5000, 11).unwrap();
        let total: u64 = report.empirical_table_freqs["notPQ"]
            .iter()
            .map(|(_, c)| c)
            .sum();
        assert_eq!(total, 5000);
    }

    #[test]
    fn constant_rule_estimates_are_exact() {
        let model = CompetenceModel::homogeneous(ratio(6, 10));
        let rule = DecisionRule::builtin(3, BuiltinRule::ConstantOne).unwrap();
        let report = estimate_rates(3, &model, &rule, 500, 99).unwrap();
        assert_eq!(report.empirical_rates["tpr"].estimate, 1.0);
        assert_eq!(report.empirical_rates["fpr"].estimate, 1.0);
    }

    #[test]
    fn empirical_rates_track_exact_rates() {
        let theta = ratio(3, 4);
        let model = CompetenceModel::homogeneous(theta.clone());
        let rule = DecisionRule::builtin(7, BuiltinRule::IssueByIssue).unwrap();
        let trials = 200_000;
        let report = estimate_rates(7, &model, &rule, trials, 1234).unwrap();
        let exact = crate::rates::true_positive_rate(7, &model, &rule).unwrap();
        let est = &report.empirical_rates["tpr"];
        let diff = (est.estimate - crate::numeric::to_f64(&exact)).abs();
        assert!(
            diff <= 3.0 * est.std_error,
            "diff {diff} vs 3se {}",
            3.0 * est.std_error
        );
    }

    #[test]
    fn conditional_model_simulates() {
        let model = CompetenceModel::conditional(ratio(8, 10), ratio(9, 10), ratio(1, 2), 3);
        let report = simulate_votes(3, &model, StateOfNature::PQ, 1000, 5).unwrap();
        let total: u64 = report.empirical_table_freqs["PQ"]
            .iter()
            .map(|(_, c)| c)
            .sum();
        assert_eq!(total, 1000);
    }
}
