//! Probability model of committee voting: states of nature, per-voter cell
//! probabilities, and the exact distribution of vote counts over the table
//! space.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{multinomial, parse_exact, Rational};
use crate::rules::AcceptSet;
use crate::tables::{check_committee_size, ContingencyTable, TableSpace};

/// The four exclusive truth assignments to the premises.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum StateOfNature {
    #[serde(rename = "PQ")]
    PQ,
    #[serde(rename = "PnotQ")]
    PNotQ,
    #[serde(rename = "notPQ")]
    NotPQ,
    #[serde(rename = "notPnotQ")]
    NotPNotQ,
}

impl StateOfNature {
    pub const ALL: [StateOfNature; 4] = [
        StateOfNature::PQ,
        StateOfNature::PNotQ,
        StateOfNature::NotPQ,
        StateOfNature::NotPNotQ,
    ];

    /// The three states under which accepting the conjunction is an error.
    pub const NEGATIVE: [StateOfNature; 3] = [
        StateOfNature::PNotQ,
        StateOfNature::NotPQ,
        StateOfNature::NotPNotQ,
    ];

    /// Truth of each premise in this state.
    pub fn truths(&self) -> (bool, bool) {
        match self {
            StateOfNature::PQ => (true, true),
            StateOfNature::PNotQ => (true, false),
            StateOfNature::NotPQ => (false, true),
            StateOfNature::NotPNotQ => (false, false),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            StateOfNature::PQ => "PQ",
            StateOfNature::PNotQ => "PnotQ",
            StateOfNature::NotPQ => "notPQ",
            StateOfNature::NotPNotQ => "notPnotQ",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "PQ" => Ok(StateOfNature::PQ),
            "PnotQ" => Ok(StateOfNature::PNotQ),
            "notPQ" => Ok(StateOfNature::NotPQ),
            "notPnotQ" => Ok(StateOfNature::NotPNotQ),
            other => Err(Error::domain(format!("unknown state of nature {other:?}"))),
        }
    }
}

/// One voter's probabilities of landing in each table cell. Exact, and they
/// must sum to one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CellProbabilities {
    pub p_x: Rational,
    pub p_y: Rational,
    pub p_z: Rational,
    pub p_t: Rational,
}

impl CellProbabilities {
    pub fn new(p_x: Rational, p_y: Rational, p_z: Rational, p_t: Rational) -> Result<Self> {
        let cells = CellProbabilities { p_x, p_y, p_z, p_t };
        cells.validate()?;
        Ok(cells)
    }

    pub fn validate(&self) -> Result<()> {
        let one = Rational::one();
        let zero = Rational::zero();
        for (name, p) in self.iter_named() {
            if p < &zero || p > &one {
                return Err(Error::domain(format!(
                    "cell probability {name} out of [0,1]"
                )));
            }
        }
        if &self.p_x + &self.p_y + &self.p_z + &self.p_t != one {
            return Err(Error::domain("cell probabilities must sum to 1"));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [&Rational; 4] {
        [&self.p_x, &self.p_y, &self.p_z, &self.p_t]
    }

    fn iter_named(&self) -> impl Iterator<Item = (&'static str, &Rational)> {
        [
            ("p_x", &self.p_x),
            ("p_y", &self.p_y),
            ("p_z", &self.p_z),
            ("p_t", &self.p_t),
        ]
        .into_iter()
    }

    /// Swap the single-premise cells; the pushforward of a table transpose.
    pub fn transposed(&self) -> Self {
        CellProbabilities {
            p_x: self.p_x.clone(),
            p_y: self.p_z.clone(),
            p_z: self.p_y.clone(),
            p_t: self.p_t.clone(),
        }
    }
}

/// Per-voter conditional competences for dependent premises: `theta_p` on
/// the first premise, and competence on the second premise conditioned on
/// having judged the first correctly (`theta_q_given_p`) or incorrectly
/// (`theta_q_given_notp`).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConditionalCompetence {
    pub theta_p: ProbabilityValue,
    pub theta_q_given_p: ProbabilityValue,
    pub theta_q_given_notp: ProbabilityValue,
}

/// Exact probability that deserialises from a JSON number (kept at full
/// precision) or from a decimal/fraction string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProbabilityValue(pub Rational);

impl Serialize for ProbabilityValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::numeric::exact_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for ProbabilityValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(serde_json::Number),
            Str(String),
        }
        let raw = Raw::deserialize(d)?;
        let text = match &raw {
            Raw::Num(n) => n.to_string(),
            Raw::Str(s) => s.clone(),
        };
        parse_exact(&text)
            .map(ProbabilityValue)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Competence model of the whole committee.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompetenceModel {
    /// Every voter judges each premise correctly with the same probability.
    Homogeneous(ProbabilityValue),
    /// One competence per voter, still independent across premises.
    PerVoter(Vec<ProbabilityValue>),
    /// Premise-dependent competence, one triple per voter.
    Conditional(Vec<ConditionalCompetence>),
    /// Fully general independent voters: explicit cell probabilities per
    /// voter and state.
    Cells(Vec<StateCells>),
}

/// Cell probabilities of one voter under each state of nature.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StateCells {
    #[serde(rename = "PQ")]
    pub pq: [ProbabilityValue; 4],
    #[serde(rename = "PnotQ")]
    pub pnotq: [ProbabilityValue; 4],
    #[serde(rename = "notPQ")]
    pub notpq: [ProbabilityValue; 4],
    #[serde(rename = "notPnotQ")]
    pub notpnotq: [ProbabilityValue; 4],
}

impl CompetenceModel {
    pub fn homogeneous(theta: Rational) -> Self {
        CompetenceModel::Homogeneous(ProbabilityValue(theta))
    }

    pub fn per_voter(thetas: Vec<Rational>) -> Self {
        CompetenceModel::PerVoter(thetas.into_iter().map(ProbabilityValue).collect())
    }

    pub fn conditional(
        theta_p: Rational,
        theta_q_given_p: Rational,
        theta_q_given_notp: Rational,
        n: u32,
    ) -> Self {
        let one = ConditionalCompetence {
            theta_p: ProbabilityValue(theta_p),
            theta_q_given_p: ProbabilityValue(theta_q_given_p),
            theta_q_given_notp: ProbabilityValue(theta_q_given_notp),
        };
        CompetenceModel::Conditional(vec![one; n as usize])
    }

    pub fn homogeneous_theta(&self) -> Option<&Rational> {
        match self {
            CompetenceModel::Homogeneous(t) => Some(&t.0),
            _ => None,
        }
    }

    /// Parse the CLI/JSON form: `{"homogeneous": 0.75}`,
    /// `{"per_voter": [...]}`, `{"conditional": {...}}` (single triple,
    /// applied to all voters) or `{"conditional": [...]}` (one per voter),
    /// or `{"cells": [...]}`. A `{"correlated": ...}` key is refused: exact
    /// computation under voter correlation needs an externally supplied
    /// joint law, which this model does not represent.
    pub fn from_json(text: &str, n: u32) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("bad model JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::domain("model JSON must be an object"))?;
        if obj.contains_key("correlated") {
            return Err(Error::capability(
                "correlated voters are not supported; supply independent per-voter models",
            ));
        }
        if let Some(c) = obj.get("conditional") {
            if c.is_object() {
                let one: ConditionalCompetence = serde_json::from_value(c.clone())
                    .map_err(|e| Error::domain(format!("bad conditional model: {e}")))?;
                return Ok(CompetenceModel::Conditional(vec![one; n as usize]));
            }
        }
        serde_json::from_value(value).map_err(|e| Error::domain(format!("bad model JSON: {e}")))
    }

    fn check_voters(&self, n: u32) -> Result<()> {
        let len = match self {
            CompetenceModel::Homogeneous(_) => return Ok(()),
            CompetenceModel::PerVoter(v) => v.len(),
            CompetenceModel::Conditional(v) => v.len(),
            CompetenceModel::Cells(v) => v.len(),
        };
        if len != n as usize {
            return Err(Error::domain(format!(
                "model describes {len} voters, committee has {n}"
            )));
        }
        Ok(())
    }

    /// Cell probability vectors of every voter under `state`.
    pub fn voter_cells(&self, n: u32, state: StateOfNature) -> Result<Vec<CellProbabilities>> {
        self.check_voters(n)?;
        match self {
            CompetenceModel::Homogeneous(theta) => {
                let row = state_probs(state, &theta.0)?;
                Ok(vec![row; n as usize])
            }
            CompetenceModel::PerVoter(thetas) => {
                thetas.iter().map(|t| state_probs(state, &t.0)).collect()
            }
            CompetenceModel::Conditional(voters) => {
                voters.iter().map(|c| conditional_probs(state, c)).collect()
            }
            CompetenceModel::Cells(voters) => voters
                .iter()
                .map(|v| {
                    let p = match state {
                        StateOfNature::PQ => &v.pq,
                        StateOfNature::PNotQ => &v.pnotq,
                        StateOfNature::NotPQ => &v.notpq,
                        StateOfNature::NotPNotQ => &v.notpnotq,
                    };
                    CellProbabilities::new(
                        p[0].0.clone(),
                        p[1].0.clone(),
                        p[2].0.clone(),
                        p[3].0.clone(),
                    )
                })
                .collect(),
        }
    }
}

fn check_open_unit(theta: &Rational) -> Result<()> {
    if theta <= &Rational::zero() || theta >= &Rational::one() {
        return Err(Error::domain(format!(
            "competence must lie strictly between 0 and 1, got {}",
            crate::numeric::exact_string(theta)
        )));
    }
    Ok(())
}

/// Cell probabilities of a single voter of competence `theta` under the
/// given state: the voter judges each premise correctly with probability
/// `theta`, independently, and the cell is the pair of resulting votes.
pub fn state_probs(state: StateOfNature, theta: &Rational) -> Result<CellProbabilities> {
    check_open_unit(theta)?;
    let hit = theta.clone();
    let miss = Rational::one() - theta;
    let (p_true, q_true) = state.truths();
    // probability that the voter votes "premise true"
    let vote_p = if p_true { hit.clone() } else { miss.clone() };
    let vote_q = if q_true { hit } else { miss };
    let not_p = Rational::one() - &vote_p;
    let not_q = Rational::one() - &vote_q;
    CellProbabilities::new(
        &vote_p * &vote_q,
        &vote_p * &not_q,
        &not_p * &vote_q,
        &not_p * &not_q,
    )
}

/// Cell probabilities under premise-dependent competence.
///
/// The voter first judges the first premise, correctly with probability
/// `theta_p`. Conditioned on that judgement being correct the second
/// premise is judged correctly with probability `theta_q_given_p`, and
/// conditioned on it being incorrect with probability `theta_q_given_notp`.
/// Correct/incorrect judgements then map to votes through the true state,
/// which determines all four state rows from the same three parameters.
pub fn conditional_probs(
    state: StateOfNature,
    c: &ConditionalCompetence,
) -> Result<CellProbabilities> {
    for v in [&c.theta_p, &c.theta_q_given_p, &c.theta_q_given_notp] {
        check_open_unit(&v.0)?;
    }
    let (p_true, q_true) = state.truths();
    let mut cells = [
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
    ];
    for correct_p in [true, false] {
        let w_p = if correct_p {
            c.theta_p.0.clone()
        } else {
            Rational::one() - &c.theta_p.0
        };
        let theta_q = if correct_p {
            &c.theta_q_given_p.0
        } else {
            &c.theta_q_given_notp.0
        };
        for correct_q in [true, false] {
            let w_q = if correct_q {
                theta_q.clone()
            } else {
                Rational::one() - theta_q
            };
            let vote_p = correct_p == p_true;
            let vote_q = correct_q == q_true;
            let cell = match (vote_p, vote_q) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            cells[cell] += &w_p * &w_q;
        }
    }
    let [p_x, p_y, p_z, p_t] = cells;
    CellProbabilities::new(p_x, p_y, p_z, p_t)
}

/// Multinomial probability of one table under i.i.d. cell probabilities:
/// `C(n; x,y,z,t) * p_x^x p_y^y p_z^z p_t^t`.
pub fn table_pmf(a: &ContingencyTable, p: &CellProbabilities) -> Rational {
    let coef = Rational::from_integer(multinomial(&a.counts()).into());
    let mut acc = coef;
    for (count, prob) in a.counts().iter().zip(p.as_array()) {
        acc *= pow_rational(prob, *count);
    }
    acc
}

pub(crate) fn pow_rational(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Exact distribution of the vote counts over the whole table space.
#[derive(Clone, Debug)]
pub struct TableDistribution {
    space: TableSpace,
    probs: Vec<Rational>,
}

impl TableDistribution {
    pub fn n(&self) -> u32 {
        self.space.n()
    }

    pub fn space(&self) -> &TableSpace {
        &self.space
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, a: &ContingencyTable) -> Result<&Rational> {
        Ok(&self.probs[self.space.index_of(a)?])
    }

    /// Total probability of an accept set.
    pub fn mass_of(&self, set: &AcceptSet) -> Rational {
        let mut acc = Rational::zero();
        for i in set.iter_indices() {
            acc += &self.probs[i];
        }
        acc
    }

    pub fn total(&self) -> Rational {
        self.probs.iter().fold(Rational::zero(), |a, p| a + p)
    }
}

/// Exact distribution of `(X, Y, Z, T)` for `n` voters under the model and
/// state. Homogeneous committees go through the multinomial formula; all
/// other models through an n-fold convolution of the per-voter cell
/// distributions. The two paths agree exactly on homogeneous input.
pub fn table_distribution(
    n: u32,
    model: &CompetenceModel,
    state: StateOfNature,
) -> Result<TableDistribution> {
    check_committee_size(n)?;
    let space = TableSpace::new(n)?;
    if let CompetenceModel::Homogeneous(theta) = model {
        let cells = state_probs(state, &theta.0)?;
        // powers of each cell probability, so each table is two big-int
        // multiplications instead of a fresh exponentiation
        let pow_tables: Vec<Vec<Rational>> = cells
            .as_array()
            .iter()
            .map(|p| {
                let mut v = Vec::with_capacity(n as usize + 1);
                let mut acc = Rational::one();
                for _ in 0..=n {
                    v.push(acc.clone());
                    acc *= *p;
                }
                v
            })
            .collect();
        let probs = space
            .iter()
            .map(|t| {
                let mut acc = Rational::from_integer(multinomial(&t.counts()).into());
                for (k, counts) in t.counts().iter().enumerate() {
                    acc *= &pow_tables[k][*counts as usize];
                }
                acc
            })
            .collect();
        return Ok(TableDistribution { space, probs });
    }

    let voters = model.voter_cells(n, state)?;
    let mut dist: HashMap<[u32; 4], Rational> = HashMap::new();
    dist.insert([0, 0, 0, 0], Rational::one());
    for cells in &voters {
        let mut next: HashMap<[u32; 4], Rational> = HashMap::with_capacity(dist.len() * 2);
        for (counts, prob) in &dist {
            for (cell, p) in cells.as_array().iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let mut c = *counts;
                c[cell] += 1;
                let entry = next.entry(c).or_insert_with(Rational::zero);
                *entry += prob * *p;
            }
        }
        dist = next;
    }
    let mut probs = vec![Rational::zero(); space.len()];
    for (counts, prob) in dist {
        let table = ContingencyTable::new(counts[0], counts[1], counts[2], counts[3])?;
        probs[space.index_of(&table)?] = prob;
    }
    Ok(TableDistribution { space, probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn tb(x: u32, y: u32, z: u32, t: u32) -> ContingencyTable {
        ContingencyTable::new(x, y, z, t).unwrap()
    }

    #[test]
    fn state_rows() {
        let theta = ratio(9, 10);
        let row = state_probs(StateOfNature::PQ, &theta).unwrap();
        assert_eq!(row.p_x, ratio(81, 100));
        assert_eq!(row.p_y, ratio(9, 100));
        assert_eq!(row.p_z, ratio(9, 100));
        assert_eq!(row.p_t, ratio(1, 100));

        // at theta = 1/2 every state collapses to the uniform row
        let half = ratio(1, 2);
        for state in StateOfNature::ALL {
            let row = state_probs(state, &half).unwrap();
            assert!(row.as_array().iter().all(|p| **p == ratio(1, 4)));
        }

        // the two mixed states are transposes of each other
        let a = state_probs(StateOfNature::PNotQ, &theta).unwrap();
        let b = state_probs(StateOfNature::NotPQ, &theta).unwrap();
        assert_eq!(a, b.transposed());
        // and PnotQ relates to PQ by swapping x<->y and z<->t
        let pq = state_probs(StateOfNature::PQ, &theta).unwrap();
        assert_eq!(a.p_x, pq.p_y);
        assert_eq!(a.p_y, pq.p_x);
        assert_eq!(a.p_z, pq.p_t);
        assert_eq!(a.p_t, pq.p_z);
    }

    #[test]
    fn theta_bounds() {
        assert!(state_probs(StateOfNature::PQ, &ratio(1, 1)).is_err());
        assert!(state_probs(StateOfNature::PQ, &ratio(0, 1)).is_err());
        assert!(state_probs(StateOfNature::PQ, &ratio(3, 2)).is_err());
    }

    #[test]
    fn pmf_values() {
        let theta = ratio(9, 10);
        let cells = state_probs(StateOfNature::PQ, &theta).unwrap();
        // unanimity: theta^(2n)
        assert_eq!(table_pmf(&tb(3, 0, 0, 0), &cells), ratio(531441, 1_000_000));
        // the paradox table: 6 * theta^4 * (1-theta)^2
        assert_eq!(table_pmf(&tb(1, 1, 1, 0), &cells), ratio(39366, 1_000_000));
    }

    #[test]
    fn distribution_normalises() {
        let model = CompetenceModel::homogeneous(ratio(7, 10));
        for state in StateOfNature::ALL {
            let d = table_distribution(7, &model, state).unwrap();
            assert_eq!(d.total(), Rational::one());
        }
    }

    #[test]
    fn pmf_normalises_for_any_cell_vector() {
        // not tied to a competence value at all
        let p = CellProbabilities::new(ratio(1, 3), ratio(1, 6), ratio(1, 4), ratio(1, 4)).unwrap();
        let space = TableSpace::new(7).unwrap();
        let total = space
            .iter()
            .fold(Rational::zero(), |acc, t| acc + table_pmf(t, &p));
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn per_voter_equal_thetas_reduce_to_homogeneous() {
        // the convolution path must reproduce the multinomial path exactly
        let theta = ratio(3, 4);
        for n in [3u32, 5, 7, 11] {
            let homo = table_distribution(
                n,
                &CompetenceModel::homogeneous(theta.clone()),
                StateOfNature::PQ,
            )
            .unwrap();
            let per = table_distribution(
                n,
                &CompetenceModel::per_voter(vec![theta.clone(); n as usize]),
                StateOfNature::PQ,
            )
            .unwrap();
            assert_eq!(homo.probs(), per.probs(), "n={n}");
        }
    }

    #[test]
    fn conditional_row_for_dependent_premises() {
        let c = ConditionalCompetence {
            theta_p: ProbabilityValue(ratio(8, 10)),
            theta_q_given_p: ProbabilityValue(ratio(9, 10)),
            theta_q_given_notp: ProbabilityValue(ratio(5, 10)),
        };
        let row = conditional_probs(StateOfNature::PQ, &c).unwrap();
        assert_eq!(row.p_x, ratio(72, 100));
        assert_eq!(row.p_y, ratio(8, 100));
        assert_eq!(row.p_z, ratio(10, 100));
        assert_eq!(row.p_t, ratio(10, 100));

        // with all three competences equal the model collapses to the
        // independent-premises row
        let c = ConditionalCompetence {
            theta_p: ProbabilityValue(ratio(7, 10)),
            theta_q_given_p: ProbabilityValue(ratio(7, 10)),
            theta_q_given_notp: ProbabilityValue(ratio(7, 10)),
        };
        for state in StateOfNature::ALL {
            assert_eq!(
                conditional_probs(state, &c).unwrap(),
                state_probs(state, &ratio(7, 10)).unwrap()
            );
        }
    }

    #[test]
    fn mixed_committee_matches_profile_enumeration() {
        // brute force over all 4^3 voter profiles
        let thetas = vec![ratio(6, 10), ratio(7, 10), ratio(8, 10)];
        let model = CompetenceModel::per_voter(thetas.clone());
        let dist = table_distribution(3, &model, StateOfNature::PQ).unwrap();
        assert_eq!(dist.total(), Rational::one());

        let voters = model.voter_cells(3, StateOfNature::PQ).unwrap();
        let space = TableSpace::new(3).unwrap();
        let mut expect = vec![Rational::zero(); space.len()];
        for profile in 0..(4u32.pow(3)) {
            let mut counts = [0u32; 4];
            let mut prob = Rational::one();
            let mut code = profile;
            for cells in voters.iter() {
                let cell = (code % 4) as usize;
                code /= 4;
                counts[cell] += 1;
                prob *= cells.as_array()[cell];
            }
            let t = ContingencyTable::new(counts[0], counts[1], counts[2], counts[3]).unwrap();
            expect[space.index_of(&t).unwrap()] += prob;
        }
        assert_eq!(dist.probs(), &expect[..]);
    }

    #[test]
    fn state_symmetry_of_distributions() {
        // distribution under PnotQ = transpose-pushforward of notPQ
        let model = CompetenceModel::per_voter(vec![ratio(6, 10), ratio(7, 10), ratio(8, 10)]);
        let a = table_distribution(3, &model, StateOfNature::PNotQ).unwrap();
        let b = table_distribution(3, &model, StateOfNature::NotPQ).unwrap();
        for t in a.space().tables() {
            assert_eq!(a.prob(t).unwrap(), b.prob(&t.transposed()).unwrap());
        }
    }

    #[test]
    fn model_json_forms() {
        let m = CompetenceModel::from_json(r#"{"homogeneous": 0.75}"#, 5).unwrap();
        assert_eq!(m.homogeneous_theta(), Some(&ratio(3, 4)));

        let m = CompetenceModel::from_json(r#"{"per_voter": [0.6, 0.7, 0.8]}"#, 3).unwrap();
        match &m {
            CompetenceModel::PerVoter(v) => assert_eq!(v[0].0, ratio(3, 5)),
            other => panic!("unexpected {other:?}"),
        }

        let m = CompetenceModel::from_json(
            r#"{"conditional": {"theta_p": 0.8, "theta_q_given_p": 0.9, "theta_q_given_notp": 0.5}}"#,
            3,
        )
        .unwrap();
        match &m {
            CompetenceModel::Conditional(v) => assert_eq!(v.len(), 3),
            other => panic!("unexpected {other:?}"),
        }

        let err = CompetenceModel::from_json(r#"{"correlated": {}}"#, 3);
        assert!(matches!(err, Err(Error::Capability(_))));
    }

    #[test]
    fn voter_count_mismatch() {
        let model = CompetenceModel::per_voter(vec![ratio(3, 5); 4]);
        assert!(table_distribution(5, &model, StateOfNature::PQ).is_err());
    }
}
