//! ROC-style quality measures of decision rules: acceptance probabilities
//! per state, TPR/FPR/FNR/TNR, triangle areas, and exact rate polynomials
//! in the homogeneous competence.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{table_distribution, CompetenceModel, StateOfNature};
use crate::numeric::{multinomial, Rational};
use crate::rules::{AcceptSet, DecisionRule};
use crate::tables::{ContingencyTable, TableSpace};

/// A rate under homogeneous competence, as an exact polynomial.
///
/// Stored in the mixed basis: `terms[e]` is the integer coefficient of
/// `theta^e * (1-theta)^(2n-e)`. Each accepted table contributes its
/// multinomial coefficient at the exponent determined by the state's cell
/// probabilities, so evaluation at any theta reproduces the set-summed rate
/// exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatePolynomial {
    n: u32,
    mixed: Vec<BigInt>,
}

/// Exponent of theta contributed by one table: under the all-true state the
/// conjunction cell carries theta^2 and the single-premise cells theta each,
/// and correspondingly for the other states.
fn mixed_exponent(state: StateOfNature, t: &ContingencyTable) -> u32 {
    let [x, y, z, tt] = t.counts();
    match state {
        StateOfNature::PQ => 2 * x + y + z,
        StateOfNature::PNotQ => x + 2 * y + tt,
        StateOfNature::NotPQ => x + 2 * z + tt,
        StateOfNature::NotPNotQ => y + z + 2 * tt,
    }
}

impl RatePolynomial {
    /// Sum the mixed-basis terms of every table in the accept set.
    pub fn from_accept_set(space: &TableSpace, set: &AcceptSet, state: StateOfNature) -> Self {
        let n = space.n();
        let mut mixed = vec![BigInt::zero(); (2 * n + 1) as usize];
        for i in set.iter_indices() {
            let t = space.get(i);
            let e = mixed_exponent(state, &t) as usize;
            mixed[e] += BigInt::from(multinomial(&t.counts()));
        }
        RatePolynomial { n, mixed }
    }

    pub fn for_rule(space: &TableSpace, rule: &DecisionRule, state: StateOfNature) -> Result<Self> {
        let set = rule.accept_set(space)?;
        Ok(RatePolynomial::from_accept_set(space, &set, state))
    }

    /// Termwise difference; panics on mismatched committee sizes.
    pub fn difference(&self, other: &RatePolynomial) -> RatePolynomial {
        assert_eq!(self.n, other.n);
        let mixed = self
            .mixed
            .iter()
            .zip(&other.mixed)
            .map(|(a, b)| a - b)
            .collect();
        RatePolynomial { n: self.n, mixed }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.mixed.iter().all(|c| c.is_zero())
    }

    /// Mixed-basis coefficients, index = exponent of theta.
    pub fn mixed_coefficients(&self) -> &[BigInt] {
        &self.mixed
    }

    /// Largest exponent with a non-zero mixed coefficient.
    pub fn max_mixed_exponent(&self) -> Option<u32> {
        self.mixed
            .iter()
            .rposition(|c| !c.is_zero())
            .map(|e| e as u32)
    }

    /// Exact evaluation at a rational theta. With theta = p/q the value is
    /// `sum_e c_e p^e (q-p)^(2n-e) / q^(2n)`: one big-int dot product and a
    /// single final division.
    pub fn eval(&self, theta: &Rational) -> Rational {
        let deg = 2 * self.n as usize;
        let p = theta.numer().clone();
        let q = theta.denom().clone();
        let r = &q - &p;
        let mut p_pow = vec![BigInt::one(); deg + 1];
        let mut r_pow = vec![BigInt::one(); deg + 1];
        for i in 1..=deg {
            p_pow[i] = &p_pow[i - 1] * &p;
            r_pow[i] = &r_pow[i - 1] * &r;
        }
        let mut numer = BigInt::zero();
        for (e, c) in self.mixed.iter().enumerate() {
            if !c.is_zero() {
                numer += c * &p_pow[e] * &r_pow[deg - e];
            }
        }
        let mut denom = BigInt::one();
        for _ in 0..deg {
            denom *= &q;
        }
        Rational::new(numer, denom)
    }

    /// Labeled floating-point fast path; agrees with [`Self::eval`] to
    /// ~1e-12 for desk-scale committees.
    pub fn eval_f64(&self, theta: f64) -> f64 {
        let deg = 2 * self.n as usize;
        let mut acc = 0.0;
        for (e, c) in self.mixed.iter().enumerate() {
            if !c.is_zero() {
                let coef = c.to_f64().unwrap_or(f64::NAN);
                acc += coef * theta.powi(e as i32) * (1.0 - theta).powi((deg - e) as i32);
            }
        }
        acc
    }

    /// Standard-basis coefficients `sum_k a_k theta^k` of the same
    /// polynomial, by binomial expansion of each `(1-theta)^(2n-e)` factor.
    pub fn expanded(&self) -> Vec<BigInt> {
        let deg = 2 * self.n as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (e, c) in self.mixed.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = deg - e;
            for j in 0..=d {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let term = c * BigInt::from(crate::numeric::binomial(d as u64, j as u64)) * sign;
                out[e + j] += term;
            }
        }
        out
    }

    /// Evaluate the expanded form by Horner's method; used to cross-check
    /// that the two bases agree.
    pub fn eval_expanded(&self, theta: &Rational) -> Rational {
        let coeffs = self.expanded();
        let mut acc = Rational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * theta + Rational::from_integer(c.clone());
        }
        acc
    }
}

/// Model-checked constructor: rate polynomials only make sense for the
/// homogeneous model (a single theta).
pub fn rate_polynomial(
    model: &CompetenceModel,
    space: &TableSpace,
    rule: &DecisionRule,
    state: StateOfNature,
) -> Result<RatePolynomial> {
    if model.homogeneous_theta().is_none() {
        return Err(Error::capability(
            "rate polynomials require a homogeneous competence model",
        ));
    }
    RatePolynomial::for_rule(space, rule, state)
}

/// Probability that the rule accepts under the given state of nature.
///
/// This is always a set-summation over the rule's accept set: homogeneous
/// models are summed per mixed-basis exponent and evaluated exactly, other
/// models are summed against the convolved table distribution.
pub fn acceptance_probability(
    n: u32,
    model: &CompetenceModel,
    rule: &DecisionRule,
    state: StateOfNature,
) -> Result<Rational> {
    if rule.n() != n {
        return Err(Error::domain(format!(
            "rule is for committee size {}, asked about {n}",
            rule.n()
        )));
    }
    if let Some(theta) = model.homogeneous_theta() {
        crate::model::state_probs(state, theta)?; // validates theta
        let space = TableSpace::new(n)?;
        let poly = RatePolynomial::for_rule(&space, rule, state)?;
        return Ok(poly.eval(theta));
    }
    let dist = table_distribution(n, model, state)?;
    let set = rule.accept_set(dist.space())?;
    Ok(dist.mass_of(&set))
}

pub fn true_positive_rate(
    n: u32,
    model: &CompetenceModel,
    rule: &DecisionRule,
) -> Result<Rational> {
    acceptance_probability(n, model, rule, StateOfNature::PQ)
}

/// Acceptance probability under each state where the conjunction is false,
/// in the order PnotQ, notPQ, notPnotQ.
pub fn negative_acceptances(
    n: u32,
    model: &CompetenceModel,
    rule: &DecisionRule,
) -> Result<[Rational; 3]> {
    let mut it = StateOfNature::NEGATIVE
        .iter()
        .map(|s| acceptance_probability(n, model, rule, *s));
    Ok([
        it.next().unwrap()?,
        it.next().unwrap()?,
        it.next().unwrap()?,
    ])
}

/// False positive rate, conservatively the maximum acceptance probability
/// over the three negative states. For the built-in majority rules under
/// symmetric competence the two single-premise states tie for the maximum.
pub fn false_positive_rate(
    n: u32,
    model: &CompetenceModel,
    rule: &DecisionRule,
) -> Result<Rational> {
    let probs = negative_acceptances(n, model, rule)?;
    Ok(probs.into_iter().max().expect("three states"))
}

/// The full panel of quality measures of one rule under one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub tpr: Rational,
    pub fpr: Rational,
    pub fnr: Rational,
    pub tnr: Rational,
    /// (TPR - FPR) / 2, in [-1/2, 1/2].
    pub aot: Rational,
    /// Weighted areas 1/2 - (w*FPR + (1-w)*FNR), one per requested weight.
    pub waot: Vec<(Rational, Rational)>,
}

pub fn aot_of(tpr: &Rational, fpr: &Rational) -> Rational {
    (tpr - fpr) / Rational::from_integer(2.into())
}

pub fn waot_of(tpr: &Rational, fpr: &Rational, w: &Rational) -> Rational {
    let fnr = Rational::one() - tpr;
    Rational::new(BigInt::one(), BigInt::from(2)) - (w * fpr + (Rational::one() - w) * fnr)
}

pub fn metrics(
    n: u32,
    model: &CompetenceModel,
    rule: &DecisionRule,
    weights: &[Rational],
) -> Result<Metrics> {
    for w in weights {
        if w <= &Rational::zero() || w >= &Rational::one() {
            return Err(Error::domain(format!(
                "weight must lie strictly between 0 and 1, got {}",
                crate::numeric::exact_string(w)
            )));
        }
    }
    let tpr = true_positive_rate(n, model, rule)?;
    let fpr = false_positive_rate(n, model, rule)?;
    let fnr = Rational::one() - &tpr;
    let tnr = Rational::one() - &fpr;
    let aot = aot_of(&tpr, &fpr);
    let waot = weights
        .iter()
        .map(|w| (w.clone(), waot_of(&tpr, &fpr, w)))
        .collect();
    Ok(Metrics {
        tpr,
        fpr,
        fnr,
        tnr,
        aot,
        waot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{display_4dp, ratio};
    use crate::rules::BuiltinRule;

    fn homogeneous(num: i64, den: i64) -> CompetenceModel {
        CompetenceModel::homogeneous(ratio(num, den))
    }

    #[test]
    fn printed_rate_values() {
        let model = homogeneous(6, 10);
        let r1 = DecisionRule::builtin(11, BuiltinRule::IssueByIssue).unwrap();
        let tpr = true_positive_rate(11, &model, &r1).unwrap();
        assert_eq!(display_4dp(&tpr), "0.5678");
        let fpr = false_positive_rate(11, &model, &r1).unwrap();
        assert_eq!(display_4dp(&fpr), "0.1857");

        let model = homogeneous(95, 100);
        let tpr = true_positive_rate(11, &model, &r1).unwrap();
        assert_eq!(display_4dp(&tpr), "1.0000");
        assert!(tpr < Rational::one());

        let model = homogeneous(75, 100);
        let r3 = DecisionRule::builtin(11, BuiltinRule::CaseByCase).unwrap();
        let fpr = false_positive_rate(11, &model, &r3).unwrap();
        assert_eq!(display_4dp(&fpr), "0.0084");
    }

    #[test]
    fn constant_rules_bound_the_rates() {
        let model = homogeneous(7, 10);
        let one = DecisionRule::builtin(7, BuiltinRule::ConstantOne).unwrap();
        let zero = DecisionRule::builtin(7, BuiltinRule::ConstantZero).unwrap();
        assert_eq!(
            true_positive_rate(7, &model, &one).unwrap(),
            Rational::one()
        );
        assert_eq!(
            false_positive_rate(7, &model, &zero).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn metrics_identities() {
        let model = homogeneous(8, 10);
        let rule = DecisionRule::builtin(7, BuiltinRule::CaseByCase).unwrap();
        let m = metrics(7, &model, &rule, &[ratio(1, 2), ratio(3, 4)]).unwrap();
        assert_eq!(m.fnr, Rational::one() - &m.tpr);
        assert_eq!(m.tnr, Rational::one() - &m.fpr);
        assert_eq!(m.aot, (&m.tpr - &m.fpr) / ratio(2, 1));
        // waot at w = 1/2 equals aot
        assert_eq!(m.waot[0].1, m.aot);
        assert!(metrics(7, &model, &rule, &[ratio(1, 1)]).is_err());
    }

    #[test]
    fn polynomial_matches_binomial_closed_form() {
        // For the conjoint-majority rule under the all-true state the count
        // of conjunction supporters is Binomial(n, theta^2), so the rate is
        // P{X >= m+1}.
        let space = TableSpace::new(3).unwrap();
        let rule = DecisionRule::builtin(3, BuiltinRule::CaseByCase).unwrap();
        let poly = RatePolynomial::for_rule(&space, &rule, StateOfNature::PQ).unwrap();
        let theta = ratio(9, 10);
        let p = &theta * &theta;
        let q = Rational::one() - &p;
        let expect = ratio(3, 1) * &p * &p * &q + &p * &p * &p;
        assert_eq!(poly.eval(&theta), expect);
        assert_eq!(poly.eval(&Rational::one()), Rational::one());
    }

    #[test]
    fn mixed_and_expanded_agree() {
        let space = TableSpace::new(7).unwrap();
        for kind in [BuiltinRule::IssueByIssue, BuiltinRule::PathByPath] {
            let rule = DecisionRule::builtin(7, kind).unwrap();
            for state in StateOfNature::ALL {
                let poly = RatePolynomial::for_rule(&space, &rule, state).unwrap();
                for theta in [ratio(1, 3), ratio(6, 10), ratio(99, 100)] {
                    assert_eq!(poly.eval(&theta), poly.eval_expanded(&theta));
                }
            }
        }
    }

    #[test]
    fn float_path_tracks_exact_path() {
        for n in [3u32, 9, 15] {
            let space = TableSpace::new(n).unwrap();
            let rule = DecisionRule::builtin(n, BuiltinRule::IssueByIssue).unwrap();
            let poly = RatePolynomial::for_rule(&space, &rule, StateOfNature::PQ).unwrap();
            for theta in [ratio(51, 100), ratio(3, 4), ratio(99, 100)] {
                let exact = crate::numeric::to_f64(&poly.eval(&theta));
                let fast = poly.eval_f64(crate::numeric::to_f64(&theta));
                assert!((exact - fast).abs() < 1e-12, "n={n} diff {}", exact - fast);
            }
        }
    }

    #[test]
    fn rate_polynomial_requires_homogeneous_model() {
        let space = TableSpace::new(3).unwrap();
        let rule = DecisionRule::builtin(3, BuiltinRule::CaseByCase).unwrap();
        let model = CompetenceModel::per_voter(vec![ratio(3, 5); 3]);
        assert!(matches!(
            rate_polynomial(&model, &space, &rule, StateOfNature::PQ),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn rates_inherit_the_rule_order() {
        for n in (3u32..=15).step_by(2) {
            for theta in [ratio(51, 100), ratio(3, 4), ratio(99, 100)] {
                let model = CompetenceModel::homogeneous(theta);
                let rate_pair = |kind| {
                    let rule = DecisionRule::builtin(n, kind).unwrap();
                    (
                        true_positive_rate(n, &model, &rule).unwrap(),
                        false_positive_rate(n, &model, &rule).unwrap(),
                    )
                };
                let (t1, f1) = rate_pair(BuiltinRule::IssueByIssue);
                let (t2, f2) = rate_pair(BuiltinRule::PathByPath);
                let (t3, f3) = rate_pair(BuiltinRule::CaseByCase);
                assert!(t3 <= t2 && t2 <= t1, "TPR order broken at n={n}");
                assert!(f3 <= f2 && f2 <= f1, "FPR order broken at n={n}");
            }
        }
    }

    #[test]
    fn heterogeneous_path_agrees_with_polynomial_path() {
        let theta = ratio(13, 20);
        let r2 = DecisionRule::builtin(5, BuiltinRule::PathByPath).unwrap();
        let homo = homogeneous(13, 20);
        let per = CompetenceModel::per_voter(vec![theta; 5]);
        for state in StateOfNature::ALL {
            assert_eq!(
                acceptance_probability(5, &homo, &r2, state).unwrap(),
                acceptance_probability(5, &per, &r2, state).unwrap()
            );
        }
    }
}
