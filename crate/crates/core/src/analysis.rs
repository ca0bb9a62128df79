//! Higher-level analyses: the weight threshold D(theta) at which two rules
//! swap under the weighted-area criterion, its inverse C(w), weight-order
//! intervals, minimum committee sizes, and paradox probabilities.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{CompetenceModel, StateOfNature};
use crate::numeric::{ratio, Rational};
use crate::rates::{
    acceptance_probability, aot_of, false_positive_rate, true_positive_rate, waot_of,
    RatePolynomial,
};
use crate::rules::{AcceptSet, BuiltinRule, DecisionRule};
use crate::tables::{check_committee_size, TableSpace};

/// Default scan cap for [`min_committee_size`]; far past any committee
/// size a desk-scale analysis reaches.
pub const DEFAULT_SIZE_CAP: u32 = 501;

/// The crossing curve of a nested rule pair under the WAOT criterion.
///
/// For a fixed competence theta the weighted areas of the two rules cross at
/// a unique weight D(theta) = A(theta) / (A(theta) + B(theta)), where A and
/// B are the TPR and FPR differences (both positive on (1/2, 1)): below D
/// the stronger rule wins, above it the weaker one does.
pub struct ThresholdCurve {
    n: u32,
    high: BuiltinRule,
    low: BuiltinRule,
    a_poly: RatePolynomial,
    b_poly: RatePolynomial,
}

impl ThresholdCurve {
    /// Build the curve for a pointwise-comparable pair with `high` above
    /// `low`. Pairs that coincide as functions (path-by-path and
    /// case-by-case below n = 7) are refused.
    pub fn new(n: u32, high: BuiltinRule, low: BuiltinRule) -> Result<Self> {
        check_committee_size(n)?;
        let space = TableSpace::new(n)?;
        let high_rule = DecisionRule::builtin(n, high)?;
        let low_rule = DecisionRule::builtin(n, low)?;
        let high_set = high_rule.accept_set(&space)?;
        let low_set = low_rule.accept_set(&space)?;
        if !low_set.is_subset_of(&high_set) {
            return Err(Error::domain(format!(
                "{} does not dominate {} pointwise",
                high.label(),
                low.label()
            )));
        }
        let mut diff = AcceptSet::empty(&space);
        for i in high_set.iter_indices() {
            if !low_set.contains(i) {
                diff.insert(i);
            }
        }
        if diff.is_empty() {
            return Err(Error::capability(format!(
                "rules {} and {} coincide for n = {n}; their crossing curve is undefined",
                high.label(),
                low.label()
            )));
        }
        let a_poly = RatePolynomial::from_accept_set(&space, &diff, StateOfNature::PQ);
        let b_poly = RatePolynomial::from_accept_set(&space, &diff, StateOfNature::PNotQ);
        Ok(ThresholdCurve {
            n,
            high,
            low,
            a_poly,
            b_poly,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn pair(&self) -> (BuiltinRule, BuiltinRule) {
        (self.high, self.low)
    }

    pub fn tpr_difference(&self) -> &RatePolynomial {
        &self.a_poly
    }

    pub fn fpr_difference(&self) -> &RatePolynomial {
        &self.b_poly
    }

    /// D(theta) for theta in [1/2, 1). The value at exactly 1/2 is the
    /// continuous extension: A and B agree there, giving 1/2.
    pub fn weight_threshold(&self, theta: &Rational) -> Result<Rational> {
        let half = ratio(1, 2);
        if theta < &half || theta >= &Rational::one() {
            return Err(Error::domain(format!(
                "competence must lie in [1/2, 1), got {}",
                crate::numeric::exact_string(theta)
            )));
        }
        if theta == &half {
            return Ok(half);
        }
        let a = self.a_poly.eval(theta);
        let b = self.b_poly.eval(theta);
        let denom = &a + &b;
        debug_assert!(denom > Rational::zero());
        Ok(a / denom)
    }

    /// Largest competence in (1/2, 1) where D crosses the weight `w`:
    /// above it the stronger rule has the greater weighted area. Located by
    /// a descending grid scan (step 1/1000) and exact bisection to an
    /// absolute tolerance of 1e-10. No monotonicity of D is assumed.
    pub fn competence_threshold(&self, w: &Rational) -> Result<Rational> {
        if w <= &ratio(1, 2) || w >= &Rational::one() {
            return Err(Error::domain(format!(
                "weight must lie strictly between 1/2 and 1 (below 1/2 the stronger rule always wins), got {}",
                crate::numeric::exact_string(w)
            )));
        }
        let step = ratio(1, 1000);
        let mut hi: Option<Rational> = None;
        for i in (501..=999).rev() {
            let theta = ratio(i, 1000);
            let d = self.weight_threshold(&theta)?;
            if d == *w {
                return Ok(theta);
            }
            if d < *w {
                let hi = hi.unwrap_or_else(|| &theta + &step);
                return Ok(self.bisect(theta, hi, w));
            }
            hi = Some(theta);
        }
        // D tends to 1/2 near 1/2, so the crossing sits below the grid.
        let lo = ratio(1, 2);
        let hi = hi.unwrap_or_else(|| ratio(501, 1000));
        Ok(self.bisect(lo, hi, w))
    }

    /// Exact bisection on the sign of D - w; keeps D(hi) >= w > D(lo).
    fn bisect(&self, mut lo: Rational, mut hi: Rational, w: &Rational) -> Rational {
        let tol = Rational::new(1.into(), num_bigint::BigInt::from(10u64.pow(10)));
        let two = ratio(2, 1);
        while &hi - &lo > tol {
            let mid = (&lo + &hi) / &two;
            let d = self
                .weight_threshold(&mid)
                .expect("bisection stays inside (1/2, 1)");
            if d >= *w {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (&lo + &hi) / two
    }

    /// Scan D on a uniform grid and report any strictly decreasing steps,
    /// as evidence on whether D is increasing (an open conjecture that the
    /// analyses here deliberately do not rely on).
    pub fn monotonicity_violations(&self, steps: u32) -> Result<Vec<(Rational, Rational)>> {
        let mut out = Vec::new();
        let mut prev: Option<(Rational, Rational)> = None;
        for i in 1..steps {
            let theta = ratio(1, 2) + Rational::new(i.into(), (2 * steps).into());
            if theta >= Rational::one() {
                break;
            }
            let d = self.weight_threshold(&theta)?;
            if let Some((ptheta, pd)) = &prev {
                if &d < pd {
                    out.push((ptheta.clone(), theta.clone()));
                }
            }
            prev = Some((theta, d));
        }
        Ok(out)
    }
}

/// Free-function forms of the [`ThresholdCurve`] queries.
pub fn weight_threshold_d(curve: &ThresholdCurve, theta: &Rational) -> Result<Rational> {
    curve.weight_threshold(theta)
}

pub fn competence_threshold_c(curve: &ThresholdCurve, w: &Rational) -> Result<Rational> {
    curve.competence_threshold(w)
}

/// Ranking of the three majority rules by WAOT, worst first; rules with
/// exactly equal weighted area share a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    groups: Vec<Vec<BuiltinRule>>,
}

impl Ranking {
    pub fn groups(&self) -> &[Vec<BuiltinRule>] {
        &self.groups
    }
}

impl std::fmt::Display for Ranking {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for group in &self.groups {
            if !first {
                write!(f, "<")?;
            }
            first = false;
            let labels: Vec<&str> = group.iter().map(|r| r.short_label()).collect();
            write!(f, "{}", labels.join("="))?;
        }
        Ok(())
    }
}

/// One maximal weight interval on which the WAOT order of the three rules
/// is constant.
#[derive(Clone, Debug)]
pub struct WeightInterval {
    pub lower: Rational,
    pub upper: Rational,
    pub ranking: Ranking,
}

// Weakest rule first, so stable sorting leaves tied rules listed in
// pointwise order (R3 before R2 before R1).
const THREE_RULES: [BuiltinRule; 3] = [
    BuiltinRule::CaseByCase,
    BuiltinRule::PathByPath,
    BuiltinRule::IssueByIssue,
];

fn builtin_rates(n: u32, theta: &Rational, kind: BuiltinRule) -> Result<(Rational, Rational)> {
    let model = CompetenceModel::homogeneous(theta.clone());
    let rule = DecisionRule::builtin(n, kind)?;
    Ok((
        true_positive_rate(n, &model, &rule)?,
        false_positive_rate(n, &model, &rule)?,
    ))
}

/// Partition (0, 1) into the maximal weight intervals with constant WAOT
/// ranking of the three majority rules. Breakpoints are the pairwise
/// crossing weights D(theta); rankings are read off at interval midpoints
/// with exact arithmetic, so ties are honest.
pub fn weight_order_intervals(n: u32, theta: &Rational) -> Result<Vec<WeightInterval>> {
    check_committee_size(n)?;
    if theta <= &ratio(1, 2) || theta >= &Rational::one() {
        return Err(Error::domain(
            "weight-order intervals need 1/2 < theta < 1".to_string(),
        ));
    }
    let mut breakpoints: Vec<Rational> = Vec::new();
    for (high, low) in [
        (BuiltinRule::IssueByIssue, BuiltinRule::PathByPath),
        (BuiltinRule::IssueByIssue, BuiltinRule::CaseByCase),
        (BuiltinRule::PathByPath, BuiltinRule::CaseByCase),
    ] {
        match ThresholdCurve::new(n, high, low) {
            Ok(curve) => breakpoints.push(curve.weight_threshold(theta)?),
            // coinciding pair: no crossing to record
            Err(Error::Capability(_)) => {}
            Err(e) => return Err(e),
        }
    }
    breakpoints.sort();
    breakpoints.dedup();

    let rates: Vec<(BuiltinRule, Rational, Rational)> = THREE_RULES
        .iter()
        .map(|kind| builtin_rates(n, theta, *kind).map(|(tpr, fpr)| (*kind, tpr, fpr)))
        .collect::<Result<_>>()?;

    let mut bounds = vec![Rational::zero()];
    bounds.extend(breakpoints);
    bounds.push(Rational::one());

    let mut out = Vec::new();
    for pair in bounds.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        let mid = (lower + upper) / ratio(2, 1);
        let mut scored: Vec<(BuiltinRule, Rational)> = rates
            .iter()
            .map(|(kind, tpr, fpr)| (*kind, waot_of(tpr, fpr, &mid)))
            .collect();
        scored.sort_by(|a, b| a.1.cmp(&b.1));
        let mut groups: Vec<Vec<BuiltinRule>> = Vec::new();
        let mut last: Option<Rational> = None;
        for (kind, value) in scored {
            if last.as_ref() == Some(&value) {
                groups.last_mut().unwrap().push(kind);
            } else {
                groups.push(vec![kind]);
                last = Some(value);
            }
        }
        out.push(WeightInterval {
            lower: lower.clone(),
            upper: upper.clone(),
            ranking: Ranking { groups },
        });
    }
    Ok(out)
}

/// Which quality measure [`min_committee_size`] thresholds on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SizeMetric {
    Tpr,
    Tnr,
    Aot,
}

impl SizeMetric {
    pub fn label(&self) -> &'static str {
        match self {
            SizeMetric::Tpr => "TPR",
            SizeMetric::Tnr => "TNR",
            SizeMetric::Aot => "AOT",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "TPR" | "tpr" => Ok(SizeMetric::Tpr),
            "TNR" | "tnr" => Ok(SizeMetric::Tnr),
            "AOT" | "aot" => Ok(SizeMetric::Aot),
            other => Err(Error::domain(format!("unknown metric {other:?}"))),
        }
    }
}

/// Smallest odd committee size whose metric reaches the threshold, scanning
/// upward from 3. Sizes past `cap` are reported as not attained rather than
/// searched forever.
pub fn min_committee_size(
    rule: BuiltinRule,
    theta: &Rational,
    metric: SizeMetric,
    threshold: &Rational,
    cap: u32,
) -> Result<u32> {
    if theta <= &ratio(1, 2) || theta >= &Rational::one() {
        return Err(Error::domain(
            "minimum-size search needs 1/2 < theta < 1".to_string(),
        ));
    }
    let limit = match metric {
        SizeMetric::Tpr | SizeMetric::Tnr => Rational::one(),
        SizeMetric::Aot => ratio(1, 2),
    };
    if threshold >= &limit {
        return Err(Error::domain(format!(
            "threshold {} is not attainable for {}",
            crate::numeric::exact_string(threshold),
            metric.label()
        )));
    }
    let mut n = 3u32;
    while n <= cap {
        let model = CompetenceModel::homogeneous(theta.clone());
        let rule_n = DecisionRule::builtin(n, rule)?;
        // only evaluate the states the metric actually needs
        let value = match metric {
            SizeMetric::Tpr => true_positive_rate(n, &model, &rule_n)?,
            SizeMetric::Tnr => Rational::one() - false_positive_rate(n, &model, &rule_n)?,
            SizeMetric::Aot => aot_of(
                &true_positive_rate(n, &model, &rule_n)?,
                &false_positive_rate(n, &model, &rule_n)?,
            ),
        };
        if value >= *threshold {
            return Ok(n);
        }
        n += 2;
    }
    Err(Error::NotAttained {
        what: format!(
            "{} >= {} for rule {}",
            metric.label(),
            crate::numeric::exact_string(threshold),
            rule.label()
        ),
        cap,
    })
}

/// Probability, under the given state, of drawing a table on which the two
/// rules disagree.
pub fn paradox_probability(
    n: u32,
    model: &CompetenceModel,
    state: StateOfNature,
    rule_a: &DecisionRule,
    rule_b: &DecisionRule,
) -> Result<Rational> {
    if rule_a.n() != rule_b.n() {
        return Err(Error::domain(format!(
            "rules have different committee sizes: {} vs {}",
            rule_a.n(),
            rule_b.n()
        )));
    }
    let space = TableSpace::new(n)?;
    let sa = rule_a.accept_set(&space)?;
    let sb = rule_b.accept_set(&space)?;
    let mut diff = AcceptSet::empty(&space);
    for i in 0..space.len() {
        if sa.contains(i) != sb.contains(i) {
            diff.insert(i);
        }
    }
    let disagree = DecisionRule::custom(&space, diff)?;
    acceptance_probability(n, model, &disagree, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{display_4dp, parse_exact};

    #[test]
    fn d_is_theta_for_smallest_committee() {
        let curve =
            ThresholdCurve::new(3, BuiltinRule::IssueByIssue, BuiltinRule::PathByPath).unwrap();
        let theta = ratio(7, 10);
        assert_eq!(curve.weight_threshold(&theta).unwrap(), theta);
        assert_eq!(weight_threshold_d(&curve, &theta).unwrap(), theta);
        assert_eq!(
            competence_threshold_c(&curve, &ratio(4, 5)).unwrap(),
            ratio(4, 5)
        );
        // continuous extension at the boundary
        assert_eq!(curve.weight_threshold(&ratio(1, 2)).unwrap(), ratio(1, 2));
        assert!(curve.weight_threshold(&ratio(2, 5)).is_err());
    }

    #[test]
    fn crossing_weights_for_eleven_members() {
        let theta = ratio(6, 10);
        let d12 = ThresholdCurve::new(11, BuiltinRule::IssueByIssue, BuiltinRule::PathByPath)
            .unwrap()
            .weight_threshold(&theta)
            .unwrap();
        assert_eq!(display_4dp(&d12), "0.6930");
        let d23 = ThresholdCurve::new(11, BuiltinRule::PathByPath, BuiltinRule::CaseByCase)
            .unwrap()
            .weight_threshold(&theta)
            .unwrap();
        assert_eq!(display_4dp(&d23), "0.8215");
    }

    #[test]
    fn coinciding_pair_is_refused() {
        let err = ThresholdCurve::new(5, BuiltinRule::PathByPath, BuiltinRule::CaseByCase);
        assert!(matches!(err, Err(Error::Capability(_))));
    }

    #[test]
    fn inverse_threshold() {
        let curve =
            ThresholdCurve::new(11, BuiltinRule::IssueByIssue, BuiltinRule::PathByPath).unwrap();
        let c = curve.competence_threshold(&ratio(3, 4)).unwrap();
        let diff = &c - parse_exact("0.6374").unwrap();
        assert!(diff < ratio(5, 100_000) && diff > ratio(-5, 100_000));

        // inverse consistency: C(D(0.60)) = 0.60 up to grid resolution
        let d = curve.weight_threshold(&ratio(6, 10)).unwrap();
        let back = curve.competence_threshold(&d).unwrap();
        let err = &back - ratio(6, 10);
        assert!(err < ratio(1, 1000) && err > ratio(-1, 1000));

        // the smallest committee pins C(w) = w on grid points
        let curve3 =
            ThresholdCurve::new(3, BuiltinRule::IssueByIssue, BuiltinRule::PathByPath).unwrap();
        assert_eq!(
            curve3.competence_threshold(&ratio(4, 5)).unwrap(),
            ratio(4, 5)
        );

        assert!(curve.competence_threshold(&ratio(1, 2)).is_err());
        assert!(curve.competence_threshold(&ratio(2, 5)).is_err());
    }

    #[test]
    fn interval_partition_for_eleven_members() {
        let intervals = weight_order_intervals(11, &ratio(6, 10)).unwrap();
        assert_eq!(intervals.len(), 4);
        let labels: Vec<String> = intervals.iter().map(|i| i.ranking.to_string()).collect();
        assert_eq!(labels, ["R3<R2<R1", "R3<R1<R2", "R1<R3<R2", "R1<R2<R3"]);
        assert_eq!(display_4dp(&intervals[0].upper), "0.6930");
        assert_eq!(display_4dp(&intervals[1].upper), "0.7184");
        assert_eq!(display_4dp(&intervals[2].upper), "0.8215");
    }

    #[test]
    fn interval_partition_with_coinciding_rules() {
        let theta = ratio(7, 10);
        let intervals = weight_order_intervals(3, &theta).unwrap();
        assert_eq!(intervals.len(), 2);
        assert_eq!(intervals[0].upper, theta);
        assert_eq!(intervals[0].ranking.to_string(), "R3=R2<R1");
        assert_eq!(intervals[1].ranking.to_string(), "R1<R3=R2");
    }

    #[test]
    fn small_weights_preserve_the_area_ordering() {
        // for w < 1/2 the weighted ranking must agree with the plain AOT
        // ranking everywhere
        for n in [3u32, 7, 11] {
            for theta in [ratio(55, 100), ratio(3, 4), ratio(95, 100)] {
                for w in [ratio(1, 10), ratio(3, 10), ratio(49, 100)] {
                    let waot = |kind| {
                        let (tpr, fpr) = builtin_rates(n, &theta, kind).unwrap();
                        waot_of(&tpr, &fpr, &w)
                    };
                    let w1 = waot(BuiltinRule::IssueByIssue);
                    let w2 = waot(BuiltinRule::PathByPath);
                    let w3 = waot(BuiltinRule::CaseByCase);
                    assert!(w3 <= w2 && w2 < w1, "n={n}");
                    if n >= 7 {
                        assert!(w3 < w2, "strictness at n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn minimum_sizes_from_the_size_table() {
        let theta = ratio(6, 10);
        assert_eq!(
            min_committee_size(
                BuiltinRule::IssueByIssue,
                &theta,
                SizeMetric::Tpr,
                &ratio(95, 100),
                DEFAULT_SIZE_CAP
            )
            .unwrap(),
            95
        );
        assert_eq!(
            min_committee_size(
                BuiltinRule::IssueByIssue,
                &theta,
                SizeMetric::Tnr,
                &ratio(95, 100),
                DEFAULT_SIZE_CAP
            )
            .unwrap(),
            65
        );
        assert_eq!(
            min_committee_size(
                BuiltinRule::IssueByIssue,
                &ratio(8, 10),
                SizeMetric::Aot,
                &ratio(45, 100),
                DEFAULT_SIZE_CAP
            )
            .unwrap(),
            7
        );
        // trivial threshold
        assert_eq!(
            min_committee_size(
                BuiltinRule::IssueByIssue,
                &ratio(9, 10),
                SizeMetric::Tpr,
                &Rational::zero(),
                DEFAULT_SIZE_CAP
            )
            .unwrap(),
            3
        );
    }

    #[test]
    fn size_search_caps_out() {
        let err = min_committee_size(
            BuiltinRule::IssueByIssue,
            &ratio(51, 100),
            SizeMetric::Tpr,
            &ratio(95, 100),
            21,
        );
        match err {
            Err(Error::NotAttained { cap, .. }) => assert_eq!(cap, 21),
            other => panic!("expected NotAttained, got {other:?}"),
        }
        assert!(min_committee_size(
            BuiltinRule::IssueByIssue,
            &ratio(6, 10),
            SizeMetric::Tpr,
            &Rational::one(),
            21
        )
        .is_err());
    }

    #[test]
    fn paradox_probabilities() {
        let model = CompetenceModel::homogeneous(ratio(9, 10));
        let r1 = DecisionRule::builtin(3, BuiltinRule::IssueByIssue).unwrap();
        let r3 = DecisionRule::builtin(3, BuiltinRule::CaseByCase).unwrap();
        let p = paradox_probability(3, &model, StateOfNature::PQ, &r1, &r3).unwrap();
        assert_eq!(p, ratio(39366, 1_000_000));

        // boundary theta = 1/2 is allowed here: uniform cells
        let model = CompetenceModel::homogeneous(ratio(1, 2));
        let p = paradox_probability(3, &model, StateOfNature::PQ, &r1, &r3).unwrap();
        assert_eq!(p, ratio(6, 64));

        let model = CompetenceModel::homogeneous(ratio(7, 10));
        let r2 = DecisionRule::builtin(5, BuiltinRule::PathByPath).unwrap();
        let r3 = DecisionRule::builtin(5, BuiltinRule::CaseByCase).unwrap();
        for state in StateOfNature::ALL {
            assert_eq!(
                paradox_probability(5, &model, state, &r2, &r3).unwrap(),
                Rational::zero()
            );
        }
    }
}
