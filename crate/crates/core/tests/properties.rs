//! Property tests for the structural invariants.

use num_traits::One;
use proptest::prelude::*;

use paradox_core::numeric::Rational;
use paradox_core::rates::RatePolynomial;
use paradox_core::rules::AcceptSet;
use paradox_core::{
    table_distribution, table_leq, CompetenceModel, ContingencyTable, StateOfNature, TableSpace,
};

fn arb_table(n: u32) -> impl Strategy<Value = ContingencyTable> {
    // split n into four parts with two cut points
    (0..=n, 0..=n, 0..=n).prop_map(move |(a, b, c)| {
        let mut cuts = [a, b, c];
        cuts.sort_unstable();
        ContingencyTable::new(cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], n - cuts[2]).unwrap()
    })
}

fn arb_theta() -> impl Strategy<Value = Rational> {
    // rationals strictly inside (0, 1)
    (1i64..999, 1000i64..2000).prop_map(|(num, den)| Rational::new(num.into(), den.into()))
}

proptest! {
    #[test]
    fn transpose_involution_and_order_compat(a in arb_table(9), b in arb_table(9)) {
        prop_assert_eq!(a.transposed().transposed(), a);
        prop_assert_eq!(
            table_leq(&a, &b).unwrap(),
            table_leq(&a.transposed(), &b.transposed()).unwrap()
        );
    }

    #[test]
    fn table_serde_round_trip(a in arb_table(7)) {
        let json = serde_json::to_string(&a).unwrap();
        let back: ContingencyTable = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(a, back);
    }

    #[test]
    fn polynomial_bases_agree(bits in proptest::collection::vec(any::<bool>(), 56), theta in arb_theta()) {
        let space = TableSpace::new(5).unwrap();
        let mut set = AcceptSet::empty(&space);
        for (i, b) in bits.iter().enumerate() {
            if *b {
                set.insert(i);
            }
        }
        for state in StateOfNature::ALL {
            let poly = RatePolynomial::from_accept_set(&space, &set, state);
            prop_assert_eq!(poly.eval(&theta), poly.eval_expanded(&theta));
            let v = poly.eval(&theta);
            prop_assert!(v >= Rational::new(0.into(), 1.into()));
            prop_assert!(v <= Rational::one());
        }
    }

    #[test]
    fn distributions_always_normalise(theta in arb_theta()) {
        let model = CompetenceModel::homogeneous(theta);
        let dist = table_distribution(5, &model, StateOfNature::NotPQ).unwrap();
        prop_assert_eq!(dist.total(), Rational::one());
    }

    #[test]
    fn mixed_thetas_normalise(a in arb_theta(), b in arb_theta(), c in arb_theta()) {
        let model = CompetenceModel::per_voter(vec![a, b, c]);
        let dist = table_distribution(3, &model, StateOfNature::PQ).unwrap();
        prop_assert_eq!(dist.total(), Rational::one());
    }
}
