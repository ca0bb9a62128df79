//! Observational scan of the crossing curves: whether D(theta) is monotone
//! is an open question, and no algorithm in this crate relies on it. This
//! test records the evidence from a fine grid scan; it fails only if the
//! scan itself cannot run.

use paradox_core::{BuiltinRule, ThresholdCurve};

#[test]
fn report_monotonicity_evidence() {
    for n in [5u32, 7, 11, 15] {
        let mut pairs = vec![(BuiltinRule::IssueByIssue, BuiltinRule::PathByPath)];
        if n >= 7 {
            pairs.push((BuiltinRule::PathByPath, BuiltinRule::CaseByCase));
        }
        for (high, low) in pairs {
            let curve = ThresholdCurve::new(n, high, low).unwrap();
            let violations = curve.monotonicity_violations(400).unwrap();
            println!(
                "D monotonicity n={n} pair=({},{}): {} decreasing steps on a 400-point grid",
                high.short_label(),
                low.short_label(),
                violations.len()
            );
            for (a, b) in violations.iter().take(5) {
                println!(
                    "  decrease between theta={} and theta={}",
                    paradox_core::numeric::to_f64(a),
                    paradox_core::numeric::to_f64(b)
                );
            }
        }
    }
}
