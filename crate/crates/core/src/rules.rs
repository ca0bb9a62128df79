//! Decision rules: total maps from contingency tables to accept/reject,
//! the built-in majority rules and their score versions, admissibility
//! checking, and enumeration of all admissible rules for small committees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tables::{check_committee_size, ContingencyTable, TableSpace};

/// Largest committee size for which [`enumerate_admissible`] will run; the
/// rule count explodes combinatorially past this.
pub const ENUMERATION_BOUND: u32 = 7;

/// The built-in rules. `R1`/`R2`/`R3` are the issue-by-issue, path-by-path
/// and case-by-case majority rules; `R0` demands a plurality of conjunction
/// supporters over each other cell separately (and is not admissible).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum BuiltinRule {
    #[serde(rename = "IbyI", alias = "R1")]
    IssueByIssue,
    #[serde(rename = "PbyP", alias = "R2")]
    PathByPath,
    #[serde(rename = "CbyC", alias = "R3")]
    CaseByCase,
    #[serde(rename = "R0")]
    PairwisePlurality,
    #[serde(rename = "constant0")]
    ConstantZero,
    #[serde(rename = "constant1")]
    ConstantOne,
}

impl BuiltinRule {
    /// Decide a single table. The closed forms are the threshold
    /// characterisations: with `n = 2m + 1`,
    ///   R1 accepts iff x > m - min(y, z),
    ///   R2 accepts iff x > m - floor(min(y, z) / 2),
    ///   R3 accepts iff x > m.
    /// They are equivalent to the pairwise majority inequalities
    /// (see `defining_inequalities`, kept as an oracle in tests).
    pub fn decides(&self, a: &ContingencyTable) -> bool {
        let m = i64::from(a.m());
        let [x, y, z, t] = a.counts().map(i64::from);
        match self {
            BuiltinRule::IssueByIssue => x > m - y.min(z),
            BuiltinRule::PathByPath => x > m - y.min(z) / 2,
            BuiltinRule::CaseByCase => x > m,
            BuiltinRule::PairwisePlurality => x > y && x > z && x > t,
            BuiltinRule::ConstantZero => false,
            BuiltinRule::ConstantOne => true,
        }
    }

    /// The majority inequalities of the rule definitions:
    ///   R1: x+y > z+t and x+z > y+t;  R2: x > z+t and x > y+t;
    ///   R3: x > y+z+t.
    /// Must agree with `decides` on every table; tests check this
    /// exhaustively up to n = 15.
    pub fn defining_inequalities(&self, a: &ContingencyTable) -> bool {
        let [x, y, z, t] = a.counts().map(i64::from);
        match self {
            BuiltinRule::IssueByIssue => x + y > z + t && x + z > y + t,
            BuiltinRule::PathByPath => x > z + t && x > y + t,
            BuiltinRule::CaseByCase => x > y + z + t,
            other => other.decides(a),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BuiltinRule::IssueByIssue => "IbyI",
            BuiltinRule::PathByPath => "PbyP",
            BuiltinRule::CaseByCase => "CbyC",
            BuiltinRule::PairwisePlurality => "R0",
            BuiltinRule::ConstantZero => "constant0",
            BuiltinRule::ConstantOne => "constant1",
        }
    }

    /// The `R1`/`R2`/`R3` aliases used in rankings and threshold tables.
    pub fn short_label(&self) -> &'static str {
        match self {
            BuiltinRule::IssueByIssue => "R1",
            BuiltinRule::PathByPath => "R2",
            BuiltinRule::CaseByCase => "R3",
            other => other.label(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "IbyI" | "R1" | "ibyi" => Ok(BuiltinRule::IssueByIssue),
            "PbyP" | "R2" | "pbyp" => Ok(BuiltinRule::PathByPath),
            "CbyC" | "R3" | "cbyc" => Ok(BuiltinRule::CaseByCase),
            "R0" | "r0" => Ok(BuiltinRule::PairwisePlurality),
            "constant0" => Ok(BuiltinRule::ConstantZero),
            "constant1" => Ok(BuiltinRule::ConstantOne),
            other => Err(Error::RuleSpec(format!("unknown rule name {other:?}"))),
        }
    }
}

/// Membership bitmask over a [`TableSpace`] in enumeration order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AcceptSet {
    n: u32,
    len: usize,
    bits: Vec<u64>,
}

impl AcceptSet {
    pub fn empty(space: &TableSpace) -> Self {
        AcceptSet {
            n: space.n(),
            len: space.len(),
            bits: vec![0; space.len().div_ceil(64)],
        }
    }

    pub fn from_predicate(
        space: &TableSpace,
        mut accept: impl FnMut(&ContingencyTable) -> bool,
    ) -> Self {
        let mut set = AcceptSet::empty(space);
        for (i, t) in space.iter().enumerate() {
            if accept(t) {
                set.insert(i);
            }
        }
        set
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, idx: usize) {
        debug_assert!(idx < self.len);
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    pub fn contains(&self, idx: usize) -> bool {
        debug_assert!(idx < self.len);
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Set inclusion; with nested accept sets this is the pointwise order
    /// on rules.
    pub fn is_subset_of(&self, other: &AcceptSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

#[derive(Clone, PartialEq, Eq)]
enum RuleForm {
    Builtin(BuiltinRule),
    Custom(AcceptSet),
}

/// A total decision rule on the tables of one committee size.
#[derive(Clone, PartialEq, Eq)]
pub struct DecisionRule {
    n: u32,
    form: RuleForm,
}

impl DecisionRule {
    pub fn builtin(n: u32, kind: BuiltinRule) -> Result<Self> {
        check_committee_size(n)?;
        Ok(DecisionRule {
            n,
            form: RuleForm::Builtin(kind),
        })
    }

    /// A rule given by an explicit accept set. Totality is structural: the
    /// bitmask covers the whole space.
    pub fn custom(space: &TableSpace, accept: AcceptSet) -> Result<Self> {
        if accept.n() != space.n() || accept.len() != space.len() {
            return Err(Error::domain(
                "accept set does not cover the table space".to_string(),
            ));
        }
        Ok(DecisionRule {
            n: space.n(),
            form: RuleForm::Custom(accept),
        })
    }

    pub fn custom_from_tables(space: &TableSpace, accepted: &[ContingencyTable]) -> Result<Self> {
        let mut set = AcceptSet::empty(space);
        for t in accepted {
            set.insert(space.index_of(t)?);
        }
        DecisionRule::custom(space, set)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn builtin_kind(&self) -> Option<BuiltinRule> {
        match &self.form {
            RuleForm::Builtin(k) => Some(*k),
            RuleForm::Custom(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.form {
            RuleForm::Builtin(k) => k.label().to_string(),
            RuleForm::Custom(_) => "custom".to_string(),
        }
    }

    /// Apply the rule to a table of the same committee size.
    pub fn decide(&self, a: &ContingencyTable) -> Result<bool> {
        if a.n() != self.n {
            return Err(Error::domain(format!(
                "table {a} has committee size {}, rule expects {}",
                a.n(),
                self.n
            )));
        }
        Ok(match &self.form {
            RuleForm::Builtin(k) => k.decides(a),
            RuleForm::Custom(set) => {
                let space = TableSpace::new(self.n)?;
                set.contains(space.index_of(a)?)
            }
        })
    }

    /// Materialise the accept set over the given space (which must be the
    /// rule's own space).
    pub fn accept_set(&self, space: &TableSpace) -> Result<AcceptSet> {
        if space.n() != self.n {
            return Err(Error::domain(format!(
                "space for n = {} does not match rule for n = {}",
                space.n(),
                self.n
            )));
        }
        Ok(match &self.form {
            RuleForm::Builtin(k) => AcceptSet::from_predicate(space, |t| k.decides(t)),
            RuleForm::Custom(set) => set.clone(),
        })
    }
}

impl std::fmt::Debug for DecisionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DecisionRule(n={}, {})", self.n, self.label())
    }
}

/// Spec of a rule as it appears in CLI arguments and JSON files:
/// either a builtin name or an explicit accept list.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleSpec {
    Builtin {
        kind: BuiltinRule,
    },
    Custom {
        n: u32,
        kind: CustomTag,
        accept: Vec<ContingencyTable>,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum CustomTag {
    #[serde(rename = "custom")]
    Custom,
}

impl RuleSpec {
    pub fn into_rule(self, n: u32) -> Result<DecisionRule> {
        match self {
            RuleSpec::Builtin { kind } => DecisionRule::builtin(n, kind),
            RuleSpec::Custom {
                n: spec_n,
                kind: _,
                accept,
            } => {
                if spec_n != n {
                    return Err(Error::RuleSpec(format!(
                        "rule spec is for n = {spec_n}, expected n = {n}"
                    )));
                }
                let space = TableSpace::new(n)?;
                DecisionRule::custom_from_tables(&space, &accept)
            }
        }
    }
}

/// Score versions of the three majority rules; positive score means the
/// matching rule accepts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScoreKind {
    S1,
    S2,
    S3,
}

/// S1 = x + min(y,z) - m,  S2 = x + floor(min(y,z)/2) - m,  S3 = x - m.
pub fn score(kind: ScoreKind, a: &ContingencyTable) -> i64 {
    let m = i64::from(a.m());
    let [x, y, z, _] = a.counts().map(i64::from);
    match kind {
        ScoreKind::S1 => x + y.min(z) - m,
        ScoreKind::S2 => x + y.min(z) / 2 - m,
        ScoreKind::S3 => x - m,
    }
}

impl ScoreKind {
    /// The rule whose acceptance matches this score being positive.
    pub fn rule(&self) -> BuiltinRule {
        match self {
            ScoreKind::S1 => BuiltinRule::IssueByIssue,
            ScoreKind::S2 => BuiltinRule::PathByPath,
            ScoreKind::S3 => BuiltinRule::CaseByCase,
        }
    }
}

/// Outcome of an admissibility check: either the rule is admissible or a
/// concrete witness of the failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Violation(AdmissibilityViolation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityViolation {
    /// The rule distinguishes a table from its transpose.
    Asymmetric { table: ContingencyTable },
    /// `lower < upper` in the partial order but the rule flips 1 -> 0.
    NonMonotone {
        lower: ContingencyTable,
        upper: ContingencyTable,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

/// Check transposition symmetry on all tables and monotonicity on all
/// covering pairs (enough, by transitivity of the order).
pub fn is_admissible(rule: &DecisionRule, space: &TableSpace) -> Result<Admissibility> {
    let set = rule.accept_set(space)?;
    for (i, a) in space.iter().enumerate() {
        let j = space.index_of(&a.transposed())?;
        if set.contains(i) != set.contains(j) {
            return Ok(Admissibility::Violation(
                AdmissibilityViolation::Asymmetric { table: *a },
            ));
        }
    }
    for (i, j) in space.covering_pairs() {
        if set.contains(i) && !set.contains(j) {
            return Ok(Admissibility::Violation(
                AdmissibilityViolation::NonMonotone {
                    lower: space.get(i),
                    upper: space.get(j),
                },
            ));
        }
    }
    Ok(Admissibility::Admissible)
}

/// All tables where the two rules decide differently, in enumeration order.
pub fn disagreement_set(a: &DecisionRule, b: &DecisionRule) -> Result<Vec<ContingencyTable>> {
    if a.n() != b.n() {
        return Err(Error::domain(format!(
            "rules have different committee sizes: {} vs {}",
            a.n(),
            b.n()
        )));
    }
    let space = TableSpace::new(a.n())?;
    let sa = a.accept_set(&space)?;
    let sb = b.accept_set(&space)?;
    Ok(space
        .iter()
        .enumerate()
        .filter(|(i, _)| sa.contains(*i) != sb.contains(*i))
        .map(|(_, t)| *t)
        .collect())
}

/// Every admissible rule for committee size `n`, eagerly enumerated.
#[derive(Debug)]
pub struct AdmissibleRules {
    n: u32,
    sets: Vec<AcceptSet>,
}

impl AdmissibleRules {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn count(&self) -> usize {
        self.sets.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = DecisionRule> + '_ {
        self.sets.iter().map(move |s| DecisionRule {
            n: self.n,
            form: RuleForm::Custom(s.clone()),
        })
    }

    pub fn contains(&self, rule: &DecisionRule) -> Result<bool> {
        let space = TableSpace::new(self.n)?;
        let set = rule.accept_set(&space)?;
        Ok(self.sets.contains(&set))
    }
}

/// Enumerate every admissible rule for n in {3, 5, 7}.
///
/// Admissible rules are exactly the up-sets of the transposition-quotient
/// poset. The quotient is graded by table rank, so processing classes from
/// the top of the order down, a class may be accepted iff all classes
/// covering it are already accepted; branching on that choice visits every
/// up-set exactly once.
pub fn enumerate_admissible(n: u32) -> Result<AdmissibleRules> {
    check_committee_size(n)?;
    if n > ENUMERATION_BOUND {
        return Err(Error::capability(format!(
            "admissible-rule enumeration is limited to n <= {ENUMERATION_BOUND}, got {n}"
        )));
    }
    let space = TableSpace::new(n)?;
    let classes = space.transposition_classes();
    let q = classes.len();
    // upward covers, per class
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); q];
    for (lo, hi) in classes.covering_pairs(&space) {
        up[lo].push(hi);
    }
    // linear extension from the top: descending rank
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(space.get(classes.reps[c]).rank()));

    let mut accepted = vec![false; q];
    let mut sets = Vec::new();
    fn rec(
        pos: usize,
        order: &[usize],
        up: &[Vec<usize>],
        accepted: &mut Vec<bool>,
        space: &TableSpace,
        classes: &crate::tables::TranspositionClasses,
        sets: &mut Vec<AcceptSet>,
    ) {
        if pos == order.len() {
            let mut set = AcceptSet::empty(space);
            for (i, _) in space.iter().enumerate() {
                if accepted[classes.class_of[i]] {
                    set.insert(i);
                }
            }
            sets.push(set);
            return;
        }
        let c = order[pos];
        accepted[c] = false;
        rec(pos + 1, order, up, accepted, space, classes, sets);
        if up[c].iter().all(|&u| accepted[u]) {
            accepted[c] = true;
            rec(pos + 1, order, up, accepted, space, classes, sets);
            accepted[c] = false;
        }
    }
    rec(0, &order, &up, &mut accepted, &space, &classes, &mut sets);
    sets.sort_by(|a, b| a.bits.cmp(&b.bits));
    Ok(AdmissibleRules { n, sets })
}

/// Count admissible rules without enumerating them, by dynamic programming
/// over the rank levels of the quotient poset (all covers join adjacent
/// levels). Used as an independent cross-check of [`enumerate_admissible`].
pub fn count_admissible(n: u32) -> Result<u128> {
    check_committee_size(n)?;
    let space = TableSpace::new(n)?;
    let classes = space.transposition_classes();
    let q = classes.len();
    let rank_of = |c: usize| space.get(classes.reps[c]).rank() as usize;
    let max_rank = 2 * n as usize;
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); max_rank + 1];
    for c in 0..q {
        levels[rank_of(c)].push(c);
    }
    let pos_in_level: std::collections::HashMap<usize, usize> = levels
        .iter()
        .flat_map(|lv| lv.iter().enumerate().map(|(k, &c)| (c, k)))
        .collect();
    // bitmask of each class's covers within the level above
    let mut cover_mask: Vec<u64> = vec![0; q];
    for (lo, hi) in classes.covering_pairs(&space) {
        cover_mask[lo] |= 1 << pos_in_level[&hi];
    }
    // dp[s] = number of up-sets of the levels above, given subset s chosen
    // at the current level
    let top = &levels[max_rank];
    let mut dp: Vec<u128> = vec![1; 1 << top.len()];
    for l in (0..max_rank).rev() {
        let level = &levels[l];
        let mut ndp = vec![0u128; 1 << level.len()];
        for (s_up, &cnt) in dp.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            let mut allowed: u64 = 0;
            for (k, &c) in level.iter().enumerate() {
                if cover_mask[c] & !(s_up as u64) == 0 {
                    allowed |= 1 << k;
                }
            }
            // walk all subsets of `allowed`
            let mut s = allowed;
            loop {
                ndp[s as usize] += cnt;
                if s == 0 {
                    break;
                }
                s = (s - 1) & allowed;
            }
        }
        dp = ndp;
    }
    Ok(dp.iter().sum())
}
