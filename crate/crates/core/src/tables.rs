//! Vote contingency tables for an odd-sized committee deciding two premises,
//! their lexicographic enumeration, and the monotonicity partial order
//! generated by single-vote moves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::binomial;

/// The four vote counts of a committee of size `n = x + y + z + t`:
/// `x` votes for both premises, `y` for the first only, `z` for the second
/// only, `t` against both.
///
/// The derived `Ord` is the lexicographic enumeration order on
/// `(x, y, z, t)`, not the domain partial order — that one is [`table_leq`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u32; 4]", into = "[u32; 4]")]
pub struct ContingencyTable {
    x: u32,
    y: u32,
    z: u32,
    t: u32,
}

impl ContingencyTable {
    pub fn new(x: u32, y: u32, z: u32, t: u32) -> Result<Self> {
        let n = u64::from(x) + u64::from(y) + u64::from(z) + u64::from(t);
        let n = u32::try_from(n)
            .map_err(|_| Error::domain("committee size overflows u32".to_string()))?;
        check_committee_size(n)?;
        Ok(ContingencyTable { x, y, z, t })
    }

    pub fn x(&self) -> u32 {
        self.x
    }
    pub fn y(&self) -> u32 {
        self.y
    }
    pub fn z(&self) -> u32 {
        self.z
    }
    pub fn t(&self) -> u32 {
        self.t
    }

    /// Committee size.
    pub fn n(&self) -> u32 {
        self.x + self.y + self.z + self.t
    }

    /// Majority threshold offset: `n = 2m + 1`.
    pub fn m(&self) -> u32 {
        self.n() / 2
    }

    pub fn counts(&self) -> [u32; 4] {
        [self.x, self.y, self.z, self.t]
    }

    /// Swap the two single-premise cells. An involution; tables with `y = z`
    /// are the fixed points.
    pub fn transposed(&self) -> Self {
        ContingencyTable {
            x: self.x,
            y: self.z,
            z: self.y,
            t: self.t,
        }
    }

    /// Canonical representative of this table's transposition class
    /// (the member with `y >= z`).
    pub fn canonical(&self) -> Self {
        if self.y >= self.z {
            *self
        } else {
            self.transposed()
        }
    }

    /// Rank in the grading of the partial order: every generating move
    /// increases `2x + y + z` by exactly one.
    pub fn rank(&self) -> u32 {
        2 * self.x + self.y + self.z
    }
}

impl std::fmt::Debug for ContingencyTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.x, self.y, self.z, self.t)
    }
}

impl std::fmt::Display for ContingencyTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.x, self.y, self.z, self.t)
    }
}

impl From<ContingencyTable> for [u32; 4] {
    fn from(t: ContingencyTable) -> Self {
        t.counts()
    }
}

impl TryFrom<[u32; 4]> for ContingencyTable {
    type Error = Error;
    fn try_from(v: [u32; 4]) -> Result<Self> {
        ContingencyTable::new(v[0], v[1], v[2], v[3])
    }
}

pub(crate) fn check_committee_size(n: u32) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "committee size must be an odd integer >= 3, got {n}"
        )));
    }
    Ok(())
}

/// The four single-vote moves that generate the partial order. Each moves
/// one vote towards stronger support of the conjunction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Move {
    YtoX,
    ZtoX,
    TtoY,
    TtoZ,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::YtoX, Move::ZtoX, Move::TtoY, Move::TtoZ];

    pub fn apply(&self, a: &ContingencyTable) -> Option<ContingencyTable> {
        let [x, y, z, t] = a.counts();
        let moved = match self {
            Move::YtoX if y > 0 => [x + 1, y - 1, z, t],
            Move::ZtoX if z > 0 => [x + 1, y, z - 1, t],
            Move::TtoY if t > 0 => [x, y + 1, z, t - 1],
            Move::TtoZ if t > 0 => [x, y, z + 1, t - 1],
            _ => return None,
        };
        Some(ContingencyTable {
            x: moved[0],
            y: moved[1],
            z: moved[2],
            t: moved[3],
        })
    }
}

/// `a <= b` in the move-generated partial order.
///
/// Closed form instead of search: `b` is reachable from `a` iff we can pick
/// the move multiplicities `a'` (y->x), `b'` (z->x), `c'` (t->y), `d'` (t->z)
/// as non-negative integers with
///   x_b = x_a + a' + b',  y_b = y_a - a' + c',  z_b = z_a - b' + d',
///   t_b = t_a - c' - d'.
/// Eliminating c' and d' (both are then forced to be non-negative exactly
/// when a' covers any loss in y and b' any loss in z) leaves
///   x_b >= x_a  and  max(0, y_a - y_b) + max(0, z_a - z_b) <= x_b - x_a.
pub fn table_leq(a: &ContingencyTable, b: &ContingencyTable) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::domain(format!(
            "tables belong to different committee sizes: {} vs {}",
            a.n(),
            b.n()
        )));
    }
    if b.x < a.x {
        return Ok(false);
    }
    let dx = b.x - a.x;
    let need_y = a.y.saturating_sub(b.y);
    let need_z = a.z.saturating_sub(b.z);
    Ok(need_y + need_z <= dx)
}

pub fn transpose(a: &ContingencyTable) -> ContingencyTable {
    a.transposed()
}

/// All contingency tables for committee size `n`, in lexicographic order
/// on `(x, y, z, t)`. There are `binomial(n+3, 3)` of them.
#[derive(Clone, Debug, Serialize)]
pub struct TableSpace {
    n: u32,
    tables: Vec<ContingencyTable>,
}

/// Free-function form of [`TableSpace::new`].
pub fn enumerate_tables(n: u32) -> Result<TableSpace> {
    TableSpace::new(n)
}

impl TableSpace {
    pub fn new(n: u32) -> Result<Self> {
        check_committee_size(n)?;
        let mut tables = Vec::with_capacity(space_cardinality(n) as usize);
        for x in 0..=n {
            for y in 0..=n - x {
                for z in 0..=n - x - y {
                    tables.push(ContingencyTable {
                        x,
                        y,
                        z,
                        t: n - x - y - z,
                    });
                }
            }
        }
        debug_assert_eq!(tables.len() as u64, space_cardinality(n));
        Ok(TableSpace { n, tables })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.n / 2
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tables(&self) -> &[ContingencyTable] {
        &self.tables
    }

    pub fn iter(&self) -> impl Iterator<Item = &ContingencyTable> {
        self.tables.iter()
    }

    pub fn get(&self, idx: usize) -> ContingencyTable {
        self.tables[idx]
    }

    /// Lexicographic rank of a table, O(1). Tables that come before `a`
    /// either start with a smaller x (a full suffix simplex each), share x
    /// with a smaller y (a run of `n - x - y' + 1` z-values each), or share
    /// (x, y) with a smaller z.
    pub fn index_of(&self, a: &ContingencyTable) -> Result<usize> {
        if a.n() != self.n {
            return Err(Error::domain(format!(
                "table {a} does not belong to the space for n = {}",
                self.n
            )));
        }
        let n = u64::from(self.n);
        let (x, y, z) = (u64::from(a.x), u64::from(a.y), u64::from(a.z));
        let before_x = tetrahedral(n + 2) - tetrahedral(n - x + 2);
        let before_y = y * (n - x + 1) - y * y.saturating_sub(1) / 2;
        let idx = (before_x + before_y + z) as usize;
        debug_assert_eq!(self.tables[idx], *a);
        Ok(idx)
    }

    /// Indices of covering pairs `(lower, upper)` of the partial order,
    /// sorted by lower table then by move order. Since the order is graded
    /// by [`ContingencyTable::rank`], the covers are exactly the single
    /// moves.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.tables.iter().enumerate() {
            for mv in Move::ALL {
                if let Some(b) = mv.apply(a) {
                    out.push((i, self.index_of(&b).expect("moved table stays in space")));
                }
            }
        }
        out
    }

    /// Quotient of the space by the transposition equivalence.
    pub fn transposition_classes(&self) -> TranspositionClasses {
        let mut class_of = vec![usize::MAX; self.tables.len()];
        let mut reps = Vec::new();
        for (i, a) in self.tables.iter().enumerate() {
            if a.canonical() == *a {
                class_of[i] = reps.len();
                reps.push(i);
            }
        }
        for (i, a) in self.tables.iter().enumerate() {
            if class_of[i] == usize::MAX {
                let rep_idx = self.index_of(&a.canonical()).expect("canonical in space");
                class_of[i] = class_of[rep_idx];
            }
        }
        TranspositionClasses { reps, class_of }
    }
}

// C(k+1, 3): partial sums of the triangular numbers. Summing the count of
// (y, z, t)-suffixes over all x' < x telescopes to a difference of these.
fn tetrahedral(k: u64) -> u64 {
    (k + 1) * k * (k - 1) / 6
}

/// `binomial(n+3, 3)` as u64; table spaces here are always desk-scale.
pub fn space_cardinality(n: u32) -> u64 {
    use num_traits::ToPrimitive;
    binomial(u64::from(n) + 3, 3).to_u64().expect("desk-scale")
}

/// Transposition classes of a [`TableSpace`]: canonical representatives
/// (members with `y >= z`) and the class index of every table.
pub struct TranspositionClasses {
    /// Table index of each class representative, ascending.
    pub reps: Vec<usize>,
    /// Class index for every table in the space.
    pub class_of: Vec<usize>,
}

impl TranspositionClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Covering pairs `(lower class, upper class)` of the quotient order.
    /// Classes inherit the grading, so covers are single moves applied to
    /// any class member, mapped back to classes.
    pub fn covering_pairs(&self, space: &TableSpace) -> Vec<(usize, usize)> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, j) in space.covering_pairs() {
            let (ci, cj) = (self.class_of[i], self.class_of[j]);
            seen.insert((ci, cj));
        }
        seen.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(x: u32, y: u32, z: u32, t: u32) -> ContingencyTable {
        ContingencyTable::new(x, y, z, t).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(TableSpace::new(3).unwrap().len(), 20);
        assert_eq!(TableSpace::new(5).unwrap().len(), 56);
        let s7 = TableSpace::new(7).unwrap();
        assert_eq!(s7.len(), 120);
        assert!(s7.iter().all(|t| t.n() == 7));
        for n in [3u32, 5, 7, 9, 11] {
            assert_eq!(
                TableSpace::new(n).unwrap().len() as u64,
                space_cardinality(n)
            );
        }
    }

    #[test]
    fn enumeration_rejects_bad_sizes() {
        assert!(TableSpace::new(4).is_err());
        assert!(TableSpace::new(1).is_err());
        assert!(TableSpace::new(0).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic_and_indexable() {
        for n in [3u32, 5, 7, 11] {
            let s = TableSpace::new(n).unwrap();
            let mut sorted = s.tables().to_vec();
            sorted.sort();
            assert_eq!(sorted, s.tables());
            for (i, t) in s.iter().enumerate() {
                assert_eq!(s.index_of(t).unwrap(), i);
            }
        }
    }

    #[test]
    fn leq_examples() {
        assert!(table_leq(&tb(2, 1, 1, 1), &tb(2, 2, 1, 0)).unwrap());
        assert!(table_leq(&tb(1, 1, 1, 0), &tb(1, 1, 1, 0)).unwrap());
        assert!(table_leq(&tb(0, 1, 1, 1), &tb(1, 1, 1, 0)).unwrap());
        assert!(!table_leq(&tb(1, 1, 1, 0), &tb(0, 1, 1, 1)).unwrap());
        assert!(table_leq(&tb(1, 1, 1, 0), &tb(1, 2, 1, 1)).is_err());
    }

    #[test]
    fn transpose_is_involution() {
        let s = TableSpace::new(7).unwrap();
        for t in s.iter() {
            assert_eq!(t.transposed().transposed(), *t);
        }
        assert_eq!(tb(1, 2, 0, 0).transposed(), tb(1, 0, 2, 0));
        assert_eq!(tb(1, 1, 1, 0).transposed(), tb(1, 1, 1, 0));
    }

    #[test]
    fn order_respects_transposition() {
        // a <= b iff transpose(a) <= transpose(b); the admissible-rule
        // machinery relies on this.
        let s = TableSpace::new(5).unwrap();
        for a in s.iter() {
            for b in s.iter() {
                assert_eq!(
                    table_leq(a, b).unwrap(),
                    table_leq(&a.transposed(), &b.transposed()).unwrap()
                );
            }
        }
    }

    #[test]
    fn covers_step_rank_by_one() {
        let s = TableSpace::new(5).unwrap();
        for (i, j) in s.covering_pairs() {
            assert_eq!(s.get(j).rank(), s.get(i).rank() + 1);
            assert!(table_leq(&s.get(i), &s.get(j)).unwrap());
        }
    }

    #[test]
    fn serde_is_the_four_counts() {
        let t = tb(3, 2, 2, 0);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, "[3,2,2,0]");
        let back: ContingencyTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<ContingencyTable>("[1,1,0,0]").is_err());

        let space = TableSpace::new(3).unwrap();
        let v: serde_json::Value = serde_json::to_value(&space).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["tables"].as_array().unwrap().len(), 20);
        assert_eq!(v["tables"][0], serde_json::json!([0, 0, 0, 3]));
    }
}
