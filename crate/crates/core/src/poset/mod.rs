//! Finite graded posets stored as a Hasse diagram plus a rank function.
//!
//! A [`Poset`] is immutable once built. Construction validates gradedness and
//! the unique bottom, and precomputes up- and down-sets as bitsets so `a <= b`
//! is a single bit probe.

mod complex;
mod io;
mod iso;
mod ops;

use std::collections::{BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use complex::{order_complex, order_complex_of, SimplicialComplexModel};
pub use io::{parse_poset, write_poset};
pub use iso::{is_isomorphic, MAX_ISO_ELEMENTS};
pub use ops::{IntervalSpec, MeetSemilatticeVerdict};

/// Element ids are dense indices `0..len`.
pub type ElemId = usize;

#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    ranks: Vec<usize>,
    upper: Vec<Vec<ElemId>>,
    lower: Vec<Vec<ElemId>>,
    bottom: Option<ElemId>,
    up_sets: Vec<FixedBitSet>,
    down_sets: Vec<FixedBitSet>,
}

impl Poset {
    /// Build a poset with a unique bottom, computing ranks as the length of
    /// the longest chain from the bottom.
    pub fn new(labels: Vec<String>, covers: &[(ElemId, ElemId)]) -> Result<Self> {
        Self::build(labels, None, covers, true)
    }

    /// Build a poset with a unique bottom from supplied ranks, which are
    /// checked against the covers.
    pub fn with_ranks(
        labels: Vec<String>,
        ranks: Vec<usize>,
        covers: &[(ElemId, ElemId)],
    ) -> Result<Self> {
        Self::build(labels, Some(ranks), covers, true)
    }

    /// A graded order that may have several minimal elements (all of rank 0).
    /// Used for open-below intervals before they are dualized.
    pub fn raw(
        labels: Vec<String>,
        ranks: Vec<usize>,
        covers: &[(ElemId, ElemId)],
    ) -> Result<Self> {
        Self::build(labels, Some(ranks), covers, false)
    }

    fn build(
        labels: Vec<String>,
        ranks: Option<Vec<usize>>,
        covers: &[(ElemId, ElemId)],
        require_bottom: bool,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NoUniqueBottom(Vec::new()));
        }
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(a, b) in covers {
            for e in [a, b] {
                if e >= n {
                    return Err(Error::UnknownElement(e));
                }
            }
            if a == b {
                return Err(Error::Cyclic(a));
            }
            if !seen.insert((a, b)) {
                return Err(Error::RedundantCover(a, b));
            }
            upper[a].push(b);
            lower[b].push(a);
        }
        for list in upper.iter_mut().chain(lower.iter_mut()) {
            list.sort_unstable();
        }

        let order = topological_order(&upper, &lower)?;
        let minimal: Vec<ElemId> = (0..n).filter(|&x| lower[x].is_empty()).collect();

        let ranks = match ranks {
            Some(r) => {
                if r.len() != n {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("{} ranks for {} elements", r.len(), n),
                    });
                }
                r
            }
            None => {
                let mut r = vec![0usize; n];
                for &x in &order {
                    for &y in &upper[x] {
                        r[y] = r[y].max(r[x] + 1);
                    }
                }
                r
            }
        };

        let rank_zero: Vec<ElemId> = (0..n).filter(|&x| ranks[x] == 0).collect();
        let bottom = if require_bottom {
            if rank_zero.len() != 1 {
                return Err(Error::NoUniqueBottom(rank_zero));
            }
            let b = rank_zero[0];
            if let Some(&stray) = minimal.iter().find(|&&m| m != b) {
                return Err(Error::DisconnectedFromBottom(stray));
            }
            Some(b)
        } else {
            if let Some(&m) = minimal.iter().find(|&&m| ranks[m] != 0) {
                return Err(Error::NotGraded(m, m));
            }
            (minimal.len() == 1).then(|| minimal[0])
        };

        for &(a, b) in covers {
            if ranks[b] != ranks[a] + 1 {
                return Err(Error::NotGraded(a, b));
            }
        }

        // Down-sets in topological order, up-sets in reverse.
        let mut down_sets = vec![FixedBitSet::with_capacity(n); n];
        for &x in &order {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &lower[x] {
                set.union_with(&down_sets[y]);
            }
            down_sets[x] = set;
        }
        let mut up_sets = vec![FixedBitSet::with_capacity(n); n];
        for &x in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &upper[x] {
                set.union_with(&up_sets[y]);
            }
            up_sets[x] = set;
        }

        Ok(Self {
            labels,
            ranks,
            upper,
            lower,
            bottom,
            up_sets,
            down_sets,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<ElemId> {
        0..self.len()
    }

    pub fn label(&self, x: ElemId) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank_of(&self, x: ElemId) -> usize {
        self.ranks[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Maximum element rank.
    pub fn rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    pub fn bottom(&self) -> Option<ElemId> {
        self.bottom
    }

    pub fn require_bottom(&self) -> Result<ElemId> {
        self.bottom.ok_or(Error::MissingBottom)
    }

    /// The unique maximal element, if there is one.
    pub fn top(&self) -> Option<ElemId> {
        let mut maximal = self.elements().filter(|&x| self.upper[x].is_empty());
        let first = maximal.next()?;
        maximal.next().is_none().then_some(first)
    }

    pub fn upper_covers(&self, x: ElemId) -> &[ElemId] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: ElemId) -> &[ElemId] {
        &self.lower[x]
    }

    pub fn covers(&self) -> impl Iterator<Item = (ElemId, ElemId)> + '_ {
        self.elements()
            .flat_map(move |a| self.upper[a].iter().map(move |&b| (a, b)))
    }

    pub fn cover_count(&self) -> usize {
        self.upper.iter().map(Vec::len).sum()
    }

    pub fn covers_vec(&self) -> Vec<(ElemId, ElemId)> {
        self.covers().collect()
    }

    pub fn is_cover(&self, a: ElemId, b: ElemId) -> bool {
        self.upper[a].binary_search(&b).is_ok()
    }

    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.up_sets[a].contains(b)
    }

    pub fn lt(&self, a: ElemId, b: ElemId) -> bool {
        a != b && self.leq(a, b)
    }

    /// `{y : x <= y}` as a bitset.
    pub fn up_set(&self, x: ElemId) -> &FixedBitSet {
        &self.up_sets[x]
    }

    /// `{y : y <= x}` as a bitset.
    pub fn down_set(&self, x: ElemId) -> &FixedBitSet {
        &self.down_sets[x]
    }

    pub fn elements_of_rank(&self, k: usize) -> Vec<ElemId> {
        self.elements().filter(|&x| self.ranks[x] == k).collect()
    }

    pub fn maximal_elements(&self) -> Vec<ElemId> {
        self.elements()
            .filter(|&x| self.upper[x].is_empty())
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<ElemId> {
        self.elements()
            .filter(|&x| self.lower[x].is_empty())
            .collect()
    }

    /// Number of elements of each rank `0..=rank()`.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rank() + 1];
        for &r in &self.ranks {
            counts[r] += 1;
        }
        counts
    }

    /// Elements of the closed interval `[lo, hi]`, in id order.
    pub fn closed_interval(&self, lo: ElemId, hi: ElemId) -> Vec<ElemId> {
        let mut set = self.up_sets[lo].clone();
        set.intersect_with(&self.down_sets[hi]);
        set.ones().collect()
    }

    /// Element ids sorted by rank, ties by id.
    pub fn rank_order(&self) -> Vec<ElemId> {
        let mut ids: Vec<ElemId> = self.elements().collect();
        ids.sort_by_key(|&x| (self.ranks[x], x));
        ids
    }
}

fn topological_order(upper: &[Vec<ElemId>], lower: &[Vec<ElemId>]) -> Result<Vec<ElemId>> {
    let n = upper.len();
    let mut indegree: Vec<usize> = lower.iter().map(Vec::len).collect();
    let mut queue: VecDeque<ElemId> = (0..n).filter(|&x| indegree[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in &upper[x] {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                queue.push_back(y);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&x| indegree[x] > 0).unwrap_or(0);
        return Err(Error::Cyclic(stuck));
    }
    Ok(order)
}

/// Labels `"0", "1", ...` for quick construction.
pub fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Common small posets used across tests and verifiers.
pub mod examples {
    use super::*;

    /// Chain `0 < 1 < ... < len-1`.
    pub fn chain(len: usize) -> Poset {
        let covers: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Poset::new(numeric_labels(len), &covers).expect("chain is a valid poset")
    }

    /// Bottom below an antichain of `k` atoms.
    pub fn antichain_with_bottom(k: usize) -> Poset {
        let covers: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Poset::new(numeric_labels(k + 1), &covers).expect("valid poset")
    }

    /// Boolean lattice of subsets of `{0..k-1}`; element id = subset bitmask.
    pub fn boolean_lattice(k: usize) -> Poset {
        let n = 1usize << k;
        let labels = (0..n)
            .map(|m| {
                let members: Vec<String> = (0..k)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let mut covers = Vec::new();
        for m in 0..n {
            for i in 0..k {
                if m >> i & 1 == 0 {
                    covers.push((m, m | 1 << i));
                }
            }
        }
        Poset::new(labels, &covers).expect("boolean lattice is valid")
    }

    /// Face lattice of an `m`-gon (empty face, vertices, edges, and the
    /// polygon itself).
    pub fn polygon_lattice(m: usize) -> Poset {
        assert!(m >= 3);
        let mut labels = vec!["()".to_string()];
        labels.extend((0..m).map(|i| format!("v{i}")));
        labels.extend((0..m).map(|i| format!("e{i}")));
        labels.push("top".to_string());
        let mut covers = Vec::new();
        for i in 0..m {
            covers.push((0, 1 + i));
            let edge = 1 + m + i;
            covers.push((1 + i, edge));
            covers.push((1 + (i + 1) % m, edge));
            covers.push((edge, 1 + 2 * m));
        }
        Poset::new(labels, &covers).expect("polygon lattice is valid")
    }

    /// Face lattice of a segment: empty, two vertices, the segment.
    pub fn segment_lattice() -> Poset {
        Poset::new(
            vec!["()".into(), "a".into(), "b".into(), "ab".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .expect("segment lattice is valid")
    }

    /// Face lattice of a simplex with `k` vertices (Boolean lattice).
    pub fn simplex_lattice(k: usize) -> Poset {
        boolean_lattice(k)
    }
}
