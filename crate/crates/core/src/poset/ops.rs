use fixedbitset::FixedBitSet;

use super::{ElemId, Poset};
use crate::error::{Error, Result};

/// Interval `[lo, hi]` with optionally excluded endpoints, so `[w, y)` is
/// `lo = w, hi = y, hi_open = true`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalSpec {
    pub lo: ElemId,
    pub hi: ElemId,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl IntervalSpec {
    pub fn closed(lo: ElemId, hi: ElemId) -> Self {
        Self {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    /// `[lo, hi)`
    pub fn half_open_above(lo: ElemId, hi: ElemId) -> Self {
        Self {
            hi_open: true,
            ..Self::closed(lo, hi)
        }
    }

    /// `(lo, hi]`
    pub fn half_open_below(lo: ElemId, hi: ElemId) -> Self {
        Self {
            lo_open: true,
            ..Self::closed(lo, hi)
        }
    }

    pub fn open(lo: ElemId, hi: ElemId) -> Self {
        Self {
            lo_open: true,
            hi_open: true,
            ..Self::closed(lo, hi)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetSemilatticeVerdict {
    pub holds: bool,
    /// A pair without a meet, when `holds` is false.
    pub counterexample: Option<(ElemId, ElemId)>,
}

impl Poset {
    /// Induced order on `elements`, which must be convex (covers of the
    /// subset are then covers of `self`). Ranks are shifted so the lowest
    /// element has rank 0. The result has a bottom only if the subset does.
    pub fn induced(&self, elements: &[ElemId]) -> Result<Poset> {
        let mut index = vec![usize::MAX; self.len()];
        for (i, &x) in elements.iter().enumerate() {
            index[x] = i;
        }
        let base = elements.iter().map(|&x| self.ranks[x]).min().unwrap_or(0);
        let labels = elements.iter().map(|&x| self.labels[x].clone()).collect();
        let ranks = elements.iter().map(|&x| self.ranks[x] - base).collect();
        let covers: Vec<(ElemId, ElemId)> = elements
            .iter()
            .flat_map(|&a| {
                self.upper[a]
                    .iter()
                    .filter(|&&b| index[b] != usize::MAX)
                    .map(move |&b| (a, b))
            })
            .map(|(a, b)| (index[a], index[b]))
            .collect();
        Poset::raw(labels, ranks, &covers)
    }

    /// The induced poset on an interval. Closed-below specs produce a poset
    /// with bottom `lo`; open-below specs produce a raw order whose
    /// [`Poset::bottom`] is `None` unless a single element remains minimal.
    pub fn subposet(&self, spec: IntervalSpec) -> Result<Poset> {
        let IntervalSpec {
            lo,
            hi,
            lo_open,
            hi_open,
        } = spec;
        for e in [lo, hi] {
            if e >= self.len() {
                return Err(Error::UnknownElement(e));
            }
        }
        if !self.leq(lo, hi) {
            return Err(Error::NotComparable(lo, hi));
        }
        let mut set = self.up_sets[lo].clone();
        set.intersect_with(&self.down_sets[hi]);
        if lo_open {
            set.set(lo, false);
        }
        if hi_open {
            set.set(hi, false);
        }
        let elements: Vec<ElemId> = set.ones().collect();
        if elements.is_empty() {
            return Err(Error::MissingBottom);
        }
        self.induced(&elements)
    }

    /// `[bottom, t)`, or `None` when `t` is the bottom (the empty poset).
    pub fn lower_half_open(&self, t: ElemId) -> Result<Option<Poset>> {
        let b = self.require_bottom()?;
        if t == b {
            return Ok(None);
        }
        self.subposet(IntervalSpec::half_open_above(b, t)).map(Some)
    }

    /// The opposite order. Requires a unique top, which becomes the bottom;
    /// ranks are recomputed as `rank() - rank(x)`. Ids are preserved.
    pub fn dual(&self) -> Result<Poset> {
        let top = self.top().ok_or(Error::NoUniqueTop)?;
        let r = self.ranks[top];
        let ranks = self.ranks.iter().map(|&k| r - k).collect();
        let covers: Vec<_> = self.covers().map(|(a, b)| (b, a)).collect();
        Poset::with_ranks(self.labels.clone(), ranks, &covers)
    }

    /// Product order; element `(i, j)` gets id `i * q.len() + j`.
    pub fn product(&self, q: &Poset) -> Result<Poset> {
        let m = q.len();
        let id = |i: ElemId, j: ElemId| i * m + j;
        let mut labels = Vec::with_capacity(self.len() * m);
        let mut ranks = Vec::with_capacity(self.len() * m);
        let mut covers = Vec::new();
        for i in self.elements() {
            for j in q.elements() {
                labels.push(format!("({},{})", self.labels[i], q.labels[j]));
                ranks.push(self.ranks[i] + q.ranks[j]);
                for &i2 in &self.upper[i] {
                    covers.push((id(i, j), id(i2, j)));
                }
                for &j2 in &q.upper[j] {
                    covers.push((id(i, j), id(i, j2)));
                }
            }
        }
        Poset::with_ranks(labels, ranks, &covers)
    }

    /// Adjoin a new maximum (id `len()`) above every maximal element.
    pub fn adjoin_top(&self) -> Result<Poset> {
        let top = self.len();
        let mut labels = self.labels.clone();
        labels.push("1^".into());
        let mut ranks = self.ranks.clone();
        ranks.push(self.rank() + 1);
        let mut covers = self.covers_vec();
        covers.extend(self.maximal_elements().into_iter().map(|x| (x, top)));
        if self.bottom.is_some() {
            Poset::with_ranks(labels, ranks, &covers)
        } else {
            Poset::raw(labels, ranks, &covers)
        }
    }

    /// Adjoin a new minimum (id `len()`) below every minimal element.
    pub fn adjoin_bottom(&self) -> Result<Poset> {
        let bottom = self.len();
        let mut labels = self.labels.clone();
        labels.push("0^".into());
        let mut ranks: Vec<usize> = self.ranks.iter().map(|r| r + 1).collect();
        ranks.push(0);
        let mut covers = self.covers_vec();
        covers.extend(self.minimal_elements().into_iter().map(|x| (bottom, x)));
        Poset::with_ranks(labels, ranks, &covers)
    }

    /// Remove the unique top. Ids above the top's id shift down by one.
    pub fn remove_top(&self) -> Result<Poset> {
        let top = self.top().ok_or(Error::NoUniqueTop)?;
        let keep: Vec<ElemId> = self.elements().filter(|&x| x != top).collect();
        let p = self.induced(&keep)?;
        if p.bottom.is_none() {
            return Err(Error::MissingBottom);
        }
        Ok(p)
    }

    /// Greatest lower bound of `a` and `b`, if it exists.
    pub fn meet(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        extremum_of(&self.down_sets[a], &self.down_sets[b], &self.down_sets)
    }

    /// Least upper bound of `a` and `b`, if it exists.
    pub fn join(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        extremum_of(&self.up_sets[a], &self.up_sets[b], &self.up_sets)
    }

    pub fn is_meet_semilattice(&self) -> MeetSemilatticeVerdict {
        for a in self.elements() {
            for b in a + 1..self.len() {
                if self.meet(a, b).is_none() {
                    return MeetSemilatticeVerdict {
                        holds: false,
                        counterexample: Some((a, b)),
                    };
                }
            }
        }
        MeetSemilatticeVerdict {
            holds: true,
            counterexample: None,
        }
    }

    /// Number of chains `bottom < t_1 < ... < t_k` whose ranks are exactly
    /// the set `ranks` (given in any order, duplicates ignored).
    pub fn flag_f(&self, ranks: &[usize]) -> u128 {
        let mut levels: Vec<usize> = ranks.to_vec();
        levels.sort_unstable();
        levels.dedup();
        let Some((&first, rest)) = levels.split_first() else {
            return 1;
        };
        let mut ways: Vec<u128> = vec![0; self.len()];
        for x in self.elements_of_rank(first) {
            ways[x] = 1;
        }
        let mut current = self.elements_of_rank(first);
        for &level in rest {
            let next = self.elements_of_rank(level);
            for &y in &next {
                ways[y] = current
                    .iter()
                    .filter(|&&x| self.leq(x, y))
                    .map(|&x| ways[x])
                    .sum();
            }
            current = next;
        }
        current.iter().map(|&x| ways[x]).sum()
    }

    /// `flag_f` for every subset of `1..=rank()`, indexed by bitmask
    /// (bit `i - 1` set means rank `i` is in the set).
    pub fn flag_f_vector(&self) -> Vec<u128> {
        let r = self.rank();
        (0..1usize << r)
            .map(|mask| {
                let set: Vec<usize> = (1..=r).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                self.flag_f(&set)
            })
            .collect()
    }
}

/// The element of `a ∩ b` whose closure is all of `a ∩ b`, if any.
fn extremum_of(a: &FixedBitSet, b: &FixedBitSet, closure: &[FixedBitSet]) -> Option<ElemId> {
    let mut common = a.clone();
    common.intersect_with(b);
    let size = common.count_ones(..);
    // closure[z] is already a subset of the common set for z in it
    common.ones().find(|&z| closure[z].count_ones(..) == size)
}
