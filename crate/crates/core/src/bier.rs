//! Order ideals and Bier posets.
//!
//! For a poset `P` with bottom and a proper ideal `I` of `P^ = P + 1^`, the
//! Bier poset has one element `[x, y]` for every `x` in `I` and `y` in
//! `P^ - I` with `x < y`, ordered by reverse inclusion of intervals. Its
//! bottom is `[0^, 1^]` and `[x, y]` has rank `r(x) + r(1^) - r(y)`.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::{ElemId, Poset};
use crate::verify::is_eulerian;

/// Largest family `IdealFamily::enumerate` materializes by default.
pub const DEFAULT_IDEAL_CAP: u64 = 1 << 16;

/// A downward-closed set of elements of some poset containing its bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    members: FixedBitSet,
}

impl Ideal {
    pub fn contains(&self, x: ElemId) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.members.ones()
    }

    pub fn as_bitset(&self) -> &FixedBitSet {
        &self.members
    }

    /// Members with no upper cover inside the ideal.
    pub fn maximal_elements(&self, p: &Poset) -> Vec<ElemId> {
        self.members()
            .filter(|&x| !p.upper_covers(x).iter().any(|&y| self.contains(y)))
            .collect()
    }

    /// The whole poset as an ideal.
    pub fn full(p: &Poset) -> Self {
        let mut members = FixedBitSet::with_capacity(p.len());
        members.insert_range(..);
        Self { members }
    }

    /// Every element of rank at most `rank`.
    pub fn up_to_rank(p: &Poset, rank: usize) -> Self {
        let mut members = FixedBitSet::with_capacity(p.len());
        for x in p.elements().filter(|&x| p.rank_of(x) <= rank) {
            members.insert(x);
        }
        Self { members }
    }
}

/// Check that `members` is a proper ideal of `P^`: every id is an element of
/// `P` (the adjoined top has id `p.len()` and is refused), and the set is
/// closed under going down.
pub fn validate_ideal(p: &Poset, members: &[ElemId]) -> Result<Ideal> {
    if members.is_empty() {
        return Err(Error::EmptyIdeal);
    }
    let mut set = FixedBitSet::with_capacity(p.len());
    for &x in members {
        if x == p.len() {
            return Err(Error::NotProper(x));
        }
        if x > p.len() {
            return Err(Error::UnknownElement(x));
        }
        set.insert(x);
    }
    for x in set.ones() {
        if let Some(&below) = p.lower_covers(x).iter().find(|&&b| !set.contains(b)) {
            return Err(Error::NotDownwardClosed { member: x, below });
        }
    }
    Ok(Ideal { members: set })
}

/// `I - {t}` for a maximal `t` of `I`.
pub fn delete_max(p: &Poset, ideal: &Ideal, t: ElemId) -> Result<Ideal> {
    if t >= p.len() {
        return Err(Error::UnknownElement(t));
    }
    if !ideal.contains(t) || p.upper_covers(t).iter().any(|&y| ideal.contains(y)) {
        return Err(Error::NotMaximal(t));
    }
    if ideal.len() == 1 {
        return Err(Error::WouldEmpty(t));
    }
    let mut members = ideal.members.clone();
    members.set(t, false);
    Ok(Ideal { members })
}

/// The Bier poset with the interval behind each element.
#[derive(Clone, Debug)]
pub struct BierPoset {
    poset: Poset,
    pairs: Vec<(ElemId, ElemId)>,
    index: HashMap<(ElemId, ElemId), ElemId>,
    base_top: ElemId,
}

impl BierPoset {
    /// Build `Bier(P, I)`. Ids in the base's `P^` are those of `P` plus
    /// `p.len()` for the adjoined top. Elements are numbered by
    /// `(rank, x, y)`.
    pub fn build(p: &Poset, ideal: &Ideal) -> Result<Self> {
        p.require_bottom()?;
        let hat = p.adjoin_top()?;
        let top = p.len();
        let big_r = hat.rank_of(top);
        let rank = |x: ElemId, y: ElemId| hat.rank_of(x) + big_r - hat.rank_of(y);

        let mut pairs: Vec<(ElemId, ElemId)> = Vec::new();
        for x in ideal.members() {
            for y in hat.up_set(x).ones() {
                if y == top || !ideal.contains(y) {
                    pairs.push((x, y));
                }
            }
        }
        pairs.sort_by_key(|&(x, y)| (rank(x, y), x, y));
        let index: HashMap<(ElemId, ElemId), ElemId> =
            pairs.iter().enumerate().map(|(i, &xy)| (xy, i)).collect();

        let mut covers = Vec::new();
        for (i, &(x, y)) in pairs.iter().enumerate() {
            for &x2 in hat.upper_covers(x) {
                if let Some(&j) = index.get(&(x2, y)) {
                    covers.push((i, j));
                }
            }
            for &y2 in hat.lower_covers(y) {
                if let Some(&j) = index.get(&(x, y2)) {
                    covers.push((i, j));
                }
            }
        }
        let labels = pairs.iter().map(|&(x, y)| format!("[{x},{y}]")).collect();
        let ranks = pairs.iter().map(|&(x, y)| rank(x, y)).collect();
        let poset = Poset::with_ranks(labels, ranks, &covers)?;
        Ok(Self {
            poset,
            pairs,
            index,
            base_top: top,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }

    /// The interval `[x, y]` behind element `e`.
    pub fn interval(&self, e: ElemId) -> (ElemId, ElemId) {
        self.pairs[e]
    }

    pub fn element_of(&self, x: ElemId, y: ElemId) -> Option<ElemId> {
        self.index.get(&(x, y)).copied()
    }

    /// Id of the adjoined top in the base's `P^`.
    pub fn base_top(&self) -> ElemId {
        self.base_top
    }
}

/// `Bier(P, I)`, refusing to return a poset that breaks Eulerianness: when
/// `P^` is Eulerian, `Bier(P, I)` plus a top must be too.
pub fn bier_poset(p: &Poset, ideal: &Ideal) -> Result<BierPoset> {
    let bier = BierPoset::build(p, ideal)?;
    if is_eulerian(&p.adjoin_top()?)?.holds {
        if let Some((a, b)) = is_eulerian(&bier.poset.adjoin_top()?)?.witness {
            return Err(Error::EulerianViolation(a, b));
        }
    }
    Ok(bier)
}

/// The ideals of `P` containing every element of rank at most
/// `force_rank`. Each is identified by its choice of free elements (those of
/// higher rank), written as a bitmask over `free()`.
#[derive(Clone, Debug)]
pub struct IdealFamily {
    forced: FixedBitSet,
    free: Vec<ElemId>,
    /// For each free element, the positions in `free` of its lower covers.
    free_below: Vec<Vec<usize>>,
    base_len: usize,
}

/// Choice of free elements; bit `k` refers to `free()[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeChoice(FixedBitSet);

impl FreeChoice {
    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }
}

impl fmt::Display for FreeChoice {
    /// Lowercase hex, bit `k` worth `2^k`, no leading zeros.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nibbles = self.0.len().div_ceil(4).max(1);
        let digits: String = (0..nibbles)
            .rev()
            .map(|k| {
                let v = (0..4)
                    .filter(|&b| self.0.contains(4 * k + b))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(v, 16).expect("nibble")
            })
            .collect();
        let trimmed = digits.trim_start_matches('0');
        f.write_str(if trimmed.is_empty() { "0" } else { trimmed })
    }
}

impl IdealFamily {
    pub fn new(p: &Poset, force_rank: usize) -> Result<Self> {
        p.require_bottom()?;
        let forced = Ideal::up_to_rank(p, force_rank).members;
        let mut free: Vec<ElemId> = p.elements().filter(|&x| !forced.contains(x)).collect();
        free.sort_by_key(|&x| (p.rank_of(x), x));
        let position: HashMap<ElemId, usize> =
            free.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let free_below = free
            .iter()
            .map(|&x| {
                p.lower_covers(x)
                    .iter()
                    .filter_map(|b| position.get(b).copied())
                    .collect()
            })
            .collect();
        Ok(Self {
            forced,
            free,
            free_below,
            base_len: p.len(),
        })
    }

    /// The family used for a `d`-dimensional multiplex: everything of rank at
    /// most `ceil(d/2) + 1` is forced.
    pub fn forced_for_dimension(p: &Poset, d: usize) -> Result<Self> {
        Self::new(p, d.div_ceil(2) + 1)
    }

    pub fn free(&self) -> &[ElemId] {
        &self.free
    }

    /// The ideal with no free element chosen.
    pub fn minimum(&self) -> Ideal {
        Ideal {
            members: self.forced.clone(),
        }
    }

    pub fn ideal(&self, choice: &FreeChoice) -> Ideal {
        let mut members = self.forced.clone();
        for k in choice.0.ones() {
            members.insert(self.free[k]);
        }
        Ideal { members }
    }

    /// The choice that reproduces `ideal`, if it belongs to this family.
    pub fn choice_of(&self, ideal: &Ideal) -> Option<FreeChoice> {
        if ideal.members.len() != self.base_len || !self.forced.is_subset(&ideal.members) {
            return None;
        }
        let mut bits = FixedBitSet::with_capacity(self.free.len());
        for (k, &x) in self.free.iter().enumerate() {
            bits.set(k, ideal.contains(x));
        }
        Some(FreeChoice(bits))
    }

    fn admissible(&self, bits: &FixedBitSet, k: usize) -> bool {
        self.free_below[k].iter().all(|&j| bits.contains(j))
    }

    /// Visit every downward-closed choice; stops early once `limit` have
    /// been seen and returns the number visited.
    fn walk(&self, limit: u64, visit: &mut dyn FnMut(&FixedBitSet)) -> u64 {
        fn go(
            fam: &IdealFamily,
            k: usize,
            bits: &mut FixedBitSet,
            seen: &mut u64,
            limit: u64,
            visit: &mut dyn FnMut(&FixedBitSet),
        ) {
            if *seen >= limit {
                return;
            }
            if k == fam.free.len() {
                *seen += 1;
                visit(bits);
                return;
            }
            go(fam, k + 1, bits, seen, limit, visit);
            // free is in rank order, so lower covers were decided already
            if fam.admissible(bits, k) {
                bits.insert(k);
                go(fam, k + 1, bits, seen, limit, visit);
                bits.set(k, false);
            }
        }
        let mut bits = FixedBitSet::with_capacity(self.free.len());
        let mut seen = 0;
        go(self, 0, &mut bits, &mut seen, limit, visit);
        seen
    }

    /// Number of ideals, or `TooMany` once more than `cap` are found.
    pub fn count(&self, cap: u64) -> Result<u64> {
        let seen = self.walk(cap.saturating_add(1), &mut |_| {});
        if seen > cap {
            return Err(Error::TooMany(cap));
        }
        Ok(seen)
    }

    /// All ideals, by increasing member count and then lexicographically on
    /// the sorted member ids.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<FreeChoice>> {
        let mut out = Vec::new();
        let seen = self.walk(cap.saturating_add(1), &mut |bits| {
            out.push(FreeChoice(bits.clone()))
        });
        if seen > cap {
            return Err(Error::TooMany(cap));
        }
        out.sort_by_cached_key(|c| {
            let ids: Vec<usize> = c.0.ones().collect();
            (ids.len(), ids)
        });
        Ok(out)
    }

    /// Up to `k` distinct seeded samples: each free element is kept with
    /// probability one half, then the choice is closed downward.
    pub fn sample(&self, k: usize, seed: u64) -> Vec<FreeChoice> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<FreeChoice> = Vec::with_capacity(k);
        let mut attempts = 0;
        while out.len() < k && attempts < k.saturating_mul(64).max(64) {
            attempts += 1;
            let mut bits = FixedBitSet::with_capacity(self.free.len());
            for j in 0..self.free.len() {
                if rng.gen_bool(0.5) {
                    bits.insert(j);
                }
            }
            for j in (0..self.free.len()).rev() {
                if bits.contains(j) {
                    for &b in &self.free_below[j] {
                        bits.insert(b);
                    }
                }
            }
            let choice = FreeChoice(bits);
            if !out.contains(&choice) {
                out.push(choice);
            }
        }
        out
    }
}
