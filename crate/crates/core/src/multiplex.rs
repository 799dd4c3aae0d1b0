//! Multiplexes `M^{d,n}`: a `d`-polytope on vertices `x_0..x_n` whose facets
//! are the windows
//!
//! ```text
//! F_i = {x_{i-d+1}, ..., x_{i-1}, x_{i+1}, ..., x_{i+d-1}}
//! ```
//!
//! with indices below 0 read as `x_0` and above `n` as `x_n`. No coordinates
//! exist here; the face lattice is reconstructed as the intersection closure
//! of the facet vertex sets and checked against the known face numbers.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::poset::examples::{chain, polygon_lattice, segment_lattice};
use crate::poset::{is_isomorphic, ElemId, IntervalSpec, Poset};

/// Largest element count `face_lattice` will build.
pub const MAX_LATTICE_ELEMENTS: usize = 20_000;

/// A set of vertex indices, at most 64 of them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn full(count: usize) -> Self {
        Self(if count >= 64 {
            u64::MAX
        } else {
            (1u64 << count) - 1
        })
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    /// Members in increasing order.
    pub fn to_vec(self) -> Vec<usize> {
        (0..64).filter(|&v| self.contains(v)).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::default();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The `index`-th facet pattern of a multiplex of dimension `dim` on the
/// ordered vertex list `order` (positions `0..=l`).
///
/// For `dim >= 2` this is the clamped window. For `dim <= 1` the window
/// degenerates, and the simplex reading is used: position `0` omits the
/// last vertex, position `l` omits the first.
pub fn facet_pattern(order: &[usize], dim: usize, index: usize) -> VertexSet {
    let l = order.len() - 1;
    if dim <= 1 {
        let omit = match index {
            0 => l,
            i if i == l => 0,
            i => i,
        };
        return order
            .iter()
            .enumerate()
            .filter(|&(pos, _)| pos != omit)
            .map(|(_, &v)| v)
            .collect();
    }
    let (i, d) = (index as isize, dim as isize);
    ((i - d + 1)..=(i + d - 1))
        .filter(|&j| j != i)
        .map(|j| order[j.clamp(0, l as isize) as usize])
        .collect()
}

/// Facet vertex sets `F_0..F_n` of `M^{d,n}`.
pub fn facets(d: usize, n: usize) -> Result<Vec<VertexSet>> {
    if d < 2 || n < d || n >= 64 {
        return Err(Error::BadParameters { d, n });
    }
    let order: Vec<usize> = (0..=n).collect();
    Ok((0..=n).map(|i| facet_pattern(&order, d, i)).collect())
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Face numbers `f_0..f_{d-1}` of `M^{d,n}`:
/// `f_i = C(d+1, i+1) + (n-d) C(d-1, i)`.
pub fn expected_f_vector(d: usize, n: usize) -> Vec<usize> {
    (0..d)
        .map(|i| binomial(d + 1, i + 1) + (n - d) * binomial(d - 1, i))
        .collect()
}

/// A multiplex with its face lattice (top included). Element ids are sorted
/// by rank, then by the sorted vertex list; the top has the largest id, so
/// removing it leaves every other id unchanged.
#[derive(Clone, Debug)]
pub struct Multiplex {
    d: usize,
    n: usize,
    facet_sets: Vec<VertexSet>,
    faces: Vec<VertexSet>,
    index: HashMap<VertexSet, ElemId>,
    lattice: Poset,
    boundary: Poset,
}

impl Multiplex {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        let facet_sets = facets(d, n)?;
        let expected_total: usize = expected_f_vector(d, n).iter().sum::<usize>() + 2;
        if expected_total > MAX_LATTICE_ELEMENTS {
            return Err(Error::TooLarge {
                what: "face lattice elements",
                size: expected_total,
                cap: MAX_LATTICE_ELEMENTS,
            });
        }

        let mut closure: BTreeSet<VertexSet> = facet_sets.iter().copied().collect();
        loop {
            let current: Vec<VertexSet> = closure.iter().copied().collect();
            let before = closure.len();
            for (i, &a) in current.iter().enumerate() {
                for &b in &current[i + 1..] {
                    closure.insert(a.intersection(b));
                }
            }
            if closure.len() == before {
                break;
            }
            if closure.len() > MAX_LATTICE_ELEMENTS {
                return Err(Error::TooLarge {
                    what: "face lattice elements",
                    size: closure.len(),
                    cap: MAX_LATTICE_ELEMENTS,
                });
            }
        }
        closure.insert(VertexSet::default());
        closure.insert(VertexSet::full(n + 1));
        let (faces, lattice) = inclusion_lattice(closure.into_iter().collect())?;

        let built: Vec<usize> = lattice.rank_counts()[1..=d].to_vec();
        let expected = expected_f_vector(d, n);
        if built != expected || lattice.rank() != d + 1 {
            return Err(Error::FaceCountMismatch {
                d,
                n,
                built,
                expected,
            });
        }
        let index = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let boundary = lattice.remove_top()?;
        Ok(Self {
            d,
            n,
            facet_sets,
            faces,
            index,
            lattice,
            boundary,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facet_sets(&self) -> &[VertexSet] {
        &self.facet_sets
    }

    /// Face lattice including the top.
    pub fn lattice(&self) -> &Poset {
        &self.lattice
    }

    /// Face lattice without the top; ids agree with [`Multiplex::lattice`].
    pub fn boundary(&self) -> &Poset {
        &self.boundary
    }

    pub fn top(&self) -> ElemId {
        self.faces.len() - 1
    }

    pub fn bottom(&self) -> ElemId {
        0
    }

    pub fn vertex_set(&self, x: ElemId) -> VertexSet {
        self.faces[x]
    }

    pub fn element_of(&self, set: VertexSet) -> Option<ElemId> {
        self.index.get(&set).copied()
    }

    /// Element id of facet `F_i`.
    pub fn facet_element(&self, i: usize) -> ElemId {
        self.index[&self.facet_sets[i]]
    }

    /// `f_0..f_{d-1}` as built.
    pub fn f_vector(&self) -> Vec<usize> {
        self.lattice.rank_counts()[1..=self.d].to_vec()
    }

    /// 2-faces whose lower interval is the face lattice of a 4-gon.
    pub fn quad_2faces(&self) -> Result<Vec<ElemId>> {
        let square = polygon_lattice(4);
        let mut quads = Vec::new();
        for t in self.lattice.elements_of_rank(3) {
            let lower = self.lattice.subposet(IntervalSpec::closed(0, t))?;
            if is_isomorphic(&lower, &square)?.is_some() {
                quads.push(t);
            }
        }
        Ok(quads)
    }

    /// The 2-faces `{x_i, x_{i+1}, x_{i+d}, x_{i+d+1}}`, `0 <= i < n - d`.
    pub fn quad_index_pattern(&self) -> Vec<VertexSet> {
        (0..self.n - self.d)
            .map(|i| [i, i + 1, i + self.d, i + self.d + 1].into_iter().collect())
            .collect()
    }

    /// An isomorphism from the lattice onto its dual, if one exists.
    pub fn verify_self_dual(&self) -> Result<Option<Vec<ElemId>>> {
        is_isomorphic(&self.lattice, &self.lattice.dual()?)
    }

    /// `(dimension, vertex count - 1)` of the face `t`, i.e. the parameters
    /// `(d', m)` it should have as a multiplex `M^{d',m}`.
    pub fn face_type(&self, t: ElemId) -> (usize, usize) {
        let rank = self.lattice.rank_of(t);
        (
            rank.saturating_sub(1),
            self.faces[t].len().saturating_sub(1),
        )
    }

    /// Every face and every quotient is a multiplex: `[0, t]` is isomorphic
    /// to the lattice of `M^{d',m}` for its own parameters, and `[t, 1]`
    /// dualized is isomorphic to the lattice of a multiplex whose vertices
    /// are the facets containing `t`.
    pub fn verify_faces_and_quotients(&self) -> Result<FaceQuotientCheck> {
        let mut cache: HashMap<(usize, usize), Poset> = HashMap::new();
        let mut reference = |dim: usize, m: usize| -> Result<Poset> {
            if let Some(p) = cache.get(&(dim, m)) {
                return Ok(p.clone());
            }
            let p = multiplex_lattice(dim, m)?;
            cache.insert((dim, m), p.clone());
            Ok(p)
        };
        let top = self.top();
        for t in self.lattice.elements() {
            if t != self.bottom() {
                let (dim, m) = self.face_type(t);
                let lower = self.lattice.subposet(IntervalSpec::closed(0, t))?;
                let ok = m >= dim && is_isomorphic(&lower, &reference(dim, m)?)?.is_some();
                if !ok {
                    return Ok(FaceQuotientCheck::FaceNotMultiplex(t));
                }
            }
            if t != top {
                let upper = self
                    .lattice
                    .subposet(IntervalSpec::closed(t, top))?
                    .dual()?;
                let dim = upper.rank() - 1;
                let m = upper.elements_of_rank(1).len() - 1;
                let ok = m >= dim && is_isomorphic(&upper, &reference(dim, m)?)?.is_some();
                if !ok {
                    return Ok(FaceQuotientCheck::QuotientNotMultiplex(t));
                }
            }
        }
        Ok(FaceQuotientCheck::Holds)
    }

    /// The flag f-vector equals that of the `(d-2)`-fold pyramid over the
    /// `(n-d+3)`-gon, over every set of ranks.
    pub fn verify_flag_pyramid(&self) -> Result<bool> {
        let pyramid = pyramid_over_polygon(self.d - 2, self.n - self.d + 3)?;
        Ok(pyramid.flag_f_vector() == self.lattice.flag_f_vector())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceQuotientCheck {
    Holds,
    FaceNotMultiplex(ElemId),
    QuotientNotMultiplex(ElemId),
}

/// Face lattice (with top) of `M^{dim,m}` for any `dim >= 0`: a point and a
/// segment are the degenerate cases below dimension 2.
pub fn multiplex_lattice(dim: usize, m: usize) -> Result<Poset> {
    match (dim, m) {
        (0, 0) => Ok(chain(2)),
        (1, 1) => Ok(segment_lattice()),
        (0 | 1, _) => Err(Error::BadParameters { d: dim, n: m }),
        _ => Ok(Multiplex::new(dim, m)?.lattice),
    }
}

/// `k`-fold pyramid over the `m`-gon: the polygon's face lattice times `k`
/// copies of the 2-element chain.
pub fn pyramid_over_polygon(k: usize, m: usize) -> Result<Poset> {
    let two = chain(2);
    (0..k).try_fold(polygon_lattice(m), |acc, _| acc.product(&two))
}

/// Build the inclusion order on a family of vertex sets; returns the sets
/// reordered by (rank, sorted vertex list) and the poset on them.
fn inclusion_lattice(sets: Vec<VertexSet>) -> Result<(Vec<VertexSet>, Poset)> {
    let mut by_size = sets;
    by_size.sort_by_key(|s| (s.len(), s.to_vec()));
    let k = by_size.len();
    let mut covers = Vec::new();
    for (j, &big) in by_size.iter().enumerate() {
        let subs: Vec<usize> = (0..j)
            .filter(|&i| by_size[i] != big && by_size[i].is_subset(big))
            .collect();
        for &i in &subs {
            let small = by_size[i];
            let maximal = !subs
                .iter()
                .any(|&c| c != i && small.is_subset(by_size[c]) && small != by_size[c]);
            if maximal {
                covers.push((i, j));
            }
        }
    }
    let labels = by_size.iter().map(ToString::to_string).collect();
    let provisional = Poset::new(labels, &covers)?;

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (provisional.rank_of(i), by_size[i].to_vec()));
    let mut position = vec![0; k];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let faces: Vec<VertexSet> = order.iter().map(|&i| by_size[i]).collect();
    let mut labels: Vec<String> = faces.iter().map(ToString::to_string).collect();
    if let Some(last) = labels.last_mut() {
        *last = "M".into();
    }
    let covers: Vec<_> = covers
        .iter()
        .map(|&(a, b)| (position[a], position[b]))
        .collect();
    let ranks = order.iter().map(|&i| provisional.rank_of(i)).collect();
    let lattice = Poset::with_ranks(labels, ranks, &covers)?;
    Ok((faces, lattice))
}
