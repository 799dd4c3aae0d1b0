//! Edge labelings of multiplex lattices and of augmented duals of Bier
//! posets, and an exhaustive EL check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::bier::{BierPoset, Ideal};
use crate::error::{Error, Result};
use crate::multiplex::{facet_pattern, Multiplex};
use crate::poset::{ElemId, Poset};

pub type Label = u32;

/// Labels on cover pairs `(a, b)`, `a` covered by `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeLabeling {
    labels: BTreeMap<(ElemId, ElemId), Label>,
}

impl EdgeLabeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: ElemId, b: ElemId, label: Label) {
        self.labels.insert((a, b), label);
    }

    pub fn get(&self, a: ElemId, b: ElemId) -> Option<Label> {
        self.labels.get(&(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((ElemId, ElemId), Label)> + '_ {
        self.labels.iter().map(|(&k, &v)| (k, v))
    }

    /// Every cover of `p` is labeled and nothing else is.
    pub fn check_complete(&self, p: &Poset) -> Result<()> {
        if let Some((a, b)) = p.covers().find(|&(a, b)| self.get(a, b).is_none()) {
            return Err(Error::UnlabeledCover(a, b));
        }
        if let Some(&(a, b)) = self.labels.keys().find(|&&(a, b)| !p.is_cover(a, b)) {
            return Err(Error::UnlabeledCover(a, b));
        }
        Ok(())
    }

    /// One `<a> <b> <label>` line per cover.
    pub fn to_text(&self) -> String {
        self.iter()
            .map(|((a, b), l)| format!("{a} {b} {l}\n"))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [a, b, l] = parts[..] else {
                return Err(err("expected `<a> <b> <label>`"));
            };
            let a = a.parse().map_err(|_| err("bad element id"))?;
            let b = b.parse().map_err(|_| err("bad element id"))?;
            let l = l.parse().map_err(|_| err("bad label"))?;
            if out.labels.insert((a, b), l).is_some() {
                return Err(err("duplicate cover"));
            }
        }
        Ok(out)
    }
}

/// A face `N` read as a multiplex on its own ordered vertex set `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePattern {
    pub face: ElemId,
    /// `v_0 < ... < v_l`.
    pub vertices: Vec<usize>,
    pub dim: usize,
    /// `(facet of N, j)` with the facet equal to `F_j(N)`.
    pub facet_index: Vec<(ElemId, usize)>,
}

impl FacePattern {
    /// Label of the cover `F_j(N) < N`.
    pub fn label(&self, j: usize) -> Label {
        let l = self.vertices.len() - 1;
        let v = &self.vertices;
        let k = match j {
            0 => self.dim,
            j if j == l => l - self.dim,
            j => j,
        };
        v[k] as Label
    }
}

pub fn face_pattern(m: &Multiplex, face: ElemId) -> Result<FacePattern> {
    let hat = m.lattice();
    let vertices = m.vertex_set(face).to_vec();
    let dim = hat.rank_of(face).saturating_sub(1);
    let mut facet_index = Vec::new();
    for &f in hat.lower_covers(face) {
        let target = m.vertex_set(f);
        let hits: Vec<usize> = (0..vertices.len())
            .filter(|&j| facet_pattern(&vertices, dim, j) == target)
            .collect();
        if hits.len() != 1 {
            return Err(Error::PatternAmbiguous {
                face,
                facet: f,
                matches: hits.len(),
            });
        }
        facet_index.push((f, hits[0]));
    }
    Ok(FacePattern {
        face,
        vertices,
        dim,
        facet_index,
    })
}

/// `c_M` on every cover of the face lattice (top included).
pub fn label_multiplex(m: &Multiplex) -> Result<EdgeLabeling> {
    let mut out = EdgeLabeling::new();
    for face in m.lattice().elements().filter(|&x| x != m.bottom()) {
        let pattern = face_pattern(m, face)?;
        for &(f, j) in &pattern.facet_index {
            out.insert(f, face, pattern.label(j));
        }
    }
    Ok(out)
}

/// The augmented dual of a Bier poset with its labeling.
#[derive(Clone, Debug)]
pub struct QConstruction {
    pub poset: Poset,
    pub labels: EdgeLabeling,
    /// The formal element, the bottom of `poset`.
    pub formal: ElemId,
    pub bier: BierPoset,
}

/// Adjoin a top to `Bier(M, I)` and dualize. A cover between intervals that
/// grows `[x, y]` to `[x, y']` gets `c_M(y < y')`, one that grows it to
/// `[x', y]` gets `c_M(x' < x)`, and a cover from the formal bottom to
/// `[x, y]` gets `c_M(x < y)`.
pub fn build_q(m: &Multiplex, ideal: &Ideal) -> Result<QConstruction> {
    let c_m = label_multiplex(m)?;
    let bier = BierPoset::build(m.boundary(), ideal)?;
    let poset = bier.poset().adjoin_top()?.dual()?;
    let formal = bier.poset().len();
    let lookup = |a: ElemId, b: ElemId| c_m.get(a, b).ok_or(Error::UnlabeledCover(a, b));

    let mut labels = EdgeLabeling::new();
    for (lo, hi) in poset.covers() {
        let label = if lo == formal {
            let (x, y) = bier.interval(hi);
            lookup(x, y)?
        } else {
            let (x, y) = bier.interval(lo);
            let (x2, y2) = bier.interval(hi);
            if x == x2 {
                lookup(y, y2)?
            } else if y == y2 {
                lookup(x2, x)?
            } else {
                return Err(Error::UnlabeledCover(lo, hi));
            }
        };
        labels.insert(lo, hi, label);
    }
    labels.check_complete(&poset)?;
    Ok(QConstruction {
        poset,
        labels,
        formal,
        bier,
    })
}

/// Distinct label multisets per element above a start, beyond which the
/// check refuses to continue.
pub const MAX_LABEL_SETS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElVerdict {
    pub holds: bool,
    pub counterexample: Option<(ElemId, ElemId)>,
    pub intervals_checked: usize,
}

/// Every interval `[a, b]`, `a < b`, has exactly one strictly rising maximal
/// chain, and its sorted label set is lexicographically least among the
/// sorted label sets of all maximal chains of the interval.
pub fn verify_el(p: &Poset, labels: &EdgeLabeling) -> Result<ElVerdict> {
    if p.bottom().is_none() || p.top().is_none() {
        return Err(Error::NotBounded);
    }
    labels.check_complete(p)?;
    let order = p.rank_order();
    let results = p
        .elements()
        .into_par_iter()
        .map(|a| first_failure_from(p, labels, &order, a))
        .collect::<Result<Vec<_>>>()?;
    let intervals_checked = results.iter().map(|r| r.1).sum();
    let counterexample = results.into_iter().filter_map(|r| r.0).min();
    Ok(ElVerdict {
        holds: counterexample.is_none(),
        counterexample,
        intervals_checked,
    })
}

type LabelSet = Vec<Label>;

fn first_failure_from(
    p: &Poset,
    labels: &EdgeLabeling,
    order: &[ElemId],
    a: ElemId,
) -> Result<(Option<(ElemId, ElemId)>, usize)> {
    let up = p.up_set(a);
    // label sets of all chains a..z, and of rising ones with multiplicity
    let mut all: HashMap<ElemId, BTreeSet<LabelSet>> = HashMap::new();
    let mut rising: HashMap<ElemId, BTreeMap<LabelSet, u64>> = HashMap::new();
    all.insert(a, BTreeSet::from([Vec::new()]));
    rising.insert(a, BTreeMap::from([(Vec::new(), 1)]));
    let mut checked = 0;
    let mut failure = None;

    for &z in order.iter().filter(|&&z| up.contains(z)) {
        if z != a {
            checked += 1;
            let sets = &all[&z];
            let risers = rising.get(&z);
            let count: u64 = risers.map_or(0, |r| r.values().sum());
            let ok = count == 1
                && risers
                    .and_then(|r| r.keys().next())
                    .is_some_and(|s| Some(s) == sets.iter().next());
            if !ok && failure.is_none() {
                failure = Some((a, z));
            }
        }
        for &w in p.upper_covers(z) {
            let c = labels.get(z, w).ok_or(Error::UnlabeledCover(z, w))?;
            let extended: Vec<LabelSet> = all[&z].iter().map(|s| with_label(s, c)).collect();
            let target = all.entry(w).or_default();
            target.extend(extended);
            if target.len() > MAX_LABEL_SETS {
                return Err(Error::TooLarge {
                    what: "label sets per element",
                    size: target.len(),
                    cap: MAX_LABEL_SETS,
                });
            }
            let grown: Vec<(LabelSet, u64)> = rising
                .get(&z)
                .map(|r| {
                    r.iter()
                        // sets of rising chains are sorted, so the last is the last label
                        .filter(|(s, _)| s.last().is_none_or(|&m| m < c))
                        .map(|(s, &n)| (with_label(s, c), n))
                        .collect()
                })
                .unwrap_or_default();
            let target = rising.entry(w).or_default();
            for (s, n) in grown {
                *target.entry(s).or_default() += n;
            }
        }
        all.remove(&z);
        rising.remove(&z);
    }
    Ok((failure, checked))
}

fn with_label(s: &[Label], c: Label) -> LabelSet {
    let mut out = s.to_vec();
    let at = out.partition_point(|&x| x <= c);
    out.insert(at, c);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bier::IdealFamily;
    use crate::poset::examples::boolean_lattice;

    fn maximal_chains(p: &Poset, a: ElemId, b: ElemId) -> Vec<Vec<ElemId>> {
        if a == b {
            return vec![vec![a]];
        }
        let mut out = Vec::new();
        for &w in p.upper_covers(a).iter().filter(|&&w| p.leq(w, b)) {
            for mut rest in maximal_chains(p, w, b) {
                rest.insert(0, a);
                out.push(rest);
            }
        }
        out
    }

    fn chain_labels(l: &EdgeLabeling, chain: &[ElemId]) -> Vec<Label> {
        chain
            .windows(2)
            .map(|w| l.get(w[0], w[1]).unwrap())
            .collect()
    }

    fn natural_boolean(k: usize) -> (Poset, EdgeLabeling) {
        let p = boolean_lattice(k);
        let mut l = EdgeLabeling::new();
        for (a, b) in p.covers() {
            l.insert(a, b, (a ^ b).trailing_zeros());
        }
        (p, l)
    }

    #[test]
    fn boolean_lattice_natural_labels() {
        let (p, l) = natural_boolean(3);
        assert!(verify_el(&p, &l).unwrap().holds);
    }

    #[test]
    fn scrambled_boolean_labels_fail() {
        let (p, mut l) = natural_boolean(3);
        // reverse the labels on the covers into the top
        for (a, b) in p.covers().filter(|&(_, b)| b == 7) {
            let bit = (a ^ b).trailing_zeros();
            l.insert(a, b, 2 - bit);
        }
        let v = verify_el(&p, &l).unwrap();
        assert!(!v.holds);
        let (a, b) = v.counterexample.unwrap();
        assert_eq!(b, 7);
        assert!(p.rank_of(b) - p.rank_of(a) >= 2);
    }

    #[test]
    fn top_labels_of_m46() {
        let m = Multiplex::new(4, 6).unwrap();
        let l = label_multiplex(&m).unwrap();
        let top: Vec<Label> = (0..=6)
            .map(|i| l.get(m.facet_element(i), m.top()).unwrap())
            .collect();
        assert_eq!(top, vec![4, 1, 2, 3, 4, 5, 2]);
    }

    #[test]
    fn small_faces() {
        let m = Multiplex::new(3, 4).unwrap();
        let l = label_multiplex(&m).unwrap();
        let lattice = m.lattice();
        for v in lattice.elements_of_rank(1) {
            let only = m.vertex_set(v).to_vec()[0] as Label;
            assert_eq!(l.get(m.bottom(), v), Some(only));
        }
        for tri in lattice
            .elements_of_rank(3)
            .into_iter()
            .filter(|&t| m.vertex_set(t).len() == 3)
        {
            let p = face_pattern(&m, tri).unwrap();
            let v = &p.vertices;
            let mut got: Vec<(Vec<usize>, Label)> = p
                .facet_index
                .iter()
                .map(|&(f, j)| (m.vertex_set(f).to_vec(), p.label(j)))
                .collect();
            got.sort();
            let mut want = vec![
                (vec![v[0], v[1]], v[2] as Label),
                (vec![v[0], v[2]], v[1] as Label),
                (vec![v[1], v[2]], v[0] as Label),
            ];
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn multiplex_chain_invariants() {
        for (d, n) in [(3, 4), (4, 5), (4, 6)] {
            let m = Multiplex::new(d, n).unwrap();
            let l = label_multiplex(&m).unwrap();
            let lattice = m.lattice();
            for face in lattice.elements().filter(|&x| x != m.bottom()) {
                let verts = m.vertex_set(face).to_vec();
                let dim = lattice.rank_of(face) - 1;
                let mut risers = Vec::new();
                for chain in maximal_chains(lattice, m.bottom(), face) {
                    let labels = chain_labels(&l, &chain);
                    let distinct: BTreeSet<Label> = labels.iter().copied().collect();
                    assert_eq!(distinct.len(), labels.len());
                    if labels.windows(2).all(|w| w[0] < w[1]) {
                        risers.push(labels);
                    }
                }
                assert_eq!(risers.len(), 1, "face {face}");
                let least: Vec<Label> = verts[..=dim].iter().map(|&v| v as Label).collect();
                assert_eq!(risers[0], least);
            }
        }
    }

    #[test]
    fn el_on_small_multiplexes() {
        for (d, n) in [(2, 3), (3, 3), (3, 5), (4, 5)] {
            let m = Multiplex::new(d, n).unwrap();
            let l = label_multiplex(&m).unwrap();
            assert!(verify_el(m.lattice(), &l).unwrap().holds, "M^{{{d},{n}}}");
        }
    }

    #[test]
    fn el_checker_agrees_with_brute_force() {
        let m = Multiplex::new(3, 4).unwrap();
        let l = label_multiplex(&m).unwrap();
        let p = m.lattice();
        let mut brute = true;
        for a in p.elements() {
            for b in p.up_set(a).ones().filter(|&b| b != a) {
                let sets: Vec<Vec<Label>> = maximal_chains(p, a, b)
                    .iter()
                    .map(|c| chain_labels(&l, c))
                    .collect();
                let rising: Vec<&Vec<Label>> = sets
                    .iter()
                    .filter(|s| s.windows(2).all(|w| w[0] < w[1]))
                    .collect();
                let mut sorted: Vec<Vec<Label>> = sets
                    .iter()
                    .map(|s| {
                        let mut s = s.clone();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                sorted.sort();
                brute &= rising.len() == 1 && *rising[0] == sorted[0];
            }
        }
        assert_eq!(brute, verify_el(p, &l).unwrap().holds);
    }

    #[test]
    fn q_for_simplex_with_vertices() {
        let m = Multiplex::new(4, 4).unwrap();
        let ideal = Ideal::up_to_rank(m.boundary(), 1);
        let q = build_q(&m, &ideal).unwrap();
        assert_eq!(q.poset.bottom(), Some(q.formal));
        assert!(q.poset.top().is_some());
        assert_eq!(q.poset.rank(), m.lattice().rank());
        assert_eq!(q.labels.len(), q.poset.cover_count());
        assert!(q.labels.iter().all(|(_, l)| l <= 4));
    }

    #[test]
    fn q_labels_come_from_the_moving_endpoint() {
        let m = Multiplex::new(4, 5).unwrap();
        let fam = IdealFamily::forced_for_dimension(m.boundary(), 4).unwrap();
        let q = build_q(&m, &fam.minimum()).unwrap();
        for ((lo, hi), label) in q.labels.iter().filter(|&((lo, _), _)| lo != q.formal) {
            let (x, y) = q.bier.interval(lo);
            let (x2, y2) = q.bier.interval(hi);
            let moved = if x == x2 {
                m.vertex_set(y2).difference(m.vertex_set(y))
            } else {
                m.vertex_set(x).difference(m.vertex_set(x2))
            };
            assert!(moved.contains(label as usize));
        }
    }

    #[test]
    fn q_reads_lower_chains_backwards() {
        // above [quad, M] the x-part runs down through [0, quad] in M, so
        // the one rising chain of Q there is a falling chain of M
        let m = Multiplex::new(4, 5).unwrap();
        let fam = IdealFamily::forced_for_dimension(m.boundary(), 4).unwrap();
        let q = build_q(&m, &fam.minimum()).unwrap();
        let quad = m.quad_2faces().unwrap()[0];
        let a = q.bier.element_of(quad, m.top()).unwrap();
        let b = q.bier.element_of(m.bottom(), m.top()).unwrap();
        let labels: Vec<Vec<Label>> = maximal_chains(&q.poset, a, b)
            .iter()
            .map(|c| chain_labels(&q.labels, c))
            .collect();
        let rising: Vec<&Vec<Label>> = labels
            .iter()
            .filter(|s| s.windows(2).all(|w| w[0] < w[1]))
            .collect();
        assert_eq!(rising, vec![&vec![1, 4, 5]]);
        assert!(labels.iter().any(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s == [0, 1, 4]
        }));
        let v = verify_el(&q.poset, &q.labels).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn label_file_round_trip() {
        let (_, l) = natural_boolean(2);
        assert_eq!(EdgeLabeling::parse(&l.to_text()).unwrap(), l);
        assert!(matches!(
            EdgeLabeling::parse("0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
