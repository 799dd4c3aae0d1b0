//! Poset isomorphism by colour refinement followed by backtracking.
//!
//! Two posets are isomorphic iff their Hasse diagrams are isomorphic as
//! directed graphs. Colours start from (rank, degrees, up/down-set sizes) and
//! are refined by the multisets of neighbour colours, jointly over both
//! inputs so colour ids are comparable. The search then extends a partial
//! map along the cover graph, only trying same-coloured candidates whose
//! already-mapped neighbours line up.

use std::collections::{HashMap, VecDeque};

use super::{ElemId, Poset};
use crate::error::{Error, Result};

/// Inputs larger than this are refused.
pub const MAX_ISO_ELEMENTS: usize = 5000;

const STEP_BUDGET: u64 = 50_000_000;

/// An explicit isomorphism `p -> q` as a vector indexed by `p`'s ids, or
/// `None` if the posets are not isomorphic.
pub fn is_isomorphic(p: &Poset, q: &Poset) -> Result<Option<Vec<ElemId>>> {
    for size in [p.len(), q.len()] {
        if size > MAX_ISO_ELEMENTS {
            return Err(Error::TooLarge {
                what: "poset elements",
                size,
                cap: MAX_ISO_ELEMENTS,
            });
        }
    }
    if p.len() != q.len()
        || p.cover_count() != q.cover_count()
        || p.rank_counts() != q.rank_counts()
    {
        return Ok(None);
    }

    let (cp, cq) = refine_jointly(p, q);
    let mut hist_p: HashMap<usize, usize> = HashMap::new();
    let mut hist_q: HashMap<usize, usize> = HashMap::new();
    for &c in &cp {
        *hist_p.entry(c).or_default() += 1;
    }
    for &c in &cq {
        *hist_q.entry(c).or_default() += 1;
    }
    if hist_p != hist_q {
        return Ok(None);
    }

    let mut by_color: HashMap<usize, Vec<ElemId>> = HashMap::new();
    for x in q.elements() {
        by_color.entry(cq[x]).or_default().push(x);
    }

    let order = search_order(p, &cp, &hist_p);
    let mut search = Search {
        p,
        q,
        cp: &cp,
        by_color: &by_color,
        order: &order,
        forward: vec![usize::MAX; p.len()],
        backward: vec![usize::MAX; q.len()],
        steps: 0,
    };
    match search.extend(0) {
        Ok(true) => Ok(Some(search.forward)),
        Ok(false) => Ok(None),
        Err(e) => Err(e),
    }
}

fn initial_key(p: &Poset, x: ElemId) -> (usize, usize, usize, usize, usize) {
    (
        p.rank_of(x),
        p.upper_covers(x).len(),
        p.lower_covers(x).len(),
        p.down_set(x).count_ones(..),
        p.up_set(x).count_ones(..),
    )
}

fn refine_jointly(p: &Poset, q: &Poset) -> (Vec<usize>, Vec<usize>) {
    let (mut cp, mut cq) = {
        let keys_p: Vec<_> = p.elements().map(|x| initial_key(p, x)).collect();
        let keys_q: Vec<_> = q.elements().map(|x| initial_key(q, x)).collect();
        relabel(&keys_p, &keys_q)
    };
    let mut classes = count_classes(&cp, &cq);
    loop {
        let keys_p: Vec<_> = p.elements().map(|x| refined_key(p, &cp, x)).collect();
        let keys_q: Vec<_> = q.elements().map(|x| refined_key(q, &cq, x)).collect();
        let (np, nq) = relabel(&keys_p, &keys_q);
        let next = count_classes(&np, &nq);
        cp = np;
        cq = nq;
        if next == classes {
            break;
        }
        classes = next;
    }
    (cp, cq)
}

fn refined_key(p: &Poset, colors: &[usize], x: ElemId) -> (usize, Vec<usize>, Vec<usize>) {
    let mut up: Vec<usize> = p.upper_covers(x).iter().map(|&y| colors[y]).collect();
    let mut down: Vec<usize> = p.lower_covers(x).iter().map(|&y| colors[y]).collect();
    up.sort_unstable();
    down.sort_unstable();
    (colors[x], up, down)
}

fn relabel<K: Ord + Clone>(keys_p: &[K], keys_q: &[K]) -> (Vec<usize>, Vec<usize>) {
    let mut all: Vec<K> = keys_p.iter().chain(keys_q).cloned().collect();
    all.sort();
    all.dedup();
    let id = |k: &K| all.binary_search(k).expect("key present");
    (
        keys_p.iter().map(id).collect(),
        keys_q.iter().map(id).collect(),
    )
}

fn count_classes(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Breadth-first over the cover graph, starting from the rarest colour, so
/// each new element has mapped neighbours constraining it.
fn search_order(p: &Poset, colors: &[usize], hist: &HashMap<usize, usize>) -> Vec<ElemId> {
    let mut seeds: Vec<ElemId> = p.elements().collect();
    seeds.sort_by_key(|&x| (hist[&colors[x]], x));
    let mut seen = vec![false; p.len()];
    let mut order = Vec::with_capacity(p.len());
    for s in seeds {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut next: Vec<ElemId> = p
                .upper_covers(x)
                .iter()
                .chain(p.lower_covers(x))
                .copied()
                .filter(|&y| !seen[y])
                .collect();
            next.sort_by_key(|&y| (hist[&colors[y]], y));
            for y in next {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    p: &'a Poset,
    q: &'a Poset,
    cp: &'a [usize],
    by_color: &'a HashMap<usize, Vec<ElemId>>,
    order: &'a [ElemId],
    forward: Vec<ElemId>,
    backward: Vec<ElemId>,
    steps: u64,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let x = self.order[depth];
        let candidates = &self.by_color[&self.cp[x]];
        for &y in candidates {
            self.steps += 1;
            if self.steps > STEP_BUDGET {
                return Err(Error::TooLarge {
                    what: "isomorphism search steps",
                    size: self.steps as usize,
                    cap: STEP_BUDGET as usize,
                });
            }
            if self.backward[y] != usize::MAX || !self.consistent(x, y) {
                continue;
            }
            self.forward[x] = y;
            self.backward[y] = x;
            if self.extend(depth + 1)? {
                return Ok(true);
            }
            self.forward[x] = usize::MAX;
            self.backward[y] = usize::MAX;
        }
        Ok(false)
    }

    fn consistent(&self, x: ElemId, y: ElemId) -> bool {
        let check = |from: &[ElemId], to: &[ElemId], map: &[ElemId]| {
            let mut mapped = 0;
            for &u in from {
                let image = map[u];
                if image != usize::MAX {
                    mapped += 1;
                    if to.binary_search(&image).is_err() {
                        return None;
                    }
                }
            }
            Some(mapped)
        };
        let (p, q) = (self.p, self.q);
        let up = check(p.upper_covers(x), q.upper_covers(y), &self.forward);
        let down = check(p.lower_covers(x), q.lower_covers(y), &self.forward);
        let up_back = check(q.upper_covers(y), p.upper_covers(x), &self.backward);
        let down_back = check(q.lower_covers(y), p.lower_covers(x), &self.backward);
        matches!((up, up_back), (Some(a), Some(b)) if a == b)
            && matches!((down, down_back), (Some(a), Some(b)) if a == b)
    }
}
