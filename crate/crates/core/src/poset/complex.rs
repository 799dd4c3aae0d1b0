use std::collections::BTreeSet;

use super::{ElemId, Poset};

/// A simplicial complex given by its maximal faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexModel {
    pub vertices: Vec<usize>,
    /// Sorted vertex lists, no facet contained in another.
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplexModel {
    /// Build from arbitrary generating faces, discarding non-maximal ones.
    pub fn from_faces(faces: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut faces: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        faces.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for f in faces {
            if !facets.iter().any(|g| is_subset(&f, g)) {
                facets.push(f);
            }
        }
        facets.sort();
        let vertices = facets
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Self { vertices, facets }
    }

    /// Dimension of the largest facet; `-1` for the complex `{∅}`.
    pub fn dimension(&self) -> isize {
        self.facets
            .iter()
            .map(|f| f.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    /// Faces by size: `result[k]` lists the faces with `k` vertices, sorted.
    /// `result[0]` is the empty face.
    pub fn faces_by_size(&self) -> Vec<Vec<Vec<usize>>> {
        let top = self.facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
        sets[0].insert(Vec::new());
        for facet in &self.facets {
            let k = facet.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| facet[i])
                    .collect();
                sets[face.len()].insert(face);
            }
        }
        sets.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Sum over facets of their nonempty subfaces; bounds the face count
    /// without materializing anything.
    pub fn face_count_upper_bound(&self) -> usize {
        self.facets
            .iter()
            .map(|f| (1usize << f.len().min(62)) - 1)
            .fold(0usize, usize::saturating_add)
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// Order complex: vertices are the elements (without the bottom when
/// `strip_bottom`), facets the maximal chains.
pub fn order_complex(p: &Poset, strip_bottom: bool) -> SimplicialComplexModel {
    let skip = if strip_bottom { p.bottom() } else { None };
    let keep: Vec<ElemId> = p.elements().filter(|&x| Some(x) != skip).collect();
    order_complex_of(p, &keep)
}

/// Order complex of the induced order on `elements` (assumed convex, so
/// maximal chains are cover paths from a minimal to a maximal element).
pub fn order_complex_of(p: &Poset, elements: &[ElemId]) -> SimplicialComplexModel {
    let mut inside = vec![false; p.len()];
    for &x in elements {
        inside[x] = true;
    }
    let starts: Vec<ElemId> = elements
        .iter()
        .copied()
        .filter(|&x| p.lower_covers(x).iter().all(|&y| !inside[y]))
        .collect();
    let mut facets = Vec::new();
    let mut path = Vec::new();
    for s in starts {
        extend_chains(p, &inside, s, &mut path, &mut facets);
    }
    for f in &mut facets {
        f.sort_unstable();
    }
    facets.sort();
    SimplicialComplexModel {
        vertices: elements.to_vec(),
        facets,
    }
}

fn extend_chains(
    p: &Poset,
    inside: &[bool],
    x: ElemId,
    path: &mut Vec<ElemId>,
    out: &mut Vec<Vec<ElemId>>,
) {
    path.push(x);
    let mut extended = false;
    for &y in p.upper_covers(x) {
        if inside[y] {
            extended = true;
            extend_chains(p, inside, y, path, out);
        }
    }
    if !extended {
        out.push(path.clone());
    }
    path.pop();
}
