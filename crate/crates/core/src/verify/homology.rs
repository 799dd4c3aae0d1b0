//! Reduced simplicial homology over GF(2) via sparse boundary-matrix
//! reduction.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poset::SimplicialComplexModel;

/// Default cap on the number of faces of a complex.
pub const DEFAULT_FACE_CAP: usize = 400_000;

/// Reduced Betti numbers over GF(2), from dimension `-1` upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    /// `betti[k]` is the reduced Betti number in dimension `k - 1`.
    betti: Vec<usize>,
}

impl HomologyProfile {
    pub fn betti(&self, dim: isize) -> usize {
        usize::try_from(dim + 1)
            .ok()
            .and_then(|i| self.betti.get(i).copied())
            .unwrap_or(0)
    }

    /// Reduced Betti numbers in dimensions `0..=top`.
    pub fn from_dim_zero(&self) -> Vec<usize> {
        self.betti.iter().skip(1).copied().collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti.iter().all(|&b| b == 0)
    }

    /// Homology of a `dim`-sphere: a single 1 in dimension `dim`.
    pub fn is_sphere(&self, dim: isize) -> bool {
        self.betti
            .iter()
            .enumerate()
            .all(|(i, &b)| b == usize::from(i as isize - 1 == dim))
            && self.betti(dim) == 1
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.from_dim_zero().iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn betti_gf2(k: &SimplicialComplexModel) -> Result<HomologyProfile> {
    betti_gf2_capped(k, DEFAULT_FACE_CAP)
}

pub fn betti_gf2_capped(k: &SimplicialComplexModel, cap: usize) -> Result<HomologyProfile> {
    let bound = k.face_count_upper_bound();
    if bound > cap {
        // the bound double counts shared faces, so materialize before refusing
        let actual: usize = k.faces_by_size().iter().map(Vec::len).sum::<usize>() - 1;
        if actual > cap {
            return Err(Error::TooLarge {
                what: "simplicial faces",
                size: actual,
                cap,
            });
        }
    }
    let faces = k.faces_by_size();
    // faces[s] has size s, i.e. dimension s - 1; faces[0] = [empty face]
    let counts: Vec<usize> = faces.iter().map(Vec::len).collect();
    // rank of the boundary map from size s to size s - 1, for s >= 1
    let mut ranks = vec![0usize; faces.len() + 1];
    for s in 1..faces.len() {
        let index: HashMap<&[usize], usize> = faces[s - 1]
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i))
            .collect();
        let columns = faces[s].iter().map(|face| {
            let mut col: Vec<usize> = (0..face.len())
                .map(|drop| {
                    let sub: Vec<usize> = face
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    index[sub.as_slice()]
                })
                .collect();
            col.sort_unstable();
            col
        });
        ranks[s] = gf2_rank(columns);
    }
    let betti = (0..faces.len())
        .map(|s| counts[s] - ranks[s] - ranks[s + 1])
        .collect();
    Ok(HomologyProfile { betti })
}

/// Rank over GF(2) of a matrix given by sparse sorted columns.
fn gf2_rank(columns: impl Iterator<Item = Vec<usize>>) -> usize {
    let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
    for mut col in columns {
        while let Some(&low) = col.last() {
            match pivots.get(&low) {
                Some(other) => col = symmetric_difference(&col, other),
                None => {
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
