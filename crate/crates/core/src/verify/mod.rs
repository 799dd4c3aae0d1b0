//! Eulerian and Gorenstein* checks.
//!
//! Gorenstein* is certified only through a homology surrogate: `P` plus a
//! top must be Eulerian, and every open interval of `P` plus a top must have
//! the GF(2) homology of a sphere of the right dimension. Links of faces in
//! the order complex are joins of open intervals, so this is the link
//! condition restated on intervals.

mod homology;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poset::{ElemId, Poset};

pub use homology::{betti_gf2, betti_gf2_capped, HomologyProfile, DEFAULT_FACE_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerianVerdict {
    pub holds: bool,
    /// First unbalanced interval `[a, b]` in id order.
    pub witness: Option<(ElemId, ElemId)>,
}

/// Every interval `[a, b]` with `a < b` has as many elements of even rank as
/// of odd rank. `P` must have a bottom and a top.
pub fn is_eulerian(p: &Poset) -> Result<EulerianVerdict> {
    if p.bottom().is_none() || p.top().is_none() {
        return Err(Error::NotBounded);
    }
    Ok(first_unbalanced(p, p.elements().collect()))
}

/// The balance check over all intervals starting at the given elements.
fn first_unbalanced(p: &Poset, starts: Vec<ElemId>) -> EulerianVerdict {
    let mut even = FixedBitSet::with_capacity(p.len());
    for x in p.elements().filter(|&x| p.rank_of(x).is_multiple_of(2)) {
        even.insert(x);
    }
    let witness = starts
        .into_par_iter()
        .filter_map(|a| {
            let up = p.up_set(a);
            let mut up_even = up.clone();
            up_even.intersect_with(&even);
            up.ones().filter(|&b| b != a).find_map(|b| {
                let down = p.down_set(b);
                let total = up.intersection_count(down);
                let evens = up_even.intersection_count(down);
                (2 * evens != total).then_some((a, b))
            })
        })
        .min();
    EulerianVerdict {
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GorensteinOptions {
    /// Only open intervals of length at most this are checked; `None`
    /// checks all of them.
    pub max_interval_length: Option<usize>,
    pub face_cap: Option<usize>,
}

impl GorensteinOptions {
    pub fn full() -> Self {
        Self::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GorensteinFailure {
    NotEulerian(ElemId, ElemId),
    /// Order complex of `P - 0` has the wrong homology.
    NotASphere(HomologyProfile),
    /// Open interval `(a, b)` of `P` plus a top has the wrong homology.
    IntervalNotASphere(ElemId, ElemId, HomologyProfile),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinVerdict {
    pub holds: bool,
    pub failure: Option<GorensteinFailure>,
    /// Number of open intervals whose homology was computed.
    pub intervals_checked: usize,
}

/// Default options: the full interval check is opt-in; by default only
/// intervals of length up to 4 are examined.
pub fn is_gorenstein_star(p: &Poset) -> Result<GorensteinVerdict> {
    is_gorenstein_star_with(
        p,
        &GorensteinOptions {
            max_interval_length: Some(4),
            face_cap: None,
        },
    )
}

pub fn is_gorenstein_star_with(p: &Poset, opts: &GorensteinOptions) -> Result<GorensteinVerdict> {
    let bottom = p.require_bottom()?;
    let cap = opts.face_cap.unwrap_or(DEFAULT_FACE_CAP);
    let hat = p.adjoin_top()?;
    let top = hat.top().expect("adjoined top");
    let fail = |failure, checked| GorensteinVerdict {
        holds: false,
        failure: Some(failure),
        intervals_checked: checked,
    };

    let euler = is_eulerian(&hat)?;
    if let Some((a, b)) = euler.witness {
        return Ok(fail(GorensteinFailure::NotEulerian(a, b), 0));
    }

    let whole = crate::poset::order_complex(p, true);
    let profile = betti_gf2_capped(&whole, cap)?;
    if !profile.is_sphere(p.rank() as isize - 1) {
        return Ok(fail(GorensteinFailure::NotASphere(profile), 1));
    }

    let pairs: Vec<(ElemId, ElemId)> = hat
        .elements()
        .flat_map(|a| {
            let hat = &hat;
            hat.up_set(a)
                .ones()
                .map(move |b| (a, b))
                .filter(move |&(a, b)| {
                    let len = hat.rank_of(b) - hat.rank_of(a);
                    len >= 2
                        && !(a == bottom && b == top)
                        && opts.max_interval_length.is_none_or(|m| len <= m)
                })
        })
        .collect();
    let checked = pairs.len() + 1;
    let bad = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<Option<GorensteinFailure>> {
            let inner: Vec<ElemId> = hat
                .closed_interval(a, b)
                .into_iter()
                .filter(|&z| z != a && z != b)
                .collect();
            let k = crate::poset::order_complex_of(&hat, &inner);
            let h = betti_gf2_capped(&k, cap)?;
            let dim = (hat.rank_of(b) - hat.rank_of(a)) as isize - 2;
            Ok((!h.is_sphere(dim)).then_some(GorensteinFailure::IntervalNotASphere(a, b, h)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(match bad {
        Some(failure) => fail(failure, checked),
        None => GorensteinVerdict {
            holds: true,
            failure: None,
            intervals_checked: checked,
        },
    })
}
