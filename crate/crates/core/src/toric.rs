//! Toric f, h and g polynomials of lower Eulerian posets.
//!
//! For a graded poset `P` with bottom and rank `r`,
//!
//! ```text
//! f(P, x) = sum over t in P of g([0, t), x) * (x - 1)^(r - rank t)
//! h(P, x) = x^r f(P, 1/x)
//! g(P, x) = h_0 + (h_1 - h_0) x + ... up to degree floor(r / 2)
//! ```
//!
//! with `f(∅) = g(∅) = 1`. The half-open interval `[0, t)` has rank
//! `rank t - 1`. Every `g([0, t))` is computed once per poset, in rank order,
//! and both definitions of `g` (differences of `h`, truncation of
//! `(1 - x) f`) are evaluated and compared.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;
use crate::poset::{ElemId, Poset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricReport {
    pub f: IntPolynomial,
    pub h: IntPolynomial,
    pub g: IntPolynomial,
    pub g_bar: IntPolynomial,
    pub rank: usize,
    /// Every lower interval `[0, t]` passed the palindromicity check.
    pub lower_eulerian_ok: bool,
}

/// `g` from the coefficients of `h = x^rank f(1/x)`.
fn g_by_h_differences(f: &IntPolynomial, rank: usize) -> Result<IntPolynomial> {
    let h = f.reverse(rank)?;
    let half = rank / 2;
    let coeffs: Vec<BigInt> = (0..=half)
        .map(|i| {
            if i == 0 {
                h.coeff(0)
            } else {
                h.coeff(i) - h.coeff(i - 1)
            }
        })
        .collect();
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// `g = T_{floor(rank/2)}((1 - x) f)`.
pub fn g_by_truncation(f: &IntPolynomial, rank: usize) -> IntPolynomial {
    let one_minus_x = IntPolynomial::from_i64s(&[1, -1]);
    (&one_minus_x * f).truncate((rank / 2) as isize)
}

/// `g` of a poset of the given rank from its `f`, checking that both
/// definitional routes agree.
pub fn g_from_f(f: &IntPolynomial, rank: usize) -> Result<IntPolynomial> {
    let by_truncation = g_by_truncation(f, rank);
    let by_h = g_by_h_differences(f, rank).map_err(|_| Error::DefinitionMismatch {
        by_h: "undefined (deg f exceeds rank)".into(),
        by_truncation: by_truncation.to_string(),
    })?;
    if by_h != by_truncation {
        return Err(Error::DefinitionMismatch {
            by_h: by_h.to_string(),
            by_truncation: by_truncation.to_string(),
        });
    }
    Ok(by_truncation)
}

/// Cached powers `(x - 1)^k`.
struct Powers(Vec<IntPolynomial>);

impl Powers {
    fn new(max: usize) -> Self {
        let base = IntPolynomial::from_i64s(&[-1, 1]);
        let mut v = vec![IntPolynomial::one()];
        for k in 1..=max {
            let next = &v[k - 1] * &base;
            v.push(next);
        }
        Self(v)
    }

    fn get(&self, k: usize) -> &IntPolynomial {
        &self.0[k]
    }
}

/// `sum over s in elems of g_s (x - 1)^(top_rank - rank s)`, grouping by rank
/// so each power is multiplied once.
fn weighted_sum(
    p: &Poset,
    elems: impl Iterator<Item = ElemId>,
    g: &[IntPolynomial],
    top_rank: usize,
    powers: &Powers,
) -> IntPolynomial {
    let mut by_rank = vec![IntPolynomial::zero(); top_rank + 1];
    for s in elems {
        by_rank[p.rank_of(s)] += &g[s];
    }
    by_rank
        .iter()
        .enumerate()
        .filter(|(_, sum)| !sum.is_zero())
        .fold(IntPolynomial::zero(), |acc, (k, sum)| {
            acc + sum * powers.get(top_rank - k)
        })
}

/// Result of the memoized pass over all lower intervals.
pub struct LowerIntervalTable {
    /// `g([0, t))` for every element `t`.
    pub g: Vec<IntPolynomial>,
    /// First element whose lower interval failed the palindromicity check.
    pub first_violation: Option<ElemId>,
}

/// `g([0, t))` for every `t`. In strict mode the first non-palindromic
/// `f([0, t))` or route disagreement is an error; otherwise the truncation
/// route is used throughout and the first violation is recorded.
pub fn lower_interval_table(p: &Poset, strict: bool) -> Result<LowerIntervalTable> {
    let bottom = p.require_bottom()?;
    let powers = Powers::new(p.rank() + 1);
    let mut g = vec![IntPolynomial::zero(); p.len()];
    let mut first_violation = None;
    for t in p.rank_order() {
        if t == bottom {
            g[t] = IntPolynomial::one();
            continue;
        }
        let rank = p.rank_of(t) - 1;
        let below = p.down_set(t).ones().filter(|&s| s != t);
        let f = weighted_sum(p, below, &g, rank, &powers);
        let palindromic = f.is_palindrome(rank);
        let value = match g_from_f(&f, rank) {
            Ok(v) if palindromic => v,
            Ok(_) | Err(Error::DefinitionMismatch { .. }) => {
                if strict {
                    return Err(Error::NotLowerEulerian(t));
                }
                first_violation.get_or_insert(t);
                g_by_truncation(&f, rank)
            }
            Err(e) => return Err(e),
        };
        g[t] = value;
    }
    Ok(LowerIntervalTable { g, first_violation })
}

fn f_from_table(p: &Poset, g: &[IntPolynomial]) -> IntPolynomial {
    let powers = Powers::new(p.rank());
    weighted_sum(p, p.elements(), g, p.rank(), &powers)
}

/// Toric `f` of a lower Eulerian poset with bottom.
pub fn toric_f(p: &Poset) -> Result<IntPolynomial> {
    let table = lower_interval_table(p, true)?;
    Ok(f_from_table(p, &table.g))
}

pub fn toric_h(p: &Poset) -> Result<IntPolynomial> {
    toric_f(p)?.reverse(p.rank())
}

/// Toric `g`; fails with `DefinitionMismatch` unless `P` plus a top is
/// Eulerian enough for the two routes to coincide.
pub fn toric_g(p: &Poset) -> Result<IntPolynomial> {
    g_from_f(&toric_f(p)?, p.rank())
}

/// Coefficient of `x` in the toric `g`, i.e. `h_1 - h_0`.
pub fn g1(p: &Poset) -> Result<BigInt> {
    Ok(toric_g(p)?.coeff(1))
}

/// Lenient evaluation: never fails on non-Eulerian intervals, but flags them.
/// `g` and `g_bar` use the truncation route on the top-level `f`.
pub fn toric_report(p: &Poset) -> Result<ToricReport> {
    let table = lower_interval_table(p, false)?;
    let f = f_from_table(p, &table.g);
    let rank = p.rank();
    let h = f.reverse(rank)?;
    let g = g_by_truncation(&f, rank);
    let g_bar = &(&IntPolynomial::from_i64s(&[1, -1]) * &f) - &g;
    Ok(ToricReport {
        f,
        h,
        g,
        g_bar,
        rank,
        lower_eulerian_ok: table.first_violation.is_none(),
    })
}

/// Toric `f` by the textbook recursion without memoization: each
/// `g([0, t))` is recomputed from the induced subposet. Exponential; for
/// cross-checking only.
pub fn toric_f_unmemoized(p: &Poset) -> Result<IntPolynomial> {
    let r = p.rank();
    let mut total = IntPolynomial::zero();
    for t in p.elements() {
        let g_t = match p.lower_half_open(t)? {
            None => IntPolynomial::one(),
            Some(lower) => g_by_truncation(&toric_f_unmemoized(&lower)?, lower.rank()),
        };
        total += &(&g_t * &IntPolynomial::x_minus_one_pow(r - p.rank_of(t)));
    }
    Ok(total)
}

/// Both sides of the two product identities for bounded Eulerian posets
/// `P1`, `P2`:
/// `g(∂(P1 × P2)) = g(∂P1) g(∂P2)` and `h(∂P1 × ∂P2) = h(∂P1) h(∂P2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductIdentityReport {
    pub g_of_product: IntPolynomial,
    pub g_product: IntPolynomial,
    pub h_of_product: IntPolynomial,
    pub h_product: IntPolynomial,
}

impl ProductIdentityReport {
    pub fn g_identity_holds(&self) -> bool {
        self.g_of_product == self.g_product
    }

    pub fn h_identity_holds(&self) -> bool {
        self.h_of_product == self.h_product
    }

    pub fn holds(&self) -> bool {
        self.g_identity_holds() && self.h_identity_holds()
    }
}

pub fn verify_product_identities(p1: &Poset, p2: &Poset) -> Result<ProductIdentityReport> {
    let b1 = p1.remove_top()?;
    let b2 = p2.remove_top()?;
    let boundary_of_product = p1.product(p2)?.remove_top()?;
    let product_of_boundaries = b1.product(&b2)?;
    Ok(ProductIdentityReport {
        g_of_product: toric_g(&boundary_of_product)?,
        g_product: &toric_g(&b1)? * &toric_g(&b2)?,
        h_of_product: toric_h(&product_of_boundaries)?,
        h_product: &toric_h(&b1)? * &toric_h(&b2)?,
    })
}
