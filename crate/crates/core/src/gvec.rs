//! Local moves on Bier posets and the closed form for their toric `g`.
//!
//! Throughout, `M` is the boundary poset of a multiplex, `M^` its face
//! lattice, `B = [0, t)` and `A = (t, 1]*` (the dual of the half-open upper
//! interval in `M^`, whose bottom is the old top).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bier::{delete_max, BierPoset, Ideal};
use crate::error::{Error, Result};
use crate::multiplex::Multiplex;
use crate::poset::examples::polygon_lattice;
use crate::poset::{is_isomorphic, ElemId, IntervalSpec, Poset};
use crate::toric::{lower_interval_table, toric_g, toric_h};
use crate::IntPolynomial;

/// `(t, 1]*` inside `hat`; `None` when `t` is the top.
fn upper_open_dual(hat: &Poset, t: ElemId) -> Result<Option<Poset>> {
    let top = hat.top().ok_or(Error::NoUniqueTop)?;
    if t == top {
        return Ok(None);
    }
    hat.subposet(IntervalSpec::half_open_below(t, top))?
        .dual()
        .map(Some)
}

fn h_and_g(p: Option<&Poset>) -> Result<(IntPolynomial, IntPolynomial)> {
    match p {
        None => Ok((IntPolynomial::one(), IntPolynomial::one())),
        Some(p) => Ok((toric_h(p)?, toric_g(p)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    /// `h(Bier(P, Q - t)) - h(Bier(P, Q))`, i.e. the left side.
    pub delta_h: IntPolynomial,
    pub delta_g: IntPolynomial,
    /// `h(B) g(A) - g(B) h(A)`.
    pub rhs: IntPolynomial,
    pub matches: bool,
}

/// Compare the change in `h` under removing a maximal `t` from `Q` with the
/// product expression in the lower and upper intervals of `t`.
pub fn delta_h_check(p: &Poset, q: &Ideal, t: ElemId) -> Result<DeltaReport> {
    let smaller = delete_max(p, q, t)?;
    let before = BierPoset::build(p, q)?;
    let after = BierPoset::build(p, &smaller)?;
    let delta_h = &toric_h(after.poset())? - &toric_h(before.poset())?;
    let delta_g = &toric_g(after.poset())? - &toric_g(before.poset())?;

    let hat = p.adjoin_top()?;
    let (h_b, g_b) = h_and_g(p.lower_half_open(t)?.as_ref())?;
    let (h_a, g_a) = h_and_g(upper_open_dual(&hat, t)?.as_ref())?;
    let rhs = &(&h_b * &g_a) - &(&g_b * &h_a);
    Ok(DeltaReport {
        matches: delta_h == rhs,
        delta_h,
        delta_g,
        rhs,
    })
}

/// Per-element data of a multiplex shared by the closed forms.
#[derive(Clone, Debug)]
pub struct MultiplexTables<'a> {
    m: &'a Multiplex,
    /// `g_1([0, t))` for every element of the face lattice.
    g1_lower: Vec<BigInt>,
    /// `g_1((t, 1]*)`; zero at the top.
    g1_upper: Vec<BigInt>,
    quad_duals: Vec<ElemId>,
}

impl<'a> MultiplexTables<'a> {
    pub fn new(m: &'a Multiplex) -> Result<Self> {
        let hat = m.lattice();
        let table = lower_interval_table(hat, true)?;
        let g1_lower = table.g.iter().map(|g| g.coeff(1)).collect();
        let g1_upper = hat
            .elements()
            .map(|t| match upper_open_dual(hat, t)? {
                Some(a) => Ok(toric_g(&a)?.coeff(1)),
                None => Ok(BigInt::zero()),
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            m,
            g1_lower,
            g1_upper,
            quad_duals: quad_duals(m)?,
        })
    }

    pub fn multiplex(&self) -> &Multiplex {
        self.m
    }

    pub fn g1_lower(&self, t: ElemId) -> &BigInt {
        &self.g1_lower[t]
    }

    pub fn g1_upper(&self, t: ElemId) -> &BigInt {
        &self.g1_upper[t]
    }

    /// `g_1(M)`.
    pub fn g1_m(&self) -> &BigInt {
        &self.g1_lower[self.m.top()]
    }

    pub fn quad_duals(&self) -> &[ElemId] {
        &self.quad_duals
    }

    /// First proper face where both `g_1([0, t))` and `g_1((t, 1]*)` are
    /// nonzero.
    pub fn g1_product_violation(&self) -> Option<ElemId> {
        self.m
            .boundary()
            .elements()
            .find(|&t| !self.g1_lower[t].is_zero() && !self.g1_upper[t].is_zero())
    }

    /// Every element of rank at most `ceil(d/2) + 1` lies in the ideal.
    pub fn forced_condition_holds(&self, ideal: &Ideal) -> bool {
        let bound = self.m.d().div_ceil(2) + 1;
        let p = self.m.boundary();
        p.elements()
            .filter(|&x| p.rank_of(x) <= bound)
            .all(|x| ideal.contains(x))
    }
}

/// Faces `t` with `[t, 1]` dualizing to the face lattice of a 4-gon.
pub fn quad_duals(m: &Multiplex) -> Result<Vec<ElemId>> {
    let hat = m.lattice();
    let square = polygon_lattice(4);
    let top = m.top();
    let mut out = Vec::new();
    for t in m.boundary().elements() {
        if hat.rank_of(top) - hat.rank_of(t) != 3 {
            continue;
        }
        let upper = hat.subposet(IntervalSpec::closed(t, top))?.dual()?;
        if is_isomorphic(&upper, &square)?.is_some() {
            out.push(t);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaGReport {
    /// `g(Bier(M, I - t)) - g(Bier(M, I))` by recursion.
    pub recursion: IntPolynomial,
    /// The closed form, when `t` satisfies its rank hypotheses.
    pub closed: Option<IntPolynomial>,
}

impl DeltaGReport {
    /// `false` when the closed form is not available for this `t`.
    pub fn in_range(&self) -> bool {
        self.closed.is_some()
    }
}

/// The closed form of the change in `g`, or `None` outside its hypotheses:
/// a facet (for `d >= 4`, since below that the `x^2` term lies past the
/// degree of `g`), or `d > r(t) > ceil(d/2) + 1`.
pub fn delta_g_closed_form(tab: &MultiplexTables<'_>, t: ElemId) -> Option<IntPolynomial> {
    let d = tab.m.d();
    let r = tab.m.lattice().rank_of(t);
    let (b, a) = (tab.g1_lower(t), tab.g1_upper(t));
    if r == d && d >= 4 {
        return Some(IntPolynomial::from_coeffs(vec![
            BigInt::zero(),
            BigInt::one(),
            b.clone(),
        ]));
    }
    if r < d && r > d.div_ceil(2) + 1 {
        let k = d - r;
        let mut coeffs = vec![BigInt::zero(); k + 3];
        coeffs[k] = a.clone();
        coeffs[k + 1] = a * b + 1;
        coeffs[k + 2] = b.clone();
        return Some(IntPolynomial::from_coeffs(coeffs));
    }
    None
}

/// Change in `g` when the maximal element `t` leaves `I`, by recursion and,
/// where it applies, by the closed form. A disagreement in range is an
/// error.
pub fn delta_g_multiplex(
    tab: &MultiplexTables<'_>,
    ideal: &Ideal,
    t: ElemId,
) -> Result<DeltaGReport> {
    let p = tab.m.boundary();
    let smaller = delete_max(p, ideal, t)?;
    let before = toric_g(BierPoset::build(p, ideal)?.poset())?;
    let after = toric_g(BierPoset::build(p, &smaller)?.poset())?;
    let recursion = &after - &before;
    let closed = delta_g_closed_form(tab, t);
    if let Some(c) = &closed {
        if *c != recursion {
            return Err(Error::ClosedFormMismatch {
                closed: c.to_string(),
                recursion: recursion.to_string(),
            });
        }
    }
    Ok(DeltaGReport { recursion, closed })
}

/// The four-sum closed form for `g(Bier(M, I))`.
pub fn g_bier_closed_form(tab: &MultiplexTables<'_>, ideal: &Ideal) -> IntPolynomial {
    let hat = tab.m.lattice();
    let top = tab.m.top();
    let r_hat = hat.rank_of(top);
    let outside: Vec<ElemId> = hat
        .elements()
        .filter(|&t| t == top || !ideal.contains(t))
        .collect();
    let mut coeffs = vec![BigInt::zero(); r_hat + 2];
    for &t in &outside {
        coeffs[r_hat - hat.rank_of(t)] += 1;
    }
    coeffs[1] += tab.g1_m();
    for &t in outside.iter().filter(|&&t| t != top) {
        let r = hat.rank_of(t);
        coeffs[r_hat - r + 1] += tab.g1_lower(t);
        let within = tab.quad_duals.iter().filter(|&&s| hat.leq(t, s)).count();
        if within > 0 {
            coeffs[r_hat - r - 1] += within;
        }
    }
    IntPolynomial::from_coeffs(coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormReport {
    pub closed: IntPolynomial,
    pub recursion: IntPolynomial,
    /// Whether the ideal contains everything of rank at most `ceil(d/2)+1`.
    pub hypotheses_hold: bool,
}

impl ClosedFormReport {
    pub fn agrees(&self) -> bool {
        self.closed == self.recursion
    }
}

/// Closed form against `toric_g` of the built Bier poset. Disagreement is an
/// error when the ideal satisfies the rank condition, and only reported
/// otherwise.
pub fn check_closed_form(tab: &MultiplexTables<'_>, ideal: &Ideal) -> Result<ClosedFormReport> {
    let recursion = toric_g(BierPoset::build(tab.m.boundary(), ideal)?.poset())?;
    let report = ClosedFormReport {
        closed: g_bier_closed_form(tab, ideal),
        recursion,
        hypotheses_hold: tab.forced_condition_holds(ideal),
    };
    if report.hypotheses_hold && !report.agrees() {
        return Err(Error::ClosedFormMismatch {
            closed: report.closed.to_string(),
            recursion: report.recursion.to_string(),
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MSequenceFailure {
    Empty,
    FirstNotOne,
    Negative {
        index: usize,
    },
    /// `v[index] > bound`, where `bound` is the Macaulay bound from
    /// `v[index - 1]`.
    ExceedsBound {
        index: usize,
        bound: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSequenceVerdict {
    pub holds: bool,
    pub failure: Option<MSequenceFailure>,
}

/// `h^<i>`: write `h = C(a_i, i) + C(a_{i-1}, i-1) + ... + C(a_j, j)` with
/// `a_i > ... > a_j >= j >= 1`, then raise every top and bottom by one.
pub fn macaulay_bound(h: &BigInt, i: usize) -> BigInt {
    assert!(i >= 1, "the bound is defined from degree 1 on");
    let mut rem = h.clone();
    let mut bound = BigInt::zero();
    let mut k = i;
    while rem.is_positive() && k >= 1 {
        // largest a with C(a, k) <= rem, starting from C(k, k) = 1
        let mut a = k;
        let mut c = BigInt::one();
        loop {
            let next = &c * (a + 1) / (a + 1 - k);
            if next > rem {
                break;
            }
            c = next;
            a += 1;
        }
        rem -= &c;
        bound += &c * (a + 1) / (k + 1);
        k -= 1;
    }
    bound
}

/// Macaulay's characterization: `v_0 = 1`, all entries nonnegative, and
/// `v_{i+1} <= v_i^<i>` for `i >= 1`.
pub fn is_m_sequence(v: &[BigInt]) -> MSequenceVerdict {
    let fail = |f| MSequenceVerdict {
        holds: false,
        failure: Some(f),
    };
    if v.is_empty() {
        return fail(MSequenceFailure::Empty);
    }
    if !v[0].is_one() {
        return fail(MSequenceFailure::FirstNotOne);
    }
    if let Some(index) = v.iter().position(|c| c.is_negative()) {
        return fail(MSequenceFailure::Negative { index });
    }
    for i in 1..v.len().saturating_sub(1) {
        let bound = macaulay_bound(&v[i], i);
        if v[i + 1] > bound {
            return fail(MSequenceFailure::ExceedsBound {
                index: i + 1,
                bound,
            });
        }
    }
    MSequenceVerdict {
        holds: true,
        failure: None,
    }
}

/// A graph with `1, |V|, |E|` intended to match `1, g_1, g_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessGraph {
    /// `F<id>` for a facet outside the ideal, `v<k>` for a cone apex.
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl WitnessGraph {
    pub fn f_vector(&self) -> (usize, usize, usize) {
        (1, self.vertices.len(), self.edges.len())
    }
}

/// The graph on facets outside `I` plus `g_1(M)` apex vertices: ridges
/// outside `I` join their two facets, facet `t` is joined to the first
/// `g_1([0, t))` apexes, and each 4-gon dual face outside `I` gets a
/// diagonal. Its counts are checked against `g`.
pub fn kk_witness(
    tab: &MultiplexTables<'_>,
    ideal: &Ideal,
    g: &IntPolynomial,
) -> Result<WitnessGraph> {
    let hat = tab.m.lattice();
    let d = tab.m.d();
    let outside = |t: ElemId| !ideal.contains(t);
    let facets: Vec<ElemId> = hat
        .elements_of_rank(d)
        .into_iter()
        .filter(|&t| outside(t))
        .collect();
    let position = |f: ElemId| facets.binary_search(&f).expect("facet outside the ideal");
    let apexes = tab.g1_m().to_usize().unwrap_or(0);

    let mut vertices: Vec<String> = facets.iter().map(|f| format!("F{f}")).collect();
    vertices.extend((0..apexes).map(|k| format!("v{k}")));

    let mut edges = BTreeSet::new();
    let mut add = |a: usize, b: usize| edges.insert((a.min(b), a.max(b)));
    for ridge in hat
        .elements_of_rank(d - 1)
        .into_iter()
        .filter(|&t| outside(t))
    {
        if let [a, b] = hat.upper_covers(ridge) {
            add(position(*a), position(*b));
        }
    }
    for (i, &f) in facets.iter().enumerate() {
        let k = tab.g1_lower(f).to_usize().unwrap_or(0).min(apexes);
        for j in 0..k {
            add(i, facets.len() + j);
        }
    }
    for &t in tab.quad_duals().iter().filter(|&&t| outside(t)) {
        let above: Vec<ElemId> = hat
            .up_set(t)
            .ones()
            .filter(|&f| hat.rank_of(f) == d)
            .collect();
        let first = above[0];
        let opposite = above[1..].iter().copied().find(|&f| {
            !hat.upper_covers(t)
                .iter()
                .any(|&ridge| hat.leq(ridge, first) && hat.leq(ridge, f))
        });
        if let Some(o) = opposite {
            add(position(first), position(o));
        }
    }
    let graph = WitnessGraph {
        vertices,
        edges: edges.into_iter().collect(),
    };
    let expected = (g.coeff(0), g.coeff(1), g.coeff(2));
    let (one, v, e) = graph.f_vector();
    if BigInt::from(one) != expected.0
        || BigInt::from(v) != expected.1
        || BigInt::from(e) != expected.2
    {
        return Err(Error::WitnessMismatch {
            graph: (one, v, e),
            expected: (
                expected.0.to_string(),
                expected.1.to_string(),
                expected.2.to_string(),
            ),
        });
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bier::IdealFamily;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Monomials of degree `deg` in `vars` variables as exponent vectors, in
    /// lex order (largest first).
    fn lex_monomials(vars: usize, deg: usize) -> Vec<Vec<usize>> {
        fn go(vars: usize, deg: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if prefix.len() + 1 == vars {
                prefix.push(deg);
                out.push(prefix.clone());
                prefix.pop();
                return;
            }
            for e in (0..=deg).rev() {
                prefix.push(e);
                go(vars, deg - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(vars, deg, &mut Vec::new(), &mut out);
        out
    }

    /// Largest degree-`deg+1` value after `h` at degree `deg`: the lex-first
    /// `total - h` monomials span a lex-segment ideal, and whatever it misses
    /// one degree up is the most a quotient can keep.
    fn lex_segment_bound(vars: usize, deg: usize, h: usize) -> usize {
        let here = lex_monomials(vars, deg);
        let mut up = BTreeSet::new();
        for m in here.iter().take(here.len() - h) {
            for v in 0..vars {
                let mut next = m.clone();
                next[v] += 1;
                up.insert(next);
            }
        }
        lex_monomials(vars, deg + 1).len() - up.len()
    }

    #[test]
    fn macaulay_bound_matches_lex_segments() {
        for vars in 1..=4 {
            for deg in 1..=3 {
                let total = lex_monomials(vars, deg).len();
                for h in 0..=total {
                    assert_eq!(
                        macaulay_bound(&BigInt::from(h), deg),
                        BigInt::from(lex_segment_bound(vars, deg, h)),
                        "vars={vars} deg={deg} h={h}"
                    );
                }
            }
        }
    }

    #[test]
    fn m_sequences() {
        assert!(is_m_sequence(&big(&[1, 3, 6])).holds);
        assert!(is_m_sequence(&big(&[1, 7, 2])).holds);
        let v = is_m_sequence(&big(&[1, 2, 4]));
        assert_eq!(
            v.failure,
            Some(MSequenceFailure::ExceedsBound {
                index: 2,
                bound: BigInt::from(3)
            })
        );
        assert!(!is_m_sequence(&big(&[2, 1])).holds);
        assert!(!is_m_sequence(&big(&[1, -1])).holds);
        assert!(is_m_sequence(&big(&[1])).holds);
        assert!(!is_m_sequence(&big(&[1, 1, 0, 1])).holds);
    }

    #[test]
    fn quad_duals_count() {
        for (d, n) in [(4, 4), (4, 5), (4, 6), (5, 7)] {
            let m = Multiplex::new(d, n).unwrap();
            let q = quad_duals(&m).unwrap();
            assert_eq!(q.len(), n - d);
            for t in q {
                assert_eq!(m.lattice().rank_of(t), d - 2);
            }
        }
    }

    #[test]
    fn g1_product_vanishes() {
        for (d, n) in [(3, 5), (4, 6), (5, 7)] {
            let m = Multiplex::new(d, n).unwrap();
            let tab = MultiplexTables::new(&m).unwrap();
            assert_eq!(tab.g1_product_violation(), None);
            assert_eq!(*tab.g1_m(), BigInt::from(n - d));
        }
    }

    #[test]
    fn closed_form_at_the_extremes() {
        let m = Multiplex::new(4, 5).unwrap();
        let tab = MultiplexTables::new(&m).unwrap();
        let fam = IdealFamily::forced_for_dimension(m.boundary(), 4).unwrap();
        let min = check_closed_form(&tab, &fam.minimum()).unwrap();
        assert_eq!(min.recursion, IntPolynomial::from_i64s(&[1, 7, 2]));
        assert!(min.agrees());
        let full = check_closed_form(&tab, &Ideal::full(m.boundary())).unwrap();
        assert_eq!(full.recursion, IntPolynomial::from_i64s(&[1, 1]));
        assert!(full.agrees());
    }

    #[test]
    fn facet_moves_on_m45() {
        let m = Multiplex::new(4, 5).unwrap();
        let tab = MultiplexTables::new(&m).unwrap();
        let full = Ideal::full(m.boundary());
        let simplex = m.facet_element(0);
        let wide = m.facet_element(2);
        let a = delta_h_check(m.boundary(), &full, simplex).unwrap();
        let b = delta_h_check(m.boundary(), &full, wide).unwrap();
        assert!(a.matches && b.matches);
        assert_ne!(a.rhs, b.rhs);
        let r = delta_g_multiplex(&tab, &full, simplex).unwrap();
        assert_eq!(r.closed, Some(IntPolynomial::from_i64s(&[0, 1])));
        let r = delta_g_multiplex(&tab, &full, wide).unwrap();
        assert_eq!(r.recursion, IntPolynomial::from_i64s(&[0, 1, 1]));
    }

    #[test]
    fn out_of_range_moves_report_no_closed_form() {
        let m = Multiplex::new(4, 5).unwrap();
        let tab = MultiplexTables::new(&m).unwrap();
        let ideal = Ideal::up_to_rank(m.boundary(), 3);
        let t = m.lattice().elements_of_rank(3)[0];
        let r = delta_g_multiplex(&tab, &ideal, t).unwrap();
        assert!(!r.in_range());
    }

    #[test]
    fn telescoping_over_facet_removals() {
        let m = Multiplex::new(4, 5).unwrap();
        let tab = MultiplexTables::new(&m).unwrap();
        let p = m.boundary();
        let start = toric_g(BierPoset::build(p, &Ideal::full(p)).unwrap().poset()).unwrap();
        let mut ideal = Ideal::full(p);
        let mut total = IntPolynomial::zero();
        for i in [3, 0, 5, 1, 4, 2] {
            let t = m.facet_element(i);
            total = &total + &delta_g_multiplex(&tab, &ideal, t).unwrap().recursion;
            ideal = delete_max(p, &ideal, t).unwrap();
        }
        let end = toric_g(BierPoset::build(p, &ideal).unwrap().poset()).unwrap();
        assert_eq!(&end - &start, total);
    }

    #[test]
    fn witness_for_minimum_ideal() {
        let m = Multiplex::new(4, 5).unwrap();
        let tab = MultiplexTables::new(&m).unwrap();
        let ideal = IdealFamily::forced_for_dimension(m.boundary(), 4)
            .unwrap()
            .minimum();
        let g = IntPolynomial::from_i64s(&[1, 7, 2]);
        let graph = kk_witness(&tab, &ideal, &g).unwrap();
        assert_eq!(graph.f_vector(), (1, 7, 2));
        assert!(kk_witness(&tab, &ideal, &IntPolynomial::from_i64s(&[1, 7, 3])).is_err());
    }

    #[test]
    fn simplex_witness_has_no_cones() {
        let m = Multiplex::new(4, 4).unwrap();
        let tab = MultiplexTables::new(&m).unwrap();
        let fam = IdealFamily::forced_for_dimension(m.boundary(), 4).unwrap();
        for choice in fam.enumerate(64).unwrap() {
            let ideal = fam.ideal(&choice);
            let report = check_closed_form(&tab, &ideal).unwrap();
            let graph = kk_witness(&tab, &ideal, &report.recursion).unwrap();
            assert!(graph.vertices.iter().all(|v| v.starts_with('F')));
        }
    }
}
