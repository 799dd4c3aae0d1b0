//! End-to-end acceptance run. Each criterion prints one `PASS`/`FAIL` line;
//! the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use toric_bier::bier::{bier_poset, BierPoset, Ideal, IdealFamily};
use toric_bier::gvec::{
    check_closed_form, delta_g_multiplex, delta_h_check, is_m_sequence, kk_witness, MultiplexTables,
};
use toric_bier::multiplex::{expected_f_vector, multiplex_lattice, Multiplex};
use toric_bier::poset::examples::{polygon_lattice, segment_lattice};
use toric_bier::poset::{is_isomorphic, order_complex};
use toric_bier::shelling::{build_q, label_multiplex, verify_el};
use toric_bier::sweep::{sweep, SweepConfig, SweepLine};
use toric_bier::toric::{toric_g, toric_h, verify_product_identities};
use toric_bier::verify::{betti_gf2, is_gorenstein_star};
use toric_bier::{IntPolynomial, Poset};

type Outcome = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut Vec<SweepLine>) -> Outcome>;

fn fail<E: std::fmt::Display>(what: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{what}: {e}")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

fn forced(m: &Multiplex) -> Result<(IdealFamily, Vec<Ideal>), String> {
    let family = IdealFamily::forced_for_dimension(m.boundary(), m.d()).map_err(fail("family"))?;
    let ideals = family
        .enumerate(1 << 16)
        .map_err(fail("enumerate"))?
        .iter()
        .map(|c| family.ideal(c))
        .collect();
    Ok((family, ideals))
}

fn multiplex(d: usize, n: usize) -> Result<Multiplex, String> {
    Multiplex::new(d, n).map_err(fail(format!("M^{{{d},{n}}}")))
}

fn c1_multiplex_facts() -> Outcome {
    let shapes: Vec<(usize, usize)> = (2..=6)
        .flat_map(|d| (d..=d + 3).map(move |n| (d, n)))
        .collect();
    let failures = shapes
        .par_iter()
        .map(|&(d, n)| -> Result<(), String> {
            let m = multiplex(d, n)?;
            let tag = format!("M^{{{d},{n}}}");
            ensure(m.f_vector() == expected_f_vector(d, n), || {
                format!("{tag} f-vector {:?}", m.f_vector())
            })?;
            let g = toric_g(m.boundary()).map_err(fail(&tag))?;
            ensure(g == poly(&[1, (n - d) as i64]), || format!("{tag} g = {g}"))?;
            let mut h_want = vec![(n - d + 1) as i64; d + 1];
            h_want[0] = 1;
            h_want[d] = 1;
            let h = toric_h(m.boundary()).map_err(fail(&tag))?;
            ensure(h == poly(&h_want), || format!("{tag} h = {h}"))?;
            ensure(m.verify_self_dual().map_err(fail(&tag))?.is_some(), || {
                format!("{tag} not self-dual")
            })?;
            ensure(m.verify_flag_pyramid().map_err(fail(&tag))?, || {
                format!("{tag} flag f-vector")
            })?;
            let quads = m.quad_2faces().map_err(fail(&tag))?.len();
            ensure(quads == n - d, || {
                format!("{tag} has {quads} quads, expected {}", n - d)
            })
        })
        .filter_map(Result::err)
        .collect::<Vec<String>>()
        .join("; ");
    ensure(failures.is_empty(), || failures.clone())?;
    Ok(format!("{} multiplexes", shapes.len()))
}

fn c2_bier_correctness() -> Outcome {
    let m = multiplex(4, 5)?;
    let full =
        BierPoset::build(m.boundary(), &Ideal::full(m.boundary())).map_err(fail("Bier(M,M)"))?;
    ensure(
        is_isomorphic(full.poset(), m.boundary())
            .map_err(fail("iso"))?
            .is_some(),
        || "Bier(M, M) is not isomorphic to M".into(),
    )?;
    let mut checked = 0;
    for n in [5, 6] {
        let m = multiplex(4, n)?;
        let (_, ideals) = forced(&m)?;
        let bad = ideals.par_iter().enumerate().find_map_first(|(i, ideal)| {
            match bier_poset(m.boundary(), ideal) {
                Ok(_) => None,
                Err(e) => Some(format!("M^{{4,{n}}} ideal #{i}: {e}")),
            }
        });
        if let Some(msg) = bad {
            return Err(msg);
        }
        checked += ideals.len();
    }
    ensure(checked == 64 + 128, || {
        format!("{checked} ideals, expected 192")
    })?;
    Ok(format!("Bier(M,M) = M; {checked} ideals Eulerian"))
}

fn c3_closed_form(lines: &mut Vec<SweepLine>) -> Outcome {
    let mut counts = Vec::new();
    for n in [4, 5, 6] {
        let m = multiplex(4, n)?;
        let tab = MultiplexTables::new(&m).map_err(fail("tables"))?;
        let (_, ideals) = forced(&m)?;
        ideals
            .par_iter()
            .map(|ideal| {
                let r = check_closed_form(&tab, ideal).map_err(fail(format!("n={n}")))?;
                ensure(r.hypotheses_hold && r.agrees(), || {
                    format!("n={n}: closed {} vs recursion {}", r.closed, r.recursion)
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        counts.push(ideals.len());
        let report = sweep(&SweepConfig {
            d: 4,
            n,
            sample: None,
            max_ideals: 1 << 16,
        })
        .map_err(fail("sweep"))?;
        lines.extend(report.lines);
    }
    let m = multiplex(4, 5)?;
    let (family, _) = forced(&m)?;
    let g = toric_g(
        BierPoset::build(m.boundary(), &family.minimum())
            .map_err(fail("I_min"))?
            .poset(),
    )
    .map_err(fail("I_min"))?;
    ensure(g == poly(&[1, 7, 2]), || {
        format!("g(Bier(M^{{4,5}}, I_min)) = {g}")
    })?;
    Ok(format!("ideals per n = {counts:?}; I_min g = {g}"))
}

fn c4_delta_h() -> Outcome {
    let m = multiplex(4, 5)?;
    let p = m.boundary();
    let (_, ideals) = forced(&m)?;
    let pairs: Vec<(usize, usize)> = ideals
        .iter()
        .enumerate()
        .flat_map(|(i, ideal)| ideal.maximal_elements(p).into_iter().map(move |t| (i, t)))
        .collect();
    let deltas = pairs
        .par_iter()
        .map(|&(i, t)| {
            let r = delta_h_check(p, &ideals[i], t).map_err(fail(format!("ideal #{i}, t={t}")))?;
            ensure(r.matches, || {
                format!("ideal #{i}, t={t}: {} vs {}", r.delta_h, r.rhs)
            })?;
            Ok(r.delta_h)
        })
        .collect::<Result<Vec<_>, String>>()?;

    let mut triples = 0;
    for (a, &(i, t)) in pairs.iter().enumerate() {
        for (b, &(j, u)) in pairs.iter().enumerate().skip(a + 1) {
            if t == u && i != j {
                ensure(deltas[a] == deltas[b], || {
                    format!("t={t}: delta differs between ideals #{i} and #{j}")
                })?;
                triples += 1;
            }
        }
    }
    ensure(triples >= 10, || {
        format!("only {triples} independence triples")
    })?;
    Ok(format!(
        "{} pairs; {triples} independence triples",
        pairs.len()
    ))
}

fn c5_delta_g() -> Outcome {
    let mut facets = 0;
    for n in [5, 6] {
        let m = multiplex(4, n)?;
        let tab = MultiplexTables::new(&m).map_err(fail("tables"))?;
        let full = Ideal::full(m.boundary());
        for t in m.boundary().elements_of_rank(4) {
            let r = delta_g_multiplex(&tab, &full, t)
                .map_err(fail(format!("M^{{4,{n}}} facet {t}")))?;
            ensure(r.in_range(), || format!("facet {t} out of range"))?;
            facets += 1;
        }
    }
    let m = multiplex(6, 7)?;
    let tab = MultiplexTables::new(&m).map_err(fail("tables"))?;
    let ideal = Ideal::up_to_rank(m.boundary(), 5);
    let mids = m.boundary().elements_of_rank(5);
    mids.par_iter()
        .map(|&t| {
            let r = delta_g_multiplex(&tab, &ideal, t).map_err(fail(format!("M^{{6,7}} t={t}")))?;
            ensure(r.in_range(), || format!("rank-5 element {t} out of range"))
        })
        .collect::<Result<Vec<_>, String>>()?;
    ensure(mids.len() >= 5, || {
        format!("only {} rank-5 elements", mids.len())
    })?;
    Ok(format!(
        "{facets} facets; {} rank-5 elements of M^{{6,7}}",
        mids.len()
    ))
}

fn c6_conjecture_support(lines: &[SweepLine]) -> Outcome {
    for l in lines {
        ensure(l.nonneg, || format!("negative g {}", l.g))?;
        ensure(is_m_sequence(l.g.coeffs()).holds, || {
            format!("not an M-sequence: {}", l.g)
        })?;
    }
    let m = multiplex(4, 5)?;
    let tab = MultiplexTables::new(&m).map_err(fail("tables"))?;
    let (_, ideals) = forced(&m)?;
    ideals
        .par_iter()
        .map(|ideal| {
            let g = toric_g(
                BierPoset::build(m.boundary(), ideal)
                    .map_err(fail("bier"))?
                    .poset(),
            )
            .map_err(fail("g"))?;
            let w = kk_witness(&tab, ideal, &g).map_err(fail("witness"))?;
            let want = (1, to_usize(&g, 1), to_usize(&g, 2));
            ensure(w.f_vector() == want, || {
                format!("witness {:?} vs g {g}", w.f_vector())
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(format!(
        "{} g-vectors; {} witness graphs",
        lines.len(),
        ideals.len()
    ))
}

fn to_usize(g: &IntPolynomial, i: usize) -> usize {
    g.coeffs()
        .get(i)
        .cloned()
        .unwrap_or_default()
        .try_into()
        .unwrap_or(usize::MAX)
}

fn c7_shellability() -> Outcome {
    let mut lattices = 0;
    for d in 2..=5 {
        for n in d..=d + 2 {
            let m = multiplex(d, n)?;
            let labels = label_multiplex(&m).map_err(fail("labels"))?;
            let v = verify_el(m.lattice(), &labels).map_err(fail("verify"))?;
            ensure(v.holds, || {
                format!("c_M on M^{{{d},{n}}} fails at {:?}", v.counterexample)
            })?;
            lattices += 1;
        }
    }
    let m = multiplex(4, 5)?;
    let (family, ideals) = forced(&m)?;
    let failures: Vec<String> = ideals
        .par_iter()
        .filter_map(|ideal| {
            let outcome = build_q(&m, ideal).and_then(|q| verify_el(&q.poset, &q.labels));
            match outcome {
                Ok(v) if v.holds => None,
                Ok(v) => Some(format!(
                    "{:?} at {:?}",
                    family.choice_of(ideal).map(|c| c.to_string()),
                    v.counterexample
                )),
                Err(e) => Some(format!(
                    "{:?}: {e}",
                    family.choice_of(ideal).map(|c| c.to_string())
                )),
            }
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!(
            "c_M ok on {lattices} lattices; (Q, c) not EL for {}/{} ideals, first ideal={}",
            failures.len(),
            ideals.len(),
            failures[0]
        )
    })?;
    Ok(format!(
        "c_M on {lattices} lattices; (Q, c) on {} ideals",
        ideals.len()
    ))
}

fn gorenstein(p: &Poset, what: &str) -> Result<(), String> {
    let v = is_gorenstein_star(p).map_err(fail(what))?;
    ensure(v.holds, || format!("{what}: {:?}", v.failure))
}

fn c8_gorenstein() -> Outcome {
    for n in [4, 5] {
        gorenstein(multiplex(4, n)?.boundary(), &format!("M^{{4,{n}}}"))?;
    }
    let m = multiplex(4, 4)?;
    let family = IdealFamily::forced_for_dimension(m.boundary(), 4).map_err(fail("family"))?;
    let sample = family.sample(5, 2024);
    ensure(sample.len() == 5, || format!("{} samples", sample.len()))?;
    for c in &sample {
        let b = BierPoset::build(m.boundary(), &family.ideal(c)).map_err(fail("bier"))?;
        gorenstein(b.poset(), &format!("Bier(M^{{4,4}}, {c})"))?;
    }
    let m = multiplex(4, 5)?;
    let (family, _) = forced(&m)?;
    let b = BierPoset::build(m.boundary(), &family.minimum()).map_err(fail("bier"))?;
    let betti = betti_gf2(&order_complex(b.poset(), true)).map_err(fail("homology"))?;
    ensure(betti.from_dim_zero() == [0, 0, 0, 1], || {
        format!("Betti profile {betti}")
    })?;
    Ok(format!(
        "2 boundaries, 5 Bier posets; I_min profile {betti}"
    ))
}

fn c9_products() -> Outcome {
    let m34 = multiplex_lattice(3, 4).map_err(fail("M^{3,4}"))?;
    let named = [
        ("segment", segment_lattice()),
        ("triangle", polygon_lattice(3)),
        ("square", polygon_lattice(4)),
        ("M^{3,4}", m34),
    ];
    let mut pairs = 0;
    for (a, p1) in &named {
        for (b, p2) in &named {
            let r = verify_product_identities(p1, p2).map_err(fail(format!("{a} x {b}")))?;
            ensure(r.holds(), || format!("{a} x {b}: {r:?}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 multiplex facts", Box::new(|_| c1_multiplex_facts())),
        ("2 bier correctness", Box::new(|_| c2_bier_correctness())),
        ("3 closed form", Box::new(c3_closed_form)),
        ("4 delta h identity", Box::new(|_| c4_delta_h())),
        ("5 delta g closed forms", Box::new(|_| c5_delta_g())),
        (
            "6 nonnegativity, M-sequence, witness",
            Box::new(|l| c6_conjecture_support(l)),
        ),
        ("7 shellability", Box::new(|_| c7_shellability())),
        ("8 gorenstein surrogate", Box::new(|_| c8_gorenstein())),
        ("9 product identities", Box::new(|_| c9_products())),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run(&mut lines);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
