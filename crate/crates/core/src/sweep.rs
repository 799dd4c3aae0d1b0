//! Sweeps over the forced ideals of a multiplex: one report line per ideal,
//! emitted in enumeration order, and a footer with counts.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bier::{BierPoset, FreeChoice, IdealFamily};
use crate::error::Result;
use crate::gvec::{g_bier_closed_form, is_m_sequence, MultiplexTables};
use crate::multiplex::Multiplex;
use crate::toric::toric_g;
use crate::verify::is_eulerian;
use crate::IntPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub d: usize,
    pub n: usize,
    /// `(count, seed)`; `None` sweeps the whole family.
    pub sample: Option<(usize, u64)>,
    /// Refuse exhaustive sweeps over more ideals than this.
    pub max_ideals: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepLine {
    pub choice: FreeChoice,
    pub g: IntPolynomial,
    pub nonneg: bool,
    pub mseq: bool,
    pub closed_form_ok: bool,
    pub eulerian: bool,
    pub meet: bool,
}

impl SweepLine {
    pub fn render(&self) -> String {
        format!(
            "ideal={} g={} nonneg={} mseq={} closedform={} eulerian={} meet={}",
            self.choice,
            self.g,
            self.nonneg,
            self.mseq,
            if self.closed_form_ok {
                "ok"
            } else {
                "mismatch"
            },
            self.eulerian,
            self.meet,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub lines: Vec<SweepLine>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.lines
            .iter()
            .all(|l| l.nonneg && l.mseq && l.closed_form_ok && l.eulerian && l.meet)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&line.render());
            out.push('\n');
        }
        let count = |f: fn(&SweepLine) -> bool| self.lines.iter().filter(|l| f(l)).count();
        let _ = writeln!(
            out,
            "# d={} n={} ideals={} nonneg={} mseq={} closedform_ok={} eulerian={} meet={}",
            self.config.d,
            self.config.n,
            self.lines.len(),
            count(|l| l.nonneg),
            count(|l| l.mseq),
            count(|l| l.closed_form_ok),
            count(|l| l.eulerian),
            count(|l| l.meet),
        );
        out
    }
}

pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    let m = Multiplex::new(config.d, config.n)?;
    let tab = MultiplexTables::new(&m)?;
    let family = IdealFamily::forced_for_dimension(m.boundary(), config.d)?;
    let choices = match config.sample {
        Some((k, seed)) => family.sample(k, seed),
        None => family.enumerate(config.max_ideals)?,
    };
    let lines = choices
        .into_par_iter()
        .map(|choice| {
            let ideal = family.ideal(&choice);
            let bier = BierPoset::build(m.boundary(), &ideal)?;
            let g = toric_g(bier.poset())?;
            Ok(SweepLine {
                nonneg: g.is_nonnegative(),
                mseq: is_m_sequence(g.coeffs()).holds,
                closed_form_ok: g_bier_closed_form(&tab, &ideal) == g,
                eulerian: is_eulerian(&bier.poset().adjoin_top()?)?.holds,
                meet: bier.poset().is_meet_semilattice().holds,
                choice,
                g,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        config: config.clone(),
        lines,
    })
}
