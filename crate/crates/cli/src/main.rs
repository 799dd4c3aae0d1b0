use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use toric_bier::bier::{bier_poset, validate_ideal, Ideal, IdealFamily, DEFAULT_IDEAL_CAP};
use toric_bier::gvec::{
    check_closed_form, delta_g_closed_form, delta_h_check, g_bier_closed_form, is_m_sequence,
    MSequenceFailure, MultiplexTables,
};
use toric_bier::multiplex::{Multiplex, MAX_LATTICE_ELEMENTS};
use toric_bier::poset::{is_isomorphic, parse_poset, write_poset};
use toric_bier::shelling::{build_q, label_multiplex, verify_el, EdgeLabeling};
use toric_bier::sweep::{sweep, SweepConfig};
use toric_bier::toric::{toric_f, toric_g, toric_h};
use toric_bier::verify::{is_eulerian, is_gorenstein_star_with, GorensteinOptions};
use toric_bier::{Error, Poset};

#[derive(Parser, Debug)]
#[command(
    name = "toric-bier",
    version,
    about = "Multiplexes, Bier posets and toric g-vectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest poset (element count) any verb will build.
    #[arg(long, global = true, default_value_t = MAX_LATTICE_ELEMENTS)]
    max_elements: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct Shape {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the boundary poset (or the lattice with --top) of M^{d,n}.
    Multiplex {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        top: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Face numbers, quad count, self-duality and flag f-vector check.
    Census {
        #[command(flatten)]
        shape: Shape,
    },
    /// Toric f, h and g of a poset file, read as the poset below an adjoined top.
    ToricG {
        #[arg(long)]
        poset: PathBuf,
        /// Drop the file's own top element first.
        #[arg(long)]
        strip_top: bool,
    },
    /// Build Bier(P, I) and write it in the poset format.
    Bier {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ideals containing every element of rank at most --force-rank.
    Ideals {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        force_rank: usize,
        #[arg(long, conflicts_with_all = ["enumerate", "sample"])]
        count: bool,
        #[arg(long, conflicts_with = "sample")]
        enumerate: bool,
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_IDEAL_CAP)]
        max_ideals: u64,
    },
    /// Check a property of a poset file. `eulerian` and `selfdual` adjoin a
    /// top first when the poset has none.
    Verify {
        property: Property,
        #[arg(long)]
        poset: PathBuf,
        /// Label file, for `el`.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Check every open interval for `gorenstein`, not just short ones.
        #[arg(long)]
        full: bool,
    },
    /// Change in h and g when a maximal element leaves an ideal of M^{d,n}.
    Delta {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        element: usize,
    },
    /// g(Bier(M, I)) by the closed form and/or the recursion.
    Gbier {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        closed_form: bool,
        #[arg(long)]
        recursion: bool,
    },
    /// Test an integer vector against Macaulay's bound.
    Mseq {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Write a lattice and its edge labels: c_M on M^{d,n}, or the labeled
    /// augmented dual of Bier(M, I) with --ideal.
    ElBuild {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long)]
        out_poset: PathBuf,
        #[arg(long)]
        out_labels: PathBuf,
    },
    /// Report on every forced ideal of M^{d,n} (or a seeded sample).
    Sweep {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_IDEAL_CAP)]
        max_ideals: u64,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Property {
    Eulerian,
    Gorenstein,
    Selfdual,
    El,
}

enum Outcome {
    Holds,
    Violated,
}

enum Failure {
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } | Error::TooMany(_) => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_poset(path: &Path, cap: usize) -> Result<Poset, Failure> {
    let (_, p) = parse_poset(&read(path)?)?;
    check_size(p.len(), cap)?;
    Ok(p)
}

fn check_size(size: usize, cap: usize) -> Result<(), Failure> {
    if size > cap {
        return Err(Error::TooLarge {
            what: "poset elements",
            size,
            cap,
        }
        .into());
    }
    Ok(())
}

fn read_ideal(path: &Path, p: &Poset) -> Result<Ideal, Failure> {
    let mut ids = Vec::new();
    for (i, raw) in read(path)?.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let id = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("expected an element id, found `{line}`"),
        })?;
        ids.push(id);
    }
    Ok(validate_ideal(p, &ids)?)
}

fn multiplex(shape: Shape, cap: usize) -> Result<Multiplex, Failure> {
    let m = Multiplex::new(shape.d, shape.n)?;
    check_size(m.lattice().len(), cap)?;
    Ok(m)
}

fn verdict(holds: bool) -> Outcome {
    if holds {
        Outcome::Holds
    } else {
        Outcome::Violated
    }
}

fn ok(holds: bool) -> &'static str {
    if holds {
        "ok"
    } else {
        "fail"
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Run {
    let cap = cli.max_elements;
    match cli.command {
        Command::Multiplex {
            shape,
            top,
            out: path,
        } => {
            let m = multiplex(shape, cap)?;
            let name = format!("M^{{{},{}}}", shape.d, shape.n);
            let p = if top { m.lattice() } else { m.boundary() };
            fs::write(path, write_poset(&name, p))?;
            Ok(Outcome::Holds)
        }
        Command::Census { shape } => {
            let m = multiplex(shape, cap)?;
            let f: Vec<String> = m.f_vector().iter().map(ToString::to_string).collect();
            let quads = m.quad_2faces()?.len();
            let selfdual = m.verify_self_dual()?.is_some();
            let pyramid = m.verify_flag_pyramid()?;
            writeln!(out, "f = {}", f.join(" "))?;
            writeln!(out, "quads = {quads}")?;
            writeln!(out, "selfdual = {}", ok(selfdual))?;
            writeln!(out, "flagpyramid = {}", ok(pyramid))?;
            Ok(verdict(selfdual && pyramid && quads == shape.n - shape.d))
        }
        Command::ToricG { poset, strip_top } => {
            let mut p = read_poset(&poset, cap)?;
            if strip_top {
                p = p.remove_top()?;
            }
            writeln!(out, "f = {}", toric_f(&p)?)?;
            writeln!(out, "h = {}", toric_h(&p)?)?;
            writeln!(out, "g = {}", toric_g(&p)?)?;
            Ok(Outcome::Holds)
        }
        Command::Bier {
            poset,
            ideal,
            out: path,
        } => {
            let p = read_poset(&poset, cap)?;
            let ideal = read_ideal(&ideal, &p)?;
            let b = match bier_poset(&p, &ideal) {
                Err(Error::EulerianViolation(a, b)) => {
                    writeln!(out, "not eulerian at [{a}, {b}]")?;
                    return Ok(Outcome::Violated);
                }
                other => other?,
            };
            check_size(b.poset().len(), cap)?;
            fs::write(path, write_poset("bier", b.poset()))?;
            Ok(Outcome::Holds)
        }
        Command::Ideals {
            poset,
            force_rank,
            count,
            enumerate,
            sample,
            seed,
            max_ideals,
        } => {
            let p = read_poset(&poset, cap)?;
            let family = IdealFamily::new(&p, force_rank)?;
            let choices = match (count, enumerate, sample) {
                (true, _, _) => {
                    writeln!(out, "{}", family.count(max_ideals)?)?;
                    return Ok(Outcome::Holds);
                }
                (_, true, _) => family.enumerate(max_ideals)?,
                (_, _, Some(k)) => family.sample(k, seed.unwrap_or_default()),
                _ => {
                    return Err(Failure::Input(
                        "one of --count, --enumerate, --sample is required".into(),
                    ))
                }
            };
            for c in choices {
                writeln!(out, "ideal={c} members={}", family.ideal(&c).len())?;
            }
            Ok(Outcome::Holds)
        }
        Command::Verify {
            property,
            poset,
            labels,
            full,
        } => {
            let mut p = read_poset(&poset, cap)?;
            if matches!(property, Property::Eulerian | Property::Selfdual) && p.top().is_none() {
                p = p.adjoin_top()?;
            }
            verify(property, &p, labels.as_deref(), full, out)
        }
        Command::Delta {
            shape,
            ideal,
            element,
        } => {
            let m = multiplex(shape, cap)?;
            let ideal = read_ideal(&ideal, m.boundary())?;
            let report = delta_h_check(m.boundary(), &ideal, element)?;
            let tab = MultiplexTables::new(&m)?;
            writeln!(out, "delta_h = {}", report.delta_h)?;
            writeln!(out, "rhs = {}", report.rhs)?;
            writeln!(out, "match = {}", report.matches)?;
            writeln!(out, "delta_g = {}", report.delta_g)?;
            let closed_ok = match delta_g_closed_form(&tab, element) {
                Some(c) => {
                    writeln!(out, "delta_g_closed = {c}")?;
                    c == report.delta_g
                }
                None => {
                    writeln!(out, "delta_g_closed = out-of-range")?;
                    eprintln!("warning: element {element} is outside the closed form's rank range");
                    true
                }
            };
            Ok(verdict(report.matches && closed_ok))
        }
        Command::Gbier {
            shape,
            ideal,
            closed_form,
            recursion,
        } => {
            let m = multiplex(shape, cap)?;
            let ideal = read_ideal(&ideal, m.boundary())?;
            let tab = MultiplexTables::new(&m)?;
            let (want_closed, want_rec) = match (closed_form, recursion) {
                (false, false) => (true, true),
                pair => pair,
            };
            if want_closed && want_rec {
                let report = match check_closed_form(&tab, &ideal) {
                    Err(Error::ClosedFormMismatch { closed, recursion }) => {
                        writeln!(out, "closed = {closed}")?;
                        writeln!(out, "recursion = {recursion}")?;
                        writeln!(out, "closedform = mismatch")?;
                        return Ok(Outcome::Violated);
                    }
                    other => other?,
                };
                if !report.hypotheses_hold {
                    eprintln!(
                        "warning: ideal misses elements of low rank; closed form may not apply"
                    );
                }
                writeln!(out, "closed = {}", report.closed)?;
                writeln!(out, "recursion = {}", report.recursion)?;
                writeln!(
                    out,
                    "closedform = {}",
                    if report.agrees() { "ok" } else { "mismatch" }
                )?;
                Ok(verdict(report.agrees()))
            } else if want_closed {
                writeln!(out, "closed = {}", g_bier_closed_form(&tab, &ideal))?;
                Ok(Outcome::Holds)
            } else {
                let b = toric_bier::bier::BierPoset::build(m.boundary(), &ideal)?;
                writeln!(out, "recursion = {}", toric_g(b.poset())?)?;
                Ok(Outcome::Holds)
            }
        }
        Command::Mseq { vector } => {
            let v = vector
                .split(',')
                .map(|s| s.trim().parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Input(format!("bad vector `{vector}`: {e}")))?;
            let verdict_ = is_m_sequence(&v);
            match &verdict_.failure {
                None => writeln!(out, "mseq = ok")?,
                Some(MSequenceFailure::Empty) => writeln!(out, "mseq = fail: empty vector")?,
                Some(MSequenceFailure::FirstNotOne) => {
                    writeln!(out, "mseq = fail: first entry must be 1")?
                }
                Some(MSequenceFailure::Negative { index }) => {
                    writeln!(out, "mseq = fail: entry {index} is negative")?
                }
                Some(MSequenceFailure::ExceedsBound { index, bound }) => writeln!(
                    out,
                    "mseq = fail: entry {index} = {} exceeds the bound {bound} from entry {}",
                    v[*index],
                    index - 1
                )?,
            }
            Ok(verdict(verdict_.holds))
        }
        Command::ElBuild {
            shape,
            ideal,
            out_poset,
            out_labels,
        } => {
            let m = multiplex(shape, cap)?;
            let (p, labels) = match ideal {
                None => (m.lattice().clone(), label_multiplex(&m)?),
                Some(path) => {
                    let ideal = read_ideal(&path, m.boundary())?;
                    let q = build_q(&m, &ideal)?;
                    check_size(q.poset.len(), cap)?;
                    (q.poset, q.labels)
                }
            };
            fs::write(out_poset, write_poset("labeled", &p))?;
            fs::write(out_labels, labels.to_text())?;
            Ok(Outcome::Holds)
        }
        Command::Sweep {
            shape,
            sample,
            seed,
            max_ideals,
            report,
        } => {
            multiplex(shape, cap)?;
            let config = SweepConfig {
                d: shape.d,
                n: shape.n,
                sample: sample.map(|k| (k, seed.unwrap_or_default())),
                max_ideals,
            };
            let result = sweep(&config)?;
            fs::write(report, result.render())?;
            Ok(verdict(result.all_pass()))
        }
    }
}

fn verify(
    property: Property,
    p: &Poset,
    labels: Option<&Path>,
    full: bool,
    out: &mut impl Write,
) -> Run {
    match property {
        Property::Eulerian => {
            let v = is_eulerian(p)?;
            match v.witness {
                None => writeln!(out, "eulerian = ok")?,
                Some((a, b)) => writeln!(out, "eulerian = fail at [{a}, {b}]")?,
            }
            Ok(verdict(v.holds))
        }
        Property::Gorenstein => {
            let opts = if full {
                GorensteinOptions::full()
            } else {
                GorensteinOptions {
                    max_interval_length: Some(4),
                    face_cap: None,
                }
            };
            let v = is_gorenstein_star_with(p, &opts)?;
            match &v.failure {
                None => writeln!(out, "gorenstein = ok ({} intervals)", v.intervals_checked)?,
                Some(f) => writeln!(out, "gorenstein = fail: {f:?}")?,
            }
            Ok(verdict(v.holds))
        }
        Property::Selfdual => {
            let found = is_isomorphic(p, &p.dual()?)?;
            match &found {
                Some(map) => {
                    let pairs: Vec<String> = map
                        .iter()
                        .enumerate()
                        .map(|(a, b)| format!("{a}->{b}"))
                        .collect();
                    writeln!(out, "selfdual = ok")?;
                    writeln!(out, "map = {}", pairs.join(" "))?;
                }
                None => writeln!(out, "selfdual = fail")?,
            }
            Ok(verdict(found.is_some()))
        }
        Property::El => {
            let path = labels.ok_or_else(|| Failure::Input("verify el needs --labels".into()))?;
            let labels = EdgeLabeling::parse(&read(path)?)?;
            let v = verify_el(p, &labels)?;
            match v.counterexample {
                None => writeln!(out, "el = ok ({} intervals)", v.intervals_checked)?,
                Some((a, b)) => writeln!(out, "el = fail at [{a}, {b}]")?,
            }
            Ok(verdict(v.holds))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = match run(cli, &mut lock) {
        Ok(Outcome::Holds) => 0,
        Ok(Outcome::Violated) => 1,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    };
    let _ = lock.flush();
    ExitCode::from(code)
}
