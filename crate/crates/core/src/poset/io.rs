//! Line-oriented ASCII poset format:
//!
//! ```text
//! poset <name>
//! elements <k>
//! <id> <rank> <label>      (k lines)
//! covers <m>
//! <a> <b>                  (m lines, a covered by b)
//! end
//! ```

use std::fmt::Write as _;

use super::{ElemId, Poset};
use crate::error::{Error, Result};

pub fn write_poset(name: &str, p: &Poset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "poset {name}");
    let _ = writeln!(out, "elements {}", p.len());
    for x in p.elements() {
        let label = if p.label(x).is_empty() {
            x.to_string()
        } else {
            p.label(x).replace(char::is_whitespace, "_")
        };
        let _ = writeln!(out, "{x} {} {label}", p.rank_of(x));
    }
    let _ = writeln!(out, "covers {}", p.cover_count());
    for (a, b) in p.covers() {
        let _ = writeln!(out, "{a} {b}");
    }
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line, with its 1-based number.
    fn next_line(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok((i + 1, tokens));
            }
        }
        Err(Error::Parse {
            line: 0,
            msg: "unexpected end of input (missing `end`?)".into(),
        })
    }
}

fn parse_num(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a nonnegative integer, got `{tok}`"),
    })
}

fn expect_header<'a>(line: usize, tokens: &[&'a str], key: &str) -> Result<&'a str> {
    match tokens {
        [k, v] if *k == key => Ok(v),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected `{key} <value>`"),
        }),
    }
}

/// Parse the poset format, returning the declared name and the validated poset.
pub fn parse_poset(text: &str) -> Result<(String, Poset)> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (ln, toks) = lines.next_line()?;
    let name = expect_header(ln, &toks, "poset")?.to_string();

    let (ln, toks) = lines.next_line()?;
    let k = parse_num(ln, expect_header(ln, &toks, "elements")?)?;
    let mut labels = vec![None; k];
    let mut ranks = vec![0usize; k];
    for _ in 0..k {
        let (ln, toks) = lines.next_line()?;
        let [id, rank, label] = toks[..] else {
            return Err(Error::Parse {
                line: ln,
                msg: "expected `<id> <rank> <label>`".into(),
            });
        };
        let id = parse_num(ln, id)?;
        if id >= k {
            return Err(Error::Parse {
                line: ln,
                msg: format!("id {id} out of range 0..{k}"),
            });
        }
        if labels[id].is_some() {
            return Err(Error::Parse {
                line: ln,
                msg: format!("duplicate id {id}"),
            });
        }
        labels[id] = Some(label.to_string());
        ranks[id] = parse_num(ln, rank)?;
    }
    let labels: Vec<String> = labels.into_iter().map(Option::unwrap_or_default).collect();

    let (ln, toks) = lines.next_line()?;
    let m = parse_num(ln, expect_header(ln, &toks, "covers")?)?;
    let mut covers: Vec<(ElemId, ElemId)> = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, toks) = lines.next_line()?;
        let [a, b] = toks[..] else {
            return Err(Error::Parse {
                line: ln,
                msg: "expected `<a> <b>`".into(),
            });
        };
        covers.push((parse_num(ln, a)?, parse_num(ln, b)?));
    }
    let (ln, toks) = lines.next_line()?;
    if toks != ["end"] {
        return Err(Error::Parse {
            line: ln,
            msg: "expected `end`".into(),
        });
    }
    let poset = Poset::with_ranks(labels, ranks, &covers)?;
    Ok((name, poset))
}
