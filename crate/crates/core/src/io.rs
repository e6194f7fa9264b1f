//! Plain-text formats.
//!
//! MPX v1 (maniplexes):
//!
//! ```text
//! # provenance cross(hemicube)
//! mpx <rank> <num_flags>
//! adj <i> <num_flags images>        one line per colour
//! facets <l> <num_flags hex labels> optional
//! ```
//!
//! WGT v1 (weights): `wgt <k>` then `w <i> <num_flags values>` per colour.
//! CLR v1 (colourings): `clr <l> <colour per facet>`.
//!
//! Blank lines and `#` comments are ignored, except that a leading
//! `# provenance <text>` comment restores [`Maniplex::provenance`].

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::extend::{Colouring, ColouringKind};
use crate::maniplex::{FacetLabels, Maniplex};
use crate::weights::WeightFunction;

const PROVENANCE: &str = "# provenance ";

struct Line<'a> {
    number: usize,
    fields: Vec<&'a str>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment lines, split on whitespace, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some(Line {
            number: i + 1,
            fields,
        })
    })
}

fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

fn number(line: usize, field: &str, what: &str) -> Result<usize> {
    field.parse().map_err(|_| {
        err(
            line,
            format!("{what}: `{field}` is not a non-negative integer"),
        )
    })
}

fn keyword(line: &Line<'_>, key: &str) -> Result<()> {
    if line.fields[0] == key {
        Ok(())
    } else {
        Err(err(
            line.number,
            format!("expected `{key}`, found `{}`", line.fields[0]),
        ))
    }
}

/// Checks `keyword head.. values..` field counts.
fn arity(line: &Line<'_>, head: usize, values: usize) -> Result<()> {
    let found = line.fields.len().saturating_sub(1 + head);
    if line.fields.len() == 1 + head + values {
        Ok(())
    } else {
        Err(err(
            line.number,
            format!("expected {values} values, found {found}"),
        ))
    }
}

/// Parses MPX v1. The result is shape-checked but not validated.
pub fn parse_mpx(text: &str) -> Result<Maniplex> {
    let provenance = text
        .lines()
        .find_map(|l| l.trim_start().strip_prefix(PROVENANCE))
        .map(|p| p.trim().to_string());
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| err(1, "empty input"))?;
    keyword(&header, "mpx")?;
    arity(&header, 0, 2)?;
    let rank = number(header.number, header.fields[1], "rank")?;
    let num_flags = number(header.number, header.fields[2], "flag count")?;

    let mut adj = Vec::with_capacity(rank);
    for i in 0..rank {
        let line = lines
            .next()
            .ok_or_else(|| err(last_line(text), format!("missing `adj {i}` line")))?;
        keyword(&line, "adj")?;
        arity(&line, 1, num_flags)?;
        let colour = number(line.number, line.fields[1], "colour")?;
        if colour != i {
            return Err(err(
                line.number,
                format!("expected colour {i}, found {colour}"),
            ));
        }
        let row = line.fields[2..]
            .iter()
            .map(|f| number(line.number, f, "flag"))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&bad) = row.iter().find(|&&v| v >= num_flags) {
            return Err(err(line.number, format!("flag {bad} out of range")));
        }
        adj.push(row);
    }
    let mut m = Maniplex::new(rank, adj).map_err(|e| err(header.number, e.to_string()))?;

    if let Some(line) = lines.next() {
        keyword(&line, "facets")?;
        arity(&line, 1, num_flags)?;
        let bits = number(line.number, line.fields[1], "label width")?;
        let labels = line.fields[2..]
            .iter()
            .map(|f| {
                u32::from_str_radix(f, 16)
                    .map_err(|_| err(line.number, format!("`{f}` is not a hex label")))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = FacetLabels::new(bits, labels).map_err(|e| err(line.number, e.to_string()))?;
        m = m
            .with_facet_labels(labels)
            .map_err(|e| err(line.number, e.to_string()))?;
    }
    if let Some(line) = lines.next() {
        return Err(err(line.number, "unexpected trailing content"));
    }
    Ok(match provenance {
        Some(p) => m.with_provenance(p),
        None => m,
    })
}

pub fn write_mpx(m: &Maniplex) -> String {
    let mut out = String::new();
    if !m.provenance().is_empty() {
        let _ = writeln!(out, "{PROVENANCE}{}", m.provenance().replace('\n', " "));
    }
    let _ = writeln!(out, "mpx {} {}", m.rank(), m.num_flags());
    for c in 0..m.rank() {
        let _ = write!(out, "adj {c}");
        for &v in m.adjacency(c) {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    if let Some(labels) = m.facet_labels() {
        let _ = write!(out, "facets {}", labels.bits());
        for &x in labels.labels() {
            let _ = write!(out, " {x:x}");
        }
        out.push('\n');
    }
    out
}

/// Parses WGT v1. Symmetry against a maniplex is checked by
/// [`WeightFunction::check_against`] or [`parse_wgt_for`].
pub fn parse_wgt(text: &str) -> Result<WeightFunction> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| err(1, "empty input"))?;
    keyword(&header, "wgt")?;
    arity(&header, 0, 1)?;
    let modulus = number(header.number, header.fields[1], "modulus")?;
    let mut rows = Vec::new();
    let mut width = None;
    for line in lines {
        keyword(&line, "w")?;
        if line.fields.len() < 2 {
            return Err(err(line.number, "missing colour"));
        }
        let colour = number(line.number, line.fields[1], "colour")?;
        if colour != rows.len() {
            return Err(err(
                line.number,
                format!("expected colour {}, found {colour}", rows.len()),
            ));
        }
        let row = line.fields[2..]
            .iter()
            .map(|f| number(line.number, f, "weight"))
            .collect::<Result<Vec<_>>>()?;
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(err(line.number, "rows have different lengths"));
        }
        rows.push(row);
    }
    WeightFunction::from_raw(modulus, rows).map_err(|e| err(header.number, e.to_string()))
}

/// Parses WGT v1 and checks it against `m`.
pub fn parse_wgt_for(text: &str, m: &Maniplex) -> Result<WeightFunction> {
    let w = parse_wgt(text)?;
    w.check_against(m)?;
    Ok(w)
}

pub fn write_wgt(w: &WeightFunction) -> String {
    let mut out = format!("wgt {}\n", w.modulus());
    for (c, row) in w.rows().iter().enumerate() {
        let _ = write!(out, "w {c}");
        for v in row {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Parses CLR v1; the colouring kind is recorded as custom.
pub fn parse_clr(text: &str) -> Result<Colouring> {
    let mut lines = content_lines(text);
    let line = lines.next().ok_or_else(|| err(1, "empty input"))?;
    keyword(&line, "clr")?;
    if line.fields.len() < 2 {
        return Err(err(line.number, "missing colour count"));
    }
    let l = number(line.number, line.fields[1], "colour count")?;
    let colours = line.fields[2..]
        .iter()
        .map(|f| number(line.number, f, "colour"))
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = lines.next() {
        return Err(err(extra.number, "unexpected trailing content"));
    }
    Colouring::from_raw(l, colours, ColouringKind::Custom)
        .map_err(|e| err(line.number, e.to_string()))
}

pub fn write_clr(c: &Colouring) -> String {
    let mut out = format!("clr {}", c.num_colours());
    for v in c.colours() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    out
}
