//! Plain-text formats.
//!
//! Distance matrix:
//!
//! ```text
//! 3
//! a b c
//! 0 1 inf
//! 1 0 2
//! inf 2 0
//! ```
//!
//! Presheaf: one `label value` line per point, in any order.
//!
//! Sampled function: a header `n min:max:count …` with one axis spec per
//! dimension, then one `coords… value` line per grid point in
//! lexicographic order.
//!
//! In every format blank lines and lines starting with `#` are skipped,
//! and numbers are decimal literals or the tokens `inf` and `-inf`.

use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};
use crate::ext::{ExtReal, Flavor, NegInf, PosInf};
use crate::hausdorff::SubsetSelection;
use crate::legendre::{Axis, Grid, SampledFunction};
use crate::magnitude::{self, MagnitudeSample, Outcome};
use crate::nucleus::Presheaf;
use crate::space::{GenMetricSpace, SpaceKind};

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        ParseError::new(self.line, self.column, msg).into()
    }
}

/// Non-comment lines, each split into located tokens.
fn content_lines(text: &str) -> Vec<(usize, Vec<Token<'_>>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                return None;
            }
            Some((i + 1, tokens(line, i + 1)))
        })
        .collect()
}

fn tokens(line: &str, lineno: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                let column = line[..s].chars().count() + 1;
                out.push(Token { text: &line[s..pos], line: lineno, column });
                start = None;
            }
            (false, None) => start = Some(pos),
            _ => {}
        }
    }
    out
}

fn is_decimal(s: &str) -> bool {
    let s = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (mantissa, None),
    };
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = digits(int)
        && frac.is_none_or(digits)
        && (!int.is_empty() || frac.is_some_and(|f| !f.is_empty()));
    let exponent_ok = exponent.is_none_or(|e| {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        !e.is_empty() && digits(e)
    });
    mantissa_ok && exponent_ok
}

/// Parses one number token: a decimal literal, `inf` or `-inf`.
pub fn parse_number(s: &str) -> std::result::Result<ExtReal, String> {
    match s {
        "inf" => return Ok(PosInf),
        "-inf" => return Ok(NegInf),
        _ => {}
    }
    if !is_decimal(s) {
        return Err(format!("`{s}` is not a number (expected a decimal literal, `inf` or `-inf`)"));
    }
    let v: f64 = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` overflows a 64-bit float; write `inf` for infinity"));
    }
    Ok(ExtReal::Finite(v))
}

fn number(tok: &Token<'_>) -> Result<ExtReal> {
    parse_number(tok.text).map_err(|m| tok.err(m))
}

fn finite_number(tok: &Token<'_>) -> Result<f64> {
    number(tok)?.finite().ok_or_else(|| tok.err(format!("`{}` must be finite here", tok.text)))
}

fn end_of_input(text: &str) -> Error {
    ParseError::new(text.lines().count().max(1), 1, "unexpected end of input").into()
}

struct RawMatrix<'a> {
    labels: Vec<String>,
    cells: Vec<Vec<Token<'a>>>,
}

fn parse_raw_matrix(text: &str) -> Result<RawMatrix<'_>> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    let (_, header) = it.next().ok_or_else(|| end_of_input(text))?;
    if header.len() != 1 {
        return Err(header[1].err("the first line holds only the number of points"));
    }
    let n: usize = header[0]
        .text
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| header[0].err(format!("`{}` is not a positive point count", header[0].text)))?;
    let (lno, labels) = it.next().ok_or_else(|| end_of_input(text))?;
    if labels.len() != n {
        let col = labels.get(n).map_or(1, |t| t.column);
        return Err(ParseError::new(*lno, col, format!("expected {n} labels, found {}", labels.len())).into());
    }
    let mut cells = Vec::with_capacity(n);
    for _ in 0..n {
        let (lno, row) = it.next().ok_or_else(|| end_of_input(text))?;
        if row.len() != n {
            let col = row.get(n).map_or(1, |t| t.column);
            return Err(ParseError::new(*lno, col, format!("expected {n} entries, found {}", row.len())).into());
        }
        cells.push(row.clone());
    }
    if let Some((_, extra)) = it.next() {
        return Err(extra[0].err("unexpected data after the last row"));
    }
    Ok(RawMatrix { labels: labels.iter().map(|t| t.text.to_string()).collect(), cells })
}

/// Labels and entries of a distance matrix, without checking any axioms.
pub fn parse_distance_matrix(text: &str) -> Result<(Vec<String>, Vec<Vec<ExtReal>>)> {
    let raw = parse_raw_matrix(text)?;
    let rows = raw
        .cells
        .iter()
        .map(|r| r.iter().map(number).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok((raw.labels, rows))
}

/// Parses a distance matrix into a space of the given kind. The axioms are
/// not checked; call [`GenMetricSpace::validate`] for those.
pub fn read_space(text: &str, kind: SpaceKind) -> Result<GenMetricSpace> {
    let (labels, rows) = parse_distance_matrix(text)?;
    GenMetricSpace::new(labels, rows, kind)
}

/// A matrix of non-negative integer hom-set counts in the distance-matrix
/// layout.
pub fn parse_count_matrix(text: &str) -> Result<(Vec<String>, Vec<Vec<u64>>)> {
    let raw = parse_raw_matrix(text)?;
    let rows = raw
        .cells
        .iter()
        .map(|r| {
            r.iter()
                .map(|t| t.text.parse::<u64>().map_err(|_| t.err(format!("`{}` is not a non-negative integer", t.text))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((raw.labels, rows))
}

pub fn write_space(space: &GenMetricSpace) -> String {
    let mut out = format!("{}\n{}\n", space.len(), space.labels().join(" "));
    for row in space.rows() {
        out.push_str(&join(row.iter().map(|v| format_g17(v.to_f64()))));
        out.push('\n');
    }
    out
}

/// `label value` lines covering every point of `space` exactly once.
pub fn parse_presheaf(text: &str, space: &GenMetricSpace) -> Result<Presheaf> {
    let mut values: Vec<Option<ExtReal>> = vec![None; space.len()];
    for (lno, toks) in content_lines(text) {
        if toks.len() != 2 {
            let col = toks.get(2).map_or(1, |t| t.column);
            return Err(ParseError::new(lno, col, "expected `label value`").into());
        }
        let idx = space.index_of(toks[0].text).map_err(|_| toks[0].err(format!("unknown label `{}`", toks[0].text)))?;
        if values[idx].is_some() {
            return Err(toks[0].err(format!("label `{}` given twice", toks[0].text)));
        }
        let v = number(&toks[1])?;
        if !v.in_flavor(Flavor::NonNeg) {
            return Err(toks[1].err("presheaf values must be non-negative"));
        }
        values[idx] = Some(v);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| end_of_input_for(text, &format!("no value for label `{}`", space.labels()[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    Presheaf::new(space, values)
}

fn end_of_input_for(text: &str, msg: &str) -> Error {
    ParseError::new(text.lines().count().max(1), 1, msg).into()
}

pub fn write_presheaf(p: &Presheaf) -> String {
    let mut out = String::new();
    for (label, v) in p.0.labels().iter().zip(p.values()) {
        let _ = writeln!(out, "{label} {}", format_g17(v.to_f64()));
    }
    out
}

/// Values in canonical point order on a single line.
pub fn presheaf_row(p: &Presheaf) -> String {
    join(p.values().iter().map(|v| format_g17(v.to_f64())))
}

/// `min:max:count`.
pub fn parse_axis_spec(spec: &str) -> std::result::Result<Axis, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, count] = parts.as_slice() else {
        return Err(format!("`{spec}` is not of the form min:max:count"));
    };
    let min = finite(min)?;
    let max = finite(max)?;
    let count: usize = count.parse().map_err(|_| format!("`{count}` is not a sample count"))?;
    Axis::new(min, max, count).map_err(|e| e.to_string())
}

fn finite(s: &str) -> std::result::Result<f64, String> {
    parse_number(s)?.finite().ok_or_else(|| format!("`{s}` must be finite"))
}

fn format_axis(a: &Axis) -> String {
    format!("{}:{}:{}", format_g17(a.min()), format_g17(a.max()), a.count())
}

pub fn parse_sampled_function(text: &str) -> Result<SampledFunction> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    let (_, header) = it.next().ok_or_else(|| end_of_input(text))?;
    let dim: usize = match header[0].text.parse() {
        Ok(d @ 1..=2) => d,
        _ => return Err(header[0].err(format!("`{}` is not a dimension (1 or 2)", header[0].text))),
    };
    if header.len() != dim + 1 {
        let col = header.get(dim + 1).map_or(1, |t| t.column);
        return Err(ParseError::new(header[0].line, col, format!("expected {dim} axis specs")).into());
    }
    let axes = header[1..].iter().map(|t| parse_axis_spec(t.text).map_err(|m| t.err(m))).collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(axes).map_err(|e| header[0].err(e.to_string()))?;
    let mut values = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (lno, toks) = it.next().ok_or_else(|| end_of_input(text))?;
        if toks.len() != dim + 1 {
            let col = toks.get(dim + 1).map_or(1, |t| t.column);
            return Err(ParseError::new(*lno, col, format!("expected {dim} coordinates and a value")).into());
        }
        let expected = grid.point(i);
        for (d, tok) in toks[..dim].iter().enumerate() {
            let x = finite_number(tok)?;
            if (x - expected[d]).abs() > 1e-9 * (1.0 + expected[d].abs()) {
                return Err(tok.err(format!("expected grid coordinate {}", format_g17(expected[d]))));
            }
        }
        values.push(number(&toks[dim])?);
    }
    if let Some((_, extra)) = it.next() {
        return Err(extra[0].err("more lines than grid points"));
    }
    SampledFunction::new(grid, values)
}

pub fn write_sampled_function(f: &SampledFunction) -> String {
    let g = f.grid();
    let mut out = format!("{} {}\n", g.dim(), join(g.axes().iter().map(format_axis)));
    for (i, v) in f.values().iter().enumerate() {
        let p = g.point(i);
        let coords = join(p[..g.dim()].iter().map(|x| format_g17(*x)));
        let _ = writeln!(out, "{coords} {}", format_g17(v.to_f64()));
    }
    out
}

/// A scale grid `min:max:count` or `min:max:count:log`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.log {
            magnitude::log_grid(self.min, self.max, self.count)
        } else {
            magnitude::linear_grid(self.min, self.max, self.count)
        }
    }
}

pub fn parse_grid_spec(spec: &str) -> std::result::Result<GridSpec, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let (min, max, count, log) = match parts.as_slice() {
        [a, b, c] => (a, b, c, false),
        [a, b, c, "log"] => (a, b, c, true),
        [_, _, _, other] => return Err(format!("unknown grid option `{other}` (expected `log`)")),
        _ => return Err(format!("`{spec}` is not of the form min:max:count[:log]")),
    };
    let spec = GridSpec {
        min: finite(min)?,
        max: finite(max)?,
        count: count.parse().map_err(|_| format!("`{count}` is not a sample count"))?,
        log,
    };
    spec.values().map_err(|e| e.to_string())?;
    Ok(spec)
}

/// Comma-separated labels; the empty string is the empty subset.
pub fn parse_subset(text: &str, space: &GenMetricSpace) -> Result<SubsetSelection> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(SubsetSelection::empty(space));
    }
    let mut idx = Vec::new();
    let mut column = 1;
    for item in text.split(',') {
        let label = item.trim();
        if label.is_empty() {
            return Err(ParseError::new(1, column, "empty label in subset").into());
        }
        idx.push(space.index_of(label)?);
        column += item.chars().count() + 1;
    }
    SubsetSelection::new(space, idx)
}

/// `t value` lines with `nan` for singular samples.
pub fn write_sweep_dat(samples: &[MagnitudeSample]) -> String {
    let mut out = String::new();
    for s in samples {
        let v = match s.value {
            Outcome::Defined(v) => format_g17(v),
            Outcome::Singular => "nan".to_string(),
        };
        let _ = writeln!(out, "{} {v}", format_g17(s.t));
    }
    out
}

/// `t condition` lines.
pub fn write_conditions(samples: &[MagnitudeSample]) -> String {
    let mut out = String::new();
    for s in samples {
        let _ = writeln!(out, "{} {}", format_g17(s.t), format_g17(s.condition));
    }
    out
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(" ")
}

/// `printf("%.17g")`, with `inf`, `-inf` and `nan` spelled out.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    const P: i32 = 17;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let m = strip_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
