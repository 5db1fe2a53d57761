//! Text formats read and written by `dstk`.
//!
//! A system file:
//!
//! ```text
//! dstk-dss v1
//! domain continuous
//! dims 1 1 1
//! A
//! -1
//! B
//! 1
//! C
//! -1
//! D
//! 0
//! ```
//!
//! realizes `1/(s+1)`. `dims` lists `n m p`. The `E` block may be omitted
//! (E = I) and a matrix without columns has no row lines. Blank lines and
//! `#` comments are ignored. A matrix file (for `klf`) is `dstk-mat v1`, a
//! `dims rows cols` line and the rows.

use crate::error::{Error, Result};
use crate::linalg::{eye, Mat};
use crate::system::{DescriptorSystem, TimeDomain};
use std::fmt::Write as _;

pub const SYSTEM_HEADER: &str = "dstk-dss v1";
pub const MATRIX_HEADER: &str = "dstk-mat v1";

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let l = self.peek().ok_or_else(|| {
            let line = self.items.last().map_or(1, |l| l.0 + 1);
            perr(line, 1, format!("unexpected end of input, expected {what}"))
        })?;
        self.pos += 1;
        Ok(l)
    }
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Column (1-based) of each whitespace-separated token.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn expect_header(lines: &mut Lines, header: &str) -> Result<()> {
    let (ln, l) = lines.next("header")?;
    if l != header {
        return Err(perr(ln, 1, format!("expected header `{header}`")));
    }
    Ok(())
}

fn parse_dims(lines: &mut Lines, count: usize) -> Result<Vec<usize>> {
    let (ln, l) = lines.next("dims line")?;
    let t = tokens(l);
    if t.first().map(|t| t.1) != Some("dims") || t.len() != count + 1 {
        return Err(perr(ln, 1, format!("expected `dims` followed by {count} sizes")));
    }
    t[1..]
        .iter()
        .map(|&(c, s)| s.parse::<usize>().map_err(|_| perr(ln, c, format!("invalid size `{s}`"))))
        .collect()
}

fn parse_rows(lines: &mut Lines, rows: usize, cols: usize, label: &str) -> Result<Mat> {
    let mut m = Mat::zeros(rows, cols);
    if cols == 0 {
        return Ok(m);
    }
    for i in 0..rows {
        let (ln, l) = lines.next(&format!("row {} of {label}", i + 1))?;
        let t = tokens(l);
        if t.len() != cols {
            return Err(perr(ln, 1, format!("{label}: expected {cols} entries, found {}", t.len())));
        }
        for (j, (c, s)) in t.into_iter().enumerate() {
            m[(i, j)] = s.parse::<f64>().map_err(|_| perr(ln, c, format!("invalid number `{s}`")))?;
        }
    }
    Ok(m)
}

fn parse_block(lines: &mut Lines, label: &str, rows: usize, cols: usize) -> Result<Mat> {
    let (ln, l) = lines.next(&format!("block {label}"))?;
    if l != label {
        return Err(perr(ln, 1, format!("expected block label `{label}`, found `{l}`")));
    }
    parse_rows(lines, rows, cols, label)
}

pub fn parse_system(text: &str) -> Result<DescriptorSystem> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, SYSTEM_HEADER)?;
    let (ln, l) = lines.next("domain line")?;
    let domain = match tokens(l).as_slice() {
        [(_, "domain"), (_, "continuous")] => TimeDomain::Continuous,
        [(_, "domain"), (_, "discrete")] => TimeDomain::Discrete,
        _ => return Err(perr(ln, 1, "expected `domain continuous` or `domain discrete`")),
    };
    let d = parse_dims(&mut lines, 3)?;
    let (n, m, p) = (d[0], d[1], d[2]);
    let a = parse_block(&mut lines, "A", n, n)?;
    let e = if lines.peek().map(|l| l.1) == Some("E") { Some(parse_block(&mut lines, "E", n, n)?) } else { None };
    let b = parse_block(&mut lines, "B", n, m)?;
    let c = parse_block(&mut lines, "C", p, n)?;
    let dm = parse_block(&mut lines, "D", p, m)?;
    if let Some((ln, l)) = lines.peek() {
        return Err(perr(ln, 1, format!("trailing content `{l}`")));
    }
    DescriptorSystem::new(a, e.unwrap_or_else(|| eye(n)), b, c, dm, domain)
}

pub fn parse_matrix(text: &str) -> Result<Mat> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, MATRIX_HEADER)?;
    let d = parse_dims(&mut lines, 2)?;
    let m = parse_rows(&mut lines, d[0], d[1], "matrix")?;
    if let Some((ln, l)) = lines.peek() {
        return Err(perr(ln, 1, format!("trailing content `{l}`")));
    }
    Ok(m)
}

/// 17 significant digits, which round-trips every finite double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows(out: &mut String, m: &Mat) {
    if m.ncols() == 0 {
        return;
    }
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

/// Renders a system; `E` is written only when it differs from the identity.
pub fn write_system(sys: &DescriptorSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SYSTEM_HEADER}");
    let _ = writeln!(out, "domain {}", sys.domain.name());
    let _ = writeln!(out, "dims {} {} {}", sys.order(), sys.inputs(), sys.outputs());
    let e_is_identity = sys.e == eye(sys.order());
    for (label, m) in [("A", &sys.a), ("E", &sys.e), ("B", &sys.b), ("C", &sys.c), ("D", &sys.d)] {
        if label == "E" && e_is_identity {
            continue;
        }
        let _ = writeln!(out, "{label}");
        write_rows(&mut out, m);
    }
    out
}

pub fn write_matrix(m: &Mat) -> String {
    let mut out = format!("{MATRIX_HEADER}\ndims {} {}\n", m.nrows(), m.ncols());
    write_rows(&mut out, m);
    out
}
