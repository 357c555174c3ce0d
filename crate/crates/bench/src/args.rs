//! Parsers for the size, list and range flags.

use std::fmt;
use std::str::FromStr;

/// Matrix shape given as `M` (square) or `MxN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Size {
    pub m: usize,
    pub n: usize,
}

impl Size {
    pub fn square(n: usize) -> Self {
        Self { m: n, n }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == self.n {
            write!(f, "{}", self.m)
        } else {
            write!(f, "{}x{}", self.m, self.n)
        }
    }
}

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_size(s)
    }
}

fn positive(s: &str, what: &str) -> Result<usize, String> {
    let v: usize = s.trim().parse().map_err(|_| format!("invalid {what} `{s}`"))?;
    if v == 0 {
        return Err(format!("{what} must be at least 1"));
    }
    Ok(v)
}

pub fn parse_size(s: &str) -> Result<Size, String> {
    match s.split_once(['x', 'X']) {
        Some((m, n)) => Ok(Size {
            m: positive(m, "size")?,
            n: positive(n, "size")?,
        }),
        None => Ok(Size::square(positive(s, "size")?)),
    }
}

pub fn parse_positive(s: &str) -> Result<usize, String> {
    positive(s, "value")
}

/// Parsed list flag; see [`parse_list`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsizeList(pub Vec<usize>);

impl FromStr for UsizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_list(s).map(UsizeList)
    }
}

/// Comma-separated list of positive integers, or a `lo:hi:step` range.
pub fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    if s.contains(':') {
        return parse_range(s);
    }
    let v: Vec<usize> = s.split(',').map(|x| positive(x, "list entry")).collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(v)
}

/// Inclusive `lo:hi:step` (step defaults to 1).
pub fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let (lo, hi, step) = match parts.as_slice() {
        [lo, hi] => (positive(lo, "range start")?, positive(hi, "range end")?, 1),
        [lo, hi, step] => (
            positive(lo, "range start")?,
            positive(hi, "range end")?,
            positive(step, "range step")?,
        ),
        _ => return Err(format!("range `{s}` must look like lo:hi[:step]")),
    };
    if hi < lo {
        return Err(format!("range `{s}` is empty"));
    }
    Ok((lo..=hi).step_by(step).collect())
}
