//! Line-oriented text format for structure constants.
//!
//! ```text
//! # sl(2) in the basis X, H, Y
//! dim 3
//! basis X H Y
//! 1 2 1 -2
//! 1 3 2 1
//! 2 3 3 -2
//! ```
//!
//! `i j k p/q` sets `c_{ij}^k = p/q` with 1-based `i < j`; `#` starts a comment.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub dim: usize,
    pub names: Option<Vec<String>>,
    pub constants: Vec<(usize, usize, usize, Rational)>,
}

impl AlgebraFile {
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let names = self
            .names
            .clone()
            .unwrap_or_else(|| (1..=self.dim).map(|i| format!("e{i}")).collect());
        LieAlgebra::new(names, self.constants.iter().cloned())
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, t)| (line[..byte].chars().count() + 1, t))
        .collect()
}

pub fn parse(text: &str) -> Result<AlgebraFile> {
    let mut dim: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut constants = Vec::new();
    let mut seen = BTreeSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col0, head)) = toks.first() else {
            continue;
        };
        let Some(n) = dim else {
            if head != "dim" {
                return Err(err(line_no, col0, "expected `dim n` before anything else"));
            }
            let Some(&(c, v)) = toks.get(1) else {
                return Err(err(line_no, col0 + head.len(), "missing dimension after `dim`"));
            };
            match v.parse::<usize>() {
                Ok(n) if n >= 1 => dim = Some(n),
                _ => return Err(err(line_no, c, format!("dimension must be a positive integer, got `{v}`"))),
            }
            if let Some(&(c, extra)) = toks.get(2) {
                return Err(err(line_no, c, format!("unexpected token `{extra}`")));
            }
            continue;
        };
        match head {
            "dim" => return Err(err(line_no, col0, "dimension declared twice")),
            "basis" => {
                if names.is_some() {
                    return Err(err(line_no, col0, "basis declared twice"));
                }
                if !constants.is_empty() {
                    return Err(err(line_no, col0, "basis must precede structure constants"));
                }
                let given: Vec<String> = toks[1..].iter().map(|(_, t)| t.to_string()).collect();
                if given.len() != n {
                    return Err(err(line_no, col0, format!("expected {n} basis names, found {}", given.len())));
                }
                names = Some(given);
            }
            _ => {
                if toks.len() != 4 {
                    let col = toks.get(4).map_or(col0, |t| t.0);
                    return Err(err(line_no, col, "expected `i j k p/q`"));
                }
                let mut idx3 = [0usize; 3];
                for (slot, &(c, t)) in toks[..3].iter().enumerate() {
                    match t.parse::<usize>() {
                        Ok(v) if (1..=n).contains(&v) => idx3[slot] = v,
                        _ => return Err(err(line_no, c, format!("index must be an integer in 1..={n}, got `{t}`"))),
                    }
                }
                let [i, j, k] = idx3;
                if i >= j {
                    return Err(err(line_no, toks[0].0, format!("constants are given only for i < j, got i = {i}, j = {j}")));
                }
                let (cc, ct) = toks[3];
                let value = parse_rational(ct).ok_or_else(|| err(line_no, cc, format!("invalid rational `{ct}`")))?;
                if !seen.insert((i, j, k)) {
                    return Err(err(line_no, col0, format!("duplicate constant for ({i}, {j}, {k})")));
                }
                constants.push((i, j, k, value));
            }
        }
    }
    let dim = dim.ok_or_else(|| err(last_line.max(1), 1, "missing `dim n` line"))?;
    Ok(AlgebraFile { dim, names, constants })
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    parse(text)?.to_algebra()
}

/// Canonical text: `dim`, `basis`, then nonzero constants in lexicographic order.
pub fn serialize(alg: &LieAlgebra) -> String {
    let mut out = format!("dim {}\nbasis {}\n", alg.dim(), alg.names().join(" "));
    for (i, j, k, c) in alg.nonzero_constants() {
        out.push_str(&format!("{i} {j} {k} {}\n", format_rational(&c)));
    }
    out
}
