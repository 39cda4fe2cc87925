//! Built-in algebras, frames and local multiplications.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::chart::{Chart, DEFAULT_STEP};
use crate::error::{Error, Result};
use crate::geometry::{FrameField, LocalGroupMultiplication};
use crate::lie::LieAlgebra;
use crate::rational::int;

pub const MAX_ABELIAN_DIM: usize = 6;
pub const MAX_IDENTITY_FRAME_DIM: usize = 3;
pub const MAX_ABELIAN_GROUP_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryKind {
    Algebra,
    Frame,
    Multiplication,
}

impl EntryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntryKind::Algebra => "algebra",
            EntryKind::Frame => "frame",
            EntryKind::Multiplication => "multiplication",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "algebra" => Some(EntryKind::Algebra),
            "frame" => Some(EntryKind::Frame),
            "multiplication" => Some(EntryKind::Multiplication),
            _ => None,
        }
    }
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Algebra(LieAlgebra),
    Frame(FrameField),
    Multiplication(LocalGroupMultiplication),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: EntryKind,
    pub payload: Payload,
    pub note: String,
}

/// Every entry, in listing order.
pub fn list() -> Vec<(EntryKind, String)> {
    let mut out = Vec::new();
    for n in 1..=MAX_ABELIAN_DIM {
        out.push((EntryKind::Algebra, format!("abelian({n})")));
    }
    for name in ["heisenberg3", "affine1", "borel_sl2", "sl2", "so3", "sl2_plus_abelian2"] {
        out.push((EntryKind::Algebra, name.to_string()));
    }
    for n in 1..=MAX_IDENTITY_FRAME_DIM {
        out.push((EntryKind::Frame, format!("identity({n})")));
    }
    for name in ["affine_halfplane", "unipotent_sin", "borel_frame"] {
        out.push((EntryKind::Frame, name.to_string()));
    }
    for n in 1..=MAX_ABELIAN_GROUP_DIM {
        out.push((EntryKind::Multiplication, format!("abelian({n})")));
    }
    for name in ["affine_group", "borel_sl2_group"] {
        out.push((EntryKind::Multiplication, name.to_string()));
    }
    out
}

/// Resolves a name, preferring algebras, then frames, then multiplications.
pub fn get(name: &str) -> Result<CatalogEntry> {
    [EntryKind::Algebra, EntryKind::Frame, EntryKind::Multiplication]
        .into_iter()
        .find_map(|k| lookup(k, name).ok())
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

pub fn lookup(kind: EntryKind, name: &str) -> Result<CatalogEntry> {
    let unknown = || Error::UnknownEntry(name.to_string());
    let (payload, note) = match kind {
        EntryKind::Algebra => {
            let (a, note) = build_algebra(name).ok_or_else(unknown)?;
            (Payload::Algebra(a), note)
        }
        EntryKind::Frame => {
            let (f, note) = build_frame(name).ok_or_else(unknown)?;
            (Payload::Frame(f), note)
        }
        EntryKind::Multiplication => {
            let (m, note) = build_multiplication(name).ok_or_else(unknown)?;
            (Payload::Multiplication(m), note)
        }
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        kind,
        payload,
        note,
    })
}

pub fn algebra(name: &str) -> Result<LieAlgebra> {
    match lookup(EntryKind::Algebra, name)?.payload {
        Payload::Algebra(a) => Ok(a),
        _ => unreachable!("algebra lookup"),
    }
}

pub fn frame(name: &str) -> Result<FrameField> {
    match lookup(EntryKind::Frame, name)?.payload {
        Payload::Frame(f) => Ok(f),
        _ => unreachable!("frame lookup"),
    }
}

pub fn multiplication(name: &str) -> Result<LocalGroupMultiplication> {
    match lookup(EntryKind::Multiplication, name)?.payload {
        Payload::Multiplication(m) => Ok(m),
        _ => unreachable!("multiplication lookup"),
    }
}

fn names_of(kind: EntryKind) -> Vec<String> {
    list().into_iter().filter(|(k, _)| *k == kind).map(|(_, n)| n).collect()
}

pub fn algebras() -> Vec<(String, LieAlgebra)> {
    names_of(EntryKind::Algebra)
        .into_iter()
        .map(|n| {
            let a = algebra(&n).expect("listed algebra");
            (n, a)
        })
        .collect()
}

pub fn frames() -> Vec<(String, FrameField)> {
    names_of(EntryKind::Frame)
        .into_iter()
        .map(|n| {
            let f = frame(&n).expect("listed frame");
            (n, f)
        })
        .collect()
}

pub fn multiplications() -> Vec<(String, LocalGroupMultiplication)> {
    names_of(EntryKind::Multiplication)
        .into_iter()
        .map(|n| {
            let m = multiplication(&n).expect("listed multiplication");
            (n, m)
        })
        .collect()
}

/// The catalog algebra that a group-derived frame should reproduce.
pub fn matching_algebra(frame_name: &str) -> Option<String> {
    match frame_name {
        "affine_halfplane" => Some("affine1".into()),
        "borel_frame" => Some("borel_sl2".into()),
        _ => parse_indexed(frame_name, "identity", MAX_IDENTITY_FRAME_DIM).map(|n| format!("abelian({n})")),
    }
}

/// Whether the frame comes from a local Lie group, so that `R₂` vanishes.
pub fn is_group_frame(frame_name: &str) -> bool {
    frame_name != "unipotent_sin"
}

fn parse_indexed(name: &str, prefix: &str, max: usize) -> Option<usize> {
    let inner = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    let n: usize = inner.trim().parse().ok()?;
    (1..=max).contains(&n).then_some(n)
}

fn named(names: &[&str], constants: Vec<(usize, usize, usize, crate::rational::Rational)>) -> LieAlgebra {
    LieAlgebra::new(names.iter().map(|s| s.to_string()).collect(), constants).expect("catalog constants")
}

fn build_algebra(name: &str) -> Option<(LieAlgebra, String)> {
    if let Some(n) = parse_indexed(name, "abelian", MAX_ABELIAN_DIM) {
        return Some((LieAlgebra::abelian(n).expect("n ≥ 1"), format!("{n}-dimensional abelian algebra")));
    }
    let (alg, note) = match name {
        "heisenberg3" => (named(&["e1", "e2", "e3"], vec![(1, 2, 3, int(1))]), "[e1,e2] = e3"),
        "affine1" => (named(&["e1", "e2"], vec![(1, 2, 2, int(1))]), "[e1,e2] = e2"),
        "borel_sl2" => (
            named(&["h", "x"], vec![(1, 2, 2, int(2))]),
            "upper triangular part of sl(2): [h,x] = 2x",
        ),
        "sl2" => (
            named(&["X", "H", "Y"], vec![(1, 2, 1, int(-2)), (1, 3, 2, int(1)), (2, 3, 3, int(-2))]),
            "[H,X] = 2X, [H,Y] = -2Y, [X,Y] = H",
        ),
        "so3" => (
            named(&["A", "B", "C"], vec![(1, 2, 3, int(-1)), (1, 3, 2, int(1)), (2, 3, 1, int(-1))]),
            "[A,B] = -C, [A,C] = B, [B,C] = -A",
        ),
        "sl2_plus_abelian2" => (
            named(
                &["X", "H", "Y", "Z1", "Z2"],
                vec![(1, 2, 1, int(-2)), (1, 3, 2, int(1)), (2, 3, 3, int(-2))],
            ),
            "sl(2) plus a 2-dimensional center",
        ),
        _ => return None,
    };
    Some((alg, note.to_string()))
}

fn chart(lower: &[f64], upper: &[f64]) -> Chart {
    Chart::new(lower.to_vec(), upper.to_vec(), DEFAULT_STEP).expect("catalog chart")
}

fn build_frame(name: &str) -> Option<(FrameField, String)> {
    if let Some(n) = parse_indexed(name, "identity", MAX_IDENTITY_FRAME_DIM) {
        return Some((
            FrameField::new(Chart::cube(n), Arc::new(move |_| DMatrix::identity(n, n))),
            format!("constant identity frame on [-1,1]^{n}"),
        ));
    }
    let (f, note) = match name {
        "affine_halfplane" => (
            FrameField::new(chart(&[0.5, -1.0], &[2.0, 1.0]), Arc::new(|x| DMatrix::identity(2, 2) * x[0])),
            "A = x1 I, the left-translation frame of the affine group",
        ),
        "unipotent_sin" => (
            FrameField::new(
                chart(&[-1.0, 0.2], &[1.0, 2.2]),
                Arc::new(|x| DMatrix::from_row_slice(2, 2, &[1.0, 0.0, x[1].sin(), 1.0])),
            ),
            "A = [[1, 0], [sin x2, 1]]; not a group frame",
        ),
        "borel_frame" => (
            FrameField::new(
                chart(&[0.5, -1.0], &[2.5, 1.0]),
                Arc::new(|x| DMatrix::from_row_slice(2, 2, &[x[0], 0.0, -x[1], x[0]])),
            ),
            "A = [[a, 0], [-b, a]], the left-translation frame of borel_sl2_group",
        ),
        _ => return None,
    };
    Some((f, note.to_string()))
}

fn build_multiplication(name: &str) -> Option<(LocalGroupMultiplication, String)> {
    if let Some(n) = parse_indexed(name, "abelian", MAX_ABELIAN_GROUP_DIM) {
        let m = LocalGroupMultiplication::new(
            Chart::cube(n),
            vec![0.0; n],
            Arc::new(|a, b| DVector::from_iterator(a.len(), a.iter().zip(b).map(|(x, y)| x + y))),
        )
        .expect("abelian identity law");
        return Some((m, format!("m(a, b) = a + b on R^{n}")));
    }
    let (m, note) = match name {
        "affine_group" => (
            LocalGroupMultiplication::new(
                chart(&[0.5, -1.0], &[2.0, 1.0]),
                vec![1.0, 0.0],
                Arc::new(|a, b| DVector::from_vec(vec![a[0] * b[0], a[0] * b[1] + a[1]])),
            ),
            "m((a,b),(c,d)) = (ac, ad + b), e = (1, 0)",
        ),
        "borel_sl2_group" => (
            LocalGroupMultiplication::new(
                chart(&[0.5, -1.0], &[2.5, 1.0]),
                vec![1.0, 0.0],
                Arc::new(|a, b| DVector::from_vec(vec![a[0] * b[0], a[0] * b[1] + a[1] / b[0]])),
            ),
            "(a,b) <-> [[a, b], [0, 1/a]]; m((a,b),(c,d)) = (ac, ad + b/c), e = (1, 0)",
        ),
        _ => return None,
    };
    Some((m.expect("catalog identity law"), note.to_string()))
}
