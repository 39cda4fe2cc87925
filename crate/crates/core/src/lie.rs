//! Finite-dimensional Lie algebras over the rationals.
//!
//! An algebra is given by structure constants `c_{ij}^k` with
//! `[e_i, e_j] = sum_k c_{ij}^k e_k`. Constants are supplied for `i < j`
//! only and the table is filled antisymmetrically, so antisymmetry holds by
//! construction. Public index arguments for structure constants and Jacobi
//! reports are 1-based; coefficient vectors are plain slices of length `n`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{span_basis, QMatrix};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    names: Vec<String>,
    /// dense `c[(i * n + j) * n + k]`, 0-based
    table: Vec<Rational>,
}

/// A violated Jacobi identity: `(i, j, k)` with `i < j < k` and output index `m`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub m: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<JacobiViolation>,
}

/// Inertia of the Killing form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Square operator on the algebra; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperator(QMatrix);

impl LinearOperator {
    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn trace(&self) -> Rational {
        self.0.trace()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.0.mul_vec(v)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(self.compose(other).0.sub(&other.compose(self).0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl LieAlgebra {
    /// Builds an algebra from named basis elements and `(i, j, k, c_{ij}^k)`
    /// entries with 1-based `i < j`. Unlisted constants are zero.
    pub fn new<I>(names: Vec<String>, constants: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidConstant {
                i: 0,
                j: 0,
                k: 0,
                reason: "algebra must have dimension at least 1".into(),
            });
        }
        let mut seen = BTreeMap::new();
        let mut table = vec![Rational::zero(); n * n * n];
        for (i, j, k, c) in constants {
            let bad = |reason: &str| Error::InvalidConstant {
                i,
                j,
                k,
                reason: reason.to_string(),
            };
            if i == 0 || j == 0 || k == 0 || i > n || j > n || k > n {
                return Err(bad("index out of range"));
            }
            if i >= j {
                return Err(bad("constants are given only for i < j"));
            }
            if seen.insert((i, j, k), ()).is_some() {
                return Err(bad("duplicate entry"));
            }
            let (a, b, k0) = (i - 1, j - 1, k - 1);
            table[(a * n + b) * n + k0] = c.clone();
            table[(b * n + a) * n + k0] = -c;
        }
        Ok(Self {
            dim: n,
            names,
            table,
        })
    }

    /// Same as [`LieAlgebra::new`] with default names `e1..en`.
    pub fn with_dim<I>(n: usize, constants: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        Self::new((1..=n).map(|i| format!("e{i}")).collect(), constants)
    }

    pub fn abelian(n: usize) -> Result<Self> {
        Self::with_dim(n, std::iter::empty())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `c_{ij}^k`, 1-based.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim;
        &self.table[((i - 1) * n + (j - 1)) * n + (k - 1)]
    }

    fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim;
        &self.table[(i * n + j) * n + k]
    }

    /// Nonzero constants with `i < j`, 1-based, in lexicographic order.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, Rational)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out.push((i + 1, j + 1, k + 1, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Checks every Jacobi identity exactly.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for m in 0..n {
                        let mut s = Rational::zero();
                        for a in 0..n {
                            s += self.c(i, j, a) * self.c(a, k, m)
                                + self.c(j, k, a) * self.c(a, i, m)
                                + self.c(k, i, a) * self.c(a, j, m);
                        }
                        if !s.is_zero() {
                            violations.push(JacobiViolation {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                m: m + 1,
                                value: s,
                            });
                        }
                    }
                }
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Basis vector `e_i`, 0-based.
    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                if i == j {
                    continue;
                }
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        out
    }

    /// `ad(e_i)`, 0-based.
    pub fn ad_basis(&self, i: usize) -> LinearOperator {
        let n = self.dim;
        LinearOperator(QMatrix::from_fn(n, n, |k, j| self.c(i, j, k).clone()))
    }

    pub fn ad(&self, x: &[Rational]) -> Result<LinearOperator> {
        self.check_len(x)?;
        let n = self.dim;
        Ok(LinearOperator(QMatrix::from_fn(n, n, |k, j| {
            x.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .fold(Rational::zero(), |acc, (i, xi)| acc + xi * self.c(i, j, k))
        })))
    }

    /// Gram matrix of `κ(x, y) = tr(ad x ∘ ad y)`.
    pub fn killing(&self) -> QMatrix {
        let n = self.dim;
        let ads: Vec<LinearOperator> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut k = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = ads[i].compose(&ads[j]).trace();
                k.set(i, j, v.clone());
                k.set(j, i, v);
            }
        }
        k
    }

    pub fn killing_of(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        self.check_len(x)?;
        self.check_len(y)?;
        let ky = self.killing().mul_vec(y);
        Ok(x.iter().zip(&ky).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Dimensions of the derived series `g, [g,g], ...` until it stabilizes.
    pub fn derived_series(&self) -> Vec<usize> {
        let n = self.dim;
        let mut basis: Vec<Vec<Rational>> = (0..n).map(|i| self.basis_vector(i)).collect();
        let mut dims = vec![n];
        loop {
            let mut brackets = Vec::new();
            for (a, x) in basis.iter().enumerate() {
                for y in &basis[a + 1..] {
                    brackets.push(self.bracket_unchecked(x, y));
                }
            }
            let next = span_basis(&brackets, n);
            if next.len() == basis.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            basis = next;
        }
    }

    /// Dimensions of the lower central series `g, [g,g], [g,[g,g]], ...`.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.dim;
        let full: Vec<Vec<Rational>> = (0..n).map(|i| self.basis_vector(i)).collect();
        let mut basis = full.clone();
        let mut dims = vec![n];
        loop {
            let brackets: Vec<Vec<Rational>> = full
                .iter()
                .flat_map(|x| basis.iter().map(move |y| (x, y)))
                .map(|(x, y)| self.bracket_unchecked(x, y))
                .collect();
            let next = span_basis(&brackets, n);
            if next.len() == basis.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            basis = next;
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last() == Some(&0)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last() == Some(&0)
    }

    /// Cartan: semisimple iff the Killing form is nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        !self.killing().determinant().is_zero()
    }

    /// `tr ad(e_i) = 0` for every basis element.
    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.ad_basis(i).trace().is_zero())
    }

    /// Sylvester inertia of the Killing form by exact congruence diagonalization.
    pub fn killing_signature(&self) -> Signature {
        let diag = congruence_diagonal(self.killing());
        Signature {
            positive: diag.iter().filter(|d| d.is_positive()).count(),
            negative: diag.iter().filter(|d| d.is_negative()).count(),
            zero: diag.iter().filter(|d| d.is_zero()).count(),
        }
    }
}

/// Diagonal of a symmetric matrix after symmetric row/column elimination.
fn congruence_diagonal(mut m: QMatrix) -> Vec<Rational> {
    let n = m.rows();
    let mut diag = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // want a nonzero diagonal pivot among the active indices
        let pivot = active.iter().copied().find(|&i| !m.get(i, i).is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // all active diagonals vanish: find an off-diagonal entry and
                // fold row/column j into i to create a nonzero diagonal
                let pair = active.iter().find_map(|&i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !m.get(i, j).is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    None => {
                        diag.extend(active.iter().map(|_| Rational::zero()));
                        break;
                    }
                    Some((i, j)) => {
                        add_sym(&mut m, i, j, &Rational::one());
                        i
                    }
                }
            }
        };
        let d = m.get(p, p).clone();
        for &j in active.iter().filter(|&&j| j != p) {
            let f = m.get(j, p) / &d;
            if !f.is_zero() {
                add_sym(&mut m, j, p, &-f);
            }
        }
        diag.push(d);
        active.retain(|&j| j != p);
    }
    diag
}

/// row_i += f * row_j, then col_i += f * col_j
fn add_sym(m: &mut QMatrix, i: usize, j: usize, f: &Rational) {
    let n = m.rows();
    for c in 0..n {
        let v = m.get(j, c) * f;
        m.add_at(i, c, &v);
    }
    for r in 0..n {
        let v = m.get(r, j) * f;
        m.add_at(r, i, &v);
    }
}
