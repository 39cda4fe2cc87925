//! Chevalley–Eilenberg complex with trivial coefficients.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::QMatrix;
use crate::forms::{binomial, trace_form, AlternatingForm, PERMUTATION_CAP};
use crate::lie::LieAlgebra;

/// Lexicographically ordered 0-based `k`-subsets of `{0..n}`.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    dim: usize,
    degree: usize,
    subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl CochainBasis {
    pub fn new(dim: usize, degree: usize) -> Self {
        let subsets: Vec<Vec<usize>> = (0..dim).combinations(degree).collect();
        let index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self {
            dim,
            degree,
            subsets,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn index_of(&self, sorted: &[usize]) -> Option<usize> {
        self.index.get(sorted).copied()
    }
}

/// `d_k : C^k → C^{k+1}` as a `C(n,k+1) × C(n,k)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialMatrix {
    degree: usize,
    matrix: QMatrix,
}

impl DifferentialMatrix {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        if self.matrix.rows() == 0 || self.matrix.cols() == 0 {
            0
        } else {
            self.matrix.rank()
        }
    }

    pub fn apply(&self, form: &AlternatingForm) -> Result<AlternatingForm> {
        if form.degree() != self.degree || self.matrix.cols() != form.components().len() {
            return Err(Error::FormMismatch {
                form: form.degree(),
                dim: form.dim(),
            });
        }
        AlternatingForm::new(form.dim(), self.degree + 1, self.matrix.mul_vec(form.components()))
    }
}

/// `(dλ)(x_1..x_{k+1}) = Σ_{s<t} (-1)^{s+t} λ([x_s, x_t], x_1, …, x̂_s, …, x̂_t, …)`.
pub fn differential_matrix(alg: &LieAlgebra, k: usize) -> Result<DifferentialMatrix> {
    let n = alg.dim();
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, max: n });
    }
    let source = CochainBasis::new(n, k);
    let target = CochainBasis::new(n, k + 1);
    let mut matrix = QMatrix::zeros(target.len(), source.len());
    if k == 0 {
        return Ok(DifferentialMatrix { degree: k, matrix });
    }
    for (row, subset) in target.subsets().iter().enumerate() {
        for s in 0..subset.len() {
            for t in (s + 1)..subset.len() {
                let rest: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != s && p != t)
                    .map(|(_, &v)| v)
                    .collect();
                let pair_odd = (s + t) % 2 == 1;
                for m in 0..n {
                    if rest.contains(&m) {
                        continue;
                    }
                    let c = alg.constant(subset[s] + 1, subset[t] + 1, m + 1);
                    if c.is_zero() {
                        continue;
                    }
                    // moving e_m from the front into sorted position
                    let before = rest.iter().filter(|&&r| r < m).count();
                    let mut sorted = rest.clone();
                    sorted.insert(before, m);
                    let col = source.index_of(&sorted).expect("k-subset");
                    let negate = pair_odd ^ (before % 2 == 1);
                    let v = if negate { -c.clone() } else { c.clone() };
                    matrix.add_at(row, col, &v);
                }
            }
        }
    }
    Ok(DifferentialMatrix { degree: k, matrix })
}

fn ranks(alg: &LieAlgebra) -> Vec<usize> {
    let n = alg.dim();
    (0..=n)
        .into_par_iter()
        .map(|k| differential_matrix(alg, k).expect("k ≤ n").rank())
        .collect()
}

/// `b_k = C(n,k) − rank d_k − rank d_{k−1}`.
pub fn betti(alg: &LieAlgebra, k: usize) -> Result<usize> {
    let n = alg.dim();
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, max: n });
    }
    let rk = differential_matrix(alg, k)?.rank();
    let prev = if k == 0 { 0 } else { differential_matrix(alg, k - 1)?.rank() };
    Ok(binomial(n, k) - rk - prev)
}

/// `(b_0, …, b_n)`.
pub fn betti_table(alg: &LieAlgebra) -> Vec<usize> {
    let n = alg.dim();
    let r = ranks(alg);
    (0..=n)
        .map(|k| binomial(n, k) - r[k] - if k == 0 { 0 } else { r[k - 1] })
        .collect()
}

fn check_form(alg: &LieAlgebra, form: &AlternatingForm) -> Result<()> {
    if form.dim() != alg.dim() {
        return Err(Error::FormMismatch {
            form: form.degree(),
            dim: alg.dim(),
        });
    }
    Ok(())
}

pub fn is_closed(alg: &LieAlgebra, form: &AlternatingForm) -> Result<bool> {
    check_form(alg, form)?;
    if form.degree() == alg.dim() {
        // top degree: C^{n+1} = 0
        return Ok(true);
    }
    Ok(differential_matrix(alg, form.degree())?.apply(form)?.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exactness {
    pub exact: bool,
    /// Some particular solution of `dμ = form`; `None` when not exact or in degree 0.
    pub primitive: Option<AlternatingForm>,
}

/// Decides whether a closed form is a coboundary and returns a primitive if so.
pub fn is_exact(alg: &LieAlgebra, form: &AlternatingForm) -> Result<Exactness> {
    if !is_closed(alg, form)? {
        return Err(Error::NotClosed);
    }
    let k = form.degree();
    if k == 0 {
        // nothing maps into degree 0
        return Ok(Exactness {
            exact: form.is_zero(),
            primitive: None,
        });
    }
    let d = differential_matrix(alg, k - 1)?;
    let solution = if d.matrix().cols() == 0 {
        form.is_zero().then(Vec::new)
    } else {
        d.matrix().solve(form.components())
    };
    Ok(match solution {
        Some(mu) => Exactness {
            exact: true,
            primitive: Some(AlternatingForm::new(alg.dim(), k - 1, mu)?),
        },
        None => Exactness {
            exact: false,
            primitive: None,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassStatus {
    ZeroForm,
    Exact,
    NonzeroClass,
}

impl ClassStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassStatus::ZeroForm => "zero form",
            ClassStatus::Exact => "exact",
            ClassStatus::NonzeroClass => "nonzero class",
        }
    }
}

/// Status of `[w_{2k+1}]` for every odd degree up to `min(n, PERMUTATION_CAP)`.
pub fn class_report(alg: &LieAlgebra) -> Result<BTreeMap<usize, ClassStatus>> {
    class_report_up_to(alg, alg.dim().min(PERMUTATION_CAP))
}

pub fn class_report_up_to(alg: &LieAlgebra, max_degree: usize) -> Result<BTreeMap<usize, ClassStatus>> {
    let mut out = BTreeMap::new();
    for k in (1..=max_degree.min(alg.dim())).step_by(2) {
        let w = trace_form(alg, k)?;
        let status = if w.is_zero() {
            ClassStatus::ZeroForm
        } else if is_exact(alg, &w)?.exact {
            ClassStatus::Exact
        } else {
            ClassStatus::NonzeroClass
        };
        out.insert(k, status);
    }
    Ok(out)
}

/// Apply a chain of differentials to check `d ∘ d = 0` on the whole complex.
pub fn square_is_zero(alg: &LieAlgebra) -> bool {
    let n = alg.dim();
    (0..n).all(|k| {
        let a = differential_matrix(alg, k).expect("k ≤ n");
        let b = differential_matrix(alg, k + 1).expect("k + 1 ≤ n");
        (b.matrix() * a.matrix()).is_zero()
    })
}
