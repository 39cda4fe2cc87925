//! Alternating cochains and the adjoint trace forms
//! `w_k(x_1..x_k) = (1/k) Σ_σ sgn(σ) tr(ad x_σ(1) ∘ … ∘ ad x_σ(k))`.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cohomology::CochainBasis;
use crate::error::{Error, Result};
use crate::exact::QMatrix;
use crate::lie::LieAlgebra;
use crate::rational::{common_denominator, Rational};

/// Largest degree for which the naive permutation sum is attempted (7! = 5040 terms).
pub const PERMUTATION_CAP: usize = 7;

/// A degree-`k` alternating form on an `n`-dimensional algebra, stored by its
/// values on the lexicographically ordered basis `k`-subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingForm {
    dim: usize,
    degree: usize,
    components: Vec<Rational>,
}

impl AlternatingForm {
    pub fn new(dim: usize, degree: usize, components: Vec<Rational>) -> Result<Self> {
        if degree > dim {
            return Err(Error::DegreeOutOfRange { degree, max: dim });
        }
        let expected = binomial(dim, degree);
        if components.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: components.len(),
            });
        }
        Ok(Self {
            dim,
            degree,
            components,
        })
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            components: vec![Rational::zero(); binomial(dim, degree)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Components in the order of [`CochainBasis::subsets`].
    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    /// `(subset, value)` pairs with 1-based indices.
    pub fn entries(&self) -> Vec<(Vec<usize>, Rational)> {
        let basis = CochainBasis::new(self.dim, self.degree);
        basis
            .subsets()
            .iter()
            .zip(&self.components)
            .map(|(s, v)| (s.iter().map(|i| i + 1).collect(), v.clone()))
            .collect()
    }

    /// Value on basis vectors `e_{i_1}, …, e_{i_k}` (1-based, any order).
    pub fn component(&self, indices: &[usize]) -> Result<Rational> {
        if indices.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: indices.len(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: bad,
            });
        }
        let mut sorted: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        let Some(negate) = sort_with_sign(&mut sorted) else {
            return Ok(Rational::zero());
        };
        let basis = CochainBasis::new(self.dim, self.degree);
        let v = self.components[basis.index_of(&sorted).expect("sorted subset")].clone();
        Ok(if negate { -v } else { v })
    }

    /// Multilinear evaluation `Σ_I λ_I det(v_t^{I_s})`.
    pub fn evaluate(&self, vectors: &[Vec<Rational>]) -> Result<Rational> {
        if vectors.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        if self.degree == 0 {
            return Ok(self.components[0].clone());
        }
        let k = self.degree;
        let basis = CochainBasis::new(self.dim, k);
        let mut total = Rational::zero();
        for (subset, value) in basis.subsets().iter().zip(&self.components) {
            if value.is_zero() {
                continue;
            }
            let minor = QMatrix::from_fn(k, k, |s, t| vectors[t][subset[s]].clone());
            total += value * minor.determinant();
        }
        Ok(total)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            components: self.components.iter().map(|c| c * s).collect(),
        }
    }
}

/// Sorts in place; returns whether the permutation was odd, or `None` on a repeat.
pub(crate) fn sort_with_sign(v: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

type IntMatrix = Vec<Vec<BigInt>>;

fn int_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in a.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[l].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] += x * y;
                }
            }
        }
    }
    out
}

/// `tr(a ∘ b)` without forming the product.
fn int_trace_product(a: &IntMatrix, b: &IntMatrix) -> BigInt {
    let mut t = BigInt::zero();
    for (i, row) in a.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            let y = &b[l][i];
            if !x.is_zero() && !y.is_zero() {
                t += x * y;
            }
        }
    }
    t
}

/// Signed sum over permutations of `chosen`, extending a shared prefix product.
fn signed_trace_sum(ads: &[IntMatrix], chosen: &[usize], used: &mut [bool], prefix: &IntMatrix, depth: usize, odd: bool) -> BigInt {
    let k = chosen.len();
    let mut total = BigInt::zero();
    for slot in 0..k {
        if used[slot] {
            continue;
        }
        // placing `slot` after `depth` earlier picks adds one inversion per larger used slot
        let inversions = used.iter().enumerate().filter(|&(s, &u)| u && s > slot).count();
        let parity = odd ^ (inversions % 2 == 1);
        let next = &ads[chosen[slot]];
        if depth + 1 == k {
            let t = int_trace_product(prefix, next);
            if parity {
                total -= t;
            } else {
                total += t;
            }
        } else {
            used[slot] = true;
            let product = int_product(prefix, next);
            total += signed_trace_sum(ads, chosen, used, &product, depth + 1, parity);
            used[slot] = false;
        }
    }
    total
}

/// The trace form `w_k` of the adjoint representation.
pub fn trace_form(alg: &LieAlgebra, k: usize) -> Result<AlternatingForm> {
    let n = alg.dim();
    if k == 0 || k > n {
        return Err(Error::DegreeOutOfRange { degree: k, max: n });
    }
    if k > PERMUTATION_CAP {
        return Err(Error::PermutationCap {
            degree: k,
            cap: PERMUTATION_CAP,
        });
    }
    let rational_ads: Vec<QMatrix> = (0..n).map(|i| alg.ad_basis(i).matrix().clone()).collect();
    // scale every ad by the common denominator so products stay in the integers
    let den = common_denominator(rational_ads.iter().flat_map(|m| (0..n).flat_map(move |r| m.row(r).iter())));
    let ads: Vec<IntMatrix> = rational_ads
        .iter()
        .map(|m| {
            (0..n)
                .map(|r| {
                    m.row(r)
                        .iter()
                        .map(|v| (v * Rational::from_integer(den.clone())).to_integer())
                        .collect()
                })
                .collect()
        })
        .collect();
    let identity: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let normalizer = Ratio::new(BigInt::one(), num_traits::pow(den, k) * BigInt::from(k));
    let basis = CochainBasis::new(n, k);
    let components = basis
        .subsets()
        .par_iter()
        .map(|subset| {
            let mut used = vec![false; k];
            let s = signed_trace_sum(&ads, subset, &mut used, &identity, 0, false);
            Rational::from_integer(s) * &normalizer
        })
        .collect();
    AlternatingForm::new(n, k, components)
}

/// `w_1(x) = tr ad(x)`, the character of the adjoint representation.
pub fn w1_character(alg: &LieAlgebra) -> AlternatingForm {
    let n = alg.dim();
    let comps = (0..n).map(|i| alg.ad_basis(i).trace()).collect();
    AlternatingForm::new(n, 1, comps).expect("n components")
}

/// `κ(x, [y, z])`, which equals `w_3(x, y, z)`.
pub fn w3_killing(alg: &LieAlgebra, x: &[Rational], y: &[Rational], z: &[Rational]) -> Result<Rational> {
    let yz = alg.bracket(y, z)?;
    alg.killing_of(x, &yz)
}
