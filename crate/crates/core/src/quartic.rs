//! Fully symmetric quartic forms `Q(v) = M_ijkl v^i v^j v^k v^l` and
//! symmetric quadrics.
//!
//! A [`SymQuartic`] stores one coefficient per index multiset
//! `{i <= j <= k <= l}`, so full permutation symmetry holds by construction.
//! The dense `n^4` expansion is built lazily and cached.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All 24 permutations of four positions.
const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Sorted index multisets `i <= j <= k <= l` in lexicographic order.
pub fn multisets(dim: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            for k in j..dim {
                for l in k..dim {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Number of distinct orderings of a multiset (`24 / prod(count!)`).
pub fn multiplicity(idx: [usize; 4]) -> f64 {
    let mut counts = [0usize; 4];
    let mut distinct = Vec::with_capacity(4);
    for &i in &idx {
        if let Some(p) = distinct.iter().position(|&d| d == i) {
            counts[p] += 1;
        } else {
            distinct.push(i);
            counts[distinct.len() - 1] = 1;
        }
    }
    let fact = |n: usize| (1..=n).product::<usize>();
    (24 / counts.iter().map(|&c| fact(c)).product::<usize>()) as f64
}

#[inline]
fn flat(dim: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * dim + j) * dim + k) * dim + l
}

/// Symmetric real `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymQuadric {
    matrix: DMatrix<f64>,
}

impl SymQuadric {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix != matrix.transpose() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { matrix })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diag(entries: &[f64]) -> Self {
        Self {
            matrix: DMatrix::from_diagonal(&DVector::from_column_slice(entries)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// `diag(1, -1, ..., -1)`.
    pub fn minkowski(dim: usize) -> Self {
        let mut d = vec![-1.0; dim];
        d[0] = 1.0;
        Self::diag(&d)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| self.matrix.row(i).iter().copied().collect())
            .collect()
    }

    /// `g_ij v^i v^j`.
    pub fn eval(&self, v: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.matrix[(i, j)] * v[i] * v[j];
            }
        }
        s
    }
}

/// `N_m`, `K_mn` and `Q` of a quartic at a fixed direction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticAux {
    /// `N_m = M_mijk v^i v^j v^k`, a quarter of the gradient of `Q`.
    pub n: DVector<f64>,
    /// `K_mn = M_mnij v^i v^j`, a twelfth of the Hessian of `Q`.
    pub k: DMatrix<f64>,
    pub q: f64,
}

/// Fully symmetric rank-4 tensor on an `n`-dimensional space (`n` = 2 or 4).
#[derive(Debug, Clone)]
pub struct SymQuartic {
    dim: usize,
    coeffs: Vec<f64>,
    dense: OnceLock<Vec<f64>>,
}

impl PartialEq for SymQuartic {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.coeffs == other.coeffs
    }
}

impl SymQuartic {
    /// Builds from multiset coefficients in [`multisets`] order.
    pub fn from_multiset_coeffs(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        let expected = multisets(dim).len();
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            dim,
            coeffs,
            dense: OnceLock::new(),
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Self::from_multiset_coeffs(dim, vec![0.0; multisets(dim).len()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Multiset coefficients, i.e. the tensor components `M_ijkl` for sorted
    /// `i <= j <= k <= l`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.dense()[flat(self.dim, i, j, k, l)]
    }

    /// Max-norm of the coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Dense row-major `n^4` expansion.
    pub fn dense(&self) -> &[f64] {
        self.dense.get_or_init(|| {
            let n = self.dim;
            let mut out = vec![0.0; n * n * n * n];
            let sets = multisets(n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let mut s = [i, j, k, l];
                            s.sort_unstable();
                            let slot = sets.iter().position(|m| *m == s).unwrap();
                            out[flat(n, i, j, k, l)] = self.coeffs[slot];
                        }
                    }
                }
            }
            out
        })
    }

    fn check_vec(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `Q(v) = M_ijkl v^i v^j v^k v^l`.
    ///
    /// Panics if `v` has the wrong length; see [`SymQuartic::try_eval`].
    pub fn eval(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim, "direction has wrong dimension");
        multisets(self.dim)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| **c != 0.0)
            .map(|(m, c)| multiplicity(*m) * c * v[m[0]] * v[m[1]] * v[m[2]] * v[m[3]])
            .sum()
    }

    pub fn try_eval(&self, v: &[f64]) -> Result<f64> {
        self.check_vec(v)?;
        Ok(self.eval(v))
    }

    /// Contractions `N`, `K` and the value `Q` at `v`.
    pub fn aux(&self, v: &[f64]) -> QuarticAux {
        assert_eq!(v.len(), self.dim, "direction has wrong dimension");
        let n = self.dim;
        let d = self.dense();
        let mut k = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += d[flat(n, a, b, i, j)] * v[i] * v[j];
                    }
                }
                k[(a, b)] = s;
            }
        }
        // K is symmetric in exact arithmetic; make it so in floating point too
        let k = (&k + k.transpose()) * 0.5;
        let nv = DVector::from_fn(n, |a, _| (0..n).map(|b| k[(a, b)] * v[b]).sum());
        QuarticAux {
            n: nv,
            k,
            q: self.eval(v),
        }
    }

    /// `T_ijk = M_ijkl v^l`; the third derivative of `Q` is `24 T`.
    pub fn contract1(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let d = self.dense();
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[(i * n + j) * n + k] = (0..n).map(|l| d[flat(n, i, j, k, l)] * v[l]).sum();
                }
            }
        }
        out
    }

    /// Linear combination `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &SymQuartic, b: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::from_multiset_coeffs(self.dim, coeffs)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            dense: OnceLock::new(),
        }
    }

    /// Largest deviation between the dense expansion and any of its index
    /// permutations. Zero by construction; exposed for audits.
    pub fn max_asymmetry(&self) -> f64 {
        max_asymmetry_dense(self.dim, self.dense())
    }

    pub fn to_literal(&self) -> QuarticLiteral {
        QuarticLiteral::Symmetric {
            dim: self.dim,
            coeffs: self.coeffs.clone(),
        }
    }
}

pub(crate) fn max_asymmetry_dense(n: usize, d: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let idx = [i, j, k, l];
                    let base = d[flat(n, i, j, k, l)];
                    for p in PERMUTATIONS_4.iter() {
                        let q = d[flat(n, idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]])];
                        worst = worst.max((q - base).abs());
                    }
                }
            }
        }
    }
    worst
}

/// Projects a dense row-major `n^4` array onto the fully symmetric part by
/// averaging over the 24 index permutations.
pub fn symmetrize4(dim: usize, dense: &[f64]) -> Result<SymQuartic> {
    check_dim(dim)?;
    let expected = dim.pow(4);
    if dense.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: dense.len(),
        });
    }
    let coeffs = multisets(dim)
        .iter()
        .map(|m| {
            PERMUTATIONS_4
                .iter()
                .map(|p| dense[flat(dim, m[p[0]], m[p[1]], m[p[2]], m[p[3]])])
                .sum::<f64>()
                / 24.0
        })
        .collect();
    SymQuartic::from_multiset_coeffs(dim, coeffs)
}

/// `M_ijkl = g_(ij h_kl)`, so that `Q(v) = g(v,v) h(v,v)`.
pub fn from_quadric_product(g: &SymQuadric, h: &SymQuadric) -> Result<SymQuartic> {
    let n = g.dim();
    if h.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.dim(),
        });
    }
    check_dim(n)?;
    let mut dense = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    dense[flat(n, i, j, k, l)] = g.matrix()[(i, j)] * h.matrix()[(k, l)];
                }
            }
        }
    }
    symmetrize4(n, &dense)
}

/// `M_ijkl = g_(ij g_kl)`, so that `Q(v) = g(v,v)^2`.
pub fn from_quadric_square(g: &SymQuadric) -> Result<SymQuartic> {
    from_quadric_product(g, g)
}

/// `Q(v) = sum_i w_i (v^i)^4`.
pub fn from_diagonal_powers(weights: &[f64]) -> Result<SymQuartic> {
    let n = weights.len();
    check_dim(n)?;
    let coeffs = multisets(n)
        .iter()
        .map(|m| {
            if m[0] == m[3] {
                weights[m[0]]
            } else {
                0.0
            }
        })
        .collect();
    SymQuartic::from_multiset_coeffs(n, coeffs)
}

/// JSON literal for a quartic, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuarticLiteral {
    /// Row-major `n^4` array; symmetrized on load.
    Dense { dim: usize, coeffs: Vec<f64> },
    Square { dim: usize, g: Vec<Vec<f64>> },
    Product {
        dim: usize,
        g: Vec<Vec<f64>>,
        h: Vec<Vec<f64>>,
    },
    DiagPowers { dim: usize, weights: Vec<f64> },
    /// Multiset coefficients in lexicographic `i <= j <= k <= l` order.
    /// This is the form written by `save`, and it loads without arithmetic.
    Symmetric { dim: usize, coeffs: Vec<f64> },
}

impl QuarticLiteral {
    pub fn build(&self) -> Result<SymQuartic> {
        let quadric = |dim: usize, rows: &[Vec<f64>]| -> Result<SymQuadric> {
            let q = SymQuadric::from_rows(rows)?;
            if q.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: q.dim(),
                });
            }
            Ok(q)
        };
        match self {
            QuarticLiteral::Dense { dim, coeffs } => symmetrize4(*dim, coeffs),
            QuarticLiteral::Square { dim, g } => from_quadric_square(&quadric(*dim, g)?),
            QuarticLiteral::Product { dim, g, h } => {
                from_quadric_product(&quadric(*dim, g)?, &quadric(*dim, h)?)
            }
            QuarticLiteral::DiagPowers { dim, weights } => {
                if weights.len() != *dim {
                    return Err(Error::DimensionMismatch {
                        expected: *dim,
                        got: weights.len(),
                    });
                }
                from_diagonal_powers(weights)
            }
            QuarticLiteral::Symmetric { dim, coeffs } => {
                SymQuartic::from_multiset_coeffs(*dim, coeffs.clone())
            }
        }
    }
}

pub fn load_quartic(json: &str) -> Result<SymQuartic> {
    let lit: QuarticLiteral = serde_json::from_str(json)?;
    lit.build()
}

pub fn save_quartic(q: &SymQuartic) -> Result<String> {
    Ok(serde_json::to_string_pretty(&q.to_literal())?)
}

#[cfg(test)]
pub(crate) fn slot(dim: usize, idx: [usize; 4]) -> usize {
    let mut s = idx;
    s.sort_unstable();
    multisets(dim).iter().position(|m| *m == s).expect("multiset in range")
}
