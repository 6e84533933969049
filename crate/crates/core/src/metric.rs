//! Closed-form Finsler metric `f_mn = (1/2) d^2 L / dv^m dv^n` of a quartic
//! Lagrangian, with determinant, eigenvalue signature, norms and the Cartan
//! tensor.
//!
//! For `L = sgn(Q) sqrt|Q|` the metric is
//! `f = (3|Q| K - 2 sgn(Q) N N^T) / |Q|^{3/2}` where `N`, `K` come from
//! [`SymQuartic::aux`]. The other branches differ by a sign (or are
//! undefined) on the timelike side.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Serialize, Serializer};

use crate::catalog::Family;
use crate::error::{Error, Result};
use crate::lagrangian::{norm2, LagrangianSpec, SignClass, DEFAULT_NULL_TOL};
use crate::quartic::SymQuartic;

/// Default relative threshold under which an eigenvalue counts as zero.
pub const DEFAULT_EIG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Null-set tolerance, relative to `|v|^4 |M|_inf`.
    pub null: f64,
    /// Zero-eigenvalue threshold, relative to the largest `|eigenvalue|`.
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            null: DEFAULT_NULL_TOL,
            eig: DEFAULT_EIG_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndefinedReason {
    /// `Q(v) = 0`: the metric has `|Q|^{3/2}` in its denominator.
    NullDirection,
    /// The restricted root branch is not defined where `Q < 0`.
    OutsideDomain,
}

impl fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NullDirection => "null_direction",
            Self::OutsideDomain => "outside_domain",
        })
    }
}

/// Eigenvalue counts `(positive, negative, zero)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn count(eigenvalues: &[f64], rel_tol: f64) -> Self {
        let scale = eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let thr = rel_tol * scale;
        let mut s = Signature {
            pos: 0,
            neg: 0,
            zero: 0,
        };
        for &e in eigenvalues {
            if e.abs() <= thr {
                s.zero += 1;
            } else if e > 0.0 {
                s.pos += 1;
            } else {
                s.neg += 1;
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.pos + self.neg + self.zero
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.pos, self.neg, self.zero]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    pub v: Vec<f64>,
    /// `None` when the metric is undefined at `v`.
    pub f: Option<DMatrix<f64>>,
    /// NaN when undefined.
    pub det: f64,
    pub signature: Option<Signature>,
    pub eigenvalues: Vec<f64>,
    pub reason: Option<UndefinedReason>,
}

impl MetricSample {
    pub fn defined(&self) -> bool {
        self.f.is_some()
    }

    fn undefined(v: &[f64], reason: UndefinedReason) -> Self {
        Self {
            v: v.to_vec(),
            f: None,
            det: f64::NAN,
            signature: None,
            eigenvalues: Vec::new(),
            reason: Some(reason),
        }
    }

    pub fn metric(&self) -> Result<&DMatrix<f64>> {
        self.f
            .as_ref()
            .ok_or_else(|| Error::UndefinedMetric(self.reason.expect("undefined sample has a reason")))
    }
}

#[derive(Serialize)]
struct MetricSampleJson<'a> {
    v: &'a [f64],
    f: Option<Vec<Vec<f64>>>,
    det: Option<f64>,
    signature: Option<[usize; 3]>,
    defined: bool,
    reason: Option<UndefinedReason>,
}

impl Serialize for MetricSample {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let f = self
            .f
            .as_ref()
            .map(|m| m.row_iter().map(|r| r.iter().copied().collect()).collect());
        MetricSampleJson {
            v: &self.v,
            f,
            det: self.defined().then_some(self.det),
            signature: self.signature.map(|s| s.as_array()),
            defined: self.defined(),
            reason: self.reason,
        }
        .serialize(serializer)
    }
}

fn check_direction(spec: &LagrangianSpec, v: &[f64]) -> Result<()> {
    if v.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: v.len(),
        });
    }
    if v.iter().all(|x| *x == 0.0) {
        return Err(Error::Origin);
    }
    Ok(())
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(sgn Q, branch factor)` at `v`, or the reason the metric is undefined.
fn branch_at(spec: &LagrangianSpec, v: &[f64], q: f64, tol: f64) -> std::result::Result<(f64, f64), UndefinedReason> {
    if spec.sign_class(v, tol) == SignClass::Null {
        return Err(UndefinedReason::NullDirection);
    }
    let s = sgn(q);
    spec.branch_factor(s)
        .map(|b| (s, b))
        .ok_or(UndefinedReason::OutsideDomain)
}

/// Metric, determinant and signature at the direction `v`.
pub fn metric_at(spec: &LagrangianSpec, v: &[f64], tol: &Tolerances) -> Result<MetricSample> {
    check_direction(spec, v)?;
    let aux = spec.quartic.aux(v);
    let (s, factor) = match branch_at(spec, v, aux.q, tol.null) {
        Ok(x) => x,
        Err(reason) => return Ok(MetricSample::undefined(v, reason)),
    };
    let n = spec.dim();
    let absq = aux.q.abs();
    let denom = absq * absq.sqrt();
    let mut f = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = factor * (3.0 * absq * aux.k[(i, j)] - 2.0 * s * aux.n[i] * aux.n[j]) / denom;
            f[(i, j)] = x;
            f[(j, i)] = x;
        }
    }
    let det = f.clone().lu().determinant();
    let eigenvalues: Vec<f64> = SymmetricEigen::new(f.clone()).eigenvalues.iter().copied().collect();
    let signature = Signature::count(&eigenvalues, tol.eig);
    Ok(MetricSample {
        v: v.to_vec(),
        f: Some(f),
        det,
        signature: Some(signature),
        eigenvalues,
        reason: None,
    })
}

/// `f_ij(v) u^i u^j`, the squared norm of `u` with respect to `v`.
pub fn norm_wrt(spec: &LagrangianSpec, v: &[f64], u: &[f64], tol: &Tolerances) -> Result<f64> {
    if u.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: u.len(),
        });
    }
    let sample = metric_at(spec, v, tol)?;
    let f = sample.metric()?;
    let n = spec.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += f[(i, j)] * u[i] * u[j];
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CartanSample {
    pub v: Vec<f64>,
    dim: usize,
    /// Row-major `n^3` array.
    pub c: Vec<f64>,
}

impl CartanSample {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

/// `C_ijk = (1/4) d^3 L / dv^i dv^j dv^k` from exact derivatives of `Q`.
pub fn cartan_at(spec: &LagrangianSpec, v: &[f64], tol: &Tolerances) -> Result<CartanSample> {
    check_direction(spec, v)?;
    let aux = spec.quartic.aux(v);
    let (s, factor) = branch_at(spec, v, aux.q, tol.null).map_err(Error::UndefinedMetric)?;
    let n = spec.dim();
    let t = spec.quartic.contract1(v);
    let p = aux.q.abs();
    let sp = p.sqrt();
    let grad = |i: usize| 4.0 * aux.n[i];
    let hess = |i: usize, j: usize| 12.0 * aux.k[(i, j)];
    let mut c = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let q3 = 24.0 * t[(i * n + j) * n + k];
                let mixed = hess(i, j) * grad(k) + hess(i, k) * grad(j) + hess(j, k) * grad(i);
                let d3 = 0.5 * q3 / sp - 0.25 * s * mixed / (p * sp)
                    + 0.375 * grad(i) * grad(j) * grad(k) / (p * p * sp);
                c[(i * n + j) * n + k] = 0.25 * factor * d3;
            }
        }
    }
    Ok(CartanSample { v: v.to_vec(), dim: n, c })
}

/// Half the second central difference of `L` with step `h |v|`.
///
/// Verification oracle for [`metric_at`]; it has no knowledge of the closed
/// form. Fails if `L` is undefined anywhere on the stencil.
pub fn fd_oracle(spec: &LagrangianSpec, v: &[f64], h: f64) -> Result<DMatrix<f64>> {
    check_direction(spec, v)?;
    let n = spec.dim();
    let step = h * norm2(v);
    let l = |p: &[f64]| {
        spec.lagrangian_value(p)
            .ok_or(Error::UndefinedMetric(UndefinedReason::OutsideDomain))
    };
    let shifted = |di: (usize, f64), dj: (usize, f64)| {
        let mut p = v.to_vec();
        p[di.0] += di.1 * step;
        p[dj.0] += dj.1 * step;
        p
    };
    let l0 = l(v)?;
    let mut f = DMatrix::zeros(n, n);
    for i in 0..n {
        let up = l(&shifted((i, 1.0), (i, 0.0)))?;
        let down = l(&shifted((i, -1.0), (i, 0.0)))?;
        f[(i, i)] = 0.5 * (up - 2.0 * l0 + down) / (step * step);
        for j in (i + 1)..n {
            let pp = l(&shifted((i, 1.0), (j, 1.0)))?;
            let pm = l(&shifted((i, 1.0), (j, -1.0)))?;
            let mp = l(&shifted((i, -1.0), (j, 1.0)))?;
            let mm = l(&shifted((i, -1.0), (j, -1.0)))?;
            let x = 0.5 * (pp - pm - mp + mm) / (4.0 * step * step);
            f[(i, j)] = x;
            f[(j, i)] = x;
        }
    }
    Ok(f)
}

/// Closed-form determinant of the metric for a catalog family.
pub fn determinant_closed_form(family: Family, k: f64, v: &[f64]) -> Result<f64> {
    family.closed_form_det(k, v)
}

/// Convenience: the metric sample of a bare quartic under the signed branch.
pub fn metric_of(quartic: &SymQuartic, v: &[f64]) -> Result<MetricSample> {
    metric_at(&LagrangianSpec::signed(quartic.clone()), v, &Tolerances::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::BranchConvention;
    use crate::quartic::{from_diagonal_powers, from_quadric_product, from_quadric_square, SymQuadric};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    fn assert_matrix(f: &DMatrix<f64>, expected: &[f64], tol: f64) {
        let n = f.nrows();
        for idx in 0..n * n {
            let (i, j) = (idx / n, idx % n);
            assert!(close(f[(i, j)], expected[idx], tol), "({i},{j}): {} vs {}", f[(i, j)], expected[idx]);
        }
    }

    #[test]
    fn euclid_square_metric_is_identity() {
        let spec = LagrangianSpec::signed(from_quadric_square(&SymQuadric::identity(2)).unwrap());
        for v in [[1.0, 0.0], [0.3, -2.0], [5.0, 5.0]] {
            let m = metric_at(&spec, &v, &Tolerances::default()).unwrap();
            assert_matrix(m.f.as_ref().unwrap(), &[1.0, 0.0, 0.0, 1.0], 1e-14);
            assert_eq!(m.signature.unwrap().as_array(), [2, 0, 0]);
        }
    }

    #[test]
    fn power_sum_at_diagonal() {
        let spec = LagrangianSpec::signed(from_diagonal_powers(&[1.0, 1.0]).unwrap());
        let m = metric_at(&spec, &[1.0, 1.0], &Tolerances::default()).unwrap();
        let c = 2.0_f64.powf(-1.5);
        assert_matrix(m.f.as_ref().unwrap(), &[4.0 * c, -2.0 * c, -2.0 * c, 4.0 * c], 1e-14);
        assert!(close(m.det, 1.5, 1e-14));
    }

    #[test]
    fn power_sum_matches_closed_form_entries() {
        // f = (a^4+b^4)^{-3/2} [[a^2(a^4+3b^4), -2a^3b^3], [-2a^3b^3, (3a^4+b^4)b^2]]
        let spec = LagrangianSpec::signed(from_diagonal_powers(&[1.0, 1.0]).unwrap());
        let (a, b) = (0.7_f64, -1.9_f64);
        let m = metric_at(&spec, &[a, b], &Tolerances::default()).unwrap();
        let d = (a.powi(4) + b.powi(4)).powf(1.5);
        let e = [
            a * a * (a.powi(4) + 3.0 * b.powi(4)) / d,
            -2.0 * a.powi(3) * b.powi(3) / d,
            -2.0 * a.powi(3) * b.powi(3) / d,
            (3.0 * a.powi(4) + b.powi(4)) * b * b / d,
        ];
        assert_matrix(m.f.as_ref().unwrap(), &e, 1e-13);
    }

    #[test]
    fn lorentz_square_signed() {
        let spec = LagrangianSpec::signed(from_quadric_square(&SymQuadric::diag(&[1.0, -1.0])).unwrap());
        let m = metric_at(&spec, &[2.0, 1.0], &Tolerances::default()).unwrap();
        assert_matrix(m.f.as_ref().unwrap(), &[1.0, 0.0, 0.0, -1.0], 1e-14);
        assert_eq!(m.signature.unwrap().as_array(), [1, 1, 0]);
        let m = metric_at(&spec, &[1.0, 1.0], &Tolerances::default()).unwrap();
        assert!(!m.defined());
        assert_eq!(m.reason, Some(UndefinedReason::NullDirection));
    }

    #[test]
    fn power_diff_branches() {
        let q = from_diagonal_powers(&[1.0, -1.0]).unwrap();
        let v = [0.4, 1.1]; // timelike
        let signed = metric_at(&LagrangianSpec::signed(q.clone()), &v, &Tolerances::default()).unwrap();
        let abs = metric_at(
            &LagrangianSpec::new(q.clone(), BranchConvention::AbsoluteValue),
            &v,
            &Tolerances::default(),
        )
        .unwrap();
        let fs = signed.f.unwrap();
        let fa = abs.f.unwrap();
        assert!((fs + fa).abs().max() < 1e-14);
        let restricted = metric_at(
            &LagrangianSpec::new(q, BranchConvention::RestrictedRoot),
            &v,
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(restricted.reason, Some(UndefinedReason::OutsideDomain));
    }

    #[test]
    fn origin_is_an_error() {
        let spec = LagrangianSpec::signed(from_diagonal_powers(&[1.0, 1.0]).unwrap());
        assert!(matches!(metric_at(&spec, &[0.0, 0.0], &Tolerances::default()), Err(Error::Origin)));
        assert!(matches!(
            metric_at(&spec, &[1.0, 0.0, 0.0], &Tolerances::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn norm_examples() {
        let tol = Tolerances::default();
        let ps = LagrangianSpec::signed(from_diagonal_powers(&[1.0, 1.0]).unwrap());
        assert_eq!(norm_wrt(&ps, &[1.0, 0.0], &[0.0, 1.0], &tol).unwrap(), 0.0);
        let v = [0.3, 0.8];
        assert!(close(norm_wrt(&ps, &v, &v, &tol).unwrap(), ps.lagrangian_value(&v).unwrap(), 1e-13));
        let eu = LagrangianSpec::signed(from_quadric_square(&SymQuadric::identity(2)).unwrap());
        assert!(close(norm_wrt(&eu, &[0.2, -7.0], &[3.0, 4.0], &tol).unwrap(), 25.0, 1e-13));
        let ls = LagrangianSpec::signed(from_quadric_square(&SymQuadric::diag(&[1.0, -1.0])).unwrap());
        assert!(matches!(
            norm_wrt(&ls, &[1.0, -1.0], &[1.0, 0.0], &tol),
            Err(Error::UndefinedMetric(UndefinedReason::NullDirection))
        ));
    }

    #[test]
    fn cartan_vanishes_for_squares() {
        let tol = Tolerances::default();
        for g in [
            SymQuadric::identity(2),
            SymQuadric::from_rows(&[vec![2.0, 0.3], vec![0.3, -1.0]]).unwrap(),
        ] {
            let spec = LagrangianSpec::signed(from_quadric_square(&g).unwrap());
            for v in [[1.0, 0.2], [0.1, 1.0], [-0.7, 0.4]] {
                let c = cartan_at(&spec, &v, &tol).unwrap();
                assert!(c.max_abs() < 1e-12, "{:?}", c.c);
            }
        }
    }

    #[test]
    fn cartan_is_symmetric_and_nonzero_for_power_sum() {
        let spec = LagrangianSpec::signed(from_diagonal_powers(&[1.0, 1.0]).unwrap());
        // symbolic third derivatives of sqrt(x^4 + y^4) at (1, 1/2), divided by 4
        let c = cartan_at(&spec, &[1.0, 0.5], &Tolerances::default()).unwrap();
        let expected = [
            ((0, 0, 0), -0.15106025088768052),
            ((0, 0, 1), 0.30212050177536287),
            ((0, 1, 1), -0.6042410035507257),
            ((1, 1, 1), 1.2084820071014515),
        ];
        for ((i, j, k), e) in expected {
            assert!(close(c.get(i, j, k), e, 1e-13), "{i}{j}{k}");
        }
        // the diagonal is a symmetry axis of x^4 + y^4
        let diag = cartan_at(&spec, &[1.0, 1.0], &Tolerances::default()).unwrap();
        assert!(diag.max_abs() < 1e-14);
        for (i, j, k) in [(0, 0, 1), (0, 1, 1)] {
            let x = c.get(i, j, k);
            for (a, b, d) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                assert!(close(c.get(a, b, d), x, 1e-14));
            }
        }
    }

    #[test]
    fn fd_oracle_second_order() {
        let spec = LagrangianSpec::signed(
            from_quadric_product(&SymQuadric::identity(2), &SymQuadric::diag(&[1.0, 3.0])).unwrap(),
        );
        let v = [0.8, 0.45];
        let exact = metric_at(&spec, &v, &Tolerances::default()).unwrap().f.unwrap();
        let e1 = (fd_oracle(&spec, &v, 1e-2).unwrap() - &exact).abs().max();
        let e2 = (fd_oracle(&spec, &v, 5e-3).unwrap() - &exact).abs().max();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn metric_sample_json() {
        let spec = LagrangianSpec::signed(from_quadric_square(&SymQuadric::diag(&[1.0, -1.0])).unwrap());
        let m = metric_at(&spec, &[2.0, 1.0], &Tolerances::default()).unwrap();
        let js: serde_json::Value = serde_json::to_value(&m).unwrap();
        assert_eq!(js["signature"], serde_json::json!([1, 1, 0]));
        assert_eq!(js["defined"], serde_json::json!(true));
        assert_eq!(js["f"], serde_json::json!([[1.0, 0.0], [0.0, -1.0]]));
        let m = metric_at(&spec, &[1.0, 1.0], &Tolerances::default()).unwrap();
        let js: serde_json::Value = serde_json::to_value(&m).unwrap();
        assert_eq!(js["reason"], serde_json::json!("null_direction"));
        assert!(js["f"].is_null());
    }
}
