//! Finsler functions and Lagrangians built from a quartic under the three
//! root conventions, plus the spacelike/timelike/null split of directions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{metric_at, Tolerances};
use crate::quartic::SymQuartic;

/// Default relative tolerance for the null set `|Q| <= tol |v|^4 |M|_inf`.
pub const DEFAULT_NULL_TOL: f64 = 1e-12;

/// How the square/fourth root of an indefinite quartic is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchConvention {
    /// `L = sqrt(Q)`, defined only where `Q >= 0`.
    RestrictedRoot,
    /// `L = sqrt(|Q|)`.
    AbsoluteValue,
    /// `L = sgn(Q) sqrt(|Q|)`, with `sgn(0) = 0`.
    #[default]
    SignedAbsolute,
}

impl FromStr for BranchConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "restricted" => Ok(Self::RestrictedRoot),
            "abs" => Ok(Self::AbsoluteValue),
            "signed" => Ok(Self::SignedAbsolute),
            other => Err(Error::InvalidParameter(format!("unknown branch `{other}`"))),
        }
    }
}

impl fmt::Display for BranchConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RestrictedRoot => "restricted",
            Self::AbsoluteValue => "abs",
            Self::SignedAbsolute => "signed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Spacelike,
    Timelike,
    Null,
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

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianSpec {
    pub quartic: SymQuartic,
    pub branch: BranchConvention,
}

impl LagrangianSpec {
    pub fn new(quartic: SymQuartic, branch: BranchConvention) -> Self {
        Self { quartic, branch }
    }

    pub fn signed(quartic: SymQuartic) -> Self {
        Self::new(quartic, BranchConvention::SignedAbsolute)
    }

    pub fn dim(&self) -> usize {
        self.quartic.dim()
    }

    pub fn q(&self, v: &[f64]) -> f64 {
        self.quartic.eval(v)
    }

    /// Factor turning the signed-branch value into this branch's value at a
    /// point where `Q` has sign `s`. `None` where the branch is undefined.
    pub(crate) fn branch_factor(&self, s: f64) -> Option<f64> {
        match self.branch {
            BranchConvention::SignedAbsolute => Some(1.0),
            BranchConvention::AbsoluteValue => Some(if s < 0.0 { -1.0 } else { 1.0 }),
            BranchConvention::RestrictedRoot => (s >= 0.0).then_some(1.0),
        }
    }

    /// Second-order homogeneous `L(v)`; `None` outside the branch domain.
    pub fn lagrangian_value(&self, v: &[f64]) -> Option<f64> {
        let q = self.q(v);
        let s = sgn(q);
        self.branch_factor(s).map(|b| b * s * q.abs().sqrt())
    }

    /// First-order homogeneous `F(v)`; `None` outside the branch domain.
    pub fn finsler_function(&self, v: &[f64]) -> Option<f64> {
        let q = self.q(v);
        let s = sgn(q);
        self.branch_factor(s).map(|b| b * s * q.abs().sqrt().sqrt())
    }

    pub fn sign_class(&self, v: &[f64], tol: f64) -> SignClass {
        sign_class_of(&self.quartic, v, tol)
    }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Null if `|Q(v)| <= tol |v|^4 |M|_inf`, otherwise by the sign of `Q`.
pub fn sign_class_of(quartic: &SymQuartic, v: &[f64], tol: f64) -> SignClass {
    let q = quartic.eval(v);
    let r2 = v.iter().map(|x| x * x).sum::<f64>();
    if q.abs() <= tol * r2 * r2 * quartic.max_abs() {
        SignClass::Null
    } else if q > 0.0 {
        SignClass::Spacelike
    } else {
        SignClass::Timelike
    }
}

/// One axiom's outcome over a sample of directions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub passed: bool,
    /// Directions where the axiom fails.
    pub violations: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn get(&self, axiom: &str) -> &AxiomResult {
        self.results
            .iter()
            .find(|r| r.axiom == axiom)
            .expect("known axiom name")
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

fn fd_gradient(spec: &LagrangianSpec, v: &[f64], h: f64) -> Option<Vec<f64>> {
    let mut g = Vec::with_capacity(v.len());
    let mut p = v.to_vec();
    for i in 0..v.len() {
        p[i] = v[i] + h;
        let up = spec.lagrangian_value(&p)?;
        p[i] = v[i] - h;
        let down = spec.lagrangian_value(&p)?;
        p[i] = v[i];
        g.push((up - down) / (2.0 * h));
    }
    Some(g)
}

/// Checks F1..F6 on each sample direction and reports the violating subset.
///
/// F4 is judged by two things: the direction must be off the null set (where
/// quartic Lagrangians lose differentiability) and the central-difference
/// gradient of `L` must be stable when the step is halved.
pub fn axiom_audit(spec: &LagrangianSpec, sample: &[Vec<f64>]) -> Result<AxiomReport> {
    if sample.is_empty() {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let tol = Tolerances::default();
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    let mut f3 = Vec::new();
    let mut f4 = Vec::new();
    let mut f5 = Vec::new();
    let mut f6 = Vec::new();
    for v in sample {
        if v.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                got: v.len(),
            });
        }
        if v.iter().all(|x| *x == 0.0) {
            return Err(Error::Origin);
        }
        let f = spec.finsler_function(v);
        if !f.is_some_and(f64::is_finite) {
            f1.push(v.clone());
        }
        if !f.is_some_and(|x| x > 0.0) {
            f2.push(v.clone());
        }
        let homogeneous = f.is_some_and(|fv| {
            [0.5, 2.0, 7.0].iter().all(|&lam| {
                let scaled: Vec<f64> = v.iter().map(|x| x * lam).collect();
                spec.finsler_function(&scaled)
                    .is_some_and(|fs| (fs - lam * fv).abs() <= 1e-12 * lam * fv.abs().max(1e-300))
            })
        });
        if !homogeneous {
            f3.push(v.clone());
        }
        let smooth = spec.sign_class(v, tol.null) != SignClass::Null && {
            let h = 1e-4 * norm2(v);
            match (fd_gradient(spec, v, h), fd_gradient(spec, v, h / 2.0)) {
                (Some(a), Some(b)) => {
                    let scale = a.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1e-300);
                    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-6 * scale)
                }
                _ => false,
            }
        };
        if !smooth {
            f4.push(v.clone());
        }
        let sample = metric_at(spec, v, &tol)?;
        match sample.signature {
            Some(sig) => {
                if sig.zero > 0 {
                    f5.push(v.clone());
                }
                if !(sig.pos == spec.dim()) {
                    f6.push(v.clone());
                }
            }
            None => {
                f5.push(v.clone());
                f6.push(v.clone());
            }
        }
    }
    let result = |axiom, violations: Vec<Vec<f64>>| AxiomResult {
        axiom,
        passed: violations.is_empty(),
        violations,
    };
    Ok(AxiomReport {
        results: vec![
            result("F1", f1),
            result("F2", f2),
            result("F3", f3),
            result("F4", f4),
            result("F5", f5),
            result("F6", f6),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartic::{from_diagonal_powers, from_quadric_product, from_quadric_square, SymQuadric};

    fn lorentz_square() -> SymQuartic {
        from_quadric_square(&SymQuadric::diag(&[1.0, -1.0])).unwrap()
    }

    fn power_diff() -> SymQuartic {
        from_diagonal_powers(&[1.0, -1.0]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn branch_parsing() {
        assert_eq!("signed".parse::<BranchConvention>().unwrap(), BranchConvention::SignedAbsolute);
        assert_eq!("abs".parse::<BranchConvention>().unwrap(), BranchConvention::AbsoluteValue);
        assert_eq!(
            "restricted".parse::<BranchConvention>().unwrap(),
            BranchConvention::RestrictedRoot
        );
        assert!("nope".parse::<BranchConvention>().is_err());
        assert_eq!(BranchConvention::default(), BranchConvention::SignedAbsolute);
    }

    #[test]
    fn lagrangian_examples() {
        let spec = LagrangianSpec::signed(lorentz_square());
        // Q = (1 - 4)^2 = 9 -> L = 3
        assert!(close(spec.lagrangian_value(&[1.0, 2.0]).unwrap(), 3.0, 1e-15));

        let spec = LagrangianSpec::signed(power_diff());
        assert!(close(spec.lagrangian_value(&[1.0, 2.0]).unwrap(), -(15.0_f64).sqrt(), 1e-15));

        let spec = LagrangianSpec::new(power_diff(), BranchConvention::RestrictedRoot);
        assert_eq!(spec.lagrangian_value(&[1.0, 2.0]), None);
        assert!(close(spec.lagrangian_value(&[2.0, 1.0]).unwrap(), 15.0_f64.sqrt(), 1e-15));

        let spec = LagrangianSpec::new(power_diff(), BranchConvention::AbsoluteValue);
        assert!(close(spec.lagrangian_value(&[1.0, 2.0]).unwrap(), 15.0_f64.sqrt(), 1e-15));
    }

    #[test]
    fn finsler_function_examples() {
        let euclid = from_quadric_square(&SymQuadric::identity(2)).unwrap();
        for branch in [
            BranchConvention::RestrictedRoot,
            BranchConvention::AbsoluteValue,
            BranchConvention::SignedAbsolute,
        ] {
            let spec = LagrangianSpec::new(euclid.clone(), branch);
            assert!(close(spec.finsler_function(&[3.0, 4.0]).unwrap(), 5.0, 1e-14));
        }
        let spec = LagrangianSpec::signed(from_diagonal_powers(&[1.0, 1.0]).unwrap());
        assert!(close(spec.finsler_function(&[1.0, 1.0]).unwrap(), 2.0_f64.powf(0.25), 1e-15));
        let spec = LagrangianSpec::signed(power_diff());
        assert!(close(spec.finsler_function(&[2.0, 1.0]).unwrap(), 15.0_f64.powf(0.25), 1e-15));
        assert!(close(spec.finsler_function(&[1.0, 2.0]).unwrap(), -(15.0_f64.powf(0.25)), 1e-15));
        let restricted = LagrangianSpec::new(power_diff(), BranchConvention::RestrictedRoot);
        assert_eq!(restricted.finsler_function(&[1.0, 2.0]), None);
    }

    #[test]
    fn f_squared_matches_l() {
        let q = from_quadric_product(&SymQuadric::identity(2), &SymQuadric::diag(&[1.0, -3.0])).unwrap();
        for branch in [BranchConvention::AbsoluteValue, BranchConvention::SignedAbsolute] {
            let spec = LagrangianSpec::new(q.clone(), branch);
            for v in [[1.0, 0.2], [0.1, 1.0], [-2.0, 0.7]] {
                let f = spec.finsler_function(&v).unwrap();
                let l = spec.lagrangian_value(&v).unwrap();
                assert!(close(f * f, l.abs(), 1e-14));
                assert_eq!(f.signum(), l.signum());
            }
        }
    }

    #[test]
    fn sign_class_examples() {
        let tol = DEFAULT_NULL_TOL;
        assert_eq!(LagrangianSpec::signed(lorentz_square()).sign_class(&[1.0, 1.0], tol), SignClass::Null);
        let spec = LagrangianSpec::signed(power_diff());
        assert_eq!(spec.sign_class(&[2.0, 1.0], tol), SignClass::Spacelike);
        assert_eq!(spec.sign_class(&[1.0, 2.0], tol), SignClass::Timelike);
        assert_eq!(spec.sign_class(&[1.0, -1.0], tol), SignClass::Null);
    }

    #[test]
    fn sign_at_null_is_zero() {
        let spec = LagrangianSpec::signed(power_diff());
        assert_eq!(spec.lagrangian_value(&[1.0, 1.0]), Some(0.0));
    }

    fn circle_sample(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect()
    }

    #[test]
    fn audit_euclid_square_passes() {
        let spec = LagrangianSpec::signed(from_quadric_square(&SymQuadric::identity(2)).unwrap());
        let report = axiom_audit(&spec, &circle_sample(37)).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn audit_power_sum_f5_fails_on_axes() {
        let spec = LagrangianSpec::signed(from_diagonal_powers(&[1.0, 1.0]).unwrap());
        let mut sample = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-2.0, 0.0], vec![0.0, -0.5]];
        sample.extend(circle_sample(40).into_iter().filter(|v| v[0].abs() > 1e-3 && v[1].abs() > 1e-3));
        let report = axiom_audit(&spec, &sample).unwrap();
        let f5 = report.get("F5");
        assert_eq!(f5.violations, sample[..4].to_vec());
        for ax in ["F1", "F2", "F3", "F4"] {
            assert!(report.get(ax).passed, "{ax}");
        }
        assert_eq!(report.get("F6").violations, sample[..4].to_vec());
    }

    #[test]
    fn audit_power_diff_f2_fails_on_timelike() {
        let spec = LagrangianSpec::signed(power_diff());
        let sample: Vec<Vec<f64>> = circle_sample(36)
            .into_iter()
            .filter(|v| spec.sign_class(v, DEFAULT_NULL_TOL) != SignClass::Null)
            .collect();
        let report = axiom_audit(&spec, &sample).unwrap();
        let timelike: Vec<Vec<f64>> = sample
            .iter()
            .filter(|v| spec.sign_class(v, DEFAULT_NULL_TOL) == SignClass::Timelike)
            .cloned()
            .collect();
        assert!(!timelike.is_empty());
        assert_eq!(report.get("F2").violations, timelike);
        assert!(report.get("F1").passed);
        assert!(report.get("F3").passed);
    }

    #[test]
    fn audit_rejects_origin_and_empty() {
        let spec = LagrangianSpec::signed(power_diff());
        assert!(matches!(axiom_audit(&spec, &[]), Err(Error::InvalidParameter(_))));
        assert!(matches!(axiom_audit(&spec, &[vec![0.0, 0.0]]), Err(Error::Origin)));
    }
}
