//! Partition of the direction space into the characteristic sets
//! A (spacelike), B (timelike), C (null), D (non-differentiable),
//! E (degenerate metric), F (Euclidean), G (Lorentzian), H (mixed).
//!
//! Two-dimensional scans sample the unit circle and localize every null and
//! degenerate boundary by bisection; higher dimensions are sampled with a
//! Halton sequence on the sphere.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::Family;
use crate::error::{Error, Result};
use crate::lagrangian::{LagrangianSpec, SignClass, DEFAULT_NULL_TOL};
use crate::metric::{metric_at, Tolerances};

const BISECT_ITERS: usize = 60;
/// Normalized `|Q|` accepted as a touching (double) null root.
const TOUCH_NULL_TOL: f64 = 1e-10;
/// `|det|` at a touching root relative to its bracketing samples.
const TOUCH_DET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricState {
    Degenerate,
    Euclidean,
    Lorentzian,
    Mixed,
    Undefined,
}

impl fmt::Display for MetricState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Degenerate => "degenerate",
            Self::Euclidean => "euclidean",
            Self::Lorentzian => "lorentzian",
            Self::Mixed => "mixed",
            Self::Undefined => "undefined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SetLabel {
    pub sign: SignClass,
    pub differentiable: bool,
    #[serde(rename = "metric")]
    pub metric_state: MetricState,
}

pub fn classify_direction(spec: &LagrangianSpec, v: &[f64], tol: &Tolerances) -> Result<SetLabel> {
    let sample = metric_at(spec, v, tol)?;
    let sign = spec.sign_class(v, tol.null);
    let metric_state = match sample.signature {
        None => MetricState::Undefined,
        Some(s) => {
            let n = s.dim();
            if s.zero > 0 {
                MetricState::Degenerate
            } else if s.pos == n || s.neg == n {
                MetricState::Euclidean
            } else if s.neg == 1 || s.pos == 1 {
                MetricState::Lorentzian
            } else {
                MetricState::Mixed
            }
        }
    };
    Ok(SetLabel {
        sign,
        differentiable: sign != SignClass::Null,
        metric_state,
    })
}

/// How much of the direction space a set covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extent {
    Empty,
    /// Nonempty but of measure zero: finitely many rays on the circle, a
    /// conic hypersurface in higher dimension.
    Thin,
    /// Open region that is neither empty nor (almost) everything.
    Sector,
    /// Everything except a measure-zero set.
    Whole,
}

impl Extent {
    pub fn is_empty(self) -> bool {
        self == Extent::Empty
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Empty => "empty",
            Self::Thin => "thin",
            Self::Sector => "sector",
            Self::Whole => "whole",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SetInventory {
    pub a: Extent,
    pub b: Extent,
    pub c: Extent,
    pub d: Extent,
    pub e: Extent,
    pub f: Extent,
    pub g: Extent,
    pub h: Extent,
}

impl SetInventory {
    pub fn entries(&self) -> [(&'static str, Extent); 8] {
        [
            ("A", self.a),
            ("B", self.b),
            ("C", self.c),
            ("D", self.d),
            ("E", self.e),
            ("F", self.f),
            ("G", self.g),
            ("H", self.h),
        ]
    }

    /// Names of the sets on which `self` and `other` disagree.
    pub fn diff(&self, other: &SetInventory) -> Vec<&'static str> {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .filter(|(x, y)| x.1 != y.1)
            .map(|(x, _)| x.0)
            .collect()
    }
}

impl fmt::Display for SetInventory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|(n, e)| format!("{n}={e}")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn region_extent(hits: usize, pool: usize) -> Extent {
    if hits == 0 {
        Extent::Empty
    } else if hits == pool {
        Extent::Whole
    } else {
        Extent::Sector
    }
}

fn thin_extent(found: bool, everything: bool) -> Extent {
    if everything {
        Extent::Whole
    } else if found {
        Extent::Thin
    } else {
        Extent::Empty
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `Q = 0`: the metric is undefined.
    Null,
    /// `det f = 0`.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boundary {
    pub kind: BoundaryKind,
    pub angle: f64,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleSample {
    pub angle: f64,
    pub label: SetLabel,
    /// `Q(u) / |M|_inf` on the unit vector.
    pub q: f64,
    /// NaN where the metric is undefined.
    pub det: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationMap {
    pub resolution: usize,
    pub samples: Vec<AngleSample>,
    pub boundaries: Vec<Boundary>,
    pub inventory: SetInventory,
}

impl ClassificationMap {
    pub fn boundaries_of(&self, kind: BoundaryKind) -> impl Iterator<Item = &Boundary> {
        self.boundaries.iter().filter(move |b| b.kind == kind)
    }
}

fn unit(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

fn bisect<F: Fn(f64) -> Option<f64>>(g: F, mut lo: f64, mut hi: f64, g_lo: f64) -> Option<(f64, f64)> {
    let s_lo = g_lo.signum();
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm == 0.0 {
            return Some((mid, mid));
        }
        if gm.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

fn golden_min<F: Fn(f64) -> Option<f64>>(g: F, mut a: f64, mut b: f64) -> Option<(f64, f64, f64)> {
    let r = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    for _ in 0..BISECT_ITERS {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d)?;
        }
    }
    let (x, gx) = if gc < gd { (c, gc) } else { (d, gd) };
    Some((x, gx, b - a))
}

/// Samples `resolution` equally spaced angles on `[0, 2 pi)` and localizes
/// null and degenerate boundaries to width `<= 2 pi / resolution^2`.
pub fn scan_circle(spec: &LagrangianSpec, resolution: usize, tol: &Tolerances) -> Result<ClassificationMap> {
    if spec.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: spec.dim(),
        });
    }
    if resolution < 8 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least 8, got {resolution}"
        )));
    }
    let m_scale = spec.quartic.max_abs();
    let norm_q = |theta: f64| {
        if m_scale == 0.0 {
            0.0
        } else {
            spec.q(&unit(theta)) / m_scale
        }
    };
    let dq = |theta: f64| {
        let u = unit(theta);
        let nv = spec.quartic.aux(&u).n;
        4.0 * (-nv[0] * u[1] + nv[1] * u[0])
    };
    let det_at = |theta: f64| -> Option<f64> {
        let s = metric_at(spec, &unit(theta), tol).ok()?;
        s.defined().then_some(s.det)
    };

    let step = 2.0 * PI / resolution as f64;
    let samples: Vec<AngleSample> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let angle = step * j as f64;
            let u = unit(angle);
            let label = classify_direction(spec, &u, tol)?;
            let det = metric_at(spec, &u, tol)?.det;
            Ok(AngleSample {
                angle,
                label,
                q: norm_q(angle),
                det,
            })
        })
        .collect::<Result<_>>()?;

    let n = resolution;
    let next = |j: usize| (j + 1) % n;
    let prev = |j: usize| (j + n - 1) % n;
    // angle of the sample after j, unwrapped past 2 pi
    let hi_angle = |j: usize| step * (j + 1) as f64;
    let is_null = |j: usize| samples[j].label.sign == SignClass::Null;
    let defined = |j: usize| samples[j].label.metric_state != MetricState::Undefined;
    let degenerate = |j: usize| samples[j].label.metric_state == MetricState::Degenerate;

    let mut boundaries = Vec::new();
    let mut null_between = vec![false; n];

    for j in 0..n {
        if is_null(j) {
            boundaries.push(Boundary {
                kind: BoundaryKind::Null,
                angle: samples[j].angle,
                lo: samples[j].angle,
                hi: samples[j].angle,
                width: 0.0,
            });
            continue;
        }
        let k = next(j);
        let (qj, qk) = (samples[j].q, samples[k].q);
        if !is_null(k) && qj * qk < 0.0 {
            null_between[j] = true;
            if let Some((lo, hi)) = bisect(|t| Some(norm_q(t)), samples[j].angle, hi_angle(j), qj) {
                boundaries.push(Boundary {
                    kind: BoundaryKind::Null,
                    angle: 0.5 * (lo + hi),
                    lo,
                    hi,
                    width: hi - lo,
                });
            }
            continue;
        }
        // touching root: local minimum of |Q| without a sign change
        let (p, k) = (prev(j), next(j));
        let (ap, aj, ak) = (samples[p].q.abs(), qj.abs(), samples[k].q.abs());
        if !is_null(p) && !is_null(k) && aj <= ap && aj < ak && samples[p].q * qj > 0.0 && qj * samples[k].q > 0.0 {
            // a double root of Q is a simple root of dQ/dtheta
            let a = samples[j].angle - step;
            let b = samples[j].angle + step;
            let (da, db) = (dq(a), dq(b));
            if da * db < 0.0 {
                if let Some((lo, hi)) = bisect(|t| Some(dq(t)), a, b, da) {
                    let x = 0.5 * (lo + hi);
                    if norm_q(x).abs() <= TOUCH_NULL_TOL {
                        null_between[j] = true;
                        null_between[p] = true;
                        boundaries.push(Boundary {
                            kind: BoundaryKind::Null,
                            angle: x.rem_euclid(2.0 * PI),
                            lo: lo.rem_euclid(2.0 * PI),
                            hi: lo.rem_euclid(2.0 * PI) + (hi - lo),
                            width: hi - lo,
                        });
                    }
                }
            }
        }
    }

    for j in 0..n {
        if !defined(j) {
            continue;
        }
        if degenerate(j) {
            boundaries.push(Boundary {
                kind: BoundaryKind::Degenerate,
                angle: samples[j].angle,
                lo: samples[j].angle,
                hi: samples[j].angle,
                width: 0.0,
            });
            continue;
        }
        let k = next(j);
        let same_side = samples[j].label.sign == samples[k].label.sign;
        let (dj, dk) = (samples[j].det, samples[k].det);
        if defined(k) && !degenerate(k) && same_side && !null_between[j] && dj * dk < 0.0 {
            if let Some((lo, hi)) = bisect(det_at, samples[j].angle, hi_angle(j), dj) {
                boundaries.push(Boundary {
                    kind: BoundaryKind::Degenerate,
                    angle: 0.5 * (lo + hi),
                    lo,
                    hi,
                    width: hi - lo,
                });
            }
            continue;
        }
        let p = prev(j);
        if !defined(p) || !defined(k) || degenerate(p) || degenerate(k) || null_between[p] || null_between[j] {
            continue;
        }
        if samples[p].label.sign != samples[j].label.sign || !same_side {
            continue;
        }
        let (ap, aj, ak) = (samples[p].det.abs(), dj.abs(), dk.abs());
        if aj <= ap && aj < ak && samples[p].det * dj > 0.0 && dj * dk > 0.0 {
            let a = samples[j].angle - step;
            let b = samples[j].angle + step;
            if let Some((x, gx, w)) = golden_min(|t| det_at(t).map(f64::abs), a, b) {
                if gx <= TOUCH_DET_TOL * ap.min(ak) {
                    boundaries.push(Boundary {
                        kind: BoundaryKind::Degenerate,
                        angle: x.rem_euclid(2.0 * PI),
                        lo: (x - 0.5 * w).rem_euclid(2.0 * PI),
                        hi: (x - 0.5 * w).rem_euclid(2.0 * PI) + w,
                        width: w,
                    });
                }
            }
        }
    }
    boundaries.sort_by(|x, y| x.angle.total_cmp(&y.angle));

    let inventory = inventory_of(
        samples.iter().map(|s| s.label),
        boundaries.iter().any(|b| b.kind == BoundaryKind::Null),
        boundaries.iter().any(|b| b.kind == BoundaryKind::Degenerate),
        spec.dim(),
    );
    Ok(ClassificationMap {
        resolution,
        samples,
        boundaries,
        inventory,
    })
}

fn inventory_of(labels: impl Iterator<Item = SetLabel>, null_found: bool, degenerate_found: bool, dim: usize) -> SetInventory {
    let (mut sp, mut ti, mut nu, mut total) = (0, 0, 0, 0);
    let (mut deg, mut eu, mut lo, mut mi, mut regular) = (0, 0, 0, 0, 0);
    for l in labels {
        total += 1;
        match l.sign {
            SignClass::Spacelike => sp += 1,
            SignClass::Timelike => ti += 1,
            SignClass::Null => nu += 1,
        }
        match l.metric_state {
            MetricState::Degenerate => deg += 1,
            MetricState::Undefined => {}
            MetricState::Euclidean => eu += 1,
            MetricState::Lorentzian => lo += 1,
            MetricState::Mixed => mi += 1,
        }
        if !matches!(l.metric_state, MetricState::Degenerate | MetricState::Undefined) {
            regular += 1;
        }
    }
    let signed = total - nu;
    let c = thin_extent(null_found || nu > 0, total > 0 && nu == total);
    let defined = regular + deg;
    let h = if dim < 4 { Extent::Empty } else { region_extent(mi, regular) };
    SetInventory {
        a: region_extent(sp, signed),
        b: region_extent(ti, signed),
        c,
        d: c,
        e: thin_extent(degenerate_found || deg > 0, defined > 0 && deg == defined),
        f: region_extent(eu, regular),
        g: region_extent(lo, regular),
        h,
    }
}

/// Label of a parameter-map cell, from the sign of the closed-form
/// determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellLabel {
    Euclidean,
    Lorentzian,
    Degenerate,
    Singular,
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Euclidean => "euclidean",
            Self::Lorentzian => "lorentzian",
            Self::Degenerate => "degenerate",
            Self::Singular => "singular",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapCell {
    pub k: f64,
    pub angle: f64,
    pub det: f64,
    pub label: CellLabel,
}

/// A point of the `det = 0` curve, bracketed in `k` at fixed angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub angle: f64,
    pub k: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterMap {
    pub family: Family,
    pub k_range: (f64, f64),
    pub angle_range: (f64, f64),
    pub grid: (usize, usize),
    /// k-major, then angle.
    pub cells: Vec<MapCell>,
    pub curve: Vec<CurvePoint>,
}

impl ParameterMap {
    pub fn count(&self, label: CellLabel) -> usize {
        self.cells.iter().filter(|c| c.label == label).count()
    }
}

fn linspace(range: (f64, f64), n: usize, i: usize) -> f64 {
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

fn cell_det(family: Family, k: f64, angle: f64) -> (f64, CellLabel) {
    let v = unit(angle);
    if k <= 0.0 || family.is_singular(k, &v) {
        return (f64::NAN, CellLabel::Singular);
    }
    match family.closed_form_det(k, &v) {
        Ok(d) if d.is_finite() => {
            let label = if d > 0.0 {
                CellLabel::Euclidean
            } else if d < 0.0 {
                CellLabel::Lorentzian
            } else {
                CellLabel::Degenerate
            };
            (d, label)
        }
        _ => (f64::NAN, CellLabel::Singular),
    }
}

/// Sign of the closed-form determinant over a `(k, angle)` grid with both
/// ranges sampled inclusively, plus the `det = 0` curve bisected in `k`
/// along every angle column.
pub fn parameter_map(
    family: Family,
    k_range: (f64, f64),
    angle_range: (f64, f64),
    grid: (usize, usize),
) -> Result<ParameterMap> {
    let (nk, na) = grid;
    if nk < 16 || na < 16 {
        return Err(Error::InvalidParameter(format!(
            "grid must be at least 16x16, got {nk}x{na}"
        )));
    }
    if !(k_range.0.is_finite() && k_range.1.is_finite() && k_range.0 < k_range.1) {
        return Err(Error::InvalidParameter(format!("bad k range {k_range:?}")));
    }
    if !(angle_range.0.is_finite() && angle_range.1.is_finite() && angle_range.0 < angle_range.1) {
        return Err(Error::InvalidParameter(format!("bad angle range {angle_range:?}")));
    }
    let cells: Vec<MapCell> = (0..nk * na)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / na, idx % na);
            let k = linspace(k_range, nk, i);
            let angle = linspace(angle_range, na, j);
            let (det, label) = cell_det(family, k, angle);
            MapCell { k, angle, det, label }
        })
        .collect();

    let curve: Vec<CurvePoint> = (0..na)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut pts = Vec::new();
            for i in 0..nk - 1 {
                let (c0, c1) = (&cells[i * na + j], &cells[(i + 1) * na + j]);
                let regular = |c: &MapCell| matches!(c.label, CellLabel::Euclidean | CellLabel::Lorentzian);
                if !regular(c0) || !regular(c1) || c0.label == c1.label {
                    continue;
                }
                let angle = c0.angle;
                let g = |k: f64| {
                    let (d, l) = cell_det(family, k, angle);
                    (l != CellLabel::Singular).then_some(d)
                };
                if let Some((lo, hi)) = bisect(g, c0.k, c1.k, c0.det) {
                    pts.push(CurvePoint {
                        angle,
                        k: 0.5 * (lo + hi),
                        width: hi - lo,
                    });
                }
            }
            pts
        })
        .collect();

    Ok(ParameterMap {
        family,
        k_range,
        angle_range,
        grid,
        cells,
        curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convexity {
    Convex,
    Concave,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatrixPoint {
    pub angle: f64,
    pub p: [f64; 2],
}

/// Index range `[start, end]` into [`Indicatrix::points`] of an arc with
/// constant sign of discrete curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub start: usize,
    pub end: usize,
    pub convexity: Convexity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Indicatrix {
    pub level: f64,
    pub points: Vec<IndicatrixPoint>,
    pub arcs: Vec<Arc>,
    pub note: Option<String>,
}

impl Indicatrix {
    pub fn has(&self, c: Convexity) -> bool {
        self.arcs.iter().any(|a| a.convexity == c)
    }
}

/// Level set `L(v) = level`, one radial point per admissible angle.
pub fn indicatrix(spec: &LagrangianSpec, level: f64, resolution: usize) -> Result<Indicatrix> {
    if spec.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: spec.dim(),
        });
    }
    if resolution < 64 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least 64, got {resolution}"
        )));
    }
    if !(level.is_finite() && level != 0.0) {
        return Err(Error::InvalidParameter(format!("level must be nonzero, got {level}")));
    }
    let step = 2.0 * PI / resolution as f64;
    let radial: Vec<Option<IndicatrixPoint>> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let angle = step * j as f64;
            let u = unit(angle);
            if spec.sign_class(&u, DEFAULT_NULL_TOL) == SignClass::Null {
                return None;
            }
            let l = spec.lagrangian_value(&u)?;
            if l.signum() != level.signum() {
                return None;
            }
            let r = (level / l).sqrt();
            Some(IndicatrixPoint {
                angle,
                p: [r * u[0], r * u[1]],
            })
        })
        .collect();

    if radial.iter().all(Option::is_none) {
        return Ok(Indicatrix {
            level,
            points: Vec::new(),
            arcs: Vec::new(),
            note: Some(format!("no direction has L of the sign of level {level}")),
        });
    }

    // rotate so that, unless every angle is admissible, runs do not wrap
    let n = resolution;
    let full = radial.iter().all(Option::is_some);
    let start = if full {
        0
    } else {
        (0..n)
            .find(|&j| radial[j].is_some() && radial[(j + n - 1) % n].is_none())
            .expect("a run has a first element")
    };
    let mut points = Vec::new();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut open: Option<usize> = None;
    for t in 0..n {
        match radial[(start + t) % n] {
            Some(p) => {
                if open.is_none() {
                    open = Some(points.len());
                }
                points.push(p);
            }
            None => {
                if let Some(s) = open.take() {
                    runs.push((s, points.len() - 1));
                }
            }
        }
    }
    if let Some(s) = open {
        runs.push((s, points.len() - 1));
    }

    let mut arcs = Vec::new();
    for (s, e) in runs {
        let curvature = |i: usize| -> Option<f64> {
            let (a, b, c) = if full {
                (points[(i + n - 1) % n].p, points[i].p, points[(i + 1) % n].p)
            } else if i > s && i < e {
                (points[i - 1].p, points[i].p, points[i + 1].p)
            } else {
                return None;
            };
            let (d1, d2) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
            let cross = d1[0] * d2[1] - d1[1] * d2[0];
            let scale = (d1[0].hypot(d1[1])) * (d2[0].hypot(d2[1]));
            (cross.abs() > 1e-12 * scale).then_some(cross)
        };
        let mut current: Option<(usize, Convexity)> = None;
        for i in s..=e {
            let Some(cr) = curvature(i) else { continue };
            let conv = if cr > 0.0 { Convexity::Convex } else { Convexity::Concave };
            match current {
                Some((_, c)) if c == conv => {}
                Some((a0, c)) => {
                    arcs.push(Arc {
                        start: a0,
                        end: i - 1,
                        convexity: c,
                    });
                    current = Some((i, conv));
                }
                None => current = Some((s, conv)),
            }
        }
        if let Some((a0, c)) = current {
            arcs.push(Arc {
                start: a0,
                end: e,
                convexity: c,
            });
        }
    }

    Ok(Indicatrix {
        level,
        points,
        arcs,
        note: None,
    })
}

/// Default number of sphere samples in four dimensions.
pub const DEFAULT_SPHERE_POINTS: usize = 1 << 14;

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Point `index` of a low-discrepancy sequence on the unit 3-sphere: Halton
/// points in bases 2, 3, 5 pushed through an area-preserving map.
pub fn sphere_point(index: usize) -> [f64; 4] {
    let i = index + 1;
    let (u1, u2, u3) = (radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5));
    let (r1, r2) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (t1, t2) = (2.0 * PI * u2, 2.0 * PI * u3);
    [r1 * t1.sin(), r1 * t1.cos(), r2 * t2.sin(), r2 * t2.cos()]
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LabelCounts {
    pub spacelike: usize,
    pub timelike: usize,
    pub null: usize,
    pub degenerate: usize,
    pub euclidean: usize,
    pub lorentzian: usize,
    pub mixed: usize,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereScan {
    pub points: usize,
    pub counts: LabelCounts,
    /// Thin sets are reported only when hit or implied by adjacent regions
    /// of opposite sign / signature.
    pub inventory: SetInventory,
}

/// Classifies `points` quasi-random directions of the sphere.
pub fn scan_sphere(spec: &LagrangianSpec, points: usize, tol: &Tolerances) -> Result<SphereScan> {
    if points == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let dim = spec.dim();
    if dim != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: dim });
    }
    let labels: Vec<SetLabel> = (0..points)
        .into_par_iter()
        .map(|i| classify_direction(spec, &sphere_point(i), tol))
        .collect::<Result<_>>()?;
    let mut c = LabelCounts::default();
    for l in &labels {
        match l.sign {
            SignClass::Spacelike => c.spacelike += 1,
            SignClass::Timelike => c.timelike += 1,
            SignClass::Null => c.null += 1,
        }
        match l.metric_state {
            MetricState::Degenerate => c.degenerate += 1,
            MetricState::Euclidean => c.euclidean += 1,
            MetricState::Lorentzian => c.lorentzian += 1,
            MetricState::Mixed => c.mixed += 1,
            MetricState::Undefined => c.undefined += 1,
        }
    }
    let null_implied = c.spacelike > 0 && c.timelike > 0;
    let signatures = [c.euclidean, c.lorentzian, c.mixed].iter().filter(|&&x| x > 0).count();
    let degenerate_implied = signatures > 1;
    let inventory = inventory_of(labels.into_iter(), null_implied, degenerate_implied, dim);
    Ok(SphereScan {
        points,
        counts: c,
        inventory,
    })
}
