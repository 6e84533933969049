//! Named quartics: the two-dimensional families with closed-form metric
//! determinants, and the CLI preset vocabulary.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::premetric;
use crate::quartic::{from_diagonal_powers, from_quadric_product, from_quadric_square, SymQuadric, SymQuartic};

/// Two-dimensional quartic families, in `v = (alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `alpha^4 + beta^4`
    PowerSum,
    /// `alpha^4 - beta^4`
    PowerDiff,
    /// `(alpha^2 + beta^2)(alpha^2 + k beta^2)`
    EuclidEuclid,
    /// `(alpha^2 + beta^2)(alpha^2 - k beta^2)`
    EuclidLorentz,
    /// `(alpha^2 - beta^2)(alpha^2 - k beta^2)`
    LorentzLorentz,
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::PowerSum,
        Family::PowerDiff,
        Family::EuclidEuclid,
        Family::EuclidLorentz,
        Family::LorentzLorentz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PowerSum => "power_sum",
            Family::PowerDiff => "power_diff",
            Family::EuclidEuclid => "ee",
            Family::EuclidLorentz => "el",
            Family::LorentzLorentz => "ll",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family `{s}`")))
    }

    pub fn uses_k(self) -> bool {
        !matches!(self, Family::PowerSum | Family::PowerDiff)
    }

    fn check_k(self, k: f64) -> Result<()> {
        if self.uses_k() && !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("{} needs k > 0, got {k}", self.name())));
        }
        Ok(())
    }

    pub fn quartic(self, k: f64) -> Result<SymQuartic> {
        self.check_k(k)?;
        let id = SymQuadric::identity(2);
        let lorentz = SymQuadric::diag(&[1.0, -1.0]);
        match self {
            Family::PowerSum => from_diagonal_powers(&[1.0, 1.0]),
            Family::PowerDiff => from_diagonal_powers(&[1.0, -1.0]),
            Family::EuclidEuclid => from_quadric_product(&id, &SymQuadric::diag(&[1.0, k])),
            Family::EuclidLorentz => from_quadric_product(&id, &SymQuadric::diag(&[1.0, -k])),
            Family::LorentzLorentz => from_quadric_product(&lorentz, &SymQuadric::diag(&[1.0, -k])),
        }
    }

    /// Whether `v` lies on the set where the closed form is singular: the
    /// origin, or a zero of an indefinite factor.
    pub fn is_singular(self, k: f64, v: &[f64]) -> bool {
        let (a2, b2) = (v[0] * v[0], v[1] * v[1]);
        let r2 = a2 + b2;
        if r2 == 0.0 {
            return true;
        }
        let eps = 1e-12 * r2 * k.max(1.0);
        let on = |x: f64| x.abs() <= eps;
        match self {
            Family::PowerSum | Family::EuclidEuclid => false,
            Family::PowerDiff => on(a2 - b2),
            Family::EuclidLorentz => on(a2 - k * b2),
            Family::LorentzLorentz => on(a2 - b2) || on(a2 - k * b2),
        }
    }

    /// Closed-form determinant of the signed-branch metric.
    pub fn closed_form_det(self, k: f64, v: &[f64]) -> Result<f64> {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: v.len() });
        }
        self.check_k(k)?;
        if self.is_singular(k, v) {
            return Err(Error::SingularInput(format!(
                "{} at ({}, {}) with k = {k}",
                self.name(),
                v[0],
                v[1]
            )));
        }
        let (a, b) = (v[0], v[1]);
        let (a2, b2) = (a * a, b * b);
        let (a4, b4) = (a2 * a2, b2 * b2);
        Ok(match self {
            Family::PowerSum => 3.0 * a2 * b2 / (a4 + b4),
            Family::PowerDiff => -3.0 * a2 * b2 / (a4 - b4).abs(),
            Family::EuclidEuclid => {
                (2.0 * (1.0 + k) * a4 - (k * k - 10.0 * k + 1.0) * a2 * b2 + 2.0 * k * (k + 1.0) * b4)
                    / (4.0 * (a2 + b2) * (a2 + k * b2))
            }
            Family::EuclidLorentz => {
                (2.0 * (1.0 - k) * a4 - (k * k + 10.0 * k + 1.0) * a2 * b2 - 2.0 * k * (1.0 - k) * b4)
                    / (4.0 * (a2 + b2) * (a2 - k * b2).abs())
            }
            Family::LorentzLorentz => {
                -(2.0 * (k + 1.0) * a4 + (k * k - 10.0 * k + 1.0) * a2 * b2 + 2.0 * k * (k + 1.0) * b4)
                    / (4.0 * ((a2 - b2) * (a2 - k * b2)).abs())
            }
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named quartic sources selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    EuclidSquare,
    PowerSum,
    LorentzSquare,
    PowerDiff,
    Ee(f64),
    El(f64),
    Ll(f64),
    Vacuum,
    Uniaxial { eps_o: f64, eps_e: f64, mu: f64 },
}

fn parse_args(inner: &str) -> Result<Vec<f64>> {
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad number `{s}`")))
        })
        .collect()
}

impl Preset {
    /// Parses `name` or `name(args)`. For the `ee`/`el`/`ll` families a bare
    /// name takes its parameter from `k`.
    pub fn parse(text: &str, k: Option<f64>) -> Result<Self> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            Some(open) => {
                let close = text
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidParameter(format!("unbalanced preset `{text}`")))?;
                (&text[..open], Some(parse_args(&close[open + 1..])?))
            }
            None => (text, None),
        };
        let one = |args: &Option<Vec<f64>>| -> Result<f64> {
            match (args, k) {
                (Some(a), _) if a.len() == 1 => Ok(a[0]),
                (Some(a), _) => Err(Error::InvalidParameter(format!("{name} takes one argument, got {}", a.len()))),
                (None, Some(k)) => Ok(k),
                (None, None) => Err(Error::InvalidParameter(format!("{name} needs k: use {name}(k) or --k"))),
            }
        };
        let preset = match name {
            "euclid_square" => Preset::EuclidSquare,
            "power_sum" => Preset::PowerSum,
            "lorentz_square" => Preset::LorentzSquare,
            "power_diff" => Preset::PowerDiff,
            "ee" => Preset::Ee(one(&args)?),
            "el" => Preset::El(one(&args)?),
            "ll" => Preset::Ll(one(&args)?),
            "vacuum" => Preset::Vacuum,
            "uniaxial" => match args.as_deref() {
                Some([eps_o, eps_e, mu]) => Preset::Uniaxial {
                    eps_o: *eps_o,
                    eps_e: *eps_e,
                    mu: *mu,
                },
                _ => {
                    return Err(Error::InvalidParameter(
                        "uniaxial takes three arguments: uniaxial(eps_o,eps_e,mu)".into(),
                    ))
                }
            },
            other => return Err(Error::InvalidParameter(format!("unknown preset `{other}`"))),
        };
        Ok(preset)
    }

    pub fn family(&self) -> Option<(Family, f64)> {
        match *self {
            Preset::PowerSum => Some((Family::PowerSum, 0.0)),
            Preset::PowerDiff => Some((Family::PowerDiff, 0.0)),
            Preset::Ee(k) => Some((Family::EuclidEuclid, k)),
            Preset::El(k) => Some((Family::EuclidLorentz, k)),
            Preset::Ll(k) => Some((Family::LorentzLorentz, k)),
            _ => None,
        }
    }

    pub fn quartic(&self) -> Result<SymQuartic> {
        if let Some((family, k)) = self.family() {
            return family.quartic(k);
        }
        match *self {
            Preset::EuclidSquare => from_quadric_square(&SymQuadric::identity(2)),
            Preset::LorentzSquare => from_quadric_square(&SymQuadric::diag(&[1.0, -1.0])),
            Preset::Vacuum => {
                let chi = premetric::isotropic_chi(&SymQuadric::minkowski(4))?;
                Ok(premetric::fresnel_tensor(&chi).into_quartic())
            }
            Preset::Uniaxial { eps_o, eps_e, mu } => premetric::uniaxial_quartic(eps_o, eps_e, mu),
            _ => unreachable!("family presets handled above"),
        }
    }

    /// Fresnel quartic computed from the constitutive tensor of a medium
    /// preset. For `uniaxial` this is a constant multiple of [`Preset::quartic`].
    pub fn fresnel_quartic(&self) -> Result<SymQuartic> {
        match *self {
            Preset::Vacuum => self.quartic(),
            Preset::Uniaxial { eps_o, eps_e, mu } => {
                Ok(premetric::fresnel_tensor(&premetric::uniaxial_chi(eps_o, eps_e, mu)?).into_quartic())
            }
            other => Err(Error::InvalidParameter(format!(
                "`{other}` is not a medium; use vacuum or uniaxial(eps_o,eps_e,mu)"
            ))),
        }
    }

    /// Whether the quartic is the square of a quadric.
    pub fn is_square(&self) -> bool {
        matches!(self, Preset::EuclidSquare | Preset::LorentzSquare | Preset::Vacuum)
    }

    /// The seven two-dimensional presets of the classification table.
    pub fn table_rows(k_ee: f64, k_el: f64, k_ll: f64) -> [Preset; 7] {
        [
            Preset::EuclidSquare,
            Preset::PowerSum,
            Preset::LorentzSquare,
            Preset::PowerDiff,
            Preset::Ee(k_ee),
            Preset::El(k_el),
            Preset::Ll(k_ll),
        ]
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::EuclidSquare => write!(f, "euclid_square"),
            Preset::PowerSum => write!(f, "power_sum"),
            Preset::LorentzSquare => write!(f, "lorentz_square"),
            Preset::PowerDiff => write!(f, "power_diff"),
            Preset::Ee(k) => write!(f, "ee({k})"),
            Preset::El(k) => write!(f, "el({k})"),
            Preset::Ll(k) => write!(f, "ll({k})"),
            Preset::Vacuum => write!(f, "vacuum"),
            Preset::Uniaxial { eps_o, eps_e, mu } => write!(f, "uniaxial({eps_o},{eps_e},{mu})"),
        }
    }
}
