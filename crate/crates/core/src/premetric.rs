//! Premetric electrodynamics: constitutive tensors, their left-right dual and
//! the Fresnel tensor whose quartic is the dispersion relation.
//!
//! Index conventions:
//! - coordinates `0..4` are `(t, x, y, z)`, covectors `q = (omega, q1, q2, q3)`;
//! - bivectors are ordered `01, 02, 03, 23, 31, 12`;
//! - in that basis `chi^{IJ} = [[-eps, gamma], [gamma_tilde, pi]]`, so a
//!   medium with `eps = pi = I` is (twice) the Minkowski vacuum;
//! - the Levi-Civita symbol has `e_0123 = +1`.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quartic::{from_quadric_product, multisets, symmetrize4, SymQuadric, SymQuartic};

pub type Block3 = [[f64; 3]; 3];

/// Bivector basis `01, 02, 03, 23, 31, 12`.
pub const BIVECTORS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

#[inline]
fn idx4(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * 4 + j) * 4 + k) * 4 + l
}

/// Levi-Civita symbol with `e_0123 = +1`.
pub fn levi_civita(i: usize, j: usize, k: usize, l: usize) -> f64 {
    let p = [i, j, k, l];
    for a in 0..4 {
        for b in (a + 1)..4 {
            if p[a] == p[b] {
                return 0.0;
            }
        }
    }
    let mut inversions = 0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if p[a] > p[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The four 3x3 blocks of a constitutive tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockView {
    pub eps: Block3,
    pub pi: Block3,
    #[serde(default)]
    pub gamma: Block3,
    #[serde(default)]
    pub gamma_tilde: Block3,
}

impl BlockView {
    pub fn diagonal(eps: [f64; 3], pi: [f64; 3]) -> Self {
        let d = |x: [f64; 3]| {
            let mut m = [[0.0; 3]; 3];
            for i in 0..3 {
                m[i][i] = x[i];
            }
            m
        };
        Self {
            eps: d(eps),
            pi: d(pi),
            gamma: [[0.0; 3]; 3],
            gamma_tilde: [[0.0; 3]; 3],
        }
    }

    fn to_6x6(self) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] = -self.eps[a][b];
                m[a][b + 3] = self.gamma[a][b];
                m[a + 3][b] = self.gamma_tilde[a][b];
                m[a + 3][b + 3] = self.pi[a][b];
            }
        }
        m
    }
}

/// Rank-4 tensor `chi^{ijkl}` with `chi^{ijkl} = -chi^{jikl} = -chi^{ijlk}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstitutiveTensor {
    chi: Vec<f64>,
}

impl ConstitutiveTensor {
    /// From a dense `4^4` row-major array; rejects arrays that are not pair
    /// antisymmetric.
    pub fn from_dense(chi: Vec<f64>) -> Result<Self> {
        if chi.len() != 256 {
            return Err(Error::DimensionMismatch {
                expected: 256,
                got: chi.len(),
            });
        }
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let x = chi[idx4(i, j, k, l)];
                        if chi[idx4(j, i, k, l)] != -x || chi[idx4(i, j, l, k)] != -x {
                            return Err(Error::InvalidParameter(
                                "constitutive tensor is not antisymmetric within its index pairs".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(Self { chi })
    }

    pub fn zero() -> Self {
        Self { chi: vec![0.0; 256] }
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.chi[idx4(i, j, k, l)]
    }

    pub fn dense(&self) -> &[f64] {
        &self.chi
    }

    /// Places the blocks into the bivector basis and fills in the
    /// antisymmetric partners.
    pub fn assemble(blocks: &BlockView) -> Self {
        let m = blocks.to_6x6();
        let mut chi = vec![0.0; 256];
        for (a, &(i, j)) in BIVECTORS.iter().enumerate() {
            for (b, &(k, l)) in BIVECTORS.iter().enumerate() {
                let x = m[a][b];
                chi[idx4(i, j, k, l)] = x;
                chi[idx4(j, i, k, l)] = -x;
                chi[idx4(i, j, l, k)] = -x;
                chi[idx4(j, i, l, k)] = x;
            }
        }
        Self { chi }
    }

    pub fn split(&self) -> BlockView {
        let mut out = BlockView {
            eps: [[0.0; 3]; 3],
            pi: [[0.0; 3]; 3],
            gamma: [[0.0; 3]; 3],
            gamma_tilde: [[0.0; 3]; 3],
        };
        let at = |a: usize, b: usize| {
            let (i, j) = BIVECTORS[a];
            let (k, l) = BIVECTORS[b];
            self.get(i, j, k, l)
        };
        for a in 0..3 {
            for b in 0..3 {
                out.eps[a][b] = -at(a, b);
                out.gamma[a][b] = at(a, b + 3);
                out.gamma_tilde[a][b] = at(a + 3, b);
                out.pi[a][b] = at(a + 3, b + 3);
            }
        }
        out
    }
}

pub fn assemble_chi(blocks: &BlockView) -> ConstitutiveTensor {
    ConstitutiveTensor::assemble(blocks)
}

/// `chi^{ijkl} = (1/2) sqrt(-det g) (g^{ik} g^{jl} - g^{il} g^{jk})` with
/// `g^{..}` the inverse of `g`.
pub fn isotropic_chi(g: &SymQuadric) -> Result<ConstitutiveTensor> {
    if g.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: g.dim(),
        });
    }
    let m = Matrix4::from_fn(|i, j| g.matrix()[(i, j)]);
    let det = m.determinant();
    if !(det < 0.0) {
        return Err(Error::Signature(format!(
            "isotropic medium needs det g < 0, got {det}"
        )));
    }
    let inv = m
        .try_inverse()
        .ok_or_else(|| Error::Signature("metric is not invertible".into()))?;
    let scale = 0.5 * (-det).sqrt();
    let mut chi = vec![0.0; 256];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    chi[idx4(i, j, k, l)] =
                        scale * (inv[(i, k)] * inv[(j, l)] - inv[(i, l)] * inv[(j, k)]);
                }
            }
        }
    }
    // antisymmetry holds exactly: swapping i,j swaps the two products
    Ok(ConstitutiveTensor { chi })
}

/// All-lower rank-4 tensor produced by [`left_right_dual`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualTensor {
    data: Vec<f64>,
}

impl DualTensor {
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[idx4(a, b, c, d)]
    }

    pub fn dense(&self) -> &[f64] {
        &self.data
    }

    /// Reads the components back as an upper-index tensor (the symbol
    /// carries no metric, so this is the identity on components).
    pub fn as_constitutive(&self) -> Result<ConstitutiveTensor> {
        ConstitutiveTensor::from_dense(self.data.clone())
    }
}

/// `chi~_{abcd} = (1/4) e_{abmn} chi^{mnkl} e_{klcd}`.
///
/// Antisymmetric in `(a,b)` and in `(c,d)`; applying it twice returns `chi`.
pub fn left_right_dual(chi: &ConstitutiveTensor) -> DualTensor {
    let mut data = vec![0.0; 256];
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            for c in 0..4 {
                for d in 0..4 {
                    if c == d {
                        continue;
                    }
                    let mut s = 0.0;
                    for m in 0..4 {
                        for n in 0..4 {
                            let e1 = levi_civita(a, b, m, n);
                            if e1 == 0.0 {
                                continue;
                            }
                            for k in 0..4 {
                                for l in 0..4 {
                                    let e2 = levi_civita(k, l, c, d);
                                    if e2 != 0.0 {
                                        s += e1 * chi.get(m, n, k, l) * e2;
                                    }
                                }
                            }
                        }
                    }
                    data[idx4(a, b, c, d)] = 0.25 * s;
                }
            }
        }
    }
    DualTensor { data }
}

/// Fully symmetric `G^{ijkl}` on the cotangent space.
#[derive(Debug, Clone, PartialEq)]
pub struct FresnelTensor {
    quartic: SymQuartic,
}

impl FresnelTensor {
    pub fn quartic(&self) -> &SymQuartic {
        &self.quartic
    }

    pub fn into_quartic(self) -> SymQuartic {
        self.quartic
    }

    /// `G^{ijkl} q_i q_j q_k q_l`.
    pub fn eval(&self, q: &[f64]) -> f64 {
        self.quartic.eval(q)
    }
}

/// `G^{ijkl} = (1/3!) chi^{a(ij|b} chi~_{acbd} chi^{c|kl)d}`, the
/// symmetrization being the average over the 24 permutations of `ijkl`.
pub fn fresnel_tensor(chi: &ConstitutiveTensor) -> FresnelTensor {
    let dual = left_right_dual(chi);
    // w[i][j][c][d] = chi^{aijb} chi~_{acbd}
    let mut w = vec![0.0; 256];
    for i in 0..4 {
        for j in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut s = 0.0;
                    for a in 0..4 {
                        for b in 0..4 {
                            s += chi.get(a, i, j, b) * dual.get(a, c, b, d);
                        }
                    }
                    w[idx4(i, j, c, d)] = s;
                }
            }
        }
    }
    let mut t = vec![0.0; 256];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut s = 0.0;
                    for c in 0..4 {
                        for d in 0..4 {
                            s += w[idx4(i, j, c, d)] * chi.get(c, k, l, d);
                        }
                    }
                    t[idx4(i, j, k, l)] = s / 6.0;
                }
            }
        }
    }
    FresnelTensor {
        quartic: symmetrize4(4, &t).expect("dimension 4 is supported"),
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

/// Uniaxial medium: `eps = diag(eps_o, eps_o, eps_e)`, `pi = I / mu`,
/// no cross terms; optic axis along `z`.
pub fn uniaxial_chi(eps_o: f64, eps_e: f64, mu: f64) -> Result<ConstitutiveTensor> {
    check_positive("eps_o", eps_o)?;
    check_positive("eps_e", eps_e)?;
    check_positive("mu", mu)?;
    Ok(assemble_chi(&BlockView::diagonal([eps_o, eps_o, eps_e], [1.0 / mu; 3])))
}

/// `Q(omega, q) = (eps_o mu omega^2 - |q|^2)
///   (mu eps_o eps_e omega^2 - eps_o (q1^2 + q2^2) - eps_e q3^2)`.
pub fn uniaxial_quartic(eps_o: f64, eps_e: f64, mu: f64) -> Result<SymQuartic> {
    check_positive("eps_o", eps_o)?;
    check_positive("eps_e", eps_e)?;
    check_positive("mu", mu)?;
    let ordinary = SymQuadric::diag(&[eps_o * mu, -1.0, -1.0, -1.0]);
    let extraordinary = SymQuadric::diag(&[mu * eps_o * eps_e, -eps_o, -eps_o, -eps_e]);
    from_quadric_product(&ordinary, &extraordinary)
}

/// Restriction of a 4D quartic to the plane spanned by two coordinate axes.
pub fn cross_section(m: &SymQuartic, kept: (usize, usize)) -> Result<SymQuartic> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: m.dim(),
        });
    }
    let (a, b) = kept;
    if a == b || a > 3 || b > 3 {
        return Err(Error::InvalidParameter(format!(
            "cross-section needs two distinct axes in 0..4, got ({a}, {b})"
        )));
    }
    let map = [a, b];
    let coeffs = multisets(2)
        .iter()
        .map(|s| m.component(map[s[0]], map[s[1]], map[s[2]], map[s[3]]))
        .collect();
    SymQuartic::from_multiset_coeffs(2, coeffs)
}

/// The four coordinate planes analysed for the uniaxial crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UniaxialSection {
    /// `q1 = q2 = 0`: plane `(omega, q3)`.
    AlongAxis,
    /// `q2 = q3 = 0`: plane `(omega, q1)`.
    Transverse,
    /// `omega = q3 = 0`: plane `(q1, q2)`.
    StaticOrdinary,
    /// `omega = q2 = 0`: plane `(q1, q3)`.
    StaticExtraordinary,
}

impl UniaxialSection {
    pub const ALL: [UniaxialSection; 4] = [
        UniaxialSection::AlongAxis,
        UniaxialSection::Transverse,
        UniaxialSection::StaticOrdinary,
        UniaxialSection::StaticExtraordinary,
    ];

    pub fn kept(self) -> (usize, usize) {
        match self {
            UniaxialSection::AlongAxis => (0, 3),
            UniaxialSection::Transverse => (0, 1),
            UniaxialSection::StaticOrdinary => (1, 2),
            UniaxialSection::StaticExtraordinary => (1, 3),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            UniaxialSection::AlongAxis => "(i) q1=q2=0",
            UniaxialSection::Transverse => "(ii) q2=q3=0",
            UniaxialSection::StaticOrdinary => "(iii) omega=q3=0",
            UniaxialSection::StaticExtraordinary => "(iv) omega=q2=0",
        }
    }
}
