//! Pseudo-Finsler geometry of Riemann quartics.
//!
//! A quartic form `Q(v) = M_ijkl v^i v^j v^k v^l` defines the Lagrangian
//! `L = sgn(Q) sqrt|Q|` (or one of two other root conventions), whose half
//! Hessian is a direction-dependent metric. The crate computes that metric in
//! closed form, classifies directions by the sign of `L` and the signature of
//! the metric, and builds quartics from premetric electrodynamics.

pub mod catalog;
pub mod classifier;
pub mod error;
pub mod lagrangian;
pub mod metric;
pub mod output;
pub mod premetric;
pub mod quartic;
pub mod reproduce;

pub use catalog::{Family, Preset};
pub use classifier::{
    classify_direction, indicatrix, parameter_map, scan_circle, scan_sphere, ClassificationMap, Extent,
    MetricState, SetInventory, SetLabel,
};
pub use error::{Error, Result};
pub use lagrangian::{axiom_audit, BranchConvention, LagrangianSpec, SignClass};
pub use metric::{cartan_at, fd_oracle, metric_at, norm_wrt, CartanSample, MetricSample, Signature, Tolerances};
pub use premetric::{
    assemble_chi, cross_section, fresnel_tensor, isotropic_chi, left_right_dual, uniaxial_chi, uniaxial_quartic,
    BlockView, ConstitutiveTensor, FresnelTensor,
};
pub use quartic::{load_quartic, save_quartic, SymQuadric, SymQuartic};
