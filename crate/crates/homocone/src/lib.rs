//! Homogeneous cones realized as spaces of structured symmetric matrices.
//!
//! A structure is a block partition `N = n_1 + … + n_r` together with linear
//! spaces of lower blocks satisfying three closure axioms; the positive
//! definite matrices inside the resulting subspace `Z_V` form a homogeneous
//! cone `Ω_V`, and every homogeneous cone arises this way. The crate builds
//! the triangular group acting on `Z_V`, its characters and generalized power
//! functions, the Gindikin set with its stratification, Bartlett-type
//! samplers for the associated Riesz and Wishart distributions, and a
//! numerical audit of the invariance property that singles out Riesz measures
//! among generating measures of natural exponential families.
//!
//! Entry points:
//!
//! * [`zoo`] constructs example structures (`sym<r>`, `lorentz<m>`, the
//!   Vinberg cone, direct sums) and [`cone::ConeStructure`] loads custom ones
//!   from JSON.
//! * [`cone`] has the ambient space `Z_V`: points, projections, the triangle
//!   product, and axiom validation.
//! * [`triangular`] has the group `H_V`, the actions `ρ` and `ρ*`, structured
//!   Cholesky, and the dual decomposition.
//! * [`power`] has characters, `Δ*_s`, the Gindikin set, Riesz Laplace
//!   transforms, and the orientation flip.
//! * [`sampler`] draws Wishart and singular Riesz batches deterministically.
//! * [`nef`] has exponential-family descriptors, cocycles, parameter
//!   recovery, and [`nef::characterization_audit`].
//!
//! The `homocone` binary exposes the same operations on the command line.

pub mod cone;
pub mod config;
pub mod error;
pub mod nef;
pub mod power;
pub mod sampler;
pub mod triangular;
pub mod zoo;

pub use cone::{
    block_inner, lower_part, AxiomKind, AxiomReport, AxiomViolation, BlockPartition, BlockSpace,
    ConeStructure, StructuredMatrix,
};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use nef::{
    characterization_audit, cocycle_from_descriptor, cocycle_laws, extract_theta0,
    invariance_check, measure_character, recover_parameter, AuditReport, AuditStep,
    CharacterProbe, Cocycle, CocycleLawReport, InvarianceReport, NEFDescriptor,
};
pub use power::{
    bridge_pairs, canonical_flip_coeffs, dual_power, flip_dual_average, flip_element,
    flip_midpoint, gindikin_stratum, in_gindikin_set, p_vector, q_vector, reverse, riesz_laplace,
    sign_matrix, support_flags, GindikinStratum, SupportFlags,
};
pub use sampler::{
    coordinate_weights, ks_statistic, ks_threshold, sample_singular, sample_wishart,
    sample_wishart_with, BartlettConvention, LaplaceEstimate, Moments, SampleBatch,
};
pub use triangular::{
    cholesky_structured, dual_decompose, dual_decompose_with, LinearMap, MapKind,
    TriangularElement,
};
