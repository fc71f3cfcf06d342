//! Generalized power functions, the Gindikin set, and Riesz transforms.
//!
//! For `ξ = ρ*(T) I_N` in the open dual cone, the dual power function is
//! `Δ*_s(ξ) = χ_{s*}(T)` where `s* = (s_r, …, s_1)` is the reversed exponent
//! vector and `χ_s(T) = Π_k t_kk^{2 s_k}`. On symmetric-matrix structures with
//! equal exponents this reduces to a power of the determinant; on genuinely
//! non-symmetric structures it does not.
//!
//! The Gindikin set `Ξ` collects the exponents `s` for which a positive Riesz
//! measure `R_s` with Laplace transform `∫ e^{⟨θ,x⟩} dR_s(x) = Δ*_{−s*}(−θ)`
//! exists. It is stratified by sign patterns `ε ∈ {0,1}^r`: coordinates with
//! `ε_k = 1` must satisfy `s_k > p_k(ε)/2` and coordinates with `ε_k = 0` must
//! equal `p_k(ε)/2`, where `p_k(ε) = Σ_{i<k} ε_i dim V_ki`. The strata are
//! mutually exclusive, and the all-ones stratum carries the absolutely
//! continuous (regular) measures.

use std::sync::Arc;

use serde::Serialize;

use crate::cone::{ConeStructure, StructuredMatrix};
use crate::config::{self, Tolerances};
use crate::error::{Error, Result};
use crate::triangular::{dual_decompose, TriangularElement};

/// Reverses an exponent vector: `s* = (s_r, …, s_1)`.
pub fn reverse(s: &[f64]) -> Vec<f64> {
    s.iter().rev().copied().collect()
}

/// The orientation matrix `E_ε = Σ_k ε_k E_k` for signs `ε ∈ {−1, +1}^r`.
pub fn sign_matrix(cone: &Arc<ConeStructure>, eps: &[i8]) -> Result<StructuredMatrix> {
    if eps.len() != cone.rank() {
        return Err(Error::DimensionMismatch { expected: cone.rank(), got: eps.len() });
    }
    if eps.iter().any(|&e| e != 1 && e != -1) {
        return Err(Error::InvalidInput("orientation signs must be ±1".into()));
    }
    let mut x = cone.zero();
    for (k, &e) in eps.iter().enumerate() {
        x.set_diag(k, e as f64);
    }
    Ok(x)
}

/// `p_k(ε) = Σ_{i<k} ε_i dim V_ki` for an indicator vector `ε ∈ {0,1}^r`.
pub fn p_vector(cone: &ConeStructure, eps: &[u8]) -> Vec<f64> {
    let r = cone.rank();
    (0..r)
        .map(|k| {
            (0..k)
                .filter(|&i| eps[i] == 1)
                .map(|i| cone.block_dim(k, i) as f64)
                .sum()
        })
        .collect()
}

/// `q_k(ε) = Σ_{l>k} ε_l dim V_lk` for an indicator vector `ε ∈ {0,1}^r`.
pub fn q_vector(cone: &ConeStructure, eps: &[u8]) -> Vec<f64> {
    let r = cone.rank();
    (0..r)
        .map(|k| {
            (k + 1..r)
                .filter(|&l| eps[l] == 1)
                .map(|l| cone.block_dim(l, k) as f64)
                .sum()
        })
        .collect()
}

/// A stratum of the Gindikin set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GindikinStratum {
    /// Indicator vector: 1 marks strict inequality, 0 marks the pinned value.
    pub eps: Vec<u8>,
    /// The threshold vector `p(ε)/1`, i.e. `p_k(ε)` per coordinate.
    pub p: Vec<f64>,
}

impl GindikinStratum {
    /// Whether this is the regular (absolutely continuous) stratum.
    pub fn regular(&self) -> bool {
        self.eps.iter().all(|&e| e == 1)
    }
}

/// Finds the stratum of the Gindikin set containing `s`, if any.
///
/// At most one stratum can match: walking the coordinates in order, the first
/// index at which two candidate indicator vectors differ pins `s_k` to the
/// same threshold on one side and strictly above it on the other.
pub fn gindikin_stratum_with(
    cone: &ConeStructure,
    s: &[f64],
    tol: &Tolerances,
) -> Option<GindikinStratum> {
    if s.len() != cone.rank() {
        return None;
    }
    let r = cone.rank();
    let mut eps = vec![0u8; r];
    // Strata can be matched greedily coordinate by coordinate: p_k depends
    // only on ε_1..ε_{k-1}, and for fixed prefix the two choices at k are
    // mutually exclusive up to the tolerance band.
    let mut p = vec![0.0; r];
    for k in 0..r {
        let pk: f64 = (0..k)
            .filter(|&i| eps[i] == 1)
            .map(|i| cone.block_dim(k, i) as f64)
            .sum();
        p[k] = pk;
        if (s[k] - pk / 2.0).abs() <= tol.gindikin_equality {
            eps[k] = 0;
        } else if s[k] > pk / 2.0 + tol.gindikin_equality {
            eps[k] = 1;
        } else {
            return None;
        }
    }
    Some(GindikinStratum { eps, p })
}

/// [`gindikin_stratum_with`] at the default tolerances.
pub fn gindikin_stratum(cone: &ConeStructure, s: &[f64]) -> Option<GindikinStratum> {
    gindikin_stratum_with(cone, s, &config::DEFAULT)
}

/// Whether `s` lies in the Gindikin set of the structure.
pub fn in_gindikin_set(cone: &ConeStructure, s: &[f64]) -> bool {
    gindikin_stratum(cone, s).is_some()
}

/// The dual power function `Δ*_s(ξ)`, defined on the open dual cone.
pub fn dual_power(s: &[f64], xi: &StructuredMatrix) -> Result<f64> {
    if s.len() != xi.cone().rank() {
        return Err(Error::DimensionMismatch { expected: xi.cone().rank(), got: s.len() });
    }
    let t = dual_decompose(xi)?;
    Ok(t.character(&reverse(s)))
}

/// The Laplace transform of the Riesz measure `R_s`, evaluated at a tilt
/// `θ ∈ −Ω*_V`: `L(θ) = Δ*_{−s*}(−θ)`.
///
/// Requires `s ∈ Ξ`; for `θ = −diag(a₁ I, …, a_r I)` the value is
/// `Π_k a_k^{−s_k}`.
pub fn riesz_laplace(s: &[f64], theta: &StructuredMatrix) -> Result<f64> {
    let cone = theta.cone();
    if s.len() != cone.rank() {
        return Err(Error::DimensionMismatch { expected: cone.rank(), got: s.len() });
    }
    if !in_gindikin_set(cone, s) {
        return Err(Error::NotInGindikinSet);
    }
    let t = dual_decompose(&theta.scale(-1.0))?;
    Ok(t.character(&s.iter().map(|v| -v).collect::<Vec<_>>()))
}

/// Exact-zero pattern of the Riesz measure's support in structured
/// coordinates, as implied by its stratum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportFlags {
    /// Stratum indicator vector.
    pub eps: Vec<u8>,
    /// Whether the measure is absolutely continuous on the open cone.
    pub regular: bool,
    /// Diagonal coordinates (0-based) that vanish identically on the support.
    pub zero_diag: Vec<usize>,
    /// Blocks `(l, k)` (0-based) whose coordinates vanish identically.
    pub zero_blocks: Vec<(usize, usize)>,
}

/// Computes the support pattern of `R_s`. A point of the support factors as
/// `(L E_ε)(L E_ε)ᵀ` with `L` triangular, so a coordinate vanishes exactly
/// when no active column can reach it.
pub fn support_flags(cone: &ConeStructure, s: &[f64]) -> Result<SupportFlags> {
    let stratum = gindikin_stratum(cone, s).ok_or(Error::NotInGindikinSet)?;
    let eps = stratum.eps.clone();
    let r = cone.rank();
    let active = |j: usize| eps[j] == 1;
    let mut zero_diag = Vec::new();
    for k in 0..r {
        if !active(k) && (0..k).all(|j| !active(j) || cone.block_dim(k, j) == 0) {
            zero_diag.push(k);
        }
    }
    let mut zero_blocks = Vec::new();
    for b in cone.blocks() {
        let (l, k) = (b.l(), b.k());
        let reachable = (active(k) && cone.block_dim(l, k) > 0)
            || (0..k).any(|j| active(j) && cone.block_dim(l, j) > 0 && cone.block_dim(k, j) > 0);
        if !reachable {
            zero_blocks.push((l, k));
        }
    }
    Ok(SupportFlags { regular: stratum.regular(), eps, zero_diag, zero_blocks })
}

/// The flip element `T(v) ∈ H_V`: identity diagonal with a single nonzero
/// block `(l, k)` holding a vector of squared norm 2. Indices are 0-based.
pub fn flip_element(
    cone: &Arc<ConeStructure>,
    l: usize,
    k: usize,
    coeffs: &[f64],
) -> Result<TriangularElement> {
    if k >= l || l >= cone.rank() {
        return Err(Error::InvalidInput(format!("flip needs 0 ≤ k < l < rank, got l={l}, k={k}")));
    }
    let dim = cone.block_dim(l, k);
    if dim == 0 {
        return Err(Error::EmptyBlock { l, k });
    }
    if coeffs.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: coeffs.len() });
    }
    let sq: f64 = coeffs.iter().map(|c| c * c).sum();
    if (sq - 2.0).abs() > 1e-9 {
        return Err(Error::PreconditionViolation(format!(
            "flip vector must have squared norm 2, got {sq}"
        )));
    }
    let tdiag = vec![1.0; cone.rank()];
    let tblocks: Vec<Vec<f64>> = cone
        .blocks()
        .iter()
        .map(|b| {
            if b.l() == l && b.k() == k {
                coeffs.to_vec()
            } else {
                vec![0.0; b.dim()]
            }
        })
        .collect();
    TriangularElement::from_parts(cone, tdiag, tblocks)
}

/// Default flip vector for block `(l, k)`: √2 times the first basis element.
pub fn canonical_flip_coeffs(cone: &ConeStructure, l: usize, k: usize) -> Result<Vec<f64>> {
    let dim = cone.block_dim(l, k);
    if dim == 0 {
        return Err(Error::EmptyBlock { l, k });
    }
    let mut c = vec![0.0; dim];
    c[0] = 2.0f64.sqrt();
    Ok(c)
}

/// Averages the action of `T(v)` and `T(−v)` on `x`: the cross terms cancel,
/// leaving `x` plus `2 x_kk` added to the `(l, l)` diagonal coordinate.
pub fn flip_midpoint(
    x: &StructuredMatrix,
    l: usize,
    k: usize,
    coeffs: &[f64],
) -> Result<StructuredMatrix> {
    let t = flip_element(x.cone(), l, k, coeffs)?;
    let plus = t.apply(x)?;
    let minus = flip_element(x.cone(), l, k, &coeffs.iter().map(|c| -c).collect::<Vec<_>>())?
        .apply(x)?;
    Ok((&plus + &minus).scale(0.5))
}

/// Averages the adjoint action of `T(±v)` on an orientation `E_ε`.
///
/// Requires `ε_k ≠ ε_l`; the average is again an orientation, with `ε_k`
/// flipped to `ε_l`. Returns the averaged matrix together with the predicted
/// sign vector.
pub fn flip_dual_average(
    cone: &Arc<ConeStructure>,
    eps: &[i8],
    l: usize,
    k: usize,
    coeffs: &[f64],
) -> Result<(StructuredMatrix, Vec<i8>)> {
    let e = sign_matrix(cone, eps)?;
    if eps[k] == eps[l] {
        return Err(Error::PreconditionViolation(format!(
            "flip requires opposite signs at k={k} and l={l}"
        )));
    }
    let t = flip_element(cone, l, k, coeffs)?;
    let plus = t.apply_adjoint(&e)?;
    let minus = flip_element(cone, l, k, &coeffs.iter().map(|c| -c).collect::<Vec<_>>())?
        .apply_adjoint(&e)?;
    let avg = (&plus + &minus).scale(0.5);
    let mut predicted = eps.to_vec();
    predicted[k] = eps[l];
    Ok((avg, predicted))
}

/// All pairs `(l, k)` with `k < l`, a nonempty block, and opposite signs in
/// `ε`: the places where a flip can act on the orientation.
pub fn bridge_pairs(cone: &ConeStructure, eps: &[i8]) -> Vec<(usize, usize)> {
    cone.blocks()
        .iter()
        .filter(|b| b.dim() > 0 && eps[b.k()] != eps[b.l()])
        .map(|b| (b.l(), b.k()))
        .collect()
}
