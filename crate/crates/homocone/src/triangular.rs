//! The triangular group `H_V` and its action on the cone.
//!
//! `H_V` consists of lower-triangular matrices whose diagonal blocks are
//! `t_kk I_{n_k}` with `t_kk > 0` and whose strictly-lower blocks lie in the
//! block spaces `V_lk`. It acts on `Z_V` by `ρ(T) x = T x Tᵀ`, simply
//! transitively on the open cone `Ω_V`: the structured Cholesky factorization
//! recovers `T` from `x = ρ(T) I_N`. The adjoint action `ρ*(T)` with respect
//! to the standard inner product acts simply transitively on the open dual
//! cone `Ω*_V`; [`dual_decompose`] inverts `T ↦ ρ*(T) I_N` by a damped Newton
//! iteration. Operator matrices are formed in the orthonormal basis of `Z_V`
//! in which block coefficients carry a factor √2, so the matrix of `ρ*(T)` is
//! exactly the transpose of the matrix of `ρ(T)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::cone::{ConeStructure, StructuredMatrix};
use crate::config::{self, Tolerances};
use crate::error::{Error, Result};

/// An element of the triangular group `H_V`.
#[derive(Debug, Clone)]
pub struct TriangularElement {
    cone: Arc<ConeStructure>,
    tdiag: Vec<f64>,
    tblocks: Vec<Vec<f64>>,
}

impl TriangularElement {
    /// The identity element.
    pub fn identity(cone: &Arc<ConeStructure>) -> Self {
        TriangularElement {
            cone: Arc::clone(cone),
            tdiag: vec![1.0; cone.rank()],
            tblocks: cone.blocks().iter().map(|b| vec![0.0; b.dim()]).collect(),
        }
    }

    /// Builds an element from diagonal entries and block coefficients (in the
    /// structure's block order). Diagonals must be strictly positive.
    pub fn from_parts(
        cone: &Arc<ConeStructure>,
        tdiag: Vec<f64>,
        tblocks: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if tdiag.len() != cone.rank() {
            return Err(Error::DimensionMismatch { expected: cone.rank(), got: tdiag.len() });
        }
        if let Some(&bad) = tdiag.iter().find(|&&t| !(t > 0.0)) {
            return Err(Error::PreconditionViolation(format!(
                "triangular diagonal must be positive, got {bad}"
            )));
        }
        if tblocks.len() != cone.blocks().len() {
            return Err(Error::DimensionMismatch {
                expected: cone.blocks().len(),
                got: tblocks.len(),
            });
        }
        for (b, coeffs) in cone.blocks().iter().zip(&tblocks) {
            if coeffs.len() != b.dim() {
                return Err(Error::DimensionMismatch { expected: b.dim(), got: coeffs.len() });
            }
        }
        Ok(TriangularElement { cone: Arc::clone(cone), tdiag, tblocks })
    }

    /// The structure this element acts on.
    pub fn cone(&self) -> &Arc<ConeStructure> {
        &self.cone
    }

    /// Diagonal entries `t_kk`.
    pub fn tdiag(&self) -> &[f64] {
        &self.tdiag
    }

    /// Block coefficient vectors in the structure's block order.
    pub fn tblocks(&self) -> &[Vec<f64>] {
        &self.tblocks
    }

    /// Dense lower-triangular realization.
    pub fn embed_lower(&self) -> DMatrix<f64> {
        let cone = &self.cone;
        let part = cone.partition();
        let n = cone.size();
        let mut m = DMatrix::zeros(n, n);
        for (k, &t) in self.tdiag.iter().enumerate() {
            let (off, nk) = (part.offset(k), part.sizes()[k]);
            for i in 0..nk {
                m[(off + i, off + i)] = t;
            }
        }
        for (i, b) in cone.blocks().iter().enumerate() {
            if self.tblocks[i].iter().all(|&c| c == 0.0) {
                continue;
            }
            let mut blk = DMatrix::zeros(part.sizes()[b.l()], part.sizes()[b.k()]);
            for (j, a) in b.basis().iter().enumerate() {
                blk += a * self.tblocks[i][j];
            }
            m.view_mut((part.offset(b.l()), part.offset(b.k())), blk.shape()).copy_from(&blk);
        }
        m
    }

    /// Scales every entry by `c > 0` (stays in the group).
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::PreconditionViolation(format!("scale must be positive, got {c}")));
        }
        let mut out = self.clone();
        out.tdiag.iter_mut().for_each(|t| *t *= c);
        out.tblocks.iter_mut().for_each(|b| b.iter_mut().for_each(|v| *v *= c));
        Ok(out)
    }

    /// Group multiplication `self · other` (matrix product of the lower
    /// realizations, read back into `H_V` coordinates).
    pub fn compose(&self, other: &TriangularElement) -> Result<TriangularElement> {
        if !Arc::ptr_eq(&self.cone, &other.cone) && *self.cone != *other.cone {
            return Err(Error::StructureMismatch);
        }
        let dense = self.embed_lower() * other.embed_lower();
        let (t, residual) = read_off_lower(&self.cone, &dense)?;
        let scale = dense.norm().max(1.0);
        if residual > config::DEFAULT.closure * scale {
            return Err(Error::ClosureViolation {
                context: "group composition".into(),
                residual: residual / scale,
            });
        }
        Ok(t)
    }

    /// Group inverse.
    pub fn inverse(&self) -> Result<TriangularElement> {
        let n = self.cone.size();
        let dense = self
            .embed_lower()
            .solve_lower_triangular(&DMatrix::identity(n, n))
            .ok_or(Error::NotInCone)?;
        let (t, residual) = read_off_lower(&self.cone, &dense)?;
        let scale = dense.norm().max(1.0);
        if residual > config::DEFAULT.closure * scale {
            return Err(Error::StructureLeak { residual: residual / scale });
        }
        Ok(t)
    }

    /// The action `ρ(T) x = T x Tᵀ`.
    pub fn apply(&self, x: &StructuredMatrix) -> Result<StructuredMatrix> {
        let lower = self.embed_lower();
        let dense = &lower * x.embed() * lower.transpose();
        let (y, residual) = self.cone.project(&dense)?;
        let scale = dense.norm().max(1.0);
        if residual > config::DEFAULT.closure * scale {
            return Err(Error::ClosureViolation {
                context: "group action".into(),
                residual: residual / scale,
            });
        }
        Ok(y)
    }

    /// The adjoint action `ρ*(T)` with respect to the standard inner product.
    pub fn apply_adjoint(&self, xi: &StructuredMatrix) -> Result<StructuredMatrix> {
        let m = self.rho_map()?;
        let coords = m.matrix().transpose() * xi.ortho_coords();
        StructuredMatrix::from_ortho_coords(&self.cone, &coords)
    }

    /// Operator matrix of `ρ(T)` in the orthonormal basis of `Z_V`.
    pub fn rho_map(&self) -> Result<LinearMap> {
        let dim = self.cone.dim();
        let lower = self.embed_lower();
        let mut matrix = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let mut e = DVector::zeros(dim);
            e[i] = 1.0;
            let u = StructuredMatrix::from_ortho_coords(&self.cone, &e)?;
            let dense = &lower * u.embed() * lower.transpose();
            let (y, residual) = self.cone.project(&dense)?;
            let scale = dense.norm().max(1.0);
            if residual > config::DEFAULT.closure * scale {
                return Err(Error::ClosureViolation {
                    context: "group action".into(),
                    residual: residual / scale,
                });
            }
            matrix.set_column(i, &y.ortho_coords());
        }
        Ok(LinearMap { cone: Arc::clone(&self.cone), matrix, kind: MapKind::Rho(self.clone()) })
    }

    /// Operator matrix of `ρ*(T)`.
    pub fn rho_star_map(&self) -> Result<LinearMap> {
        Ok(self.rho_map()?.adjoint())
    }

    /// The character `χ_s(T) = Π_k t_kk^{2 s_k}`; every one-dimensional
    /// representation of `H_V` is of this form.
    pub fn character(&self, s: &[f64]) -> f64 {
        debug_assert_eq!(s.len(), self.tdiag.len());
        self.tdiag.iter().zip(s).map(|(&t, &sk)| t.powf(2.0 * sk)).product()
    }
}

impl fmt::Display for TriangularElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.embed_lower())
    }
}

fn read_off_lower(cone: &Arc<ConeStructure>, dense: &DMatrix<f64>) -> Result<(TriangularElement, f64)> {
    let part = cone.partition();
    let mut tdiag = Vec::with_capacity(cone.rank());
    for k in 0..cone.rank() {
        let (off, nk) = (part.offset(k), part.sizes()[k]);
        let mut tr = 0.0;
        for i in 0..nk {
            tr += dense[(off + i, off + i)];
        }
        tdiag.push(tr / nk as f64);
    }
    if let Some(&bad) = tdiag.iter().find(|&&t| !(t > 0.0)) {
        return Err(Error::PreconditionViolation(format!(
            "factor has non-positive diagonal {bad}"
        )));
    }
    let mut tblocks = Vec::with_capacity(cone.blocks().len());
    for b in cone.blocks() {
        let sub = dense
            .view(
                (part.offset(b.l()), part.offset(b.k())),
                (part.sizes()[b.l()], part.sizes()[b.k()]),
            )
            .into_owned();
        let coeffs: Vec<f64> =
            b.basis().iter().map(|a| crate::cone::block_inner(&sub, a)).collect();
        tblocks.push(coeffs);
    }
    let t = TriangularElement { cone: Arc::clone(cone), tdiag, tblocks };
    let residual = (dense - t.embed_lower()).norm();
    Ok((t, residual))
}

/// Structured Cholesky factorization: the unique `T ∈ H_V` with `x = ρ(T) I_N`
/// for `x` in the open cone.
///
/// Fails with [`Error::NotInCone`] when `x` is not positive definite and with
/// [`Error::StructureLeak`] when the dense factor does not lie in `H_V`
/// (which indicates a structure violating the closure axioms).
pub fn cholesky_structured(x: &StructuredMatrix) -> Result<TriangularElement> {
    let chol = nalgebra::Cholesky::new(x.embed()).ok_or(Error::NotInCone)?;
    let l = chol.l();
    let (t, residual) = read_off_lower(x.cone(), &l)?;
    let scale = l.norm().max(1.0);
    if residual > config::DEFAULT.closure * scale {
        return Err(Error::StructureLeak { residual: residual / scale });
    }
    Ok(t)
}

/// Dual decomposition: the unique `T ∈ H_V` with `ξ = ρ*(T) I_N` for `ξ` in
/// the open dual cone, found by a damped Newton iteration started at the
/// identity. Non-convergence within the iteration budget reports
/// [`Error::NotInDualCone`]; this doubles as the membership test for `Ω*_V`.
pub fn dual_decompose(xi: &StructuredMatrix) -> Result<TriangularElement> {
    dual_decompose_with(xi, &config::DEFAULT)
}

/// [`dual_decompose`] with explicit tolerances and iteration budget.
pub fn dual_decompose_with(xi: &StructuredMatrix, tol: &Tolerances) -> Result<TriangularElement> {
    let cone = Arc::clone(xi.cone());
    let r = cone.rank();
    let norm = xi.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::NotInDualCone { iterations: 0, residual: f64::INFINITY });
    }
    // ρ*(cT) I = c² ρ*(T) I, so normalize ξ to the scale of I first and put
    // the scale back into the factor at the end.
    let prescale = (r as f64).sqrt() / norm;
    let target = xi.scale(prescale).ortho_coords();
    let accept = tol.dual_newton * (1.0 + target.norm());

    let dim = cone.dim();
    let phi = |p: &DVector<f64>| -> Result<DVector<f64>> {
        let t = element_from_params(&cone, p)?;
        Ok(t.apply_adjoint(&cone.identity())?.ortho_coords())
    };

    let mut p = DVector::zeros(dim);
    for k in 0..r {
        p[k] = 1.0;
    }
    let mut f = phi(&p)? - &target;
    let mut res = f.norm();
    for iter in 0..tol.dual_max_iter {
        if !res.is_finite() {
            return Err(Error::NotInDualCone { iterations: iter, residual: res });
        }
        if res <= accept {
            let t = element_from_params(&cone, &p)?;
            return t.scale(1.0 / prescale.sqrt());
        }
        // Central differences are exact for this quadratic map, so a generous
        // step keeps rounding noise down.
        let mut jac = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let mut h = 1e-3 * (1.0 + p[j].abs());
            if j < r {
                h = h.min(p[j] * 0.5);
            }
            let mut plus = p.clone();
            plus[j] += h;
            let mut minus = p.clone();
            minus[j] -= h;
            let col = (phi(&plus)? - phi(&minus)?) / (2.0 * h);
            jac.set_column(j, &col);
        }
        let step = match jac.lu().solve(&(-&f)) {
            Some(step) => step,
            None => return Err(Error::NotInDualCone { iterations: iter, residual: res }),
        };
        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..60 {
            let cand = &p + &step * lambda;
            if (0..r).any(|k| cand[k] <= 0.0) {
                lambda *= 0.5;
                continue;
            }
            let f_cand = phi(&cand)? - &target;
            let res_cand = f_cand.norm();
            if res_cand < res {
                p = cand;
                f = f_cand;
                res = res_cand;
                advanced = true;
                break;
            }
            lambda *= 0.5;
        }
        if !advanced {
            return Err(Error::NotInDualCone { iterations: iter, residual: res });
        }
    }
    Err(Error::NotInDualCone { iterations: tol.dual_max_iter, residual: res })
}

fn element_from_params(cone: &Arc<ConeStructure>, p: &DVector<f64>) -> Result<TriangularElement> {
    let r = cone.rank();
    let tdiag: Vec<f64> = (0..r).map(|k| p[k]).collect();
    let mut tblocks = Vec::with_capacity(cone.blocks().len());
    let mut idx = r;
    for b in cone.blocks() {
        tblocks.push((0..b.dim()).map(|j| p[idx + j]).collect());
        idx += b.dim();
    }
    TriangularElement::from_parts(cone, tdiag, tblocks)
}

/// How a [`LinearMap`] arose; composition and inversion stay typed whenever
/// they can.
#[derive(Debug, Clone)]
pub enum MapKind {
    /// `ρ(T)` for a group element.
    Rho(TriangularElement),
    /// `ρ*(T)` for a group element.
    RhoStar(TriangularElement),
    /// `c · Id` (which equals `ρ(√c I_N)` for `c > 0`).
    ScalarId(f64),
    /// Anything else.
    Generic,
}

/// A linear operator on `Z_V`, stored as its matrix in the orthonormal basis.
#[derive(Debug, Clone)]
pub struct LinearMap {
    cone: Arc<ConeStructure>,
    matrix: DMatrix<f64>,
    kind: MapKind,
}

impl LinearMap {
    /// The identity operator.
    pub fn identity(cone: &Arc<ConeStructure>) -> Self {
        LinearMap {
            cone: Arc::clone(cone),
            matrix: DMatrix::identity(cone.dim(), cone.dim()),
            kind: MapKind::ScalarId(1.0),
        }
    }

    /// The scaling `x ↦ c x`.
    pub fn scaling(cone: &Arc<ConeStructure>, c: f64) -> Self {
        LinearMap {
            cone: Arc::clone(cone),
            matrix: DMatrix::identity(cone.dim(), cone.dim()) * c,
            kind: MapKind::ScalarId(c),
        }
    }

    /// Wraps an arbitrary operator matrix (orthonormal-basis coordinates).
    pub fn from_matrix(cone: &Arc<ConeStructure>, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.shape() != (cone.dim(), cone.dim()) {
            return Err(Error::DimensionMismatch { expected: cone.dim(), got: matrix.nrows() });
        }
        Ok(LinearMap { cone: Arc::clone(cone), matrix, kind: MapKind::Generic })
    }

    /// The structure the operator acts on.
    pub fn cone(&self) -> &Arc<ConeStructure> {
        &self.cone
    }

    /// The operator matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Provenance of the operator.
    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    /// Applies the operator.
    pub fn apply(&self, x: &StructuredMatrix) -> Result<StructuredMatrix> {
        StructuredMatrix::from_ortho_coords(&self.cone, &(&self.matrix * x.ortho_coords()))
    }

    /// The adjoint with respect to the standard inner product (matrix
    /// transpose in the orthonormal basis).
    pub fn adjoint(&self) -> LinearMap {
        let kind = match &self.kind {
            MapKind::Rho(t) => MapKind::RhoStar(t.clone()),
            MapKind::RhoStar(t) => MapKind::Rho(t.clone()),
            MapKind::ScalarId(c) => MapKind::ScalarId(*c),
            MapKind::Generic => MapKind::Generic,
        };
        LinearMap { cone: Arc::clone(&self.cone), matrix: self.matrix.transpose(), kind }
    }

    /// The inverse operator.
    pub fn inverse(&self) -> Result<LinearMap> {
        let kind = match &self.kind {
            MapKind::Rho(t) => MapKind::Rho(t.inverse()?),
            MapKind::RhoStar(t) => MapKind::RhoStar(t.inverse()?),
            MapKind::ScalarId(c) if *c != 0.0 => MapKind::ScalarId(1.0 / c),
            _ => MapKind::Generic,
        };
        let matrix = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::PreconditionViolation("singular operator".into()))?;
        Ok(LinearMap { cone: Arc::clone(&self.cone), matrix, kind })
    }

    /// Operator composition `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if !Arc::ptr_eq(&self.cone, &other.cone) && *self.cone != *other.cone {
            return Err(Error::StructureMismatch);
        }
        let kind = match (&self.kind, &other.kind) {
            (MapKind::Rho(s), MapKind::Rho(t)) => MapKind::Rho(s.compose(t)?),
            (MapKind::RhoStar(s), MapKind::RhoStar(t)) => MapKind::RhoStar(t.compose(s)?),
            (MapKind::ScalarId(c), MapKind::ScalarId(d)) => MapKind::ScalarId(c * d),
            (MapKind::ScalarId(c), MapKind::Rho(t)) if *c > 0.0 => {
                MapKind::Rho(t.scale(c.sqrt())?)
            }
            (MapKind::Rho(t), MapKind::ScalarId(c)) if *c > 0.0 => {
                MapKind::Rho(t.scale(c.sqrt())?)
            }
            _ => MapKind::Generic,
        };
        Ok(LinearMap {
            cone: Arc::clone(&self.cone),
            matrix: &self.matrix * &other.matrix,
            kind,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(cone: &Arc<ConeStructure>, rng: &mut impl Rng) -> TriangularElement {
        let tdiag: Vec<f64> = (0..cone.rank()).map(|_| rng.gen_range(-0.7..0.7f64).exp()).collect();
        let tblocks: Vec<Vec<f64>> = cone
            .blocks()
            .iter()
            .map(|b| (0..b.dim()).map(|_| rng.gen_range(-0.8..0.8)).collect())
            .collect();
        TriangularElement::from_parts(cone, tdiag, tblocks).unwrap()
    }

    fn random_point(cone: &Arc<ConeStructure>, rng: &mut impl Rng) -> StructuredMatrix {
        let coords: Vec<f64> = (0..cone.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        cone.point_from_coords(&coords).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let cone = zoo::vinberg_cone();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_point(&cone, &mut rng);
        let id = TriangularElement::identity(&cone);
        assert!(id.apply(&x).unwrap().max_abs_diff(&x) < 1e-15);
        assert!(id.apply_adjoint(&x).unwrap().max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn action_on_the_identity_matches_dense_product() {
        let cone = zoo::sym_cone(2);
        let t = TriangularElement::from_parts(&cone, vec![2.0, 1.0], vec![vec![1.0]]).unwrap();
        let x = t.apply(&cone.identity()).unwrap();
        assert_eq!(
            x.embed(),
            DMatrix::from_row_slice(2, 2, &[4.0, 2.0, 2.0, 2.0])
        );
    }

    #[test]
    fn diagonal_elements_scale_blockwise() {
        let cone = zoo::vinberg_cone();
        let t = TriangularElement::from_parts(
            &cone,
            vec![2.0, 3.0, 1.0],
            vec![vec![0.0], vec![0.0]],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_point(&cone, &mut rng);
        let y = t.apply(&x).unwrap();
        assert_relative_eq!(y.diag()[0], 4.0 * x.diag()[0], max_relative = 1e-14);
        assert_relative_eq!(y.diag()[1], 9.0 * x.diag()[1], max_relative = 1e-14);
        assert_relative_eq!(
            y.block(2, 0).unwrap()[0],
            2.0 * x.block(2, 0).unwrap()[0],
            max_relative = 1e-14
        );
        let adj = t.apply_adjoint(&x).unwrap();
        assert!(adj.max_abs_diff(&y) < 1e-13);
    }

    #[test]
    fn adjoint_pairing_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for cone in [zoo::sym_cone(3), zoo::lorentz_cone(3), zoo::vinberg_cone()] {
            for _ in 0..50 {
                let t = random_element(&cone, &mut rng);
                let x = random_point(&cone, &mut rng);
                let xi = random_point(&cone, &mut rng);
                let lhs = t.apply(&x).unwrap().inner(&xi);
                let rhs = x.inner(&t.apply_adjoint(&xi).unwrap());
                assert_relative_eq!(lhs, rhs, epsilon = 1e-11, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn adjoint_matrix_is_the_transpose() {
        let cone = zoo::vinberg_cone();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = random_element(&cone, &mut rng);
        let rho = t.rho_map().unwrap();
        let star = t.rho_star_map().unwrap();
        assert_eq!(rho.matrix().transpose(), *star.matrix());
    }

    #[test]
    fn composition_matches_dense_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for cone in [zoo::sym_cone(3), zoo::vinberg_cone(), zoo::lorentz_cone(4)] {
            for _ in 0..40 {
                let s = random_element(&cone, &mut rng);
                let t = random_element(&cone, &mut rng);
                let st = s.compose(&t).unwrap();
                assert!(
                    (st.embed_lower() - s.embed_lower() * t.embed_lower()).norm() < 1e-12
                );
                let x = random_point(&cone, &mut rng);
                let via_compose = st.apply(&x).unwrap();
                let via_steps = s.apply(&t.apply(&x).unwrap()).unwrap();
                assert!(via_compose.max_abs_diff(&via_steps) < 1e-10);
            }
        }
    }

    #[test]
    fn inverse_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for cone in [zoo::sym_cone(3), zoo::vinberg_cone()] {
            for _ in 0..40 {
                let t = random_element(&cone, &mut rng);
                let inv = t.inverse().unwrap();
                let id = t.compose(&inv).unwrap();
                assert!(id.tdiag().iter().all(|&d| (d - 1.0).abs() < 1e-12));
                for b in id.tblocks() {
                    assert!(b.iter().all(|&c| c.abs() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn cholesky_recovers_known_factors() {
        let cone = zoo::sym_cone(2);
        let id = cone.identity();
        let t = cholesky_structured(&id).unwrap();
        assert_eq!(t.tdiag(), &[1.0, 1.0]);

        let x = cone.point_from_coords(&[4.0, 2.0, 2.0]).unwrap();
        let t = cholesky_structured(&x).unwrap();
        assert_relative_eq!(t.tdiag()[0], 2.0, max_relative = 1e-14);
        assert_relative_eq!(t.tdiag()[1], 1.0, max_relative = 1e-14);
        assert_relative_eq!(t.tblocks()[0][0], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn cholesky_rejects_points_outside_the_cone() {
        let cone = zoo::sym_cone(2);
        let x = cone.point_from_coords(&[1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(cholesky_structured(&x), Err(Error::NotInCone)));
        let boundary = cone.point_from_coords(&[1.0, 1.0, 1.0]).unwrap();
        assert!(cholesky_structured(&boundary).is_err());
    }

    #[test]
    fn transitivity_round_trip_on_the_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for cone in [zoo::sym_cone(4), zoo::lorentz_cone(5), zoo::vinberg_cone()] {
            for _ in 0..100 {
                let t = random_element(&cone, &mut rng);
                let x = t.apply(&cone.identity()).unwrap();
                let back = cholesky_structured(&x).unwrap();
                let diff: f64 = t
                    .tdiag()
                    .iter()
                    .zip(back.tdiag())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-9, "{}: diagonal differs by {diff}", cone.name());
                for (a, b) in t.tblocks().iter().zip(back.tblocks()) {
                    for (x1, x2) in a.iter().zip(b) {
                        assert!((x1 - x2).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn dual_decompose_identity_and_diagonal() {
        let cone = zoo::sym_cone(2);
        let t = dual_decompose(&cone.identity()).unwrap();
        assert!(t.tdiag().iter().all(|&d| (d - 1.0).abs() < 1e-10));

        let xi = cone.point_from_coords(&[4.0, 9.0, 0.0]).unwrap();
        let t = dual_decompose(&xi).unwrap();
        assert_relative_eq!(t.tdiag()[0], 2.0, epsilon = 1e-9);
        assert_relative_eq!(t.tdiag()[1], 3.0, epsilon = 1e-9);
        assert!(t.tblocks()[0][0].abs() < 1e-9);
    }

    #[test]
    fn dual_decompose_round_trips_from_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for cone in [zoo::sym_cone(3), zoo::lorentz_cone(3), zoo::vinberg_cone()] {
            for _ in 0..100 {
                let t = random_element(&cone, &mut rng);
                let xi = t.apply_adjoint(&cone.identity()).unwrap();
                let back = dual_decompose(&xi).unwrap();
                let again = back.apply_adjoint(&cone.identity()).unwrap();
                assert!(
                    again.max_abs_diff(&xi) <= 1e-8 * xi.norm().max(1.0),
                    "{}: residual {}",
                    cone.name(),
                    again.max_abs_diff(&xi)
                );
                let diff: f64 = t
                    .tdiag()
                    .iter()
                    .zip(back.tdiag())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-7, "{}: factor differs by {diff}", cone.name());
            }
        }
    }

    #[test]
    fn dual_decompose_scales_as_a_square_root() {
        let cone = zoo::vinberg_cone();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = random_element(&cone, &mut rng);
        let xi = t.apply_adjoint(&cone.identity()).unwrap();
        let a = dual_decompose(&xi).unwrap();
        let b = dual_decompose(&xi.scale(4.0)).unwrap();
        for (x, y) in a.tdiag().iter().zip(b.tdiag()) {
            assert_relative_eq!(2.0 * x, *y, epsilon = 1e-8);
        }
    }

    #[test]
    fn dual_decompose_rejects_points_outside_the_dual_cone() {
        let cone = zoo::sym_cone(2);
        let mixed = cone.point_from_coords(&[1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(dual_decompose(&mixed), Err(Error::NotInDualCone { .. })));
        let neg = (&cone.identity()).scale(-1.0);
        assert!(matches!(dual_decompose(&neg), Err(Error::NotInDualCone { .. })));
    }

    #[test]
    fn action_preserves_the_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for cone in [zoo::sym_cone(3), zoo::vinberg_cone()] {
            for _ in 0..50 {
                let t = random_element(&cone, &mut rng);
                let s = random_element(&cone, &mut rng);
                let x = s.apply(&cone.identity()).unwrap();
                assert!(t.apply(&x).unwrap().is_positive_definite());
            }
        }
    }

    #[test]
    fn character_examples_and_multiplicativity() {
        let cone = zoo::sym_cone(2);
        let t = TriangularElement::from_parts(&cone, vec![2.0, 3.0], vec![vec![0.0]]).unwrap();
        assert_relative_eq!(t.character(&[1.0, 2.0]), 324.0);
        assert_relative_eq!(t.character(&[0.0, 0.0]), 1.0);
        assert_relative_eq!(t.character(&[-1.0, 0.5]), 2.0f64.powi(-2) * 3.0);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cone = zoo::vinberg_cone();
        for _ in 0..100 {
            let s: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let a = random_element(&cone, &mut rng);
            let b = random_element(&cone, &mut rng);
            let ab = a.compose(&b).unwrap();
            assert_relative_eq!(
                ab.character(&s),
                a.character(&s) * b.character(&s),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn linear_map_algebra() {
        let cone = zoo::sym_cone(2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let t = random_element(&cone, &mut rng);
        let rho = t.rho_map().unwrap();
        let inv = rho.inverse().unwrap();
        let prod = rho.compose(&inv).unwrap();
        assert!((prod.matrix() - DMatrix::<f64>::identity(3, 3)).norm() < 1e-12);
        assert!(matches!(prod.kind(), MapKind::Rho(_)));

        let half = LinearMap::scaling(&cone, 0.5);
        let x = random_point(&cone, &mut rng);
        assert!(half.apply(&x).unwrap().max_abs_diff(&x.scale(0.5)) < 1e-15);

        let sc = half.compose(&rho).unwrap();
        match sc.kind() {
            MapKind::Rho(u) => {
                for (a, b) in u.tdiag().iter().zip(t.tdiag()) {
                    assert_relative_eq!(*a, b * 0.5f64.sqrt(), max_relative = 1e-12);
                }
            }
            other => panic!("expected a typed composition, got {other:?}"),
        }
    }

    #[test]
    fn functoriality_of_the_operator_matrices() {
        let cone = zoo::vinberg_cone();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let s = random_element(&cone, &mut rng);
            let t = random_element(&cone, &mut rng);
            let st = s.compose(&t).unwrap();
            let lhs = st.rho_map().unwrap();
            let rhs = s.rho_map().unwrap().compose(&t.rho_map().unwrap()).unwrap();
            assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-10);
        }
    }
}
