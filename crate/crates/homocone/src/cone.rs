//! Structured symmetric-matrix spaces.
//!
//! A block partition `N = n_1 + ... + n_r` together with a family of
//! off-diagonal block spaces `V_lk ⊂ Mat(n_l, n_k)` (for `l > k`) carves out a
//! subspace `Z_V ⊂ Sym(N)`: matrices whose diagonal blocks are scalar
//! multiples of the identity and whose lower off-diagonal blocks lie in the
//! prescribed `V_lk`. When the spaces satisfy the closure axioms
//!
//! * (V1) `A ∈ V_lk, B ∈ V_ki ⇒ A·B ∈ V_li`,
//! * (V2) `A ∈ V_li, B ∈ V_ki ⇒ A·Bᵀ ∈ V_lk`,
//! * (V3) `A ∈ V_lk ⇒ A·Aᵀ ∈ ℝ·I_{n_l}`,
//!
//! the positive-definite elements of `Z_V` form a homogeneous cone `Ω_V`, and
//! every homogeneous cone arises this way. This module owns the space itself:
//! partitions, orthonormalized block bases, embedding and projection, the
//! non-associative triangle product, the standard inner product, axiom
//! validation with witnesses, irreducibility, and the JSON interchange format.
//!
//! Block indices are zero-based throughout the API; the JSON format and CLI
//! surfaces are one-based.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Sizes `n_1, ..., n_r` of the diagonal blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
}

impl BlockPartition {
    /// Builds a partition from block sizes; every size must be positive.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        if let Some(bad) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::InvalidPartition(format!("block {bad} has size 0")));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0;
        for &n in &sizes {
            offsets.push(total);
            total += n;
        }
        Ok(BlockPartition { sizes, offsets, total })
    }

    /// Number of blocks `r`.
    pub fn rank(&self) -> usize {
        self.sizes.len()
    }

    /// Total matrix size `N`.
    pub fn size(&self) -> usize {
        self.total
    }

    /// Block sizes `n_k`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Row/column offset of block `k`.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }
}

/// Inner product `(A|B) = trace(A·Bᵀ) / n_l` on `Mat(n_l, n_k)`.
///
/// This is the polarization of (V3): for elements of a valid block space,
/// `A·Bᵀ + B·Aᵀ = 2 (A|B) I_{n_l}`.
pub fn block_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "block inner product needs equal shapes");
    a.dot(b) / a.nrows() as f64
}

/// One off-diagonal block space `V_lk` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpace {
    l: usize,
    k: usize,
    basis: Vec<DMatrix<f64>>,
}

impl BlockSpace {
    /// Row block index `l` (zero-based).
    pub fn l(&self) -> usize {
        self.l
    }

    /// Column block index `k` (zero-based).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Orthonormal basis matrices, each of shape `n_l × n_k`.
    pub fn basis(&self) -> &[DMatrix<f64>] {
        &self.basis
    }

    /// Dimension of the space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// A realized structured symmetric-matrix space.
///
/// Construction orthonormalizes every block basis with respect to
/// [`block_inner`] (bases that are already orthonormal are kept bit-exact) and
/// rejects rank-deficient bases. Construction does **not** check the closure
/// axioms: invalid systems are representable so that [`ConeStructure::validate_axioms`]
/// can report witnesses against them.
#[derive(Debug)]
pub struct ConeStructure {
    name: String,
    partition: BlockPartition,
    blocks: Vec<BlockSpace>,
    block_index: Vec<Option<usize>>,
    coord_offsets: Vec<usize>,
    dim: usize,
}

impl PartialEq for ConeStructure {
    fn eq(&self, other: &Self) -> bool {
        self.partition == other.partition && self.blocks == other.blocks
    }
}

impl ConeStructure {
    /// Builds a structure from raw block bases (`l`, `k` zero-based, `l > k`).
    ///
    /// Pairs not listed get the zero space. Basis matrices must have shape
    /// `n_l × n_k`; each basis is orthonormalized and must be linearly
    /// independent.
    pub fn new(
        name: impl Into<String>,
        partition: BlockPartition,
        raw_blocks: Vec<(usize, usize, Vec<DMatrix<f64>>)>,
    ) -> Result<Arc<Self>> {
        let r = partition.rank();
        let mut seen = vec![false; r * r];
        let mut blocks = Vec::new();
        for (l, k, raw) in raw_blocks {
            if k >= l || l >= r {
                return Err(Error::InvalidBasis {
                    l,
                    k,
                    reason: format!("block indices must satisfy k < l < {r}"),
                });
            }
            if seen[l * r + k] {
                return Err(Error::InvalidBasis { l, k, reason: "duplicate block".into() });
            }
            seen[l * r + k] = true;
            let (nl, nk) = (partition.sizes[l], partition.sizes[k]);
            for m in &raw {
                if m.shape() != (nl, nk) {
                    return Err(Error::InvalidBasis {
                        l,
                        k,
                        reason: format!(
                            "basis matrix has shape {:?}, expected ({nl}, {nk})",
                            m.shape()
                        ),
                    });
                }
            }
            let basis = orthonormalize(raw, l, k)?;
            if !basis.is_empty() {
                blocks.push(BlockSpace { l, k, basis });
            }
        }
        blocks.sort_by_key(|b| (b.l, b.k));

        let mut block_index = vec![None; r * r];
        let mut coord_offsets = Vec::with_capacity(blocks.len());
        let mut dim = r;
        for (i, b) in blocks.iter().enumerate() {
            block_index[b.l * r + b.k] = Some(i);
            coord_offsets.push(dim);
            dim += b.basis.len();
        }
        Ok(Arc::new(ConeStructure { name: name.into(), partition, blocks, block_index, coord_offsets, dim }))
    }

    /// Human-readable name (used by the CLI and file formats).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The diagonal block partition.
    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    /// Number of diagonal blocks `r`.
    pub fn rank(&self) -> usize {
        self.partition.rank()
    }

    /// Ambient matrix size `N`.
    pub fn size(&self) -> usize {
        self.partition.size()
    }

    /// Dimension of `Z_V` = `r` + sum of block dimensions.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The nonzero block spaces, sorted by `(l, k)`.
    pub fn blocks(&self) -> &[BlockSpace] {
        &self.blocks
    }

    /// Dimension of `V_lk` (zero when the pair carries no space).
    pub fn block_dim(&self, l: usize, k: usize) -> usize {
        self.block_space(l, k).map_or(0, |b| b.basis.len())
    }

    /// The block space at `(l, k)` if it is nonzero.
    pub fn block_space(&self, l: usize, k: usize) -> Option<&BlockSpace> {
        let r = self.rank();
        if l >= r || k >= l {
            return None;
        }
        self.block_index[l * r + k].map(|i| &self.blocks[i])
    }

    fn block_position(&self, l: usize, k: usize) -> Option<usize> {
        let r = self.rank();
        self.block_index[l * r + k]
    }

    /// Coordinate labels in serialization order: `d1..dr`, then `b_l_k_j`
    /// (one-based) for each block basis direction sorted by `(l, k, j)`.
    pub fn coordinate_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.rank()).map(|k| format!("d{k}")).collect();
        for b in &self.blocks {
            for j in 1..=b.basis.len() {
                names.push(format!("b_{}_{}_{}", b.l + 1, b.k + 1, j));
            }
        }
        names
    }

    /// The zero element of `Z_V`.
    pub fn zero(self: &Arc<Self>) -> StructuredMatrix {
        StructuredMatrix {
            cone: Arc::clone(self),
            diag: vec![0.0; self.rank()],
            blocks: self.blocks.iter().map(|b| vec![0.0; b.basis.len()]).collect(),
        }
    }

    /// The identity matrix `I_N` as an element of `Z_V`.
    pub fn identity(self: &Arc<Self>) -> StructuredMatrix {
        let mut x = self.zero();
        x.diag.iter_mut().for_each(|d| *d = 1.0);
        x
    }

    /// Builds an element from coordinates in serialization order.
    pub fn point_from_coords(self: &Arc<Self>, coords: &[f64]) -> Result<StructuredMatrix> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: coords.len() });
        }
        let r = self.rank();
        let mut x = self.zero();
        x.diag.copy_from_slice(&coords[..r]);
        for (i, b) in self.blocks.iter().enumerate() {
            let off = self.coord_offsets[i];
            x.blocks[i].copy_from_slice(&coords[off..off + b.basis.len()]);
        }
        Ok(x)
    }

    /// Orthogonal projection of a dense symmetric matrix onto `Z_V`, together
    /// with the Frobenius norm of what was cut away.
    pub fn project(self: &Arc<Self>, m: &DMatrix<f64>) -> Result<(StructuredMatrix, f64)> {
        let n = self.size();
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, got: m.nrows() });
        }
        let mut x = self.zero();
        for k in 0..self.rank() {
            let (off, nk) = (self.partition.offset(k), self.partition.sizes[k]);
            let mut tr = 0.0;
            for i in 0..nk {
                tr += m[(off + i, off + i)];
            }
            x.diag[k] = tr / nk as f64;
        }
        for (i, b) in self.blocks.iter().enumerate() {
            let sub = m.view(
                (self.partition.offset(b.l), self.partition.offset(b.k)),
                (self.partition.sizes[b.l], self.partition.sizes[b.k]),
            );
            let upper = m.view(
                (self.partition.offset(b.k), self.partition.offset(b.l)),
                (self.partition.sizes[b.k], self.partition.sizes[b.l]),
            );
            let sym = (sub.into_owned() + upper.transpose()) * 0.5;
            for (j, a) in b.basis.iter().enumerate() {
                x.blocks[i][j] = block_inner(&sym, a);
            }
        }
        let residual = (m - x.embed()).norm();
        Ok((x, residual))
    }

    /// Checks the closure axioms (V1)-(V3) on all basis elements and returns a
    /// witness report; never fails.
    pub fn validate_axioms(&self) -> AxiomReport {
        let tol = config::DEFAULT.membership;
        let mut report = AxiomReport { pass: true, checked: 0, violations: Vec::new() };
        let r = self.rank();

        for l in 2..r {
            for k in 1..l {
                for i in 0..k {
                    let (vlk, vki) = (self.block_space(l, k), self.block_space(k, i));
                    if let (Some(vlk), Some(vki)) = (vlk, vki) {
                        for (ai, a) in vlk.basis.iter().enumerate() {
                            for (bi, b) in vki.basis.iter().enumerate() {
                                report.checked += 1;
                                let prod = a * b;
                                let res = self.span_residual(l, i, &prod);
                                if res > tol * prod.norm().max(1.0) {
                                    report.push(AxiomViolation::new(
                                        AxiomKind::V1,
                                        vec![l + 1, k + 1, i + 1],
                                        vec![ai + 1, bi + 1],
                                        res,
                                        &prod,
                                        format!(
                                            "V_{}{} · V_{}{} escapes V_{}{}",
                                            l + 1, k + 1, k + 1, i + 1, l + 1, i + 1
                                        ),
                                    ));
                                }
                            }
                        }
                    }
                    let (vli, vki) = (self.block_space(l, i), self.block_space(k, i));
                    if let (Some(vli), Some(vki)) = (vli, vki) {
                        for (ai, a) in vli.basis.iter().enumerate() {
                            for (bi, b) in vki.basis.iter().enumerate() {
                                report.checked += 1;
                                let prod = a * b.transpose();
                                let res = self.span_residual(l, k, &prod);
                                if res > tol * prod.norm().max(1.0) {
                                    report.push(AxiomViolation::new(
                                        AxiomKind::V2,
                                        vec![l + 1, k + 1, i + 1],
                                        vec![ai + 1, bi + 1],
                                        res,
                                        &prod,
                                        format!(
                                            "V_{}{} · V_{}{}ᵀ escapes V_{}{}",
                                            l + 1, i + 1, k + 1, i + 1, l + 1, k + 1
                                        ),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }

        for b in &self.blocks {
            let nl = self.partition.sizes[b.l];
            let id = DMatrix::<f64>::identity(nl, nl);
            for i in 0..b.basis.len() {
                for j in i..b.basis.len() {
                    report.checked += 1;
                    let sym = &b.basis[i] * b.basis[j].transpose()
                        + &b.basis[j] * b.basis[i].transpose();
                    let scalar = 2.0 * block_inner(&b.basis[i], &b.basis[j]);
                    let dev = &sym - &id * scalar;
                    let res = dev.norm();
                    if res > tol * sym.norm().max(1.0) {
                        report.push(AxiomViolation::new(
                            AxiomKind::V3,
                            vec![b.l + 1, b.k + 1],
                            vec![i + 1, j + 1],
                            res,
                            &sym,
                            format!("A·Aᵀ not scalar on V_{}{}", b.l + 1, b.k + 1),
                        ));
                    }
                }
            }
        }
        report
    }

    fn span_residual(&self, l: usize, k: usize, m: &DMatrix<f64>) -> f64 {
        let mut rem = m.clone();
        if let Some(space) = self.block_space(l, k) {
            for a in &space.basis {
                let c = block_inner(m, a);
                rem -= a * c;
            }
        }
        rem.norm()
    }

    /// Whether the associated cone is irreducible: the graph on blocks with an
    /// edge wherever `dim V_lk > 0` is connected.
    pub fn is_irreducible(&self) -> bool {
        let r = self.rank();
        if r <= 1 {
            return true;
        }
        let mut reached = vec![false; r];
        let mut stack = vec![0usize];
        reached[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..r {
                if !reached[w] {
                    let (l, k) = if v > w { (v, w) } else { (w, v) };
                    if self.block_dim(l, k) > 0 {
                        reached[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        reached.into_iter().all(|b| b)
    }

    /// Serializable description (one-based indices, row-major bases).
    pub fn to_spec(&self) -> ConeSpec {
        ConeSpec {
            name: self.name.clone(),
            partition: self.partition.sizes.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockSpec {
                    l: b.l + 1,
                    k: b.k + 1,
                    basis: b.basis.iter().map(|m| m.transpose().as_slice().to_vec()).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a structure from its serializable description.
    pub fn from_spec(spec: &ConeSpec) -> Result<Arc<Self>> {
        let partition = BlockPartition::new(spec.partition.clone())?;
        let mut raw = Vec::with_capacity(spec.blocks.len());
        for b in &spec.blocks {
            if b.l == 0 || b.k == 0 {
                return Err(Error::InvalidInput(format!(
                    "block ({}, {}): file indices are one-based",
                    b.l, b.k
                )));
            }
            let (l, k) = (b.l - 1, b.k - 1);
            if l >= partition.rank() || k >= l {
                return Err(Error::InvalidInput(format!(
                    "block ({}, {}) out of range for rank {}",
                    b.l,
                    b.k,
                    partition.rank()
                )));
            }
            let (nl, nk) = (partition.sizes[l], partition.sizes[k]);
            let mut mats = Vec::with_capacity(b.basis.len());
            for flat in &b.basis {
                if flat.len() != nl * nk {
                    return Err(Error::InvalidInput(format!(
                        "block ({}, {}): basis entry has {} values, expected {}",
                        b.l,
                        b.k,
                        flat.len(),
                        nl * nk
                    )));
                }
                mats.push(DMatrix::from_row_slice(nl, nk, flat));
            }
            raw.push((l, k, mats));
        }
        Self::new(spec.name.clone(), partition, raw)
    }

    /// Loads a structure from a JSON cone-spec file.
    pub fn load_json(path: impl AsRef<Path>) -> Result<Arc<Self>> {
        let text = std::fs::read_to_string(path)?;
        let spec: ConeSpec = serde_json::from_str(&text)?;
        Self::from_spec(&spec)
    }

    /// Writes the structure to a JSON cone-spec file.
    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_spec())?;
        Ok(std::fs::write(path, text)?)
    }
}

fn orthonormalize(raw: Vec<DMatrix<f64>>, l: usize, k: usize) -> Result<Vec<DMatrix<f64>>> {
    if raw.is_empty() {
        return Ok(raw);
    }
    let mut gram_ok = true;
    'outer: for i in 0..raw.len() {
        for j in 0..raw.len() {
            let g = block_inner(&raw[i], &raw[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - target).abs() > 1e-12 {
                gram_ok = false;
                break 'outer;
            }
        }
    }
    if gram_ok {
        return Ok(raw);
    }
    let mut out: Vec<DMatrix<f64>> = Vec::with_capacity(raw.len());
    for mut v in raw {
        for u in &out {
            let c = block_inner(&v, u);
            v -= u * c;
        }
        let nrm = block_inner(&v, &v).sqrt();
        if nrm < 1e-10 {
            return Err(Error::InvalidBasis { l, k, reason: "rank-deficient basis".into() });
        }
        out.push(v / nrm);
    }
    Ok(out)
}

/// Which closure axiom a violation concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxiomKind {
    V1,
    V2,
    V3,
}

/// One concrete counterexample to a closure axiom.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomViolation {
    pub axiom: AxiomKind,
    /// Participating block indices, one-based: `(l, k, i)` for V1/V2, `(l, k)` for V3.
    pub blocks: Vec<usize>,
    /// Basis element indices within those blocks, one-based.
    pub basis: Vec<usize>,
    /// Distance of the offending product from the target space.
    pub residual: f64,
    /// The offending product, row-major.
    pub product: Vec<f64>,
    pub message: String,
}

impl AxiomViolation {
    fn new(
        axiom: AxiomKind,
        blocks: Vec<usize>,
        basis: Vec<usize>,
        residual: f64,
        product: &DMatrix<f64>,
        message: String,
    ) -> Self {
        AxiomViolation {
            axiom,
            blocks,
            basis,
            residual,
            product: product.transpose().as_slice().to_vec(),
            message,
        }
    }
}

/// Outcome of [`ConeStructure::validate_axioms`].
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    /// Number of basis products examined.
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    fn push(&mut self, v: AxiomViolation) {
        self.pass = false;
        self.violations.push(v);
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            let noun = if self.checked == 1 { "product" } else { "products" };
            write!(f, "axioms (V1)-(V3) hold ({} {noun} checked)", self.checked)
        } else {
            writeln!(f, "{} axiom violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(
                    f,
                    "  {:?} blocks {:?} basis {:?}: {} (residual {:.3e})",
                    v.axiom, v.blocks, v.basis, v.message, v.residual
                )?;
            }
            Ok(())
        }
    }
}

/// JSON-serializable cone description. Indices are one-based and bases are
/// row-major, matching the on-disk cone-spec format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeSpec {
    pub name: String,
    pub partition: Vec<usize>,
    pub blocks: Vec<BlockSpec>,
}

/// One block entry of a [`ConeSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockSpec {
    pub l: usize,
    pub k: usize,
    pub basis: Vec<Vec<f64>>,
}

/// An element of `Z_V`: diagonal coefficients `x_kk` plus coefficient vectors
/// of each off-diagonal block in the orthonormal block bases.
#[derive(Debug, Clone)]
pub struct StructuredMatrix {
    cone: Arc<ConeStructure>,
    diag: Vec<f64>,
    blocks: Vec<Vec<f64>>,
}

impl StructuredMatrix {
    /// The structure this element belongs to.
    pub fn cone(&self) -> &Arc<ConeStructure> {
        &self.cone
    }

    /// Diagonal coefficients `x_kk`.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Sets `x_kk`.
    pub fn set_diag(&mut self, k: usize, value: f64) {
        self.diag[k] = value;
    }

    /// Coefficients of block `(l, k)` in its orthonormal basis, if nonzero.
    pub fn block(&self, l: usize, k: usize) -> Option<&[f64]> {
        self.cone.block_position(l, k).map(|i| self.blocks[i].as_slice())
    }

    /// Sets the coefficients of block `(l, k)`.
    pub fn set_block(&mut self, l: usize, k: usize, coeffs: &[f64]) -> Result<()> {
        let i = self
            .cone
            .block_position(l, k)
            .ok_or(Error::EmptyBlock { l, k })?;
        if coeffs.len() != self.blocks[i].len() {
            return Err(Error::DimensionMismatch {
                expected: self.blocks[i].len(),
                got: coeffs.len(),
            });
        }
        self.blocks[i].copy_from_slice(coeffs);
        Ok(())
    }

    /// Flat coordinates in serialization order (diagonals, then blocks).
    pub fn coords(&self) -> Vec<f64> {
        let mut out = self.diag.clone();
        for b in &self.blocks {
            out.extend_from_slice(b);
        }
        out
    }

    /// Coordinates in the orthonormal basis of `Z_V` for the standard inner
    /// product: diagonals unchanged, block coefficients scaled by √2.
    pub fn ortho_coords(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.cone.dim());
        for (k, &d) in self.diag.iter().enumerate() {
            v[k] = d;
        }
        let mut idx = self.cone.rank();
        for b in &self.blocks {
            for &c in b {
                v[idx] = SQRT_2 * c;
                idx += 1;
            }
        }
        v
    }

    /// Inverse of [`StructuredMatrix::ortho_coords`].
    pub fn from_ortho_coords(cone: &Arc<ConeStructure>, v: &DVector<f64>) -> Result<Self> {
        if v.len() != cone.dim() {
            return Err(Error::DimensionMismatch { expected: cone.dim(), got: v.len() });
        }
        let mut x = cone.zero();
        for k in 0..cone.rank() {
            x.diag[k] = v[k];
        }
        let mut idx = cone.rank();
        for b in x.blocks.iter_mut() {
            for c in b.iter_mut() {
                *c = v[idx] / SQRT_2;
                idx += 1;
            }
        }
        Ok(x)
    }

    /// Dense symmetric `N × N` realization.
    pub fn embed(&self) -> DMatrix<f64> {
        let cone = &self.cone;
        let n = cone.size();
        let mut m = DMatrix::zeros(n, n);
        for (k, &d) in self.diag.iter().enumerate() {
            let (off, nk) = (cone.partition.offset(k), cone.partition.sizes[k]);
            for i in 0..nk {
                m[(off + i, off + i)] = d;
            }
        }
        for (i, b) in cone.blocks.iter().enumerate() {
            if self.blocks[i].iter().all(|&c| c == 0.0) {
                continue;
            }
            let mut blk = DMatrix::zeros(cone.partition.sizes[b.l], cone.partition.sizes[b.k]);
            for (j, a) in b.basis.iter().enumerate() {
                blk += a * self.blocks[i][j];
            }
            let (ro, co) = (cone.partition.offset(b.l), cone.partition.offset(b.k));
            m.view_mut((ro, co), blk.shape()).copy_from(&blk);
            m.view_mut((co, ro), (blk.ncols(), blk.nrows())).copy_from(&blk.transpose());
        }
        m
    }

    /// The lower part `x̌`: strictly lower triangle unchanged, diagonal
    /// halved, upper triangle zero, so that `x = x̌ + x̌ᵀ`.
    pub fn lower_part(&self) -> DMatrix<f64> {
        lower_part(&self.embed())
    }

    /// Triangle product `x△y = x̌·y + y·x̂` with `x̂ = x̌ᵀ`.
    ///
    /// The result is symmetric for all symmetric inputs and stays in `Z_V`
    /// when the closure axioms hold; a structure that leaks reports
    /// [`Error::ClosureViolation`].
    pub fn triangle_product(&self, other: &StructuredMatrix) -> Result<StructuredMatrix> {
        self.check_same_structure(other)?;
        let lower = self.lower_part();
        let y = other.embed();
        let dense = &lower * &y + &y * lower.transpose();
        let (prod, residual) = self.cone.project(&dense)?;
        let scale = dense.norm().max(1.0);
        if residual > config::DEFAULT.closure * scale {
            return Err(Error::ClosureViolation {
                context: "triangle product".into(),
                residual: residual / scale,
            });
        }
        Ok(prod)
    }

    /// Standard inner product `⟨x, y⟩ = Σ_k x_kk y_kk + 2 Σ_{l>k} (X_lk|Y_lk)`.
    pub fn inner(&self, other: &StructuredMatrix) -> f64 {
        debug_assert!(self.compatible(other));
        let mut s = 0.0;
        for (a, b) in self.diag.iter().zip(&other.diag) {
            s += a * b;
        }
        for (ba, bb) in self.blocks.iter().zip(&other.blocks) {
            for (a, b) in ba.iter().zip(bb) {
                s += 2.0 * a * b;
            }
        }
        s
    }

    /// Norm induced by the standard inner product.
    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Largest absolute coordinate difference; handy for comparisons.
    pub fn max_abs_diff(&self, other: &StructuredMatrix) -> f64 {
        let (a, b) = (self.coords(), other.coords());
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Whether the embedded matrix is positive definite (Cholesky succeeds).
    pub fn is_positive_definite(&self) -> bool {
        nalgebra::Cholesky::new(self.embed()).is_some()
    }

    /// Whether both operands live on the same structure.
    pub fn compatible(&self, other: &StructuredMatrix) -> bool {
        Arc::ptr_eq(&self.cone, &other.cone) || *self.cone == *other.cone
    }

    fn check_same_structure(&self, other: &StructuredMatrix) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::StructureMismatch)
        }
    }

    /// Componentwise linear combination `self + t * other`.
    pub fn axpy(&self, t: f64, other: &StructuredMatrix) -> StructuredMatrix {
        debug_assert!(self.compatible(other));
        let mut out = self.clone();
        for (a, b) in out.diag.iter_mut().zip(&other.diag) {
            *a += t * b;
        }
        for (ba, bb) in out.blocks.iter_mut().zip(&other.blocks) {
            for (a, b) in ba.iter_mut().zip(bb) {
                *a += t * b;
            }
        }
        out
    }

    /// Scales every coordinate.
    pub fn scale(&self, t: f64) -> StructuredMatrix {
        let mut out = self.clone();
        out.diag.iter_mut().for_each(|a| *a *= t);
        out.blocks.iter_mut().for_each(|b| b.iter_mut().for_each(|a| *a *= t));
        out
    }
}

/// Lower part of a dense symmetric matrix: `m̌_ij = m_ij` below the diagonal,
/// `m_ii / 2` on it, `0` above, so that `m = m̌ + m̌ᵀ`.
pub fn lower_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut low = m.lower_triangle();
    for i in 0..m.nrows().min(m.ncols()) {
        low[(i, i)] *= 0.5;
    }
    low
}

impl fmt::Display for StructuredMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.embed())
    }
}

impl std::ops::Add for &StructuredMatrix {
    type Output = StructuredMatrix;
    fn add(self, rhs: &StructuredMatrix) -> StructuredMatrix {
        self.axpy(1.0, rhs)
    }
}

impl std::ops::Sub for &StructuredMatrix {
    type Output = StructuredMatrix;
    fn sub(self, rhs: &StructuredMatrix) -> StructuredMatrix {
        self.axpy(-1.0, rhs)
    }
}

impl std::ops::Mul<f64> for &StructuredMatrix {
    type Output = StructuredMatrix;
    fn mul(self, t: f64) -> StructuredMatrix {
        self.scale(t)
    }
}

impl std::ops::Neg for &StructuredMatrix {
    type Output = StructuredMatrix;
    fn neg(self) -> StructuredMatrix {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(cone: &Arc<ConeStructure>, rng: &mut impl Rng) -> StructuredMatrix {
        let coords: Vec<f64> = (0..cone.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        cone.point_from_coords(&coords).unwrap()
    }

    #[test]
    fn partition_rejects_zero_blocks() {
        assert!(BlockPartition::new(vec![]).is_err());
        assert!(BlockPartition::new(vec![1, 0, 2]).is_err());
        let p = BlockPartition::new(vec![3, 1]).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.size(), 4);
        assert_eq!(p.offset(1), 3);
    }

    #[test]
    fn lower_part_halves_the_diagonal() {
        let id = DMatrix::<f64>::identity(2, 2);
        let low = lower_part(&id);
        assert_eq!(low, DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]));

        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let low = lower_part(&m);
        assert_eq!(low, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]));
        assert_eq!(&low + low.transpose(), m);
    }

    #[test]
    fn triangle_product_unit_and_example() {
        let cone = zoo::sym_cone(2);
        let id = cone.identity();
        let x = cone.point_from_coords(&[2.0, 2.0, 1.0]).unwrap();

        let unit = id.triangle_product(&x).unwrap();
        assert!(unit.max_abs_diff(&x) < 1e-15);

        let sq = x.triangle_product(&x).unwrap();
        assert_eq!(
            sq.embed(),
            DMatrix::from_row_slice(2, 2, &[4.0, 4.0, 4.0, 6.0])
        );
    }

    #[test]
    fn triangle_product_on_diagonals_multiplies_pairwise() {
        let cone = zoo::sym_cone(3);
        let x = cone.point_from_coords(&[1.0, 2.0, 3.0, 0.0, 0.0, 0.0]).unwrap();
        let y = cone.point_from_coords(&[4.0, 5.0, 6.0, 0.0, 0.0, 0.0]).unwrap();
        let p = x.triangle_product(&y).unwrap();
        assert_eq!(p.diag(), &[4.0, 10.0, 18.0]);
    }

    #[test]
    fn triangle_product_symmetry_defect_is_structural() {
        let cone = zoo::vinberg_cone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = random_point(&cone, &mut rng);
            let y = random_point(&cone, &mut rng);
            let p = x.triangle_product(&y).unwrap();
            let dense = p.embed();
            assert!((dense.clone() - dense.transpose()).norm() < 1e-12);
        }
    }

    #[test]
    fn block_inner_examples() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        assert_relative_eq!(block_inner(&a, &a), 2.0);
        let id3 = DMatrix::<f64>::identity(3, 3);
        assert_relative_eq!(block_inner(&id3, &id3), 1.0);
        let b = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        assert_relative_eq!(block_inner(&a, &b), 0.0);
    }

    #[test]
    fn inner_product_examples() {
        let cone = zoo::sym_cone(2);
        let x = cone.point_from_coords(&[1.0, 3.0, 2.0]).unwrap();
        assert_relative_eq!(x.inner(&x), 18.0);
        let id = cone.identity();
        assert_relative_eq!(id.inner(&id), 2.0);

        let lorentz = zoo::lorentz_cone(5);
        let id = lorentz.identity();
        assert_relative_eq!(id.inner(&id), 2.0);
    }

    #[test]
    fn inner_product_matches_trace_form_when_all_blocks_are_scalar() {
        let cone = zoo::sym_cone(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = random_point(&cone, &mut rng);
            let y = random_point(&cone, &mut rng);
            let trace = (x.embed() * y.embed()).trace();
            assert_relative_eq!(x.inner(&y), trace, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn inner_product_differs_from_trace_form_on_larger_blocks() {
        let cone = zoo::lorentz_cone(3);
        let id = cone.identity();
        let trace = (id.embed() * id.embed()).trace();
        assert_relative_eq!(id.inner(&id), 2.0);
        assert_relative_eq!(trace, 4.0);
    }

    #[test]
    fn embed_project_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for cone in [zoo::sym_cone(3), zoo::vinberg_cone(), zoo::lorentz_cone(4)] {
            for _ in 0..50 {
                let x = random_point(&cone, &mut rng);
                let (back, residual) = cone.project(&x.embed()).unwrap();
                assert!(residual < 1e-13);
                assert!(back.max_abs_diff(&x) < 1e-14);
            }
        }
    }

    #[test]
    fn project_reports_leakage() {
        let cone = zoo::vinberg_cone();
        let mut m = DMatrix::<f64>::identity(3, 3);
        m[(1, 0)] = 0.7;
        m[(0, 1)] = 0.7;
        let (x, residual) = cone.project(&m).unwrap();
        assert!(residual > 0.9);
        assert_eq!(x.block(1, 0), None);
        assert_eq!(x.diag(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn ortho_coords_reproduce_inner_product() {
        let cone = zoo::lorentz_cone(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = random_point(&cone, &mut rng);
            let y = random_point(&cone, &mut rng);
            let dot = x.ortho_coords().dot(&y.ortho_coords());
            assert_relative_eq!(dot, x.inner(&y), epsilon = 1e-12, max_relative = 1e-12);
            let back = StructuredMatrix::from_ortho_coords(&cone, &x.ortho_coords()).unwrap();
            assert!(back.max_abs_diff(&x) < 1e-15);
        }
    }

    #[test]
    fn axioms_hold_on_the_zoo() {
        for cone in [
            zoo::sym_cone(1),
            zoo::sym_cone(4),
            zoo::lorentz_cone(5),
            zoo::vinberg_cone(),
        ] {
            let report = cone.validate_axioms();
            assert!(report.pass, "{}: {}", cone.name(), report);
        }
    }

    #[test]
    fn mirrored_vinberg_fails_v1_with_witness() {
        let cone = zoo::vinberg_cone_mirrored();
        let report = cone.validate_axioms();
        assert!(!report.pass);
        let v = &report.violations[0];
        assert_eq!(v.axiom, AxiomKind::V1);
        assert_eq!(v.blocks, vec![3, 2, 1]);
        assert!(v.residual > 0.5);
    }

    #[test]
    fn closure_holds_on_valid_structures() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for cone in [zoo::sym_cone(3), zoo::lorentz_cone(3), zoo::vinberg_cone()] {
            for _ in 0..1000 {
                let x = random_point(&cone, &mut rng);
                let y = random_point(&cone, &mut rng);
                x.triangle_product(&y).expect("closure violated on a valid structure");
            }
        }
    }

    #[test]
    fn irreducibility_detection() {
        assert!(zoo::sym_cone(2).is_irreducible());
        assert!(zoo::sym_cone(1).is_irreducible());
        assert!(zoo::vinberg_cone().is_irreducible());
        let sum = zoo::direct_sum(&zoo::sym_cone(1), &zoo::sym_cone(1)).unwrap();
        assert!(!sum.is_irreducible());
        let bigger = zoo::direct_sum(&zoo::sym_cone(2), &zoo::vinberg_cone()).unwrap();
        assert!(!bigger.is_irreducible());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        for cone in [
            zoo::sym_cone(3),
            zoo::lorentz_cone(4),
            zoo::vinberg_cone(),
            zoo::vinberg_cone_mirrored(),
        ] {
            let path = dir.path().join(format!("{}.json", cone.name()));
            cone.save_json(&path).unwrap();
            let loaded = ConeStructure::load_json(&path).unwrap();
            assert_eq!(*cone, *loaded, "{} round trip changed the structure", cone.name());
            for (a, b) in cone.blocks().iter().zip(loaded.blocks()) {
                for (ma, mb) in a.basis().iter().zip(b.basis()) {
                    assert_eq!(ma, mb);
                }
            }
        }
    }

    #[test]
    fn loader_rejects_malformed_specs() {
        let spec = ConeSpec {
            name: "bad".into(),
            partition: vec![1, 1],
            blocks: vec![BlockSpec { l: 1, k: 2, basis: vec![vec![1.0]] }],
        };
        assert!(ConeStructure::from_spec(&spec).is_err());

        let spec = ConeSpec {
            name: "bad-dim".into(),
            partition: vec![2, 1],
            blocks: vec![BlockSpec { l: 2, k: 1, basis: vec![vec![1.0]] }],
        };
        assert!(ConeStructure::from_spec(&spec).is_err());

        let spec = ConeSpec {
            name: "rank-deficient".into(),
            partition: vec![1, 1],
            blocks: vec![BlockSpec { l: 2, k: 1, basis: vec![vec![1.0], vec![2.0]] }],
        };
        assert!(ConeStructure::from_spec(&spec).is_err());
    }

    #[test]
    fn loader_orthonormalizes_skew_bases() {
        let spec = ConeSpec {
            name: "skew".into(),
            partition: vec![1, 1, 1],
            blocks: vec![
                BlockSpec { l: 2, k: 1, basis: vec![vec![3.0]] },
                BlockSpec { l: 3, k: 1, basis: vec![vec![0.5]] },
                BlockSpec { l: 3, k: 2, basis: vec![vec![-2.0]] },
            ],
        };
        let cone = ConeStructure::from_spec(&spec).unwrap();
        for b in cone.blocks() {
            assert_relative_eq!(block_inner(&b.basis()[0], &b.basis()[0]), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn coordinate_names_follow_the_layout() {
        let cone = zoo::vinberg_cone();
        assert_eq!(
            cone.coordinate_names(),
            vec!["d1", "d2", "d3", "b_3_1_1", "b_3_2_1"]
        );
        let lorentz = zoo::lorentz_cone(2);
        assert_eq!(lorentz.coordinate_names(), vec!["d1", "d2", "b_2_1_1", "b_2_1_2"]);
    }
}
