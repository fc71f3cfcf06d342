//! Sampling from Riesz and Wishart distributions on a structured cone.
//!
//! The regular sampler draws a triangular factor column by column (a
//! Bartlett-type construction): `t_jj² ~ Gamma(s_j − p_j/2, 1)` on the
//! diagonal and independent `N(0, ½)` coordinates in every lower block, where
//! `p_j` counts the block dimensions above the diagonal in row `j`. Squaring
//! the factor gives a sample at tilt `−I`; an arbitrary tilt `θ = −ρ*(S) I_N`
//! is reached by pushing forward with `ρ(S⁻¹)`.
//!
//! Exponents on a non-regular stratum of the Gindikin set put the measure on
//! a boundary orbit: the factor keeps only the columns with `ε_j = 1` and the
//! untouched coordinates of the product vanish identically (they stay exact
//! zeros in floating point as well).
//!
//! Sampling is deterministic for a fixed seed: sample `i` draws from its own
//! counter-based stream, so results do not depend on the number of worker
//! threads.

use std::io::Write as IoWrite;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{ConeStructure, StructuredMatrix};
use crate::error::{Error, Result};
use crate::power::{gindikin_stratum, p_vector, q_vector};
use crate::triangular::dual_decompose;

/// Which row/column count enters the Bartlett shape parameters. The row-sum
/// convention is the correct one (its Laplace transform reproduces the dual
/// power function exactly); the column-sum variant is kept so tests can
/// demonstrate that anisotropic probes reject it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BartlettConvention {
    /// Shapes `s_j − p_j/2` with `p_j = Σ_{i<j} dim V_ji`.
    RowSums,
    /// Shapes `s_j − q_j/2` with `q_j = Σ_{l>j} dim V_lj`.
    ColumnSums,
}

impl Default for BartlettConvention {
    fn default() -> Self {
        BartlettConvention::RowSums
    }
}

impl BartlettConvention {
    pub fn label(&self) -> &'static str {
        match self {
            BartlettConvention::RowSums => "row-sums",
            BartlettConvention::ColumnSums => "column-sums",
        }
    }
}

/// A batch of samples in structured coordinates (diagonals first, then block
/// coefficients in the structure's block order).
#[derive(Debug, Clone)]
pub struct SampleBatch {
    cone: Arc<ConeStructure>,
    s: Vec<f64>,
    theta: StructuredMatrix,
    seed: u64,
    convention: BartlettConvention,
    coords: Vec<Vec<f64>>,
}

/// Monte Carlo estimate of a Laplace-transform value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LaplaceEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
}

/// Empirical mean and covariance in structured coordinates.
#[derive(Debug, Clone)]
pub struct Moments {
    pub mean: Vec<f64>,
    pub covariance: DMatrix<f64>,
}

/// Sidecar metadata written next to a CSV batch.
#[derive(Debug, Serialize)]
struct BatchMeta<'a> {
    cone: &'a str,
    s: &'a [f64],
    theta: Vec<f64>,
    seed: u64,
    n: usize,
    shape_convention: &'a str,
    columns: Vec<String>,
}

/// Draws `n` samples from the Wishart-type distribution with exponent `s`
/// (which must lie in the regular Gindikin stratum) and tilt `θ` in the
/// interior of `−Ω*_V`.
pub fn sample_wishart(
    s: &[f64],
    theta: &StructuredMatrix,
    n: usize,
    seed: u64,
) -> Result<SampleBatch> {
    sample_wishart_with(s, theta, n, seed, BartlettConvention::RowSums)
}

/// [`sample_wishart`] with an explicit shape convention.
pub fn sample_wishart_with(
    s: &[f64],
    theta: &StructuredMatrix,
    n: usize,
    seed: u64,
    convention: BartlettConvention,
) -> Result<SampleBatch> {
    let cone = Arc::clone(theta.cone());
    let stratum = gindikin_stratum(&cone, s).ok_or(Error::NotInGindikinSet)?;
    if !stratum.regular() {
        return Err(Error::NonRegularStratum);
    }
    let eps = vec![1u8; cone.rank()];
    let sigma = shape_vector(&cone, s, convention)?;
    draw_batch(&cone, s, theta, n, seed, convention, &sigma, &eps)
}

/// Draws from the Riesz distribution on a boundary orbit: only the columns
/// with `ε_j = 1` in the stratum of `s` are generated, so the coordinates the
/// orbit never reaches are exact zeros. Exponents in the regular stratum are
/// accepted and reproduce [`sample_wishart`].
pub fn sample_singular(
    s: &[f64],
    theta: &StructuredMatrix,
    n: usize,
    seed: u64,
) -> Result<SampleBatch> {
    let cone = Arc::clone(theta.cone());
    let stratum = gindikin_stratum(&cone, s).ok_or(Error::NotInGindikinSet)?;
    let p = &stratum.p;
    let sigma: Vec<f64> = s.iter().zip(p).map(|(sk, pk)| sk - pk / 2.0).collect();
    draw_batch(
        &cone,
        s,
        theta,
        n,
        seed,
        BartlettConvention::RowSums,
        &sigma,
        &stratum.eps,
    )
}

fn shape_vector(
    cone: &ConeStructure,
    s: &[f64],
    convention: BartlettConvention,
) -> Result<Vec<f64>> {
    let ones = vec![1u8; cone.rank()];
    let half = match convention {
        BartlettConvention::RowSums => p_vector(cone, &ones),
        BartlettConvention::ColumnSums => q_vector(cone, &ones),
    };
    let sigma: Vec<f64> = s.iter().zip(&half).map(|(sk, hk)| sk - hk / 2.0).collect();
    if let Some(&bad) = sigma.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::PreconditionViolation(format!(
            "Bartlett shape must be positive, got {bad} under the {} convention",
            convention.label()
        )));
    }
    Ok(sigma)
}

#[allow(clippy::too_many_arguments)]
fn draw_batch(
    cone: &Arc<ConeStructure>,
    s: &[f64],
    theta: &StructuredMatrix,
    n: usize,
    seed: u64,
    convention: BartlettConvention,
    sigma: &[f64],
    eps: &[u8],
) -> Result<SampleBatch> {
    if s.len() != cone.rank() {
        return Err(Error::DimensionMismatch { expected: cone.rank(), got: s.len() });
    }
    let retilt = dual_decompose(&theta.scale(-1.0))
        .map_err(|_| Error::OutOfDomain)?
        .inverse()?
        .embed_lower();
    let gammas: Vec<Option<Gamma<f64>>> = sigma
        .iter()
        .zip(eps)
        .map(|(&sg, &e)| {
            if e == 1 {
                Gamma::new(sg, 1.0)
                    .map(Some)
                    .map_err(|e| Error::InvalidInput(format!("gamma shape: {e}")))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;
    let normal = Normal::new(0.0, 0.5f64.sqrt())
        .map_err(|e| Error::InvalidInput(format!("normal: {e}")))?;

    let coords: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let factor = draw_factor(cone, &gammas, &normal, eps, &mut rng);
            let pushed = &retilt * factor;
            let dense = &pushed * pushed.transpose();
            let (x, residual) = cone.project(&dense)?;
            let scale = dense.norm().max(1.0);
            if residual > crate::config::DEFAULT.closure * scale {
                return Err(Error::ClosureViolation {
                    context: "sampling".into(),
                    residual: residual / scale,
                });
            }
            Ok(x.coords())
        })
        .collect::<Result<_>>()?;

    Ok(SampleBatch {
        cone: Arc::clone(cone),
        s: s.to_vec(),
        theta: theta.clone(),
        seed,
        convention,
        coords,
    })
}

fn draw_factor(
    cone: &Arc<ConeStructure>,
    gammas: &[Option<Gamma<f64>>],
    normal: &Normal<f64>,
    eps: &[u8],
    rng: &mut ChaCha8Rng,
) -> DMatrix<f64> {
    let r = cone.rank();
    let mut tdiag = vec![0.0; r];
    let mut tblocks: Vec<Vec<f64>> =
        cone.blocks().iter().map(|b| vec![0.0; b.dim()]).collect();
    let block_pos: Vec<(usize, usize)> =
        cone.blocks().iter().map(|b| (b.l(), b.k())).collect();
    // Column-major draw order keeps the stream layout independent of which
    // strata are active.
    for j in 0..r {
        if eps[j] != 1 {
            continue;
        }
        let g = gammas[j].as_ref().expect("active column has a shape");
        tdiag[j] = g.sample(rng).sqrt();
        for l in (j + 1)..r {
            if let Some(idx) = block_pos.iter().position(|&(bl, bk)| bl == l && bk == j) {
                for c in tblocks[idx].iter_mut() {
                    *c = normal.sample(rng);
                }
            }
        }
    }
    // Assemble densely; zero diagonals are allowed here (boundary strata), so
    // this bypasses the group-element constructor.
    let part = cone.partition();
    let nsz = cone.size();
    let mut m = DMatrix::zeros(nsz, nsz);
    for k in 0..r {
        let (off, nk) = (part.offset(k), part.sizes()[k]);
        for i in 0..nk {
            m[(off + i, off + i)] = tdiag[k];
        }
    }
    for (idx, b) in cone.blocks().iter().enumerate() {
        if tblocks[idx].iter().all(|&c| c == 0.0) {
            continue;
        }
        let mut blk = DMatrix::zeros(part.sizes()[b.l()], part.sizes()[b.k()]);
        for (jj, a) in b.basis().iter().enumerate() {
            blk += a * tblocks[idx][jj];
        }
        m.view_mut((part.offset(b.l()), part.offset(b.k())), blk.shape()).copy_from(&blk);
    }
    m
}

impl SampleBatch {
    pub fn cone(&self) -> &Arc<ConeStructure> {
        &self.cone
    }

    pub fn exponent(&self) -> &[f64] {
        &self.s
    }

    pub fn theta(&self) -> &StructuredMatrix {
        &self.theta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn convention(&self) -> BartlettConvention {
        self.convention
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Structured coordinates of every sample.
    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    /// Reconstructs sample `i` as a structured matrix.
    pub fn point(&self, i: usize) -> Result<StructuredMatrix> {
        self.cone.point_from_coords(&self.coords[i])
    }

    /// The column of coordinate `j` across the batch.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.coords.iter().map(|row| row[j]).collect()
    }

    /// Monte Carlo estimate of `E[e^{⟨η, X⟩}]`.
    pub fn empirical_laplace(&self, eta: &StructuredMatrix) -> LaplaceEstimate {
        let weights = coordinate_weights(&self.cone);
        let eta_coords = eta.coords();
        let n = self.coords.len();
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut max_exp = f64::NEG_INFINITY;
        for row in &self.coords {
            let ip: f64 = row
                .iter()
                .zip(&eta_coords)
                .zip(&weights)
                .map(|((x, e), w)| w * x * e)
                .sum();
            max_exp = max_exp.max(ip);
            let v = ip.exp();
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / n as f64;
        let var = (sumsq / n as f64 - mean * mean).max(0.0);
        let std_error = (var / n as f64).sqrt();
        if max_exp > 0.0 {
            log::warn!(
                "Laplace probe exponent reaches {max_exp:.3} > 0; the estimator may have \
                 infinite variance"
            );
        }
        if std_error > 0.25 * mean.abs() {
            log::warn!(
                "Laplace estimate is noisy (mean {mean:.4}, std error {std_error:.4}); \
                 increase the sample count or move the probe into the interior"
            );
        }
        LaplaceEstimate { estimate: mean, std_error, n }
    }

    /// Empirical mean and covariance in structured coordinates.
    pub fn empirical_moments(&self) -> Moments {
        let d = self.cone.dim();
        let n = self.coords.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for row in &self.coords {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x / n;
            }
        }
        let mut cov = DMatrix::zeros(d, d);
        for row in &self.coords {
            for a in 0..d {
                for b in 0..d {
                    cov[(a, b)] += (row[a] - mean[a]) * (row[b] - mean[b]) / n;
                }
            }
        }
        Moments { mean, covariance: cov }
    }

    /// Writes the batch as CSV (one sample per row, structured coordinates)
    /// together with a `<stem>.meta.json` sidecar describing the batch.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        let names = self.cone.coordinate_names();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in &self.coords {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&format!("{v}"));
                first = false;
            }
            out.push('\n');
        }
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(out.as_bytes())?;
        f.flush()?;

        let meta = BatchMeta {
            cone: self.cone.name(),
            s: &self.s,
            // + 0.0 turns -0.0 into 0.0 so the sidecar JSON has no signed zeros
            theta: self.theta.coords().iter().map(|v| v + 0.0).collect(),
            seed: self.seed,
            n: self.coords.len(),
            shape_convention: self.convention.label(),
            columns: names,
        };
        let meta_path = path.with_extension("meta.json");
        let mut body = serde_json::to_string_pretty(&meta)?;
        body.push('\n');
        std::fs::write(meta_path, body)?;
        Ok(())
    }
}

/// Inner-product weights of the structured coordinates: 1 on diagonals, 2 on
/// block coefficients.
pub fn coordinate_weights(cone: &ConeStructure) -> Vec<f64> {
    let mut w = vec![1.0; cone.rank()];
    w.extend(std::iter::repeat(2.0).take(cone.dim() - cone.rank()));
    w
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (m, n) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < m && j < n {
        let x = a[i].min(b[j]);
        while i < m && a[i] <= x {
            i += 1;
        }
        while j < n && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / m as f64 - j as f64 / n as f64).abs());
    }
    d
}

/// Rejection threshold for the two-sample KS statistic at level `alpha`.
pub fn ks_threshold(m: usize, n: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * (((m + n) as f64) / ((m * n) as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::support_flags;
    use crate::triangular::{cholesky_structured, TriangularElement};
    use crate::zoo;
    use approx::assert_relative_eq;

    fn neg_identity(cone: &Arc<ConeStructure>) -> StructuredMatrix {
        (&cone.identity()).scale(-1.0)
    }

    #[test]
    fn batches_are_bitwise_deterministic() {
        let cone = zoo::vinberg_cone();
        let theta = neg_identity(&cone);
        let s = [1.0, 1.0, 2.0];
        let a = sample_wishart(&s, &theta, 200, 9).unwrap();
        let b = sample_wishart(&s, &theta, 200, 9).unwrap();
        assert_eq!(a.coords(), b.coords());
        let c = sample_wishart(&s, &theta, 200, 10).unwrap();
        assert_ne!(a.coords(), c.coords());
    }

    #[test]
    fn batches_do_not_depend_on_the_thread_count() {
        let cone = zoo::sym_cone(3);
        let theta = neg_identity(&cone);
        let s = [1.0, 1.5, 2.5];
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_wishart(&s, &theta, 300, 4).unwrap());
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| sample_wishart(&s, &theta, 300, 4).unwrap());
        assert_eq!(single.coords(), quad.coords());
    }

    #[test]
    fn scalar_case_is_a_gamma_distribution() {
        let cone = zoo::sym_cone(1);
        let s = [1.5];
        let theta = neg_identity(&cone);
        let batch = sample_wishart(&s, &theta, 40_000, 11).unwrap();
        let mean: f64 =
            batch.coords().iter().map(|r| r[0]).sum::<f64>() / batch.len() as f64;
        let se = (1.5f64 / batch.len() as f64).sqrt();
        assert!((mean - 1.5).abs() < 4.0 * se, "mean {mean}");

        let theta2 = theta.scale(2.0);
        let batch2 = sample_wishart(&s, &theta2, 40_000, 11).unwrap();
        let mean2: f64 =
            batch2.coords().iter().map(|r| r[0]).sum::<f64>() / batch2.len() as f64;
        assert!((mean2 - 0.75).abs() < 4.0 * se, "tilted mean {mean2}");
    }

    #[test]
    fn laplace_probe_matches_the_closed_form() {
        let cone = zoo::sym_cone(2);
        let s = [1.5, 2.5];
        let theta = neg_identity(&cone);
        let batch = sample_wishart(&s, &theta, 60_000, 12).unwrap();
        let est = batch.empirical_laplace(&theta);
        assert!(
            (est.estimate - 1.0 / 16.0).abs() < 4.0 * est.std_error,
            "estimate {} ± {}",
            est.estimate,
            est.std_error
        );
    }

    #[test]
    fn samples_lie_in_the_open_cone() {
        let cone = zoo::vinberg_cone();
        let s = [1.0, 1.0, 2.0];
        let theta = neg_identity(&cone);
        let batch = sample_wishart(&s, &theta, 100, 13).unwrap();
        for i in 0..batch.len() {
            let x = batch.point(i).unwrap();
            assert!(x.is_positive_definite());
            assert!(cholesky_structured(&x).is_ok());
        }
    }

    #[test]
    fn general_tilts_are_reached_by_the_group() {
        let cone = zoo::sym_cone(2);
        let s = [1.0, 1.5];
        let t = TriangularElement::from_parts(&cone, vec![1.3, 0.8], vec![vec![0.4]]).unwrap();
        let theta = t.apply_adjoint(&cone.identity()).unwrap().scale(-1.0);
        let batch = sample_wishart(&s, &theta, 60_000, 14).unwrap();
        // Probe ratio L(θ + η)/L(θ) with η = θ/2 via the dual power function.
        let eta = theta.scale(0.5);
        let expected = crate::power::riesz_laplace(&s, &theta.scale(1.5)).unwrap()
            / crate::power::riesz_laplace(&s, &theta).unwrap();
        let est = batch.empirical_laplace(&eta);
        assert!(
            (est.estimate - expected).abs() < 4.0 * est.std_error,
            "estimate {} ± {} vs {expected}",
            est.estimate,
            est.std_error
        );
    }

    #[test]
    fn singular_batches_have_exact_zeros() {
        let cone = zoo::sym_cone(2);
        let theta = neg_identity(&cone);
        let batch = sample_singular(&[0.0, 1.0], &theta, 500, 15).unwrap();
        let flags = support_flags(&cone, &[0.0, 1.0]).unwrap();
        assert_eq!(flags.zero_diag, vec![0]);
        for row in batch.coords() {
            assert_eq!(row[0], 0.0);
            assert_eq!(row[2], 0.0);
            assert!(row[1] > 0.0);
        }

        let vinberg = zoo::vinberg_cone();
        let theta = neg_identity(&vinberg);
        let batch = sample_singular(&[1.0, 0.0, 1.0], &theta, 500, 16).unwrap();
        // Coordinates: d1, d2, d3, b_3_1_1, b_3_2_1.
        let mut saw_nonzero_offdiag = false;
        for row in batch.coords() {
            assert_eq!(row[1], 0.0);
            assert_eq!(row[4], 0.0);
            assert!(row[0] > 0.0 && row[2] > 0.0);
            saw_nonzero_offdiag |= row[3] != 0.0;
        }
        assert!(saw_nonzero_offdiag);
    }

    #[test]
    fn singular_sampler_accepts_regular_exponents() {
        let cone = zoo::sym_cone(2);
        let theta = neg_identity(&cone);
        let a = sample_singular(&[1.5, 2.5], &theta, 50, 17).unwrap();
        let b = sample_wishart(&[1.5, 2.5], &theta, 50, 17).unwrap();
        assert_eq!(a.coords(), b.coords());
    }

    #[test]
    fn non_regular_exponents_are_rejected_by_the_regular_sampler() {
        let cone = zoo::sym_cone(2);
        let theta = neg_identity(&cone);
        assert!(matches!(
            sample_wishart(&[0.0, 1.0], &theta, 10, 1),
            Err(Error::NonRegularStratum)
        ));
        assert!(matches!(
            sample_wishart(&[0.3, 0.3], &theta, 10, 1),
            Err(Error::NotInGindikinSet)
        ));
    }

    #[test]
    fn anisotropic_probes_pin_the_shape_convention() {
        let cone = zoo::sym_cone(2);
        let s = [2.0, 2.0];
        let theta = neg_identity(&cone);
        let n = 20_000;
        // Probe only the first diagonal: the conventions predict different
        // marginals there (Gamma(2, ·) against Gamma(3/2, ·)).
        let eta = cone.point_from_coords(&[-1.0, 0.0, 0.0]).unwrap();
        let expected = 2.0f64.powi(-2);

        let row = sample_wishart_with(&s, &theta, n, 18, BartlettConvention::RowSums).unwrap();
        let est = row.empirical_laplace(&eta);
        assert!(
            (est.estimate - expected).abs() < 4.0 * est.std_error,
            "row-sums convention drifted: {} ± {} vs {expected}",
            est.estimate,
            est.std_error
        );

        let col =
            sample_wishart_with(&s, &theta, n, 18, BartlettConvention::ColumnSums).unwrap();
        let est = col.empirical_laplace(&eta);
        assert!(
            (est.estimate - expected).abs() > 8.0 * est.std_error,
            "column-sums convention unexpectedly matched: {} ± {} vs {expected}",
            est.estimate,
            est.std_error
        );
    }

    #[test]
    fn group_equivariance_of_the_sampler() {
        let cone = zoo::sym_cone(2);
        let s = [1.2, 1.8];
        let t = TriangularElement::from_parts(&cone, vec![1.4, 0.9], vec![vec![-0.3]]).unwrap();
        let n = 6_000;

        // ρ(T) applied to samples at tilt −I ...
        let base = sample_wishart(&s, &neg_identity(&cone), n, 19).unwrap();
        let mapped: Vec<Vec<f64>> = (0..n)
            .map(|i| t.apply(&base.point(i).unwrap()).unwrap().coords())
            .collect();
        // ... against direct samples at the transported tilt −ρ*(T⁻¹) I.
        let theta = t
            .inverse()
            .unwrap()
            .apply_adjoint(&cone.identity())
            .unwrap()
            .scale(-1.0);
        let direct = sample_wishart(&s, &theta, n, 20).unwrap();

        for j in 0..cone.dim() {
            let a: Vec<f64> = mapped.iter().map(|r| r[j]).collect();
            let b = direct.column(j);
            let d = ks_statistic(&a, &b);
            let thr = ks_threshold(n, n, 1e-4);
            assert!(d < thr, "coordinate {j}: KS {d} ≥ {thr}");
        }
    }

    #[test]
    fn convolution_adds_exponents() {
        let cone = zoo::sym_cone(2);
        let s = [1.0, 1.2];
        let s2 = [2.0, 2.4];
        let n = 6_000;
        let theta = neg_identity(&cone);
        let a = sample_wishart(&s, &theta, n, 21).unwrap();
        let b = sample_wishart(&s, &theta, n, 22).unwrap();
        let summed: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                a.coords()[i]
                    .iter()
                    .zip(&b.coords()[i])
                    .map(|(x, y)| x + y)
                    .collect()
            })
            .collect();
        let direct = sample_wishart(&s2, &theta, n, 23).unwrap();
        for j in 0..cone.dim() {
            let x: Vec<f64> = summed.iter().map(|r| r[j]).collect();
            let y = direct.column(j);
            let d = ks_statistic(&x, &y);
            let thr = ks_threshold(n, n, 1e-4);
            assert!(d < thr, "coordinate {j}: KS {d} ≥ {thr}");
        }
    }

    #[test]
    fn csv_output_is_stable_and_described() {
        let dir = tempfile::tempdir().unwrap();
        let cone = zoo::sym_cone(2);
        let theta = neg_identity(&cone);
        let batch = sample_wishart(&[1.0, 1.5], &theta, 5, 24).unwrap();
        let path = dir.path().join("batch.csv");
        batch.write_csv(&path).unwrap();
        let first = std::fs::read(&path).unwrap();
        batch.write_csv(&path).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);

        let text = String::from_utf8(first).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "d1,d2,b_2_1_1");
        assert_eq!(lines.count(), 5);

        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("batch.meta.json")).unwrap())
                .unwrap();
        assert_eq!(meta["cone"], "sym2");
        assert_eq!(meta["n"], 5);
        assert_eq!(meta["seed"], 24);
        assert_eq!(meta["columns"][2], "b_2_1_1");
        assert_eq!(meta["shape_convention"], "row-sums");
    }

    #[test]
    fn moments_of_the_standard_batch() {
        let cone = zoo::sym_cone(2);
        let theta = neg_identity(&cone);
        let s = [1.5, 2.0];
        let batch = sample_wishart(&s, &theta, 50_000, 25).unwrap();
        let m = batch.empirical_moments();
        // At tilt −I every diagonal coordinate has mean s_k.
        assert_relative_eq!(m.mean[0], 1.5, epsilon = 0.05);
        assert_relative_eq!(m.mean[1], 2.0, epsilon = 0.05);
        let eig = m.covariance.symmetric_eigenvalues();
        assert!(eig.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn ks_helpers_behave() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(ks_statistic(&a, &a), 0.0);
        let b: Vec<f64> = (0..100).map(|i| 1000.0 + i as f64).collect();
        assert_eq!(ks_statistic(&a, &b), 1.0);
        assert!(ks_threshold(1000, 1000, 1e-3) < 0.12);
    }
}
