//! A small catalog of concrete structures.
//!
//! Besides the classical families (symmetric matrices, Lorentz cones), the
//! catalog contains the five-dimensional Vinberg cone, the smallest
//! homogeneous cone that is not symmetric, and a deliberately broken mirror
//! image of it that violates the closure axioms. Direct sums produce
//! reducible structures.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::cone::{BlockPartition, ConeStructure};
use crate::error::{Error, Result};

/// The cone of positive definite `r × r` symmetric matrices: partition of all
/// ones, every lower block one-dimensional.
pub fn sym_cone(r: usize) -> Arc<ConeStructure> {
    assert!(r >= 1, "rank must be at least 1");
    let mut blocks = Vec::new();
    for l in 1..r {
        for k in 0..l {
            blocks.push((l, k, vec![DMatrix::from_element(1, 1, 1.0)]));
        }
    }
    let partition = BlockPartition::new(vec![1; r]).expect("valid partition");
    ConeStructure::new(format!("sym{r}"), partition, blocks).expect("valid structure")
}

/// The Lorentz cone of rank 2 realized on `Sym(m + 1)`: partition `(m, 1)`
/// with the full row space as the single block.
pub fn lorentz_cone(m: usize) -> Arc<ConeStructure> {
    assert!(m >= 1, "block size must be at least 1");
    let basis: Vec<DMatrix<f64>> = (0..m)
        .map(|i| {
            let mut a = DMatrix::zeros(1, m);
            a[(0, i)] = 1.0;
            a
        })
        .collect();
    let partition = BlockPartition::new(vec![m, 1]).expect("valid partition");
    ConeStructure::new(format!("lorentz{m}"), partition, vec![(1, 0, basis)])
        .expect("valid structure")
}

/// The Vinberg cone: rank 3, partition `(1, 1, 1)`, blocks `V_31 = V_32 = R`
/// and `V_21 = {0}`. The smallest homogeneous cone that is not symmetric.
pub fn vinberg_cone() -> Arc<ConeStructure> {
    let one = vec![DMatrix::from_element(1, 1, 1.0)];
    let partition = BlockPartition::new(vec![1, 1, 1]).expect("valid partition");
    ConeStructure::new("vinberg", partition, vec![(2, 0, one.clone()), (2, 1, one)])
        .expect("valid structure")
}

/// The mirror image of the Vinberg data: blocks `V_21 = V_32 = R` with
/// `V_31 = {0}`. This choice breaks the product axiom (`V_32 · V_21` has
/// nowhere to land), so the structure fails validation.
pub fn vinberg_cone_mirrored() -> Arc<ConeStructure> {
    let one = vec![DMatrix::from_element(1, 1, 1.0)];
    let partition = BlockPartition::new(vec![1, 1, 1]).expect("valid partition");
    ConeStructure::new(
        "vinberg-mirrored",
        partition,
        vec![(1, 0, one.clone()), (2, 1, one)],
    )
    .expect("well-formed data (axiom failure is reported by validation, not construction)")
}

/// The direct sum of two structures: block-diagonal concatenation, no blocks
/// between the summands. Always reducible.
pub fn direct_sum(a: &Arc<ConeStructure>, b: &Arc<ConeStructure>) -> Result<Arc<ConeStructure>> {
    let mut sizes = a.partition().sizes().to_vec();
    sizes.extend_from_slice(b.partition().sizes());
    let partition = BlockPartition::new(sizes)?;
    let shift = a.rank();
    let mut blocks: Vec<(usize, usize, Vec<DMatrix<f64>>)> = a
        .blocks()
        .iter()
        .map(|blk| (blk.l(), blk.k(), blk.basis().to_vec()))
        .collect();
    blocks.extend(
        b.blocks()
            .iter()
            .map(|blk| (blk.l() + shift, blk.k() + shift, blk.basis().to_vec())),
    );
    ConeStructure::new(format!("{}+{}", a.name(), b.name()), partition, blocks)
}

/// Looks up a structure by name: `sym<r>`, `lorentz<m>`, `vinberg`,
/// `vinberg-mirrored`, or a `+`-separated direct sum of those.
pub fn by_name(name: &str) -> Result<Arc<ConeStructure>> {
    let parts: Vec<&str> = name.split('+').collect();
    if parts.len() > 1 {
        let mut acc = by_name(parts[0])?;
        for part in &parts[1..] {
            acc = direct_sum(&acc, &by_name(part)?)?;
        }
        return Ok(acc);
    }
    let name = name.trim();
    if let Some(r) = name.strip_prefix("sym") {
        let r: usize = r
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad rank in {name:?}")))?;
        if r == 0 {
            return Err(Error::InvalidInput("sym rank must be positive".into()));
        }
        return Ok(sym_cone(r));
    }
    if let Some(m) = name.strip_prefix("lorentz") {
        let m: usize = m
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad block size in {name:?}")))?;
        if m == 0 {
            return Err(Error::InvalidInput("lorentz block size must be positive".into()));
        }
        return Ok(lorentz_cone(m));
    }
    match name {
        "vinberg" => Ok(vinberg_cone()),
        "vinberg-mirrored" => Ok(vinberg_cone_mirrored()),
        other => Err(Error::InvalidInput(format!(
            "unknown structure {other:?}; expected sym<r>, lorentz<m>, vinberg, \
             vinberg-mirrored, or a '+' sum"
        ))),
    }
}
