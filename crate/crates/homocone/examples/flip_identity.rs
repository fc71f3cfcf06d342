//! The orientation flip: a one-parameter family of triangular elements
//! whose endpoints average to a reflection of one diagonal sign.
//!
//! For a block (l, k) and a vector v in it with |v|^2 = 2, the element
//! T(v) acts on the primal side by adding twice the k-th diagonal to the
//! l-th one, and on the dual side the average of rho*(T(v))^{-1} over
//! v and -v maps the signed identity E_eps to E_eps' with the sign at k
//! replaced by the sign at l. This is the mechanism that connects
//! different boundary orientations, and it needs a nonzero block to run
//! through: reducible cones have none between their summands.

use homocone::{
    bridge_pairs, canonical_flip_coeffs, flip_dual_average, flip_midpoint, sign_matrix, zoo,
};

fn main() -> homocone::Result<()> {
    let cone = zoo::sym_cone(3);

    // Primal identity on a generic point.
    let x = cone.point_from_coords(&[3.0, 2.0, 1.5, 0.3, -0.2, 0.1])?;
    let (l, k) = (2, 0);
    let v = canonical_flip_coeffs(&cone, l, k)?;
    let y = flip_midpoint(&x, l, k, &v)?;
    println!("x diagonal {:?}", x.diag());
    println!("midpoint diagonal {:?} (adds 2 x_kk to x_ll)", y.diag());

    // Dual average on a mixed orientation.
    let eps: [i8; 3] = [1, -1, 1];
    println!("\neps = {eps:?}, bridges {:?}", bridge_pairs(&cone, &eps));
    let (l, k) = (1, 0);
    let v = canonical_flip_coeffs(&cone, l, k)?;
    let (avg, predicted) = flip_dual_average(&cone, &eps, l, k, &v)?;
    let target = sign_matrix(&cone, &predicted)?;
    println!(
        "flip across ({}, {}): predicted {:?}, error {:.3e}",
        l + 1,
        k + 1,
        predicted,
        avg.max_abs_diff(&target)
    );

    // A reducible structure has no block joining its summands, so mixed
    // orientations across the summands cannot be bridged.
    let sum = zoo::direct_sum(&zoo::sym_cone(1), &zoo::sym_cone(1))?;
    let eps: [i8; 2] = [1, -1];
    let bridges = bridge_pairs(&sum, &eps);
    println!(
        "\n{} with eps = {eps:?}: bridges {:?} (none exist)",
        sum.name(),
        bridges
    );
    assert!(bridges.is_empty());
    Ok(())
}
