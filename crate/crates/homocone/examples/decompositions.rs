//! Triangular decompositions on both sides of the duality.
//!
//! Every point of the open cone is `rho(T) I` for exactly one lower
//! triangular `T` in the structure group, and every point of the open dual
//! cone is `rho*(T) I` for exactly one such element. The first factorization
//! is a structured Cholesky; the second needs a small Newton iteration.

use homocone::{cholesky_structured, dual_decompose, zoo};

fn main() -> homocone::Result<()> {
    let cone = zoo::vinberg_cone();

    // A point safely inside the cone: x = rho(T0) I for a hand-picked T0.
    let t0 = homocone::TriangularElement::from_parts(
        &cone,
        vec![1.5, 0.8, 1.2],
        vec![vec![0.4], vec![-0.3]],
    )?;
    let x = t0.apply(&cone.identity())?;
    println!("x =\n{}", x.embed());

    let t = cholesky_structured(&x)?;
    println!("recovered diagonal {:?}", t.tdiag());
    let back = t.apply(&cone.identity())?;
    println!("primal round trip error {:.3e}", back.max_abs_diff(&x));

    // The same point viewed as a dual vector decomposes differently.
    let u = dual_decompose(&x)?;
    let back = u.apply_adjoint(&cone.identity())?;
    println!("dual round trip error {:.3e}", back.max_abs_diff(&x));

    // On Sym(r) the two coincide up to ordering; on Vinberg's cone they do
    // not, which is easy to see on the diagonals.
    println!("cholesky diag {:?}", t.tdiag());
    println!("dual     diag {:?}", u.tdiag());

    // Group structure: compose, invert, and push points around.
    let prod = t0.compose(&t0)?;
    let inv = prod.inverse()?;
    let round = prod.compose(&inv)?;
    println!(
        "T T^-1 diagonal {:?} (identity to {:.1e})",
        round.tdiag(),
        round
            .apply(&cone.identity())?
            .max_abs_diff(&cone.identity())
    );

    // Points outside the cone are rejected rather than silently factored.
    let outside = (&cone.identity()).scale(-1.0);
    assert!(cholesky_structured(&outside).is_err());
    assert!(dual_decompose(&outside).is_err());
    println!("points outside the cone are rejected");
    Ok(())
}
