//! Generalized power functions on the dual cone.
//!
//! `dual_power(s, xi)` evaluates the multi-exponent power function that
//! reduces to `det(xi)^p` when all exponents equal `p` on Sym(r). It is
//! multiplicative along the triangular group orbit, which is what makes it
//! the right integrand for Riesz measures.

use homocone::{dual_power, riesz_laplace, zoo, TriangularElement};

fn main() -> homocone::Result<()> {
    let sym = zoo::sym_cone(3);

    // On the symmetric cone with equal exponents, the power function is a
    // determinant power.
    let xi = sym.point_from_coords(&[4.0, 5.0, 6.0, 1.0, 0.5, -0.25])?;
    let p = 1.5;
    let value = dual_power(&vec![p; 3], &xi)?;
    let det = xi.embed().determinant();
    println!("Delta*_(1.5,1.5,1.5)(xi) = {value:.12}");
    println!("det(xi)^1.5             = {:.12}", det.powf(p));

    // Mixed exponents weight the nested minors instead.
    let mixed = dual_power(&[1.0, 2.0, 0.5], &xi)?;
    println!("Delta*_(1,2,0.5)(xi)    = {mixed:.12}");

    // Multiplicativity: Delta*_{s+s'} = Delta*_s Delta*_{s'}.
    let s1 = [0.7, 1.1, 0.4];
    let s2 = [0.9, 0.3, 1.6];
    let sum: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| a + b).collect();
    let lhs = dual_power(&sum, &xi)?;
    let rhs = dual_power(&s1, &xi)? * dual_power(&s2, &xi)?;
    println!("multiplicativity gap    = {:.3e}", (lhs - rhs).abs());

    // Equivariance under the adjoint action: pushing xi by rho*(T)
    // multiplies the value by the reversed character of T.
    let t = TriangularElement::from_parts(
        &sym,
        vec![1.3, 0.7, 1.1],
        vec![vec![0.5], vec![-0.2], vec![0.1]],
    )?;
    let moved = t.apply_adjoint(&xi)?;
    let s = [1.0, 0.5, 2.0];
    let ratio = dual_power(&s, &moved)? / dual_power(&s, &xi)?;
    let srev: Vec<f64> = s.iter().rev().copied().collect();
    println!(
        "orbit ratio {ratio:.12} vs character {:.12}",
        t.character(&srev)
    );

    // The Laplace transform of the Riesz measure R_s evaluates the same
    // power function at -theta. On diagonal points it splits into a
    // product of scalar powers.
    let vinberg = zoo::vinberg_cone();
    let s = [1.0, 1.0, 2.0];
    let theta = (&vinberg.identity()).scale(-2.0);
    let lt = riesz_laplace(&s, &theta)?;
    let closed = 2.0f64.powf(-(s.iter().sum::<f64>()));
    println!("L R_s(-2I) = {lt:.12}, closed form {closed:.12}");

    // Exponents outside the Gindikin set have no Riesz measure, so the
    // transform refuses them.
    assert!(riesz_laplace(&[0.25, 0.0, 0.0], &theta).is_err());
    println!("exponents outside the Gindikin set are rejected");
    Ok(())
}
