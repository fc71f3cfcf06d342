//! Walk the Gindikin set of Sym(3): the exponents for which a Riesz measure
//! exists. It is a union of strata, one per indicator vector eps, and only
//! the open stratum eps = (1, ..., 1) carries an absolutely continuous
//! measure. The rest are supported on boundary faces.

use homocone::{gindikin_stratum, in_gindikin_set, support_flags, zoo};

fn main() -> homocone::Result<()> {
    let sym3 = zoo::sym_cone(3);

    // For equal exponents s = (p, p, p) the set is the classical grid
    // {0, 1/2, 1} joined with the ray (1, infinity).
    println!("scalar exponents p on sym3:");
    for p in [0.0, 0.25, 0.5, 0.75, 1.0, 1.2, 3.0] {
        let s = vec![p; 3];
        match gindikin_stratum(&sym3, &s) {
            Some(st) => println!("  p = {p:<4} member, eps = {:?}", st.eps),
            None => println!("  p = {p:<4} not a member"),
        }
    }

    // Unequal exponents move through the strata coordinate by coordinate.
    for s in [[0.0, 0.5, 1.0], [2.0, 0.5, 1.0], [0.6, 1.1, 1.7]] {
        match gindikin_stratum(&sym3, &s) {
            Some(st) => println!(
                "s = {s:?}: eps = {:?}, regular: {}",
                st.eps,
                st.regular()
            ),
            None => println!("s = {s:?}: not a member"),
        }
    }

    // The indicator vector tells the sampler which matrix entries vanish
    // identically under the singular measure.
    println!("\nsupport of the singular measures:");
    for (cone, s) in [
        (zoo::sym_cone(2), vec![0.0, 1.0]),
        (zoo::vinberg_cone(), vec![1.0, 0.0, 1.0]),
    ] {
        let flags = support_flags(&cone, &s)?;
        println!(
            "  {} with s = {s:?}: eps = {:?}, zero diagonals {:?}, zero blocks {:?}",
            cone.name(),
            flags.eps,
            flags.zero_diag,
            flags.zero_blocks
        );
    }

    // The thresholds depend on the block dimensions, so the same exponent
    // vector can be admissible on one cone and not on another.
    let lorentz = zoo::lorentz_cone(4);
    for s in [[1.0, 2.5], [1.0, 2.0], [1.0, 1.5]] {
        println!(
            "\ns = {s:?} on {}: member = {}",
            lorentz.name(),
            in_gindikin_set(&lorentz, &s)
        );
    }
    Ok(())
}
