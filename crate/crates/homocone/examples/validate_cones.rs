//! Build every cone in the zoo, check the closure axioms, and show what a
//! broken structure looks like.
//!
//! Run with `cargo run --example validate_cones`.

use homocone::zoo;

fn main() -> homocone::Result<()> {
    let cones = [
        zoo::sym_cone(2),
        zoo::sym_cone(3),
        zoo::lorentz_cone(3),
        zoo::vinberg_cone(),
    ];

    for cone in &cones {
        let report = cone.validate_axioms();
        println!(
            "{:10} rank {} in Sym({}), {} coordinates, irreducible: {}",
            cone.name(),
            cone.rank(),
            cone.size(),
            cone.dim(),
            cone.is_irreducible()
        );
        println!("           {report}");
    }

    // Direct sums are valid structures but reducible.
    let sum = zoo::direct_sum(&zoo::sym_cone(2), &zoo::lorentz_cone(3))?;
    println!(
        "{:10} rank {} in Sym({}), irreducible: {}",
        sum.name(),
        sum.rank(),
        sum.size(),
        sum.is_irreducible()
    );

    // The mirrored Vinberg layout puts its off-diagonal blocks where the
    // product V_32 V_21 has no room to land, so axiom (V1) fails.
    let bad = zoo::vinberg_cone_mirrored();
    let report = bad.validate_axioms();
    println!("\n{} is intentionally broken:", bad.name());
    println!("{report}");
    assert!(!report.pass);

    // Structures round-trip through JSON, so a cone can be shipped to the
    // CLI as a file.
    let spec = cone_to_json(&cones[3])?;
    println!("\nvinberg as JSON spec ({} bytes)", spec.len());
    Ok(())
}

fn cone_to_json(cone: &homocone::ConeStructure) -> homocone::Result<String> {
    Ok(serde_json::to_string(&cone.to_spec())?)
}
