//! The cohomology of the abelian surface as a Frobenius algebra: axioms,
//! the diagonal class and the iterated coproduct.

use kummer_perverse::frobenius::FrobeniusAlgebra;

fn main() -> kummer_perverse::Result<()> {
    let alg = FrobeniusAlgebra::abelian_surface();
    let report = alg.validate();
    for check in &report.checks {
        println!("{:<22} checked {:>6}  failures {}", check.axiom, check.checked, check.failures);
    }
    println!("passed: {}", report.passed());

    let diagonal = alg.comultiply(&alg.unit(), 2)?;
    println!("\nDelta(1) has {} terms:", diagonal.terms.len());
    for (key, c) in diagonal.terms.iter().take(6) {
        println!("  {c:>3} {} (x) {}", alg.element(key[0]).name, alg.element(key[1]).name);
    }
    println!("  ...");
    println!("Delta^(3)(1) has {} terms", alg.comultiply(&alg.unit(), 3)?.terms.len());
    println!("euler class is zero: {}", alg.euler().terms.is_empty());

    let p2 = FrobeniusAlgebra::projective_plane();
    println!("\nP^2 validates: {}", p2.validate().passed());
    Ok(())
}
