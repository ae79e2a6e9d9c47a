//! Partitions of n with their cycle-type data and the torsion counts that
//! index the Kummer decomposition.

use kummer_perverse::partitions::{conjugacy_class_size, enumerate_partitions, Permutation};
use kummer_perverse::surfaces::SurfaceModel;

fn main() -> kummer_perverse::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let model = SurfaceModel::abelian();
    println!("{:<12} {:>3} {:>3} {:>8} {:>6}", "nu", "l", "gcd", "|A[gcd]|", "class");
    for nu in enumerate_partitions(n)? {
        println!(
            "{:<12} {:>3} {:>3} {:>8} {:>6}",
            nu.to_string(),
            nu.len(),
            nu.gcd(),
            model.torsion_count(nu.gcd() as u32)?,
            conjugacy_class_size(&nu)
        );
    }

    let pi = Permutation::from_cycles(3, &[&[1, 2]])?;
    let rho = Permutation::from_cycles(3, &[&[2, 3]])?;
    let prod = pi.compose(&rho)?;
    println!("\n(1 2)(2 3) has cycle type {}", prod.cycle_type());
    Ok(())
}
