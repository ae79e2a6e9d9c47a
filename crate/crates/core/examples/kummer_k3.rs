//! The n = 2 generalized Kummer of an abelian surface is the Kummer K3:
//! Betti numbers 1, 0, 22, 0, 1, with hard Lefschetz symmetry in the
//! perverse grading.

use kummer_perverse::decomp::{kummer_pp, kummer_quotient_pp};
use kummer_perverse::surfaces::SurfaceModel;

fn main() -> kummer_perverse::Result<()> {
    let model = SurfaceModel::abelian();
    let product = kummer_pp(&model, 2)?;
    let k3 = kummer_quotient_pp(&model, 2)?;
    let row = |v: Vec<num_bigint::BigUint>| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    println!("A^[[2]] x A : {}", row(product.betti()));
    println!("A^[[2]]     : {}", row(k3.betti()));
    println!("bigraded    : {k3}");
    println!("lefschetz mismatches (r = 1): {:?}", k3.lefschetz_mismatches(1));
    Ok(())
}
