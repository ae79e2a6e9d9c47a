//! Torsion labels on `A^[[2]] × A`: the (1,1)-component of
//! `((2),σ) · ((2),τ)` survives only when `σ + τ = 0`.

use kummer_perverse::decomp::{kummer_product, KummerClass};
use kummer_perverse::orbifold::{NuClass, SymmetricOrbifold};
use kummer_perverse::partitions::Partition;
use kummer_perverse::surfaces::SurfaceModel;

fn main() -> kummer_perverse::Result<()> {
    let model = SurfaceModel::abelian();
    let orb = SymmetricOrbifold::abelian(2)?;
    let two = Partition::new(vec![2])?;
    let ones = Partition::ones(2);
    let labels = model.torsion.elements(2)?;
    let (mut alive, mut dead) = (0, 0);
    for s in &labels {
        for t in &labels {
            let a = KummerClass::new(&model.torsion, s.clone(), NuClass::monomial(two.clone(), &[0]))?;
            let b = KummerClass::new(&model.torsion, t.clone(), NuClass::monomial(two.clone(), &[0]))?;
            let product = kummer_product(&orb, &model.torsion, &a, &b)?;
            if product.keys().any(|(lambda, _)| *lambda == ones) {
                alive += 1;
            } else {
                dead += 1;
            }
        }
    }
    println!("label pairs: {}", labels.len() * labels.len());
    println!("(1,1) component survives: {alive}");
    println!("(1,1) component forced to zero: {dead}");
    Ok(())
}
