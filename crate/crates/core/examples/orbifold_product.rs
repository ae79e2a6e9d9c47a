//! Products in the symmetric orbifold algebra `(H*(A)^{⊗n}[S_n])^{S_n}`,
//! decomposed into components indexed by cycle type.

use kummer_perverse::orbifold::{NuClass, SymmetricOrbifold};
use kummer_perverse::partitions::Partition;

fn main() -> kummer_perverse::Result<()> {
    let orb = SymmetricOrbifold::abelian(2)?;
    println!("n = 2: {} invariant basis classes", orb.invariant_basis().len());

    let exceptional = orb.nu_class_of(&NuClass::monomial(Partition::new(vec![2])?, &[0]))?;
    let square = orb.hilbert_product(&exceptional, &exceptional);
    for (lambda, component) in &square {
        println!(
            "  (2)[1]^2, component {lambda}: {} terms, perversity {:?}",
            component.coords.len(),
            orb.perversity(component)
        );
    }

    let orb3 = SymmetricOrbifold::abelian(3)?;
    let three = orb3.nu_class_of(&NuClass::monomial(Partition::new(vec![3])?, &[0]))?;
    let cube = orb3.hilbert_product(&three, &three);
    println!("n = 3: (3)[1]^2 has a (3) component: {}", cube.contains_key(&Partition::new(vec![3])?));
    println!("n = 3: {} invariant basis classes", orb3.invariant_basis().len());
    Ok(())
}
