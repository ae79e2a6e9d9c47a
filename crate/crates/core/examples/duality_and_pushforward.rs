//! Poincaré duality on `Aⁿ` and the perversity estimates for the diagonal
//! and for graphs of the negated summation map.

use kummer_perverse::decomp::{check_diagonal, check_duality, graph_pushforward};
use kummer_perverse::surfaces::{SurfaceModel, TensorClass};

fn main() -> kummer_perverse::Result<()> {
    let model = SurfaceModel::abelian();
    let anti = graph_pushforward(&model, &TensorClass::unit(1))?;
    println!("anti-diagonal in A^2: {} terms, perversity {:?}", anti.terms.len(), model.class_perversity(&anti));
    for n in 1..=3 {
        let duality = check_duality(&model, n)?;
        let diagonal = check_diagonal(&model, n)?;
        println!(
            "n = {n}: duality {} ({} checks), diagonal and graphs {} ({} checks)",
            if duality.passed() { "ok" } else { "FAILED" },
            duality.pairs_checked,
            if diagonal.passed() { "ok" } else { "FAILED" },
            diagonal.pairs_checked,
        );
    }
    Ok(())
}
