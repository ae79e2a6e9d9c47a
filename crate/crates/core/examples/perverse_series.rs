//! Perverse Poincaré series of `A^[n]`, `A^[[n]] × A` and `A^[[n]]` for each
//! surface model.

use kummer_perverse::cli::{render_series, Format};
use kummer_perverse::decomp::{hilbert_pp, kummer_pp, kummer_quotient_pp};
use kummer_perverse::surfaces::{SurfaceCase, SurfaceModel};

fn main() -> kummer_perverse::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    for case in SurfaceCase::ALL {
        let model = SurfaceModel::new(case);
        print!("{}", render_series(&model.cohomology_pp(), "surface", case.slug(), 1, Format::Text));
        print!("{}", render_series(&hilbert_pp(&model, n)?, "hilbert", case.slug(), n, Format::Text));
        print!("{}", render_series(&kummer_pp(&model, n)?, "kummer", case.slug(), n, Format::Text));
        let quotient = kummer_quotient_pp(&model, n)?;
        print!("{}", render_series(&quotient, "kummer-quotient", case.slug(), n, Format::Text));
        println!("as a polynomial: {quotient}\n");
    }
    Ok(())
}
