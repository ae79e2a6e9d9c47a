//! Exhaustive multiplicativity and strong-splitting sweep over torsion-labeled
//! basis pairs of `A^[[n]] × A`.
//!
//! ```text
//! cargo run --release --example multiplicativity_sweep -- 3
//! ```

use kummer_perverse::decomp::{check_multiplicativity, check_strong_splitting, CheckOptions};
use kummer_perverse::surfaces::SurfaceModel;

fn main() -> kummer_perverse::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let model = SurfaceModel::abelian();
    for report in [
        check_multiplicativity(&model, n, CheckOptions::default())?,
        check_strong_splitting(&model, n, CheckOptions::default())?,
    ] {
        println!(
            "{:<18} n={} pairs={} components={} vanished-by-torsion={} violations={} ({} ms)",
            report.check,
            report.n,
            report.pairs_checked,
            report.components_checked,
            report.components_vanished,
            report.violation_count,
            report.elapsed_ms
        );
    }
    Ok(())
}
