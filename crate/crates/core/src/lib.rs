//! Exact computer algebra for perverse filtrations on Hilbert schemes of
//! points and generalized Kummer varieties of fibered group surfaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`partitions`]: partitions of `n`, permutations, orbits.
//! * [`bigraded`]: two-variable dimension series `Σ dim Gr_p H^d · q^d t^p`
//!   and super-symmetric powers.
//! * [`surfaces`]: the three fibered group-surface models, their exterior
//!   cohomology rings, torsion points, duality and the summation map.
//! * [`frobenius`]: signed graded Frobenius algebras (product, counit,
//!   comultiplication, Euler class).
//! * [`orbifold`]: the symmetric-orbifold ring model of `H*(A^[n])` and the
//!   dictionary to partition-indexed classes.
//! * [`decomp`]: Hilbert and Kummer series, torsion-labelled Kummer classes
//!   and the theorem-checking harness.
//! * [`cli`]: the `kummer-perverse` command line.
//!
//! ## Examples
//!
//! ```text
//! examples/
//! ├── partitions_table.rs          # partitions, gcds, torsion counts
//! ├── perverse_series.rs           # series tables for every model
//! ├── kummer_k3.rs                 # n = 2 Kummer: Betti 1 0 22 0 1
//! ├── frobenius_algebra.rs         # axioms, diagonal, iterated coproduct
//! ├── orbifold_product.rs          # products split by cycle type
//! ├── torsion_gcd_rule.rs          # label pairs killed by the gcd rule
//! ├── multiplicativity_sweep.rs    # exhaustive perversity sweeps
//! └── duality_and_pushforward.rs   # duality, diagonal and graph estimates
//! ```
//!
//! ```bash
//! cargo run --release --example multiplicativity_sweep -- 3
//! ```

pub mod bigraded;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod frobenius;
pub mod linalg;
pub mod orbifold;
pub mod partitions;
pub mod surfaces;

pub use error::{Error, Result};

/// Exact rational coefficients used by every algebra-level computation.
///
/// Overflow checks are enabled in every build profile of this workspace, so
/// an out-of-range intermediate panics instead of silently wrapping.
pub type Q = num_rational::Rational64;
