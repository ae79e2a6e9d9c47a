//! Partitions of an integer and permutations of `{1, …, n}`.
//!
//! Partitions are stored with weakly decreasing parts. Permutations are stored
//! 0-based internally and displayed 1-based in cycle notation.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition `ν = (ν₁ ≥ ν₂ ≥ … ≥ ν_l > 0)` of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyInput("partition with no parts"));
        }
        if parts.contains(&0) {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// The partition `(1, 1, …, 1)` of `n`.
    pub fn ones(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `l(ν)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0, |g, &p| g.gcd(&p))
    }

    /// Multiplicities `a₁, …, aₙ` where `aᵢ` counts the parts equal to `i`.
    /// Index 0 of the returned vector is unused and always zero.
    pub fn multiplicities(&self) -> Vec<usize> {
        let n = self.size();
        let mut a = vec![0; n + 1];
        for &p in &self.parts {
            a[p] += 1;
        }
        a
    }

    /// Lengths of the runs of equal parts, in the order the parts appear.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((part, count)) if *part == p => *count += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// The canonical permutation of this cycle type: cycles on consecutive
    /// blocks, in the order of the parts.
    pub fn canonical_permutation(&self) -> Permutation {
        let n = self.size();
        let mut images = vec![0; n];
        let mut start = 0;
        for &p in &self.parts {
            for k in 0..p {
                images[start + k] = start + (k + 1) % p;
            }
            start += p;
        }
        Permutation { images }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` in reverse-lexicographic order on parts.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::EmptyInput("cannot enumerate partitions of 0"));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fill(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

/// Size of the conjugacy class of cycle type `ν` in `𝔖ₙ`:
/// `n! / ∏ᵢ (i^{aᵢ} · aᵢ!)`.
pub fn conjugacy_class_size(nu: &Partition) -> BigUint {
    let n = nu.size();
    let mut numerator = factorial(n);
    let a = nu.multiplicities();
    let mut denominator = BigUint::one();
    for (i, &ai) in a.iter().enumerate().skip(1) {
        denominator *= BigUint::from(i).pow(ai as u32) * factorial(ai);
    }
    numerator /= denominator;
    numerator
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// A bijection of `{0, …, n-1}`; composition is `(πρ)(x) = π(ρ(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// Builds from a 0-based image list, checking it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Domain(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Builds from 1-based cycles, e.g. `[[1, 2, 3], [4, 5]]` on `n = 5`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || touched[x - 1] {
                    return Err(Error::Domain(format!("bad cycle {cycle:?} on {n} points")));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::Dimension(format!(
                "composing permutations on {} and {} points",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    /// `σ π σ⁻¹`.
    pub fn conjugate_by(&self, sigma: &Permutation) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[sigma.images[x]] = sigma.images[y];
        }
        Permutation { images }
    }

    pub fn cycle_type(&self) -> Partition {
        let parts: Vec<usize> = orbits(self).iter().map(Vec::len).collect();
        Partition::new(parts).unwrap_or_else(|_| Partition { parts: Vec::new() })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = orbits(self).into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for cycle in cycles {
            // walk the cycle from its smallest element
            let mut x = cycle[0];
            write!(f, "(")?;
            for k in 0..cycle.len() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                x = self.images[x];
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The cycles of `π` as sorted blocks, ordered by smallest element.
pub fn orbits(pi: &Permutation) -> Vec<Vec<usize>> {
    let n = pi.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut block = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            block.push(x);
            x = pi.images[x];
        }
        block.sort_unstable();
        out.push(block);
    }
    out
}

/// Orbits of the subgroup generated by `π` and `ρ`, as sorted blocks ordered
/// by smallest element.
pub fn joint_orbits(pi: &Permutation, rho: &Permutation) -> Result<Vec<Vec<usize>>> {
    let n = pi.degree();
    if rho.degree() != n {
        return Err(Error::Dimension(format!("permutations on {} and {} points", n, rho.degree())));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for x in 0..n {
        for y in [pi.images[x], rho.images[x]] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_to_block = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if root_to_block[r] == usize::MAX {
            root_to_block[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_to_block[r]].push(x);
    }
    Ok(blocks)
}

/// All permutations of `{0, …, n-1}` in lexicographic order of images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation { images: current.clone() }];
    while let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) {
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(Permutation { images: current.clone() });
    }
    out
}
