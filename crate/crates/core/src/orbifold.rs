//! Symmetric-orbifold model of `H*(A^[n])`.
//!
//! An element is a rational combination of labeled permutations `(π, a)`:
//! a permutation of `{1, …, n}` together with one algebra basis element per
//! cycle, read as a tensor over the cycles ordered by their smallest point.
//! The product follows the graph-defect rule: labels meeting in a joint orbit
//! are multiplied, multiplied by a power of the Euler class, and spread back
//! over the cycles of the product permutation by iterated comultiplication.
//! The cohomology of the Hilbert scheme is the 𝔖ₙ-invariant part.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_traits::{One, ToPrimitive, Zero};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusAlgebra, Index, Sparse};
use crate::partitions::{all_permutations, conjugacy_class_size, enumerate_partitions, orbits, Partition, Permutation};
use crate::Q;

/// Labels of the cycles of a permutation, in canonical cycle order.
pub type Labels = SmallVec<[Index; 6]>;
/// Index of a permutation in [`SymmetricGroup::permutation`].
pub type PermId = u32;

/// Terms `(π, L, c)` of a symmetrized basis class.
pub type Expansion = Vec<(PermId, Labels, Q)>;

/// Largest `n` for which full group tables are built.
pub const MAX_GROUP_DEGREE: usize = 6;
const PLAN_CACHE_DEGREE: usize = 5;

type Orbit = SmallVec<[u8; MAX_GROUP_DEGREE]>;

/// `true` when the Koszul sign of moving position `i` to `dest[i]` is −1.
fn koszul_negative(dest: &[u8], odd: impl Fn(usize) -> bool) -> bool {
    let mut flips = 0usize;
    for i in 0..dest.len() {
        if !odd(i) {
            continue;
        }
        for j in i + 1..dest.len() {
            if odd(j) && dest[i] > dest[j] {
                flips += 1;
            }
        }
    }
    flips % 2 == 1
}

#[derive(Debug, Clone)]
struct BlockPlan {
    inputs: usize,
    defect: usize,
    arity: usize,
}

/// Combinatorics of `(π, ·)·(ρ, ·)` that does not depend on the labels.
#[derive(Debug, Clone)]
struct ProductPlan {
    result: PermId,
    blocks: SmallVec<[BlockPlan; MAX_GROUP_DEGREE]>,
    /// Sources (x-labels first, then y-labels) grouped block by block.
    gather: SmallVec<[u8; 12]>,
    /// Inverse of `gather`.
    gather_dest: SmallVec<[u8; 12]>,
    /// Position in the block-by-block output to cycle index of `πρ`.
    scatter: SmallVec<[u8; MAX_GROUP_DEGREE]>,
}

/// Multiplication, orbit and conjugation tables for `𝔖ₙ`.
#[derive(Debug)]
pub struct SymmetricGroup {
    n: usize,
    perms: Vec<Permutation>,
    lookup: HashMap<Vec<usize>, PermId>,
    mul: Vec<PermId>,
    inv: Vec<PermId>,
    orbits: Vec<Vec<Orbit>>,
    orbit_of: Vec<[u8; MAX_GROUP_DEGREE]>,
    types: Vec<usize>,
    partitions: Vec<Partition>,
    canonical: Vec<PermId>,
    to_canonical: Vec<PermId>,
    plans: Vec<OnceLock<Arc<ProductPlan>>>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("the symmetric group needs n ≥ 1".into()));
        }
        if n > MAX_GROUP_DEGREE {
            return Err(Error::Infeasible { what: "symmetric group tables".into(), n, bound: MAX_GROUP_DEGREE });
        }
        let perms = all_permutations(n);
        let order = perms.len();
        let lookup: HashMap<Vec<usize>, PermId> =
            perms.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i as PermId)).collect();
        let id_of = |p: &Permutation| lookup[p.images()];
        let mut mul = Vec::with_capacity(order * order);
        for a in &perms {
            for b in &perms {
                mul.push(id_of(&a.compose(b).expect("same degree")));
            }
        }
        let inv = perms.iter().map(|p| id_of(&p.inverse())).collect();
        let partitions = enumerate_partitions(n)?;
        let mut orbit_lists = Vec::with_capacity(order);
        let mut orbit_of = Vec::with_capacity(order);
        let mut types = Vec::with_capacity(order);
        for p in &perms {
            let blocks: Vec<Orbit> = orbits(p).into_iter().map(|b| b.into_iter().map(|x| x as u8).collect()).collect();
            let mut lookup_row = [0u8; MAX_GROUP_DEGREE];
            for (k, b) in blocks.iter().enumerate() {
                for &x in b {
                    lookup_row[x as usize] = k as u8;
                }
            }
            orbit_lists.push(blocks);
            orbit_of.push(lookup_row);
            let ty = p.cycle_type();
            types.push(partitions.iter().position(|q| *q == ty).expect("cycle type is a partition of n"));
        }
        let canonical: Vec<PermId> = partitions.iter().map(|nu| id_of(&nu.canonical_permutation())).collect();
        let to_canonical =
            perms.iter().zip(&types).map(|(p, &ty)| id_of(&Self::conjugator(p, &partitions[ty]))).collect();
        let plans =
            if n <= PLAN_CACHE_DEGREE { (0..order * order).map(|_| OnceLock::new()).collect() } else { Vec::new() };
        Ok(Self {
            n,
            perms,
            lookup,
            mul,
            inv,
            orbits: orbit_lists,
            orbit_of,
            types,
            partitions,
            canonical,
            to_canonical,
            plans,
        })
    }

    /// A permutation `σ` with `σ τ σ⁻¹` the canonical permutation of type `ν`.
    fn conjugator(tau: &Permutation, nu: &Partition) -> Permutation {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for block in orbits(tau) {
            // walk the cycle starting from its smallest point
            let mut cycle = vec![block[0]];
            let mut x = tau.apply(block[0]);
            while x != block[0] {
                cycle.push(x);
                x = tau.apply(x);
            }
            cycles.push(cycle);
        }
        cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut images = vec![0; tau.degree()];
        let mut start = 0;
        for (cycle, &part) in cycles.iter().zip(nu.parts()) {
            debug_assert_eq!(cycle.len(), part);
            for (k, &x) in cycle.iter().enumerate() {
                images[x] = start + k;
            }
            start += part;
        }
        Permutation::from_images(images).expect("bijection")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn identity(&self) -> PermId {
        0
    }

    pub fn permutation(&self, id: PermId) -> &Permutation {
        &self.perms[id as usize]
    }

    pub fn id_of(&self, p: &Permutation) -> Option<PermId> {
        self.lookup.get(p.images()).copied()
    }

    pub fn compose(&self, a: PermId, b: PermId) -> PermId {
        self.mul[a as usize * self.order() + b as usize]
    }

    pub fn inverse(&self, a: PermId) -> PermId {
        self.inv[a as usize]
    }

    /// `σ τ σ⁻¹`.
    pub fn conjugate(&self, sigma: PermId, tau: PermId) -> PermId {
        self.compose(self.compose(sigma, tau), self.inverse(sigma))
    }

    /// Cycles of a permutation as sorted blocks ordered by smallest point.
    pub fn orbits(&self, a: PermId) -> &[Orbit] {
        &self.orbits[a as usize]
    }

    pub fn orbit_count(&self, a: PermId) -> usize {
        self.orbits[a as usize].len()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Index into [`Self::partitions`] of the cycle type.
    pub fn type_index(&self, a: PermId) -> usize {
        self.types[a as usize]
    }

    pub fn cycle_type(&self, a: PermId) -> &Partition {
        &self.partitions[self.types[a as usize]]
    }

    pub fn partition_index(&self, nu: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == nu)
    }

    /// The canonical permutation of the given cycle type.
    pub fn canonical(&self, type_index: usize) -> PermId {
        self.canonical[type_index]
    }

    /// A fixed `σ₀` conjugating `a` to the canonical permutation of its type.
    pub fn to_canonical(&self, a: PermId) -> PermId {
        self.to_canonical[a as usize]
    }

    /// Image under `σ` of the cycles of `τ`: entry `k` is the index of the
    /// cycle of `στσ⁻¹` that receives cycle `k` of `τ`.
    fn conjugation_map(&self, sigma: PermId, tau: PermId) -> (PermId, Orbit) {
        let target = self.conjugate(sigma, tau);
        let s = &self.perms[sigma as usize];
        let dest = self.orbits[tau as usize]
            .iter()
            .map(|block| self.orbit_of[target as usize][s.apply(block[0] as usize)])
            .collect();
        (target, dest)
    }

    fn plan(&self, a: PermId, b: PermId) -> Arc<ProductPlan> {
        match self.plans.get(a as usize * self.order() + b as usize) {
            Some(cell) => cell.get_or_init(|| Arc::new(self.build_plan(a, b))).clone(),
            None => Arc::new(self.build_plan(a, b)),
        }
    }

    fn build_plan(&self, a: PermId, b: PermId) -> ProductPlan {
        let result = self.compose(a, b);
        let (pa, pb) = (&self.perms[a as usize], &self.perms[b as usize]);
        let joint = crate::partitions::joint_orbits(pa, pb).expect("same degree");
        let mut plan = ProductPlan {
            result,
            blocks: SmallVec::new(),
            gather: SmallVec::new(),
            gather_dest: SmallVec::new(),
            scatter: SmallVec::new(),
        };
        let p = self.orbit_count(a);
        let in_block = |orbits: &[Orbit], block: &[usize]| -> Vec<usize> {
            (0..orbits.len()).filter(|&k| block.contains(&(orbits[k][0] as usize))).collect()
        };
        for block in &joint {
            let xs = in_block(&self.orbits[a as usize], block);
            let ys = in_block(&self.orbits[b as usize], block);
            let zs = in_block(&self.orbits[result as usize], block);
            let twice = block.len() + 2 - xs.len() - ys.len() - zs.len();
            debug_assert!(twice % 2 == 0, "graph defect is an integer");
            plan.blocks.push(BlockPlan { inputs: xs.len() + ys.len(), defect: twice / 2, arity: zs.len() });
            plan.gather.extend(xs.iter().map(|&k| k as u8));
            plan.gather.extend(ys.iter().map(|&k| (p + k) as u8));
            plan.scatter.extend(zs.iter().map(|&k| k as u8));
        }
        let mut dest: SmallVec<[u8; 12]> = smallvec![0; plan.gather.len()];
        for (t, &src) in plan.gather.iter().enumerate() {
            dest[src as usize] = t as u8;
        }
        plan.gather_dest = dest;
        plan
    }
}

/// A single permutation with one label per cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPermutation {
    pub perm: Permutation,
    pub labels: Vec<Index>,
    pub coefficient: Q,
}

impl LabeledPermutation {
    pub fn new(perm: Permutation, labels: Vec<Index>) -> Self {
        Self { perm, labels, coefficient: Q::one() }
    }
}

/// Rational combination of labeled permutations, keyed by permutation id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrbifoldElement {
    pub terms: BTreeMap<(PermId, Labels), Q>,
}

impl OrbifoldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&mut self, perm: PermId, labels: Labels, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (perm, labels);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Q) -> Self {
        let mut out = Self::zero();
        for ((p, l), v) in &self.terms {
            out.add(*p, l.clone(), v * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((p, l), v) in &other.terms {
            out.add(*p, l.clone(), *v);
        }
        out
    }
}

/// An 𝔖ₙ-invariant element.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantClass(OrbifoldElement);

impl InvariantClass {
    pub fn element(&self) -> &OrbifoldElement {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, c: Q) -> Self {
        Self(self.0.scale(c))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self(self.0.plus(&other.0))
    }
}

/// A class on `A^(ν)`: coordinates over canonical labelings `L`, standing
/// for `Σ k_L · sym(π_ν, L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuClass {
    pub nu: Partition,
    pub coords: BTreeMap<Labels, Q>,
}

impl NuClass {
    pub fn zero(nu: Partition) -> Self {
        Self { nu, coords: BTreeMap::new() }
    }

    pub fn monomial(nu: Partition, labels: &[Index]) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(labels.into(), Q::one());
        Self { nu, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn add(&mut self, labels: Labels, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coords.entry(labels.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coords.remove(&labels);
        }
    }
}

/// A basis class of the invariant ring: `sym(π_ν, L)` for a canonical `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisClass {
    pub nu: Partition,
    pub type_index: usize,
    pub labels: Labels,
    pub degree: u32,
    pub perversity: u32,
    pub odd: bool,
}

/// The orbifold ring for a fixed Frobenius algebra and `n`.
#[derive(Debug)]
pub struct SymmetricOrbifold {
    algebra: FrobeniusAlgebra,
    group: SymmetricGroup,
    basis: Vec<BasisClass>,
    expansions: Vec<OnceLock<Arc<Expansion>>>,
}

impl SymmetricOrbifold {
    pub fn new(algebra: FrobeniusAlgebra, n: usize) -> Result<Self> {
        algebra.coproduct_table(2)?;
        let group = SymmetricGroup::new(n)?;
        let mut out = Self { algebra, group, basis: Vec::new(), expansions: Vec::new() };
        out.basis = out.enumerate_basis();
        out.expansions = (0..out.basis.len()).map(|_| OnceLock::new()).collect();
        Ok(out)
    }

    pub fn abelian(n: usize) -> Result<Self> {
        Self::new(FrobeniusAlgebra::abelian_surface(), n)
    }

    pub fn n(&self) -> usize {
        self.group.degree()
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &SymmetricGroup {
        &self.group
    }

    fn class_size(&self, type_index: usize) -> Q {
        let size = conjugacy_class_size(&self.group.partitions[type_index]);
        Q::from(size.to_i64().expect("class size fits in i64"))
    }

    fn labels_odd(&self, labels: &[Index]) -> bool {
        labels.iter().filter(|&&l| self.algebra.is_odd(l)).count() % 2 == 1
    }

    /// Cohomological degree `Σ deg + 2(n − #cycles)`.
    pub fn term_degree(&self, perm: PermId, labels: &[Index]) -> u32 {
        labels.iter().map(|&l| self.algebra.degree(l)).sum::<u32>()
            + 2 * (self.n() - self.group.orbit_count(perm)) as u32
    }

    /// Perversity `Σ p + n − #cycles`.
    pub fn term_perversity(&self, perm: PermId, labels: &[Index]) -> u32 {
        labels.iter().map(|&l| self.algebra.perversity(l)).sum::<u32>()
            + (self.n() - self.group.orbit_count(perm)) as u32
    }

    /// Converts a labeled permutation into an element.
    pub fn labeled(&self, x: &LabeledPermutation) -> Result<OrbifoldElement> {
        let id = self.group.id_of(&x.perm).ok_or_else(|| {
            Error::Dimension(format!("permutation on {} points in a model with n = {}", x.perm.degree(), self.n()))
        })?;
        if x.labels.len() != self.group.orbit_count(id) {
            return Err(Error::Shape(format!("{} labels for {} cycles", x.labels.len(), self.group.orbit_count(id))));
        }
        if let Some(&bad) = x.labels.iter().find(|&&l| l as usize >= self.algebra.dim()) {
            return Err(Error::Shape(format!("label {bad} outside the algebra basis")));
        }
        let mut out = OrbifoldElement::zero();
        out.add(id, x.labels.iter().copied().collect(), x.coefficient);
        Ok(out)
    }

    fn multiply_terms(
        &self,
        a: PermId,
        xl: &[Index],
        b: PermId,
        yl: &[Index],
        coeff: Q,
        sink: &mut impl FnMut(PermId, Labels, Q),
    ) {
        let alg = &self.algebra;
        let plan = self.group.plan(a, b);
        let p = xl.len();
        let source = |i: usize| if i < p { xl[i] } else { yl[i - p] };
        let start = if koszul_negative(&plan.gather_dest, |i| alg.is_odd(source(i))) { -coeff } else { coeff };
        let mut partial: Vec<(Labels, Q)> = vec![(Labels::new(), start)];
        let mut offset = 0;
        for block in &plan.blocks {
            let mut prod: Sparse = smallvec![(alg.unit_index(), Q::one())];
            for t in offset..offset + block.inputs {
                prod = multiply_sparse(alg, &prod, &[(source(plan.gather[t] as usize), Q::one())]);
                if prod.is_empty() {
                    return;
                }
            }
            offset += block.inputs;
            for _ in 0..block.defect {
                let euler: Vec<(Index, Q)> = alg.euler().terms.iter().map(|(&i, &c)| (i, c)).collect();
                prod = multiply_sparse(alg, &prod, &euler);
                if prod.is_empty() {
                    return;
                }
            }
            let table = alg.coproduct_table(block.arity).expect("nondegenerate algebra");
            let mut next = Vec::with_capacity(partial.len() * prod.len());
            for (key, c) in &partial {
                for &(u, cu) in &prod {
                    for (tail, v) in &table[u as usize] {
                        let mut k = key.clone();
                        k.extend_from_slice(tail);
                        next.push((k, c * cu * v));
                    }
                }
            }
            partial = next;
        }
        for (concat, c) in partial {
            let mut labels: Labels = smallvec![0; concat.len()];
            for (t, &lab) in concat.iter().enumerate() {
                labels[plan.scatter[t] as usize] = lab;
            }
            let neg = koszul_negative(&plan.scatter, |t| alg.is_odd(concat[t]));
            sink(plan.result, labels, if neg { -c } else { c });
        }
    }

    /// Product of two labeled permutations.
    pub fn multiply_labeled(&self, x: &LabeledPermutation, y: &LabeledPermutation) -> Result<OrbifoldElement> {
        Ok(self.multiply(&self.labeled(x)?, &self.labeled(y)?))
    }

    /// Bilinear product of arbitrary elements.
    pub fn multiply(&self, x: &OrbifoldElement, y: &OrbifoldElement) -> OrbifoldElement {
        let mut out = OrbifoldElement::zero();
        for ((a, xl), cx) in &x.terms {
            for ((b, yl), cy) in &y.terms {
                self.multiply_terms(*a, xl, *b, yl, cx * cy, &mut |p, l, c| out.add(p, l, c));
            }
        }
        out
    }

    fn conjugate_term(&self, sigma: PermId, tau: PermId, labels: &[Index]) -> (PermId, Labels, bool) {
        let (target, dest) = self.group.conjugation_map(sigma, tau);
        let mut out: Labels = smallvec![0; labels.len()];
        for (k, &d) in dest.iter().enumerate() {
            out[d as usize] = labels[k];
        }
        let neg = koszul_negative(&dest, |k| self.algebra.is_odd(labels[k]));
        (target, out, neg)
    }

    /// `σ·(π, a) = (σπσ⁻¹, a∘σ⁻¹)` with the Koszul sign of reordering cycles.
    pub fn conjugate(&self, sigma: PermId, x: &OrbifoldElement) -> OrbifoldElement {
        let mut out = OrbifoldElement::zero();
        for ((tau, labels), c) in &x.terms {
            let (target, l, neg) = self.conjugate_term(sigma, *tau, labels);
            out.add(target, l, if neg { -c } else { *c });
        }
        out
    }

    /// Average of all conjugates.
    pub fn symmetrize(&self, x: &OrbifoldElement) -> InvariantClass {
        let mut out = OrbifoldElement::zero();
        for sigma in 0..self.group.order() as PermId {
            for ((tau, labels), c) in &x.terms {
                let (target, l, neg) = self.conjugate_term(sigma, *tau, labels);
                out.add(target, l, if neg { -c } else { *c });
            }
        }
        InvariantClass(out.scale(Q::new(1, self.group.order() as i64)))
    }

    /// Whether every adjacent transposition fixes `x`.
    pub fn is_invariant(&self, x: &OrbifoldElement) -> bool {
        (0..self.n() - 1).all(|i| {
            let mut images: Vec<usize> = (0..self.n()).collect();
            images.swap(i, i + 1);
            let s = self.group.id_of(&Permutation::from_images(images).expect("transposition")).expect("in group");
            self.conjugate(s, x) == *x
        })
    }

    /// Wraps an element already known to be invariant.
    pub fn assume_invariant(&self, x: OrbifoldElement) -> Result<InvariantClass> {
        if self.is_invariant(&x) {
            Ok(InvariantClass(x))
        } else {
            Err(Error::Domain("element is not conjugation invariant".into()))
        }
    }

    /// Sorts labels within runs of equal cycle lengths of the canonical
    /// permutation. `None` when a repeated odd label forces the average to 0;
    /// otherwise the sorted labels and whether the sign is −1.
    pub fn canonicalize(&self, type_index: usize, labels: &[Index]) -> Option<(Labels, bool)> {
        let alg = &self.algebra;
        let mut out: Labels = labels.iter().copied().collect();
        let mut neg = false;
        let mut start = 0;
        for (_, len) in self.group.partitions[type_index].runs() {
            let run = &labels[start..start + len];
            let mut order: SmallVec<[usize; MAX_GROUP_DEGREE]> = (0..len).collect();
            order.sort_by_key(|&i| run[i]);
            for w in order.windows(2) {
                if run[w[0]] == run[w[1]] && alg.is_odd(run[w[0]]) {
                    return None;
                }
            }
            let mut dest: SmallVec<[u8; MAX_GROUP_DEGREE]> = smallvec![0; len];
            for (t, &i) in order.iter().enumerate() {
                dest[i] = t as u8;
                out[start + t] = run[i];
            }
            neg ^= koszul_negative(&dest, |i| alg.is_odd(run[i]));
            start += len;
        }
        Some((out, neg))
    }

    fn enumerate_basis(&self) -> Vec<BasisClass> {
        let dim = self.algebra.dim() as Index;
        let n = self.n() as u32;
        let mut out = Vec::new();
        for (ty, nu) in self.group.partitions.iter().enumerate() {
            let mut per_run: Vec<Vec<Labels>> = Vec::new();
            for (_, len) in nu.runs() {
                let mut seqs = Vec::new();
                let mut current = Labels::new();
                self.sorted_sequences(len, 0, dim, &mut current, &mut seqs);
                per_run.push(seqs);
            }
            let mut combos: Vec<Labels> = vec![Labels::new()];
            for seqs in &per_run {
                combos = combos
                    .iter()
                    .flat_map(|head| {
                        seqs.iter().map(move |s| {
                            let mut l = head.clone();
                            l.extend_from_slice(s);
                            l
                        })
                    })
                    .collect();
            }
            let shift = n - nu.len() as u32;
            for labels in combos {
                out.push(BasisClass {
                    nu: nu.clone(),
                    type_index: ty,
                    degree: labels.iter().map(|&l| self.algebra.degree(l)).sum::<u32>() + 2 * shift,
                    perversity: labels.iter().map(|&l| self.algebra.perversity(l)).sum::<u32>() + shift,
                    odd: self.labels_odd(&labels),
                    labels,
                });
            }
        }
        out
    }

    /// Weakly increasing sequences with no repeated odd entry.
    fn sorted_sequences(&self, len: usize, from: Index, dim: Index, current: &mut Labels, out: &mut Vec<Labels>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for l in from..dim {
            current.push(l);
            let next = if self.algebra.is_odd(l) { l + 1 } else { l };
            self.sorted_sequences(len, next, dim, current, out);
            current.pop();
        }
    }

    /// The invariant basis, ordered by cycle type then labels.
    pub fn invariant_basis(&self) -> &[BasisClass] {
        &self.basis
    }

    /// Full expansion of a basis class over all conjugates.
    pub fn basis_expansion(&self, i: usize) -> Arc<Expansion> {
        self.expansions[i]
            .get_or_init(|| {
                let b = &self.basis[i];
                let mut x = OrbifoldElement::zero();
                x.add(self.group.canonical(b.type_index), b.labels.clone(), Q::one());
                let sym = self.symmetrize(&x);
                Arc::new(sym.0.terms.into_iter().map(|((p, l), c)| (p, l, c)).collect())
            })
            .clone()
    }

    pub fn basis_element(&self, i: usize) -> InvariantClass {
        let mut out = OrbifoldElement::zero();
        for (p, l, c) in self.basis_expansion(i).iter() {
            out.add(*p, l.clone(), *c);
        }
        InvariantClass(out)
    }

    /// `α_ν = sym(π_ν, label)` for a label on `A^(ν)` given in monomials.
    pub fn nu_class(&self, nu: &Partition, label: &BTreeMap<Labels, Q>) -> Result<InvariantClass> {
        let ty = self.partition_index(nu)?;
        let perm = self.group.canonical(ty);
        let mut x = OrbifoldElement::zero();
        for (labels, c) in label {
            if labels.len() != nu.len() {
                return Err(Error::Shape(format!("{} labels for partition {nu}", labels.len())));
            }
            if labels.iter().any(|&l| l as usize >= self.algebra.dim()) {
                return Err(Error::Shape("label outside the algebra basis".into()));
            }
            x.add(perm, labels.clone(), *c);
        }
        Ok(self.symmetrize(&x))
    }

    pub fn nu_class_of(&self, class: &NuClass) -> Result<InvariantClass> {
        self.nu_class(&class.nu, &class.coords)
    }

    fn partition_index(&self, nu: &Partition) -> Result<usize> {
        self.group
            .partition_index(nu)
            .ok_or_else(|| Error::Dimension(format!("partition {nu} does not partition n = {}", self.n())))
    }

    /// Component of `x` on permutations of type `λ`, in canonical coordinates.
    pub fn project_to_nu(&self, x: &InvariantClass, lambda: &Partition) -> Result<NuClass> {
        let ty = self.partition_index(lambda)?;
        let perm = self.group.canonical(ty);
        let size = self.class_size(ty);
        let mut out = NuClass::zero(lambda.clone());
        for ((p, labels), c) in x.0.terms.range((perm, Labels::new())..) {
            if *p != perm {
                break;
            }
            if let Some((canon, neg)) = self.canonicalize(ty, labels) {
                out.add(canon, if neg { -(c * size) } else { c * size });
            }
        }
        Ok(out)
    }

    /// All nonzero components.
    pub fn decompose(&self, x: &InvariantClass) -> BTreeMap<Partition, NuClass> {
        self.group
            .partitions
            .iter()
            .filter_map(|lambda| {
                let c = self.project_to_nu(x, lambda).expect("partition of n");
                (!c.is_zero()).then(|| (lambda.clone(), c))
            })
            .collect()
    }

    /// Product of invariant classes, decomposed by cycle type.
    pub fn hilbert_product(&self, a: &InvariantClass, b: &InvariantClass) -> BTreeMap<Partition, NuClass> {
        self.decompose(&InvariantClass(self.multiply(&a.0, &b.0)))
    }

    pub fn product(&self, a: &InvariantClass, b: &InvariantClass) -> InvariantClass {
        InvariantClass(self.multiply(&a.0, &b.0))
    }

    /// Product of two basis classes via `α·β = sym((π_ν, L)·β)`, without
    /// expanding `α`. Keys are partition indices.
    pub fn basis_product(&self, i: usize, j: usize) -> BTreeMap<usize, NuClass> {
        let bi = &self.basis[i];
        let x_perm = self.group.canonical(bi.type_index);
        let mut acc: BTreeMap<usize, NuClass> = BTreeMap::new();
        for (tau, labels, c) in self.basis_expansion(j).iter() {
            self.multiply_terms(x_perm, &bi.labels, *tau, labels, *c, &mut |perm, l, v| {
                let ty = self.group.type_index(perm);
                let (target, moved, neg1) = self.conjugate_term(self.group.to_canonical(perm), perm, &l);
                debug_assert_eq!(target, self.group.canonical(ty));
                if let Some((canon, neg2)) = self.canonicalize(ty, &moved) {
                    acc.entry(ty)
                        .or_insert_with(|| NuClass::zero(self.group.partitions[ty].clone()))
                        .add(canon, if neg1 ^ neg2 { -v } else { v });
                }
            });
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Perversities of the nonzero coordinates of a class on `A^(ν)`.
    pub fn perversities(&self, class: &NuClass) -> BTreeSet<u32> {
        let shift = (self.n() - class.nu.len()) as u32;
        class.coords.keys().map(|l| l.iter().map(|&i| self.algebra.perversity(i)).sum::<u32>() + shift).collect()
    }

    /// Perversity of a class on `A^(ν)` as a class of `A^[n]`; `None` for zero.
    pub fn perversity(&self, class: &NuClass) -> Option<u32> {
        self.perversities(class).last().copied()
    }

    /// Degree and parity of a homogeneous element; `None` for zero or mixed.
    pub fn homogeneous_degree(&self, x: &OrbifoldElement) -> Option<u32> {
        let mut degrees = x.terms.keys().map(|(p, l)| self.term_degree(*p, l));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_perversity(&self, x: &OrbifoldElement) -> Option<u32> {
        let mut values = x.terms.keys().map(|(p, l)| self.term_perversity(*p, l));
        let first = values.next()?;
        values.all(|d| d == first).then_some(first)
    }
}

fn multiply_sparse(alg: &FrobeniusAlgebra, a: &[(Index, Q)], b: &[(Index, Q)]) -> Sparse {
    let mut out: Sparse = Sparse::new();
    for &(i, x) in a {
        for &(j, y) in b {
            for &(k, c) in alg.multiply_basis(i, j) {
                let v = x * y * c;
                match out.iter_mut().find(|(idx, _)| *idx == k) {
                    Some((_, slot)) => *slot += v,
                    None => out.push((k, v)),
                }
            }
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}
