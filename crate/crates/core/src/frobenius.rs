//! Graded Frobenius algebras with Koszul signs.
//!
//! An algebra is given by a homogeneous basis, sparse structure constants, a
//! counit and an Euler class. The pairing is `⟨a, b⟩ = ε(ab)`, tensors are
//! paired by `⟨x⊗y, z⊗w⟩ = (−1)^{|y||z|}⟨x,z⟩⟨y,w⟩`, and the comultiplication
//! is the adjoint of the product for that pairing.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::linalg;
use crate::surfaces::{wedge_sign, Mask, SurfaceModel};
use crate::Q;

/// Index of a basis element.
pub type Index = u16;
/// One basis element per tensor factor.
pub type TensorKey = SmallVec<[Index; 4]>;
/// Sparse linear combination of basis elements.
pub type Sparse = SmallVec<[(Index, Q); 1]>;
/// `Δ^{(k)}` of every basis element, as sparse tensor lists.
pub type CoproductTable = Vec<Vec<(TensorKey, Q)>>;

const CACHED_ARITY: usize = 8;
const WITNESS_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
    pub odd: bool,
    pub perversity: u32,
}

/// Rational combination of basis elements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraClass {
    pub terms: BTreeMap<Index, Q>,
}

impl AlgebraClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: Index) -> Self {
        Self::from_terms([(i, Q::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Index, Q)>) -> Self {
        let mut out = Self::zero();
        for (i, c) in terms {
            out.add(i, c);
        }
        out
    }

    pub fn add(&mut self, i: Index, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(&i, &v)| (i, v * c)))
    }
}

/// Rational combination of tensor monomials `b_{i₁} ⊗ … ⊗ b_{i_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    pub terms: BTreeMap<TensorKey, Q>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(key: &[Index]) -> Self {
        let mut out = Self::zero();
        out.add(key.into(), Q::one());
        out
    }

    pub fn add(&mut self, key: TensorKey, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct FrobeniusAlgebra {
    basis: Vec<BasisElement>,
    products: Vec<Sparse>,
    counit: Vec<Q>,
    unit: Index,
    euler: AlgebraClass,
    coproducts: Vec<OnceLock<Result<Arc<CoproductTable>>>>,
}

impl FrobeniusAlgebra {
    /// Builds an algebra from structure constants `b_i b_j = Σ c_k b_k`;
    /// missing products are zero.
    pub fn new(
        basis: Vec<BasisElement>,
        products: impl IntoIterator<Item = ((Index, Index), Vec<(Index, Q)>)>,
        counit: Vec<Q>,
        unit: Index,
        euler: AlgebraClass,
    ) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::EmptyInput("algebra basis"));
        }
        if dim > Index::MAX as usize {
            return Err(Error::Shape(format!("{dim} basis elements exceed the index range")));
        }
        if counit.len() != dim {
            return Err(Error::Shape(format!("counit has {} entries for {dim} basis elements", counit.len())));
        }
        let in_range = |i: Index| (i as usize) < dim;
        if !in_range(unit) || !euler.terms.keys().all(|&i| in_range(i)) {
            return Err(Error::Shape("unit or Euler class outside the basis".into()));
        }
        let mut table = vec![Sparse::new(); dim * dim];
        for ((i, j), terms) in products {
            if !in_range(i) || !in_range(j) || !terms.iter().all(|&(k, _)| in_range(k)) {
                return Err(Error::Shape(format!("structure constant ({i},{j}) outside the basis")));
            }
            let class = AlgebraClass::from_terms(terms);
            table[i as usize * dim + j as usize] = class.terms.into_iter().collect();
        }
        Ok(Self { basis, products: table, counit, unit, euler, coproducts: Self::empty_cache() })
    }

    fn empty_cache() -> Vec<OnceLock<Result<Arc<CoproductTable>>>> {
        (0..=CACHED_ARITY).map(|_| OnceLock::new()).collect()
    }

    /// Exterior algebra on odd degree-1 generators with the integral of the
    /// top monomial (generators in ascending order) equal to 1. Basis index
    /// equals the monomial bitmask.
    pub fn exterior(generators: &[(String, u32)]) -> Self {
        let g = generators.len();
        assert!(g <= 8, "at most eight generators are supported");
        let dim = 1usize << g;
        let basis = (0..dim)
            .map(|m| {
                let m = m as Mask;
                let names: Vec<&str> = (0..g).filter(|i| m & (1 << i) != 0).map(|i| generators[i].0.as_str()).collect();
                BasisElement {
                    name: if names.is_empty() { "1".into() } else { names.join("*") },
                    degree: m.count_ones(),
                    odd: m.count_ones() % 2 == 1,
                    perversity: (0..g).filter(|i| m & (1 << i) != 0).map(|i| generators[i].1).sum(),
                }
            })
            .collect();
        let mut products = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                if let Some(s) = wedge_sign(a as Mask, b as Mask) {
                    products.push(((a as Index, b as Index), vec![((a | b) as Index, Q::from(s))]));
                }
            }
        }
        let mut counit = vec![Q::zero(); dim];
        counit[dim - 1] = Q::one();
        Self::new(basis, products, counit, 0, AlgebraClass::zero()).expect("exterior algebra is well formed")
    }

    /// The cohomology algebra of a compact surface model.
    pub fn from_surface(model: &SurfaceModel) -> Result<Self> {
        if !model.compact {
            return Err(Error::UnsupportedModel(model.case.to_string()));
        }
        let gens: Vec<(String, u32)> = model.generators.iter().map(|g| (g.name.clone(), g.perversity)).collect();
        Ok(Self::exterior(&gens))
    }

    /// `H*(A)` of the abelian surface: 16 monomials, `e = 0`.
    pub fn abelian_surface() -> Self {
        Self::from_surface(&SurfaceModel::abelian()).expect("abelian model is compact")
    }

    /// One-dimensional even algebra with counit the identity.
    pub fn ground_field() -> Self {
        let basis = vec![BasisElement { name: "1".into(), degree: 0, odd: false, perversity: 0 }];
        Self::new(basis, [((0, 0), vec![(0, Q::one())])], vec![Q::one()], 0, AlgebraClass::basis(0))
            .expect("ground field is well formed")
    }

    /// `ℚ[h]/h³` with `∫h² = 1` and Euler class `3h²`.
    pub fn projective_plane() -> Self {
        let basis = (0..3u32)
            .map(|k| BasisElement {
                name: ["1", "h", "h^2"][k as usize].into(),
                degree: 2 * k,
                odd: false,
                perversity: k,
            })
            .collect();
        let mut products = Vec::new();
        for a in 0..3u16 {
            for b in 0..3u16 {
                if a + b < 3 {
                    products.push(((a, b), vec![(a + b, Q::one())]));
                }
            }
        }
        let euler = AlgebraClass::from_terms([(2, Q::from(3))]);
        Self::new(basis, products, vec![Q::zero(), Q::zero(), Q::one()], 0, euler).expect("P^2 is well formed")
    }

    /// Copy with a replaced counit.
    pub fn with_counit(&self, counit: Vec<Q>) -> Result<Self> {
        if counit.len() != self.dim() {
            return Err(Error::Shape(format!("counit has {} entries for {} basis elements", counit.len(), self.dim())));
        }
        Ok(Self { counit, coproducts: Self::empty_cache(), ..self.clone() })
    }

    /// Copy with a replaced Euler class.
    pub fn with_euler(&self, euler: AlgebraClass) -> Result<Self> {
        if !euler.terms.keys().all(|&i| (i as usize) < self.dim()) {
            return Err(Error::Shape("Euler class outside the basis".into()));
        }
        Ok(Self { euler, coproducts: Self::empty_cache(), ..self.clone() })
    }

    /// Copy with the perversity of one basis element overwritten.
    pub fn with_perversity(&self, i: Index, perversity: u32) -> Result<Self> {
        let mut out = self.clone();
        out.basis
            .get_mut(i as usize)
            .ok_or_else(|| Error::Shape(format!("basis index {i} out of range")))?
            .perversity = perversity;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn element(&self, i: Index) -> &BasisElement {
        &self.basis[i as usize]
    }

    pub fn is_odd(&self, i: Index) -> bool {
        self.basis[i as usize].odd
    }

    pub fn perversity(&self, i: Index) -> u32 {
        self.basis[i as usize].perversity
    }

    pub fn degree(&self, i: Index) -> u32 {
        self.basis[i as usize].degree
    }

    pub fn unit_index(&self) -> Index {
        self.unit
    }

    pub fn unit(&self) -> AlgebraClass {
        AlgebraClass::basis(self.unit)
    }

    pub fn euler(&self) -> &AlgebraClass {
        &self.euler
    }

    pub fn counit_vector(&self) -> &[Q] {
        &self.counit
    }

    /// Largest degree on which the counit is nonzero.
    pub fn top_degree(&self) -> u32 {
        (0..self.dim()).filter(|&i| !self.counit[i].is_zero()).map(|i| self.basis[i].degree).max().unwrap_or(0)
    }

    pub fn multiply_basis(&self, i: Index, j: Index) -> &[(Index, Q)] {
        &self.products[i as usize * self.dim() + j as usize]
    }

    pub fn multiply(&self, a: &AlgebraClass, b: &AlgebraClass) -> AlgebraClass {
        let mut out = AlgebraClass::zero();
        for (&i, &x) in &a.terms {
            for (&j, &y) in &b.terms {
                for &(k, c) in self.multiply_basis(i, j) {
                    out.add(k, x * y * c);
                }
            }
        }
        out
    }

    pub fn counit(&self, a: &AlgebraClass) -> Q {
        a.terms.iter().map(|(&i, &c)| c * self.counit[i as usize]).sum()
    }

    pub fn pairing(&self, a: &AlgebraClass, b: &AlgebraClass) -> Q {
        self.counit(&self.multiply(a, b))
    }

    /// `G_{ij} = ε(b_i b_j)`.
    pub fn gram(&self) -> linalg::Matrix {
        let n = self.dim() as Index;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.multiply_basis(i, j).iter().map(|&(k, c)| c * self.counit[k as usize]).sum())
                    .collect()
            })
            .collect()
    }

    /// Product of tensors with the Koszul sign `(−1)^{Σ_{i>j}|xᵢ||yⱼ|}`.
    pub fn tensor_multiply(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for (kx, cx) in &x.terms {
            for (ky, cy) in &y.terms {
                if kx.len() != ky.len() {
                    return Err(Error::Dimension(format!("tensors with {} and {} factors", kx.len(), ky.len())));
                }
                let sign = Q::from(self.interleave_sign(kx, ky));
                let mut partial: Vec<(TensorKey, Q)> = vec![(TensorKey::new(), *cx * *cy * sign)];
                for (&a, &b) in kx.iter().zip(ky.iter()) {
                    let prod = self.multiply_basis(a, b);
                    let mut next = Vec::with_capacity(partial.len() * prod.len());
                    for (key, c) in &partial {
                        for &(k, v) in prod {
                            let mut key = key.clone();
                            key.push(k);
                            next.push((key, c * v));
                        }
                    }
                    partial = next;
                }
                for (key, c) in partial {
                    out.add(key, c);
                }
            }
        }
        Ok(out)
    }

    fn interleave_sign(&self, x: &[Index], y: &[Index]) -> i64 {
        // Σ_{i>j} |xᵢ||yⱼ|: for each odd yⱼ count odd xᵢ to its right
        let mut flips = 0u32;
        let mut odd_x_after = 0u32;
        for j in (0..y.len()).rev() {
            if self.is_odd(y[j]) {
                flips += odd_x_after;
            }
            if self.is_odd(x[j]) {
                odd_x_after += 1;
            }
        }
        if flips.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Tensor pairing `⟨X, Y⟩ = ε^{⊗k}(X·Y)`.
    pub fn tensor_pairing(&self, x: &TensorElement, y: &TensorElement) -> Result<Q> {
        let prod = self.tensor_multiply(x, y)?;
        Ok(prod.terms.iter().map(|(key, c)| key.iter().fold(*c, |acc, &i| acc * self.counit[i as usize])).sum())
    }

    /// `Δ(1) = Σ_{ij} (−1)^{|i||j|} (G⁻¹)_{ji} bᵢ ⊗ bⱼ`.
    fn diagonal(&self) -> Result<Vec<(Index, Index, Q)>> {
        let inv = linalg::inverse(&self.gram())?;
        let mut out = Vec::new();
        for (j, row) in inv.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let sign = if self.basis[i].odd && self.basis[j].odd { -Q::one() } else { Q::one() };
                out.push((i as Index, j as Index, v * sign));
            }
        }
        Ok(out)
    }

    fn build_coproducts(&self, k: usize) -> Result<Arc<CoproductTable>> {
        if k == 0 {
            return Err(Error::Domain("comultiplication arity must be at least 1".into()));
        }
        if k == 1 {
            let table = (0..self.dim()).map(|i| vec![(smallvec![i as Index], Q::one())]).collect();
            return Ok(Arc::new(table));
        }
        if k == 2 {
            let diag = self.diagonal()?;
            let table = (0..self.dim() as Index)
                .map(|a| {
                    let mut acc = TensorElement::zero();
                    for &(i, j, c) in &diag {
                        for &(p, v) in self.multiply_basis(a, i) {
                            acc.add(smallvec![p, j], c * v);
                        }
                    }
                    acc.terms.into_iter().collect()
                })
                .collect();
            return Ok(Arc::new(table));
        }
        // Δ^{(k)} = (id^{⊗(k−2)} ⊗ Δ) ∘ Δ^{(k−1)}; Δ has even degree so no sign appears
        let prev = self.coproduct_table(k - 1)?;
        let delta = self.coproduct_table(2)?;
        let even = self.top_degree().is_multiple_of(2);
        let table = prev
            .iter()
            .map(|terms| {
                let mut acc = TensorElement::zero();
                for (key, c) in terms {
                    let (last, head) = key.split_last().expect("nonempty key");
                    let sign = if !even && head.iter().filter(|&&i| self.is_odd(i)).count() % 2 == 1 {
                        -Q::one()
                    } else {
                        Q::one()
                    };
                    for (tail, v) in &delta[*last as usize] {
                        let mut key: TensorKey = head.into();
                        key.extend_from_slice(tail);
                        acc.add(key, c * v * sign);
                    }
                }
                acc.terms.into_iter().collect()
            })
            .collect();
        Ok(Arc::new(table))
    }

    /// `Δ^{(k)}(bᵢ)` for every basis element, cached for small `k`.
    pub fn coproduct_table(&self, k: usize) -> Result<Arc<CoproductTable>> {
        match self.coproducts.get(k) {
            Some(cell) => cell.get_or_init(|| self.build_coproducts(k)).clone(),
            None => self.build_coproducts(k),
        }
    }

    /// Iterated comultiplication `Δ^{(k)}(a)`, with `Δ^{(1)} = id`.
    pub fn comultiply(&self, a: &AlgebraClass, k: usize) -> Result<TensorElement> {
        let table = self.coproduct_table(k)?;
        let mut out = TensorElement::zero();
        for (&i, &c) in &a.terms {
            for (key, v) in &table[i as usize] {
                out.add(key.clone(), c * v);
            }
        }
        Ok(out)
    }

    /// Multiplies all factors of a tensor together.
    pub fn collapse(&self, x: &TensorElement) -> AlgebraClass {
        let mut out = AlgebraClass::zero();
        for (key, c) in &x.terms {
            let mut acc = AlgebraClass::from_terms([(self.unit, *c)]);
            for &i in key {
                acc = self.multiply(&acc, &AlgebraClass::basis(i));
            }
            for (i, v) in acc.terms {
                out.add(i, v);
            }
        }
        out
    }

    /// Perversity of a tensor monomial: the sum over its factors.
    pub fn tensor_perversity(&self, key: &[Index]) -> u32 {
        key.iter().map(|&i| self.perversity(i)).sum()
    }

    /// Runs every axiom check on basis elements.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim() as Index;
        let mut report = ValidationReport::default();
        let basis = |i| AlgebraClass::basis(i);
        let name = |i: Index| self.basis[i as usize].name.clone();

        let mut check = AxiomCheck::new("unit");
        for i in 0..n {
            let ok = self.multiply(&self.unit(), &basis(i)) == basis(i)
                && self.multiply(&basis(i), &self.unit()) == basis(i);
            check.record(ok, || name(i));
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("grading");
        for i in 0..n {
            for j in 0..n {
                let (d, odd) = (self.degree(i) + self.degree(j), self.is_odd(i) ^ self.is_odd(j));
                let ok = self.multiply_basis(i, j).iter().all(|&(k, _)| self.degree(k) == d && self.is_odd(k) == odd);
                check.record(ok, || format!("{} * {}", name(i), name(j)));
            }
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("associativity");
        for i in 0..n {
            for j in 0..n {
                let ij = self.multiply(&basis(i), &basis(j));
                for k in 0..n {
                    let jk = self.multiply(&basis(j), &basis(k));
                    let ok = self.multiply(&ij, &basis(k)) == self.multiply(&basis(i), &jk);
                    check.record(ok, || format!("({} {} {})", name(i), name(j), name(k)));
                }
            }
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("graded-commutativity");
        for i in 0..n {
            for j in 0..n {
                let sign = if self.is_odd(i) && self.is_odd(j) { -Q::one() } else { Q::one() };
                let ok = self.multiply(&basis(i), &basis(j)) == self.multiply(&basis(j), &basis(i)).scale(sign);
                check.record(ok, || format!("{} {}", name(i), name(j)));
            }
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("counit-homogeneous");
        let top = self.top_degree();
        for i in 0..n {
            let ok = self.counit[i as usize].is_zero()
                || (self.degree(i) == top && top.is_multiple_of(2) && !self.is_odd(i));
            check.record(ok, || format!("counit({}) = {}", name(i), self.counit[i as usize]));
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("nondegeneracy");
        let nondegenerate = linalg::inverse(&self.gram()).is_ok();
        check.record(nondegenerate, || "pairing matrix is singular".into());
        report.checks.push(check);

        let Ok(delta) = self.coproduct_table(2) else {
            return report;
        };
        let as_tensor = |i: Index| {
            let mut t = TensorElement::zero();
            for (key, c) in &delta[i as usize] {
                t.add(key.clone(), *c);
            }
            t
        };

        let mut check = AxiomCheck::new("adjointness");
        for a in 0..n {
            let da = as_tensor(a);
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.tensor_pairing(&da, &TensorElement::monomial(&[b, c])).expect("two-factor tensors");
                    let rhs = self.pairing(&basis(a), &self.multiply(&basis(b), &basis(c)));
                    check.record(lhs == rhs, || format!("<D({}), {} x {}>", name(a), name(b), name(c)));
                }
            }
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("counit-axiom");
        for a in 0..n {
            let da = as_tensor(a);
            let mut left = AlgebraClass::zero();
            let mut right = AlgebraClass::zero();
            for (key, c) in &da.terms {
                left.add(key[1], c * self.counit[key[0] as usize]);
                right.add(key[0], c * self.counit[key[1] as usize]);
            }
            check.record(left == basis(a) && right == basis(a), || name(a));
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("comultiplication-degree");
        for a in 0..n {
            let ok = delta[a as usize]
                .iter()
                .all(|(key, _)| key.iter().map(|&i| self.degree(i)).sum::<u32>() == self.degree(a) + top);
            check.record(ok, || name(a));
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("coassociativity");
        let even = top.is_multiple_of(2);
        for a in 0..n {
            let mut left = TensorElement::zero();
            let mut right = TensorElement::zero();
            for (key, c) in &delta[a as usize] {
                for (k2, v) in &delta[key[0] as usize] {
                    left.add(smallvec![k2[0], k2[1], key[1]], c * v);
                }
                let sign = if !even && self.is_odd(key[0]) { -Q::one() } else { Q::one() };
                for (k2, v) in &delta[key[1] as usize] {
                    right.add(smallvec![key[0], k2[0], k2[1]], c * v * sign);
                }
            }
            check.record(left == right, || name(a));
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("frobenius-condition");
        for a in 0..n {
            let da = as_tensor(a);
            for b in 0..n {
                let lhs = self.comultiply(&self.multiply(&basis(a), &basis(b)), 2).unwrap_or_default();
                let rhs = self.tensor_multiply(&da, &TensorElement::monomial(&[self.unit, b])).unwrap_or_default();
                check.record(lhs == rhs, || format!("D({} {})", name(a), name(b)));
            }
        }
        report.checks.push(check);

        let mut check = AxiomCheck::new("euler-class");
        let ok = self.collapse(&as_tensor(self.unit)) == self.euler;
        check.record(ok, || "euler != m(D(1))".into());
        report.checks.push(check);

        report
    }
}

/// Outcome of one axiom over all basis instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<String>,
}

impl AxiomCheck {
    fn new(axiom: &str) -> Self {
        Self { axiom: axiom.into(), checked: 0, failures: 0, witnesses: Vec::new() }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn failed_axioms(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.axiom.as_str()).collect()
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abelian() -> FrobeniusAlgebra {
        FrobeniusAlgebra::abelian_surface()
    }

    #[test]
    fn abelian_preset_shape() {
        let a = abelian();
        assert_eq!(a.dim(), 16);
        assert_eq!(a.counit(&AlgebraClass::basis(15)), Q::one());
        assert_eq!(a.counit(&a.unit()), Q::zero());
        assert!(a.euler().is_zero());
        let pervs: Vec<u32> = (0..4).map(|g| a.perversity(1 << g)).collect();
        assert_eq!(pervs, [0, 0, 1, 1]);
        assert_eq!(a.element(0b1100).name, "gamma*delta");
    }

    #[test]
    fn pairing_matrix_is_a_signed_permutation() {
        let g = abelian().gram();
        for row in &g {
            let nonzero: Vec<&Q> = row.iter().filter(|c| !c.is_zero()).collect();
            assert_eq!(nonzero.len(), 1);
            assert!(*nonzero[0] == Q::one() || *nonzero[0] == -Q::one());
        }
        for j in 0..16 {
            assert_eq!(g.iter().filter(|row| !row[j].is_zero()).count(), 1);
        }
    }

    #[test]
    fn presets_validate() {
        for alg in [abelian(), FrobeniusAlgebra::ground_field(), FrobeniusAlgebra::projective_plane()] {
            let report = alg.validate();
            assert!(report.passed(), "{:?}", report.failed_axioms());
        }
    }

    #[test]
    fn corrupted_counit_is_reported() {
        let alg = abelian();
        let mut counit = alg.counit_vector().to_vec();
        counit[0] = Q::one();
        let bad = alg.with_counit(counit).unwrap();
        let report = bad.validate();
        assert!(!report.passed());
        assert!(report.failed_axioms().contains(&"counit-homogeneous"));
    }

    #[test]
    fn degenerate_counit_is_reported() {
        let alg = abelian();
        let bad = alg.with_counit(vec![Q::zero(); 16]).unwrap();
        let report = bad.validate();
        assert!(report.failed_axioms().contains(&"nondegeneracy"));
        assert!(matches!(bad.comultiply(&bad.unit(), 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn wrong_euler_class_is_reported() {
        let alg = FrobeniusAlgebra::projective_plane().with_euler(AlgebraClass::zero()).unwrap();
        assert_eq!(alg.validate().failed_axioms(), ["euler-class"]);
    }

    #[test]
    fn diagonal_class_oracle() {
        let alg = abelian();
        let d1 = alg.comultiply(&alg.unit(), 2).unwrap();
        assert_eq!(d1.terms.len(), 16);
        for (key, c) in &d1.terms {
            // each term pairs a monomial with its complement, total degree 4
            assert_eq!(key[0] | key[1], 15);
            assert_eq!(key[0] & key[1], 0);
            assert_eq!(alg.degree(key[0]) + alg.degree(key[1]), 4);
            assert!(*c == Q::one() || *c == -Q::one());
        }
        // independent oracle: coefficients from adjointness against every basis pair
        for b in 0..16u16 {
            for c in 0..16u16 {
                let lhs = alg.tensor_pairing(&d1, &TensorElement::monomial(&[b, c])).unwrap();
                assert_eq!(lhs, alg.counit(&alg.multiply(&AlgebraClass::basis(b), &AlgebraClass::basis(c))));
            }
        }
        assert!(alg.collapse(&d1).is_zero());
    }

    #[test]
    fn iterated_comultiplication() {
        let alg = abelian();
        let x = AlgebraClass::basis(0b0101);
        assert_eq!(alg.comultiply(&x, 1).unwrap(), TensorElement::monomial(&[0b0101]));
        let d3 = alg.comultiply(&alg.unit(), 3).unwrap();
        // every generator is missing from exactly one of the three factors
        assert_eq!(d3.terms.len(), 81);
        for key in d3.terms.keys() {
            for g in 0..4 {
                assert_eq!(key.iter().filter(|&&m| m & (1 << g) == 0).count(), 1);
            }
        }
        assert!(d3.terms.keys().all(|k| k.iter().map(|&i| alg.degree(i)).sum::<u32>() == 8));
        // (id ⊗ Δ)Δ computed through the other bracket
        let d2 = alg.comultiply(&alg.unit(), 2).unwrap();
        let mut other = TensorElement::zero();
        for (key, c) in &d2.terms {
            for (k2, v) in &alg.comultiply(&AlgebraClass::basis(key[0]), 2).unwrap().terms {
                other.add(smallvec![k2[0], k2[1], key[1]], c * v);
            }
        }
        assert_eq!(other, d3);
        assert!(matches!(alg.comultiply(&x, 0), Err(Error::Domain(_))));
        for k in 1..=4 {
            let dk = alg.comultiply(&alg.unit(), k).unwrap();
            let perv = dk.terms.keys().map(|key| alg.tensor_perversity(key)).max().unwrap();
            assert!(perv <= 2 * (k as u32 - 1));
        }
    }

    #[test]
    fn projective_plane_diagonal() {
        let alg = FrobeniusAlgebra::projective_plane();
        let d1 = alg.comultiply(&alg.unit(), 2).unwrap();
        let mut expected = TensorElement::zero();
        for (a, b) in [(0, 2), (1, 1), (2, 0)] {
            expected.add(smallvec![a, b], Q::one());
        }
        assert_eq!(d1, expected);
        assert_eq!(alg.collapse(&d1), AlgebraClass::from_terms([(2, Q::from(3))]));
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        let basis = vec![BasisElement { name: "1".into(), degree: 0, odd: false, perversity: 0 }];
        assert!(FrobeniusAlgebra::new(basis.clone(), [], vec![], 0, AlgebraClass::zero()).is_err());
        assert!(
            FrobeniusAlgebra::new(basis.clone(), [((0, 1), vec![])], vec![Q::one()], 0, AlgebraClass::zero()).is_err()
        );
        assert!(FrobeniusAlgebra::new(vec![], [], vec![], 0, AlgebraClass::zero()).is_err());
        assert!(FrobeniusAlgebra::from_surface(&SurfaceModel::new(crate::surfaces::SurfaceCase::EllipticTimesLine))
            .is_err());
    }

    proptest! {
        #[test]
        fn frobenius_condition_on_random_classes(
            a in proptest::collection::vec((0u16..16, -3i64..4), 1..4),
            b in proptest::collection::vec((0u16..16, -3i64..4), 1..4),
        ) {
            let alg = abelian();
            let a = AlgebraClass::from_terms(a.into_iter().map(|(i, c)| (i, Q::from(c))));
            let b = AlgebraClass::from_terms(b.into_iter().map(|(i, c)| (i, Q::from(c))));
            let lhs = alg.comultiply(&alg.multiply(&a, &b), 2).unwrap();
            let mut rhs = TensorElement::zero();
            let da = alg.comultiply(&a, 2).unwrap();
            for (&j, &c) in &b.terms {
                for (k, v) in alg.tensor_multiply(&da, &TensorElement::monomial(&[0, j])).unwrap().terms {
                    rhs.add(k, v * c);
                }
            }
            prop_assert_eq!(lhs, rhs);
        }
    }
}
