//! The three fibered group-surface models.
//!
//! In every case the rational cohomology of the surface `A` is an exterior
//! algebra on odd degree-1 generators, each carrying a perversity 0 or 1 for
//! the map to the intermediate curve `B`. Monomials are bitmasks over the
//! generators; the sign of a product is the Koszul sign of sorting the
//! generators into ascending order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bigraded::PerversePolynomial;
use crate::error::{Error, Result};
use crate::Q;

/// Square-free monomial in the generators, one bit per generator.
pub type Mask = u8;

/// Defect of semismallness of `A → B`.
pub const SURFACE_DEFECT: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceCase {
    /// Abelian surface over an elliptic curve.
    #[serde(rename = "abelian")]
    AbelianOverElliptic,
    /// `E × ℂ → ℂ`.
    #[serde(rename = "e-times-line")]
    EllipticTimesLine,
    /// `(E × ℂ*)/Γ → ℂ*/Γ`.
    #[serde(rename = "e-times-torus-quotient")]
    EllipticTimesTorusQuotient,
}

impl SurfaceCase {
    pub const ALL: [SurfaceCase; 3] =
        [Self::AbelianOverElliptic, Self::EllipticTimesLine, Self::EllipticTimesTorusQuotient];

    pub fn slug(self) -> &'static str {
        match self {
            Self::AbelianOverElliptic => "abelian",
            Self::EllipticTimesLine => "e-times-line",
            Self::EllipticTimesTorusQuotient => "e-times-torus-quotient",
        }
    }

    pub fn from_slug(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.slug() == s).ok_or_else(|| Error::Usage(format!("unknown surface case `{s}`")))
    }
}

impl fmt::Display for SurfaceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub perversity: u32,
}

/// A fibered group surface with its cohomology generators and torsion data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub case: SurfaceCase,
    pub generators: Vec<Generator>,
    pub torsion: TorsionGroup,
    pub compact: bool,
}

impl SurfaceModel {
    pub fn new(case: SurfaceCase) -> Self {
        let gens = |spec: &[(&str, u32)]| {
            spec.iter().map(|&(name, perversity)| Generator { name: name.into(), perversity }).collect()
        };
        match case {
            SurfaceCase::AbelianOverElliptic => Self {
                case,
                generators: gens(&[("alpha", 0), ("beta", 0), ("gamma", 1), ("delta", 1)]),
                torsion: TorsionGroup::divisible(4),
                compact: true,
            },
            SurfaceCase::EllipticTimesLine => Self {
                case,
                generators: gens(&[("e1", 1), ("e2", 1)]),
                torsion: TorsionGroup::divisible(2),
                compact: false,
            },
            SurfaceCase::EllipticTimesTorusQuotient => Self {
                case,
                generators: gens(&[("u", 0), ("e1", 1), ("e2", 1)]),
                torsion: TorsionGroup::divisible(3),
                compact: false,
            },
        }
    }

    pub fn abelian() -> Self {
        Self::new(SurfaceCase::AbelianOverElliptic)
    }

    /// Replaces the torsion group by `(ℚ/ℤ)^rank`.
    pub fn with_torsion_rank(mut self, rank: usize) -> Self {
        self.torsion = TorsionGroup::divisible(rank);
        self
    }

    pub fn with_torsion_group(mut self, torsion: TorsionGroup) -> Self {
        self.torsion = torsion;
        self
    }

    pub fn defect(&self) -> u32 {
        SURFACE_DEFECT
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// All monomials, i.e. the basis of `H*(A)`, in increasing mask order.
    pub fn monomials(&self) -> impl Iterator<Item = Mask> {
        0..(1u16 << self.generators.len()) as u8
    }

    pub fn top_monomial(&self) -> Mask {
        ((1u16 << self.generators.len()) - 1) as Mask
    }

    pub fn degree(&self, m: Mask) -> u32 {
        m.count_ones()
    }

    pub fn perversity(&self, m: Mask) -> u32 {
        self.generators.iter().enumerate().filter(|(i, _)| m & (1 << i) != 0).map(|(_, g)| g.perversity).sum()
    }

    pub fn monomial_name(&self, m: Mask) -> String {
        if m == 0 {
            return "1".into();
        }
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| m & (1 << i) != 0)
            .map(|(_, g)| g.name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Bigraded dimension series of `H*(A)`.
    pub fn cohomology_pp(&self) -> PerversePolynomial {
        PerversePolynomial::from_terms(self.monomials().map(|m| ((self.degree(m), self.perversity(m)), 1u32)))
    }

    /// Exterior product of two classes.
    pub fn surface_product(&self, x: &SurfaceClass, y: &SurfaceClass) -> SurfaceClass {
        let mut out = SurfaceClass::zero();
        for (&a, ca) in &x.terms {
            for (&b, cb) in &y.terms {
                if let Some(sign) = wedge_sign(a, b) {
                    out.add(a | b, ca * cb * Q::from(sign));
                }
            }
        }
        out
    }

    /// `|A[m]|`.
    pub fn torsion_count(&self, m: u32) -> Result<BigUint> {
        self.torsion.count(m)
    }

    fn require_compact(&self) -> Result<()> {
        if self.compact {
            Ok(())
        } else {
            Err(Error::UnsupportedModel(self.case.to_string()))
        }
    }

    /// `∫_{Aⁿ}` of a class, with `∫ x₁x₂x₃x₄ = 1` on each factor.
    pub fn integrate(&self, x: &TensorClass) -> Result<Q> {
        self.require_compact()?;
        let top = self.top_monomial();
        Ok(x.terms.iter().filter(|(k, _)| k.iter().all(|&m| m == top)).map(|(_, c)| *c).sum())
    }

    /// Poincaré pairing `⟨x, y⟩ = ∫ x·y` on `Aⁿ`.
    pub fn pairing(&self, x: &TensorClass, y: &TensorClass) -> Result<Q> {
        self.integrate(&x.multiply(y)?)
    }

    /// The signed basis element `y` with `⟨x, y⟩ = 1`, for a monomial `x` on `Aⁿ`.
    pub fn poincare_dual(&self, x: &[Mask]) -> Result<TensorClass> {
        self.require_compact()?;
        let top = self.top_monomial();
        let complement: Vec<Mask> = x.iter().map(|&m| top & !m).collect();
        let candidate = TensorClass::monomial(complement);
        let sign = self.pairing(&TensorClass::monomial(x.to_vec()), &candidate)?;
        debug_assert!(sign == Q::one() || sign == -Q::one());
        Ok(candidate.scale(sign))
    }

    /// Pullback along the summation map `m: Aⁿ → A`: the ring homomorphism
    /// sending each generator `g` to `Σ_k 1 ⊗ … ⊗ g ⊗ … ⊗ 1`.
    pub fn summation_pullback(&self, x: &SurfaceClass, n: usize) -> Result<TensorClass> {
        if n == 0 {
            return Err(Error::Domain("summation map needs at least one factor".into()));
        }
        let mut out = TensorClass::zero(n);
        for (&mask, c) in &x.terms {
            let mut acc = TensorClass::unit(n);
            for g in 0..self.generator_count() {
                if mask & (1 << g) == 0 {
                    continue;
                }
                let mut image = TensorClass::zero(n);
                for k in 0..n {
                    let mut key = vec![0; n];
                    key[k] = 1 << g;
                    image.add(key, Q::one());
                }
                acc = acc.multiply(&image)?;
            }
            out = out.plus(&acc.scale(*c))?;
        }
        Ok(out)
    }

    /// Perversity of a monomial on `Aⁿ` under the product map to `Bⁿ`.
    pub fn tensor_perversity(&self, key: &[Mask]) -> u32 {
        key.iter().map(|&m| self.perversity(m)).sum()
    }

    /// Perversity of a class on `Aⁿ`; `None` for the zero class.
    pub fn class_perversity(&self, x: &TensorClass) -> Option<u32> {
        x.terms.keys().map(|k| self.tensor_perversity(k)).max()
    }
}

/// Sign of `a ∧ b` relative to the sorted monomial `a | b`, or `None` when
/// the two share a generator.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    // each generator of b passes the generators of a with larger index
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Rational linear combination of monomials in `H*(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurfaceClass {
    pub terms: BTreeMap<Mask, Q>,
}

impl SurfaceClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(m: Mask) -> Self {
        let mut out = Self::zero();
        out.add(m, Q::one());
        out
    }

    /// The `i`-th degree-1 generator.
    pub fn generator(i: usize) -> Self {
        Self::monomial(1 << i)
    }

    pub fn add(&mut self, m: Mask, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Rational combination of tensor monomials `m₁ ⊗ … ⊗ mₙ` on `Aⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorClass {
    factors: usize,
    pub terms: BTreeMap<Vec<Mask>, Q>,
}

impl TensorClass {
    pub fn zero(factors: usize) -> Self {
        Self { factors, terms: BTreeMap::new() }
    }

    pub fn unit(factors: usize) -> Self {
        Self::monomial(vec![0; factors])
    }

    pub fn monomial(key: Vec<Mask>) -> Self {
        let mut out = Self::zero(key.len());
        out.add(key, Q::one());
        out
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn add(&mut self, key: Vec<Mask>, c: Q) {
        debug_assert_eq!(key.len(), self.factors);
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

    pub fn scale(&self, c: Q) -> Self {
        let mut out = Self::zero(self.factors);
        for (k, v) in &self.terms {
            out.add(k.clone(), v * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_factors(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add(k.clone(), *v);
        }
        Ok(out)
    }

    fn check_factors(&self, other: &Self) -> Result<()> {
        if self.factors != other.factors {
            return Err(Error::Dimension(format!("classes on A^{} and A^{}", self.factors, other.factors)));
        }
        Ok(())
    }

    /// Cup product on `Aⁿ` with the Koszul sign for interleaving factors.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_factors(other)?;
        let mut out = Self::zero(self.factors);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                if let Some((key, sign)) = tensor_monomial_product(x, y) {
                    out.add(key, cx * cy * Q::from(sign));
                }
            }
        }
        Ok(out)
    }

    /// `x ⊗ y` on `A^{n+m}`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.factors + other.factors);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let mut key = x.clone();
                key.extend_from_slice(y);
                out.add(key, cx * cy);
            }
        }
        out
    }
}

/// `(x₁⊗…⊗xₙ)(y₁⊗…⊗yₙ) = (−1)^{Σ_{i>j}|xᵢ||yⱼ|} x₁y₁ ⊗ … ⊗ xₙyₙ`.
pub fn tensor_monomial_product(x: &[Mask], y: &[Mask]) -> Option<(Vec<Mask>, i64)> {
    let mut sign = 1;
    let mut key = Vec::with_capacity(x.len());
    let mut odd_x_after = 0u32;
    // walk right to left, counting odd x-factors already passed
    let mut parity_after = vec![0u32; x.len()];
    for i in (0..x.len()).rev() {
        parity_after[i] = odd_x_after;
        odd_x_after += x[i].count_ones() % 2;
    }
    for i in 0..x.len() {
        let s = wedge_sign(x[i], y[i])?;
        sign *= s;
        if (y[i].count_ones() % 2) * (parity_after[i] % 2) == 1 {
            sign = -sign;
        }
        key.push(x[i] | y[i]);
    }
    Some((key, sign))
}

/// The torsion group of `A` modelled as `⊕ᵢ Gᵢ` where each `Gᵢ` is `ℚ/ℤ`
/// (factor `0`) or the finite cyclic group `ℤ/d` (factor `d`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionGroup {
    factors: Vec<u32>,
}

impl TorsionGroup {
    /// `(ℚ/ℤ)^rank`, so that `A[m] ≅ (ℤ/m)^rank`.
    pub fn divisible(rank: usize) -> Self {
        Self { factors: vec![0; rank] }
    }

    pub fn from_factors(factors: Vec<u32>) -> Self {
        Self { factors }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    /// Order of the `m`-torsion in coordinate `i`.
    fn coordinate_order(&self, i: usize, m: u32) -> u32 {
        match self.factors[i] {
            0 => m,
            d => num_integer::gcd(d, m),
        }
    }

    /// `|A[m]|`.
    pub fn count(&self, m: u32) -> Result<BigUint> {
        if m == 0 {
            return Err(Error::Domain("torsion order must be positive".into()));
        }
        Ok((0..self.rank()).fold(BigUint::one(), |acc, i| acc * BigUint::from(self.coordinate_order(i, m))))
    }

    /// All elements of `A[m]`, in lexicographic order of numerators over `m`.
    pub fn elements(&self, m: u32) -> Result<Vec<TorsionElement>> {
        if m == 0 {
            return Err(Error::Domain("torsion order must be positive".into()));
        }
        let orders: Vec<u32> = (0..self.rank()).map(|i| self.coordinate_order(i, m)).collect();
        let mut out = Vec::new();
        let mut digits = vec![0u32; self.rank()];
        loop {
            let nums: Vec<u32> = digits.iter().zip(&orders).map(|(&j, &o)| j * (m / o)).collect();
            out.push(TorsionElement::new(m, nums));
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < orders[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    pub fn contains(&self, x: &TorsionElement) -> bool {
        x.nums.len() == self.rank()
            && x.nums
                .iter()
                .zip(&self.factors)
                .all(|(&j, &d)| d == 0 || (j as u64 * d as u64).is_multiple_of(x.den as u64))
    }
}

/// A torsion point: coordinates `jᵢ/den` modulo 1, stored in lowest terms
/// with a shared denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionElement {
    den: u32,
    nums: Vec<u32>,
}

impl TorsionElement {
    pub fn new(den: u32, nums: Vec<u32>) -> Self {
        assert!(den > 0, "denominator must be positive");
        let nums: Vec<u32> = nums.into_iter().map(|j| j % den).collect();
        let g = nums.iter().fold(den, |g, &j| num_integer::gcd(g, j));
        Self { den: den / g, nums: nums.into_iter().map(|j| j / g).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        Self { den: 1, nums: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.nums.len()
    }

    /// Order of the element.
    pub fn order(&self) -> u32 {
        self.den
    }

    /// Numerators over `den`, for `den` a multiple of the order.
    pub fn numerators_over(&self, den: u32) -> Vec<u32> {
        assert_eq!(den % self.den, 0, "denominator {den} is not a multiple of {}", self.den);
        self.nums.iter().map(|&j| j * (den / self.den)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.den == 1
    }

    /// `m · σ = 0`.
    pub fn is_m_torsion(&self, m: u32) -> bool {
        m.is_multiple_of(self.den)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::GroupMismatch(format!("ranks {} and {}", self.rank(), other.rank())));
        }
        let den = num_integer::lcm(self.den, other.den);
        let nums =
            self.numerators_over(den).into_iter().zip(other.numerators_over(den)).map(|(a, b)| (a + b) % den).collect();
        Ok(Self::new(den, nums))
    }

    pub fn negate(&self) -> Self {
        Self::new(self.den, self.nums.iter().map(|&j| (self.den - j) % self.den).collect())
    }
}

impl fmt::Display for TorsionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &j) in self.nums.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if j == 0 {
                write!(f, "0")?;
            } else {
                let g = num_integer::gcd(j, self.den);
                write!(f, "{}/{}", j / g, self.den / g)?;
            }
        }
        write!(f, ")")
    }
}
