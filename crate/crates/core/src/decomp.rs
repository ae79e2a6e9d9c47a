//! Perverse series of `A^[n]` and `A^[[n]] × A`, torsion-labeled Kummer
//! classes and their products, and the checking harness.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigraded::PerversePolynomial;
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusAlgebra, Index};
use crate::orbifold::{Labels, NuClass, SymmetricOrbifold};
use crate::partitions::{enumerate_partitions, Partition};
use crate::surfaces::{
    tensor_monomial_product, Mask, SurfaceClass, SurfaceModel, TensorClass, TorsionElement, TorsionGroup,
};
use crate::Q;

const WITNESS_CAP: usize = 16;

/// Series contribution of the summand indexed by `ν`.
pub fn summand_pp(model: &SurfaceModel, nu: &Partition) -> PerversePolynomial {
    let shift = (nu.size() - nu.len()) as u32;
    model.cohomology_pp().sym_partition(nu).shift(2 * shift, shift)
}

fn require_positive(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    enumerate_partitions(n)
}

/// Perverse Poincaré series of `A^[n]`.
pub fn hilbert_pp(model: &SurfaceModel, n: usize) -> Result<PerversePolynomial> {
    Ok(require_positive(n)?.iter().map(|nu| summand_pp(model, nu)).sum())
}

/// Perverse Poincaré series of `A^[[n]] × A`.
pub fn kummer_pp(model: &SurfaceModel, n: usize) -> Result<PerversePolynomial> {
    let mut out = PerversePolynomial::zero();
    for nu in require_positive(n)? {
        let count = model.torsion_count(nu.gcd() as u32)?;
        out = &out + &summand_pp(model, &nu).scale(&count);
    }
    Ok(out)
}

/// Perverse Poincaré series of `A^[[n]]`, by exact division.
pub fn kummer_quotient_pp(model: &SurfaceModel, n: usize) -> Result<PerversePolynomial> {
    kummer_pp(model, n)?.exact_divide(&model.cohomology_pp())
}

/// A decomposition class `α_{ν,σ}` of `A^[[n]] × A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerClass {
    pub nu: Partition,
    pub sigma: TorsionElement,
    pub payload: NuClass,
}

impl KummerClass {
    /// Rejects `σ ∉ A[gcd ν]` and zero payloads.
    pub fn new(torsion: &TorsionGroup, sigma: TorsionElement, payload: NuClass) -> Result<Self> {
        if sigma.rank() != torsion.rank() {
            return Err(Error::GroupMismatch(format!(
                "label of rank {} in a group of rank {}",
                sigma.rank(),
                torsion.rank()
            )));
        }
        let nu = payload.nu.clone();
        if !sigma.is_m_torsion(nu.gcd() as u32) || !torsion.contains(&sigma) {
            return Err(Error::Domain(format!("{sigma} is not in A[{}]", nu.gcd())));
        }
        if payload.is_zero() {
            return Err(Error::Domain("zero payload".into()));
        }
        Ok(Self { nu, sigma, payload })
    }

    /// `p(payload) + n − l(ν)`.
    pub fn perversity(&self, orb: &SymmetricOrbifold) -> u32 {
        orb.perversity(&self.payload).expect("payload is nonzero")
    }
}

/// `α_{ν,σ} · β_{μ,τ}`, keyed by `(λ, σ+τ)`; components with `σ+τ ∉ A[gcd λ]`
/// are dropped.
pub fn kummer_product(
    orb: &SymmetricOrbifold,
    torsion: &TorsionGroup,
    a: &KummerClass,
    b: &KummerClass,
) -> Result<BTreeMap<(Partition, TorsionElement), NuClass>> {
    let label = a.sigma.add(&b.sigma)?;
    if label.rank() != torsion.rank() {
        return Err(Error::GroupMismatch(format!(
            "labels of rank {} in a group of rank {}",
            label.rank(),
            torsion.rank()
        )));
    }
    let product = orb.hilbert_product(&orb.nu_class_of(&a.payload)?, &orb.nu_class_of(&b.payload)?);
    Ok(product
        .into_iter()
        .filter(|(lambda, _)| label.is_m_torsion(lambda.gcd() as u32) && torsion.contains(&label))
        .map(|(lambda, c)| ((lambda, label.clone()), c))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Multiplicativity,
    StrongSplitting,
    Duality,
    Diagonal,
    RingAxioms,
    Frobenius,
}

impl CheckKind {
    pub fn slug(self) -> &'static str {
        match self {
            Self::Multiplicativity => "multiplicativity",
            Self::StrongSplitting => "strong-splitting",
            Self::Duality => "duality",
            Self::Diagonal => "diagonal",
            Self::RingAxioms => "ring-axioms",
            Self::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl Mode {
    fn slug(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled { .. } => "sampled",
        }
    }

    fn seed(self) -> Option<u64> {
        match self {
            Mode::Exhaustive => None,
            Mode::Sampled { seed, .. } => Some(seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub alpha: String,
    pub beta: String,
    pub lambda: String,
    pub sigma_tau: String,
    pub p_alpha: u32,
    pub p_beta: u32,
    pub p_gamma: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Result of a check. Reports merge by adding counters and concatenating
/// witnesses up to a cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub model: String,
    pub n: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pairs_checked: u64,
    pub components_checked: u64,
    pub components_vanished: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    fn new(check: CheckKind, model: &str, n: usize, mode: Mode) -> Self {
        Self {
            check: check.slug().into(),
            model: model.into(),
            n,
            mode: mode.slug().into(),
            seed: mode.seed(),
            pairs_checked: 0,
            components_checked: 0,
            components_vanished: 0,
            violation_count: 0,
            violations: Vec::new(),
            elapsed_ms: 0,
        }
    }

    fn empty_like(&self) -> Self {
        Self {
            pairs_checked: 0,
            components_checked: 0,
            components_vanished: 0,
            violation_count: 0,
            violations: Vec::new(),
            ..self.clone()
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.pairs_checked += other.pairs_checked;
        self.components_checked += other.components_checked;
        self.components_vanished += other.components_vanished;
        self.violation_count += other.violation_count;
        let room = WITNESS_CAP.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.elapsed_ms = self.elapsed_ms.max(other.elapsed_ms);
        self
    }

    fn record(&mut self, count: u64, witness: impl FnOnce() -> Violation) {
        if count == 0 {
            return;
        }
        self.violation_count += count;
        if self.violations.len() < WITNESS_CAP {
            self.violations.push(witness());
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Worker count and sampling parameters for a check.
#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub mode: Mode,
    pub jobs: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { mode: Mode::Exhaustive, jobs: None }
    }
}

fn run_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(f))
            .unwrap_or_else(|_| panic!("could not start {j} worker threads")),
        None => f(),
    }
}

fn format_labels(alg: &FrobeniusAlgebra, labels: &[Index]) -> String {
    let names: Vec<&str> = labels.iter().map(|&l| alg.element(l).name.as_str()).collect();
    format!("[{}]", names.join(", "))
}

fn format_class(alg: &FrobeniusAlgebra, nu: &Partition, sigma: &TorsionElement, labels: &[Index]) -> String {
    format!("{nu} {sigma} {}", format_labels(alg, labels))
}

/// Torsion labels of one summand as numerators over `gcd ν`.
struct LabelSet {
    den: u32,
    elements: Vec<TorsionElement>,
    numerators: Vec<Vec<u32>>,
}

impl LabelSet {
    fn new(torsion: &TorsionGroup, den: u32) -> Result<Self> {
        let elements = torsion.elements(den)?;
        let numerators = elements.iter().map(|e| e.numerators_over(den)).collect();
        Ok(Self { den, elements, numerators })
    }
}

/// `σ + τ ∈ A[g]` on residues, without allocating.
fn sum_in_torsion(a: &[u32], da: u32, b: &[u32], db: u32, g: u32) -> bool {
    let l = num_integer::lcm(da, db) as u64;
    let (fa, fb) = ((l / da as u64), (l / db as u64));
    a.iter().zip(b).all(|(&x, &y)| {
        let s = (x as u64 * fa + y as u64 * fb) % l;
        (s * g as u64).is_multiple_of(l)
    })
}

/// Label pairs of types `(ν, μ)` whose sum lies in `A[gcd λ]`, with the first
/// such pair.
#[derive(Clone)]
struct Survivors {
    count: u64,
    first: Option<(usize, usize)>,
}

fn survivors(a: &LabelSet, b: &LabelSet, g: u32) -> Survivors {
    let mut out = Survivors { count: 0, first: None };
    for (i, x) in a.numerators.iter().enumerate() {
        for (j, y) in b.numerators.iter().enumerate() {
            if sum_in_torsion(x, a.den, y, b.den, g) {
                out.count += 1;
                out.first.get_or_insert((i, j));
            }
        }
    }
    out
}

/// Sweeps products of torsion-labeled basis classes. Multiplicativity asks
/// `p(γ) ≤ p(α) + p(β)`; strong splitting asks every coordinate of `γ` to
/// have perversity exactly `p(α) + p(β)`.
pub fn check_products(
    kind: CheckKind,
    orb: &SymmetricOrbifold,
    torsion: &TorsionGroup,
    model_name: &str,
    options: CheckOptions,
) -> Result<CheckReport> {
    if !matches!(kind, CheckKind::Multiplicativity | CheckKind::StrongSplitting) {
        return Err(Error::Usage(format!("{kind} is not a product check")));
    }
    let start = Instant::now();
    let n = orb.n();
    let partitions = orb.group().partitions().to_vec();
    let label_sets: Vec<LabelSet> =
        partitions.iter().map(|nu| LabelSet::new(torsion, nu.gcd() as u32)).collect::<Result<_>>()?;
    let mut survivor_table: HashMap<(usize, usize, usize), Survivors> = HashMap::new();
    for a in 0..partitions.len() {
        for b in 0..partitions.len() {
            for (c, lambda) in partitions.iter().enumerate() {
                survivor_table.insert((a, b, c), survivors(&label_sets[a], &label_sets[b], lambda.gcd() as u32));
            }
        }
    }
    let basis = orb.invariant_basis();
    let alg = orb.algebra();
    let template = CheckReport::new(kind, model_name, n, options.mode);

    // checks one payload pair; `labels` restricts to a single (σ, τ) pair
    let check_pair = |report: &mut CheckReport, i: usize, j: usize, labels: Option<(usize, usize)>| {
        let (bi, bj) = (&basis[i], &basis[j]);
        let (ta, tb) = (bi.type_index, bj.type_index);
        let (sa, sb) = (&label_sets[ta], &label_sets[tb]);
        report.pairs_checked += match labels {
            Some(_) => 1,
            None => (sa.elements.len() * sb.elements.len()) as u64,
        };
        let bound = bi.perversity + bj.perversity;
        for (tc, component) in orb.basis_product(i, j) {
            let g = partitions[tc].gcd() as u32;
            let (alive, first) = match labels {
                Some((x, y)) => {
                    let ok = sum_in_torsion(&sa.numerators[x], sa.den, &sb.numerators[y], sb.den, g);
                    (ok as u64, ok.then_some((x, y)))
                }
                None => {
                    let s = &survivor_table[&(ta, tb, tc)];
                    (s.count, s.first)
                }
            };
            let total = match labels {
                Some(_) => 1,
                None => (sa.elements.len() * sb.elements.len()) as u64,
            };
            report.components_checked += alive;
            report.components_vanished += total - alive;
            let pervs = orb.perversities(&component);
            let p_gamma = *pervs.last().expect("component is nonzero");
            let bad = match kind {
                CheckKind::Multiplicativity => p_gamma > bound,
                _ => pervs.len() != 1 || p_gamma != bound,
            };
            if bad {
                if let Some((x, y)) = first {
                    report.record(alive, || {
                        let sum = sa.elements[x].add(&sb.elements[y]).expect("same rank");
                        Violation {
                            alpha: format_class(alg, &bi.nu, &sa.elements[x], &bi.labels),
                            beta: format_class(alg, &bj.nu, &sb.elements[y], &bj.labels),
                            lambda: partitions[tc].to_string(),
                            sigma_tau: sum.to_string(),
                            p_alpha: bi.perversity,
                            p_beta: bj.perversity,
                            p_gamma,
                            detail: (pervs.len() > 1).then(|| format!("mixed perversities {pervs:?}")),
                        }
                    });
                }
            }
        }
    };

    let report = run_pool(options.jobs, || match options.mode {
        Mode::Exhaustive => (0..basis.len())
            .into_par_iter()
            .map(|i| {
                let mut r = template.empty_like();
                for j in 0..basis.len() {
                    check_pair(&mut r, i, j, None);
                }
                r
            })
            .reduce(|| template.empty_like(), CheckReport::merge),
        Mode::Sampled { samples, seed } => {
            let offsets: Vec<usize> = basis
                .iter()
                .scan(0usize, |acc, b| {
                    let here = *acc;
                    *acc += label_sets[b.type_index].elements.len();
                    Some(here)
                })
                .collect();
            let total = offsets.last().map_or(0, |&o| o + label_sets[basis.last().unwrap().type_index].elements.len());
            let locate = |k: usize| {
                let i = offsets.partition_point(|&o| o <= k) - 1;
                (i, k - offsets[i])
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws: Vec<(usize, usize)> =
                (0..samples).map(|_| (rng.random_range(0..total), rng.random_range(0..total))).collect();
            draws
                .par_iter()
                .map(|&(ka, kb)| {
                    let mut r = template.empty_like();
                    let ((i, x), (j, y)) = (locate(ka), locate(kb));
                    check_pair(&mut r, i, j, Some((x, y)));
                    r
                })
                .reduce(|| template.empty_like(), CheckReport::merge)
        }
    });
    Ok(CheckReport { elapsed_ms: start.elapsed().as_millis() as u64, ..report })
}

/// Surface-level product check (`n = 1`), valid for every model.
pub fn check_surface_products(kind: CheckKind, model: &SurfaceModel) -> Result<CheckReport> {
    let start = Instant::now();
    let mut report = CheckReport::new(kind, model.case.slug(), 1, Mode::Exhaustive);
    for x in model.monomials() {
        for y in model.monomials() {
            report.pairs_checked += 1;
            let prod = model.surface_product(&SurfaceClass::monomial(x), &SurfaceClass::monomial(y));
            let bound = model.perversity(x) + model.perversity(y);
            for &z in prod.terms.keys() {
                report.components_checked += 1;
                let p = model.perversity(z);
                let bad = match kind {
                    CheckKind::Multiplicativity => p > bound,
                    CheckKind::StrongSplitting => p != bound,
                    _ => return Err(Error::Usage(format!("{kind} is not a product check"))),
                };
                if bad {
                    report.record(1, || Violation {
                        alpha: model.monomial_name(x),
                        beta: model.monomial_name(y),
                        lambda: "(1)".into(),
                        sigma_tau: TorsionElement::zero(model.torsion.rank()).to_string(),
                        p_alpha: model.perversity(x),
                        p_beta: model.perversity(y),
                        p_gamma: p,
                        detail: None,
                    });
                }
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Multiplicativity of the perverse filtration on `A^[[n]] × A`.
pub fn check_multiplicativity(model: &SurfaceModel, n: usize, options: CheckOptions) -> Result<CheckReport> {
    product_check_for_model(CheckKind::Multiplicativity, model, n, options)
}

/// Strong splitting: products of pure classes are pure of additive perversity.
pub fn check_strong_splitting(model: &SurfaceModel, n: usize, options: CheckOptions) -> Result<CheckReport> {
    product_check_for_model(CheckKind::StrongSplitting, model, n, options)
}

fn product_check_for_model(
    kind: CheckKind,
    model: &SurfaceModel,
    n: usize,
    options: CheckOptions,
) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if !model.compact {
        if n == 1 {
            return check_surface_products(kind, model);
        }
        return Err(Error::UnsupportedModel(model.case.to_string()));
    }
    let orb = SymmetricOrbifold::new(FrobeniusAlgebra::from_surface(model)?, n)?;
    check_products(kind, &orb, &model.torsion, model.case.slug(), options)
}

fn all_keys(factors: usize, dim: usize) -> impl Iterator<Item = Vec<Mask>> {
    (0..dim.pow(factors as u32))
        .map(move |code| (0..factors).map(|i| ((code / dim.pow(i as u32)) % dim) as Mask).collect())
}

/// Sign of `∫ x·y` for monomials on `Aⁿ`, or 0.
fn monomial_pairing(model: &SurfaceModel, x: &[Mask], y: &[Mask]) -> i64 {
    let top = model.top_monomial();
    match tensor_monomial_product(x, y) {
        Some((key, sign)) if key.iter().all(|&m| m == top) => sign,
        _ => 0,
    }
}

/// On `Aⁿ`: `p(x) + p(dual x) = 2n` for every monomial, and `⟨x, y⟩ = 0`
/// whenever `p(x) + p(y) < 2n`.
pub fn check_duality(model: &SurfaceModel, n: usize) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if !model.compact {
        return Err(Error::UnsupportedModel(model.case.to_string()));
    }
    let start = Instant::now();
    let mut report = CheckReport::new(CheckKind::Duality, model.case.slug(), n, Mode::Exhaustive);
    let dim = 1usize << model.generator_count();
    let target = 2 * model.defect() * n as u32;
    let keys: Vec<Vec<Mask>> = all_keys(n, dim).collect();
    let name = |k: &[Mask]| k.iter().map(|&m| model.monomial_name(m)).collect::<Vec<_>>().join(" x ");
    for x in &keys {
        let dual = model.poincare_dual(x)?;
        let (y, _) = dual.terms.iter().next().expect("dual is a signed monomial");
        let (px, py) = (model.tensor_perversity(x), model.tensor_perversity(y));
        report.pairs_checked += 1;
        report.record((px + py != target) as u64, || Violation {
            alpha: name(x),
            beta: name(y),
            lambda: "dual".into(),
            sigma_tau: String::new(),
            p_alpha: px,
            p_beta: py,
            p_gamma: px + py,
            detail: Some(format!("expected perversity sum {target}")),
        });
    }
    let vanishing = run_pool(None, || {
        keys.par_iter()
            .map(|x| {
                let mut r = report.empty_like();
                let px = model.tensor_perversity(x);
                for y in &keys {
                    let py = model.tensor_perversity(y);
                    if px + py >= target {
                        continue;
                    }
                    r.pairs_checked += 1;
                    let v = monomial_pairing(model, x, y);
                    r.record((v != 0) as u64, || Violation {
                        alpha: name(x),
                        beta: name(y),
                        lambda: "pairing".into(),
                        sigma_tau: String::new(),
                        p_alpha: px,
                        p_beta: py,
                        p_gamma: px + py,
                        detail: Some(format!("pairing {v} with perversity sum below {target}")),
                    });
                }
                r
            })
            .reduce(|| report.empty_like(), CheckReport::merge)
    });
    let mut report = report.merge(vanishing);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Pushforward along the negated summation map `h: A^m → A`, via
/// `∫_A h_*(x)·y = ∫_{A^m} x·h^*(y)`.
fn negated_sum_pushforward(model: &SurfaceModel, x: &TensorClass) -> Result<SurfaceClass> {
    let m = x.factors();
    let mut out = SurfaceClass::zero();
    for b in model.monomials() {
        let dual = model.poincare_dual(&[b])?;
        let mut pulled = TensorClass::zero(m);
        for (key, c) in &dual.terms {
            let sign = if model.degree(key[0]) % 2 == 1 { -Q::one() } else { Q::one() };
            pulled = pulled.plus(&model.summation_pullback(&SurfaceClass::monomial(key[0]), m)?.scale(*c * sign))?;
        }
        out.add(b, model.pairing(x, &pulled)?);
    }
    Ok(out)
}

/// `Γ_*(γ) = Σᵢ (γ·αᵢ) ⊗ h_*(αⁱ)` for the graph of the negated summation map
/// `A^{a−1} → A`, over Poincaré-dual monomial bases of `A^{a−1}`.
pub fn graph_pushforward(model: &SurfaceModel, gamma: &TensorClass) -> Result<TensorClass> {
    let m = gamma.factors();
    if m == 0 {
        return Err(Error::Domain("the graph needs a ≥ 2".into()));
    }
    if !model.compact {
        return Err(Error::UnsupportedModel(model.case.to_string()));
    }
    let dim = 1usize << model.generator_count();
    let mut out = TensorClass::zero(m + 1);
    for alpha in all_keys(m, dim) {
        let left = gamma.multiply(&TensorClass::monomial(alpha.clone()))?;
        if left.is_zero() {
            continue;
        }
        let dual = model.poincare_dual(&alpha)?;
        let right = negated_sum_pushforward(model, &dual)?;
        let mut right_tensor = TensorClass::zero(1);
        for (&b, &c) in &right.terms {
            right_tensor.add(vec![b], c);
        }
        out = out.plus(&left.tensor(&right_tensor))?;
    }
    Ok(out)
}

/// Diagonal estimate `p(sym Δ^{(k)}(b)) ≤ p(b) + 2(k−1)` for `k ≤ n` and the
/// graph estimate `p(Γ_*(γ)) ≤ p(γ) + 2` for `2 ≤ a ≤ n`.
pub fn check_diagonal(model: &SurfaceModel, n: usize) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if !model.compact {
        return Err(Error::UnsupportedModel(model.case.to_string()));
    }
    let start = Instant::now();
    let mut report = CheckReport::new(CheckKind::Diagonal, model.case.slug(), n, Mode::Exhaustive);
    let alg = FrobeniusAlgebra::from_surface(model)?;
    let r = model.defect();
    for k in 1..=n {
        let orb = SymmetricOrbifold::new(alg.clone(), k)?;
        let id = orb.group().identity();
        for b in 0..alg.dim() as Index {
            let mut x = crate::orbifold::OrbifoldElement::zero();
            for (key, c) in alg.comultiply(&crate::frobenius::AlgebraClass::basis(b), k)?.terms {
                x.add(id, key.iter().copied().collect::<Labels>(), c);
            }
            let class = orb.project_to_nu(&orb.symmetrize(&x), &Partition::ones(k))?;
            report.pairs_checked += 1;
            let Some(p) = orb.perversity(&class) else { continue };
            report.components_checked += 1;
            let bound = alg.perversity(b) + 2 * (k as u32 - 1) * r;
            report.record((p > bound) as u64, || Violation {
                alpha: alg.element(b).name.clone(),
                beta: format!("diagonal A^{k}"),
                lambda: Partition::ones(k).to_string(),
                sigma_tau: String::new(),
                p_alpha: alg.perversity(b),
                p_beta: 2 * (k as u32 - 1) * r,
                p_gamma: p,
                detail: None,
            });
        }
    }
    let dim = 1usize << model.generator_count();
    for a in 2..=n {
        let keys: Vec<Vec<Mask>> = all_keys(a - 1, dim).collect();
        let graph = keys
            .par_iter()
            .map(|g| {
                let mut rep = report.empty_like();
                let pushed = graph_pushforward(model, &TensorClass::monomial(g.clone()))?;
                rep.pairs_checked += 1;
                if let Some(p) = model.class_perversity(&pushed) {
                    rep.components_checked += 1;
                    let pg = model.tensor_perversity(g);
                    rep.record((p > pg + 2) as u64, || Violation {
                        alpha: g.iter().map(|&m| model.monomial_name(m)).collect::<Vec<_>>().join(" x "),
                        beta: format!("graph A^{} -> A^{a}", a - 1),
                        lambda: String::new(),
                        sigma_tau: String::new(),
                        p_alpha: pg,
                        p_beta: 2,
                        p_gamma: p,
                        detail: None,
                    });
                }
                Ok(rep)
            })
            .try_reduce(|| report.empty_like(), |x, y| Ok(x.merge(y)))?;
        report = report.merge(graph);
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Associativity and graded commutativity on random basis triples.
pub fn check_ring_axioms(model: &SurfaceModel, n: usize, samples: usize, seed: u64) -> Result<CheckReport> {
    if !model.compact {
        return Err(Error::UnsupportedModel(model.case.to_string()));
    }
    let start = Instant::now();
    let orb = SymmetricOrbifold::new(FrobeniusAlgebra::from_surface(model)?, n)?;
    let mut report = CheckReport::new(CheckKind::RingAxioms, model.case.slug(), n, Mode::Sampled { samples, seed });
    let size = orb.invariant_basis().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[usize; 3]> = (0..samples)
        .map(|_| [rng.random_range(0..size), rng.random_range(0..size), rng.random_range(0..size)])
        .collect();
    let basis = orb.invariant_basis();
    let alg = orb.algebra();
    let name = |i: usize| format_labels(alg, &basis[i].labels) + &basis[i].nu.to_string();
    let swept = triples
        .par_iter()
        .map(|&[i, j, k]| {
            let mut r = report.empty_like();
            let (a, b, c) = (orb.basis_element(i), orb.basis_element(j), orb.basis_element(k));
            let ab = orb.product(&a, &b);
            r.pairs_checked += 1;
            let assoc = orb.product(&ab, &c) == orb.product(&a, &orb.product(&b, &c));
            let sign = if basis[i].odd && basis[j].odd { -Q::one() } else { Q::one() };
            let comm = ab == orb.product(&b, &a).scale(sign);
            for (ok, what) in [(assoc, "associativity"), (comm, "graded commutativity")] {
                r.record((!ok) as u64, || Violation {
                    alpha: name(i),
                    beta: name(j),
                    lambda: name(k),
                    sigma_tau: String::new(),
                    p_alpha: basis[i].perversity,
                    p_beta: basis[j].perversity,
                    p_gamma: basis[k].perversity,
                    detail: Some(what.into()),
                });
            }
            r
        })
        .reduce(|| report.empty_like(), CheckReport::merge);
    report = report.merge(swept);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Frobenius axioms of the surface algebra, one violation per failed instance.
pub fn check_frobenius(model: &SurfaceModel) -> Result<CheckReport> {
    let start = Instant::now();
    let alg = FrobeniusAlgebra::from_surface(model)?;
    let mut report = CheckReport::new(CheckKind::Frobenius, model.case.slug(), 1, Mode::Exhaustive);
    for check in alg.validate().checks {
        report.pairs_checked += check.checked;
        report.violation_count += check.failures;
        for w in check.witnesses {
            if report.violations.len() < WITNESS_CAP {
                report.violations.push(Violation {
                    alpha: w,
                    beta: String::new(),
                    lambda: String::new(),
                    sigma_tau: String::new(),
                    p_alpha: 0,
                    p_beta: 0,
                    p_gamma: 0,
                    detail: Some(check.axiom.clone()),
                });
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Canonical-labeling count for `ν` by brute force over all labelings.
pub fn brute_force_label_count(alg: &FrobeniusAlgebra, nu: &Partition) -> u64 {
    let dim = alg.dim() as u64;
    let l = nu.len() as u32;
    let runs = nu.runs();
    let mut count = 0;
    'outer: for code in 0..dim.pow(l) {
        let labels: Labels = (0..l).map(|i| ((code / dim.pow(i)) % dim) as Index).collect();
        let mut start = 0;
        for &(_, len) in &runs {
            for w in labels[start..start + len].windows(2) {
                if w[0] > w[1] || (w[0] == w[1] && alg.is_odd(w[0])) {
                    continue 'outer;
                }
            }
            start += len;
        }
        count += 1;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::SurfaceCase;
    use num_bigint::BigUint;
    use num_traits::Signed;

    fn betti(p: &PerversePolynomial) -> Vec<u64> {
        p.betti().iter().map(|b| b.to_u64_digits().first().copied().unwrap_or(0)).collect()
    }

    #[test]
    fn hilbert_series_examples() {
        let abelian = SurfaceModel::abelian();
        assert_eq!(hilbert_pp(&abelian, 1).unwrap(), abelian.cohomology_pp());
        assert_eq!(betti(&hilbert_pp(&abelian, 2).unwrap()), [1, 4, 13, 32, 44, 32, 13, 4, 1]);
        let line = SurfaceModel::new(SurfaceCase::EllipticTimesLine);
        let h = hilbert_pp(&line, 2).unwrap();
        assert_eq!(betti(&h), [1, 2, 3, 4, 2]);
        assert_eq!(h.total(), BigUint::from(12u32));
        assert!(hilbert_pp(&abelian, 0).is_err());
    }

    #[test]
    fn kummer_series_examples() {
        let abelian = SurfaceModel::abelian();
        assert_eq!(kummer_pp(&abelian, 1).unwrap(), abelian.cohomology_pp());
        assert_eq!(betti(&kummer_pp(&abelian, 2).unwrap()), [1, 4, 28, 92, 134, 92, 28, 4, 1]);
        assert_eq!(kummer_pp(&abelian, 3).unwrap().total(), BigUint::from(2240u32));
        assert_eq!(kummer_quotient_pp(&abelian, 1).unwrap(), PerversePolynomial::one());
        let k3 = kummer_quotient_pp(&abelian, 2).unwrap();
        assert_eq!(betti(&k3), [1, 0, 22, 0, 1]);
        assert_eq!(k3.max_perversity(), Some(2));
    }

    #[test]
    fn non_compact_kummer_quotient() {
        // E × ℂ at n = 2: (1, 2, 6, 10, 5) / (1 + q)² = 1 + 5q²
        let line = SurfaceModel::new(SurfaceCase::EllipticTimesLine);
        assert_eq!(betti(&kummer_pp(&line, 2).unwrap()), [1, 2, 6, 10, 5]);
        assert_eq!(betti(&kummer_quotient_pp(&line, 2).unwrap()), [1, 0, 5]);
    }

    #[test]
    fn divisibility_for_all_models() {
        for case in SurfaceCase::ALL {
            let model = SurfaceModel::new(case);
            for n in 1..=6 {
                let q = kummer_quotient_pp(&model, n).unwrap();
                assert_eq!(q.multiply(&model.cohomology_pp()), kummer_pp(&model, n).unwrap());
            }
        }
    }

    #[test]
    fn torsion_label_counts() {
        for case in SurfaceCase::ALL {
            let model = SurfaceModel::new(case);
            for n in 1..=8 {
                for nu in enumerate_partitions(n).unwrap() {
                    let g = nu.gcd() as u32;
                    let elems = model.torsion.elements(g).unwrap();
                    assert_eq!(BigUint::from(elems.len()), model.torsion_count(g).unwrap());
                    assert!(elems.iter().all(|e| e.is_m_torsion(g)));
                }
            }
        }
    }

    #[test]
    fn dimension_identity_by_brute_force() {
        for case in SurfaceCase::ALL {
            let model = SurfaceModel::new(case);
            let gens: Vec<(String, u32)> = model.generators.iter().map(|g| (g.name.clone(), g.perversity)).collect();
            let alg = FrobeniusAlgebra::exterior(&gens);
            let max_n = if model.generator_count() == 4 { 5 } else { 6 };
            for n in 1..=max_n {
                let expected: u64 = enumerate_partitions(n)
                    .unwrap()
                    .iter()
                    .map(|nu| {
                        let count = model.torsion_count(nu.gcd() as u32).unwrap();
                        count.to_u64_digits()[0] * brute_force_label_count(&alg, nu)
                    })
                    .sum();
                let total = kummer_pp(&model, n).unwrap().total();
                assert_eq!(total, BigUint::from(expected), "{case} n = {n}");
            }
        }
    }

    #[test]
    fn kummer_class_constructor_and_perversity() {
        let orb = SymmetricOrbifold::abelian(2).unwrap();
        let torsion = TorsionGroup::divisible(4);
        let two = Partition::new(vec![2]).unwrap();
        let half = TorsionElement::new(2, vec![1, 0, 0, 0]);
        let gd = KummerClass::new(&torsion, half.clone(), NuClass::monomial(two.clone(), &[0b1100])).unwrap();
        assert_eq!(gd.perversity(&orb), 3);
        let ones = Partition::ones(2);
        assert!(KummerClass::new(&torsion, half.clone(), NuClass::monomial(ones.clone(), &[0, 0])).is_err());
        let unit = KummerClass::new(&torsion, TorsionElement::zero(4), NuClass::monomial(ones, &[0, 0])).unwrap();
        assert_eq!(unit.perversity(&orb), 0);
        let third = TorsionElement::new(3, vec![1, 0, 0, 0]);
        assert!(KummerClass::new(&torsion, third, NuClass::monomial(two.clone(), &[0])).is_err());
        assert!(matches!(
            KummerClass::new(&torsion, TorsionElement::zero(2), NuClass::monomial(two, &[0])),
            Err(Error::GroupMismatch(_))
        ));
        let orb3 = SymmetricOrbifold::abelian(3).unwrap();
        let three = Partition::new(vec![3]).unwrap();
        let c = KummerClass::new(&torsion, TorsionElement::new(3, vec![1, 2, 0, 1]), NuClass::monomial(three, &[0]))
            .unwrap();
        assert_eq!(c.perversity(&orb3), 2);
    }

    #[test]
    fn kummer_product_gcd_rule() {
        let orb = SymmetricOrbifold::abelian(2).unwrap();
        let torsion = TorsionGroup::divisible(4);
        let two = Partition::new(vec![2]).unwrap();
        let ones = Partition::ones(2);
        let labels = torsion.elements(2).unwrap();
        let mut vanished = 0;
        for s in &labels {
            for t in &labels {
                let a = KummerClass::new(&torsion, s.clone(), NuClass::monomial(two.clone(), &[0])).unwrap();
                let b = KummerClass::new(&torsion, t.clone(), NuClass::monomial(two.clone(), &[0])).unwrap();
                let prod = kummer_product(&orb, &torsion, &a, &b).unwrap();
                let sum = s.add(t).unwrap();
                let key = (ones.clone(), sum.clone());
                if sum.is_zero() {
                    assert!(!prod[&key].is_zero());
                    assert_eq!(sum, TorsionElement::zero(4));
                } else {
                    assert!(!prod.contains_key(&key));
                    vanished += 1;
                }
            }
        }
        assert_eq!(vanished, 240);
        let neg = TorsionElement::new(2, vec![1, 1, 0, 0]);
        let a = KummerClass::new(&torsion, neg.clone(), NuClass::monomial(two.clone(), &[0])).unwrap();
        let b = KummerClass::new(&torsion, neg.negate(), NuClass::monomial(two, &[0])).unwrap();
        let prod = kummer_product(&orb, &torsion, &a, &b).unwrap();
        let expected =
            orb.hilbert_product(&orb.nu_class_of(&a.payload).unwrap(), &orb.nu_class_of(&b.payload).unwrap());
        assert_eq!(prod[&(ones.clone(), TorsionElement::zero(4))], expected[&ones]);
    }

    #[test]
    fn unit_kummer_class_acts_trivially() {
        let orb = SymmetricOrbifold::abelian(2).unwrap();
        let torsion = TorsionGroup::divisible(4);
        let unit = KummerClass::new(&torsion, TorsionElement::zero(4), NuClass::monomial(Partition::ones(2), &[0, 0]))
            .unwrap();
        let two = Partition::new(vec![2]).unwrap();
        let sigma = TorsionElement::new(2, vec![0, 1, 1, 0]);
        let b = KummerClass::new(&torsion, sigma.clone(), NuClass::monomial(two.clone(), &[0b0110])).unwrap();
        let prod = kummer_product(&orb, &torsion, &unit, &b).unwrap();
        assert_eq!(prod.len(), 1);
        assert_eq!(prod[&(two, sigma)], b.payload);
    }

    #[test]
    fn product_checks_pass_for_n_up_to_2() {
        let model = SurfaceModel::abelian();
        for n in 1..=2 {
            for kind in [CheckKind::Multiplicativity, CheckKind::StrongSplitting] {
                let report = product_check_for_model(kind, &model, n, CheckOptions::default()).unwrap();
                assert!(report.passed(), "{kind} n={n}: {:?}", report.violations);
            }
        }
        let r = check_multiplicativity(&model, 2, CheckOptions::default()).unwrap();
        // 144 payloads; the 16 of type (2) carry 16 labels each
        assert_eq!(r.pairs_checked, (128 + 16 * 16u64).pow(2));
        assert!(r.components_vanished > 0);
    }

    #[test]
    fn corrupted_perversity_table_is_caught() {
        let alg = FrobeniusAlgebra::abelian_surface().with_perversity(0b0100, 0).unwrap();
        let orb = SymmetricOrbifold::new(alg, 2).unwrap();
        let report = check_products(
            CheckKind::Multiplicativity,
            &orb,
            &TorsionGroup::divisible(4),
            "corrupted",
            CheckOptions::default(),
        )
        .unwrap();
        assert!(!report.passed());
        assert!(report.violation_count > 0);
        assert!(!report.violations.is_empty() && report.violations.len() <= WITNESS_CAP);
        let v = &report.violations[0];
        assert!(v.p_gamma > v.p_alpha + v.p_beta);
    }

    #[test]
    fn surface_level_checks_for_every_model() {
        for case in SurfaceCase::ALL {
            let model = SurfaceModel::new(case);
            for kind in [CheckKind::Multiplicativity, CheckKind::StrongSplitting] {
                assert!(product_check_for_model(kind, &model, 1, CheckOptions::default()).unwrap().passed());
            }
            if !model.compact {
                assert!(matches!(
                    check_multiplicativity(&model, 2, CheckOptions::default()),
                    Err(Error::UnsupportedModel(_))
                ));
                assert!(matches!(check_duality(&model, 1), Err(Error::UnsupportedModel(_))));
            }
        }
    }

    #[test]
    fn sampled_mode_is_reproducible_and_independent_of_workers() {
        let model = SurfaceModel::abelian();
        let run = |jobs| {
            let opts = CheckOptions { mode: Mode::Sampled { samples: 300, seed: 11 }, jobs };
            CheckReport { elapsed_ms: 0, ..check_strong_splitting(&model, 2, opts).unwrap() }
        };
        let a = run(Some(1));
        assert_eq!(a, run(Some(3)));
        assert_eq!(a.pairs_checked, 300);
        assert_eq!(a.seed, Some(11));
        assert!(a.passed());
    }

    #[test]
    fn duality_checks() {
        let model = SurfaceModel::abelian();
        for n in 1..=2 {
            let r = check_duality(&model, n).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
        }
        // ⟨1, x₁⟩ = 0 with perversity sum 0 < 2
        assert_eq!(monomial_pairing(&model, &[0], &[1]), 0);
    }

    #[test]
    fn anti_diagonal_class() {
        let model = SurfaceModel::abelian();
        let pushed = graph_pushforward(&model, &TensorClass::unit(1)).unwrap();
        assert_eq!(pushed.terms.len(), 16);
        assert!(pushed.terms.keys().all(|k| model.tensor_perversity(k) == 2));
        assert!(pushed.terms.keys().all(|k| k[0] | k[1] == 15 && k[0] & k[1] == 0));
        // independent oracle: the anti-diagonal is the pullback of the diagonal by (x, y) ↦ (x, −y)
        let alg = FrobeniusAlgebra::abelian_surface();
        let diag = alg.comultiply(&alg.unit(), 2).unwrap();
        for (key, c) in &diag.terms {
            let sign = if alg.degree(key[1]) % 2 == 1 { -*c } else { *c };
            let got = pushed.terms.get(&vec![key[0] as Mask, key[1] as Mask]).copied().unwrap_or_default();
            assert_eq!(got.abs(), sign.abs());
        }
    }

    #[test]
    fn diagonal_and_graph_estimates() {
        let model = SurfaceModel::abelian();
        let r = check_diagonal(&model, 2).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.pairs_checked, 16 + 16 + 16);
    }

    #[test]
    fn ring_axioms_and_frobenius_checks() {
        let model = SurfaceModel::abelian();
        let r = check_ring_axioms(&model, 2, 200, 5).unwrap();
        assert!(r.passed());
        assert_eq!(r.pairs_checked, 200);
        assert!(check_frobenius(&model).unwrap().passed());
        assert!(check_frobenius(&SurfaceModel::new(SurfaceCase::EllipticTimesLine)).is_err());
    }

    #[test]
    fn report_json_fields() {
        let r = check_surface_products(CheckKind::Multiplicativity, &SurfaceModel::abelian()).unwrap();
        let v = r.to_json();
        for field in ["check", "model", "n", "mode", "pairs_checked", "violations", "elapsed_ms"] {
            assert!(v.get(field).is_some(), "{field}");
        }
        assert!(v.get("seed").is_none());
        let back: CheckReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn residue_membership_matches_group_arithmetic() {
        let torsion = TorsionGroup::divisible(2);
        let (a, b) = (LabelSet::new(&torsion, 2).unwrap(), LabelSet::new(&torsion, 3).unwrap());
        for (i, x) in a.elements.iter().enumerate() {
            for (j, y) in b.elements.iter().enumerate() {
                let sum = x.add(y).unwrap();
                for g in 1..=6 {
                    assert_eq!(sum_in_torsion(&a.numerators[i], 2, &b.numerators[j], 3, g), sum.is_m_torsion(g));
                }
            }
        }
    }
}
