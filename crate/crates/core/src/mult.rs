//! Composition multiplicities of Verma modules and their inverses.
//!
//! Providers work on plain coordinate vectors. Block providers use block
//! coordinates; providers attached to an algebra use the canonical ambient
//! coordinates of its weights.

use crate::linalg::Matrix;
use crate::rational::{is_int, is_pos_int, q, sign_pow, to_i64, Q};
use crate::rootdata::{
    block_rho, AlgebraDescriptor, AlgebraKind, BlockType, Parabolic, RootBasis, RootDataError, SuperRootSystem,
    Weight,
};
use crate::weights::{is_singular, is_typical, w_atypical_forms, Witnesses, WeightsError};
use dashmap::DashMap;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultError {
    #[error("provider-gap: {reason} (needed: {needed:?})")]
    ProviderGap { reason: String, needed: Vec<String> },
    #[error("ideal-not-finite: {0}")]
    IdealNotFinite(String),
    #[error("singular-atypical-unsupported: {0}")]
    SingularAtypicalUnsupported(String),
    #[error("third-sum-undefined: {0}")]
    ThirdSumUndefined(String),
    #[error("not-atypical: {0}")]
    NotAtypical(String),
    #[error("parse-error: {0}")]
    Parse(String),
    #[error("invariant-violation: {0}")]
    InvariantViolation(String),
    #[error("io-error: {0}")]
    Io(String),
    #[error(transparent)]
    Root(#[from] RootDataError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
}

pub type Result<T> = std::result::Result<T, MultError>;

pub type Coords = Vec<Q>;

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(x: &[Q], s: &Q, y: &[Q]) -> Coords {
    x.iter().zip(y).map(|(a, b)| a + s * b).collect()
}

fn fmt_coords(c: &[Q]) -> String {
    c.iter().map(crate::rational::fmt_q).collect::<Vec<_>>().join(",")
}

/// A finite B-order ideal below ν: all μ ≤ ν with height(ν − μ) ≤ depth.
/// Without a depth the ideal is the closure of the supports, which must
/// stay below `max_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderBound {
    pub depth: Option<i64>,
    pub max_size: usize,
}

impl OrderBound {
    pub const DEFAULT_MAX: usize = 20_000;

    pub fn depth(d: i64) -> Self {
        OrderBound { depth: Some(d), max_size: Self::DEFAULT_MAX }
    }

    pub fn closure() -> Self {
        OrderBound { depth: None, max_size: Self::DEFAULT_MAX }
    }

    pub fn admits(&self, h: i64) -> bool {
        h >= 0 && self.depth.map_or(true, |d| h <= d)
    }

    fn shrink(&self, by: i64) -> OrderBound {
        OrderBound { depth: self.depth.map(|d| d - by), max_size: self.max_size }
    }
}

/// a(ν, μ) = [M(ν) : L(μ)].
pub trait MultiplicityProvider: Send + Sync {
    fn tag(&self) -> String;

    /// Height of ν − μ in the B-order; `None` unless μ ≤ ν.
    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64>;

    /// All μ with a(ν, μ) ≠ 0.
    fn support(&self, nu: &[Q]) -> Result<Vec<(Coords, i64)>>;

    fn support_within(&self, nu: &[Q], bound: &OrderBound) -> Result<Vec<(Coords, i64)>> {
        Ok(self
            .support(nu)?
            .into_iter()
            .filter(|(mu, _)| self.height(nu, mu).is_some_and(|h| bound.admits(h)))
            .collect())
    }

    fn value(&self, nu: &[Q], mu: &[Q]) -> Result<i64> {
        if self.height(nu, mu).is_none() {
            return Ok(0);
        }
        Ok(self.support(nu)?.into_iter().find(|(m, _)| m == mu).map_or(0, |(_, v)| v))
    }
}

/// b(ν, μ): Σ_η a(ν, η) b(η, μ) = δ_{ν,μ}.
pub trait InverseProvider: Send + Sync {
    fn tag(&self) -> String;

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64>;

    /// Nonzero values b(ν, μ) for μ in the ideal described by `bound`.
    fn support(&self, nu: &[Q], bound: &OrderBound) -> Result<Vec<(Coords, i64)>>;

    fn value(&self, nu: &[Q], mu: &[Q]) -> Result<i64> {
        let Some(h) = self.height(nu, mu) else { return Ok(0) };
        Ok(self.support(nu, &OrderBound::depth(h))?.into_iter().find(|(m, _)| m == mu).map_or(0, |(_, v)| v))
    }
}

impl<T: MultiplicityProvider + ?Sized> MultiplicityProvider for Arc<T> {
    fn tag(&self) -> String {
        (**self).tag()
    }
    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        (**self).height(nu, mu)
    }
    fn support(&self, nu: &[Q]) -> Result<Vec<(Coords, i64)>> {
        (**self).support(nu)
    }
    fn value(&self, nu: &[Q], mu: &[Q]) -> Result<i64> {
        (**self).value(nu, mu)
    }
}

impl<T: InverseProvider + ?Sized> InverseProvider for Arc<T> {
    fn tag(&self) -> String {
        (**self).tag()
    }
    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        (**self).height(nu, mu)
    }
    fn support(&self, nu: &[Q], bound: &OrderBound) -> Result<Vec<(Coords, i64)>> {
        (**self).support(nu, bound)
    }
    fn value(&self, nu: &[Q], mu: &[Q]) -> Result<i64> {
        (**self).value(nu, mu)
    }
}

// ---------------------------------------------------------------------------
// Even root data and the linkage provider

/// How heights are measured.
#[derive(Debug, Clone)]
enum Order {
    /// Simple roots as columns, in the same coordinates as the weights.
    Simple(Matrix),
    Basis(RootBasis),
}

/// Positive roots of a reductive Lie algebra with coroot functionals and ρ.
#[derive(Debug, Clone)]
pub struct EvenRootData {
    label: String,
    roots: Vec<Coords>,
    /// `(x, β∨) = dot(x, coroot)`.
    coroots: Vec<Coords>,
    rho: Coords,
    order: Order,
}

impl EvenRootData {
    /// sl(m) (or gl(m)) in ε-coordinates.
    pub fn type_a(m: usize) -> Self {
        let mut roots = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let mut v = vec![Q::zero(); m];
                v[i] = q(1);
                v[j] = q(-1);
                roots.push(v);
            }
        }
        let simple: Vec<Coords> = (0..m.saturating_sub(1))
            .map(|i| (0..m).map(|k| q((k == i) as i64 - (k == i + 1) as i64)).collect())
            .collect();
        EvenRootData {
            label: format!("sl({m})"),
            coroots: roots.clone(),
            roots,
            rho: block_rho(BlockType::A, m),
            order: Order::Simple(Matrix::from_cols(&simple, m)),
        }
    }

    /// sp(2m) in ε-coordinates.
    pub fn type_c(m: usize) -> Self {
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for s in [-1, 1] {
                    let mut v = vec![Q::zero(); m];
                    v[i] = q(1);
                    v[j] = q(s);
                    roots.push(v.clone());
                    coroots.push(v);
                }
            }
            let mut v = vec![Q::zero(); m];
            v[i] = q(2);
            roots.push(v);
            let mut c = vec![Q::zero(); m];
            c[i] = q(1);
            coroots.push(c);
        }
        let simple: Vec<Coords> = crate::rootdata::standard_block_basis(BlockType::C, m)
            .into_iter()
            .map(|v| v.into_iter().map(q).collect())
            .collect();
        EvenRootData {
            label: format!("sp({})", 2 * m),
            roots,
            coroots,
            rho: block_rho(BlockType::C, m),
            order: Order::Simple(Matrix::from_cols(&simple, m)),
        }
    }

    /// The roots of g₀' positive for B, with ρ_B and heights in the B-order.
    /// The even dot action by ρ_B agrees with the one by ρ₀ whenever ρ_B − ρ₀
    /// is W-invariant, which holds for the distinguished bases.
    pub fn even_part(basis: &RootBasis) -> Self {
        let sys = basis.system().clone();
        let mut roots: Vec<Coords> = Vec::new();
        for (r, p) in sys.root_vectors().iter().zip(basis.positive_flags()) {
            if *p && sys.is_g0_prime(r) && !roots.iter().any(|x| x.as_slice() == r.weight.coords()) {
                roots.push(r.weight.coords().to_vec());
            }
        }
        let coroots = roots
            .iter()
            .map(|b| {
                let bb = sys.form_vec(b, b);
                let d = sys.dim();
                (0..d)
                    .map(|i| {
                        let s = if i < sys.eps_dim() { q(2) } else { q(-2) };
                        s * &b[i] / &bb
                    })
                    .collect()
            })
            .collect();
        EvenRootData {
            label: format!("{}_0", sys_label(&sys)),
            roots,
            coroots,
            rho: basis.rho().coords().to_vec(),
            order: Order::Basis(basis.clone()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        let d: Coords = nu.iter().zip(mu).map(|(a, b)| a - b).collect();
        match &self.order {
            Order::Simple(m) => {
                if m.cols() == 0 {
                    return d.iter().all(|x| x.is_zero()).then_some(0);
                }
                let c = m.solve(&d)?;
                c.iter().all(crate::rational::is_nonneg_int).then(|| c.iter().map(|x| to_i64(x).unwrap()).sum())
            }
            Order::Basis(b) => {
                let sys = b.system();
                b.depth(&sys.from_formal(mu), &sys.from_formal(nu))
            }
        }
    }

    fn canon(&self, v: Coords) -> Coords {
        match &self.order {
            Order::Basis(b) => b.system().from_formal(&v).coords().to_vec(),
            Order::Simple(_) => v,
        }
    }

    /// Indices of roots β with (ν+ρ, β∨) ∈ ℤ.
    fn integral_roots(&self, nu: &[Q]) -> Vec<usize> {
        let shifted: Coords = nu.iter().zip(&self.rho).map(|(a, b)| a + b).collect();
        (0..self.roots.len()).filter(|&i| is_int(&dot(&shifted, &self.coroots[i]))).collect()
    }

    pub fn integral_rank(&self, nu: &[Q]) -> usize {
        let idx = self.integral_roots(nu);
        if idx.is_empty() {
            return 0;
        }
        let cols: Vec<Coords> = idx.iter().map(|&i| self.roots[i].clone()).collect();
        Matrix::from_cols(&cols, self.rho.len()).rank()
    }

    /// s_β·ν for β with (ν+ρ, β∨) ∈ ℤ>0.
    fn lower_reflections(&self, nu: &[Q]) -> Vec<Coords> {
        let shifted: Coords = nu.iter().zip(&self.rho).map(|(a, b)| a + b).collect();
        let mut out = Vec::new();
        for (b, c) in self.roots.iter().zip(&self.coroots) {
            let n = dot(&shifted, c);
            if is_pos_int(&n) {
                out.push(self.canon(axpy(nu, &-n, b)));
            }
        }
        out
    }
}

fn sys_label(sys: &SuperRootSystem) -> String {
    let e = sys.eps_dim();
    let d = sys.del_dim();
    format!("{:?}({e}|{d})", sys.kind()).to_lowercase()
}

/// Verma multiplicities in blocks whose integral root system has rank ≤ 2.
/// There every Kazhdan-Lusztig polynomial is 1, so a(ν, μ) = 1 exactly when
/// μ is strongly linked to ν. Larger integral ranks report a provider gap.
#[derive(Debug, Clone)]
pub struct LinkageProvider {
    data: EvenRootData,
}

impl LinkageProvider {
    pub const MAX_INTEGRAL_RANK: usize = 2;

    pub fn new(data: EvenRootData) -> Self {
        LinkageProvider { data }
    }

    pub fn data(&self) -> &EvenRootData {
        &self.data
    }

    /// {μ ↑ ν}: the closure of ν under lowering reflections.
    pub fn linked_below(&self, nu: &[Q]) -> Result<Vec<Coords>> {
        let r = self.data.integral_rank(nu);
        if r > Self::MAX_INTEGRAL_RANK {
            return Err(MultError::ProviderGap {
                reason: format!("{}: integral root system of rank {r} needs Kazhdan-Lusztig data", self.data.label),
                needed: vec![fmt_coords(nu)],
            });
        }
        let start = self.data.canon(nu.to_vec());
        let mut seen: HashSet<Coords> = HashSet::from([start.clone()]);
        let mut out = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in self.data.lower_reflections(&x) {
                if seen.insert(y.clone()) {
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }
}

impl MultiplicityProvider for LinkageProvider {
    fn tag(&self) -> String {
        format!("linkage:{}", self.data.label)
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        self.data.height(nu, mu)
    }

    fn support(&self, nu: &[Q]) -> Result<Vec<(Coords, i64)>> {
        Ok(self.linked_below(nu)?.into_iter().map(|m| (m, 1)).collect())
    }
}

/// sl(2) in coordinates (l₁, l₂).
pub fn sl2_provider() -> LinkageProvider {
    LinkageProvider::new(EvenRootData::type_a(2))
}

/// Built-in provider for one simple block of a.
pub fn block_provider(ty: BlockType, m: usize) -> LinkageProvider {
    match ty {
        BlockType::A => LinkageProvider::new(EvenRootData::type_a(m)),
        BlockType::C => LinkageProvider::new(EvenRootData::type_c(m)),
    }
}

/// a(ν, μ) = δ_{ν,μ}.
#[derive(Debug, Clone)]
pub struct DiagonalProvider {
    basis: RootBasis,
}

impl DiagonalProvider {
    pub fn new(basis: RootBasis) -> Self {
        DiagonalProvider { basis }
    }
}

impl MultiplicityProvider for DiagonalProvider {
    fn tag(&self) -> String {
        "diagonal".into()
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        let sys = self.basis.system();
        self.basis.depth(&sys.from_formal(mu), &sys.from_formal(nu))
    }

    fn support(&self, nu: &[Q]) -> Result<Vec<(Coords, i64)>> {
        Ok(vec![(self.basis.system().from_formal(nu).coords().to_vec(), 1)])
    }
}

// ---------------------------------------------------------------------------
// Products over the blocks of a

/// a^a(ν, μ) = Π_i a^{a_i}(ν^{a_i}, μ^{a_i}) when ν^z = μ^z; ambient
/// coordinates of g.
pub struct ProductProvider {
    par: Arc<Parabolic>,
    blocks: Vec<Arc<dyn MultiplicityProvider>>,
}

impl ProductProvider {
    pub fn new(par: Arc<Parabolic>, blocks: Vec<Arc<dyn MultiplicityProvider>>) -> Result<Self> {
        if blocks.len() != par.blocks().len() {
            return Err(MultError::InvariantViolation(format!(
                "{} block providers for {} blocks",
                blocks.len(),
                par.blocks().len()
            )));
        }
        Ok(ProductProvider { par, blocks })
    }

    /// Built-in providers for every block.
    pub fn builtin(par: Arc<Parabolic>) -> Self {
        let blocks =
            par.blocks().iter().map(|b| Arc::new(block_provider(b.ty, b.size())) as Arc<dyn MultiplicityProvider>).collect();
        ProductProvider { par, blocks }
    }

    pub fn parabolic(&self) -> &Arc<Parabolic> {
        &self.par
    }

    fn weight(&self, c: &[Q]) -> Weight {
        self.par.system().from_formal(c)
    }
}

pub fn product_provider(par: Arc<Parabolic>, blocks: Vec<Arc<dyn MultiplicityProvider>>) -> Result<ProductProvider> {
    ProductProvider::new(par, blocks)
}

impl MultiplicityProvider for ProductProvider {
    fn tag(&self) -> String {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.tag()).collect();
        format!("product[{}]", parts.join(" x "))
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        self.par.basis().depth(&self.weight(mu), &self.weight(nu))
    }

    fn value(&self, nu: &[Q], mu: &[Q]) -> Result<i64> {
        let (n, m) = (self.weight(nu), self.weight(mu));
        if self.par.central(&n) != self.par.central(&m) || !self.par.in_qa(&(&n - &m)) {
            return Ok(0);
        }
        let (pn, pm) = (self.par.project(&n), self.par.project(&m));
        let mut v = 1;
        for ((p, a), b) in self.blocks.iter().zip(&pn).zip(&pm) {
            v *= p.value(&a.coords, &b.coords)?;
            if v == 0 {
                break;
            }
        }
        Ok(v)
    }

    fn support(&self, nu: &[Q]) -> Result<Vec<(Coords, i64)>> {
        let n = self.weight(nu);
        let z = self.par.central(&n);
        let proj = self.par.project(&n);
        let mut acc: Vec<(Vec<crate::rootdata::BlockWeight>, i64)> = vec![(Vec::new(), 1)];
        for (p, bw) in self.blocks.iter().zip(&proj) {
            let sup = p.support(&bw.coords)?;
            let mut next = Vec::with_capacity(acc.len() * sup.len());
            for (parts, v) in &acc {
                for (c, w) in &sup {
                    let mut parts = parts.clone();
                    parts.push(crate::rootdata::BlockWeight::new(bw.ty, c.clone()));
                    next.push((parts, v * w));
                }
            }
            acc = next;
        }
        Ok(acc.into_iter().map(|(parts, v)| (self.par.assemble(&parts, &z).coords().to_vec(), v)).collect())
    }
}

// ---------------------------------------------------------------------------
// Inversion

type InverseKey = (Coords, Option<i64>);

/// b = a⁻¹ by triangular back-substitution on the ideal below ν.
pub struct Inverted<P> {
    inner: P,
    memo: DashMap<InverseKey, Arc<Vec<(Coords, i64)>>>,
}

impl<P: MultiplicityProvider> Inverted<P> {
    pub fn new(inner: P) -> Self {
        Inverted { inner, memo: DashMap::new() }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    fn compute(&self, nu: &[Q], bound: &OrderBound) -> Result<Vec<(Coords, i64)>> {
        // b(ν, μ) = δ − Σ_{μ < η ≤ ν} b(ν, η) a(η, μ), processed by height.
        let mut pending: BTreeMap<(i64, Coords), i64> = BTreeMap::new();
        let top = self.inner.support(nu)?.into_iter().find(|(m, _)| self.inner.height(nu, m) == Some(0));
        let Some((top, one)) = top else {
            return Err(MultError::InvariantViolation(format!("{}: a(ν,ν) missing at {}", self.inner.tag(), fmt_coords(nu))));
        };
        if one != 1 {
            return Err(MultError::InvariantViolation(format!("{}: a(ν,ν) = {one}", self.inner.tag())));
        }
        pending.insert((0, top), 1);
        let mut out = Vec::new();
        let mut visited = 0usize;
        while let Some(((h, eta), b)) = pending.pop_first() {
            visited += 1;
            if bound.depth.is_none() && visited > bound.max_size {
                return Err(MultError::IdealNotFinite(format!(
                    "{}: more than {} weights below {}",
                    self.inner.tag(),
                    bound.max_size,
                    fmt_coords(nu)
                )));
            }
            if b == 0 {
                continue;
            }
            for (mu, a) in self.inner.support(&eta)? {
                if mu == eta {
                    if a != 1 {
                        return Err(MultError::InvariantViolation(format!("{}: a(ν,ν) = {a}", self.inner.tag())));
                    }
                    continue;
                }
                let Some(hm) = self.inner.height(nu, &mu) else {
                    return Err(MultError::InvariantViolation(format!(
                        "{}: support of {} leaves the order ideal",
                        self.inner.tag(),
                        fmt_coords(&eta)
                    )));
                };
                if hm <= h {
                    return Err(MultError::InvariantViolation(format!("{}: support not strictly below", self.inner.tag())));
                }
                if bound.admits(hm) {
                    *pending.entry((hm, mu)).or_insert(0) -= b * a;
                }
            }
            out.push((eta, b));
        }
        Ok(out)
    }
}

pub fn invert_provider<P: MultiplicityProvider>(p: P) -> Inverted<P> {
    Inverted::new(p)
}

impl<P: MultiplicityProvider> InverseProvider for Inverted<P> {
    fn tag(&self) -> String {
        format!("inverse({})", self.inner.tag())
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        self.inner.height(nu, mu)
    }

    fn support(&self, nu: &[Q], bound: &OrderBound) -> Result<Vec<(Coords, i64)>> {
        let key = (nu.to_vec(), bound.depth);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.as_ref().clone());
        }
        let v = Arc::new(self.compute(nu, bound)?);
        Ok(self.memo.entry(key).or_insert(v).as_ref().clone())
    }
}

// ---------------------------------------------------------------------------
// sl(m|1)

/// a^{sl(m|1)}(ν, μ) = a^{gl(m)}(ν, μ) + a^{gl(m)}(ν−ᾱ, μ) for nonsingular
/// atypical ν with witness ᾱ ∈ B ∩ Δ₁; typical ν use the even provider.
pub struct SerganovaProvider {
    basis: RootBasis,
    even: LinkageProvider,
}

impl SerganovaProvider {
    pub fn new(basis: RootBasis) -> Result<Self> {
        let sys = basis.system();
        if !matches!(sys.kind(), AlgebraKind::SL | AlgebraKind::GL) || sys.del_dim() != 1 {
            return Err(MultError::InvariantViolation(format!("{} is not of the form sl(m|1)", sys_label(sys))));
        }
        let even = LinkageProvider::new(EvenRootData::even_part(&basis));
        Ok(SerganovaProvider { basis, even })
    }

    /// Witness ᾱ ∈ B ∩ Δ₁ with (ν+ρ, ᾱ) = 0, if ν is atypical.
    pub fn atypical_witness(&self, nu: &[Q]) -> Result<Option<Weight>> {
        let w = self.basis.system().from_formal(nu);
        let t = is_typical(&w, &self.basis);
        if t.typical {
            return Ok(None);
        }
        let Witnesses::Roots(roots) = t.witnesses else { unreachable!() };
        if is_singular(&w, &self.basis) {
            return Err(MultError::SingularAtypicalUnsupported(format!("ν = {w}")));
        }
        roots.into_iter().find(|a| self.basis.simple().contains(a)).map(Some).ok_or_else(|| MultError::ProviderGap {
            reason: "no atypicality witness in B ∩ Δ₁".into(),
            needed: vec![w.to_string()],
        })
    }
}

pub fn serganova_sl_m_1_provider(basis: RootBasis) -> Result<SerganovaProvider> {
    SerganovaProvider::new(basis)
}

impl MultiplicityProvider for SerganovaProvider {
    fn tag(&self) -> String {
        format!("serganova:{}", sys_label(self.basis.system()))
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        self.even.height(nu, mu)
    }

    fn support(&self, nu: &[Q]) -> Result<Vec<(Coords, i64)>> {
        let mut acc: BTreeMap<Coords, i64> = BTreeMap::new();
        for (m, v) in self.even.support(nu)? {
            *acc.entry(m).or_default() += v;
        }
        if let Some(alpha) = self.atypical_witness(nu)? {
            let shifted: Coords = nu.iter().zip(alpha.coords()).map(|(a, b)| a - b).collect();
            for (m, v) in self.even.support(&shifted)? {
                *acc.entry(m).or_default() += v;
            }
        }
        Ok(acc.into_iter().filter(|(_, v)| *v != 0).collect())
    }
}

// ---------------------------------------------------------------------------
// W(n)

/// Sign convention for the two tail sums of s^W when a ∈ ℤ₊.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SConvention {
    /// Signs that reproduce ch L = Σ s ch K on the explicit W(2) realization.
    #[default]
    Corrected,
    /// The displayed signs: −Σ_k and +Σ_l.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WOptions {
    pub convention: SConvention,
    /// For i = 1 and a ∈ ℤ₊ drop the sum over ε_{i−1}.
    pub omit_first_index_sum: bool,
}

impl Default for WOptions {
    fn default() -> Self {
        WOptions { convention: SConvention::Corrected, omit_first_index_sum: true }
    }
}

/// λ = aε_i + ε_{i+1} + … + ε_n with the largest admissible i (1-based).
pub fn w_atypical_form(lambda: &Weight) -> Option<(usize, Q)> {
    w_atypical_forms(lambda).into_iter().max_by_key(|(i, _)| *i)
}

#[derive(Debug, Clone)]
enum STerm {
    /// λ − jε_i with coefficient (−1)^j; `limit` = a for a ∈ ℤ₊.
    Head { i: usize, limit: Option<i64> },
    /// −kε_n with coefficient sgn·(−1)^{a+k}.
    Tail { a: i64, sgn: i64 },
    /// λ − lε_{i−1} − (a−1)ε_i, l > 0, coefficient sgn·(−1)^{a+l}.
    Side { i: usize, a: i64, sgn: i64 },
}

fn s_terms(lambda: &Weight, opts: &WOptions) -> Result<Vec<STerm>> {
    let Some((i, a)) = w_atypical_form(lambda) else {
        return Err(MultError::NotAtypical(format!("{lambda} is typical for W(n)")));
    };
    if !is_pos_int(&a) {
        return Ok(vec![STerm::Head { i, limit: None }]);
    }
    let a = to_i64(&a).unwrap();
    let (tail, side) = match opts.convention {
        SConvention::Corrected => (1, -1),
        SConvention::Printed => (-1, 1),
    };
    let mut out = vec![STerm::Head { i, limit: Some(a) }, STerm::Tail { a, sgn: tail }];
    if i > 1 {
        out.push(STerm::Side { i, a, sgn: side });
    } else if !opts.omit_first_index_sum {
        return Err(MultError::ThirdSumUndefined(format!("{lambda}: i = 1 with a = {a} refers to ε_0")));
    }
    Ok(out)
}

fn unit(n: usize, i: usize) -> Coords {
    (0..n).map(|k| q((k == i) as i64)).collect()
}

/// s^W(λ, μ) for atypical λ.
pub fn w_s_coefficient(lambda: &Weight, mu: &Weight, opts: &WOptions) -> Result<i64> {
    let n = lambda.dim();
    let lam = lambda.coords();
    let mc = mu.coords();
    let mut total = 0i64;
    for t in s_terms(lambda, opts)? {
        match t {
            STerm::Head { i, limit } => {
                // μ = λ − jε_i
                let same_elsewhere = (0..n).all(|k| k == i - 1 || lam[k] == mc[k]);
                let j = &lam[i - 1] - &mc[i - 1];
                if same_elsewhere && crate::rational::is_nonneg_int(&j) {
                    let j = to_i64(&j).unwrap();
                    if limit.map_or(true, |a| j < a) {
                        total += sign_pow(j);
                    }
                }
            }
            STerm::Tail { a, sgn } => {
                let zero_elsewhere = (0..n - 1).all(|k| mc[k].is_zero());
                let k = -&mc[n - 1];
                if zero_elsewhere && crate::rational::is_nonneg_int(&k) {
                    total += sgn * sign_pow(a + to_i64(&k).unwrap());
                }
            }
            STerm::Side { i, a, sgn } => {
                let mut base = lam.to_vec();
                base[i - 1] -= q(a - 1);
                let same_elsewhere = (0..n).all(|k| k == i - 2 || base[k] == mc[k]);
                let l = &base[i - 2] - &mc[i - 2];
                if same_elsewhere && is_pos_int(&l) {
                    total += sgn * sign_pow(a + to_i64(&l).unwrap());
                }
            }
        }
    }
    Ok(total)
}

/// Nonzero s^W(λ, ·) within `depth` below λ (heights in the given basis).
pub fn w_s_support(lambda: &Weight, basis: &RootBasis, depth: i64, opts: &WOptions) -> Result<Vec<(Weight, i64)>> {
    let sys = basis.system();
    let n = lambda.dim();
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    // Every family below is an arithmetic progression whose height grows by
    // at least one per step, so the scan length is bounded by the depth plus
    // the offsets involved.
    let spread: i64 =
        lambda.coords().iter().map(|x| crate::rational::floor_i64(&x.abs()) + 1).sum::<i64>() + 2;
    let cap = depth + spread * (n as i64 + 1);
    let push = |c: Coords, v: i64, acc: &mut BTreeMap<Weight, i64>| {
        let w = sys.from_formal(&c);
        if let Some(h) = basis.depth(&w, lambda) {
            if h <= depth {
                *acc.entry(w).or_default() += v;
            }
        }
    };
    for t in s_terms(lambda, opts)? {
        match t {
            STerm::Head { i, limit } => {
                let end = limit.unwrap_or(cap + 1);
                for j in 0..end.min(cap + 1) {
                    push(axpy(lambda.coords(), &q(-j), &unit(n, i - 1)), sign_pow(j), &mut acc);
                }
            }
            STerm::Tail { a, sgn } => {
                for k in 0..=cap {
                    push(unit(n, n - 1).iter().map(|x| x * q(-k)).collect(), sgn * sign_pow(a + k), &mut acc);
                }
            }
            STerm::Side { i, a, sgn } => {
                let base = axpy(lambda.coords(), &q(-(a - 1)), &unit(n, i - 1));
                for l in 1..=cap {
                    push(axpy(&base, &q(-l), &unit(n, i - 2)), sgn * sign_pow(a + l), &mut acc);
                }
            }
        }
    }
    Ok(acc.into_iter().filter(|(_, v)| *v != 0).collect())
}

/// b^W(λ, μ) = Σ_ν s^W(λ, ν) b^{gl(n)}(ν, μ); s = δ for typical λ.
pub fn w_b_coefficient(lambda: &Weight, mu: &Weight, gl: &dyn InverseProvider, basis: &RootBasis, opts: &WOptions) -> Result<i64> {
    let Some(h) = basis.depth(mu, lambda) else { return Ok(0) };
    let sup = WInverse::support_in(lambda, basis, gl, opts, &OrderBound::depth(h))?;
    Ok(sup.into_iter().find(|(m, _)| m.as_slice() == mu.coords()).map_or(0, |(_, v)| v))
}

/// b^W as an inverse provider on the ambient coordinates of W(n).
pub struct WInverse {
    basis: RootBasis,
    gl: Inverted<LinkageProvider>,
    opts: WOptions,
}

impl WInverse {
    pub fn new(basis: RootBasis, opts: WOptions) -> Result<Self> {
        if basis.system().kind() != AlgebraKind::W {
            return Err(MultError::InvariantViolation("b^W needs a W(n) basis".into()));
        }
        let gl = Inverted::new(LinkageProvider::new(EvenRootData::even_part(&basis)));
        Ok(WInverse { basis, gl, opts })
    }

    pub fn options(&self) -> &WOptions {
        &self.opts
    }

    fn support_in(
        lambda: &Weight,
        basis: &RootBasis,
        gl: &dyn InverseProvider,
        opts: &WOptions,
        bound: &OrderBound,
    ) -> Result<Vec<(Coords, i64)>> {
        if w_atypical_form(lambda).is_none() {
            return gl.support(lambda.coords(), bound);
        }
        let depth = bound.depth.ok_or_else(|| {
            MultError::IdealNotFinite(format!("b^W({lambda}, ·) has infinite support; a depth bound is required"))
        })?;
        let mut acc: BTreeMap<Coords, i64> = BTreeMap::new();
        for (nu, s) in w_s_support(lambda, basis, depth, opts)? {
            let h = basis.depth(&nu, lambda).expect("support lies below λ");
            for (mu, b) in gl.support(nu.coords(), &bound.shrink(h))? {
                *acc.entry(mu).or_default() += s * b;
            }
        }
        Ok(acc.into_iter().filter(|(_, v)| *v != 0).collect())
    }
}

impl InverseProvider for WInverse {
    fn tag(&self) -> String {
        format!("bW:{}", sys_label(self.basis.system()))
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        let sys = self.basis.system();
        self.basis.depth(&sys.from_formal(mu), &sys.from_formal(nu))
    }

    fn support(&self, nu: &[Q], bound: &OrderBound) -> Result<Vec<(Coords, i64)>> {
        let lambda = self.basis.system().from_formal(nu);
        Self::support_in(&lambda, &self.basis, &self.gl, &self.opts, bound)
    }
}

// ---------------------------------------------------------------------------
// Convolutions

/// Σ_η first(ν, η) second(η, μ), with η restricted to the interval [μ, ν].
pub fn compose_mblb(first: &dyn InverseProvider, second: &dyn MultiplicityProvider, nu: &[Q], mu: &[Q]) -> Result<i64> {
    let Some(h) = first.height(nu, mu) else { return Ok(0) };
    let mut total = 0;
    for (eta, b) in first.support(nu, &OrderBound::depth(h))? {
        if second.height(&eta, mu).is_some() {
            total += b * second.value(&eta, mu)?;
        }
    }
    Ok(total)
}

/// [M_p(L_{B_a}(ν)) : L_B(μ)] = Σ_η b^a(ν, η) a^g(η, μ).
pub fn parabolic_multiplicity(b_a: &dyn InverseProvider, a_g: &dyn MultiplicityProvider, nu: &[Q], mu: &[Q]) -> Result<i64> {
    compose_mblb(b_a, a_g, nu, mu)
}

/// Recombination Σ_η a^a(ν, η) x(η, μ) of a^a with the
/// parabolic multiplicities x; equals a^g when x = b^a ∘ a^g.
pub fn recombine(a_a: &dyn MultiplicityProvider, x: impl Fn(&[Q], &[Q]) -> Result<i64>, nu: &[Q], mu: &[Q]) -> Result<i64> {
    let mut total = 0;
    for (eta, a) in a_a.support(nu)? {
        if a_a.height(&eta, mu).is_some() || eta.as_slice() == mu {
            total += a * x(&eta, mu)?;
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Tables

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub algebra: AlgebraDescriptor,
    pub basis: String,
    pub kind: TableKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TableRecord {
    nu: String,
    mu: String,
    value: i64,
}

/// Explicit (ν, μ, value) triples on the standard basis of one algebra.
#[derive(Debug, Clone)]
pub struct MultiplicityTable {
    header: TableHeader,
    basis: RootBasis,
    rows: BTreeMap<Weight, BTreeMap<Weight, i64>>,
}

impl MultiplicityTable {
    pub fn new(header: TableHeader, entries: Vec<(Weight, Weight, i64)>) -> Result<Self> {
        if header.basis != "standard" {
            return Err(MultError::Parse(format!("unsupported basis {:?}", header.basis)));
        }
        let sys = Arc::new(SuperRootSystem::build(&header.algebra)?);
        let basis = sys.standard_basis();
        let mut rows: BTreeMap<Weight, BTreeMap<Weight, i64>> = BTreeMap::new();
        for (nu, mu, v) in entries {
            let nu = sys.canonicalize(&nu);
            let mu = sys.canonicalize(&mu);
            if rows.entry(nu.clone()).or_default().insert(mu.clone(), v).is_some() {
                return Err(MultError::InvariantViolation(format!("duplicate entry ({nu}, {mu})")));
            }
        }
        let t = MultiplicityTable { header, basis, rows };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        for (nu, row) in &self.rows {
            match row.get(nu) {
                Some(1) => {}
                Some(v) => return Err(MultError::InvariantViolation(format!("diagonal entry at {nu} is {v}, expected 1"))),
                None => return Err(MultError::InvariantViolation(format!("diagonal entry at {nu} is missing"))),
            }
            for (mu, v) in row {
                if !self.basis.leq(mu, nu) {
                    return Err(MultError::InvariantViolation(format!("{mu} is not below {nu} in the B-order")));
                }
                if self.header.kind == TableKind::A && *v < 0 {
                    return Err(MultError::InvariantViolation(format!("negative multiplicity at ({nu}, {mu})")));
                }
            }
        }
        Ok(())
    }

    pub fn header(&self) -> &TableHeader {
        &self.header
    }

    pub fn basis(&self) -> &RootBasis {
        &self.basis
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Weight, &Weight, i64)> {
        self.rows.iter().flat_map(|(nu, row)| row.iter().map(move |(mu, v)| (nu, mu, *v)))
    }

    pub fn len(&self) -> usize {
        self.rows.values().map(|r| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn row(&self, nu: &[Q]) -> Result<&BTreeMap<Weight, i64>> {
        let w = self.basis.system().from_formal(nu);
        self.rows.get(&w).ok_or_else(|| MultError::ProviderGap {
            reason: format!("table for {} has no row", self.header.algebra),
            needed: vec![w.to_string()],
        })
    }

    fn order_height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        let sys = self.basis.system();
        self.basis.depth(&sys.from_formal(mu), &sys.from_formal(nu))
    }

    pub fn from_reader(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let (_, first) = lines.next().ok_or_else(|| MultError::Parse("empty table".into()))?;
        let first = first.map_err(|e| MultError::Io(e.to_string()))?;
        let header: TableHeader = serde_json::from_str(&first).map_err(|e| MultError::Parse(format!("header: {e}")))?;
        let sys = SuperRootSystem::build(&header.algebra)?;
        let mut entries = Vec::new();
        for (no, line) in lines {
            let line = line.map_err(|e| MultError::Io(e.to_string()))?;
            let rec: TableRecord =
                serde_json::from_str(&line).map_err(|e| MultError::Parse(format!("line {}: {e}", no + 1)))?;
            let nu = sys.parse_weight(&rec.nu).map_err(|e| MultError::Parse(format!("line {}: {e}", no + 1)))?;
            let mu = sys.parse_weight(&rec.mu).map_err(|e| MultError::Parse(format!("line {}: {e}", no + 1)))?;
            entries.push((nu, mu, rec.value));
        }
        Self::new(header, entries)
    }

    pub fn to_writer(&self, mut w: impl Write) -> Result<()> {
        let io = |e: std::io::Error| MultError::Io(e.to_string());
        writeln!(w, "{}", serde_json::to_string(&self.header).expect("header serializes")).map_err(io)?;
        for (nu, mu, value) in self.entries() {
            let rec = TableRecord { nu: nu.to_string(), mu: mu.to_string(), value };
            writeln!(w, "{}", serde_json::to_string(&rec).expect("record serializes")).map_err(io)?;
        }
        Ok(())
    }
}

pub fn load_table(path: &Path) -> Result<MultiplicityTable> {
    let f = std::fs::File::open(path).map_err(|e| MultError::Io(format!("{}: {e}", path.display())))?;
    MultiplicityTable::from_reader(std::io::BufReader::new(f))
}

pub fn save_table(table: &MultiplicityTable, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    table.to_writer(&mut buf)?;
    std::fs::write(path, buf).map_err(|e| MultError::Io(format!("{}: {e}", path.display())))
}

/// A kind-"a" table used as a provider.
pub struct TableProvider(pub Arc<MultiplicityTable>);

impl MultiplicityProvider for TableProvider {
    fn tag(&self) -> String {
        format!("table:{}", self.0.header.algebra)
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        self.0.order_height(nu, mu)
    }

    fn support(&self, nu: &[Q]) -> Result<Vec<(Coords, i64)>> {
        Ok(self.0.row(nu)?.iter().filter(|(_, v)| **v != 0).map(|(m, v)| (m.coords().to_vec(), *v)).collect())
    }
}

/// A kind-"b" table used as an inverse provider. Rows are taken as complete
/// on the ideal they cover.
pub struct TableInverse(pub Arc<MultiplicityTable>);

impl InverseProvider for TableInverse {
    fn tag(&self) -> String {
        format!("table-b:{}", self.0.header.algebra)
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        self.0.order_height(nu, mu)
    }

    fn support(&self, nu: &[Q], bound: &OrderBound) -> Result<Vec<(Coords, i64)>> {
        Ok(self
            .0
            .row(nu)?
            .iter()
            .filter(|(m, v)| **v != 0 && self.0.order_height(nu, m.coords()).is_some_and(|h| bound.admits(h)))
            .map(|(m, v)| (m.coords().to_vec(), *v))
            .collect())
    }
}

/// Tabulate a provider on the closure of the given weights (for export).
pub fn tabulate(
    p: &dyn MultiplicityProvider,
    header: TableHeader,
    seeds: &[Weight],
    max_rows: usize,
) -> Result<MultiplicityTable> {
    let mut entries = Vec::new();
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut queue: VecDeque<Weight> = seeds.iter().cloned().collect();
    let sys = SuperRootSystem::build(&header.algebra)?;
    while let Some(nu) = queue.pop_front() {
        let nu = sys.canonicalize(&nu);
        if !seen.insert(nu.clone()) {
            continue;
        }
        if seen.len() > max_rows {
            return Err(MultError::IdealNotFinite(format!("more than {max_rows} rows")));
        }
        for (mu, v) in p.support(nu.coords())? {
            let mu = sys.from_formal(&mu);
            entries.push((nu.clone(), mu.clone(), v));
            queue.push_back(mu);
        }
    }
    MultiplicityTable::new(header, entries)
}

/// Evaluate Σ_η a(ν, η) b(η, μ) over the interval; used by invariant checks.
pub fn product_check(a: &dyn MultiplicityProvider, b: &dyn InverseProvider, nu: &[Q], mu: &[Q]) -> Result<i64> {
    let mut total = 0;
    for (eta, av) in a.support(nu)? {
        if b.height(&eta, mu).is_some() {
            total += av * b.value(&eta, mu)?;
        }
    }
    Ok(total)
}

/// Rows of the explicit matrix of a on a finite list of weights.
pub fn matrix_on(p: &dyn MultiplicityProvider, ws: &[Coords]) -> Result<Vec<Vec<i64>>> {
    let index: HashMap<&Coords, usize> = ws.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut out = vec![vec![0; ws.len()]; ws.len()];
    for (i, nu) in ws.iter().enumerate() {
        for (mu, v) in p.support(nu)? {
            if let Some(&j) = index.get(&mu) {
                out[i][j] = v;
            }
        }
    }
    Ok(out)
}
