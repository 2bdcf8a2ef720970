//! Weight multiplicities of L_p(S) from coset characters of induced modules.

use crate::mult::{
    invert_provider, w_atypical_form, w_s_support, EvenRootData, InverseProvider, LinkageProvider, MultError,
    MultiplicityProvider, OrderBound, WOptions,
};
use crate::rational::{is_int, is_nonneg_int, q, to_i64, Q};
use crate::rootdata::{
    AlgebraDescriptor, AlgebraKind, BlockType, BlockWeight, Parabolic, RootBasis, RootDataError, SuperRootSystem, Weight,
};
use crate::weights::{
    is_block_integral, is_block_singular, is_partially_finite, mu_bracket, regular_integral_decompose, Bracket,
    BoundedModuleSpec, WeightsError,
};
use dashmap::DashMap;
use num_traits::{One, Signed};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("not-dominant: {0}")]
    NotDominant(String),
    #[error("not-dominant-after-tilde: {0}")]
    NotDominantAfterTilde(String),
    #[error("singular-integral-unsupported: {0}")]
    SingularIntegralUnsupported(String),
    #[error("not-a-lie-algebra: {0}")]
    NotLieAlgebra(String),
    #[error("assertion-failed: {0}")]
    Assertion(String),
    #[error(transparent)]
    Mult(#[from] MultError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error(transparent)]
    Root(#[from] RootDataError),
}

pub type Result<T> = std::result::Result<T, CharError>;

// ---------------------------------------------------------------------------
// Kostant counting

/// One PBW generator of U(u⁻).
#[derive(Debug, Clone)]
struct Generator {
    weight: Weight,
    /// Positive: minus the l-level.
    depth: i64,
    odd: bool,
}

/// Weights of PBW monomials in U(u⁻), grouped by total level and memoized.
#[derive(Debug)]
pub struct KostantCounter {
    par: Arc<Parabolic>,
    gens: Vec<Generator>,
    by_level: DashMap<i64, Arc<HashMap<Weight, u64>>>,
}

impl KostantCounter {
    pub fn new(par: Arc<Parabolic>) -> Self {
        let gens = par
            .system()
            .root_vectors()
            .iter()
            .zip(par.levels())
            .filter(|(_, l)| **l < 0)
            .map(|(r, l)| Generator { weight: r.weight.clone(), depth: -l, odd: r.parity.is_odd() })
            .collect();
        KostantCounter { par, gens, by_level: DashMap::new() }
    }

    pub fn parabolic(&self) -> &Arc<Parabolic> {
        &self.par
    }

    /// Monomial counts of every weight at total level −t.
    pub fn level_slice(&self, t: i64) -> Arc<HashMap<Weight, u64>> {
        if let Some(v) = self.by_level.get(&t) {
            return v.clone();
        }
        let mut out: HashMap<Weight, u64> = HashMap::new();
        if t >= 0 {
            let zero = self.par.system().zero();
            self.fill(0, t, zero, &mut out);
        }
        let v = Arc::new(out);
        self.by_level.entry(t).or_insert(v).clone()
    }

    fn fill(&self, idx: usize, remaining: i64, acc: Weight, out: &mut HashMap<Weight, u64>) {
        if remaining == 0 {
            *out.entry(acc).or_default() += 1;
            return;
        }
        if idx == self.gens.len() {
            return;
        }
        let g = &self.gens[idx];
        let max_e = if g.odd { 1.min(remaining / g.depth) } else { remaining / g.depth };
        let mut cur = acc;
        for e in 0..=max_e {
            if e > 0 {
                cur = &cur + &g.weight;
            }
            self.fill(idx + 1, remaining - e * g.depth, cur.clone(), out);
        }
    }

    /// dim U(u⁻)^γ.
    pub fn dim(&self, gamma: &Weight) -> u64 {
        let Some(l) = self.par.level_of(gamma) else { return 0 };
        let t = -l;
        if !is_nonneg_int(&t) {
            return 0;
        }
        let gamma = self.par.system().canonicalize(gamma);
        self.level_slice(to_i64(&t).unwrap()).get(&gamma).copied().unwrap_or(0)
    }
}

/// Number of PBW monomials of U(u⁻) of weight γ: even generators free,
/// odd generators with exponent at most one.
pub fn kostant_dim(par: &Arc<Parabolic>, gamma: &Weight) -> u64 {
    KostantCounter::new(par.clone()).dim(gamma)
}

/// The parabolic of a Borel: every root vector has nonzero level.
pub fn borel_parabolic(sys: Arc<SuperRootSystem>) -> Result<Parabolic> {
    let d = sys.dim() as i64;
    let phi: Vec<i64> = match sys.kind() {
        crate::rootdata::AlgebraKind::W => (0..d).map(|i| 3 * d - i).collect(),
        _ => (0..d).map(|i| 2 * d - i).collect(),
    };
    Ok(Parabolic::build(sys, &phi)?)
}

// ---------------------------------------------------------------------------
// λ̃, Weyl dimensions and d(λ)

/// Target algebra of λ̃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReducedAlgebra {
    /// gl(k)
    Gl(usize),
    /// so(2k)
    So(usize),
}

/// λ̃ for an sl(m) block (in gl(m−1)) or an sp(2m) block (in so(2m)).
pub fn tilde(bw: &BlockWeight) -> Result<(ReducedAlgebra, Vec<Q>)> {
    let (alg, v) = match bw.ty {
        BlockType::A => (ReducedAlgebra::Gl(bw.size() - 1), bw.coords[1..].to_vec()),
        BlockType::C => (ReducedAlgebra::So(bw.size()), bw.coords.iter().map(|x| x + Q::one()).collect()),
    };
    if !is_dominant_for(alg, &v) {
        return Err(CharError::NotDominantAfterTilde(format!("({bw}) maps to a non-dominant weight of {alg:?}")));
    }
    Ok((alg, v))
}

pub fn is_dominant_for(alg: ReducedAlgebra, v: &[Q]) -> bool {
    let chain = v.windows(2).all(|w| is_nonneg_int(&(&w[0] - &w[1])));
    match alg {
        ReducedAlgebra::Gl(_) => chain,
        ReducedAlgebra::So(k) => k < 2 || (chain && is_nonneg_int(&(&v[k - 2] + &v[k - 1]))),
    }
}

/// Weyl dimension formula for gl(k) and so(2k).
pub fn weyl_dimension(alg: ReducedAlgebra, lambda: &[Q]) -> Result<u64> {
    if !is_dominant_for(alg, lambda) {
        return Err(CharError::NotDominant(format!("{lambda:?} for {alg:?}")));
    }
    let k = lambda.len();
    let (rho, plus): (Vec<Q>, bool) = match alg {
        ReducedAlgebra::Gl(_) => ((0..k).map(|j| q((k - 1 - j) as i64)).collect(), false),
        ReducedAlgebra::So(_) => ((0..k).map(|j| q((k - 1 - j) as i64)).collect(), true),
    };
    let shifted: Vec<Q> = lambda.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut num = Q::one();
    let mut den = Q::one();
    for i in 0..k {
        for j in i + 1..k {
            num *= &shifted[i] - &shifted[j];
            den *= &rho[i] - &rho[j];
            if plus {
                num *= &shifted[i] + &shifted[j];
                den *= &rho[i] + &rho[j];
            }
        }
    }
    let d = num / den;
    if !is_int(&d) || !d.is_positive() {
        return Err(CharError::Assertion(format!("Weyl dimension {d} is not a positive integer")));
    }
    Ok(to_i64(&d).unwrap() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeBranch {
    /// λ = μ[l], alternating sum over j ≥ l.
    RegularIntegral { l: usize },
    /// dim L(λ̃).
    Generic,
    /// Singular integral weights use the generic branch; flagged.
    SingularIntegral,
    /// 2^{1−m} dim L_{so(2m)}(λ̃).
    Symplectic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Degree {
    pub value: u64,
    pub branch: DegreeBranch,
}

pub fn degree_d(bw: &BlockWeight) -> Result<Degree> {
    match bw.ty {
        BlockType::C => {
            let (alg, v) = tilde(bw)?;
            let dim = weyl_dimension(alg, &v)?;
            let m = bw.size() as u32;
            let p = 1u64 << (m - 1);
            if dim % p != 0 {
                return Err(CharError::Assertion(format!("so({}) dimension {dim} not divisible by {p}", 2 * m)));
            }
            Ok(Degree { value: dim / p, branch: DegreeBranch::Symplectic })
        }
        BlockType::A => {
            let integral = is_block_integral(bw);
            if integral && !is_block_singular(bw) {
                let (mu, l) = regular_integral_decompose(bw)?.expect("integral input decomposes");
                let m = bw.size();
                let mut total: i64 = 0;
                for j in l..m {
                    let Bracket::Weight(w) = mu_bracket(&mu, j)? else { unreachable!("j < m") };
                    let (alg, v) = tilde(&w)?;
                    let s = if (j - l) % 2 == 0 { 1 } else { -1 };
                    total += s * weyl_dimension(alg, &v)? as i64;
                }
                if total <= 0 {
                    return Err(CharError::Assertion(format!("d(({bw})) = {total} is not positive")));
                }
                return Ok(Degree { value: total as u64, branch: DegreeBranch::RegularIntegral { l } });
            }
            let branch = if integral { DegreeBranch::SingularIntegral } else { DegreeBranch::Generic };
            let (alg, v) = tilde(bw).map_err(|e| match (branch, e) {
                (DegreeBranch::SingularIntegral, CharError::NotDominantAfterTilde(s)) => {
                    CharError::SingularIntegralUnsupported(s)
                }
                (_, e) => e,
            })?;
            Ok(Degree { value: weyl_dimension(alg, &v)?, branch })
        }
    }
}

/// Π_i d(λ^{a_i}).
pub fn degree_of_spec(spec: &BoundedModuleSpec) -> Result<(u64, Vec<Degree>)> {
    let ds: Vec<Degree> = spec.lambda_blocks.iter().map(degree_d).collect::<Result<_>>()?;
    Ok((ds.iter().map(|d| d.value).product(), ds))
}

// ---------------------------------------------------------------------------
// Coset and induced characters

/// D · Σ_{β ∈ base + Q_a} e^β.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCharacter {
    pub base: Weight,
    pub degree: u64,
}

/// ch M_p(S) for S with the given coset character.
#[derive(Debug)]
pub struct InducedCharacter {
    pub coset: CosetCharacter,
    counter: Arc<KostantCounter>,
}

impl InducedCharacter {
    pub fn new(coset: CosetCharacter, counter: Arc<KostantCounter>) -> Self {
        InducedCharacter { coset, counter }
    }

    pub fn parabolic(&self) -> &Arc<Parabolic> {
        self.counter.parabolic()
    }
}

/// Level t ≥ 0 with η ∈ base − (level t part of ℤΔ(u⁻)) + Q_a, if any.
fn level_gap(par: &Parabolic, base: &Weight, eta: &Weight) -> Option<i64> {
    let l = par.level_of(&(base - eta))?;
    if is_nonneg_int(&l) {
        to_i64(&l)
    } else {
        None
    }
}

pub fn induced_multiplicity(ic: &InducedCharacter, eta: &Weight) -> u64 {
    induced_count(&ic.counter, &ic.coset.base, eta) * ic.coset.degree
}

fn induced_count(counter: &KostantCounter, base: &Weight, eta: &Weight) -> u64 {
    let par = counter.parabolic();
    let Some(t) = level_gap(par, base, eta) else { return 0 };
    let diff = eta - base;
    counter.level_slice(t).iter().filter(|(gamma, _)| par.in_qa(&(&diff - gamma))).map(|(_, c)| c).sum()
}

// ---------------------------------------------------------------------------
// Character coefficients

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub mu: String,
    pub c: i64,
    pub induced: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multiplicity {
    pub multiplicity: u64,
    pub terms: Vec<Term>,
}

/// ch L_p(S) = Σ_μ c(λ, μ) ch M_p(S(μ)), with S(μ) supported on σ − λ + μ + Q_a.
pub struct SimpleCharacter {
    spec: BoundedModuleSpec,
    lambda: Weight,
    b_g: Arc<dyn InverseProvider>,
    a_a: Arc<dyn MultiplicityProvider>,
    degree: u64,
    depth: Option<i64>,
    counter: Arc<KostantCounter>,
    memo: DashMap<Weight, i64>,
}

impl SimpleCharacter {
    pub fn new(spec: BoundedModuleSpec, b_g: Arc<dyn InverseProvider>, a_a: Arc<dyn MultiplicityProvider>) -> Result<Self> {
        let (degree, _) = degree_of_spec(&spec)?;
        let lambda = spec.lambda();
        let counter = Arc::new(KostantCounter::new(spec.parabolic.clone()));
        Ok(SimpleCharacter { spec, lambda, b_g, a_a, degree, depth: None, counter, memo: DashMap::new() })
    }

    /// Depth of the order ideal used for b^g when λ's block is infinite and
    /// a has roots (then level does not bound the height).
    pub fn with_depth(mut self, depth: i64) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn spec(&self) -> &BoundedModuleSpec {
        &self.spec
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    fn par(&self) -> &Arc<Parabolic> {
        &self.spec.parabolic
    }

    fn sys(&self) -> &Arc<SuperRootSystem> {
        self.spec.parabolic.system()
    }

    /// Coset character of S(μ).
    pub fn coset_of(&self, mu: &Weight) -> CosetCharacter {
        let base = &(&self.spec.sigma - &self.lambda) + mu;
        CosetCharacter { base: self.sys().canonicalize(&base), degree: self.degree }
    }

    pub fn induced_of(&self, mu: &Weight) -> InducedCharacter {
        InducedCharacter::new(self.coset_of(mu), self.counter.clone())
    }

    fn bound_for_level(&self, t: i64) -> OrderBound {
        if let Some(d) = self.depth {
            return OrderBound::depth(d);
        }
        if self.par().blocks().is_empty() {
            // Every simple root has level ≥ 1, so height ≤ level.
            OrderBound::depth(t)
        } else {
            OrderBound::closure()
        }
    }

    /// c(λ, μ) for every μ reachable within the bound, zeros dropped.
    fn coefficients(&self, bound: &OrderBound) -> Result<BTreeMap<Weight, i64>> {
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
        for (nu, b) in self.b_g.support(self.lambda.coords(), bound)? {
            for (mu, a) in self.a_a.support(&nu)? {
                let mu = self.sys().from_formal(&mu);
                if is_partially_finite(&mu, self.par()) {
                    continue;
                }
                *acc.entry(mu).or_default() += b * a;
            }
        }
        acc.retain(|_, v| *v != 0);
        Ok(acc)
    }

    pub fn c_coefficient(&self, mu: &Weight) -> Result<i64> {
        let mu = self.sys().canonicalize(mu);
        if let Some(v) = self.memo.get(&mu) {
            return Ok(*v);
        }
        let v = if is_partially_finite(&mu, self.par()) {
            0
        } else {
            match self.par().basis().depth(&mu, &self.lambda) {
                None => 0,
                Some(h) => {
                    let bound = match self.depth {
                        Some(d) => OrderBound::depth(d.min(h)),
                        None => OrderBound::depth(h),
                    };
                    let mut total = 0;
                    for (nu, b) in self.b_g.support(self.lambda.coords(), &bound)? {
                        total += b * self.a_a.value(&nu, mu.coords())?;
                    }
                    total
                }
            }
        };
        self.memo.entry(mu).or_insert(v);
        Ok(v)
    }

    /// Table of c(λ, μ) over the ideal of the given depth.
    pub fn coefficient_table(&self, depth: i64) -> Result<Vec<(Weight, i64)>> {
        let bound = OrderBound::depth(depth);
        Ok(self
            .coefficients(&bound)?
            .into_iter()
            .filter(|(mu, _)| self.par().basis().depth(mu, &self.lambda).is_some_and(|h| h <= depth))
            .collect())
    }

    pub fn simple_multiplicity(&self, eta: &Weight) -> Result<Multiplicity> {
        let eta = self.sys().canonicalize(eta);
        let empty = Multiplicity { multiplicity: 0, terms: Vec::new() };
        let Some(t) = level_gap(self.par(), &self.spec.sigma, &eta) else { return Ok(empty) };
        let coeffs = self.coefficients(&self.bound_for_level(t))?;
        let mut total: i64 = 0;
        let mut terms = Vec::new();
        for (mu, c) in coeffs {
            let Some(drop) = self.par().level_of(&(&self.lambda - &mu)) else { continue };
            if drop > q(t) {
                continue;
            }
            let ind = induced_count(&self.counter, &self.coset_of(&mu).base, &eta) * self.degree;
            if ind == 0 {
                continue;
            }
            total += c * ind as i64;
            terms.push(Term { mu: mu.to_string(), c, induced: ind });
        }
        let top = induced_count(&self.counter, &self.coset_of(&self.lambda).base, &eta) * self.degree;
        if total < 0 || total as u64 > top {
            return Err(CharError::Assertion(format!(
                "multiplicity {total} at {eta} outside [0, {top}] (provider data inconsistent)"
            )));
        }
        Ok(Multiplicity { multiplicity: total as u64, terms })
    }
}

/// c(λ, μ) through a fresh SimpleCharacter.
pub fn c_coefficient(
    spec: &BoundedModuleSpec,
    mu: &Weight,
    b_g: Arc<dyn InverseProvider>,
    a_a: Arc<dyn MultiplicityProvider>,
) -> Result<i64> {
    SimpleCharacter::new(spec.clone(), b_g, a_a)?.c_coefficient(mu)
}

pub fn simple_multiplicity(ch: &SimpleCharacter, eta: &Weight) -> Result<u64> {
    Ok(ch.simple_multiplicity(eta)?.multiplicity)
}

// ---------------------------------------------------------------------------
// Sup formula for Lie algebras

/// dim L_B(λ)^ν = Σ_μ b(λ, μ) P(μ − ν), P the Kostant partition function.
pub struct HighestWeightCharacter {
    lambda: Weight,
    b: Arc<dyn InverseProvider>,
    counter: KostantCounter,
}

impl HighestWeightCharacter {
    pub fn new(lambda: Weight, b: Arc<dyn InverseProvider>, sys: Arc<SuperRootSystem>) -> Result<Self> {
        let counter = KostantCounter::new(Arc::new(borel_parabolic(sys)?));
        Ok(HighestWeightCharacter { lambda, b, counter })
    }

    pub fn multiplicity(&self, nu: &Weight) -> Result<u64> {
        let basis = self.counter.parabolic().basis();
        let Some(h) = basis.depth(nu, &self.lambda) else { return Ok(0) };
        let mut total: i64 = 0;
        for (mu, b) in self.b.support(self.lambda.coords(), &OrderBound::depth(h))? {
            let mu = self.counter.parabolic().system().from_formal(&mu);
            total += b * self.counter.dim(&(nu - &mu)) as i64;
        }
        if total < 0 {
            return Err(CharError::Assertion(format!("negative multiplicity {total} at {nu}")));
        }
        Ok(total as u64)
    }
}

/// sup over ζ ∈ Q_a of dim L_B(λ)^{λ−σ+η+ζ}; ζ ranges over the box of
/// radius `radius` in the simple roots of a.
pub fn mathieu_sup_oracle(
    spec: &BoundedModuleSpec,
    eta: &Weight,
    dim_l: &dyn Fn(&Weight) -> Result<u64>,
    radius: i64,
) -> Result<u64> {
    let par = &spec.parabolic;
    let sys = par.system();
    if !sys.is_lie_algebra() {
        return Err(CharError::NotLieAlgebra(format!("{:?} has odd roots", sys.kind())));
    }
    let lambda = spec.lambda();
    let base = &(&lambda - &spec.sigma) + eta;
    let mut simple: Vec<Weight> = Vec::new();
    for (bi, b) in par.blocks().iter().enumerate() {
        for r in b.simple_roots() {
            simple.push(par.block_root_weight(bi, &r));
        }
    }
    let basis = par.basis();
    let mut best = 0;
    let mut coeffs = vec![-radius; simple.len()];
    loop {
        let mut nu = base.clone();
        for (c, s) in coeffs.iter().zip(&simple) {
            nu = &nu + &s.scale(&q(*c));
        }
        if basis.leq(&nu, &lambda) {
            best = best.max(dim_l(&nu)?);
        }
        let mut k = 0;
        while k < coeffs.len() && coeffs[k] == radius {
            coeffs[k] = -radius;
            k += 1;
        }
        if k == coeffs.len() {
            break;
        }
        coeffs[k] += 1;
    }
    Ok(best)
}


// ---------------------------------------------------------------------------
// W(n)

/// ch L_B(λ) for W(n) as Σ_μ s(λ, μ) ch K_B(μ), where
/// ch K_B(μ) = ch L_{gl(n)}(μ) · Π_i (1 + e^{−ε_i}).
pub struct WSimpleCharacter {
    lambda: Weight,
    basis: RootBasis,
    depth: i64,
    terms: Vec<(Weight, i64)>,
    gl_sys: Arc<SuperRootSystem>,
    gl_b: Arc<dyn InverseProvider>,
}

impl WSimpleCharacter {
    /// Exact for weights at depth at most `depth` below λ.
    pub fn new(lambda: Weight, basis: RootBasis, depth: i64, opts: &WOptions) -> Result<Self> {
        let sys = basis.system();
        if sys.kind() != AlgebraKind::W {
            return Err(CharError::Assertion("needs a W(n) basis".into()));
        }
        let n = lambda.dim();
        let terms = if w_atypical_form(&lambda).is_some() {
            w_s_support(&lambda, &basis, depth, opts)?
        } else {
            vec![(lambda.clone(), 1)]
        };
        let gl_sys = Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(AlgebraKind::GL, n, 0))?);
        let gl_b: Arc<dyn InverseProvider> =
            Arc::new(invert_provider(LinkageProvider::new(EvenRootData::even_part(&basis))));
        Ok(WSimpleCharacter { lambda, basis, depth, terms, gl_sys, gl_b })
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn terms(&self) -> &[(Weight, i64)] {
        &self.terms
    }

    pub fn multiplicity(&self, eta: &Weight) -> Result<u64> {
        let Some(h) = self.basis.depth(eta, &self.lambda) else { return Ok(0) };
        if h > self.depth {
            return Err(CharError::Assertion(format!("{eta} lies below the depth bound {}", self.depth)));
        }
        let n = eta.dim();
        let mut total: i64 = 0;
        for (mu, s) in &self.terms {
            let gl = HighestWeightCharacter::new(self.gl_sys.from_formal(mu.coords()), self.gl_b.clone(), self.gl_sys.clone())?;
            let mut k: u64 = 0;
            for mask in 0u32..(1 << n) {
                let c: Vec<Q> = eta
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(i, x)| if mask >> i & 1 == 1 { x + q(1) } else { x.clone() })
                    .collect();
                k += gl.multiplicity(&self.gl_sys.from_formal(&c))?;
            }
            total += s * k as i64;
        }
        if total < 0 {
            return Err(CharError::Assertion(format!("negative multiplicity {total} at {eta}")));
        }
        Ok(total as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn weyl_dims() {
        assert_eq!(weyl_dimension(ReducedAlgebra::Gl(1), &[frac(7, 3)]).unwrap(), 1);
        assert_eq!(weyl_dimension(ReducedAlgebra::Gl(2), &[q(3), q(0)]).unwrap(), 4);
        assert_eq!(weyl_dimension(ReducedAlgebra::So(2), &[q(1), q(0)]).unwrap(), 4);
        assert_eq!(weyl_dimension(ReducedAlgebra::So(3), &[q(1), q(0), q(0)]).unwrap(), 6);
        assert_eq!(weyl_dimension(ReducedAlgebra::So(2), &[frac(1, 2), frac(1, 2)]).unwrap(), 2);
        assert!(weyl_dimension(ReducedAlgebra::Gl(2), &[q(0), q(1)]).is_err());
    }

    #[test]
    fn degrees_of_small_blocks() {
        let a = |c: Vec<Q>| BlockWeight::new(BlockType::A, c);
        assert_eq!(degree_d(&a(vec![frac(1, 6), frac(-1, 6)])).unwrap().value, 1);
        let c = BlockWeight::new(BlockType::C, vec![frac(-1, 2)]);
        assert_eq!(degree_d(&c).unwrap(), Degree { value: 1, branch: DegreeBranch::Symplectic });
        // sl(3), μ = 0: μ[1] = (−1,1,0), μ[2] = (−2,1,1).
        let d1 = degree_d(&a(vec![q(-1), q(1), q(0)])).unwrap();
        assert_eq!(d1, Degree { value: 1, branch: DegreeBranch::RegularIntegral { l: 1 } });
        let d2 = degree_d(&a(vec![q(-2), q(1), q(1)])).unwrap();
        assert_eq!(d2.value, 1);
        // sp(4), λ = (−1/2, −1/2): λ̃ = (1/2, 1/2), so(4) dim 2, d = 1.
        let c2 = BlockWeight::new(BlockType::C, vec![frac(-1, 2), frac(-1, 2)]);
        assert_eq!(degree_d(&c2).unwrap().value, 1);
    }

    #[test]
    fn tilde_examples() {
        let (alg, v) = tilde(&BlockWeight::new(BlockType::A, vec![frac(1, 4), frac(-1, 4)])).unwrap();
        assert_eq!((alg, v), (ReducedAlgebra::Gl(1), vec![frac(-1, 4)]));
        let (alg, v) = tilde(&BlockWeight::new(BlockType::C, vec![frac(-1, 2)])).unwrap();
        assert_eq!((alg, v), (ReducedAlgebra::So(1), vec![frac(1, 2)]));
        assert!(matches!(
            tilde(&BlockWeight::new(BlockType::A, vec![q(0), q(-1), q(1)])),
            Err(CharError::NotDominantAfterTilde(_))
        ));
    }
}
