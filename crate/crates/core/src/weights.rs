//! Classification of weights: typicality, singularity, dominance, the
//! normal forms of bounded highest weights and the μ[l] construction.

use crate::rational::{frac, is_int, is_nonneg_int, q, Q};
use crate::rootdata::{
    block_rho, AlgebraKind, BlockType, BlockWeight, Parabolic, RootBasis, RootDataError, Weight,
};
use itertools::Itertools;
use num_traits::{One, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightsError {
    #[error("not-bounded: {0}")]
    NotBounded(String),
    #[error("not-regular-integral: {0}")]
    NotRegularIntegral(String),
    #[error("not-dominant: {0}")]
    NotDominant(String),
    #[error("invalid-spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Root(#[from] RootDataError),
}

pub type Result<T> = std::result::Result<T, WeightsError>;

/// Atypicality witnesses in the form appropriate to the algebra family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witnesses {
    /// Positive odd roots α with (μ+ρ_B, α) = 0.
    Roots(Vec<Weight>),
    /// Ordered pairs (i, j), 1-based, with (μ+ρ_{sl(m)}, ε_i−ε_j) = 1.
    Pairs(Vec<(usize, usize)>),
    /// W(n): every (i, a), 1-based i, with μ = aε_i + ε_{i+1} + … + ε_n.
    Indices(Vec<(usize, Q)>),
}

impl Witnesses {
    pub fn is_empty(&self) -> bool {
        match self {
            Witnesses::Roots(v) => v.is_empty(),
            Witnesses::Pairs(v) => v.is_empty(),
            Witnesses::Indices(v) => v.is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Typicality {
    pub typical: bool,
    pub witnesses: Witnesses,
}

pub fn is_typical(mu: &Weight, basis: &RootBasis) -> Typicality {
    let sys = basis.system();
    let witnesses = match sys.kind() {
        AlgebraKind::GL | AlgebraKind::SL | AlgebraKind::PSL | AlgebraKind::OSP => {
            let shifted = mu + basis.rho();
            let roots = basis
                .positive_roots(crate::rootdata::Parity::Odd)
                .into_iter()
                .map(|r| r.weight)
                .filter(|a| sys.form(&shifted, a).is_zero())
                .collect();
            Witnesses::Roots(roots)
        }
        AlgebraKind::P | AlgebraKind::SP => {
            let m = sys.eps_dim();
            let c = mu.coords();
            let mut pairs = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    // (μ + ρ_sl, ε_i − ε_j) = μ_i − μ_j + (j − i)
                    if i != j && &c[i] - &c[j] + q(j as i64 - i as i64) == Q::one() {
                        pairs.push((i + 1, j + 1));
                    }
                }
            }
            Witnesses::Pairs(pairs)
        }
        AlgebraKind::W => Witnesses::Indices(w_atypical_forms(mu)),
    };
    Typicality { typical: witnesses.is_empty(), witnesses }
}

/// All ways of writing μ = aε_i + ε_{i+1} + … + ε_n (1-based i).
pub fn w_atypical_forms(mu: &Weight) -> Vec<(usize, Q)> {
    let c = mu.coords();
    let n = c.len();
    (0..n)
        .filter(|&i| c[..i].iter().all(|x| x.is_zero()) && c[i + 1..].iter().all(|x| x == &Q::one()))
        .map(|i| (i + 1, c[i].clone()))
        .collect()
}

/// Fast path: some non-isotropic even root of g₀' is orthogonal to μ+ρ_B.
pub fn is_singular(mu: &Weight, basis: &RootBasis) -> bool {
    let sys = basis.system();
    let shifted = mu + basis.rho();
    sys.g0_prime_roots().iter().any(|a| !sys.form(a, a).is_zero() && sys.form(&shifted, a).is_zero())
}

/// Reference check through the full W-orbit stabilizer.
pub fn is_singular_by_orbit(mu: &Weight, basis: &RootBasis) -> Result<bool> {
    let sys = basis.system();
    let shifted = mu + basis.rho();
    let group = sys.weyl_group()?;
    Ok(group.iter().any(|w| !w.is_identity() && sys.weyl_act(w, &shifted) == shifted))
}

/// Dot-orbit representative: the lexicographically minimal w(μ+ρ) minus ρ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CentralCharacter(pub Weight);

pub fn central_character(mu: &Weight, basis: &RootBasis) -> Result<CentralCharacter> {
    let sys = basis.system();
    let shifted = mu + basis.rho();
    let group = sys.weyl_group()?;
    let min = group.iter().map(|w| sys.weyl_act(w, &shifted)).min().expect("W contains the identity");
    Ok(CentralCharacter(&min - basis.rho()))
}

/// (λ, α∨) ∈ ℤ≥0 for all simple roots of the block.
pub fn is_dominant_integral(bw: &BlockWeight) -> bool {
    let l = &bw.coords;
    let m = l.len();
    let chain = (0..m.saturating_sub(1)).all(|j| is_nonneg_int(&(&l[j] - &l[j + 1])));
    match bw.ty {
        BlockType::A => chain,
        BlockType::C => chain && m > 0 && is_nonneg_int(&l[m - 1]),
    }
}

pub fn is_partially_finite(lambda: &Weight, par: &Parabolic) -> bool {
    par.project(lambda).iter().any(is_dominant_integral)
}

/// The constraints of the normal form, read verbatim.
pub fn validate_normal_form(bw: &BlockWeight) -> bool {
    let l = &bw.coords;
    let m = l.len();
    match bw.ty {
        BlockType::A => {
            if m < 2 || !l.iter().sum::<Q>().is_zero() {
                return false;
            }
            (0..m - 1).all(|j| is_nonneg_int(&(&l[j] - &l[j + 1])) == (j >= 1))
        }
        BlockType::C => {
            let h = frac(1, 2);
            m > 0
                && l.iter().all(|x| is_int(&(x - &h)))
                && (0..m - 1).all(|j| l[j] >= l[j + 1])
                && l[m - 1] >= -h
        }
    }
}

fn block_weyl_group(ty: BlockType, m: usize) -> Vec<(Vec<usize>, Vec<i8>)> {
    let mut out = Vec::new();
    for p in (0..m).permutations(m) {
        match ty {
            BlockType::A => out.push((p, vec![1; m])),
            BlockType::C => {
                for signs in 0u32..(1 << m) {
                    out.push((p.clone(), (0..m).map(|k| if signs >> k & 1 == 1 { -1 } else { 1 }).collect()));
                }
            }
        }
    }
    out
}

/// All block dot translates w·λ.
pub fn block_dot_orbit(bw: &BlockWeight) -> Vec<BlockWeight> {
    let m = bw.size();
    let rho = block_rho(bw.ty, m);
    let t: Vec<Q> = bw.coords.iter().zip(&rho).map(|(a, b)| a + b).collect();
    block_weyl_group(bw.ty, m)
        .into_iter()
        .map(|(perm, sign)| {
            let mut out = vec![Q::zero(); m];
            for i in 0..m {
                out[perm[i]] = if sign[i] < 0 { -t[i].clone() } else { t[i].clone() };
            }
            BlockWeight::new(bw.ty, out.iter().zip(&rho).map(|(a, b)| a - b).collect())
        })
        .unique()
        .collect()
}

/// Bounded highest weights accepted by the boundedness precondition.
pub fn is_accepted_bounded_block(bw: &BlockWeight) -> bool {
    is_dominant_integral(bw) || validate_normal_form(bw) || block_dot_orbit(bw).iter().any(validate_normal_form)
}

pub fn is_gamma_injective(lambda: &Weight, par: &Parabolic) -> Result<bool> {
    for (i, bw) in par.project(lambda).iter().enumerate() {
        if !is_accepted_bounded_block(bw) {
            return Err(WeightsError::NotBounded(format!(
                "block {i} component ({bw}) is neither dominant integral nor a translate of a normal form"
            )));
        }
    }
    Ok(!is_partially_finite(lambda, par))
}

/// Result of μ[l].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bracket {
    Weight(BlockWeight),
    /// μ[l] := 0 for l ≥ m.
    Zero,
}

pub fn mu_bracket(mu: &BlockWeight, l: usize) -> Result<Bracket> {
    if mu.ty != BlockType::A || !is_dominant_integral(mu) || !mu.coords.iter().sum::<Q>().is_zero() {
        return Err(WeightsError::NotDominant(format!("μ[l] needs a dominant integral sl(m) weight, got ({mu})")));
    }
    if l == 0 {
        return Err(WeightsError::InvalidSpec("μ[l] is defined for l ≥ 1".into()));
    }
    let m = mu.size();
    if l >= m {
        return Ok(Bracket::Zero);
    }
    let rho = block_rho(BlockType::A, m);
    let t: Vec<Q> = mu.coords.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut out = t.clone();
    out[0] = t[l].clone();
    out[1..=l].clone_from_slice(&t[..l]);
    let coords = out.iter().zip(&rho).map(|(a, b)| a - b).collect();
    Ok(Bracket::Weight(BlockWeight::new(BlockType::A, coords)))
}

/// λ+ρ has a repeated coordinate (nontrivial stabilizer in S_m).
pub fn is_block_singular(bw: &BlockWeight) -> bool {
    let rho = block_rho(bw.ty, bw.size());
    let t: Vec<Q> = bw.coords.iter().zip(&rho).map(|(a, b)| a + b).collect();
    match bw.ty {
        BlockType::A => t.iter().tuple_combinations().any(|(a, b)| a == b),
        BlockType::C => t.iter().any(|x| x.is_zero()) || t.iter().tuple_combinations().any(|(a, b)| a == b || a == &-b),
    }
}

/// The singularity condition exactly as printed, `l₁+…+l_j + j = 0` for some j.
/// Kept for comparison only; see `is_block_singular`.
pub fn printed_singular_condition(bw: &BlockWeight) -> bool {
    let mut s = Q::zero();
    for (j, x) in bw.coords.iter().enumerate() {
        s += x;
        if (&s + q(j as i64 + 1)).is_zero() {
            return true;
        }
    }
    false
}

pub fn is_block_integral(bw: &BlockWeight) -> bool {
    bw.size() >= 2 && is_int(&(&bw.coords[0] - &bw.coords[1]))
}

/// Inverse of `mu_bracket`: nonintegral input gives `None`, singular or
/// non-decomposable integral input is an error.
pub fn regular_integral_decompose(bw: &BlockWeight) -> Result<Option<(BlockWeight, usize)>> {
    if bw.ty != BlockType::A {
        return Err(WeightsError::InvalidSpec("μ[l] decomposition is defined for sl blocks".into()));
    }
    if !is_block_integral(bw) {
        return Ok(None);
    }
    let m = bw.size();
    if is_block_singular(bw) {
        return Err(WeightsError::NotRegularIntegral(format!("({bw}) is singular")));
    }
    let rho = block_rho(BlockType::A, m);
    let t: Vec<Q> = bw.coords.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let tail_ok = (1..m - 1).all(|j| crate::rational::is_pos_int(&(&t[j] - &t[j + 1])));
    if !tail_ok || t[0] > t[1] {
        return Err(WeightsError::NotRegularIntegral(format!("({bw}) is not of the form μ[l] with l ≥ 1")));
    }
    // t'_{l+1} > t'_1 > t'_{l+2}, 1-based
    let mut l = 1;
    while l + 1 < m && t[l + 1] > t[0] {
        l += 1;
    }
    let mut tt = Vec::with_capacity(m);
    tt.extend_from_slice(&t[1..=l]);
    tt.push(t[0].clone());
    tt.extend_from_slice(&t[l + 1..]);
    let mu = BlockWeight::new(BlockType::A, tt.iter().zip(&rho).map(|(a, b)| a - b).collect());
    if !is_dominant_integral(&mu) {
        return Err(WeightsError::NotRegularIntegral(format!("({bw}) does not come from a dominant μ")));
    }
    Ok(Some((mu, l)))
}

/// The data (p, λ^{a₁},…,λ^{a_k}, λ^z, σ) of a simple bounded module.
#[derive(Debug, Clone)]
pub struct BoundedModuleSpec {
    pub parabolic: Arc<Parabolic>,
    pub lambda_blocks: Vec<BlockWeight>,
    pub lambda_z: Weight,
    pub sigma: Weight,
}

impl BoundedModuleSpec {
    pub fn new(parabolic: Arc<Parabolic>, lambda_blocks: Vec<BlockWeight>, lambda_z: Weight, sigma: Weight) -> Result<Self> {
        let blocks = parabolic.blocks();
        if blocks.len() != lambda_blocks.len() {
            return Err(WeightsError::InvalidSpec(format!(
                "parabolic has {} blocks, spec gives {}",
                blocks.len(),
                lambda_blocks.len()
            )));
        }
        for (i, (b, bw)) in blocks.iter().zip(&lambda_blocks).enumerate() {
            if b.ty != bw.ty || b.size() != bw.size() {
                return Err(WeightsError::InvalidSpec(format!("block {i} has type/size mismatch")));
            }
            if !validate_normal_form(bw) {
                return Err(WeightsError::NotBounded(format!("block {i} component ({bw}) is not in normal form")));
            }
        }
        let sys = parabolic.system().clone();
        let lambda_z = sys.canonicalize(&lambda_z);
        if parabolic.central(&lambda_z) != lambda_z {
            return Err(WeightsError::InvalidSpec("λ^z has a nonzero semisimple part".into()));
        }
        let spec = BoundedModuleSpec { parabolic, lambda_blocks, lambda_z, sigma: sys.canonicalize(&sigma) };
        if !spec.parabolic.central(&(&spec.sigma - &spec.lambda())).is_zero() {
            return Err(WeightsError::InvalidSpec("σ − λ must lie in K ⊗ Q_a".into()));
        }
        Ok(spec)
    }

    /// Build from a full highest weight λ, splitting it along the parabolic.
    pub fn from_lambda(parabolic: Arc<Parabolic>, lambda: &Weight, sigma: Weight) -> Result<Self> {
        let blocks = parabolic.project(lambda);
        let z = parabolic.central(lambda);
        Self::new(parabolic, blocks, z, sigma)
    }

    pub fn lambda(&self) -> Weight {
        self.parabolic.assemble(&self.lambda_blocks, &self.lambda_z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{AlgebraDescriptor, SuperRootSystem};

    fn bw(ty: BlockType, c: &[Q]) -> BlockWeight {
        BlockWeight::new(ty, c.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(is_dominant_integral(&bw(BlockType::A, &[frac(3, 2), frac(-3, 2)])));
        assert!(!is_dominant_integral(&bw(BlockType::A, &[frac(1, 3), frac(-1, 3)])));
        assert!(!is_dominant_integral(&bw(BlockType::C, &[frac(-1, 2)])));
    }

    #[test]
    fn normal_form_examples() {
        assert!(!validate_normal_form(&bw(BlockType::A, &[frac(4, 3), frac(1, 3), frac(-5, 3)])));
        assert!(validate_normal_form(&bw(BlockType::A, &[frac(1, 3), frac(-1, 3)])));
        assert!(validate_normal_form(&bw(BlockType::C, &[frac(-1, 2)])));
    }

    #[test]
    fn bracket_examples() {
        let zero = bw(BlockType::A, &[q(0), q(0)]);
        assert_eq!(mu_bracket(&zero, 1).unwrap(), Bracket::Weight(bw(BlockType::A, &[q(-1), q(1)])));
        assert_eq!(mu_bracket(&zero, 2).unwrap(), Bracket::Zero);
        let z3 = bw(BlockType::A, &[q(0), q(0), q(0)]);
        // t = (1,0,-1): (t₂,t₁,t₃) − ρ = (0,1,-1) − (1,0,-1)
        assert_eq!(mu_bracket(&z3, 1).unwrap(), Bracket::Weight(bw(BlockType::A, &[q(-1), q(1), q(0)])));
    }

    #[test]
    fn decompose_round_trip_and_errors() {
        let w1 = bw(BlockType::A, &[frac(2, 3), frac(-1, 3), frac(-1, 3)]);
        for l in 1..3 {
            let Bracket::Weight(lam) = mu_bracket(&w1, l).unwrap() else { panic!() };
            assert_eq!(regular_integral_decompose(&lam).unwrap(), Some((w1.clone(), l)));
        }
        assert_eq!(regular_integral_decompose(&bw(BlockType::A, &[frac(1, 3), frac(-1, 3)])).unwrap(), None);
        // λ + ρ = 0 for sl(2)
        assert!(regular_integral_decompose(&bw(BlockType::A, &[frac(-1, 2), frac(1, 2)])).is_err());
    }

    #[test]
    fn singular_examples() {
        let s = Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(AlgebraKind::SL, 2, 0)).unwrap());
        let b = s.standard_basis();
        let minus_rho = -b.rho();
        assert!(is_singular(&minus_rho, &b));
        assert!(!is_singular(&s.zero(), &b));
        let s3 = Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(AlgebraKind::SL, 3, 0)).unwrap());
        let b3 = s3.standard_basis();
        let target = s3.weight_i(&[1, 1, -2]).unwrap();
        let mu = &target - b3.rho();
        assert!(is_singular(&mu, &b3));
        assert!(is_singular_by_orbit(&mu, &b3).unwrap());
    }

    #[test]
    fn w2_typicality() {
        let s = Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(AlgebraKind::W, 0, 2)).unwrap());
        let b = s.standard_basis();
        let t = is_typical(&s.weight_i(&[5, 1]).unwrap(), &b);
        assert!(!t.typical);
        assert_eq!(t.witnesses, Witnesses::Indices(vec![(1, q(5))]));
        assert!(is_typical(&s.weight_i(&[2, 3]).unwrap(), &b).typical);
    }

    #[test]
    fn central_character_orbits() {
        let s = Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(AlgebraKind::SL, 2, 0)).unwrap());
        let b = s.standard_basis();
        let alpha = b.simple()[0].clone();
        let zero = s.zero();
        assert_ne!(central_character(&zero, &b).unwrap(), central_character(&alpha, &b).unwrap());
        let w = &s.weyl_group().unwrap()[1];
        let mu = s.weight(vec![frac(1, 3), q(0)]).unwrap();
        assert_eq!(
            central_character(&mu, &b).unwrap(),
            central_character(&s.dot_act(w, &mu, b.rho()), &b).unwrap()
        );
    }
}
