//! Root data for the catalog algebras: gl(m|n), sl(m|n), psl(m|m),
//! osp(2|2q), p(m), sp(m) and W(n).
//!
//! Every root vector carries a *formal* coordinate vector in the ambient
//! ε/δ space. For the quotient algebras the weight used for equality is the
//! canonical representative of the formal vector; positivity and the
//! parabolic functional are evaluated on formal vectors.

use crate::linalg::Matrix;
use crate::rational::{fmt_q, frac, parse_q, q, Q};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid-parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid-weight: {0}")]
    InvalidWeight(String),
    #[error("group-too-large: |W| = {size} exceeds cap {cap}")]
    GroupTooLarge { size: u128, cap: u128 },
    #[error("not-parabolic: {0}")]
    NotParabolic(String),
    #[error("catalog-mismatch: {0}")]
    CatalogMismatch(String),
    #[error("none-found: no commuting basis of Q_a")]
    NoneFound,
    #[error("degenerate-basis: {0}")]
    DegenerateBasis(String),
}

pub type Result<T> = std::result::Result<T, RootDataError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum AlgebraKind {
    GL,
    SL,
    PSL,
    OSP,
    P,
    SP,
    W,
}

/// JSON form `{"kind": "GL", "m": 2, "n": 1}`. For OSP, `m` must be 2 and `n`
/// is the even number 2q. For P, SP and W only `m` (or `n` for W) is read.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDescriptor {
    pub kind: AlgebraKind,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub n: usize,
}

impl AlgebraDescriptor {
    pub fn new(kind: AlgebraKind, m: usize, n: usize) -> Self {
        AlgebraDescriptor { kind, m, n }
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlgebraKind::GL => write!(f, "gl({}|{})", self.m, self.n),
            AlgebraKind::SL => write!(f, "sl({}|{})", self.m, self.n),
            AlgebraKind::PSL => write!(f, "psl({}|{})", self.m, self.m),
            AlgebraKind::OSP => write!(f, "osp(2|{})", self.n),
            AlgebraKind::P => write!(f, "p({})", self.m),
            AlgebraKind::SP => write!(f, "sp({})", self.m),
            AlgebraKind::W => write!(f, "W({})", self.n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: usize) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// A weight: coordinates in the ε block followed by the δ block.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<Q>,
    split: usize,
}

impl Weight {
    /// Raw constructor; callers normally go through `SuperRootSystem::weight`.
    pub fn from_parts(coords: Vec<Q>, split: usize) -> Self {
        assert!(split <= coords.len());
        Weight { coords, split }
    }

    pub fn zero(dim: usize, split: usize) -> Self {
        Weight { coords: vec![Q::zero(); dim], split }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &Q) -> Weight {
        Weight { coords: self.coords.iter().map(|x| x * s).collect(), split: self.split }
    }

    pub fn dot(&self, other: &[Q]) -> Q {
        self.coords.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    fn zip_with(&self, other: &Weight, f: impl Fn(&Q, &Q) -> Q) -> Weight {
        assert_eq!(self.coords.len(), other.coords.len(), "weights from different spaces");
        Weight { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(), split: self.split }
    }
}

impl std::ops::Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        self.zip_with(o, |a, b| a + b)
    }
}

impl std::ops::Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        self.zip_with(o, |a, b| a - b)
    }
}

impl std::ops::Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { coords: self.coords.iter().map(|x| -x).collect(), split: self.split }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.coords[..self.split].iter().map(fmt_q).join(",");
        if self.split == self.coords.len() {
            write!(f, "{e}")
        } else {
            let d = self.coords[self.split..].iter().map(fmt_q).join(",");
            write!(f, "{e}|{d}")
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

/// One basis vector of g outside the Cartan subalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootVector {
    /// Canonical weight.
    pub weight: Weight,
    /// Representative in the ambient coordinates before any quotient.
    pub formal: Vec<Q>,
    pub parity: Parity,
    /// ℤ-grading degree (g^{-1}, g^0, g^1 for type I; W^k for W(n)).
    pub grade: i32,
    pub label: String,
}

/// A root with its multiplicity (number of root vectors of that weight and parity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub weight: Weight,
    pub parity: Parity,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// Coordinate `i` is sent to position `perm[i]` with sign `sign[i]`.
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        WeylElement { perm: (0..dim).collect(), sign: vec![1; dim] }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.sign.iter().all(|&s| s == 1)
    }

    pub fn act_formal(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            out[self.perm[i]] = if self.sign[i] < 0 { -x } else { x.clone() };
        }
        out
    }
}

pub const DEFAULT_WEYL_CAP: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperRootSystem {
    pub desc: AlgebraDescriptor,
    eps_dim: usize,
    del_dim: usize,
    relation: Option<Vec<Q>>,
    constraint: Option<Vec<Q>>,
    root_vectors: Vec<RootVector>,
    cartan_dim: usize,
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vec_scale(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl SuperRootSystem {
    pub fn build(desc: &AlgebraDescriptor) -> Result<Self> {
        use AlgebraKind::*;
        let (m, n) = (desc.m, desc.n);
        let bad = |s: &str| Err(RootDataError::InvalidParameters(s.to_string()));
        match desc.kind {
            GL | SL | PSL if m == 0 => return bad("m must be positive"),
            SL if m == n => return bad("sl(m|n) requires m != n"),
            PSL if n != m && n != 0 => return bad("psl(m|m) takes n = m"),
            PSL if m < 2 => return bad("psl(m|m) requires m >= 2"),
            OSP if m != 2 => return bad("osp(2|n) requires m = 2"),
            OSP if n == 0 || n % 2 == 1 => return bad("osp(2|n) requires n even and positive"),
            P | SP if m < 2 => return bad("p(m), sp(m) require m >= 2"),
            W if n == 0 => return bad("W(n) requires n >= 1"),
            _ => {}
        }
        let (eps_dim, del_dim) = match desc.kind {
            GL | SL => (m, n),
            PSL => (m, m),
            OSP => (1, n / 2),
            P | SP => (m, 0),
            W => (n, 0),
        };
        let dim = eps_dim + del_dim;
        let relation = match desc.kind {
            SL | PSL => {
                let mut r = vec![Q::one(); dim];
                for x in r.iter_mut().skip(eps_dim) {
                    *x = -Q::one();
                }
                Some(r)
            }
            SP => Some(vec![Q::one(); dim]),
            _ => None,
        };
        let constraint = match desc.kind {
            PSL => Some(vec![Q::one(); dim]),
            _ => None,
        };
        let cartan_dim = match desc.kind {
            GL | P | W => dim,
            SL | SP => dim - 1,
            PSL => dim - 2,
            OSP => dim,
        };
        let mut sys = SuperRootSystem {
            desc: AlgebraDescriptor { kind: desc.kind, m, n: if desc.kind == PSL { m } else { n } },
            eps_dim,
            del_dim,
            relation,
            constraint,
            root_vectors: Vec::new(),
            cartan_dim,
        };
        let vectors = match desc.kind {
            GL | SL | PSL => sys.gl_type_roots(),
            OSP => sys.osp_roots(),
            P | SP => sys.p_roots(),
            W => sys.w_roots(),
        };
        sys.root_vectors = vectors
            .into_iter()
            .filter_map(|(formal, parity, grade, label)| {
                let weight = sys.canon_vec(&formal);
                if weight.iter().all(|x| x.is_zero()) {
                    // sp(2): ε₁+ε₂ vanishes on the Cartan subalgebra
                    None
                } else {
                    Some(RootVector { weight: Weight::from_parts(weight, eps_dim), formal, parity, grade, label })
                }
            })
            .collect();
        Ok(sys)
    }

    fn gl_type_roots(&self) -> Vec<(Vec<Q>, Parity, i32, String)> {
        let dim = self.dim();
        let name = |i: usize| {
            if i < self.eps_dim {
                format!("e{}", i + 1)
            } else {
                format!("d{}", i - self.eps_dim + 1)
            }
        };
        let mut out = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                let formal = vec_sub(&unit(dim, i), &unit(dim, j));
                let ie = i < self.eps_dim;
                let je = j < self.eps_dim;
                let (parity, grade) = match (ie, je) {
                    (true, true) | (false, false) => (Parity::Even, 0),
                    (true, false) => (Parity::Odd, 1),
                    (false, true) => (Parity::Odd, -1),
                };
                out.push((formal, parity, grade, format!("E[{}-{}]", name(i), name(j))));
            }
        }
        out
    }

    fn osp_roots(&self) -> Vec<(Vec<Q>, Parity, i32, String)> {
        let dim = self.dim();
        let qn = self.del_dim;
        let d = |k: usize| unit(dim, 1 + k);
        let e1 = unit(dim, 0);
        let mut out = Vec::new();
        for k in 0..qn {
            for s in [1i64, -1] {
                out.push((vec_scale(&d(k), &q(2 * s)), Parity::Even, 0, format!("{}2d{}", if s > 0 { "+" } else { "-" }, k + 1)));
            }
            for l in (k + 1)..qn {
                for (s1, s2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                    let v = vec_add(&vec_scale(&d(k), &q(s1)), &vec_scale(&d(l), &q(s2)));
                    out.push((v, Parity::Even, 0, format!("{:+}d{}{:+}d{}", s1, k + 1, s2, l + 1)));
                }
            }
            for (s1, s2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                let v = vec_add(&vec_scale(&e1, &q(s1)), &vec_scale(&d(k), &q(s2)));
                out.push((v, Parity::Odd, s1 as i32, format!("{:+}e1{:+}d{}", s1, s2, k + 1)));
            }
        }
        out
    }

    fn p_roots(&self) -> Vec<(Vec<Q>, Parity, i32, String)> {
        let m = self.eps_dim;
        let e = |i: usize| unit(m, i);
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    out.push((vec_sub(&e(i), &e(j)), Parity::Even, 0, format!("e{}-e{}", i + 1, j + 1)));
                }
            }
        }
        for i in 0..m {
            out.push((vec_scale(&e(i), &q(2)), Parity::Odd, 1, format!("2e{}", i + 1)));
            for j in (i + 1)..m {
                out.push((vec_add(&e(i), &e(j)), Parity::Odd, 1, format!("e{}+e{}", i + 1, j + 1)));
                out.push((vec_scale(&vec_add(&e(i), &e(j)), &q(-1)), Parity::Odd, -1, format!("-e{}-e{}", i + 1, j + 1)));
            }
        }
        out
    }

    fn w_roots(&self) -> Vec<(Vec<Q>, Parity, i32, String)> {
        let n = self.eps_dim;
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            for j in 0..n {
                if size == 1 && mask == 1 << j {
                    continue; // ξ_j ∂_j spans the Cartan subalgebra
                }
                let w = w_basis_weight(n, mask, j);
                let label = format!("xi{}d{}", mask_label(n, mask), j + 1);
                out.push((w, Parity::from_bit(size + 1), size as i32 - 1, label));
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.eps_dim + self.del_dim
    }

    pub fn eps_dim(&self) -> usize {
        self.eps_dim
    }

    pub fn del_dim(&self) -> usize {
        self.del_dim
    }

    pub fn kind(&self) -> AlgebraKind {
        self.desc.kind
    }

    pub fn cartan_dim(&self) -> usize {
        self.cartan_dim
    }

    pub fn relation(&self) -> Option<&[Q]> {
        self.relation.as_deref()
    }

    pub fn is_lie_algebra(&self) -> bool {
        self.root_vectors.iter().all(|r| r.parity == Parity::Even)
    }

    /// Canonical representative of an ambient vector: the relation multiple
    /// is chosen so that the last coordinate vanishes.
    fn canon_vec(&self, v: &[Q]) -> Vec<Q> {
        match &self.relation {
            None => v.to_vec(),
            Some(r) => {
                let last = v.len() - 1;
                let t = &v[last] / &r[last];
                vec_sub(v, &vec_scale(r, &t))
            }
        }
    }

    pub fn canonicalize(&self, w: &Weight) -> Weight {
        Weight::from_parts(self.canon_vec(w.coords()), self.eps_dim)
    }

    pub fn weight(&self, coords: Vec<Q>) -> Result<Weight> {
        if coords.len() != self.dim() {
            return Err(RootDataError::InvalidWeight(format!(
                "expected {} coordinates for {}, got {}",
                self.dim(),
                self.desc,
                coords.len()
            )));
        }
        if let Some(c) = &self.constraint {
            let s: Q = coords.iter().zip(c).map(|(a, b)| a * b).sum();
            if !s.is_zero() {
                return Err(RootDataError::InvalidWeight(format!(
                    "weight of psl({}|{}) must satisfy sum of all coordinates = 0",
                    self.eps_dim, self.eps_dim
                )));
            }
        }
        Ok(Weight::from_parts(self.canon_vec(&coords), self.eps_dim))
    }

    pub fn weight_i(&self, coords: &[i64]) -> Result<Weight> {
        self.weight(coords.iter().map(|&x| q(x)).collect())
    }

    /// Parse the external string form `"a,b|c,d"`.
    pub fn parse_weight(&self, s: &str) -> Result<Weight> {
        let bad = || RootDataError::InvalidWeight(format!("cannot parse weight string {s:?}"));
        let (e, d) = match s.split_once('|') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let parse_block = |t: &str| -> Result<Vec<Q>> {
            if t.trim().is_empty() {
                return Ok(Vec::new());
            }
            t.split(',').map(|x| parse_q(x).ok_or_else(bad)).collect()
        };
        let mut coords = parse_block(e)?;
        let dcoords = match d {
            Some(t) => parse_block(t)?,
            None => Vec::new(),
        };
        if coords.len() != self.eps_dim || dcoords.len() != self.del_dim {
            return Err(RootDataError::InvalidWeight(format!(
                "weight {s:?} has block sizes ({}, {}), expected ({}, {})",
                coords.len(),
                dcoords.len(),
                self.eps_dim,
                self.del_dim
            )));
        }
        coords.extend(dcoords);
        self.weight(coords)
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.dim(), self.eps_dim)
    }

    pub fn eps(&self, i: usize) -> Weight {
        Weight::from_parts(self.canon_vec(&unit(self.dim(), i)), self.eps_dim)
    }

    pub fn del(&self, j: usize) -> Weight {
        Weight::from_parts(self.canon_vec(&unit(self.dim(), self.eps_dim + j)), self.eps_dim)
    }

    pub fn from_formal(&self, v: &[Q]) -> Weight {
        Weight::from_parts(self.canon_vec(v), self.eps_dim)
    }

    pub fn root_vectors(&self) -> &[RootVector] {
        &self.root_vectors
    }

    /// Distinct roots with multiplicities, in a deterministic order.
    pub fn roots(&self) -> Vec<Root> {
        let mut map: BTreeMap<(Weight, Parity), usize> = BTreeMap::new();
        for r in &self.root_vectors {
            *map.entry((r.weight.clone(), r.parity)).or_default() += 1;
        }
        map.into_iter().map(|((weight, parity), mult)| Root { weight, parity, mult }).collect()
    }

    pub fn even_roots(&self) -> Vec<Root> {
        self.roots().into_iter().filter(|r| r.parity == Parity::Even).collect()
    }

    pub fn odd_roots(&self) -> Vec<Root> {
        self.roots().into_iter().filter(|r| r.parity == Parity::Odd).collect()
    }

    /// Odd roots of positive (resp. negative) grade: Δ₁⁺ and Δ₁⁻.
    pub fn odd_roots_graded(&self, positive: bool) -> Vec<Root> {
        let mut map: BTreeMap<Weight, usize> = BTreeMap::new();
        for r in &self.root_vectors {
            if r.parity == Parity::Odd && ((r.grade > 0) == positive) {
                *map.entry(r.weight.clone()).or_default() += 1;
            }
        }
        map.into_iter().map(|(weight, mult)| Root { weight, parity: Parity::Odd, mult }).collect()
    }

    /// Total multiplicity of α as a root (all parities).
    pub fn root_multiplicity(&self, alpha: &Weight) -> usize {
        let a = self.canonicalize(alpha);
        self.root_vectors.iter().filter(|r| r.weight == a).count()
    }

    pub fn is_root(&self, alpha: &Weight) -> bool {
        self.root_multiplicity(alpha) > 0
    }

    /// Total dimension of g.
    pub fn dimension(&self) -> usize {
        self.root_vectors.len() + self.cartan_dim
    }

    /// Indices of root vectors spanning g₀' (the reductive even part whose
    /// Weyl group is W): all even roots, except for W(n) where g₀' = gl(n).
    pub fn is_g0_prime(&self, rv: &RootVector) -> bool {
        rv.parity == Parity::Even && (self.kind() != AlgebraKind::W || rv.grade == 0)
    }

    pub fn g0_prime_roots(&self) -> Vec<Weight> {
        self.root_vectors.iter().filter(|r| self.is_g0_prime(r)).map(|r| r.weight.clone()).unique().collect()
    }

    /// Dimension of g₀'' (only meaningful for W(n)): even part minus gl(n).
    pub fn dim_g0_double_prime(&self) -> usize {
        let even = self.root_vectors.iter().filter(|r| r.parity == Parity::Even).count() + self.cartan_dim;
        let g0p = self.root_vectors.iter().filter(|r| self.is_g0_prime(r)).count() + self.cartan_dim;
        even - g0p
    }

    /// dim W^k for W(n); for type I algebras the ℤ-grading pieces g^k.
    pub fn graded_dimension(&self, k: i32) -> usize {
        let roots = self.root_vectors.iter().filter(|r| r.grade == k).count();
        roots + if k == 0 { self.cartan_dim } else { 0 }
    }

    /// Standard form on ambient representatives.
    pub fn form(&self, a: &Weight, b: &Weight) -> Q {
        self.form_vec(a.coords(), b.coords())
    }

    pub fn form_vec(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for i in 0..self.dim() {
            let t = &a[i] * &b[i];
            if i < self.eps_dim {
                s += t;
            } else {
                s -= t;
            }
        }
        s
    }

    /// `(λ, α∨) = 2(λ,α)/(α,α)`; `None` for isotropic α.
    pub fn coroot_pairing(&self, lambda: &Weight, alpha: &Weight) -> Option<Q> {
        let aa = self.form(alpha, alpha);
        if aa.is_zero() {
            None
        } else {
            Some(q(2) * self.form(lambda, alpha) / aa)
        }
    }

    pub fn weyl_group_order(&self) -> u128 {
        use AlgebraKind::*;
        match self.kind() {
            GL | SL | PSL => factorial(self.eps_dim) * factorial(self.del_dim),
            OSP => (1u128 << self.del_dim) * factorial(self.del_dim),
            P | SP | W => factorial(self.eps_dim),
        }
    }

    pub fn weyl_group(&self) -> Result<Vec<WeylElement>> {
        self.weyl_group_capped(DEFAULT_WEYL_CAP)
    }

    pub fn weyl_group_capped(&self, cap: u128) -> Result<Vec<WeylElement>> {
        let size = self.weyl_group_order();
        if size > cap {
            return Err(RootDataError::GroupTooLarge { size, cap });
        }
        let dim = self.dim();
        let mut out = Vec::new();
        match self.kind() {
            AlgebraKind::OSP => {
                let qn = self.del_dim;
                for p in (0..qn).permutations(qn) {
                    for signs in 0u32..(1 << qn) {
                        let mut perm = vec![0usize];
                        let mut sign = vec![1i8];
                        for (k, &pk) in p.iter().enumerate() {
                            perm.push(1 + pk);
                            sign.push(if signs >> k & 1 == 1 { -1 } else { 1 });
                        }
                        out.push(WeylElement { perm, sign });
                    }
                }
            }
            _ => {
                let (e, d) = (self.eps_dim, self.del_dim);
                for pe in (0..e).permutations(e) {
                    for pd in (0..d).permutations(d) {
                        let mut perm = pe.clone();
                        perm.extend(pd.iter().map(|x| x + e));
                        out.push(WeylElement { perm, sign: vec![1; dim] });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn weyl_act(&self, w: &WeylElement, v: &Weight) -> Weight {
        self.from_formal(&w.act_formal(v.coords()))
    }

    /// Dot action `w·μ = w(μ+ρ) − ρ`.
    pub fn dot_act(&self, w: &WeylElement, mu: &Weight, rho: &Weight) -> Weight {
        let shifted = mu + rho;
        &self.weyl_act(w, &shifted) - rho
    }

    /// Positivity functional used by the standard basis (see `standard_basis`).
    fn standard_functional(&self) -> Vec<Q> {
        use AlgebraKind::*;
        let dim = self.dim();
        match self.kind() {
            GL | SL | PSL | OSP | P | SP => (0..dim).map(|i| q((2 * dim - i) as i64)).collect(),
            W => (0..dim).map(|i| q((3 * dim - i) as i64)).collect(),
        }
    }

    /// Distinguished basis. Per family:
    /// gl/sl/psl: ε₁−ε₂,…,ε_m−δ₁,…,δ_{n−1}−δ_n;
    /// osp(2|2q): ε₁−δ₁, δ₁−δ₂, …, 2δ_q;
    /// p(m), sp(m): ε₁−ε₂, …, 2ε_m (g¹ positive);
    /// W(n): b_{gl(n)} ⊕ W_{≥1}.
    pub fn standard_basis(self: &Arc<Self>) -> RootBasis {
        RootBasis::from_functional(self.clone(), &[], &self.standard_functional())
    }
}

fn mask_label(n: usize, mask: u32) -> String {
    let s: String = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Weight of ξ_S ∂_j: Σ_{i∈S} ε_i − ε_j.
pub fn w_basis_weight(n: usize, mask: u32, j: usize) -> Vec<Q> {
    let mut v: Vec<Q> = (0..n).map(|i| if mask >> i & 1 == 1 { Q::one() } else { Q::zero() }).collect();
    v[j] -= Q::one();
    v
}

/// A positive system with its simple roots and ρ.
#[derive(Debug, Clone)]
pub struct RootBasis {
    sys: Arc<SuperRootSystem>,
    simple_formal: Vec<Vec<Q>>,
    simple: Vec<Weight>,
    positive: Vec<bool>,
    rho: Weight,
    independent: bool,
}

impl RootBasis {
    /// Positive root vectors are those whose formal vector is
    /// lexicographically positive for the keys `(l, φ)`; `l` may be empty.
    pub fn from_functional(sys: Arc<SuperRootSystem>, l: &[Q], phi: &[Q]) -> Self {
        let key = |v: &[Q]| -> (Q, Q) {
            let a: Q = if l.is_empty() { Q::zero() } else { v.iter().zip(l).map(|(x, y)| x * y).sum() };
            let b: Q = v.iter().zip(phi).map(|(x, y)| x * y).sum();
            (a, b)
        };
        let is_pos = |v: &[Q]| {
            let (a, b) = key(v);
            a.is_positive() || (a.is_zero() && b.is_positive())
        };
        let positive: Vec<bool> = sys.root_vectors.iter().map(|r| is_pos(&r.formal)).collect();
        let pos_formal: Vec<Vec<Q>> =
            sys.root_vectors.iter().zip(&positive).filter(|(_, p)| **p).map(|(r, _)| r.formal.clone()).unique().collect();
        let simple_formal: Vec<Vec<Q>> = pos_formal
            .iter()
            .filter(|v| {
                !pos_formal.iter().any(|a| {
                    let rest = vec_sub(v, a);
                    pos_formal.contains(&rest)
                })
            })
            .cloned()
            .collect();
        let simple_formal = order_simple(simple_formal, &key);
        let simple: Vec<Weight> = simple_formal.iter().map(|v| sys.from_formal(v)).collect();
        let cols: Vec<Vec<Q>> = simple.iter().map(|w| w.coords().to_vec()).collect();
        let independent = cols.is_empty() || Matrix::from_cols(&cols, sys.dim()).rank() == cols.len();
        let mut rho = vec![Q::zero(); sys.dim()];
        for (r, p) in sys.root_vectors.iter().zip(&positive) {
            if !*p {
                continue;
            }
            let sgn = if r.parity == Parity::Even { frac(1, 2) } else { frac(-1, 2) };
            rho = vec_add(&rho, &vec_scale(&r.formal, &sgn));
        }
        let rho = sys.from_formal(&rho);
        RootBasis { sys, simple_formal, simple, positive, rho, independent }
    }

    pub fn system(&self) -> &Arc<SuperRootSystem> {
        &self.sys
    }

    pub fn simple(&self) -> &[Weight] {
        &self.simple
    }

    pub fn simple_formal(&self) -> &[Vec<Q>] {
        &self.simple_formal
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    /// Positivity flag per root vector of the system.
    pub fn positive_flags(&self) -> &[bool] {
        &self.positive
    }

    pub fn positive_roots(&self, parity: Parity) -> Vec<Root> {
        let mut map: BTreeMap<Weight, usize> = BTreeMap::new();
        for (r, p) in self.sys.root_vectors.iter().zip(&self.positive) {
            if *p && r.parity == parity {
                *map.entry(r.weight.clone()).or_default() += 1;
            }
        }
        map.into_iter().map(|(weight, mult)| Root { weight, parity, mult }).collect()
    }

    /// Coordinates of a canonical weight in the basis B, if it lies in the
    /// rational span. Requires independent B.
    pub fn coords(&self, w: &Weight) -> Result<Option<Vec<Q>>> {
        if !self.independent {
            return Err(RootDataError::DegenerateBasis(format!(
                "simple roots of {} are linearly dependent in h*",
                self.sys.desc
            )));
        }
        if self.simple.is_empty() {
            return Ok(if w.is_zero() { Some(Vec::new()) } else { None });
        }
        let cols: Vec<Vec<Q>> = self.simple.iter().map(|s| s.coords().to_vec()).collect();
        let m = Matrix::from_cols(&cols, self.sys.dim());
        Ok(m.solve(w.coords()))
    }

    /// `ν − μ ∈ ℤ≥0·B`.
    pub fn leq(&self, mu: &Weight, nu: &Weight) -> bool {
        match self.coords(&(nu - mu)) {
            Ok(Some(c)) => c.iter().all(crate::rational::is_nonneg_int),
            _ => false,
        }
    }

    /// Height of `ν − μ` when `μ ≤ ν`.
    pub fn depth(&self, mu: &Weight, nu: &Weight) -> Option<i64> {
        let c = self.coords(&(nu - mu)).ok()??;
        if !c.iter().all(crate::rational::is_nonneg_int) {
            return None;
        }
        Some(c.iter().map(|x| crate::rational::to_i64(x).unwrap()).sum())
    }

    pub fn is_positive_root_weight(&self, w: &Weight) -> bool {
        self.sys.root_vectors.iter().zip(&self.positive).any(|(r, p)| *p && &r.weight == w)
    }
}

/// Order simple roots so that consecutive ones are adjacent when possible,
/// starting from the one of largest key: this reproduces ε₁−ε₂, ε₂−ε₃, …
fn order_simple(mut s: Vec<Vec<Q>>, key: &impl Fn(&[Q]) -> (Q, Q)) -> Vec<Vec<Q>> {
    // Sort by the position of the first nonzero coordinate, then by key.
    s.sort_by(|a, b| {
        let fa = a.iter().position(|x| !x.is_zero()).unwrap_or(usize::MAX);
        let fb = b.iter().position(|x| !x.is_zero()).unwrap_or(usize::MAX);
        fa.cmp(&fb).then_with(|| key(b).cmp(&key(a)))
    });
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockType {
    /// sl(m)
    A,
    /// sp(2m)
    C,
}

/// Coordinates of a weight restricted to one simple block of a.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockWeight {
    pub ty: BlockType,
    pub coords: Vec<Q>,
}

impl BlockWeight {
    pub fn new(ty: BlockType, coords: Vec<Q>) -> Self {
        BlockWeight { ty, coords }
    }

    pub fn size(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for BlockWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coords.iter().map(fmt_q).join(","))
    }
}

/// A simple block a_i: an ordered list of signed ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub ty: BlockType,
    pub coords: Vec<(usize, i8)>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.coords.len()
    }

    pub fn rank(&self) -> usize {
        match self.ty {
            BlockType::A => self.size() - 1,
            BlockType::C => self.size(),
        }
    }

    /// Ambient formal vector of a block coordinate vector.
    pub fn embed(&self, dim: usize, x: &[Q]) -> Vec<Q> {
        let mut v = vec![Q::zero(); dim];
        for ((idx, s), c) in self.coords.iter().zip(x) {
            v[*idx] += if *s < 0 { -c } else { c.clone() };
        }
        v
    }

    /// Roots of the block in block coordinates, as integer vectors.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let m = self.size();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    let mut v = vec![0; m];
                    v[i] = 1;
                    v[j] = -1;
                    out.push(v);
                }
            }
        }
        if self.ty == BlockType::C {
            for i in 0..m {
                for s in [1, -1] {
                    let mut v = vec![0; m];
                    v[i] = 2 * s;
                    out.push(v);
                    for j in (i + 1)..m {
                        let mut w = vec![0; m];
                        w[i] = s;
                        w[j] = s;
                        out.push(w);
                    }
                }
            }
        }
        out
    }

    /// Standard simple roots in block coordinates.
    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        standard_block_basis(self.ty, self.size())
    }
}

/// `B_{a_i}`: {ε₁−ε₂, …, ε_{m−1}−ε_m} for sl(m), with 2ε_m appended for sp(2m).
pub fn standard_block_basis(ty: BlockType, m: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..m.saturating_sub(1) {
        let mut v = vec![0; m];
        v[i] = 1;
        v[i + 1] = -1;
        out.push(v);
    }
    if ty == BlockType::C {
        let mut v = vec![0; m];
        v[m - 1] = 2;
        out.push(v);
    }
    out
}

/// ρ of a block in its own coordinates.
pub fn block_rho(ty: BlockType, m: usize) -> Vec<Q> {
    match ty {
        BlockType::A => (0..m).map(|j| frac((m as i64 - 1) - 2 * j as i64, 2)).collect(),
        BlockType::C => (0..m).map(|j| q(m as i64 - j as i64)).collect(),
    }
}

#[derive(Debug, Clone)]
pub struct Parabolic {
    sys: Arc<SuperRootSystem>,
    l: Vec<Q>,
    levels: Vec<i64>,
    blocks: Vec<Block>,
    basis: RootBasis,
}

impl Parabolic {
    pub fn build(sys: Arc<SuperRootSystem>, l: &[i64]) -> Result<Self> {
        if l.len() != sys.dim() {
            return Err(RootDataError::InvalidParameters(format!(
                "functional has {} entries, ambient dimension is {}",
                l.len(),
                sys.dim()
            )));
        }
        let lq: Vec<Q> = l.iter().map(|&x| q(x)).collect();
        let levels: Vec<i64> = sys
            .root_vectors
            .iter()
            .map(|r| {
                let v: Q = r.formal.iter().zip(&lq).map(|(a, b)| a * b).sum();
                crate::rational::to_i64(&v).expect("integer functional")
            })
            .collect();
        for (r, lv) in sys.root_vectors.iter().zip(&levels) {
            if *lv == 0 && !sys.is_g0_prime(r) {
                return Err(RootDataError::NotParabolic(format!(
                    "root {} ({:?}) has level 0 but is not a root of g0'",
                    r.label, r.parity
                )));
            }
        }
        let blocks = find_blocks(&sys, &levels)?;
        let phi = sys.standard_functional();
        let basis = RootBasis::from_functional(sys.clone(), &lq, &phi);
        let blocks = order_blocks(blocks, &phi);
        let par = Parabolic { sys, l: lq, levels, blocks, basis };
        par.validate_catalog()?;
        Ok(par)
    }

    fn validate_catalog(&self) -> Result<()> {
        use AlgebraKind::*;
        let sys = &self.sys;
        let e = sys.eps_dim;
        let mut c_blocks = 0;
        for b in &self.blocks {
            let in_eps = b.coords.iter().all(|(i, _)| *i < e);
            let in_del = b.coords.iter().all(|(i, _)| *i >= e);
            match sys.kind() {
                GL | SL | PSL | P | SP | W => {
                    if b.ty != BlockType::A || !(in_eps || in_del) || b.coords.iter().any(|(_, s)| *s < 0) {
                        return Err(RootDataError::CatalogMismatch(format!(
                            "block {:?} is not a gl-type block of {}",
                            b.coords, sys.desc
                        )));
                    }
                }
                OSP => {
                    if !in_del {
                        return Err(RootDataError::CatalogMismatch("osp block touches ε₁".into()));
                    }
                    if b.ty == BlockType::C {
                        c_blocks += 1;
                    }
                }
            }
        }
        if c_blocks > 1 {
            return Err(RootDataError::CatalogMismatch("more than one sp block in osp(2|n)".into()));
        }
        let semisimple_rank: usize = self.blocks.iter().map(|b| b.rank()).sum();
        if semisimple_rank > sys.cartan_dim {
            return Err(RootDataError::CatalogMismatch("block ranks exceed rank of h".into()));
        }
        let a_root_count = self.levels.iter().filter(|&&x| x == 0).count();
        let block_root_count: usize = self.blocks.iter().map(|b| b.roots().len()).sum();
        if a_root_count != block_root_count {
            return Err(RootDataError::CatalogMismatch(format!(
                "zero level has {a_root_count} root vectors but blocks account for {block_root_count}"
            )));
        }
        Ok(())
    }

    pub fn system(&self) -> &Arc<SuperRootSystem> {
        &self.sys
    }

    pub fn functional(&self) -> &[Q] {
        &self.l
    }

    pub fn basis(&self) -> &RootBasis {
        &self.basis
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Level of each root vector.
    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn u_minus(&self) -> Vec<&RootVector> {
        self.sys.root_vectors.iter().zip(&self.levels).filter(|(_, l)| **l < 0).map(|(r, _)| r).collect()
    }

    pub fn u_plus(&self) -> Vec<&RootVector> {
        self.sys.root_vectors.iter().zip(&self.levels).filter(|(_, l)| **l > 0).map(|(r, _)| r).collect()
    }

    pub fn a_roots(&self) -> Vec<&RootVector> {
        self.sys.root_vectors.iter().zip(&self.levels).filter(|(_, l)| **l == 0).map(|(r, _)| r).collect()
    }

    pub fn center_dim(&self) -> usize {
        self.sys.cartan_dim - self.blocks.iter().map(|b| b.rank()).sum::<usize>()
    }

    /// η^{a_i}, in block coordinates.
    pub fn project(&self, eta: &Weight) -> Vec<BlockWeight> {
        self.blocks.iter().map(|b| self.project_block(b, eta)).collect()
    }

    pub fn project_block(&self, b: &Block, eta: &Weight) -> BlockWeight {
        let raw: Vec<Q> =
            b.coords.iter().map(|(i, s)| if *s < 0 { -eta.coords()[*i].clone() } else { eta.coords()[*i].clone() }).collect();
        let coords = match b.ty {
            BlockType::A => {
                let mean: Q = raw.iter().sum::<Q>() / q(raw.len() as i64);
                raw.iter().map(|x| x - &mean).collect()
            }
            BlockType::C => raw,
        };
        BlockWeight { ty: b.ty, coords }
    }

    /// η^z = η − Σ η^{a_i}.
    pub fn central(&self, eta: &Weight) -> Weight {
        let s = self.semisimple(eta);
        &self.sys.canonicalize(eta) - &s
    }

    /// η^s = Σ η^{a_i}.
    pub fn semisimple(&self, eta: &Weight) -> Weight {
        let dim = self.sys.dim();
        let mut v = vec![Q::zero(); dim];
        for b in &self.blocks {
            let p = self.project_block(b, eta);
            v = vec_add(&v, &b.embed(dim, &p.coords));
        }
        self.sys.from_formal(&v)
    }

    /// Rebuild a weight from block components and a central part.
    pub fn assemble(&self, parts: &[BlockWeight], z: &Weight) -> Weight {
        assert_eq!(parts.len(), self.blocks.len());
        let dim = self.sys.dim();
        let mut v = z.coords().to_vec();
        for (b, p) in self.blocks.iter().zip(parts) {
            v = vec_add(&v, &b.embed(dim, &p.coords));
        }
        self.sys.from_formal(&v)
    }

    /// Membership of a weight difference in Q_a.
    pub fn in_qa(&self, d: &Weight) -> bool {
        if !self.central(d).is_zero() {
            return false;
        }
        self.project(d).iter().all(|p| match p.ty {
            BlockType::A => p.coords.iter().all(crate::rational::is_int),
            BlockType::C => {
                p.coords.iter().all(crate::rational::is_int) && crate::rational::is_int(&(p.coords.iter().sum::<Q>() / q(2)))
            }
        })
    }

    /// l-level of an element of the root lattice (difference of weights in one coset).
    pub fn level_of(&self, d: &Weight) -> Option<Q> {
        let c = self.basis.coords(d).ok()??;
        let mut s = Q::zero();
        for (ci, b) in c.iter().zip(self.basis.simple_formal()) {
            let lb: Q = b.iter().zip(&self.l).map(|(x, y)| x * y).sum();
            s += ci * lb;
        }
        Some(s)
    }

    /// A block root (block coordinates) as a weight of g.
    pub fn block_root_weight(&self, block: usize, v: &[i64]) -> Weight {
        let b = &self.blocks[block];
        let x: Vec<Q> = v.iter().map(|&t| q(t)).collect();
        self.sys.from_formal(&b.embed(self.sys.dim(), &x))
    }

    pub fn is_block_root(&self, block: usize, v: &[i64]) -> bool {
        self.blocks[block].roots().iter().any(|r| r == v)
    }
}

fn find_blocks(sys: &SuperRootSystem, levels: &[i64]) -> Result<Vec<Block>> {
    let dim = sys.dim();
    // edges between ambient coordinates from zero-level roots ±x_i ± x_j
    let mut adj: HashMap<usize, Vec<(usize, i8)>> = HashMap::new();
    let mut c_marked = vec![false; dim];
    for (r, lv) in sys.root_vectors.iter().zip(levels) {
        if *lv != 0 {
            continue;
        }
        let nz: Vec<(usize, &Q)> = r.formal.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        match nz.as_slice() {
            [(i, a)] if a.abs() == q(2) => c_marked[*i] = true,
            [(i, a), (j, b)] if a.abs() == Q::one() && b.abs() == Q::one() => {
                let rel: i8 = if (*a * *b).is_negative() { 1 } else { -1 };
                adj.entry(*i).or_default().push((*j, rel));
                adj.entry(*j).or_default().push((*i, rel));
            }
            _ => {
                return Err(RootDataError::NotParabolic(format!(
                    "zero-level root {} is not of the form ±x_i±x_j or ±2x_i",
                    r.label
                )))
            }
        }
    }
    let mut seen = vec![false; dim];
    let mut blocks = Vec::new();
    for start in 0..dim {
        if seen[start] || (!adj.contains_key(&start) && !c_marked[start]) {
            continue;
        }
        let mut sign: HashMap<usize, i8> = HashMap::new();
        sign.insert(start, 1);
        let mut stack = vec![start];
        let mut consistent = true;
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for &(j, rel) in adj.get(&i).map(|v| v.as_slice()).unwrap_or(&[]) {
                let sj = sign[&i] * rel;
                match sign.get(&j) {
                    Some(&s) if s != sj => consistent = false,
                    Some(_) => {}
                    None => {
                        sign.insert(j, sj);
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        let members: Vec<usize> = sign.keys().copied().sorted().collect();
        let is_c = !consistent || members.iter().any(|&i| c_marked[i]);
        let coords = if is_c { members.iter().map(|&i| (i, 1)).collect() } else { members.iter().map(|&i| (i, sign[&i])).collect() };
        let ty = if is_c { BlockType::C } else { BlockType::A };
        if ty == BlockType::A && members.len() < 2 {
            continue;
        }
        blocks.push(Block { ty, coords });
    }
    Ok(blocks)
}

/// Order coordinates inside each block by decreasing φ(±x) so that the block
/// positive roots are x_i − x_j for i < j; blocks by first coordinate.
fn order_blocks(blocks: Vec<Block>, phi: &[Q]) -> Vec<Block> {
    let mut out: Vec<Block> = blocks
        .into_iter()
        .map(|mut b| {
            if b.ty == BlockType::A {
                // normalise so the leading coordinate carries sign +
                let val = |(i, s): &(usize, i8)| if *s < 0 { -phi[*i].clone() } else { phi[*i].clone() };
                let probe: Vec<Q> = b.coords.iter().map(val).collect();
                if probe.iter().all(|x| x.is_negative()) {
                    for c in b.coords.iter_mut() {
                        c.1 = -c.1;
                    }
                }
                b.coords.sort_by(|x, y| val(y).cmp(&val(x)));
            } else {
                b.coords.sort_by(|x, y| phi[y.0].cmp(&phi[x.0]));
            }
            b
        })
        .collect();
    out.sort_by_key(|b| b.coords.iter().map(|c| c.0).min());
    out
}

/// Γ_a: a commuting basis of Q_a, stored per block in block coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingSet {
    /// (block index, root in block coordinates)
    pub roots: Vec<(usize, Vec<i64>)>,
    pub weights: Vec<Weight>,
}

impl CommutingSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

pub fn find_commuting_basis(par: &Parabolic) -> Result<CommutingSet> {
    if par.blocks().is_empty() {
        return Err(RootDataError::InvalidParameters("a has no simple factor".into()));
    }
    let mut roots = Vec::new();
    for (bi, b) in par.blocks().iter().enumerate() {
        let template = commuting_template(b.ty, b.size());
        let chosen = if block_set_is_commuting_basis(b, &template) {
            template
        } else {
            exhaustive_commuting(b).ok_or(RootDataError::NoneFound)?
        };
        roots.extend(chosen.into_iter().map(|r| (bi, r)));
    }
    let weights = roots.iter().map(|(bi, r)| par.block_root_weight(*bi, r)).collect();
    Ok(CommutingSet { roots, weights })
}

/// {x₁ − x_j} for sl(m); {2x₁, x₁ + x_j} for sp(2m).
pub fn commuting_template(ty: BlockType, m: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if ty == BlockType::C {
        let mut v = vec![0; m];
        v[0] = 2;
        out.push(v);
    }
    for j in 1..m {
        let mut v = vec![0; m];
        v[0] = 1;
        v[j] = if ty == BlockType::A { -1 } else { 1 };
        out.push(v);
    }
    out
}

/// Pairwise sums are non-roots and the set is a ℤ-basis of the root lattice.
pub fn block_set_is_commuting_basis(b: &Block, set: &[Vec<i64>]) -> bool {
    let roots = b.roots();
    if set.len() != b.rank() || !set.iter().all(|r| roots.contains(r)) {
        return false;
    }
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            let s: Vec<i64> = set[i].iter().zip(&set[j]).map(|(a, c)| a + c).collect();
            if roots.contains(&s) {
                return false;
            }
        }
    }
    // express in the simple basis; must be unimodular
    let simple = b.simple_roots();
    let m = b.size();
    let scols: Vec<Vec<Q>> = simple.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
    let smat = Matrix::from_cols(&scols, m);
    let mut coeffs = Vec::new();
    for r in set {
        let target: Vec<Q> = r.iter().map(|&x| q(x)).collect();
        match smat.solve(&target) {
            Some(c) => coeffs.push(c),
            None => return false,
        }
    }
    let cm = Matrix::from_cols(&coeffs, simple.len());
    determinant(&cm).map(|d| d.abs() == Q::one()).unwrap_or(false)
}

fn determinant(m: &Matrix) -> Option<Q> {
    if m.rows() != m.cols() {
        return None;
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Q::one();
    for c in 0..n {
        let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
        if p != c {
            for k in 0..n {
                let (x, y) = (a.get(p, k).clone(), a.get(c, k).clone());
                a.set(p, k, y);
                a.set(c, k, x);
            }
            det = -det;
        }
        let piv = a.get(c, c).clone();
        det *= &piv;
        for r in (c + 1)..n {
            let f = a.get(r, c) / &piv;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let v = a.get(r, k) - &f * a.get(c, k);
                a.set(r, k, v);
            }
        }
    }
    Some(det)
}

fn exhaustive_commuting(b: &Block) -> Option<Vec<Vec<i64>>> {
    let roots = b.roots();
    roots.iter().cloned().combinations(b.rank()).find(|c| block_set_is_commuting_basis(b, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(kind: AlgebraKind, m: usize, n: usize) -> Arc<SuperRootSystem> {
        Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(kind, m, n)).unwrap())
    }

    #[test]
    fn gl11_roots() {
        let s = sys(AlgebraKind::GL, 1, 1);
        assert!(s.even_roots().is_empty());
        let odd: Vec<String> = s.odd_roots().iter().map(|r| r.weight.to_string()).collect();
        assert_eq!(odd, vec!["-1|1", "1|-1"]);
    }

    #[test]
    fn osp24_counts() {
        let s = sys(AlgebraKind::OSP, 2, 4);
        assert_eq!(s.even_roots().len(), 8);
        assert_eq!(s.odd_roots().len(), 8);
        assert_eq!(s.weyl_group().unwrap().len(), 8);
    }

    #[test]
    fn w2_dimensions() {
        let s = sys(AlgebraKind::W, 0, 2);
        assert_eq!(s.dimension(), 8);
        assert_eq!(s.dim_g0_double_prime(), 0);
        assert_eq!(s.root_multiplicity(&s.weight_i(&[-1, 0]).unwrap()), 1);
        assert_eq!(s.root_multiplicity(&s.weight_i(&[1, 0]).unwrap()), 1);
        assert_eq!(s.graded_dimension(-1), 2);
    }

    #[test]
    fn invalid_parameters() {
        assert!(SuperRootSystem::build(&AlgebraDescriptor::new(AlgebraKind::SL, 2, 2)).is_err());
        assert!(SuperRootSystem::build(&AlgebraDescriptor::new(AlgebraKind::OSP, 2, 3)).is_err());
    }

    #[test]
    fn standard_bases() {
        let s = sys(AlgebraKind::SL, 2, 0);
        let b = s.standard_basis();
        assert_eq!(b.simple(), &[s.weight_i(&[2, 0]).unwrap()]);
        // ρ = (ε₁−ε₂)/2 is ε₁ in canonical form
        assert_eq!(b.rho(), &s.weight(vec![frac(1, 2), frac(-1, 2)]).unwrap());
        let g = sys(AlgebraKind::GL, 1, 1);
        let bg = g.standard_basis();
        assert_eq!(bg.rho(), &g.weight(vec![frac(-1, 2), frac(1, 2)]).unwrap());
        let w = sys(AlgebraKind::W, 0, 2);
        let bw = w.standard_basis();
        assert_eq!(bw.simple(), &[w.weight_i(&[1, -1]).unwrap(), w.weight_i(&[0, 1]).unwrap()]);
        assert_eq!(bw.rho(), &w.weight_i(&[0, -1]).unwrap());
    }

    #[test]
    fn sl21_basis_and_rho() {
        let s = sys(AlgebraKind::SL, 2, 1);
        let b = s.standard_basis();
        assert_eq!(b.simple(), &[s.weight_i(&[1, -1, 0]).unwrap(), s.weight_i(&[0, 1, -1]).unwrap()]);
        assert_eq!(b.rho(), &s.weight_i(&[0, -1, 1]).unwrap());
    }

    #[test]
    fn form_examples() {
        let s = sys(AlgebraKind::GL, 1, 1);
        let a = s.weight_i(&[1, -1]).unwrap();
        let b = s.weight_i(&[1, 1]).unwrap();
        assert_eq!(s.form(&a, &b), q(2));
        assert_eq!(s.form(&s.del(0), &s.del(0)), q(-1));
    }

    #[test]
    fn parabolic_sl21() {
        let s = sys(AlgebraKind::SL, 2, 1);
        let p = Parabolic::build(s.clone(), &[0, 0, -1]).unwrap();
        assert_eq!(p.blocks().len(), 1);
        assert_eq!(p.center_dim(), 1);
        assert!(p.u_plus().iter().all(|r| r.grade == 1));
    }

    #[test]
    fn parabolic_w_rejects_g0_double_prime() {
        let s = sys(AlgebraKind::W, 0, 3);
        // l(ε₁+ε₂−ε₃) = 0 with l = (1,1,2)
        assert!(matches!(Parabolic::build(s, &[1, 1, 2]), Err(RootDataError::NotParabolic(_))));
    }

    #[test]
    fn commuting_sets() {
        let s = sys(AlgebraKind::SL, 3, 0);
        let p = Parabolic::build(s.clone(), &[0, 0, 0]).unwrap();
        let g = find_commuting_basis(&p).unwrap();
        assert_eq!(g.roots.iter().map(|r| r.1.clone()).collect::<Vec<_>>(), vec![vec![1, -1, 0], vec![1, 0, -1]]);
        let o = sys(AlgebraKind::OSP, 2, 4);
        let po = Parabolic::build(o, &[1, 0, 0]).unwrap();
        assert_eq!(po.blocks()[0].ty, BlockType::C);
        let go = find_commuting_basis(&po).unwrap();
        assert_eq!(go.roots.iter().map(|r| r.1.clone()).collect::<Vec<_>>(), vec![vec![2, 0], vec![1, 1]]);
    }
}
