//! Parabolically induced modules U(g) ⊗_{U(p)} S realized on PBW monomials.
//!
//! The parabolic is cut out by a level functional: basis elements of negative
//! level span u⁻, level zero spans a (with the Cartan), positive level spans
//! u⁺ which kills S. Vectors are combinations of ordered u⁻ monomials tensored
//! with basis keys of S, and the action is computed by straightening.

use super::algebra::{LabAlgebra, LabKind};
use super::module::{WKey, WindowModule};
use super::LabError;
use crate::linalg::Matrix;
use crate::rational::{q, Q};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// The a-module S being induced from.
pub trait InducingModule {
    fn weight(&self, key: i64) -> WKey;
    /// Action of a level-zero, non-Cartan basis element; `None` when the
    /// result is not known inside the window of S.
    fn act(&self, x: usize, key: i64) -> Option<Vec<(i64, Q)>>;
    /// Keys admitted in the window.
    fn keys(&self) -> Vec<i64>;
}

/// A one-dimensional S on which every non-Cartan level-zero element acts by 0.
#[derive(Debug, Clone)]
pub struct OneDim(pub WKey);

impl InducingModule for OneDim {
    fn weight(&self, _key: i64) -> WKey {
        self.0.clone()
    }
    fn act(&self, _x: usize, _key: i64) -> Option<Vec<(i64, Q)>> {
        Some(Vec::new())
    }
    fn keys(&self) -> Vec<i64> {
        vec![0]
    }
}

const KEY_STRIDE: i64 = 1 << 20;

/// A window module of a smaller algebra, transported to level zero of a
/// bigger one.
pub struct Transported {
    pub module: WindowModule,
    /// Big basis index ↦ small basis index; unmapped elements act by zero.
    pub elem_map: HashMap<usize, usize>,
    /// Big weight = offset + scatter(small weight) along `coords`.
    pub coords: Vec<usize>,
    pub offset: WKey,
    /// (height functional, top height) of the small module: targets outside
    /// its window lying strictly above the top are zero rather than unknown.
    pub top: Option<(Vec<Q>, Q)>,
}

impl Transported {
    pub fn key(w: usize, b: usize) -> i64 {
        w as i64 * KEY_STRIDE + b as i64
    }

    fn split(key: i64) -> (usize, usize) {
        ((key / KEY_STRIDE) as usize, (key % KEY_STRIDE) as usize)
    }
}

impl InducingModule for Transported {
    fn weight(&self, key: i64) -> WKey {
        let (w, _) = Self::split(key);
        let mut out = self.offset.clone();
        for (c, x) in self.coords.iter().zip(self.module.weight(w)) {
            out[*c] += x;
        }
        out
    }

    fn act(&self, x: usize, key: i64) -> Option<Vec<(i64, Q)>> {
        let Some(&sx) = self.elem_map.get(&x) else { return Some(Vec::new()) };
        let (w, b) = Self::split(key);
        let target: WKey = self.module.weight(w).iter().zip(&self.module.algebra().elem(sx).weight).map(|(a, &c)| a + q(c)).collect();
        if self.module.index_of(&target).is_none() {
            return match &self.top {
                Some((h, top)) if &target.iter().zip(h).map(|(a, b)| a * b).sum::<Q>() > top => Some(Vec::new()),
                _ => None,
            };
        }
        let (t, m) = self.module.apply_elem_matrix(sx, w)?;
        Some((0..m.rows()).filter(|&r| !m.get(r, b).is_zero()).map(|r| (Self::key(t, r), m.get(r, b).clone())).collect())
    }

    fn keys(&self) -> Vec<i64> {
        (0..self.module.weights().len())
            .flat_map(|w| (0..self.module.dim_at(w)).map(move |b| Self::key(w, b)))
            .collect()
    }
}

type Mono = Vec<u16>;
type UVec = BTreeMap<Mono, Q>;
type MVec = BTreeMap<(Mono, i64), Q>;

struct Straightener<'a, S: InducingModule> {
    alg: &'a LabAlgebra,
    s: &'a S,
    lower: Vec<usize>,
    pos: HashMap<usize, u16>,
    level: Vec<Q>,
    mul_cache: HashMap<(u16, Mono), UVec>,
    inexact: bool,
}

fn add_into<K: Ord + Clone>(acc: &mut BTreeMap<K, Q>, k: K, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(k.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&k);
    }
}

impl<'a, S: InducingModule> Straightener<'a, S> {
    fn is_odd(&self, p: u16) -> bool {
        self.alg.elem(self.lower[p as usize]).parity.is_odd()
    }

    fn sign(&self, a: usize, b: usize) -> Q {
        q(self.alg.parity_sign(a, b))
    }

    /// y · m in U(u⁻), y a u⁻ basis element at position `p`.
    fn mul_left(&mut self, p: u16, m: &[u16]) -> UVec {
        if let Some(v) = self.mul_cache.get(&(p, m.to_vec())) {
            return v.clone();
        }
        let mut out = UVec::new();
        match m.first() {
            None => {
                out.insert(vec![p], Q::one());
            }
            Some(&p1) if p < p1 || (p == p1 && !self.is_odd(p)) => {
                let mut mm = Vec::with_capacity(m.len() + 1);
                mm.push(p);
                mm.extend_from_slice(m);
                out.insert(mm, Q::one());
            }
            Some(&p1) if p == p1 => {
                // y² = ½[y, y] for odd y
                let y = self.lower[p as usize];
                let br = self.alg.bracket(y, y).clone();
                for (z, c) in br {
                    let zp = self.pos[&z];
                    for (mm, d) in self.mul_left(zp, &m[1..]) {
                        add_into(&mut out, mm, &c * d / q(2));
                    }
                }
            }
            Some(&p1) => {
                // y y₁ r = ±y₁ (y r) + [y, y₁] r
                let y = self.lower[p as usize];
                let y1 = self.lower[p1 as usize];
                let s = self.sign(y, y1);
                let inner = self.mul_left(p, &m[1..]);
                for (mm, c) in inner {
                    for (m2, d) in self.mul_left(p1, &mm) {
                        add_into(&mut out, m2, &s * &c * d);
                    }
                }
                let br = self.alg.bracket(y, y1).clone();
                for (z, c) in br {
                    let zp = self.pos[&z];
                    for (mm, d) in self.mul_left(zp, &m[1..]) {
                        add_into(&mut out, mm, &c * d);
                    }
                }
            }
        }
        self.mul_cache.insert((p, m.to_vec()), out.clone());
        out
    }

    fn mono_weight(&self, m: &[u16], key: i64) -> WKey {
        let mut w = self.s.weight(key);
        for &p in m {
            for (a, &b) in w.iter_mut().zip(&self.alg.elem(self.lower[p as usize]).weight) {
                *a += q(b);
            }
        }
        w
    }

    /// x · (m ⊗ s).
    fn act(&mut self, x: usize, m: &[u16], key: i64) -> MVec {
        let mut out = MVec::new();
        if let Some(k) = self.alg.cartan_coord(x) {
            let c = self.mono_weight(m, key)[k].clone();
            add_into(&mut out, (m.to_vec(), key), c);
            return out;
        }
        let lvl = &self.level[x];
        match m.first() {
            None => {
                if lvl.is_negative() {
                    out.insert((vec![self.pos[&x]], key), Q::one());
                } else if lvl.is_zero() {
                    match self.s.act(x, key) {
                        Some(terms) => {
                            for (k2, c) in terms {
                                add_into(&mut out, (Vec::new(), k2), c);
                            }
                        }
                        None => self.inexact = true,
                    }
                }
            }
            Some(&p1) => {
                let y = self.lower[p1 as usize];
                let rest = &m[1..];
                let br = self.alg.bracket(x, y).clone();
                for (z, c) in br {
                    for (t, d) in self.act(z, rest, key) {
                        add_into(&mut out, t, &c * d);
                    }
                }
                let s = self.sign(x, y);
                for ((mm, k2), c) in self.act(x, rest, key) {
                    for (m2, d) in self.mul_left(p1, &mm) {
                        add_into(&mut out, (m2, k2), &s * &c * d);
                    }
                }
            }
        }
        out
    }
}

/// Description of an induced module and its truncation.
pub struct InducedSpec<'a, S: InducingModule> {
    pub alg: Arc<LabAlgebra>,
    /// Splits the basis into u⁻ (< 0), a (= 0) and u⁺ (> 0).
    pub level: Vec<Q>,
    /// Strictly negative on u⁻; monomials with −height > depth are dropped.
    pub height: Vec<Q>,
    pub depth: u32,
    pub inducing: &'a S,
}

/// Default cap on the number of PBW basis vectors.
pub const MAX_BASIS: usize = 200_000;

pub fn build_induced<S: InducingModule>(spec: &InducedSpec<'_, S>) -> Result<WindowModule, LabError> {
    let alg = &spec.alg;
    let level: Vec<Q> = (0..alg.len()).map(|i| alg.level(i, &spec.level)).collect();
    let height: Vec<Q> = (0..alg.len()).map(|i| alg.level(i, &spec.height)).collect();
    let mut lower: Vec<usize> = (0..alg.len()).filter(|&i| level[i].is_negative()).collect();
    for &y in &lower {
        if !height[y].is_negative() {
            return Err(LabError::InvalidInput(format!("height functional is not negative on {}", alg.elem(y).name)));
        }
    }
    // odd generators first keeps monomials short under straightening
    lower.sort_by_key(|&y| (!alg.elem(y).parity.is_odd(), y));
    let pos: HashMap<usize, u16> = lower.iter().enumerate().map(|(i, &y)| (y, i as u16)).collect();
    let depth = q(spec.depth as i64);

    // enumerate monomials with total depth ≤ bound
    let mut monos: Vec<(Mono, Q)> = Vec::new();
    fn rec(
        start: usize,
        cur: &mut Mono,
        d: Q,
        lower: &[usize],
        alg: &LabAlgebra,
        height: &[Q],
        bound: &Q,
        out: &mut Vec<(Mono, Q)>,
    ) {
        out.push((cur.clone(), d.clone()));
        for p in start..lower.len() {
            let nd = &d - &height[lower[p]];
            if &nd > bound {
                continue;
            }
            cur.push(p as u16);
            let next = if alg.elem(lower[p]).parity.is_odd() { p + 1 } else { p };
            rec(next, cur, nd, lower, alg, height, bound, out);
            cur.pop();
        }
    }
    rec(0, &mut Vec::new(), Q::zero(), &lower, alg, &height, &depth, &mut monos);

    let keys = spec.inducing.keys();
    if monos.len() * keys.len() > MAX_BASIS {
        return Err(LabError::DepthTooLarge { basis: monos.len() * keys.len(), cap: MAX_BASIS });
    }
    let mut st = Straightener { alg, s: spec.inducing, lower: lower.clone(), pos, level, mul_cache: HashMap::new(), inexact: false };
    let mut by_weight: BTreeMap<WKey, Vec<(Mono, i64)>> = BTreeMap::new();
    for (m, _) in &monos {
        for &k in &keys {
            by_weight.entry(st.mono_weight(m, k)).or_default().push((m.clone(), k));
        }
    }
    let weights: Vec<WKey> = by_weight.keys().cloned().collect();
    let bases: Vec<Vec<(Mono, i64)>> = by_weight.into_values().collect();
    let locate: Vec<HashMap<(Mono, i64), usize>> =
        bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let module = WindowModule::from_parts(alg.clone(), weights, dims.clone(), |x, w, t| {
        let mut m = Matrix::zeros(dims[t], dims[w]);
        let mut exact = true;
        st.inexact = false;
        for (col, (mono, key)) in bases[w].iter().enumerate() {
            for (term, c) in st.act(x, mono, *key) {
                match locate[t].get(&term) {
                    Some(&row) => m.add_at(row, col, &c),
                    None => exact = false,
                }
            }
        }
        (m, exact && !st.inexact)
    });
    Ok(module)
}

/// A functional taking the value 1 on each of the given vectors.
pub fn height_functional(simple: &[Vec<Q>], dim: usize) -> Result<Vec<Q>, LabError> {
    let a = Matrix::from_rows(simple.to_vec(), dim);
    a.solve(&vec![Q::one(); simple.len()])
        .ok_or_else(|| LabError::InvalidInput("simple roots admit no height functional".into()))
}

/// Standard positivity data for the lab catalog: the functional used to
/// split the algebra and the simple roots of the induced Borel.
pub fn standard_functional(alg: &LabAlgebra) -> Vec<Q> {
    let d = alg.dim();
    match alg.kind() {
        LabKind::GL { .. } => (0..d).map(|i| q((2 * d - i) as i64)).collect(),
        LabKind::W { .. } => (0..d).map(|i| q((3 * d - i) as i64)).collect(),
    }
}
