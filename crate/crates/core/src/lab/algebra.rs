//! Explicit structure constants for the lab catalog.
//!
//! Every algebra is given by a homogeneous basis of root vectors and Cartan
//! elements. Weights are ambient coordinate vectors (ε block then δ block);
//! the Cartan element attached to coordinate k acts on a weight vector of
//! weight η by η_k.

use crate::rational::{q, Q};
use crate::rootdata::Parity;
use num_traits::Zero;
use std::fmt;

/// A sparse element Σ c_i x_i of the algebra.
pub type Elem = Vec<(usize, Q)>;

#[derive(Debug, Clone)]
pub struct BasisElem {
    pub name: String,
    pub weight: Vec<i64>,
    pub parity: Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabKind {
    /// gl(m|n) by matrix units; sl and gl modules share this realization.
    GL { m: usize, n: usize },
    /// W(n) as superderivations of the Grassmann algebra on n generators.
    W { n: usize },
}

#[derive(Debug, Clone)]
pub struct LabAlgebra {
    kind: LabKind,
    dim: usize,
    basis: Vec<BasisElem>,
    table: Vec<Vec<Elem>>,
    cartan: Vec<usize>,
}

impl fmt::Display for LabAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LabKind::GL { m, n } => write!(f, "gl({m}|{n})"),
            LabKind::W { n } => write!(f, "W({n})"),
        }
    }
}

fn grassmann_mul(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    // sign of sorting ξ_A ξ_B: count pairs (i ∈ A, j ∈ B) with i > j
    let mut inv = 0u32;
    for i in 0..32 {
        if a >> i & 1 == 1 {
            inv += (b & ((1u32 << i) - 1)).count_ones();
        }
    }
    Some(if inv % 2 == 0 { 1 } else { -1 })
}

fn grassmann_deriv(j: usize, s: u32) -> Option<(u32, i64)> {
    if s >> j & 1 == 0 {
        return None;
    }
    let before = (s & ((1u32 << j) - 1)).count_ones();
    Some((s & !(1 << j), if before % 2 == 0 { 1 } else { -1 }))
}

impl LabAlgebra {
    pub fn gl(m: usize, n: usize) -> Self {
        let d = m + n;
        let par = |i: usize| (i >= m) as usize;
        let idx = |i: usize, j: usize| i * d + j;
        let mut basis = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut w = vec![0i64; d];
                w[i] += 1;
                w[j] -= 1;
                basis.push(BasisElem {
                    name: format!("E{}{}", i + 1, j + 1),
                    weight: w,
                    parity: Parity::from_bit(par(i) ^ par(j)),
                });
            }
        }
        let mut table = vec![vec![Vec::new(); d * d]; d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let p1 = par(i) ^ par(j);
                        let p2 = par(k) ^ par(l);
                        let mut e: Elem = Vec::new();
                        if j == k {
                            e.push((idx(i, l), q(1)));
                        }
                        if l == i {
                            e.push((idx(k, j), q(if p1 & p2 == 1 { 1 } else { -1 })));
                        }
                        table[idx(i, j)][idx(k, l)] = normalize(e);
                    }
                }
            }
        }
        let cartan = (0..d).map(|k| idx(k, k)).collect();
        LabAlgebra { kind: LabKind::GL { m, n }, dim: d, basis, table, cartan }
    }

    pub fn w(n: usize) -> Self {
        assert!((1..=4).contains(&n), "lab W(n) supports 1 ≤ n ≤ 4");
        let mut basis = Vec::new();
        let mut keys = Vec::new();
        for mask in 0u32..(1 << n) {
            for j in 0..n {
                let mut w = vec![0i64; n];
                for (i, wi) in w.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        *wi += 1;
                    }
                }
                w[j] -= 1;
                let name = if mask == 0 {
                    format!("d{}", j + 1)
                } else {
                    let s: String = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| format!("x{}", i + 1)).collect();
                    format!("{s}d{}", j + 1)
                };
                basis.push(BasisElem { name, weight: w, parity: Parity::from_bit((mask.count_ones() as usize + 1) % 2) });
                keys.push((mask, j));
            }
        }
        let find = |mask: u32, j: usize| keys.iter().position(|&k| k == (mask, j)).unwrap();
        let len = basis.len();
        let mut table = vec![vec![Vec::new(); len]; len];
        for a in 0..len {
            for b in 0..len {
                let (f, i) = keys[a];
                let (g, j) = keys[b];
                let pa = (f.count_ones() as usize + 1) % 2;
                let pb = (g.count_ones() as usize + 1) % 2;
                let mut e: Elem = Vec::new();
                // f ∂_i(g) ∂_j
                if let Some((g2, s1)) = grassmann_deriv(i, g) {
                    if let Some(s2) = grassmann_mul(f, g2) {
                        e.push((find(f | g2, j), q(s1 * s2)));
                    }
                }
                // −(−1)^{|a||b|} g ∂_j(f) ∂_i
                if let Some((f2, s1)) = grassmann_deriv(j, f) {
                    if let Some(s2) = grassmann_mul(g, f2) {
                        let sign = if pa & pb == 1 { 1 } else { -1 };
                        e.push((find(g | f2, i), q(sign * s1 * s2)));
                    }
                }
                table[a][b] = normalize(e);
            }
        }
        let cartan = (0..n).map(|k| find(1 << k, k)).collect();
        LabAlgebra { kind: LabKind::W { n }, dim: n, basis, table, cartan }
    }

    pub fn kind(&self) -> LabKind {
        self.kind
    }

    /// Number of weight coordinates.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn elem(&self, i: usize) -> &BasisElem {
        &self.basis[i]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Index of the gl matrix unit E_{ij} (1-based indices).
    pub fn e(&self, i: usize, j: usize) -> usize {
        match self.kind {
            LabKind::GL { .. } => (i - 1) * self.dim + (j - 1),
            LabKind::W { .. } => panic!("matrix units are only defined for gl(m|n)"),
        }
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn is_cartan(&self, i: usize) -> bool {
        self.cartan.contains(&i)
    }

    /// Coordinate index of a Cartan basis element.
    pub fn cartan_coord(&self, i: usize) -> Option<usize> {
        self.cartan.iter().position(|&c| c == i)
    }

    pub fn bracket(&self, a: usize, b: usize) -> &Elem {
        &self.table[a][b]
    }

    pub fn bracket_elems(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = Vec::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (c, cc) in &self.table[*a][*b] {
                    out.push((*c, ca * cb * cc));
                }
            }
        }
        normalize(out)
    }

    pub fn parity_sign(&self, a: usize, b: usize) -> i64 {
        if self.basis[a].parity.bit() & self.basis[b].parity.bit() == 1 {
            -1
        } else {
            1
        }
    }

    pub fn weight_q(&self, i: usize) -> Vec<Q> {
        self.basis[i].weight.iter().map(|&x| q(x)).collect()
    }

    /// Value of a linear functional on the weight of a basis element.
    pub fn level(&self, i: usize, functional: &[Q]) -> Q {
        self.basis[i].weight.iter().zip(functional).map(|(&w, l)| q(w) * l).sum()
    }

    /// Largest k with ad(x)^k(y) ≠ 0, both basis elements.
    pub fn ad_nilpotence(&self, x: usize, y: &Elem) -> usize {
        let mut cur = y.clone();
        let mut k = 0;
        loop {
            let next = self.bracket_elems(&vec![(x, q(1))], &cur);
            if next.is_empty() {
                return k;
            }
            k += 1;
            cur = next;
            assert!(k < 64, "ad-nilpotence bound exceeded");
        }
    }

    /// Super-Jacobi residual over all basis triples; zero means the table is consistent.
    pub fn jacobi_violations(&self) -> usize {
        let n = self.len();
        let mut bad = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // [a,[b,c]] = [[a,b],c] + (−1)^{|a||b|} [b,[a,c]]
                    let ea = vec![(a, q(1))];
                    let eb = vec![(b, q(1))];
                    let ec = vec![(c, q(1))];
                    let lhs = self.bracket_elems(&ea, &self.bracket_elems(&eb, &ec));
                    let mut rhs = self.bracket_elems(&self.bracket_elems(&ea, &eb), &ec);
                    let s = q(self.parity_sign(a, b));
                    for (i, x) in self.bracket_elems(&eb, &self.bracket_elems(&ea, &ec)) {
                        rhs.push((i, x * &s));
                    }
                    if normalize(lhs) != normalize(rhs) {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }
}

/// Merge repeated indices and drop zeros; sorted by index.
pub fn normalize(mut e: Elem) -> Elem {
    e.sort_by_key(|(i, _)| *i);
    let mut out: Elem = Vec::with_capacity(e.len());
    for (i, c) in e {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}
