//! Freudenthal's recursion for finite-dimensional simple modules of the
//! classical reductive algebras, in ε-coordinates.

use super::module::WKey;
use super::LabError;
use crate::linalg::Matrix;
use crate::rational::{is_nonneg_int, q, Q};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalType {
    /// gl(n)
    A,
    /// so(2n+1)
    B,
    /// sp(2n)
    C,
    /// so(2n)
    D,
}

#[derive(Debug, Clone)]
pub struct ClassicalRootSystem {
    ty: ClassicalType,
    n: usize,
    positive: Vec<WKey>,
    simple: Vec<WKey>,
    rho: WKey,
    /// simple roots as columns, with coordinate rows `pivots` and the
    /// inverse of that square block
    cone: (Matrix, Vec<usize>, Matrix),
}

fn unit(n: usize, i: usize, c: i64) -> WKey {
    let mut v = vec![Q::zero(); n];
    v[i] = q(c);
    v
}

fn plus(a: &[Q], b: &[Q]) -> WKey {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn minus(a: &[Q], b: &[Q]) -> WKey {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ClassicalRootSystem {
    pub fn new(ty: ClassicalType, n: usize) -> Result<Self, LabError> {
        if n == 0 || (ty == ClassicalType::D && n < 2) {
            return Err(LabError::InvalidInput(format!("rank {n} is too small for {ty:?}")));
        }
        let mut positive = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                positive.push(minus(&unit(n, i, 1), &unit(n, j, 1)));
                if ty != ClassicalType::A {
                    positive.push(plus(&unit(n, i, 1), &unit(n, j, 1)));
                }
            }
            match ty {
                ClassicalType::B => positive.push(unit(n, i, 1)),
                ClassicalType::C => positive.push(unit(n, i, 2)),
                _ => {}
            }
        }
        let mut simple: Vec<WKey> = (0..n.saturating_sub(1)).map(|i| minus(&unit(n, i, 1), &unit(n, i + 1, 1))).collect();
        match ty {
            ClassicalType::A => {}
            ClassicalType::B => simple.push(unit(n, n - 1, 1)),
            ClassicalType::C => simple.push(unit(n, n - 1, 2)),
            ClassicalType::D => simple.push(plus(&unit(n, n - 2, 1), &unit(n, n - 1, 1))),
        }
        let mut rho = vec![Q::zero(); n];
        for a in &positive {
            rho = plus(&rho, a);
        }
        let rho = rho.iter().map(|x| x / q(2)).collect();
        let m = Matrix::from_cols(&simple, n);
        let (_, pivots) = m.transpose().rref();
        let block = Matrix::from_rows(pivots.iter().map(|&r| m.row(r)).collect(), simple.len());
        let inv = if simple.is_empty() { Matrix::zeros(0, 0) } else { block.inverse().expect("simple roots are independent") };
        Ok(ClassicalRootSystem { ty, n, positive, simple, rho, cone: (m, pivots, inv) })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn positive_roots(&self) -> &[WKey] {
        &self.positive
    }

    pub fn simple_roots(&self) -> &[WKey] {
        &self.simple
    }

    pub fn coroot_pairing(&self, lambda: &[Q], alpha: &[Q]) -> Q {
        q(2) * dot(lambda, alpha) / dot(alpha, alpha)
    }

    pub fn is_dominant_integral(&self, lambda: &[Q]) -> bool {
        self.simple.iter().all(|a| is_nonneg_int(&self.coroot_pairing(lambda, a)))
    }

    /// The dominant element of the Weyl orbit.
    pub fn dominant(&self, mu: &[Q]) -> WKey {
        let mut v = mu.to_vec();
        match self.ty {
            ClassicalType::A => {}
            ClassicalType::B | ClassicalType::C => v.iter_mut().for_each(|x| *x = x.abs()),
            ClassicalType::D => {
                let neg = v.iter().filter(|x| x.is_negative()).count();
                v.iter_mut().for_each(|x| *x = x.abs());
                v.sort_by(|a, b| b.cmp(a));
                if neg % 2 == 1 {
                    let last = v.len() - 1;
                    v[last] = -v[last].clone();
                }
                return v;
            }
        }
        v.sort_by(|a, b| b.cmp(a));
        v
    }

    /// Whether γ is a non-negative integer combination of simple roots.
    pub fn in_root_cone(&self, gamma: &[Q]) -> bool {
        let (m, pivots, inv) = &self.cone;
        if pivots.is_empty() {
            return gamma.iter().all(Q::is_zero);
        }
        let sub: Vec<Q> = pivots.iter().map(|&r| gamma[r].clone()).collect();
        let c = inv.apply(&sub);
        c.iter().all(is_nonneg_int) && m.apply(&c) == gamma
    }

    /// Dominant weights ν with λ − ν in the root cone.
    fn dominant_below(&self, lambda: &[Q]) -> Vec<WKey> {
        let mut seen: HashSet<WKey> = HashSet::from([lambda.to_vec()]);
        let mut out = vec![lambda.to_vec()];
        let mut stack = vec![lambda.to_vec()];
        while let Some(v) = stack.pop() {
            for a in &self.positive {
                let w = self.dominant(&minus(&v, a));
                if !seen.contains(&w) && self.in_root_cone(&minus(lambda, &w)) {
                    seen.insert(w.clone());
                    out.push(w.clone());
                    stack.push(w);
                }
            }
        }
        out
    }

    fn orbit(&self, mu: &[Q]) -> Vec<WKey> {
        let mut out: Vec<WKey> = vec![mu.to_vec()];
        let mut i = 0;
        while i < out.len() {
            let v = out[i].clone();
            for a in &self.simple {
                let c = self.coroot_pairing(&v, a);
                let w: WKey = v.iter().zip(a).map(|(x, y)| x - &c * y).collect();
                if !out.contains(&w) {
                    out.push(w);
                }
            }
            i += 1;
        }
        out
    }
}

/// Weight multiplicities of L(λ) by Freudenthal's formula.
pub fn freudenthal_character(sys: &ClassicalRootSystem, lambda: &[Q]) -> Result<BTreeMap<WKey, u64>, LabError> {
    if !sys.is_dominant_integral(lambda) {
        return Err(LabError::InvalidInput(format!("{lambda:?} is not dominant integral")));
    }
    let mut dominant = sys.dominant_below(lambda);
    // process from the top: increasing distance from λ
    dominant.sort_by(|a, b| dot(&minus(lambda, a), &sys.rho).cmp(&dot(&minus(lambda, b), &sys.rho)));
    let lr = plus(lambda, &sys.rho);
    let norm_top = dot(&lr, &lr);
    let mut mult: HashMap<WKey, u64> = HashMap::new();
    let get = |mult: &HashMap<WKey, u64>, v: &[Q]| -> u64 { mult.get(&sys.dominant(v)).copied().unwrap_or(0) };
    for mu in &dominant {
        if mu.as_slice() == lambda {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mr = plus(mu, &sys.rho);
        let den = &norm_top - dot(&mr, &mr);
        let mut sum = Q::zero();
        for a in &sys.positive {
            let mut j = 1;
            loop {
                let up: WKey = mu.iter().zip(a).map(|(x, y)| x + q(j) * y).collect();
                if !sys.in_root_cone(&minus(lambda, &sys.dominant(&up))) {
                    break;
                }
                let m = get(&mult, &up);
                if m > 0 {
                    sum += q(m as i64) * dot(&up, a);
                }
                j += 1;
            }
        }
        if den.is_zero() {
            return Err(LabError::InvalidInput(format!("vanishing Freudenthal denominator at {mu:?}")));
        }
        let m = q(2) * sum / den;
        if !m.is_integer() || m.is_negative() {
            return Err(LabError::InvalidInput(format!("non-integral multiplicity {m} at {mu:?}")));
        }
        mult.insert(mu.clone(), crate::rational::to_i64(&m).unwrap() as u64);
    }
    let mut out = BTreeMap::new();
    for mu in &dominant {
        let m = mult[mu];
        if m == 0 {
            continue;
        }
        for w in sys.orbit(mu) {
            out.insert(w, m);
        }
    }
    Ok(out)
}

pub fn freudenthal_multiplicity(sys: &ClassicalRootSystem, lambda: &[Q], mu: &[Q]) -> Result<u64, LabError> {
    Ok(freudenthal_character(sys, lambda)?.get(mu).copied().unwrap_or(0))
}

pub fn freudenthal_dimension(sys: &ClassicalRootSystem, lambda: &[Q]) -> Result<u64, LabError> {
    Ok(freudenthal_character(sys, lambda)?.values().sum())
}
