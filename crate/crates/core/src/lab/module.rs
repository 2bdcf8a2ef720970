//! Weight modules materialized on a finite window of weights.

use super::algebra::LabAlgebra;
use super::LabError;
use crate::linalg::{Matrix, Subspace};
use crate::rational::{q, Q};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Arc;

pub type WKey = Vec<Q>;

/// Action of one basis element out of one weight space.
#[derive(Debug, Clone)]
pub struct Action {
    pub target: usize,
    pub matrix: Matrix,
    /// False when the construction dropped terms outside the window.
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct WindowModule {
    alg: Arc<LabAlgebra>,
    weights: Vec<WKey>,
    index: HashMap<WKey, usize>,
    dims: Vec<usize>,
    /// actions[w][x]; `None` when w + wt(x) lies outside the window.
    actions: Vec<Vec<Option<Action>>>,
}

/// A family of subspaces, one per window weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    pub spaces: Vec<Subspace>,
}

impl Submodule {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    pub fn contains(&self, other: &Submodule) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.contains_space(b))
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        Submodule { spaces: self.spaces.iter().zip(&other.spaces).map(|(a, b)| a.sum(b)).collect() }
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        Submodule { spaces: self.spaces.iter().zip(&other.spaces).map(|(a, b)| a.intersect(b)).collect() }
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|s| s.dim()).sum()
    }
}

impl WindowModule {
    /// Assemble from weights, dimensions and a callback giving the action
    /// matrix (and exactness) of each basis element between window weights.
    pub fn from_parts(
        alg: Arc<LabAlgebra>,
        weights: Vec<WKey>,
        dims: Vec<usize>,
        mut action: impl FnMut(usize, usize, usize) -> (Matrix, bool),
    ) -> Self {
        let index: HashMap<WKey, usize> = weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut actions = Vec::with_capacity(weights.len());
        for (wi, w) in weights.iter().enumerate() {
            let mut row = Vec::with_capacity(alg.len());
            for x in 0..alg.len() {
                let t: WKey = w.iter().zip(&alg.elem(x).weight).map(|(a, &b)| a + q(b)).collect();
                row.push(index.get(&t).map(|&ti| {
                    let (matrix, exact) = action(x, wi, ti);
                    Action { target: ti, matrix, exact }
                }));
            }
            actions.push(row);
        }
        WindowModule { alg, weights, index, dims, actions }
    }

    pub fn algebra(&self) -> &Arc<LabAlgebra> {
        &self.alg
    }

    pub fn weights(&self) -> &[WKey] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &WKey {
        &self.weights[i]
    }

    pub fn index_of(&self, w: &[Q]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn dim_at(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Multiplicity at a weight; zero outside the window.
    pub fn mult(&self, w: &[Q]) -> usize {
        self.index_of(w).map_or(0, |i| self.dims[i])
    }

    pub fn action(&self, x: usize, w: usize) -> Option<&Action> {
        self.actions[w][x].as_ref()
    }

    pub fn zero_submodule(&self) -> Submodule {
        Submodule { spaces: self.dims.iter().map(|&d| Subspace::zero(d)).collect() }
    }

    pub fn full_submodule(&self) -> Submodule {
        Submodule { spaces: self.dims.iter().map(|&d| Subspace::full(d)).collect() }
    }

    /// Smallest family containing the seeds and closed under every action
    /// that stays inside the window.
    pub fn generated(&self, seeds: &[(usize, Vec<Q>)]) -> Submodule {
        let mut sub = self.zero_submodule();
        let mut queue: Vec<(usize, Vec<Q>)> = seeds.to_vec();
        while let Some((w, v)) = queue.pop() {
            if sub.spaces[w].contains(&v) {
                continue;
            }
            sub.spaces[w] = sub.spaces[w].sum(&Subspace::span(self.dims[w], &[v.clone()]));
            for x in 0..self.alg.len() {
                if self.alg.is_cartan(x) {
                    continue;
                }
                if let Some(a) = &self.actions[w][x] {
                    let img = a.matrix.apply(&v);
                    if img.iter().any(|c| !c.is_zero()) {
                        queue.push((a.target, img));
                    }
                }
            }
        }
        sub
    }

    /// Closure of a family of subspaces under the action.
    pub fn close(&self, sub: &Submodule) -> Submodule {
        let seeds: Vec<(usize, Vec<Q>)> =
            sub.spaces.iter().enumerate().flat_map(|(w, s)| s.vectors().into_iter().map(move |v| (w, v))).collect();
        self.generated(&seeds)
    }

    pub fn is_invariant(&self, sub: &Submodule) -> bool {
        (0..self.weights.len()).all(|w| {
            (0..self.alg.len()).all(|x| match &self.actions[w][x] {
                Some(a) => sub.spaces[w].map(&a.matrix).vectors().iter().all(|v| sub.spaces[a.target].contains(v)),
                None => true,
            })
        })
    }

    /// Largest family inside the non-top weights that is stable under the
    /// listed raising elements. `key` must strictly increase along them.
    pub fn radical(&self, raising: &[usize], is_top: impl Fn(&WKey) -> bool, key: impl Fn(&WKey) -> Q) -> Submodule {
        let mut order: Vec<usize> = (0..self.weights.len()).collect();
        order.sort_by(|&a, &b| key(&self.weights[b]).cmp(&key(&self.weights[a])));
        let mut z: Vec<Option<Subspace>> = vec![None; self.weights.len()];
        for &w in &order {
            let d = self.dims[w];
            if is_top(&self.weights[w]) {
                z[w] = Some(Subspace::zero(d));
                continue;
            }
            let mut cur = Subspace::full(d);
            for &x in raising {
                if let Some(a) = &self.actions[w][x] {
                    let target = z[a.target].as_ref().expect("raising elements must increase the key");
                    cur = cur.intersect(&Subspace::preimage(&a.matrix, target));
                }
            }
            z[w] = Some(cur);
        }
        Submodule { spaces: z.into_iter().map(|s| s.unwrap()).collect() }
    }

    /// Common kernel of the listed elements, per weight space.
    pub fn invariants(&self, elems: &[usize]) -> Submodule {
        let spaces = (0..self.weights.len())
            .map(|w| {
                let mut cur = Subspace::full(self.dims[w]);
                for &x in elems {
                    if let Some(a) = &self.actions[w][x] {
                        cur = cur.intersect(&Subspace::kernel_of(&a.matrix));
                    }
                }
                cur
            })
            .collect();
        Submodule { spaces }
    }

    /// Number of (x, y, weight) triples where ρ(x)ρ(y) ∓ ρ(y)ρ(x) ≠ ρ([x,y]),
    /// checked only where every map involved is defined and exact.
    pub fn bracket_residual(&self, interior: impl Fn(usize) -> bool) -> Result<usize, LabError> {
        let n = self.alg.len();
        let mut bad = 0;
        for w in 0..self.weights.len() {
            if !interior(w) {
                continue;
            }
            for x in 0..n {
                for y in 0..n {
                    let Some(lhs) = self.compose(x, y, w) else { continue };
                    let Some(rhs0) = self.compose(y, x, w) else { continue };
                    let s = q(self.alg.parity_sign(x, y));
                    let lhs = lhs.1.sub(&rhs0.1.scale(&s));
                    let target = rhs0.0;
                    let mut rhs = Matrix::zeros(self.dims[target], self.dims[w]);
                    let mut ok = true;
                    for (z, c) in self.alg.bracket(x, y) {
                        match self.apply_elem_matrix(*z, w) {
                            Some((t, m)) if t == target => rhs = rhs.add(&m.scale(c)),
                            Some(_) => unreachable!("bracket has the wrong weight"),
                            None => ok = false,
                        }
                    }
                    if ok && lhs != rhs {
                        bad += 1;
                    }
                }
            }
        }
        Ok(bad)
    }

    /// Matrix of a basis element (Cartan elements act by the weight).
    pub fn apply_elem_matrix(&self, x: usize, w: usize) -> Option<(usize, Matrix)> {
        if let Some(k) = self.alg.cartan_coord(x) {
            return Some((w, Matrix::identity(self.dims[w]).scale(&self.weights[w][k])));
        }
        match &self.actions[w][x] {
            Some(a) if a.exact => Some((a.target, a.matrix.clone())),
            _ => None,
        }
    }

    fn compose(&self, x: usize, y: usize, w: usize) -> Option<(usize, Matrix)> {
        let (t1, my) = self.apply_elem_matrix(y, w)?;
        let (t2, mx) = self.apply_elem_matrix(x, t1)?;
        Some((t2, mx.mul(&my)))
    }

    /// Weights of the module with positive dimension.
    pub fn support(&self) -> Vec<&WKey> {
        self.weights.iter().zip(&self.dims).filter(|(_, &d)| d > 0).map(|(w, _)| w).collect()
    }

    /// Dimensions of M/N per weight.
    pub fn quotient_dims(&self, sub: &Submodule) -> Vec<usize> {
        self.dims.iter().zip(&sub.spaces).map(|(d, s)| d - s.dim()).collect()
    }
}

/// M ⊕ N on the union of the two windows.
pub fn direct_sum(a: &WindowModule, b: &WindowModule) -> WindowModule {
    let alg = a.algebra().clone();
    let mut weights: Vec<WKey> = a.weights().to_vec();
    for w in b.weights() {
        if a.index_of(w).is_none() {
            weights.push(w.clone());
        }
    }
    let dims: Vec<usize> = weights.iter().map(|w| a.mult(w) + b.mult(w)).collect();
    let ws = weights.clone();
    WindowModule::from_parts(alg, weights, dims, |x, wi, ti| {
        let (src, dst) = (&ws[wi], &ws[ti]);
        let (sa, sb) = (a.mult(src), b.mult(src));
        let (da, db) = (a.mult(dst), b.mult(dst));
        let mut m = Matrix::zeros(da + db, sa + sb);
        let mut exact = true;
        let mut place = |mm: &WindowModule, r0: usize, c0: usize| {
            let (Some(i), Some(_)) = (mm.index_of(src), mm.index_of(dst)) else { return };
            if let Some(act) = mm.action(x, i) {
                exact &= act.exact;
                for r in 0..act.matrix.rows() {
                    for c in 0..act.matrix.cols() {
                        m.set(r0 + r, c0 + c, act.matrix.get(r, c).clone());
                    }
                }
            }
        };
        place(a, 0, 0);
        place(b, da, sa);
        // a summand whose window stops short of the target contributes nothing known
        if (sa > 0 && a.index_of(dst).is_none()) || (sb > 0 && b.index_of(dst).is_none()) {
            exact = false;
        }
        (m, exact)
    })
}

impl WindowModule {
    /// M/N on the same window (weights of dimension zero are kept).
    pub fn quotient(&self, sub: &Submodule) -> WindowModule {
        // per weight: basis [N; C] of the ambient space, C a complement
        let mut lifts: Vec<Matrix> = Vec::with_capacity(self.weights.len());
        let mut coords: Vec<Matrix> = Vec::with_capacity(self.weights.len());
        for (w, s) in sub.spaces.iter().enumerate() {
            let d = self.dims[w];
            let mut rows = s.vectors();
            let mut comp = Vec::new();
            for i in 0..d {
                let mut e = vec![Q::zero(); d];
                e[i] = q(1);
                let trial = Subspace::span(d, &[rows.clone(), vec![e.clone()]].concat());
                if trial.dim() > rows.len() {
                    rows.push(e.clone());
                    comp.push(e);
                }
            }
            let full = Matrix::from_rows(rows, d);
            // coordinates of v in the basis: solve fullᵀ c = v; keep the C part
            let inv = full.transpose().inverse().unwrap_or_else(|| Matrix::identity(0));
            let k = s.dim();
            let proj = Matrix::from_rows((k..d).map(|i| inv.row(i)).collect(), d);
            lifts.push(Matrix::from_cols(&comp, d));
            coords.push(proj);
        }
        let dims: Vec<usize> = self.dims.iter().zip(&sub.spaces).map(|(d, s)| d - s.dim()).collect();
        WindowModule::from_parts(self.alg.clone(), self.weights.clone(), dims, |x, wi, ti| match &self.actions[wi][x] {
            Some(a) => (coords[ti].mul(&a.matrix).mul(&lifts[wi]), a.exact),
            None => unreachable!("quotient keeps the window"),
        })
    }
}
