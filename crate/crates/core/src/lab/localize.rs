//! Localization at one even lowering root vector f, twisted by Θ.
//!
//! M_F is realized chain by chain: the weights of M fall into strings
//! ν + ℤα (α = −wt f), and on each string every weight space of M_F is
//! identified with one reference space M^r deep enough that f acts
//! isomorphically below it. In these coordinates f and f⁻¹ are identity
//! matrices, and a basis element u acts through
//!   u f^{-k} = Σ_i C(k+i−1, i) f^{-(k+i)} ad(f)^i(u).

use super::algebra::{Elem, LabAlgebra};
use super::module::{Submodule, WKey, WindowModule};
use super::LabError;
use crate::linalg::{Matrix, Subspace};
use crate::rational::{binom, fmt_q, q, Q};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy)]
pub struct LocalizeOptions {
    /// Steps of M_F adjoined above the highest weight of M on each string.
    pub extend: usize,
}

impl Default for LocalizeOptions {
    fn default() -> Self {
        LocalizeOptions { extend: 3 }
    }
}

#[derive(Debug, Clone)]
struct Chain {
    /// Reference weight index in M.
    reference: usize,
    /// Positions (relative to the reference, in units of α) spanned by M_F.
    low: i64,
    high: i64,
}

/// M_F on a window, with the embedding of M.
#[derive(Debug, Clone)]
pub struct LocalizedModule {
    base: Arc<WindowModule>,
    module: WindowModule,
    f: usize,
    alpha: WKey,
    chains: Vec<Chain>,
    /// M_F weight index ↦ (chain, position).
    place: Vec<(usize, i64)>,
    /// M weight index ↦ (M_F weight index, matrix M^ν → M_F^ν).
    embedding: Vec<Option<(usize, Matrix)>>,
}

fn add(a: &[Q], b: &[Q]) -> WKey {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn shift(a: &[Q], alpha: &[Q], k: i64) -> WKey {
    a.iter().zip(alpha).map(|(x, y)| x + y * q(k)).collect()
}

fn fmt_w(w: &[Q]) -> String {
    w.iter().map(fmt_q).collect::<Vec<_>>().join(",")
}

/// Position of `w` above `r` along α, if `w − r ∈ ℤα`.
fn position(w: &[Q], r: &[Q], alpha: &[Q]) -> Option<i64> {
    let j = alpha.iter().position(|a| !a.is_zero())?;
    let k = (&w[j] - &r[j]) / &alpha[j];
    if !k.is_integer() {
        return None;
    }
    let k = crate::rational::to_i64(&k)?;
    (shift(r, alpha, k) == w).then_some(k)
}

/// Matrix of an algebra element on one weight space of a window module;
/// `None` if some term leaves the window or is inexact.
pub fn elem_matrix(m: &WindowModule, e: &Elem, w: usize) -> Option<(usize, Matrix)> {
    let mut out: Option<(usize, Matrix)> = None;
    for (x, c) in e {
        let (t, a) = m.apply_elem_matrix(*x, w)?;
        match &mut out {
            None => out = Some((t, a.scale(c))),
            Some((t0, acc)) => {
                debug_assert_eq!(*t0, t);
                *acc = acc.add(&a.scale(c));
            }
        }
    }
    out.or_else(|| {
        // the zero element: weight is irrelevant, report a zero map to w itself
        Some((w, Matrix::zeros(m.dim_at(w), m.dim_at(w))))
    })
}

fn ad_powers(alg: &LabAlgebra, f: usize, u: usize) -> Vec<Elem> {
    let mut out = vec![vec![(u, q(1))]];
    loop {
        let next = alg.bracket_elems(&vec![(f, q(1))], out.last().unwrap());
        if next.is_empty() {
            return out;
        }
        out.push(next);
        assert!(out.len() < 64, "ad-nilpotence bound exceeded");
    }
}

impl LocalizedModule {
    /// Errors with `NotInjective` if f kills a vector of M inside the window.
    pub fn new(base: Arc<WindowModule>, f: usize, opts: LocalizeOptions) -> Result<Self, LabError> {
        let alg = base.algebra().clone();
        if alg.elem(f).parity.is_odd() || alg.is_cartan(f) {
            return Err(LabError::InvalidInput(format!("{} is not an even root vector", alg.elem(f).name)));
        }
        let alpha: WKey = alg.weight_q(f).iter().map(|x| -x).collect();
        // injectivity of f on M
        for w in 0..base.weights().len() {
            if let Some(a) = base.action(f, w) {
                if a.exact && a.matrix.rank() < base.dim_at(w) {
                    return Err(LabError::NotInjective(format!("f kills a vector of weight {}", fmt_w(base.weight(w)))));
                }
            }
        }
        // strings of weights
        let mut strings: Vec<Vec<usize>> = Vec::new();
        'w: for w in 0..base.weights().len() {
            for s in strings.iter_mut() {
                if position(base.weight(w), base.weight(s[0]), &alpha).is_some() {
                    s.push(w);
                    continue 'w;
                }
            }
            strings.push(vec![w]);
        }
        let mut chains = Vec::new();
        for s in strings {
            let anchor = base.weight(s[0]).clone();
            let mut by_pos: Vec<(i64, usize)> =
                s.iter().map(|&w| (position(base.weight(w), &anchor, &alpha).unwrap(), w)).collect();
            by_pos.sort();
            // runs of adjacent weights of equal dimension joined by exact f;
            // window truncation only lowers dimensions, so the run of largest
            // dimension (lowest on ties) carries the stable value
            let mut best: Option<(usize, usize)> = None;
            let mut i = 0;
            while i + 1 < by_pos.len() {
                let mut j = i;
                while j + 1 < by_pos.len() {
                    let (p_lo, w_lo) = by_pos[j];
                    let (p_hi, w_hi) = by_pos[j + 1];
                    if p_hi - p_lo != 1
                        || base.dim_at(w_hi) != base.dim_at(w_lo)
                        || !base.action(f, w_hi).is_some_and(|a| a.exact)
                    {
                        break;
                    }
                    j += 1;
                }
                let d = base.dim_at(by_pos[i].1);
                if j > i && d > 0 && best.is_none_or(|(_, bj)| d > base.dim_at(by_pos[bj].1)) {
                    best = Some((i, j));
                }
                i = j + 1;
            }
            // a chain is certified if at least two weights share the stable dimension
            let Some((_, ref_i)) = best else { continue };
            let reference = by_pos[ref_i].1;
            let rp = by_pos[ref_i].0;
            chains.push(Chain { reference, low: by_pos[0].0 - rp, high: by_pos.last().unwrap().0 - rp + opts.extend as i64 });
        }
        // F-weights: positions high..low for each chain (descending, so that higher weights come first)
        let mut weights = Vec::new();
        let mut dims = Vec::new();
        let mut place = Vec::new();
        for (ci, c) in chains.iter().enumerate() {
            let r = base.weight(c.reference);
            for k in (c.low..=c.high).rev() {
                weights.push(shift(r, &alpha, k));
                dims.push(base.dim_at(c.reference));
                place.push((ci, k));
            }
        }
        let index: HashMap<WKey, usize> = weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut lm = LocalizedModule {
            base: base.clone(),
            module: WindowModule::from_parts(alg.clone(), Vec::new(), Vec::new(), |_, _, _| unreachable!()),
            f,
            alpha: alpha.clone(),
            chains,
            place: place.clone(),
            embedding: Vec::new(),
        };
        let ads: Vec<Vec<Elem>> = (0..alg.len()).map(|u| ad_powers(&alg, f, u)).collect();
        let module = WindowModule::from_parts(alg.clone(), weights.clone(), dims, |x, wi, ti| {
            let (c, k) = place[wi];
            let (c2, k2) = place[ti];
            match lm.action_from_formula(&ads[x], c, k, c2, k2) {
                Some(m) => (m, true),
                None => (Matrix::zeros(lm.ref_dim(c2), lm.ref_dim(c)), false),
            }
        });
        lm.module = module;
        // embedding of M
        let mut embedding = Vec::with_capacity(base.weights().len());
        for w in 0..base.weights().len() {
            embedding.push(lm.embed_weight(w, &index));
        }
        lm.embedding = embedding;
        Ok(lm)
    }

    fn ref_dim(&self, c: usize) -> usize {
        self.base.dim_at(self.chains[c].reference)
    }

    fn chain_of_weight(&self, w: &[Q]) -> Option<(usize, i64)> {
        self.chains
            .iter()
            .enumerate()
            .find_map(|(ci, c)| position(w, self.base.weight(c.reference), &self.alpha).map(|k| (ci, k)))
    }

    /// Express a vector of M at weight index `w` (position `s` on chain `c`)
    /// in reference coordinates: y with f^{-s} y = v.
    fn to_reference(&self, c: usize, s: i64, w: usize, v: &Matrix) -> Option<Matrix> {
        let r = self.chains[c].reference;
        if s >= 0 {
            let mut cur = v.clone();
            let mut at = w;
            for _ in 0..s {
                let a = self.base.action(self.f, at)?;
                if !a.exact {
                    return None;
                }
                cur = a.matrix.mul(&cur);
                at = a.target;
            }
            debug_assert_eq!(at, r);
            Some(cur)
        } else {
            // f^{|s|}: M^r → M^w is an isomorphism on a certified chain
            let mut fpow = Matrix::identity(self.base.dim_at(r));
            let mut at = r;
            for _ in 0..(-s) {
                let a = self.base.action(self.f, at)?;
                if !a.exact {
                    return None;
                }
                fpow = a.matrix.mul(&fpow);
                at = a.target;
            }
            debug_assert_eq!(at, w);
            let inv = fpow.inverse()?;
            Some(inv.mul(v))
        }
    }

    fn action_from_formula(&self, ads: &[Elem], c: usize, k: i64, c2: usize, k2: i64) -> Option<Matrix> {
        let r = self.chains[c].reference;
        let mut total = Matrix::zeros(self.ref_dim(c2), self.ref_dim(c));
        for (i, e) in ads.iter().enumerate() {
            let coef = binom(&q(k + i as i64 - 1), i);
            if coef.is_zero() {
                continue;
            }
            let (t, m) = elem_matrix(&self.base, e, r)?;
            if m.is_zero() {
                continue;
            }
            let r2 = self.base.weight(self.chains[c2].reference);
            let s = position(self.base.weight(t), r2, &self.alpha)?;
            debug_assert_eq!(k2, k + i as i64 + s);
            let y = self.to_reference(c2, s, t, &m)?;
            total = total.add(&y.scale(&coef));
        }
        Some(total)
    }

    fn embed_weight(&self, w: usize, index: &HashMap<WKey, usize>) -> Option<(usize, Matrix)> {
        let (c, s) = self.chain_of_weight(self.base.weight(w))?;
        let fi = *index.get(self.base.weight(w))?;
        let id = Matrix::identity(self.base.dim_at(w));
        let m = self.to_reference(c, s, w, &id)?;
        Some((fi, m))
    }

    pub fn base(&self) -> &Arc<WindowModule> {
        &self.base
    }

    pub fn module(&self) -> &WindowModule {
        &self.module
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn alpha(&self) -> &WKey {
        &self.alpha
    }

    /// Index of the weight one step up (f⁻¹ direction), if in the window.
    pub fn up(&self, w: usize) -> Option<usize> {
        let (c, k) = self.place[w];
        (k < self.chains[c].high).then(|| w - 1)
    }

    /// Index of the weight one step down (f direction), if in the window.
    pub fn down(&self, w: usize) -> Option<usize> {
        let (c, k) = self.place[w];
        (k > self.chains[c].low).then(|| w + 1)
    }

    /// Image of M^ν inside M_F^ν.
    pub fn embedding(&self, w: usize) -> Option<&(usize, Matrix)> {
        self.embedding[w].as_ref()
    }

    /// i(K) for a submodule K of M.
    pub fn embed(&self, k: &Submodule) -> Submodule {
        let mut out = self.module.zero_submodule();
        for (w, e) in self.embedding.iter().enumerate() {
            if let Some((fi, m)) = e {
                let img = k.spaces[w].map(m);
                out.spaces[*fi] = out.spaces[*fi].sum(&img);
            }
        }
        out
    }

    /// K_F: the f-saturation of i(K), constant along each chain.
    pub fn localize_sub(&self, k: &Submodule) -> Submodule {
        let img = self.embed(k);
        let mut per_chain: Vec<Subspace> = self.chains.iter().enumerate().map(|(c, _)| Subspace::zero(self.ref_dim(c))).collect();
        for (fi, s) in img.spaces.iter().enumerate() {
            let (c, _) = self.place[fi];
            per_chain[c] = per_chain[c].sum(s);
        }
        Submodule { spaces: self.place.iter().map(|(c, _)| per_chain[*c].clone()).collect() }
    }

    /// N ∩ M as a submodule of M, for N a family of subspaces of M_F.
    pub fn restrict(&self, n: &Submodule) -> Submodule {
        let mut out = self.base.zero_submodule();
        for (w, e) in self.embedding.iter().enumerate() {
            if let Some((fi, m)) = e {
                out.spaces[w] = Subspace::preimage(m, &n.spaces[*fi]);
            }
        }
        out
    }

    /// M ∩ K_F.
    pub fn saturation(&self, k: &Submodule) -> Submodule {
        self.restrict(&self.localize_sub(k))
    }

    /// Weights of M that are represented in M_F.
    pub fn covers(&self, w: usize) -> bool {
        self.embedding[w].is_some()
    }

    /// Whether a family of subspaces of M_F is stable under f and f⁻¹.
    pub fn is_bijective(&self, n: &Submodule) -> bool {
        (0..self.place.len()).all(|w| self.up(w).is_none_or(|u| n.spaces[u] == n.spaces[w]))
    }

    /// Θ_x(u) = Σ_i C(x, i) ad(f)^i(u) f^{-i} on one weight space of M_F.
    pub fn theta(&self, x: &Q, u: usize, w: usize) -> Option<(usize, Matrix)> {
        let alg = self.base.algebra();
        let mut total: Option<(usize, Matrix)> = None;
        for (i, e) in ad_powers(alg, self.f, u).iter().enumerate() {
            let mut at = w;
            for _ in 0..i {
                at = self.up(at)?;
            }
            let (t, m) = elem_matrix(&self.module, e, at)?;
            let coef = binom(x, i);
            match &mut total {
                None => total = Some((t, m.scale(&coef))),
                Some((t0, acc)) => {
                    if *t0 != t {
                        return None;
                    }
                    *acc = acc.add(&m.scale(&coef));
                }
            }
        }
        total
    }

    /// f^x u f^{-x} for integer x, composed literally in M_F.
    pub fn conjugate(&self, x: i64, u: usize, w: usize) -> Option<(usize, Matrix)> {
        let mut at = w;
        for _ in 0..x.abs() {
            at = if x > 0 { self.up(at)? } else { self.down(at)? };
        }
        let (t, m) = self.module.apply_elem_matrix(u, at)?;
        let mut back = t;
        for _ in 0..x.abs() {
            back = if x > 0 { self.down(back)? } else { self.up(back)? };
        }
        Some((back, m))
    }

    /// Ψ^μ M = f^μ M_F for μ = tα: the space of M_F with u acting by Θ_t(u);
    /// weights move by tα.
    pub fn psi(&self, t: &Q) -> TwistedModule {
        let alg = self.base.algebra().clone();
        let weights: Vec<WKey> =
            self.module.weights().iter().map(|w| add(w, &self.alpha.iter().map(|a| a * t).collect::<Vec<_>>())).collect();
        let dims = self.module.dims().to_vec();
        let module = WindowModule::from_parts(alg, weights, dims, |x, wi, ti| match self.theta(t, x, wi) {
            Some((t0, m)) if t0 == ti => (m, true),
            _ => (Matrix::zeros(self.module.dim_at(ti), self.module.dim_at(wi)), false),
        });
        TwistedModule { module, t: t.clone() }
    }

    /// Φ^{−μ}N = f^{−μ}N ∩ M for a submodule N of Ψ^μ M.
    pub fn phi(&self, twisted: &TwistedModule, n: &Submodule) -> Result<Submodule, LabError> {
        if !self.is_bijective(n) {
            return Err(LabError::NotBijective("N is not stable under f and f⁻¹".into()));
        }
        if !twisted.module.is_invariant(n) {
            return Err(LabError::InvalidInput("N is not a submodule of the twisted module".into()));
        }
        Ok(self.restrict(n))
    }

    /// Ψ^μ applied to a submodule K of M, as a submodule of Ψ^μ M.
    pub fn psi_sub(&self, k: &Submodule) -> Submodule {
        self.localize_sub(k)
    }
}

/// A twist Ψ^μ M; its weight spaces are indexed like those of M_F.
#[derive(Debug, Clone)]
pub struct TwistedModule {
    pub module: WindowModule,
    pub t: Q,
}

/// Whether M₂/M₁ is f-injective on the window (checked where f stays inside).
pub fn quotient_injective(m: &WindowModule, f: usize, m1: &Submodule, m2: &Submodule) -> bool {
    (0..m.weights().len()).all(|w| match m.action(f, w) {
        Some(a) if a.exact => Subspace::preimage(&a.matrix, &m1.spaces[a.target]).intersect(&m2.spaces[w]).dim() == m1.spaces[w].dim(),
        _ => true,
    })
}

/// sup of dim M^ν over the weights satisfying `interior`.
pub fn deg_a(m: &WindowModule, interior: impl Fn(usize) -> bool) -> usize {
    (0..m.weights().len()).filter(|&w| interior(w)).map(|w| m.dim_at(w)).max().unwrap_or(0)
}

/// Composition series 0 = S₀ ⊂ S₁ ⊂ … ⊂ Sₙ = `top` above `bottom`, built by
/// adjoining at each step the submodule generated by a deepest vector that
/// is singular modulo the previous term. Valid when every subquotient is a
/// highest weight module whose submodules are generated by singular vectors
/// (sl(2) scale).
pub fn composition_series(
    m: &WindowModule,
    raising: &[usize],
    depth_of: &dyn Fn(&WKey) -> Q,
    bottom: &Submodule,
    top: &Submodule,
) -> Vec<Submodule> {
    let mut out = Vec::new();
    let mut cur = bottom.clone();
    let mut order: Vec<usize> = (0..m.weights().len()).collect();
    order.sort_by(|&a, &b| depth_of(m.weight(b)).cmp(&depth_of(m.weight(a))));
    while cur != *top {
        let mut found = None;
        for &w in &order {
            // singular mod cur: v ∈ top^w with raising·v ∈ cur
            let mut s = top.spaces[w].clone();
            for &x in raising {
                if let Some(a) = m.action(x, w) {
                    s = s.intersect(&Subspace::preimage(&a.matrix, &cur.spaces[a.target]));
                }
            }
            if let Some(v) = s.vectors().into_iter().find(|v| !cur.spaces[w].contains(v)) {
                found = Some((w, v));
                break;
            }
        }
        let Some((w, v)) = found else { break };
        let gen = m.generated(&[(w, v)]);
        cur = cur.sum(&gen).intersect(top);
        out.push(cur.clone());
    }
    out
}

/// A composition series grouped by localization, with f-injective group
/// quotients.
#[derive(Debug, Clone)]
pub struct InjectiveSeries {
    /// groups[j] lists M^{j}_1 ⊂ … ⊂ M^{j}_{r_j}.
    pub groups: Vec<Vec<Submodule>>,
}

impl InjectiveSeries {
    pub fn tops(&self) -> Vec<&Submodule> {
        self.groups.iter().map(|g| g.last().unwrap()).collect()
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

fn group_by_localization(loc: &LocalizedModule, series: &[Submodule]) -> Vec<Vec<Submodule>> {
    let mut groups: Vec<Vec<Submodule>> = Vec::new();
    let mut last: Option<Submodule> = None;
    for s in series {
        let l = loc.localize_sub(s);
        if last.as_ref() == Some(&l) {
            groups.last_mut().unwrap().push(s.clone());
        } else {
            groups.push(vec![s.clone()]);
            last = Some(l);
        }
    }
    groups
}

/// Γ-injective composition series of M: start from any composition series,
/// group by localization, then for j = t, …, 2 replace the top of group
/// j−1 by M^j_{r_j} ∩ (M^{j−1}_{r_{j−1}})_F and refill both groups.
pub fn gamma_injective_series(
    loc: &LocalizedModule,
    raising: &[usize],
    depth_of: &dyn Fn(&WKey) -> Q,
) -> Result<InjectiveSeries, LabError> {
    let m = loc.base().as_ref();
    let full = m.full_submodule();
    let zero = m.zero_submodule();
    let mut series = composition_series(m, raising, depth_of, &zero, &full);
    if series.last() != Some(&full) {
        return Err(LabError::WindowTooSmall { undecided: vec!["composition series does not reach M".into()] });
    }
    for _round in 0..series.len() + 1 {
        let groups = group_by_localization(loc, &series);
        let mut changed = false;
        let mut tops: Vec<Submodule> = groups.iter().map(|g| g.last().unwrap().clone()).collect();
        for j in (1..tops.len()).rev() {
            let a = &tops[j - 1];
            let b = &tops[j];
            let a2 = b.intersect(&loc.saturation(a));
            if &a2 != a {
                tops[j - 1] = a2;
                changed = true;
            }
        }
        if !changed {
            return Ok(InjectiveSeries { groups });
        }
        // refill between consecutive tops
        let mut refilled = Vec::new();
        let mut below = zero.clone();
        for t in &tops {
            refilled.extend(composition_series(m, raising, depth_of, &below, t));
            below = t.clone();
        }
        series = refilled;
    }
    Err(LabError::WindowTooSmall { undecided: vec!["exchange procedure did not stabilize".into()] })
}

/// Submodules of a window generated by single basis vectors of each weight
/// space, closed under sums; a finite sample of the submodule lattice.
pub fn submodule_sample(m: &WindowModule, limit: usize) -> Vec<Submodule> {
    let mut out: Vec<Submodule> = vec![m.zero_submodule()];
    for w in 0..m.weights().len() {
        for i in 0..m.dim_at(w) {
            let mut v = vec![Q::zero(); m.dim_at(w)];
            v[i] = q(1);
            let g = m.generated(&[(w, v)]);
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    let mut i = 0;
    while i < out.len() && out.len() < limit {
        for j in 0..i {
            let s = out[i].sum(&out[j]);
            if !out.contains(&s) && out.len() < limit {
                out.push(s);
            }
        }
        i += 1;
    }
    out
}
