//! Verma modules, generalized Kac modules and their simple quotients.

use super::algebra::{LabAlgebra, LabKind};
use super::induced::{build_induced, standard_functional, InducedSpec, InducingModule, OneDim};
use super::module::{Submodule, WKey, WindowModule};
use super::LabError;
use crate::rational::{q, Q};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// An induced module M_p(S) together with the data needed to read off its
/// distinguished quotient L_p(S).
#[derive(Debug, Clone)]
pub struct HighestWeightModule {
    pub module: WindowModule,
    pub level: Vec<Q>,
    pub height: Vec<Q>,
    pub depth: u32,
    /// Level of the S-slice.
    pub top_level: Q,
    /// Height of the S-slice reference weight.
    pub top_height: Q,
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Height functional of the standard Borel: 1 on every simple root.
pub fn verma_height(alg: &LabAlgebra) -> Vec<Q> {
    let d = alg.dim();
    match alg.kind() {
        LabKind::GL { .. } => standard_functional(alg),
        LabKind::W { n } => (0..n).map(|i| q((n - i) as i64)).collect::<Vec<_>>().into_iter().take(d).collect(),
    }
}

/// Level functional of the Z-grading g^{-1} ⊕ g^0 ⊕ g^1 (W(n): total degree).
pub fn kac_level(alg: &LabAlgebra) -> Vec<Q> {
    match alg.kind() {
        LabKind::GL { m, n } => (0..m + n).map(|i| q((i < m) as i64)).collect(),
        LabKind::W { n } => vec![q(1); n],
    }
}

impl HighestWeightModule {
    pub fn level_of(&self, w: &[Q]) -> Q {
        dot(w, &self.level)
    }

    pub fn depth_of(&self, w: &[Q]) -> Q {
        &self.top_height - dot(w, &self.height)
    }

    /// Basis elements of positive level: they generate u⁺.
    pub fn raising(&self) -> Vec<usize> {
        let alg = self.module.algebra();
        (0..alg.len()).filter(|&i| alg.level(i, &self.level).is_positive()).collect()
    }

    /// Z_p(S): the largest submodule meeting the S-slice trivially.
    pub fn radical(&self) -> Submodule {
        let top = self.top_level.clone();
        let lv = self.level.clone();
        self.module.radical(&self.raising(), |w| dot(w, &lv) == top, |w| dot(w, &lv))
    }

    /// Weight multiplicities of L_p(S) = M_p(S)/Z_p(S).
    pub fn simple_character(&self) -> BTreeMap<WKey, usize> {
        let z = self.radical();
        self.module
            .weights()
            .iter()
            .zip(self.module.quotient_dims(&z))
            .filter(|(_, d)| *d > 0)
            .map(|(w, d)| (w.clone(), d))
            .collect()
    }

    pub fn character(&self) -> BTreeMap<WKey, usize> {
        self.module.weights().iter().zip(self.module.dims()).filter(|(_, &d)| d > 0).map(|(w, &d)| (w.clone(), d)).collect()
    }

    /// Weights whose construction is complete (depth within the bound and
    /// all raising actions exact).
    pub fn is_interior(&self, w: usize) -> bool {
        let d = self.depth_of(self.module.weight(w));
        d <= q(self.depth as i64)
    }
}

pub fn construct_verma(alg: Arc<LabAlgebra>, lambda: &[Q], depth: u32) -> Result<HighestWeightModule, LabError> {
    if depth == 0 {
        return Err(LabError::InvalidInput("depth must be at least 1".into()));
    }
    if lambda.len() != alg.dim() {
        return Err(LabError::InvalidInput(format!("weight has {} coordinates, algebra needs {}", lambda.len(), alg.dim())));
    }
    let level = standard_functional(&alg);
    let height = verma_height(&alg);
    let s = OneDim(lambda.to_vec());
    let module = build_induced(&InducedSpec { alg: alg.clone(), level: level.clone(), height: height.clone(), depth, inducing: &s })?;
    Ok(HighestWeightModule {
        top_level: dot(lambda, &level),
        top_height: dot(lambda, &height),
        module,
        level,
        height,
        depth,
    })
}

/// Generalized Kac module K(R) = M_{g⁰⊕g¹}(R); for W(n), M_{W≥0}(R).
pub fn construct_kac<S: InducingModule>(alg: Arc<LabAlgebra>, r: &S, reference: &[Q]) -> Result<HighestWeightModule, LabError> {
    let level = kac_level(&alg);
    let depth = match alg.kind() {
        LabKind::GL { m, n } => (m * n) as u32,
        LabKind::W { n } => n as u32,
    };
    let module = build_induced(&InducedSpec { alg: alg.clone(), level: level.clone(), height: level.clone(), depth, inducing: r })?;
    Ok(HighestWeightModule {
        top_level: dot(reference, &level),
        top_height: dot(reference, &level),
        module,
        level,
        height: kac_level(&alg),
        depth,
    })
}

/// Kac module on a one-dimensional g⁰-module of weight λ.
pub fn construct_kac_1d(alg: Arc<LabAlgebra>, lambda: &[Q]) -> Result<HighestWeightModule, LabError> {
    construct_kac(alg, &OneDim(lambda.to_vec()), lambda)
}

/// Composition multiplicities of M_B(λ) for factors whose highest weight
/// lies within `depth`, by peeling simple characters off from the top.
pub fn verma_composition(alg: &Arc<LabAlgebra>, lambda: &[Q], depth: u32) -> Result<Vec<(WKey, usize)>, LabError> {
    let top = construct_verma(alg.clone(), lambda, depth)?;
    let mut remaining: BTreeMap<WKey, i64> = top.character().into_iter().map(|(w, d)| (w, d as i64)).collect();
    let mut out = Vec::new();
    loop {
        let next = remaining
            .iter()
            .filter(|(_, &c)| c != 0)
            .max_by(|a, b| dot(a.0, &top.height).cmp(&dot(b.0, &top.height)).then_with(|| b.0.cmp(a.0)))
            .map(|(w, &c)| (w.clone(), c));
        let Some((mu, c)) = next else { break };
        if c < 0 {
            return Err(LabError::InvalidInput(format!("negative residual multiplicity at {:?}", mu)));
        }
        let d = top.depth_of(&mu);
        let rem = depth as i64 - crate::rational::floor_i64(&d);
        if rem < 0 {
            break;
        }
        let ch = if rem == 0 {
            BTreeMap::from([(mu.clone(), 1usize)])
        } else {
            construct_verma(alg.clone(), &mu, rem as u32)?.simple_character()
        };
        for (w, m) in ch {
            if let Some(r) = remaining.get_mut(&w) {
                *r -= c * m as i64;
            }
        }
        out.push((mu, c as usize));
        remaining.retain(|_, c| !c.is_zero());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn sl2_verma_shape_and_radical() {
        let g = Arc::new(LabAlgebra::gl(2, 0));
        let m = construct_verma(g.clone(), &qs(&[2, 0]), 5).unwrap();
        assert_eq!(m.module.dims(), &[1, 1, 1, 1, 1, 1]);
        assert_eq!(m.module.bracket_residual(|_| true).unwrap(), 0);
        let ch = m.simple_character();
        assert_eq!(ch.len(), 3);
        let comp = verma_composition(&g, &qs(&[2, 0]), 5).unwrap();
        assert_eq!(comp, vec![(qs(&[2, 0]), 1), (qs(&[-1, 3]), 1)]);
        let generic = verma_composition(&g, &[frac(1, 3), q(0)], 6).unwrap();
        assert_eq!(generic.len(), 1);
    }

    #[test]
    fn gl11_kac_typicality() {
        let g = Arc::new(LabAlgebra::gl(1, 1));
        let typ = construct_kac_1d(g.clone(), &qs(&[2, 1])).unwrap();
        assert_eq!(typ.module.dims().iter().sum::<usize>(), 2);
        assert_eq!(typ.radical().total_dim(), 0);
        let atyp = construct_kac_1d(g, &qs(&[2, -2])).unwrap();
        assert_eq!(atyp.radical().total_dim(), 1);
    }

    #[test]
    fn gl21_trivial_kac_has_dim_4() {
        let g = Arc::new(LabAlgebra::gl(2, 1));
        let k = construct_kac_1d(g, &qs(&[0, 0, 0])).unwrap();
        assert_eq!(k.module.dims().iter().sum::<usize>(), 4);
        assert_eq!(k.module.bracket_residual(|_| true).unwrap(), 0);
    }

    #[test]
    fn w2_verma_relations() {
        let g = Arc::new(LabAlgebra::w(2));
        let m = construct_verma(g, &[frac(1, 2), q(1)], 4).unwrap();
        let interior: Vec<bool> = (0..m.module.weights().len()).map(|w| m.depth_of(m.module.weight(w)) <= q(2)).collect();
        assert_eq!(m.module.bracket_residual(|w| interior[w]).unwrap(), 0);
    }

    #[test]
    fn sl3_verma_relations() {
        let g = Arc::new(LabAlgebra::gl(3, 0));
        let m = construct_verma(g, &[frac(1, 3), q(0), q(0)], 4).unwrap();
        assert_eq!(m.module.bracket_residual(|_| true).unwrap(), 0);
    }
}
