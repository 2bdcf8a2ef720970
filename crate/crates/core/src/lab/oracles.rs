//! Brute-force oracles packaged for comparison with the closed formulas.

use super::algebra::LabAlgebra;
use super::highest::{construct_kac_1d, verma_composition};
use super::LabError;
use crate::mult::{Coords, MultError, MultiplicityProvider};
use crate::rational::Q;
use crate::rootdata::RootBasis;
use dashmap::DashMap;
use std::sync::Arc;

/// Verma composition multiplicities read off the lab, as a provider on the
/// ambient coordinates of `basis`. Supports are truncated at `depth` below ν.
pub struct LabVermaProvider {
    alg: Arc<LabAlgebra>,
    basis: RootBasis,
    depth: u32,
    memo: DashMap<Coords, Vec<(Coords, i64)>>,
}

impl LabVermaProvider {
    pub fn new(alg: Arc<LabAlgebra>, basis: RootBasis, depth: u32) -> Self {
        LabVermaProvider { alg, basis, depth, memo: DashMap::new() }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }
}

impl MultiplicityProvider for LabVermaProvider {
    fn tag(&self) -> String {
        format!("lab-verma(depth {})", self.depth)
    }

    fn height(&self, nu: &[Q], mu: &[Q]) -> Option<i64> {
        let sys = self.basis.system();
        self.basis.depth(&sys.from_formal(mu), &sys.from_formal(nu))
    }

    fn support(&self, nu: &[Q]) -> crate::mult::Result<Vec<(Coords, i64)>> {
        if let Some(v) = self.memo.get(nu) {
            return Ok(v.clone());
        }
        let comp = verma_composition(&self.alg, nu, self.depth).map_err(lab_to_mult)?;
        let v: Vec<(Coords, i64)> = comp.into_iter().map(|(w, m)| (w, m as i64)).collect();
        self.memo.insert(nu.to_vec(), v.clone());
        Ok(v)
    }
}

fn lab_to_mult(e: LabError) -> MultError {
    MultError::ProviderGap { reason: format!("lab: {e}"), needed: Vec::new() }
}

/// Typicality read off the Kac module: K(λ) is simple iff its radical is 0.
pub fn kac_is_simple(alg: &Arc<LabAlgebra>, lambda: &[Q]) -> Result<bool, LabError> {
    Ok(construct_kac_1d(alg.clone(), lambda)?.radical().total_dim() == 0)
}
