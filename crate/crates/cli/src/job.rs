//! Spec files and the providers they select.

use crate::cache::sha256_hex;
use crate::error::{CliError, Result};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use superweight::charformula::{SimpleCharacter, WSimpleCharacter};
use superweight::mult::{
    invert_provider, load_table, EvenRootData, InverseProvider, LinkageProvider, MultiplicityProvider,
    MultiplicityTable, ProductProvider, SerganovaProvider, TableInverse, TableKind, TableProvider, WOptions,
};
use superweight::rational::parse_q;
use superweight::rootdata::{AlgebraDescriptor, AlgebraKind, BlockWeight, Parabolic, SuperRootSystem, Weight};
use superweight::weights::BoundedModuleSpec;
use superweight::Q;

/// Default order-ideal depth for W(n) characters.
pub const W_DEFAULT_DEPTH: i64 = 6;

/// A rational given as a JSON integer or a string such as "-1/2".
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn value(&self) -> Result<Q> {
        match self {
            Num::Int(i) => Ok(Q::from_integer((*i).into())),
            Num::Str(s) => parse_q(s).ok_or_else(|| CliError::Spec(format!("cannot parse rational {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Tables {
    /// a- or b-table for g.
    g: Option<PathBuf>,
    /// a-table for the Levi subalgebra.
    levi: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    algebra: AlgebraDescriptor,
    parabolic_l: Option<Vec<i64>>,
    lambda_blocks: Option<Vec<Vec<Num>>>,
    lambda_z: Option<String>,
    sigma: Option<String>,
    /// Full highest weight, in place of the block data.
    lambda: Option<String>,
    depth: Option<i64>,
    #[serde(default)]
    tables: Tables,
}

pub enum Target {
    Bounded(BoundedModuleSpec),
    /// Simple highest weight module over W(n).
    W { lambda: Weight },
}

/// A fully validated job.
pub struct Job {
    pub algebra: AlgebraDescriptor,
    pub sys: Arc<SuperRootSystem>,
    pub target: Target,
    pub depth: Option<i64>,
    tables: Tables,
    base: PathBuf,
}

pub fn build_system(desc: &AlgebraDescriptor) -> Result<Arc<SuperRootSystem>> {
    SuperRootSystem::build(desc).map(Arc::new).map_err(|e| CliError::Spec(e.to_string()))
}

pub fn parse_weight(sys: &SuperRootSystem, s: &str) -> Result<Weight> {
    sys.parse_weight(s).map_err(|e| CliError::Spec(e.to_string()))
}

impl Job {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
        let file: SpecFile = serde_json::from_str(&text).map_err(|e| CliError::Spec(e.to_string()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_file(file, base)
    }

    fn from_file(f: SpecFile, base: PathBuf) -> Result<Self> {
        let sys = build_system(&f.algebra)?;
        if let Some(d) = f.depth {
            if d < 0 {
                return Err(CliError::Spec(format!("depth {d} is negative")));
            }
        }
        let target = if sys.kind() == AlgebraKind::W {
            if f.parabolic_l.is_some() || f.lambda_blocks.is_some() || f.lambda_z.is_some() || f.sigma.is_some() {
                return Err(CliError::Spec("W(n) specs take only \"lambda\"".into()));
            }
            let s = f.lambda.as_deref().ok_or_else(|| CliError::Spec("W(n) specs need \"lambda\"".into()))?;
            Target::W { lambda: parse_weight(&sys, s)? }
        } else {
            let l = f.parabolic_l.as_ref().ok_or_else(|| CliError::Spec("missing \"parabolic_l\"".into()))?;
            let par = Arc::new(Parabolic::build(sys.clone(), l).map_err(|e| CliError::Spec(e.to_string()))?);
            let sigma = f.sigma.as_deref().map(|s| parse_weight(&sys, s)).transpose()?;
            let spec = match (&f.lambda, &f.lambda_blocks, &f.lambda_z) {
                (Some(lam), None, None) => {
                    let lam = parse_weight(&sys, lam)?;
                    let sigma = sigma.unwrap_or_else(|| lam.clone());
                    BoundedModuleSpec::from_lambda(par, &lam, sigma)?
                }
                (None, Some(blocks), Some(z)) => {
                    if blocks.len() != par.blocks().len() {
                        return Err(CliError::Spec(format!(
                            "parabolic has {} blocks, spec gives {}",
                            par.blocks().len(),
                            blocks.len()
                        )));
                    }
                    let blocks: Vec<BlockWeight> = par
                        .blocks()
                        .iter()
                        .zip(blocks)
                        .map(|(b, c)| Ok(BlockWeight::new(b.ty, c.iter().map(Num::value).collect::<Result<_>>()?)))
                        .collect::<Result<_>>()?;
                    let z = parse_weight(&sys, z)?;
                    let sigma = match sigma {
                        Some(s) => s,
                        None => par.assemble(&blocks, &z),
                    };
                    BoundedModuleSpec::new(par, blocks, z, sigma)?
                }
                _ => {
                    return Err(CliError::Spec(
                        "give either \"lambda\" or both \"lambda_blocks\" and \"lambda_z\"".into(),
                    ))
                }
            };
            Target::Bounded(spec)
        };
        Ok(Job { algebra: f.algebra, sys, target, depth: f.depth, tables: f.tables, base })
    }

    pub fn lambda(&self) -> Weight {
        match &self.target {
            Target::Bounded(s) => s.lambda(),
            Target::W { lambda } => lambda.clone(),
        }
    }

    /// Canonical description of the module, for cache keys.
    pub fn describe(&self) -> Value {
        match &self.target {
            Target::Bounded(s) => json!({
                "algebra": self.algebra,
                "basis": "standard",
                "parabolic": s.parabolic.levels(),
                "lambda": s.lambda().to_string(),
                "sigma": s.sigma.to_string(),
                "depth": self.depth,
            }),
            Target::W { lambda } => json!({
                "algebra": self.algebra,
                "basis": "standard",
                "lambda": lambda.to_string(),
                "depth": self.depth,
            }),
        }
    }

    fn table_path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn load_table(&self, p: &Path, algebra: Option<&AlgebraDescriptor>) -> Result<(Arc<MultiplicityTable>, String)> {
        let path = self.table_path(p);
        let bytes = std::fs::read(&path)
            .map_err(|e| CliError::gap(format!("table {}: {e}", path.display()), vec![path.display().to_string()]))?;
        let table = load_table(&path)?;
        if let Some(a) = algebra {
            if &table.header().algebra != a {
                return Err(CliError::Spec(format!("table {} is for {}, not {a}", path.display(), table.header().algebra)));
            }
        }
        Ok((Arc::new(table), format!("table:{}", sha256_hex(&bytes))))
    }

    /// b for g and a for the Levi subalgebra, with provider fingerprints.
    pub fn providers(&self) -> Result<Providers> {
        let Target::Bounded(spec) = &self.target else {
            return Err(CliError::Spec("W(n) jobs do not use providers".into()));
        };
        let basis = self.sys.standard_basis();
        let (b, b_fp): (Arc<dyn InverseProvider>, String) = match &self.tables.g {
            Some(p) => {
                let (t, fp) = self.load_table(p, Some(&self.algebra))?;
                match t.header().kind {
                    TableKind::A => (Arc::new(invert_provider(TableProvider(t))), fp),
                    TableKind::B => (Arc::new(TableInverse(t)), fp),
                }
            }
            None => match (self.sys.kind(), self.sys.del_dim()) {
                (AlgebraKind::GL | AlgebraKind::SL, 0) => {
                    let p = LinkageProvider::new(EvenRootData::even_part(&basis));
                    let fp = builtin(&p.tag());
                    (Arc::new(invert_provider(p)), fp)
                }
                (AlgebraKind::GL | AlgebraKind::SL, 1) => {
                    let p = SerganovaProvider::new(basis.clone())?;
                    let fp = builtin(&p.tag());
                    (Arc::new(invert_provider(p)), fp)
                }
                _ => {
                    return Err(CliError::gap(
                        format!("no built-in multiplicities for {}; supply tables.g", self.algebra),
                        vec![format!("table:{}", self.algebra)],
                    ))
                }
            },
        };
        let (a, a_fp): (Arc<dyn MultiplicityProvider>, String) = match &self.tables.levi {
            Some(p) => {
                let (t, fp) = self.load_table(p, None)?;
                if t.header().kind != TableKind::A {
                    return Err(CliError::Spec("the Levi table must be of kind \"a\"".into()));
                }
                (Arc::new(TableProvider(t)), fp)
            }
            None => {
                let p = ProductProvider::builtin(spec.parabolic.clone());
                let fp = builtin(&p.tag());
                (Arc::new(p), fp)
            }
        };
        Ok(Providers { b, a, fingerprint: format!("{b_fp};{a_fp}") })
    }

    pub fn simple_character(&self) -> Result<(SimpleCharacter, String)> {
        let Target::Bounded(spec) = &self.target else { unreachable!("checked by caller") };
        let p = self.providers()?;
        let mut ch = SimpleCharacter::new(spec.clone(), p.b, p.a)?;
        if let Some(d) = self.depth {
            ch = ch.with_depth(d);
        }
        Ok((ch, p.fingerprint))
    }

    pub fn w_character(&self) -> Result<(WSimpleCharacter, String)> {
        let Target::W { lambda } = &self.target else { unreachable!("checked by caller") };
        let depth = self.depth.unwrap_or(W_DEFAULT_DEPTH);
        let ch = WSimpleCharacter::new(lambda.clone(), self.sys.standard_basis(), depth, &WOptions::default())?;
        Ok((ch, builtin("w-kac")))
    }
}

pub struct Providers {
    pub b: Arc<dyn InverseProvider>,
    pub a: Arc<dyn MultiplicityProvider>,
    pub fingerprint: String,
}

fn builtin(tag: &str) -> String {
    format!("builtin:{tag}:{}", env!("CARGO_PKG_VERSION"))
}
