//! Named randomized check suites over the lab constructions, reported as
//! JSON-serializable summaries.

use super::algebra::LabAlgebra;
use super::highest::{construct_kac, construct_kac_1d, construct_verma, verma_composition};
use super::induced::Transported;
use super::localize::{deg_a, gamma_injective_series, quotient_injective, submodule_sample, LocalizeOptions, LocalizedModule};
use super::module::{direct_sum, WKey, WindowModule};
use super::oracles::kac_is_simple;
use super::LabError;
use crate::charformula::{
    degree_of_spec, mathieu_sup_oracle, HighestWeightCharacter, SimpleCharacter, WSimpleCharacter,
};
use crate::mult::{
    invert_provider, serganova_sl_m_1_provider, Coords, EvenRootData, InverseProvider, LinkageProvider,
    MultiplicityProvider, ProductProvider, SerganovaProvider, WOptions,
};
use crate::rational::{frac, q, Q};
use crate::rootdata::{
    AlgebraDescriptor, AlgebraKind, BlockType, BlockWeight, Parabolic, SuperRootSystem, Weight,
};
use crate::weights::{is_singular, is_typical, BoundedModuleSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

pub const SUITES: [&str; 9] = [
    "theta-integer",
    "lemma-phi",
    "lemma-m1m2",
    "series-psi",
    "commut-h0",
    "kac-typicality",
    "serganova-check",
    "w2-check",
    "mathieu-sup",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub depth: u32,
    pub seed: u64,
    pub cases: usize,
    pub skipped: usize,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Ok(None): pass; Ok(Some(reason)): skipped; Err: failure.
type CaseResult = Result<Option<String>, String>;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub depth: u32,
    pub seed: u64,
    /// Overrides the suite's default number of cases.
    pub cases: Option<usize>,
    /// Worker threads; 0 picks the available parallelism.
    pub workers: usize,
}

impl SuiteOptions {
    pub fn new(depth: u32, seed: u64) -> Self {
        SuiteOptions { depth, seed, cases: None, workers: 0 }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, LabError> {
    if opts.depth == 0 {
        return Err(LabError::InvalidInput("depth must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let d = opts.depth;
    let n = |default: usize| opts.cases.unwrap_or(default);
    let cases: Vec<(String, Box<dyn Fn() -> CaseResult + Send + Sync>)> = match name {
        "theta-integer" => sl2_cases(&mut rng, n(25), |lam| Box::new(move || theta_integer(&lam, d))),
        "lemma-phi" => (0..n(25))
            .map(|_| {
                let lam = random_sl2(&mut rng);
                let t = random_twist(&mut rng);
                let label = format!("λ = {}, t = {t}", show(&lam));
                (label, Box::new(move || phi_psi_case(&lam, &t, d)) as Box<dyn Fn() -> CaseResult + Send + Sync>)
            })
            .collect(),
        "lemma-m1m2" => sl2_cases(&mut rng, n(25), |lam| Box::new(move || saturation_case(&lam, d))),
        "series-psi" => (0..n(25))
            .map(|_| {
                let a = random_sl2(&mut rng);
                let b = random_sl2(&mut rng);
                let t = random_twist(&mut rng);
                let label = format!("λ = {} ⊕ {}, t = {t}", show(&a), show(&b));
                (label, Box::new(move || series_psi(&a, &b, &t, d)) as Box<dyn Fn() -> CaseResult + Send + Sync>)
            })
            .collect(),
        "commut-h0" => (0..n(10))
            .map(|_| {
                let lam = random_gl21_generic(&mut rng);
                let t = random_twist(&mut rng);
                let label = format!("λ = {}, t = {t}", show(&lam));
                (label, Box::new(move || commut_h0(&lam, &t, d)) as Box<dyn Fn() -> CaseResult + Send + Sync>)
            })
            .collect(),
        "kac-typicality" => (0..n(100))
            .map(|_| {
                let a = random_rational(&mut rng);
                let b = if rng.gen_bool(0.5) { -a.clone() } else { random_rational(&mut rng) };
                let lam = vec![a, b];
                (format!("λ = {}", show(&lam)), Box::new(move || kac_typicality(&lam)) as Box<dyn Fn() -> CaseResult + Send + Sync>)
            })
            .collect(),
        "serganova-check" => (0..n(10))
            .map(|_| {
                let lam = random_sl21_atypical(&mut rng);
                (format!("λ = {}", show(&lam)), Box::new(move || serganova_check(&lam, d)) as Box<dyn Fn() -> CaseResult + Send + Sync>)
            })
            .collect(),
        "w2-check" => (0..n(5))
            .map(|i| {
                // alternate a ∈ ℤ₊ and a ∉ ℤ₊
                let a = if i % 2 == 0 {
                    q(rng.gen_range(1..=3))
                } else {
                    match rng.gen_range(0..3) {
                        0 => q(rng.gen_range(-3..=0)),
                        _ => random_fraction(&mut rng),
                    }
                };
                let lam = vec![a, q(1)];
                (format!("λ = {}", show(&lam)), Box::new(move || w2_check(&lam, d)) as Box<dyn Fn() -> CaseResult + Send + Sync>)
            })
            .collect(),
        "mathieu-sup" => sl3_instances(&mut rng, n(5))
            .into_iter()
            .map(|inst| {
                let label = format!("block = {}, z = {}, shift = {}", show(&inst.block), inst.z, inst.shift);
                (label, Box::new(move || mathieu_sup(&inst, d)) as Box<dyn Fn() -> CaseResult + Send + Sync>)
            })
            .collect(),
        other => return Err(LabError::UnknownSuite(other.to_string())),
    };
    let results = run_parallel(&cases, opts.workers);
    let mut failures = Vec::new();
    let mut skipped = 0;
    for ((label, _), r) in cases.iter().zip(results) {
        match r {
            Ok(None) => {}
            Ok(Some(_)) => skipped += 1,
            Err(detail) => failures.push(CaseFailure { case: label.clone(), detail }),
        }
    }
    Ok(SuiteReport { suite: name.to_string(), depth: d, seed: opts.seed, cases: cases.len(), skipped, failures })
}

fn run_parallel(cases: &[(String, Box<dyn Fn() -> CaseResult + Send + Sync>)], workers: usize) -> Vec<CaseResult> {
    let workers = if workers == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { workers };
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<CaseResult>>> = Mutex::new(vec![None; cases.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers.min(cases.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cases.len() {
                    break;
                }
                let r = (cases[i].1)();
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect()
}

fn sl2_cases(
    rng: &mut ChaCha8Rng,
    n: usize,
    make: impl Fn(WKey) -> Box<dyn Fn() -> CaseResult + Send + Sync>,
) -> Vec<(String, Box<dyn Fn() -> CaseResult + Send + Sync>)> {
    (0..n)
        .map(|_| {
            let lam = random_sl2(rng);
            (format!("λ = {}", show(&lam)), make(lam))
        })
        .collect()
}

fn show(v: &[Q]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// random inputs

fn random_fraction(rng: &mut ChaCha8Rng) -> Q {
    let d = [2, 3, 5][rng.gen_range(0..3)];
    loop {
        let n: i64 = rng.gen_range(-12..=12);
        if n % d != 0 {
            return frac(n, d);
        }
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    if rng.gen_bool(0.5) {
        q(rng.gen_range(-4..=6))
    } else {
        random_fraction(rng)
    }
}

fn random_sl2(rng: &mut ChaCha8Rng) -> WKey {
    vec![random_rational(rng), q(0)]
}

fn random_twist(rng: &mut ChaCha8Rng) -> Q {
    let d = [1, 2, 3, 4, 5, 7][rng.gen_range(0..6)];
    frac(rng.gen_range(-6..=6), d)
}

/// gl(2|1) weight with non-integral gl(2) pairing, atypical half the time.
fn random_gl21_generic(rng: &mut ChaCha8Rng) -> WKey {
    let a = random_fraction(rng);
    let b = q(rng.gen_range(-2..=2));
    // ρ = (0, −1, 1): atypical for ε₁−δ when a + c + 1 = 0, for ε₂−δ when b + c = 0
    let c = match rng.gen_range(0..3) {
        0 => -&a - q(1),
        1 => -b.clone(),
        _ => random_fraction(rng),
    };
    vec![a, b, c]
}

/// Nonsingular gl(2|1) weight atypical for the simple odd root ε₂−δ
/// (integral, so composition series are non-trivial).
fn random_sl21_atypical(rng: &mut ChaCha8Rng) -> WKey {
    let sys = system(AlgebraKind::GL, 2, 1);
    let basis = sys.standard_basis();
    loop {
        let a = q(rng.gen_range(-3..=4));
        let b = q(rng.gen_range(-3..=3));
        let c = -b.clone();
        let lam = vec![a, b, c];
        let w = sys.from_formal(&lam);
        if !is_typical(&w, &basis).typical && !is_singular(&w, &basis) {
            return lam;
        }
    }
}

fn system(kind: AlgebraKind, m: usize, n: usize) -> Arc<SuperRootSystem> {
    Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(kind, m, n)).expect("catalog system"))
}

// ---------------------------------------------------------------------------
// sl(2) localization suites

fn sl2() -> Arc<LabAlgebra> {
    Arc::new(LabAlgebra::gl(2, 0))
}

fn sl2_verma(lam: &[Q], depth: u32) -> Result<WindowModule, String> {
    Ok(construct_verma(sl2(), lam, depth).map_err(|e| e.to_string())?.module)
}

fn sl2_localize(m: WindowModule) -> Result<LocalizedModule, String> {
    LocalizedModule::new(Arc::new(m), sl2().e(2, 1), LocalizeOptions::default()).map_err(|e| e.to_string())
}

fn theta_integer(lam: &[Q], depth: u32) -> CaseResult {
    let loc = sl2_localize(sl2_verma(lam, depth)?)?;
    let mut checked = 0;
    for x in -3..=3 {
        for u in 0..sl2().len() {
            for w in 0..loc.module().weights().len() {
                let (Some(a), Some(b)) = (loc.theta(&q(x), u, w), loc.conjugate(x, u, w)) else { continue };
                ensure(a == b, || format!("Θ_{x} differs from conjugation on element {u} at weight {w}"))?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "no checkable entries".into())?;
    Ok(None)
}

fn phi_psi_case(lam: &[Q], t: &Q, depth: u32) -> CaseResult {
    let a = sl2_verma(lam, depth)?;
    let b = sl2_verma(&[&lam[0] - q(4), lam[1].clone()], (depth / 2).max(1))?;
    let m = direct_sum(&a, &b);
    let loc = sl2_localize(m.clone())?;
    let tw = loc.psi(t);
    ensure(deg_a(&tw.module, |_| true) == deg_a(loc.module(), |_| true), || "Ψ changes deg_a".into())?;
    let mut seen = 0;
    for n in submodule_sample(&tw.module, 64) {
        if !loc.is_bijective(&n) || !tw.module.is_invariant(&n) {
            continue;
        }
        let phi = loc.phi(&tw, &n).map_err(|e| e.to_string())?;
        ensure(loc.psi_sub(&phi) == n, || format!("Ψ∘Φ differs from the identity on {:?}", n.dims()))?;
        seen += 1;
    }
    let full = tw.module.full_submodule();
    ensure(loc.phi(&tw, &full).map_err(|e| e.to_string())? == m.full_submodule(), || "Φ(Ψ M) ≠ M".into())?;
    let zero = tw.module.zero_submodule();
    ensure(loc.phi(&tw, &zero).map_err(|e| e.to_string())? == m.zero_submodule(), || "Φ(0) ≠ 0".into())?;
    ensure(seen > 0, || "no bijective submodules sampled".into())?;
    Ok(None)
}

fn saturation_case(lam: &[Q], depth: u32) -> CaseResult {
    let m = sl2_verma(lam, depth)?;
    let loc = sl2_localize(m.clone())?;
    let f = sl2().e(2, 1);
    let lattice = submodule_sample(&m, 32);
    for m1 in &lattice {
        for m2 in &lattice {
            if !m2.contains(m1) {
                continue;
            }
            let inj = quotient_injective(&m, f, m1, m2);
            let sat = m2.intersect(&loc.saturation(m1));
            ensure(inj == (&sat == m1), || format!("criterion fails for M₁ {:?} ⊂ M₂ {:?}", m1.dims(), m2.dims()))?;
        }
    }
    Ok(None)
}

/// Composition length of the sl(2) Verma M(λ) seen inside a depth window.
fn sl2_length(lam: &[Q], depth: u32) -> usize {
    let p = &lam[0] - &lam[1];
    if p.is_integer() && p >= q(0) && &p + q(1) <= q(depth as i64) {
        2
    } else {
        1
    }
}

fn series_psi(a: &[Q], b: &[Q], t: &Q, depth: u32) -> CaseResult {
    let m = direct_sum(&sl2_verma(a, depth)?, &sl2_verma(b, depth)?);
    let loc = sl2_localize(m.clone())?;
    let top = std::cmp::max(&a[0] - &a[1], &b[0] - &b[1]);
    let depth_of = move |w: &WKey| &top - (&w[0] - &w[1]);
    let raising = vec![sl2().e(1, 2)];
    let s = gamma_injective_series(&loc, &raising, &depth_of).map_err(|e| e.to_string())?;
    let expected = sl2_length(a, depth) + sl2_length(b, depth);
    ensure(s.len() == expected, || format!("series has length {} instead of {expected}", s.len()))?;
    let tops = s.tops();
    ensure(tops.last().copied() == Some(&m.full_submodule()), || "series does not end at M".into())?;
    let f = sl2().e(2, 1);
    let zero = m.zero_submodule();
    let mut below = &zero;
    for (j, top) in tops.iter().enumerate() {
        ensure(quotient_injective(&m, f, below, top), || format!("group quotient {j} is not f-injective"))?;
        below = top;
    }
    for (j, g) in s.groups.iter().enumerate() {
        let lt = loc.localize_sub(tops[j]);
        for x in g {
            ensure(loc.localize_sub(x) == lt, || format!("localizations differ inside group {j}"))?;
        }
        if j > 0 {
            ensure(loc.localize_sub(tops[j - 1]) != lt, || format!("groups {} and {j} localize alike", j - 1))?;
        }
    }
    // Ψ^t of the group tops is a filtration of Ψ^t M with non-zero quotients
    let tw = loc.psi(t);
    let mut prev = 0;
    for (j, top) in tops.iter().enumerate() {
        let p = loc.psi_sub(top);
        ensure(tw.module.is_invariant(&p), || format!("Ψ of group top {j} is not a submodule"))?;
        ensure(p.total_dim() > prev, || format!("Ψ of group quotient {j} vanishes"))?;
        prev = p.total_dim();
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// gl(2|1): u-invariants commute with twisted localization

fn commut_h0(lam: &[Q], t: &Q, depth: u32) -> CaseResult {
    let small = sl2();
    let big = Arc::new(LabAlgebra::gl(2, 1));
    let hw = construct_verma(small.clone(), &lam[..2], depth).map_err(|e| e.to_string())?;
    let top = Some((hw.height.clone(), hw.top_height.clone()));
    let r = hw.module;
    let mut elem_map = HashMap::new();
    for (i, j) in [(1, 2), (2, 1)] {
        elem_map.insert(big.e(i, j), small.e(i, j));
    }
    let tr = Transported { module: r, elem_map, coords: vec![0, 1], offset: vec![q(0), q(0), lam[2].clone()], top };
    let k = construct_kac(big.clone(), &tr, lam).map_err(|e| e.to_string())?;
    let l = k.module.quotient(&k.radical());
    let loc = match LocalizedModule::new(Arc::new(l), big.e(2, 1), LocalizeOptions::default()) {
        Ok(loc) => loc,
        Err(LabError::NotInjective(why)) => return Ok(Some(why)),
        Err(e) => return Err(e.to_string()),
    };
    let tw = loc.psi(t);
    ensure(deg_a(&tw.module, |_| true) == deg_a(loc.module(), |_| true), || "Ψ changes deg_a".into())?;
    let u = [big.e(1, 3), big.e(2, 3)];
    // u raises the level; targets above the top level are zero
    let top_level = &lam[0] + &lam[1];
    let checkable = |m: &WindowModule, w: usize| {
        u.iter().all(|&x| match m.action(x, w) {
            Some(a) => a.exact,
            None => {
                let t: Vec<Q> = m.weight(w).iter().zip(big.weight_q(x)).map(|(a, b)| a + b).collect();
                &t[0] + &t[1] > top_level
            }
        })
    };
    let h_loc = loc.module().invariants(&u);
    let h_tw = tw.module.invariants(&u);
    let mut checked = 0;
    for w in 0..tw.module.weights().len() {
        if !checkable(loc.module(), w) || !checkable(&tw.module, w) {
            continue;
        }
        let (a, b) = (h_loc.spaces[w].dim(), h_tw.spaces[w].dim());
        ensure(a == b, || format!("H⁰ dims {a} vs {b} at {}", show(loc.module().weight(w))))?;
        let wt = tw.module.weight(w);
        let expect = if &wt[0] + &wt[1] == top_level { tw.module.dim_at(w) } else { 0 };
        ensure(b == expect, || format!("H⁰ has dim {b} instead of {expect} at {}", show(wt)))?;
        checked += 1;
    }
    ensure(checked > 0, || "no checkable weights".into())?;
    ensure(tw.module.bracket_residual(|w| checkable(&tw.module, w)).map_err(|e| e.to_string())? == 0, || {
        "twisted module violates the bracket relations".into()
    })?;
    Ok(None)
}

// ---------------------------------------------------------------------------
// typicality, Serganova rule, W(2), sl(3)

/// Character engine on gl(1|1) with p the Borel.
pub fn gl11_character(lam: &[Q]) -> Result<SimpleCharacter, String> {
    let sys = system(AlgebraKind::GL, 1, 1);
    let par = Arc::new(Parabolic::build(sys.clone(), &[1, 0]).map_err(|e| e.to_string())?);
    let lambda = sys.from_formal(lam);
    let spec = BoundedModuleSpec::from_lambda(par.clone(), &lambda, lambda.clone()).map_err(|e| e.to_string())?;
    let b: Arc<dyn InverseProvider> =
        Arc::new(invert_provider(SerganovaProvider::new(sys.standard_basis()).map_err(|e| e.to_string())?));
    let a = Arc::new(ProductProvider::builtin(par));
    SimpleCharacter::new(spec, b, a).map_err(|e| e.to_string())
}

fn kac_typicality(lam: &[Q]) -> CaseResult {
    let sys = system(AlgebraKind::GL, 1, 1);
    let w = sys.from_formal(lam);
    let typical = is_typical(&w, &sys.standard_basis()).typical;
    let alg = Arc::new(LabAlgebra::gl(1, 1));
    let simple = kac_is_simple(&alg, lam).map_err(|e| e.to_string())?;
    ensure(typical == simple, || format!("is_typical = {typical}, lab simplicity = {simple}"))?;
    let lab = construct_kac_1d(alg, lam).map_err(|e| e.to_string())?.simple_character();
    let ch = gl11_character(lam)?;
    let d = ch.degree() as usize;
    let alpha = sys.from_formal(&[q(1), q(-1)]);
    let top = ch.lambda().clone();
    for (k, eta) in [top.clone(), &top - &alpha].into_iter().enumerate() {
        let got = ch.simple_multiplicity(&eta).map_err(|e| e.to_string())?.multiplicity as usize;
        let want = lab.get(eta.coords()).copied().unwrap_or(0);
        ensure(got == want, || format!("engine {got} vs lab {want} at {eta}"))?;
        let pattern = if typical || k == 0 { d } else { 0 };
        ensure(got == pattern, || format!("multiplicity {got} at {eta}, expected {pattern}"))?;
    }
    Ok(None)
}

fn serganova_check(lam: &[Q], depth: u32) -> CaseResult {
    let sys = system(AlgebraKind::GL, 2, 1);
    let p = serganova_sl_m_1_provider(sys.standard_basis()).map_err(|e| e.to_string())?;
    let g = Arc::new(LabAlgebra::gl(2, 1));
    let lab: BTreeMap<Coords, i64> =
        verma_composition(&g, lam, depth).map_err(|e| e.to_string())?.into_iter().map(|(w, m)| (w, m as i64)).collect();
    let rule: BTreeMap<Coords, i64> = p.support(lam).map_err(|e| e.to_string())?.into_iter().collect();
    ensure(rule == lab, || format!("rule {rule:?} vs lab {lab:?}"))?;
    Ok(None)
}

fn w2_check(lam: &[Q], depth: u32) -> CaseResult {
    let sys = system(AlgebraKind::W, 0, 2);
    let ch = WSimpleCharacter::new(sys.from_formal(lam), sys.standard_basis(), depth as i64, &WOptions::default())
        .map_err(|e| e.to_string())?;
    let lab = construct_verma(Arc::new(LabAlgebra::w(2)), lam, depth).map_err(|e| e.to_string())?;
    let simple = lab.simple_character();
    let mut checked = 0;
    for key in lab.character().keys() {
        if lab.depth_of(key) >= q(depth as i64) {
            continue;
        }
        let want = simple.get(key).copied().unwrap_or(0) as u64;
        let got = ch.multiplicity(&sys.from_formal(key)).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("formula {got} vs lab {want} at {}", show(key)))?;
        checked += 1;
    }
    ensure(checked > 0, || "no weights checked".into())?;
    Ok(None)
}

/// A bounded sl(3) module with a ≅ gl(2) on the first two coordinates.
#[derive(Debug, Clone)]
pub struct Sl3Instance {
    pub block: Vec<Q>,
    pub z: Q,
    pub shift: Q,
}

impl Sl3Instance {
    /// (spec, highest weight λ).
    pub fn spec(&self) -> Result<(BoundedModuleSpec, Weight), String> {
        let sys = system(AlgebraKind::GL, 3, 0);
        let par = Arc::new(Parabolic::build(sys.clone(), &[0, 0, -1]).map_err(|e| e.to_string())?);
        let blocks = vec![BlockWeight::new(BlockType::A, self.block.clone())];
        let lz = sys.from_formal(&[self.z.clone(), self.z.clone(), q(0)]);
        let lambda = par.assemble(&blocks, &lz);
        let sigma = &lambda + &sys.from_formal(&[self.shift.clone(), -self.shift.clone(), q(0)]);
        let spec = BoundedModuleSpec::new(par, blocks, lz, sigma).map_err(|e| e.to_string())?;
        Ok((spec, lambda))
    }
}

/// The sl(3) instances drawn by the mathieu-sup suite for a given seed.
pub fn sl3_instances_for_seed(seed: u64, n: usize) -> Vec<Sl3Instance> {
    sl3_instances(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn sl3_instances(rng: &mut ChaCha8Rng, n: usize) -> Vec<Sl3Instance> {
    (0..n).map(|_| random_sl3_instance(rng)).collect()
}

fn random_sl3_instance(rng: &mut ChaCha8Rng) -> Sl3Instance {
    loop {
        let p = [(1, 4), (1, 2), (3, 4), (1, 3), (2, 3), (3, 2)][rng.gen_range(0..6)];
        let z = [(0, 1), (2, 5), (1, 1), (-1, 3), (-1, 1)][rng.gen_range(0..5)];
        let shift = [(1, 3), (1, 2), (1, 7), (2, 3), (1, 5)][rng.gen_range(0..5)];
        let (p, z, shift) = (frac(p.0, p.1), frac(z.0, z.1), frac(shift.0, shift.1));
        let inst = Sl3Instance { block: vec![-p.clone(), p], z, shift };
        if inst.spec().is_ok() {
            return inst;
        }
    }
}

/// Simple multiplicities from the character engine and the sup oracle on
/// a side × side grid; also returns the engine's degree.
pub fn sl3_grid(inst: &Sl3Instance, side: i64) -> Result<(Vec<(Weight, u64, u64)>, u64), String> {
    let sys = system(AlgebraKind::GL, 3, 0);
    let basis = sys.standard_basis();
    let (spec, lambda) = inst.spec()?;
    let b: Arc<dyn InverseProvider> = Arc::new(invert_provider(LinkageProvider::new(EvenRootData::even_part(&basis))));
    let a = Arc::new(ProductProvider::builtin(spec.parabolic.clone()));
    let ch = SimpleCharacter::new(spec.clone(), b.clone(), a).map_err(|e| e.to_string())?;
    let hw = HighestWeightCharacter::new(lambda, b, sys.clone()).map_err(|e| e.to_string())?;
    let dim_l = |nu: &Weight| hw.multiplicity(nu);
    let mut out = Vec::new();
    let half = side / 2;
    for c1 in -half..side - half {
        for c2 in 0..side {
            let eta = &spec.sigma - &sys.from_formal(&[q(c1), q(c2 - c1), q(-c2)]);
            let lhs = ch.simple_multiplicity(&eta).map_err(|e| e.to_string())?.multiplicity;
            let rhs = mathieu_sup_oracle(&spec, &eta, &dim_l, 2 * side + 6).map_err(|e| e.to_string())?;
            out.push((eta, lhs, rhs));
        }
    }
    Ok((out, ch.degree()))
}

fn mathieu_sup(inst: &Sl3Instance, depth: u32) -> CaseResult {
    let side = (depth as i64).min(10);
    let (grid, degree) = sl3_grid(inst, side)?;
    for (eta, lhs, rhs) in &grid {
        ensure(lhs == rhs, || format!("engine {lhs} vs sup {rhs} at {eta}"))?;
    }
    let (spec, _) = inst.spec()?;
    let (d, _) = degree_of_spec(&spec).map_err(|e| e.to_string())?;
    ensure(d == degree && d > 0, || format!("degree_of_spec {d} vs engine degree {degree}"))?;
    // the top slice of L_p(S) is S itself
    for (eta, lhs, _) in grid.iter().step_by(side as usize) {
        ensure(*lhs == d, || format!("top-slice multiplicity {lhs} at {eta}, degree {d}"))?;
    }
    let lab = lab_block_degree(inst, depth.max(4))?;
    ensure(lab as u64 == d, || format!("lab deg_a {lab} vs degree {d}"))?;
    Ok(None)
}

/// deg_a of S = Ψ^{σ−λ} L_{B_a}(λ^a), built in the lab from the gl(2) Verma.
pub fn lab_block_degree(inst: &Sl3Instance, depth: u32) -> Result<usize, String> {
    let (_, lambda) = inst.spec()?;
    let hw = construct_verma(sl2(), &lambda.coords()[..2], depth).map_err(|e| e.to_string())?;
    let l = hw.module.quotient(&hw.radical());
    let loc = LocalizedModule::new(Arc::new(l), sl2().e(2, 1), LocalizeOptions::default()).map_err(|e| e.to_string())?;
    // σ − λ = shift·(ε₁ − ε₂) = −shift·α for α = ε₂ − ε₁
    let tw = loc.psi(&-inst.shift.clone());
    Ok(deg_a(&tw.module, |_| true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("nope", &SuiteOptions::new(4, 0)), Err(LabError::UnknownSuite(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let mut o = SuiteOptions::new(6, 7);
        o.cases = Some(4);
        let a = run_suite("theta-integer", &o).unwrap();
        o.workers = 1;
        let b = run_suite("theta-integer", &o).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cases, 4);
        assert!(a.passed(), "{:?}", a.failures);
    }
}
