//! Acceptance criteria 1–8. Prints one PASS/FAIL line per criterion; all
//! comparisons are exact (tolerance 0) and each criterion has a time limit.

use std::collections::{BTreeSet, VecDeque};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};
use superweight::charformula::{degree_of_spec, weyl_dimension, ReducedAlgebra};
use superweight::lab::freudenthal::{freudenthal_dimension, ClassicalRootSystem, ClassicalType};
use superweight::lab::suites::{lab_block_degree, run_suite, sl3_instances_for_seed, SuiteOptions, SuiteReport};
use superweight::mult::*;
use superweight::rational::{frac, q, Q};
use superweight::rootdata::{AlgebraDescriptor, AlgebraKind, Parabolic, SuperRootSystem};

const SEED: u64 = 20240601;

type Result<T, E = String> = std::result::Result<T, E>;
type Check = Result<String>;

fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match r {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; exceeded the time limit")),
        Err(d) => (false, d),
    };
    println!(
        "criterion {n} [{name}]: {} ({:.2?}, limit {:?}, tolerance 0) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit
    );
    ok
}

fn system(kind: AlgebraKind, m: usize, n: usize) -> Result<Arc<SuperRootSystem>> {
    SuperRootSystem::build(&AlgebraDescriptor::new(kind, m, n)).map(Arc::new).map_err(|e| e.to_string())
}

fn suite(name: &str, depth: u32) -> Result<SuiteReport> {
    let r = run_suite(name, &SuiteOptions::new(depth, SEED)).map_err(|e| e.to_string())?;
    if r.passed() {
        Ok(r)
    } else {
        Err(format!("{name}: {} of {} cases failed, first: {:?}", r.failures.len(), r.cases, r.failures[0]))
    }
}

fn suites(names: &[&str], depth: u32) -> Check {
    let mut parts = Vec::new();
    for n in names {
        let r = suite(n, depth)?;
        parts.push(format!("{n} {}/{}", r.cases - r.skipped, r.cases));
    }
    Ok(parts.join(", "))
}

fn root_counts() -> Check {
    let mut checked = 0;
    for m in 1..=4 {
        for n in 1..=4 {
            let sys = system(AlgebraKind::GL, m, n)?;
            let odd = sys.odd_roots().len();
            if odd != 2 * m * n {
                return Err(format!("gl({m}|{n}): |Δ₁| = {odd}"));
            }
            checked += 1;
        }
    }
    for n in 1..=4usize {
        let sys = system(AlgebraKind::W, 0, n)?;
        let dim = sys.dimension();
        if dim != n << n {
            return Err(format!("W({n}): dim {dim}"));
        }
        let g0 = sys.dim_g0_double_prime() as i64;
        let want = (n as i64) * (1 << (n - 1)) - (n * n) as i64;
        if g0 != want {
            return Err(format!("W({n}): dim g₀'' = {g0}, expected {want}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} algebras"))
}

/// The finite order ideal below ν spanned by the supports of `a`.
fn ideal(a: &dyn MultiplicityProvider, nu: &[Q]) -> Result<Vec<Coords>> {
    let mut seen: BTreeSet<Coords> = BTreeSet::new();
    let mut queue = VecDeque::from([nu.to_vec()]);
    while let Some(x) = queue.pop_front() {
        if !seen.insert(x.clone()) {
            continue;
        }
        for (mu, _) in a.support(&x).map_err(|e| e.to_string())? {
            queue.push_back(mu);
        }
    }
    Ok(seen.into_iter().collect())
}

fn check_identity(label: &str, a: &dyn MultiplicityProvider, b: &dyn InverseProvider, seeds: &[Coords]) -> Result<usize> {
    let mut checked = 0;
    for nu in seeds {
        let ws = ideal(a, nu)?;
        for x in &ws {
            for y in &ws {
                let v = product_check(a, b, x, y).map_err(|e| e.to_string())?;
                if v != (x == y) as i64 {
                    return Err(format!("{label}: [a][b]({x:?}, {y:?}) = {v}"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn qs(v: &[i64]) -> Coords {
    v.iter().map(|&x| q(x)).collect()
}

/// Dominant integral weights with simple coroot pairings in 0..=bound, in
/// ε-coordinates (type A last coordinate zero).
fn dominant_box(ty: ClassicalType, n: usize, bound: i64) -> Vec<Coords> {
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    loop {
        let lam: Coords = match ty {
            ClassicalType::A => (0..n).map(|i| q(c[i..n - 1].iter().sum::<i64>())).collect(),
            _ => (0..n)
                .map(|i| {
                    let mut s: Q = c[i..n.saturating_sub(2).max(i)].iter().map(|&x| q(x)).sum();
                    if i < n - 1 {
                        s += frac(c[n - 2] + c[n - 1], 2);
                    } else {
                        s += frac(c[n - 1] - c[n - 2], 2);
                    }
                    s
                })
                .collect(),
        };
        if ty != ClassicalType::A || c[n - 1] == 0 {
            out.push(lam);
        }
        let mut i = 0;
        while i < n && c[i] == bound {
            c[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
        c[i] += 1;
    }
}

fn multiplicity_algebra() -> Check {
    let mut checked = 0;
    // sl(2)
    let seeds: Vec<Coords> = (-6..=6).map(|k| qs(&[k, 0])).chain([vec![frac(1, 2), q(0)], vec![frac(-1, 2), frac(1, 2)]]).collect();
    checked += check_identity("sl(2)", &sl2_provider(), &invert_provider(sl2_provider()), &seeds)?;
    // sl(3) blocks
    let a3 = LinkageProvider::new(EvenRootData::type_a(3));
    let b3 = invert_provider(LinkageProvider::new(EvenRootData::type_a(3)));
    let seeds3 = vec![qs(&[0, 0, 0]), qs(&[2, 1, 0]), qs(&[1, -1, 3]), vec![frac(1, 2), q(0), q(0)]];
    checked += check_identity("sl(3)", &a3, &b3, &seeds3)?;
    // products: two sl(2) blocks in gl(4)
    let sys4 = system(AlgebraKind::GL, 4, 0)?;
    let par = Arc::new(Parabolic::build(sys4, &[1, 1, 0, 0]).map_err(|e| e.to_string())?);
    let prod = ProductProvider::builtin(par.clone());
    let prod_inv = invert_provider(ProductProvider::builtin(par));
    let seeds4 = vec![qs(&[3, 1, 2, 0]), qs(&[0, 0, 1, -1]), vec![frac(1, 3), q(0), q(2), q(0)]];
    checked += check_identity("gl(2)⊕gl(2)", &prod, &prod_inv, &seeds4)?;
    // imported tables
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sys2 = system(AlgebraKind::GL, 2, 0)?;
    let header = TableHeader { algebra: AlgebraDescriptor::new(AlgebraKind::GL, 2, 0), basis: "standard".into(), kind: TableKind::A };
    let tseeds: Vec<_> = [qs(&[4, 0]), qs(&[1, 1]), qs(&[3, 0])].iter().map(|c| sys2.from_formal(c)).collect();
    let t = tabulate(&sl2_provider(), header, &tseeds, 100).map_err(|e| e.to_string())?;
    let path = dir.path().join("sl2.jsonl");
    save_table(&t, &path).map_err(|e| e.to_string())?;
    let back = Arc::new(load_table(&path).map_err(|e| e.to_string())?);
    let tp = TableProvider(back.clone());
    let tinv = invert_provider(TableProvider(back));
    let tseeds: Vec<Coords> = tseeds.iter().map(|w| w.coords().to_vec()).collect();
    checked += check_identity("table", &tp, &tinv, &tseeds)?;
    // Weyl dimension against Freudenthal
    let mut dims = 0;
    for k in 1..=4 {
        let sys = ClassicalRootSystem::new(ClassicalType::A, k).map_err(|e| e.to_string())?;
        for lam in dominant_box(ClassicalType::A, k, 5) {
            let (w, f) = (weyl_dimension(ReducedAlgebra::Gl(k), &lam), freudenthal_dimension(&sys, &lam));
            let (w, f) = (w.map_err(|e| e.to_string())?, f.map_err(|e| e.to_string())?);
            if w != f {
                return Err(format!("gl({k}) {lam:?}: Weyl {w} vs Freudenthal {f}"));
            }
            dims += 1;
        }
    }
    for k in 2..=3 {
        let sys = ClassicalRootSystem::new(ClassicalType::D, k).map_err(|e| e.to_string())?;
        for lam in dominant_box(ClassicalType::D, k, 5) {
            let (w, f) = (weyl_dimension(ReducedAlgebra::So(k), &lam), freudenthal_dimension(&sys, &lam));
            let (w, f) = (w.map_err(|e| e.to_string())?, f.map_err(|e| e.to_string())?);
            if w != f {
                return Err(format!("so({}) {lam:?}: Weyl {w} vs Freudenthal {f}", 2 * k));
            }
            dims += 1;
        }
    }
    Ok(format!("{checked} matrix entries, {dims} dimensions"))
}

fn degree_coherence() -> Check {
    // deg_a under Ψ is checked inside these suites for every case
    let a = suite("lemma-phi", 10)?;
    let b = suite("commut-h0", 6)?;
    let mut n = 0;
    for inst in sl3_instances_for_seed(SEED, 5) {
        let (spec, _) = inst.spec()?;
        let (d, _) = degree_of_spec(&spec).map_err(|e| e.to_string())?;
        let lab = lab_block_degree(&inst, 8)? as u64;
        if d == 0 || d != lab {
            return Err(format!("{inst:?}: degree_d {d} vs lab {lab}"));
        }
        n += 1;
    }
    Ok(format!("deg_a twists on {} + {} modules, {n} sl(3) degrees", a.cases, b.cases - b.skipped))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "root-data counts", s(1), root_counts),
        criterion(2, "sl(2) localization suite", s(30), || {
            suites(&["theta-integer", "lemma-phi", "lemma-m1m2", "series-psi"], 10)
        }),
        criterion(3, "gl(1|1) typicality", s(10), || suites(&["kac-typicality"], 4)),
        criterion(4, "Serganova rule vs lab", s(120), || suites(&["serganova-check"], 10)),
        criterion(5, "sl(3) character vs sup formula", s(120), || suites(&["mathieu-sup"], 10)),
        criterion(6, "W(2) character", s(120), || suites(&["w2-check"], 6)),
        criterion(7, "multiplicity algebra", s(30), multiplicity_algebra),
        criterion(8, "degree coherence", s(60), degree_coherence),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
