use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;
use superweight::lab::algebra::LabAlgebra;
use superweight::lab::highest::verma_composition;
use superweight::lab::oracles::LabVermaProvider;
use superweight::mult::*;
use superweight::rational::{frac, q, Q};
use superweight::rootdata::{AlgebraDescriptor, AlgebraKind, Parabolic, SuperRootSystem, Weight};

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn sorted(v: Vec<(Coords, i64)>) -> BTreeMap<Coords, i64> {
    v.into_iter().collect()
}

fn system(kind: AlgebraKind, m: usize, n: usize) -> Arc<SuperRootSystem> {
    Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(kind, m, n)).unwrap())
}

#[test]
fn sl2_supports() {
    let p = sl2_provider();
    // (ν+ρ, α∨) = 3
    let s = sorted(p.support(&qs(&[2, 0])).unwrap());
    assert_eq!(s, BTreeMap::from([(qs(&[2, 0]), 1), (qs(&[-1, 3]), 1)]));
    let generic = vec![frac(1, 3), q(0)];
    assert_eq!(p.support(&generic).unwrap(), vec![(generic.clone(), 1)]);
    let minus_rho = vec![frac(-1, 2), frac(1, 2)];
    assert_eq!(p.support(&minus_rho).unwrap(), vec![(minus_rho.clone(), 1)]);
    assert_eq!(p.value(&qs(&[2, 0]), &qs(&[0, 2])).unwrap(), 0);
}

#[test]
fn sl2_inverse_block() {
    let b = invert_provider(sl2_provider());
    let s = sorted(b.support(&qs(&[2, 0]), &OrderBound::closure()).unwrap());
    assert_eq!(s, BTreeMap::from([(qs(&[2, 0]), 1), (qs(&[-1, 3]), -1)]));
}

#[test]
fn diagonal_inverse_is_identity() {
    let sys = system(AlgebraKind::GL, 2, 1);
    let basis = sys.standard_basis();
    let b = invert_provider(DiagonalProvider::new(basis));
    let nu = qs(&[1, 0, 2]);
    assert_eq!(b.support(&nu, &OrderBound::closure()).unwrap(), vec![(nu.clone(), 1)]);
}

fn two_block_parabolic() -> Arc<Parabolic> {
    let sys = system(AlgebraKind::GL, 4, 0);
    Arc::new(Parabolic::build(sys, &[1, 1, 0, 0]).unwrap())
}

#[test]
fn product_of_two_sl2_blocks() {
    let par = two_block_parabolic();
    assert_eq!(par.blocks().len(), 2);
    let prod = ProductProvider::builtin(par.clone());
    let nu = qs(&[3, 1, 2, 0]);
    let s = prod.support(&nu).unwrap();
    assert_eq!(s.len(), 4);
    assert!(s.iter().all(|(_, v)| *v == 1));
    // Different central parts never link.
    assert_eq!(prod.value(&nu, &qs(&[3, 0, 2, 0])).unwrap(), 0);

    // Block-wise inversion commutes with the product.
    let inv = invert_provider(ProductProvider::builtin(par.clone()));
    let b1 = invert_provider(sl2_provider());
    let ws: Vec<Coords> = s.iter().map(|(w, _)| w.clone()).collect();
    let proj = |w: &Coords, k: usize| par.project(&par.system().from_formal(w))[k].coords.clone();
    for x in &ws {
        for y in &ws {
            let direct = inv.value(x, y).unwrap();
            let blocks = b1.value(&proj(x, 0), &proj(y, 0)).unwrap() * b1.value(&proj(x, 1), &proj(y, 1)).unwrap();
            assert_eq!(direct, blocks, "{x:?} {y:?}");
            assert_eq!(product_check(&prod, &inv, x, y).unwrap(), (x == y) as i64);
        }
    }
}

#[test]
fn single_block_product_is_the_block() {
    let sys = system(AlgebraKind::GL, 2, 0);
    let par = Arc::new(Parabolic::build(sys, &[0, 0]).unwrap());
    let prod = ProductProvider::builtin(par);
    let s = sorted(prod.support(&qs(&[2, 0])).unwrap());
    assert_eq!(s, BTreeMap::from([(qs(&[2, 0]), 1), (qs(&[-1, 3]), 1)]));
}

#[test]
fn product_with_center_matches_direct_sl2() {
    // sl(2) inside gl(2) ⊕ gl(1), a = gl(2) block.
    let sys = system(AlgebraKind::GL, 3, 0);
    let par = Arc::new(Parabolic::build(sys, &[0, 0, -1]).unwrap());
    let prod = ProductProvider::builtin(par);
    let s = sorted(prod.support(&qs(&[1, 0, 5])).unwrap());
    assert_eq!(s, BTreeMap::from([(qs(&[1, 0, 5]), 1), (qs(&[-1, 2, 5]), 1)]));
}

#[test]
fn serganova_matches_lab_sl21() {
    let sys = system(AlgebraKind::GL, 2, 1);
    let basis = sys.standard_basis();
    let p = serganova_sl_m_1_provider(basis).unwrap();
    let g = Arc::new(LabAlgebra::gl(2, 1));
    let cases: Vec<Vec<Q>> = vec![
        qs(&[2, 0, 0]),
        vec![frac(1, 2), q(0), q(0)],
        qs(&[1, 1, -1]),
        qs(&[3, 1, -1]),
        qs(&[3, 0, 0]),
        qs(&[1, 0, 0]),
    ];
    for nu in cases {
        let lab: BTreeMap<Coords, i64> =
            verma_composition(&g, &nu, 10).unwrap().into_iter().map(|(w, m)| (w, m as i64)).collect();
        let rule = sorted(p.support(&nu).unwrap());
        assert_eq!(rule, lab, "ν = {nu:?}");
    }
}

#[test]
fn serganova_two_term_support() {
    let sys = system(AlgebraKind::GL, 2, 1);
    let basis = sys.standard_basis();
    let p = serganova_sl_m_1_provider(basis.clone()).unwrap();
    let nu = qs(&[2, 0, 0]);
    let alpha = p.atypical_witness(&nu).unwrap().unwrap();
    assert_eq!(alpha.coords(), qs(&[0, 1, -1]).as_slice());
    let even = LinkageProvider::new(EvenRootData::even_part(&basis));
    let shifted = qs(&[2, -1, 1]);
    let mut union: BTreeMap<Coords, i64> = sorted(even.support(&nu).unwrap());
    for (m, v) in even.support(&shifted).unwrap() {
        *union.entry(m).or_default() += v;
    }
    assert_eq!(sorted(p.support(&nu).unwrap()), union);
    // Typical weights delegate to gl(2).
    let typical = vec![frac(1, 3), frac(1, 5), q(0)];
    assert_eq!(sorted(p.support(&typical).unwrap()), sorted(even.support(&typical).unwrap()));
}

#[test]
fn serganova_rejects_singular_atypical() {
    let sys = system(AlgebraKind::GL, 2, 1);
    let p = serganova_sl_m_1_provider(sys.standard_basis()).unwrap();
    // ρ = (0,−1,1); λ+ρ = (−1,−1,1): atypical and singular.
    let err = p.support(&qs(&[-1, 0, 0])).unwrap_err();
    assert!(matches!(err, MultError::SingularAtypicalUnsupported(_)), "{err}");
}

fn w2() -> Arc<SuperRootSystem> {
    system(AlgebraKind::W, 0, 2)
}

fn ww(sys: &SuperRootSystem, c: Vec<Q>) -> Weight {
    sys.weight(c).unwrap()
}

#[test]
fn w_s_nonintegral_head() {
    let sys = w2();
    let opts = WOptions::default();
    let lam = ww(&sys, vec![frac(1, 2), q(1)]);
    for j in 0..6 {
        let mu = ww(&sys, vec![frac(1, 2) - q(j), q(1)]);
        assert_eq!(w_s_coefficient(&lam, &mu, &opts).unwrap(), if j % 2 == 0 { 1 } else { -1 });
    }
    let off = ww(&sys, vec![frac(1, 2), q(0)]);
    assert_eq!(w_s_coefficient(&lam, &off, &opts).unwrap(), 0);
}

#[test]
fn w_s_tail_signs() {
    let sys = w2();
    let lam = ww(&sys, qs(&[2, 1]));
    let printed = WOptions { convention: SConvention::Printed, omit_first_index_sum: true };
    let corrected = WOptions::default();
    for k in 0..5 {
        let mu = ww(&sys, qs(&[0, -k]));
        let sign = if k % 2 == 0 { 1 } else { -1 };
        assert_eq!(w_s_coefficient(&lam, &mu, &printed).unwrap(), -sign);
        assert_eq!(w_s_coefficient(&lam, &mu, &corrected).unwrap(), sign);
    }
    let strict = WOptions { convention: SConvention::Corrected, omit_first_index_sum: false };
    let err = w_s_coefficient(&lam, &lam, &strict).unwrap_err();
    assert!(matches!(err, MultError::ThirdSumUndefined(_)));
}

#[test]
fn w_s_side_sum() {
    // λ = 2ε₂ (i = 2, a = 2): third sum at λ − lε₁ − ε₂.
    let sys = w2();
    let lam = ww(&sys, qs(&[0, 2]));
    let opts = WOptions::default();
    for l in 1..4 {
        let mu = ww(&sys, qs(&[-l, 1]));
        let sign = if l % 2 == 0 { 1 } else { -1 };
        assert_eq!(w_s_coefficient(&lam, &mu, &opts).unwrap(), -sign);
    }
}

#[test]
fn w_b_typical_and_trivial_block() {
    let sys = w2();
    let basis = sys.standard_basis();
    let winv = WInverse::new(basis.clone(), WOptions::default()).unwrap();
    let gl = invert_provider(LinkageProvider::new(EvenRootData::even_part(&basis)));
    let typical = ww(&sys, qs(&[3, 2]));
    let bound = OrderBound::depth(6);
    assert_eq!(sorted(winv.support(typical.coords(), &bound).unwrap()), sorted(gl.support(typical.coords(), &bound).unwrap()));
    let lam = ww(&sys, vec![frac(1, 3), q(1)]);
    for j in 0..4 {
        let mu = ww(&sys, vec![frac(1, 3) - q(j), q(1)]);
        let expect = if j % 2 == 0 { 1 } else { -1 };
        assert_eq!(w_b_coefficient(&lam, &mu, &gl, &basis, &WOptions::default()).unwrap(), expect);
    }
}

#[test]
fn w_b_matches_lab_depth_6() {
    let sys = w2();
    let basis = sys.standard_basis();
    let winv = WInverse::new(basis.clone(), WOptions::default()).unwrap();
    let lab = invert_provider(LabVermaProvider::new(Arc::new(LabAlgebra::w(2)), basis.clone(), 6));
    let bound = OrderBound::depth(6);
    for lam in [vec![frac(1, 2), q(1)], qs(&[2, 1]), qs(&[0, 1]), qs(&[0, 2])] {
        let l = ww(&sys, lam.clone());
        let got = sorted(winv.support(l.coords(), &bound).unwrap());
        let want = sorted(lab.support(l.coords(), &bound).unwrap());
        assert_eq!(got, want, "λ = {lam:?}");
    }
}

#[test]
fn compose_reduces_to_identity_when_a_is_g() {
    let a = sl2_provider();
    let b = invert_provider(sl2_provider());
    let nu = qs(&[4, 0]);
    for mu in [qs(&[4, 0]), qs(&[-1, 5]), qs(&[3, 1])] {
        assert_eq!(compose_mblb(&b, &a, &nu, &mu).unwrap(), (mu == nu) as i64);
    }
}

#[test]
fn sl3_regular_integral_block_all_ones_against_lab() {
    let p = LinkageProvider::new(EvenRootData::type_a(3));
    let nu = qs(&[0, 0, 0]);
    let s = sorted(p.support(&nu).unwrap());
    assert_eq!(s.len(), 6);
    let lab: BTreeMap<Coords, i64> = verma_composition(&Arc::new(LabAlgebra::gl(3, 0)), &nu, 4)
        .unwrap()
        .into_iter()
        .map(|(w, m)| (w, m as i64))
        .collect();
    assert_eq!(s, lab);
}

#[test]
fn large_integral_rank_is_a_gap() {
    let p = LinkageProvider::new(EvenRootData::type_a(4));
    assert!(matches!(p.support(&qs(&[0, 0, 0, 0])), Err(MultError::ProviderGap { .. })));
}

fn header() -> TableHeader {
    TableHeader { algebra: AlgebraDescriptor::new(AlgebraKind::GL, 2, 0), basis: "standard".into(), kind: TableKind::A }
}

#[test]
fn table_round_trip_and_validation() {
    let sys = system(AlgebraKind::GL, 2, 0);
    let seeds = vec![ww(&sys, qs(&[2, 0])), ww(&sys, qs(&[1, 1]))];
    let t = tabulate(&sl2_provider(), header(), &seeds, 100).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    save_table(&t, &path).unwrap();
    let back = load_table(&path).unwrap();
    assert_eq!(back.entries().collect::<Vec<_>>(), t.entries().collect::<Vec<_>>());
    let tp = TableProvider(Arc::new(back));
    assert_eq!(sorted(tp.support(&qs(&[2, 0])).unwrap()), sorted(sl2_provider().support(&qs(&[2, 0])).unwrap()));
    assert!(matches!(tp.support(&qs(&[5, 0])), Err(MultError::ProviderGap { .. })));

    let bad_diag = vec![(ww(&sys, qs(&[2, 0])), ww(&sys, qs(&[2, 0])), 2)];
    assert!(matches!(MultiplicityTable::new(header(), bad_diag), Err(MultError::InvariantViolation(_))));
    let above = vec![(ww(&sys, qs(&[2, 0])), ww(&sys, qs(&[2, 0])), 1), (ww(&sys, qs(&[2, 0])), ww(&sys, qs(&[3, -1])), 1)];
    assert!(matches!(MultiplicityTable::new(header(), above), Err(MultError::InvariantViolation(_))));
    std::fs::write(&path, "not json\n").unwrap();
    assert!(matches!(load_table(&path), Err(MultError::Parse(_))));
}

proptest! {
    #[test]
    fn sl3_unitriangular_and_inverse(a in -3i64..4, b in -3i64..4, c in 0i64..3) {
        let nu = vec![q(a), q(b), frac(c, 2)];
        let p = LinkageProvider::new(EvenRootData::type_a(3));
        let inv = invert_provider(LinkageProvider::new(EvenRootData::type_a(3)));
        let sup = p.support(&nu).unwrap();
        prop_assert_eq!(p.value(&nu, &nu).unwrap(), 1);
        for (mu, v) in &sup {
            prop_assert!(p.height(&nu, mu).is_some());
            prop_assert!(*v == 1);
        }
        for (mu, _) in &sup {
            prop_assert_eq!(product_check(&p, &inv, &nu, mu).unwrap(), (mu == &nu) as i64);
            prop_assert_eq!(compose_mblb(&inv, &p, &nu, mu).unwrap(), (mu == &nu) as i64);
        }
    }

    #[test]
    fn sl2_inverse_matches_closed_form(l1 in -6i64..7, l2 in -6i64..7) {
        let nu = qs(&[l1, l2]);
        let inv = invert_provider(sl2_provider());
        let b = sorted(inv.support(&nu, &OrderBound::closure()).unwrap());
        let n = l1 - l2 + 1;
        if n > 0 {
            prop_assert_eq!(b, BTreeMap::from([(nu.clone(), 1), (qs(&[l1 - n, l2 + n]), -1)]));
        } else {
            prop_assert_eq!(b, BTreeMap::from([(nu.clone(), 1)]));
        }
    }
}
