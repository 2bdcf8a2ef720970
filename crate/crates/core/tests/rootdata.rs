use proptest::prelude::*;
use std::sync::Arc;
use superweight::rational::{frac, to_i64, Q};
use superweight::rootdata::{AlgebraDescriptor, AlgebraKind, Parabolic, Parity, SuperRootSystem};

fn system(kind: AlgebraKind, m: usize, n: usize) -> Arc<SuperRootSystem> {
    Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(kind, m, n)).unwrap())
}

#[test]
fn gl_root_counts() {
    for m in 1..=4 {
        for n in 0..=4 {
            let s = system(AlgebraKind::GL, m, n);
            assert_eq!(s.even_roots().len(), m * (m - 1) + n * n.saturating_sub(1), "gl({m}|{n})");
            assert_eq!(s.odd_roots().len(), 2 * m * n, "gl({m}|{n})");
        }
    }
}

#[test]
fn periplectic_odd_counts() {
    for m in 2..=4 {
        let s = system(AlgebraKind::P, m, 0);
        assert_eq!(s.odd_roots_graded(true).len(), m * (m + 1) / 2, "p({m})");
        assert_eq!(s.odd_roots_graded(false).len(), m * (m - 1) / 2, "p({m})");
    }
}

#[test]
fn w_graded_dimensions() {
    for n in 1..=4usize {
        let s = system(AlgebraKind::W, 0, n);
        let total: usize = (-1..=n as i32).map(|k| s.graded_dimension(k)).sum();
        assert_eq!(total, n << n);
        assert_eq!(s.dimension(), n << n);
        assert_eq!(s.graded_dimension(-1), n);
        assert_eq!(s.dim_g0_double_prime() as i64, (n as i64) * (1 << (n - 1)) - (n * n) as i64);
    }
}

#[test]
fn rho_pairs_to_one_with_simple_even_roots() {
    for (k, m, n) in [
        (AlgebraKind::GL, 3, 0),
        (AlgebraKind::GL, 2, 1),
        (AlgebraKind::GL, 3, 2),
        (AlgebraKind::SL, 3, 1),
        (AlgebraKind::OSP, 2, 4),
    ] {
        let s = system(k, m, n);
        let b = s.standard_basis();
        let even: Vec<_> = b.positive_roots(Parity::Even).into_iter().map(|r| r.weight).collect();
        let mut seen = 0;
        for a in b.simple().iter().filter(|a| even.contains(a)) {
            assert_eq!(s.coroot_pairing(b.rho(), a), Some(Q::from_integer(1.into())), "{k:?}({m}|{n}) {a}");
            seen += 1;
        }
        assert!(seen > 0 || m + n < 3);
    }
}

#[test]
fn parabolic_functional_round_trip() {
    for (k, m, n, l) in [
        (AlgebraKind::GL, 3, 1, vec![0, 0, -1, 1]),
        (AlgebraKind::GL, 4, 0, vec![1, 1, 0, 0]),
        (AlgebraKind::SL, 2, 1, vec![0, 0, -1]),
        (AlgebraKind::OSP, 2, 4, vec![1, 0, 0]),
    ] {
        let s = system(k, m, n);
        let p = Parabolic::build(s.clone(), &l).unwrap();
        let f: Vec<i64> = p.functional().iter().map(|x| to_i64(x).expect("integral functional")).collect();
        let p2 = Parabolic::build(s, &f).unwrap();
        assert_eq!(p2.blocks(), p.blocks());
        assert_eq!(p2.levels(), p.levels());
        assert_eq!(p2.functional(), p.functional());
    }
}

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=3).prop_map(|(a, d)| frac(a, d))
}

proptest! {
    #[test]
    fn form_is_weyl_invariant(
        pick in 0usize..4,
        a in prop::collection::vec(rational(), 5),
        b in prop::collection::vec(rational(), 5),
    ) {
        let (k, m, n) = [(AlgebraKind::GL, 3, 0), (AlgebraKind::GL, 2, 2), (AlgebraKind::GL, 3, 1), (AlgebraKind::OSP, 2, 4)][pick];
        let s = system(k, m, n);
        let d = s.dim();
        let x = s.weight(a[..d].to_vec()).unwrap();
        let y = s.weight(b[..d].to_vec()).unwrap();
        let f = s.form(&x, &y);
        for w in s.weyl_group().unwrap() {
            prop_assert_eq!(s.form(&s.weyl_act(&w, &x), &s.weyl_act(&w, &y)), f.clone());
        }
    }
}
