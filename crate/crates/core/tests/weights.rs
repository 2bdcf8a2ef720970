use proptest::prelude::*;
use std::sync::Arc;
use superweight::rational::{frac, q, Q};
use superweight::rootdata::{AlgebraDescriptor, AlgebraKind, BlockType, BlockWeight, Parabolic, SuperRootSystem};
use superweight::weights::*;

fn system(kind: AlgebraKind, m: usize, n: usize) -> Arc<SuperRootSystem> {
    Arc::new(SuperRootSystem::build(&AlgebraDescriptor::new(kind, m, n)).unwrap())
}

/// Coordinates with successive differences `gaps`, shifted to sum zero.
fn from_gaps(first: Q, gaps: &[Q]) -> Vec<Q> {
    let mut c = vec![first];
    for g in gaps {
        let next = c.last().unwrap() - g;
        c.push(next);
    }
    let mean = c.iter().sum::<Q>() / q(c.len() as i64);
    c.iter().map(|x| x - &mean).collect()
}

/// Lead gap that is not a nonnegative integer.
fn bad_gap() -> impl Strategy<Value = Q> {
    prop_oneof![(-9i64..=-1).prop_map(q), (-20i64..=20, 2i64..=5).prop_filter_map("integral", |(a, d)| {
        (a % d != 0).then(|| frac(a, d))
    })]
}

fn normal_form() -> impl Strategy<Value = BlockWeight> {
    (bad_gap(), prop::collection::vec(0i64..4, 0..3)).prop_map(|(g0, rest)| {
        let mut gaps = vec![g0];
        gaps.extend(rest.into_iter().map(q));
        BlockWeight::new(BlockType::A, from_gaps(q(0), &gaps))
    })
}

fn dominant() -> impl Strategy<Value = BlockWeight> {
    (prop::collection::vec(0i64..4, 1..4), -6i64..6, 1i64..4).prop_map(|(gaps, a, d)| {
        let gaps: Vec<Q> = gaps.into_iter().map(q).collect();
        BlockWeight::new(BlockType::A, from_gaps(frac(a, d), &gaps))
    })
}

proptest! {
    #[test]
    fn bracket_then_decompose_is_identity(mu in dominant(), l in 1usize..4) {
        match mu_bracket(&mu, l).unwrap() {
            Bracket::Zero => prop_assert!(l >= mu.size()),
            Bracket::Weight(lam) => {
                prop_assert_eq!(regular_integral_decompose(&lam).unwrap(), Some((mu.clone(), l)));
            }
        }
    }

    #[test]
    fn normal_forms_accept_and_deformations_reject(nf in normal_form(), k in 0i64..5) {
        prop_assert!(validate_normal_form(&nf));
        prop_assert!(is_accepted_bounded_block(&nf));
        // make the first gap a nonnegative integer, keeping the sum
        let mut c = nf.coords.clone();
        let s = &c[0] + &c[1];
        c[0] = (&s + q(k)) / q(2);
        c[1] = (&s - q(k)) / q(2);
        prop_assert!(!validate_normal_form(&BlockWeight::new(BlockType::A, c)));
    }

    #[test]
    fn gamma_injective_xor_partially_finite(
        block in prop_oneof![normal_form().prop_filter("size 2", |b| b.size() == 2), dominant().prop_filter("size 2", |b| b.size() == 2)],
        z in -3i64..3,
    ) {
        let sys = system(AlgebraKind::GL, 3, 0);
        let par = Parabolic::build(sys.clone(), &[0, 0, -1]).unwrap();
        let lambda = par.assemble(&[block], &sys.weight(vec![q(z), q(z), q(0)]).unwrap());
        let gi = is_gamma_injective(&lambda, &par).unwrap();
        prop_assert!(gi ^ is_partially_finite(&lambda, &par));
    }

    #[test]
    fn singularity_is_dot_invariant(
        pick in 0usize..3,
        coords in prop::collection::vec((-6i64..=6, 1i64..=2), 6),
    ) {
        let (k, m, n) = [(AlgebraKind::GL, 3, 0), (AlgebraKind::GL, 2, 1), (AlgebraKind::OSP, 2, 4)][pick];
        let s = system(k, m, n);
        let b = s.standard_basis();
        let mu = s.weight(coords[..s.dim()].iter().map(|&(a, d)| frac(a, d)).collect()).unwrap();
        let sing = is_singular(&mu, &b);
        prop_assert_eq!(sing, is_singular_by_orbit(&mu, &b).unwrap());
        for w in s.weyl_group().unwrap() {
            prop_assert_eq!(is_singular(&s.dot_act(&w, &mu, b.rho()), &b), sing);
        }
    }
}
