use superweight::charformula::{weyl_dimension, ReducedAlgebra};
use superweight::lab::freudenthal::*;
use superweight::rational::{frac, q, Q};

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

#[test]
fn small_examples() {
    let a1 = ClassicalRootSystem::new(ClassicalType::A, 2).unwrap();
    assert_eq!(freudenthal_multiplicity(&a1, &qs(&[0, 0]), &qs(&[0, 0])).unwrap(), 1);
    let ch = freudenthal_character(&a1, &qs(&[2, 0])).unwrap();
    assert_eq!(ch.len(), 3);
    assert!(ch.values().all(|&m| m == 1));
    // adjoint of sl(3): zero weight has multiplicity 2
    let a2 = ClassicalRootSystem::new(ClassicalType::A, 3).unwrap();
    assert_eq!(freudenthal_multiplicity(&a2, &qs(&[1, 0, -1]), &qs(&[0, 0, 0])).unwrap(), 2);
    assert_eq!(freudenthal_dimension(&a2, &qs(&[1, 0, -1])).unwrap(), 8);
    // sp(4): standard 4, adjoint 10, the 5 = ε₁ + ε₂
    let c2 = ClassicalRootSystem::new(ClassicalType::C, 2).unwrap();
    assert_eq!(freudenthal_dimension(&c2, &qs(&[1, 0])).unwrap(), 4);
    assert_eq!(freudenthal_dimension(&c2, &qs(&[2, 0])).unwrap(), 10);
    assert_eq!(freudenthal_dimension(&c2, &qs(&[1, 1])).unwrap(), 5);
    // so(7) spin, so(5) vector
    let b3 = ClassicalRootSystem::new(ClassicalType::B, 3).unwrap();
    assert_eq!(freudenthal_dimension(&b3, &[frac(1, 2), frac(1, 2), frac(1, 2)]).unwrap(), 8);
    let b2 = ClassicalRootSystem::new(ClassicalType::B, 2).unwrap();
    assert_eq!(freudenthal_dimension(&b2, &qs(&[1, 0])).unwrap(), 5);
    // so(6) ≅ sl(4): half-spins are 4-dimensional
    let d3 = ClassicalRootSystem::new(ClassicalType::D, 3).unwrap();
    assert_eq!(freudenthal_dimension(&d3, &[frac(1, 2), frac(1, 2), frac(-1, 2)]).unwrap(), 4);
    assert_eq!(freudenthal_dimension(&d3, &qs(&[1, 0, 0])).unwrap(), 6);
}

/// All dominant integral weights with every simple coroot pairing in 0..=bound.
fn dominant_box(sys: &ClassicalRootSystem, bound: i64, ty: ClassicalType) -> Vec<Vec<Q>> {
    let n = sys.rank();
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    loop {
        // fundamental-weight coordinates to ε-coordinates
        let lam: Vec<Q> = match ty {
            ClassicalType::A => (0..n).map(|i| q(c[i..n - 1].iter().sum::<i64>())).collect(),
            ClassicalType::D => {
                // λ_i = Σ_{j≥i}^{n−2} c_j + (c_{n−2}+c_{n−1}) / 2 ... written directly
                let a = &c[..n];
                let mut v = vec![Q::from_integer(0.into()); n];
                for i in 0..n {
                    let mut s = q(0);
                    for j in i..n.saturating_sub(2) {
                        s += q(a[j]);
                    }
                    if i < n - 1 {
                        s += frac(a[n - 2] + a[n - 1], 2);
                    } else {
                        s += frac(a[n - 1] - a[n - 2], 2);
                    }
                    v[i] = s;
                }
                v
            }
            _ => unreachable!(),
        };
        if ty != ClassicalType::A || c[n - 1] == 0 {
            assert!(sys.is_dominant_integral(&lam), "{lam:?}");
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

#[test]
fn weyl_dimension_matches_freudenthal_gl() {
    for k in 1..=4 {
        let sys = ClassicalRootSystem::new(ClassicalType::A, k).unwrap();
        let weights = dominant_box(&sys, 5, ClassicalType::A);
        assert!(!weights.is_empty());
        for lam in weights {
            assert_eq!(weyl_dimension(ReducedAlgebra::Gl(k), &lam).unwrap(), freudenthal_dimension(&sys, &lam).unwrap(), "gl({k}) {lam:?}");
        }
    }
}

#[test]
fn weyl_dimension_matches_freudenthal_so() {
    for k in 2..=3 {
        let sys = ClassicalRootSystem::new(ClassicalType::D, k).unwrap();
        let weights = dominant_box(&sys, if k == 3 { 3 } else { 5 }, ClassicalType::D);
        for lam in weights {
            assert_eq!(weyl_dimension(ReducedAlgebra::So(k), &lam).unwrap(), freudenthal_dimension(&sys, &lam).unwrap(), "so({}) {lam:?}", 2 * k);
        }
    }
}
