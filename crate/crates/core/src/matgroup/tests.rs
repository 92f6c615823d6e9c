use super::*;

/// Independent count of 2×2 matrices over Z/n with unit determinant.
fn brute_gl2_count_mod(n: u64) -> u64 {
    let unit = |x: u64| num_integer::gcd(x, n) == 1;
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if unit((a * d + n * n - b * c) % n) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn group_orders() {
    assert_eq!(brute_gl2_count_mod(2), 6);
    assert_eq!(brute_gl2_count_mod(4), 96);
    assert_eq!(brute_gl2_count_mod(9), 3888);
    for (spec, expect) in [
        (RingSpec::padic(2, 1), 6),
        (RingSpec::padic(2, 2), 96),
        (RingSpec::padic(3, 2), 3888),
        (RingSpec::laurent(2, 2), 96),
        (RingSpec::padic(2, 3), 1536),
    ] {
        let g = Gl2Group::enumerate(spec, 30_000).unwrap();
        assert_eq!(g.order(), expect, "{spec}");
        assert_eq!(gl2_order(spec), expect as u64);
    }
}

#[test]
fn cap_is_enforced() {
    let err = Gl2Group::enumerate(RingSpec::padic(2, 9), 30_000).unwrap_err();
    assert!(err.to_string().contains("too large; raise cap"));
}

#[test]
fn congruence_subgroups() {
    let g2 = Gl2Group::enumerate(RingSpec::padic(2, 2), 30_000).unwrap();
    let k1 = g2.congruence_subgroup(1).unwrap();
    assert_eq!(k1.order(), 16);
    assert!(k1.is_abelian(&g2));
    assert!(g2.normalizes(g2.generators(), &k1));
    assert!(g2.congruence_subgroup(2).is_err());
    assert!(g2.congruence_subgroup(0).is_err());

    let g3 = Gl2Group::enumerate(RingSpec::padic(2, 3), 30_000).unwrap();
    assert_eq!(g3.congruence_subgroup(2).unwrap().order(), 16);
    let k1 = g3.congruence_subgroup(1).unwrap();
    assert_eq!(k1.order(), 256);
    let noncommuting = k1
        .elements()
        .iter()
        .any(|&x| k1.elements().iter().any(|&y| g3.mul(x, y) != g3.mul(y, x)));
    assert!(noncommuting);
    // |G_r| / |K_1| = |GL_2(F_p)|
    assert_eq!(g3.order() / k1.order(), 6);
}

#[test]
fn commutators_of_congruence_subgroups() {
    // [K_1, K_{l'}] ⊆ K_l at r = 3 (l = 2, l' = 1)
    let g = Gl2Group::enumerate(RingSpec::padic(2, 3), 30_000).unwrap();
    let k1 = g.congruence_subgroup(1).unwrap();
    let k2 = g.congruence_subgroup(2).unwrap();
    for &x in k1.elements() {
        for &y in k1.elements() {
            assert!(k2.contains(g.commutator(x, y)));
        }
    }
}

#[test]
fn lift_iso_examples() {
    let g = Gl2Group::enumerate(RingSpec::padic(2, 2), 30_000).unwrap();
    assert_eq!(g.lift_iso(1, &Mat2::ZERO).unwrap(), g.identity());
    let x = g.lift_iso(1, &Mat2::new(1, 0, 0, 0)).unwrap();
    assert_eq!(*g.mat(x), Mat2::new(3, 0, 0, 1));
    let small = Ring::new(RingSpec::padic(2, 1)).unwrap();
    let k1 = g.congruence_subgroup(1).unwrap();
    let mut images = Vec::new();
    for m in small.matrices() {
        let h = g.lift_iso(1, &m).unwrap();
        assert_eq!(g.unlift_iso(1, h).unwrap(), m);
        images.push(h);
    }
    images.sort();
    assert_eq!(images, k1.elements());
    // group law becomes addition
    for a in small.matrices() {
        for b in small.matrices() {
            let prod = g.mul(g.lift_iso(1, &a).unwrap(), g.lift_iso(1, &b).unwrap());
            assert_eq!(prod, g.lift_iso(1, &small.mat_add(&a, &b)).unwrap());
        }
    }
    let g3 = Gl2Group::enumerate(RingSpec::padic(2, 3), 30_000).unwrap();
    assert!(g3.lift_iso(1, &Mat2::ZERO).is_err());
}

#[test]
fn lift_iso_is_conjugation_equivariant() {
    let g = Gl2Group::enumerate(RingSpec::laurent(2, 2), 30_000).unwrap();
    let small = Ring::new(RingSpec::laurent(2, 1)).unwrap();
    for gi in 0..g.order() {
        let gbar = g.mat(gi).reduce(g.ring(), 1);
        let gbar_inv = small.mat_inv(&gbar).unwrap();
        for x in small.matrices() {
            let conj_x = small.mat_mul(&small.mat_mul(&gbar, &x), &gbar_inv);
            let lhs = g.conj(gi, g.lift_iso(1, &x).unwrap());
            assert_eq!(lhs, g.lift_iso(1, &conj_x).unwrap());
        }
    }
}

#[test]
fn class_counts() {
    let g1 = Gl2Group::enumerate(RingSpec::padic(2, 1), 30_000).unwrap();
    let cl = g1.conjugacy_classes();
    let mut sizes = cl.sizes().to_vec();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2, 3]);

    let g2 = Gl2Group::enumerate(RingSpec::padic(2, 2), 30_000).unwrap();
    let cl2 = g2.conjugacy_classes();
    assert_eq!(cl2.len(), 14);
    assert_eq!(cl2.sizes().iter().sum::<usize>(), 96);
    // brute-force check: classes agree with conjugation by every element
    let all: Vec<usize> = (0..g2.order()).collect();
    assert_eq!(ConjClasses::compute(&g2, &all), cl2);
}

#[test]
fn closure_and_cosets() {
    for spec in [RingSpec::padic(2, 2), RingSpec::padic(3, 2), RingSpec::laurent(3, 2)] {
        let g = Gl2Group::enumerate(spec, 30_000).unwrap();
        assert_eq!(g.closure(g.generators()).order(), g.order());
        let k1 = g.congruence_subgroup(1).unwrap();
        let reps = g.coset_reps(&g.whole(), &k1).unwrap();
        assert_eq!(reps.len() * k1.order(), g.order());
    }
    let g = Gl2Group::enumerate(RingSpec::padic(2, 2), 30_000).unwrap();
    assert_eq!(g.closure(&[]).order(), 1);
    let b = g.borel();
    let k1 = g.congruence_subgroup(1).unwrap();
    assert!(g.coset_reps(&k1, &b).is_err());
}

#[test]
fn inverses_and_det() {
    let g = Gl2Group::enumerate(RingSpec::padic(2, 2), 30_000).unwrap();
    let ring = g.ring();
    for x in 0..g.order() {
        assert_eq!(g.mul(x, g.inv(x)), g.identity());
        for y in (0..g.order()).step_by(7) {
            assert_eq!(g.det(g.mul(x, y)), ring.mul(g.det(x), g.det(y)));
        }
    }
}
