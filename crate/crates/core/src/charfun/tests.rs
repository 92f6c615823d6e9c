use super::*;
use crate::ring::Ring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn level(spec: RingSpec) -> Level {
    Level::new(spec, crate::DEFAULT_CAP).unwrap()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < TOLERANCE
}

#[test]
fn psi_beta_zero_is_trivial() {
    let lv = level(RingSpec::padic(2, 2));
    let psi = lv.psi_beta(&Mat2::ZERO, 1).unwrap();
    assert!(psi.values().iter().all(|v| v.is_zero()));
    assert!(lv.psi_beta(&Mat2::ZERO, 0).is_err());
}

#[test]
fn psi_beta_is_injective_and_multiplicative() {
    let lv = level(RingSpec::padic(2, 2));
    let small = Ring::new(RingSpec::padic(2, 1)).unwrap();
    let mut seen = Vec::new();
    for beta in small.matrices() {
        let psi = lv.psi_beta(&beta, 1).unwrap();
        assert!(psi.is_multiplicative(lv.group()));
        seen.push(psi.values().to_vec());
    }
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 16);
}

#[test]
fn psi_beta_conjugation_equivariance() {
    for spec in [RingSpec::padic(2, 2), RingSpec::laurent(2, 2)] {
        let lv = level(spec);
        let group = lv.group();
        let small = Ring::new(spec.at_level(1)).unwrap();
        for beta in small.matrices() {
            let psi = lv.psi_beta(&beta, 1).unwrap();
            for g in 0..group.order() {
                let gbar = group.mat(g).reduce(group.ring(), 1);
                let conj_beta =
                    small.mat_mul(&small.mat_mul(&gbar, &beta), &small.mat_inv(&gbar).unwrap());
                let psi_conj = lv.psi_beta(&conj_beta, 1).unwrap();
                for &x in psi.domain().elements() {
                    assert_eq!(psi_conj.value(x), psi.value(group.conj(group.inv(g), x)));
                }
            }
        }
    }
}

#[test]
fn psi_beta_top_layer_depends_on_residue_only() {
    // r = 4: ψ_β on K_2 for β ∈ M_2(O_2), restricted to K_3
    let lv = level(RingSpec::padic(2, 4));
    let ring2 = Ring::new(RingSpec::padic(2, 2)).unwrap();
    let k3 = lv.group().congruence_subgroup(3).unwrap();
    let betas: Vec<Mat2> = ring2.matrices().collect();
    let restricted: Vec<LinearChar> = betas
        .iter()
        .map(|b| lv.psi_beta(b, 2).unwrap().restrict(&k3))
        .collect();
    for (i, bi) in betas.iter().enumerate() {
        for (j, bj) in betas.iter().enumerate() {
            let same_residue = bi.reduce(&ring2, 1) == bj.reduce(&ring2, 1);
            assert_eq!(same_residue, restricted[i] == restricted[j]);
        }
    }
}

#[test]
fn induced_degree_and_routes_agree() {
    let lv = level(RingSpec::padic(2, 2));
    let beta = Mat2::new(1, 1, 0, 1);
    let psi = lv.psi_beta(&beta, 1).unwrap();
    let ind = lv.induce_linear(&psi).unwrap();
    assert!((ind.degree() - 6.0).abs() < TOLERANCE);
    let other = lv.induce_by_class_sums(psi.domain(), &psi.complex_values());
    assert!(ind.approx_eq(&other));
}

#[test]
fn permutation_character() {
    let lv = level(RingSpec::padic(3, 2));
    let b = lv.group().borel();
    let perm = lv.induce(&b, &vec![Complex64::new(1.0, 0.0); b.order()]).unwrap();
    assert!((perm.degree() - (lv.order() / b.order()) as f64).abs() < TOLERANCE);
    let triv = lv.trivial();
    assert!(close(lv.inner(&triv, &perm).unwrap(), Complex64::new(1.0, 0.0)));
}

#[test]
fn induction_is_transitive() {
    let lv = level(RingSpec::padic(2, 2));
    let group = lv.group();
    let k1 = group.congruence_subgroup(1).unwrap();
    let h = group.product_set(&group.borel(), &k1).unwrap();
    let psi = lv.psi_beta(&Mat2::new(0, 1, 1, 1), 1).unwrap();
    let direct = lv.induce_linear(&psi).unwrap();
    let middle = induce_within(group, &h, &k1, &psi.complex_values()).unwrap();
    let two_step = lv.induce(&h, &middle).unwrap();
    assert!(direct.approx_eq(&two_step));
}

#[test]
fn frobenius_reciprocity_spot_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [RingSpec::padic(2, 2), RingSpec::laurent(2, 2), RingSpec::padic(2, 3)] {
        let lv = level(spec);
        let group = lv.group();
        let consts = lv.constants();
        let small = Ring::new(spec.at_level(consts.l_prime)).unwrap();
        let betas: Vec<Mat2> = small.matrices().collect();
        let kl = group.congruence_subgroup(consts.l).unwrap();
        let subgroups = [kl.clone(), group.product_set(&group.borel(), &kl).unwrap()];
        for _ in 0..10 {
            let h = &subgroups[rng.gen_range(0..subgroups.len())];
            let beta = betas[rng.gen_range(0..betas.len())];
            let psi = lv.psi_beta(&beta, consts.l).unwrap();
            // a linear character of h extending ψ_β, when one exists
            let Some(chi) = psi.extensions_to(group, h).unwrap().into_iter().next() else {
                continue;
            };
            let other = betas[rng.gen_range(0..betas.len())];
            let f = lv.induce_linear(&lv.psi_beta(&other, consts.l).unwrap()).unwrap();
            let lhs = lv.inner(&lv.induce_linear(&chi).unwrap(), &f).unwrap();
            let rhs = inner_on_elements(&chi.complex_values(), &lv.restrict(&f, h));
            assert!(close(lhs, rhs), "{spec}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn linear_twists() {
    let lv = level(RingSpec::padic(3, 2));
    let b = lv.group().borel();
    let f = lv.induce(&b, &vec![Complex64::new(1.0, 0.0); b.order()]).unwrap();
    let same = lv.mult_by_linear(&f, |_| Phase::ZERO);
    assert_eq!(same, f);
    // λ of order 6 on (Z/9)^×: 2 generates, λ(2) = e(1/6)
    let ring = lv.group().ring();
    let lambda = |u: RingElem| {
        let k = (0..6u64).find(|&k| ring.pow(RingElem(2), k) == u).unwrap();
        Phase::new(k, 6)
    };
    let twisted = lv.mult_by_linear(&f, lambda);
    let n1 = lv.inner(&f, &f).unwrap();
    let n2 = lv.inner(&twisted, &twisted).unwrap();
    assert!(close(n1, n2));
}

#[test]
fn mismatched_classes_rejected() {
    let a = level(RingSpec::padic(2, 2));
    let b = level(RingSpec::padic(2, 1));
    assert!(matches!(a.inner(&a.trivial(), &b.trivial().clone()), Err(Error::ClassMismatch)));
}

#[test]
fn extension_counts() {
    // extensions of ψ_β from K_1 to the whole of K_1 · B at (2,2)
    let lv = level(RingSpec::padic(2, 2));
    let group = lv.group();
    let k1 = group.congruence_subgroup(1).unwrap();
    let triv = LinearChar::trivial(k1.clone());
    let target = group.product_set(&group.borel(), &k1).unwrap();
    let ext = triv.extensions_to(group, &target).unwrap();
    // linear characters of target/K_1 ≅ upper triangular in GL_2(F_2) ≅ C_2
    assert_eq!(ext.len(), 2);
    for e in &ext {
        assert!(e.is_multiplicative(group));
    }
}
