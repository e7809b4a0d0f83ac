//! Constructed spheres for SU, PSU, PGU and PGU with a field automorphism.

use std::collections::{BTreeSet, HashMap};

use qsphere::chains::{
    chain_ce_xh, span, unit_coefficients, verify_cycle_nonzero, verify_qsphere, AmbientMap,
    SphereMode, SurjectivityCheck,
};
use qsphere::constructors::{
    build_pgun_phi, sphere_pgun, sphere_psun, sphere_sun, verify_degenerate_hypotheses, PsuCase,
};
use qsphere::field::prime_factors;
use qsphere::group::HermitianSpace;
use qsphere::{AmbientGroup, Group, GroupElement, Mat};

#[test]
fn su3_over_f16() {
    let c = sphere_sun(3, 4, 5).unwrap();
    let rep = verify_qsphere(&c.group, &c.sphere).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!(rep.mode, SphereMode::Involutive);
    assert_eq!((rep.rank, rep.e_order, rep.x_size), (2, 25, 6));
    let acc = chain_ce_xh(&c.group, &c.sphere).unwrap();
    let v = verify_cycle_nonzero(&acc.chain);
    assert!(v.is_cycle);
    assert_eq!(v.support_size, 12);
    assert!(unit_coefficients(&acc.chain));
}

#[test]
fn su3_over_f81_strict() {
    let c = sphere_sun(3, 9, 5).unwrap();
    let rep = verify_qsphere(&c.group, &c.sphere).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!(rep.mode, SphereMode::Strict);
    assert_eq!((rep.rank, rep.e_order, rep.x_size), (2, 25, 6));
    let acc = chain_ce_xh(&c.group, &c.sphere).unwrap();
    let v = verify_cycle_nonzero(&acc.chain);
    assert!(v.is_cycle);
    assert_eq!(v.support_size, 12);
}

#[test]
fn su4_over_f81_strict() {
    let c = sphere_sun(4, 9, 5).unwrap();
    let rep = verify_qsphere(&c.group, &c.sphere).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!((rep.rank, rep.e_order, rep.x_size), (3, 125, 24));
    let acc = chain_ce_xh(&c.group, &c.sphere).unwrap();
    let v = verify_cycle_nonzero(&acc.chain);
    assert!(v.is_cycle);
    assert_eq!(v.support_size, 24 * 6);
}

#[test]
fn broken_h_is_not_a_cycle() {
    let c = sphere_sun(3, 9, 5).unwrap();
    let mut sphere = c.sphere.clone();
    sphere.h[1] = -sphere.h[1];
    assert!(!verify_qsphere(&c.group, &sphere).unwrap().c.passed);
    let acc = chain_ce_xh(&c.group, &sphere).unwrap();
    assert!(!verify_cycle_nonzero(&acc.chain).is_cycle);
}

#[test]
fn psu_case_a_is_the_su_sphere() {
    let c = sphere_psun(3, 4, 5).unwrap();
    assert_eq!(c.psu_case, Some(PsuCase::A));
    let rep = verify_qsphere(&c.group, &c.sphere).unwrap();
    assert!(rep.passed(), "{rep:?}");
    let img = c.image_report.as_ref().unwrap();
    assert!(img.passed(), "{img:?}");
    assert_eq!(img.map, AmbientMap::CenterQuotient);
    // gcd(3, q + 1) = 1, so the centre of SU_3(4) is trivial.
    assert_eq!(img.kernel_order, 1);
    let su = sphere_sun(3, 4, 5).unwrap();
    let keys = |v: &[GroupElement]| -> Vec<u128> {
        v.iter().map(|x| c.group.key(&c.group.element(x.mat()))).collect()
    };
    assert_eq!(keys(&c.sphere.x_set), keys(&su.sphere.x_set));
    assert_eq!(keys(&c.sphere.e_gens), keys(&su.sphere.e_gens));
    assert_eq!(c.sphere.h, su.sphere.h);
}

#[test]
fn psu_case_c_embeds_su4() {
    let c = sphere_psun(5, 4, 5).unwrap();
    assert_eq!(c.psu_case, Some(PsuCase::C));
    assert_eq!(c.group.n, 5);
    let rep = verify_qsphere(&c.group, &c.sphere).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!((rep.rank, rep.e_order, rep.x_size), (3, 125, 24));
    assert_eq!(rep.mode, SphereMode::Involutive);
    let up = c.upstairs.as_ref().unwrap();
    assert_eq!(up.n, 4);
    let acc = chain_ce_xh(&c.group, &c.sphere).unwrap();
    assert!(verify_cycle_nonzero(&acc.chain).is_cycle);
}

#[test]
fn psu_case_b_direct() {
    let c = sphere_psun(3, 8, 3).unwrap();
    assert_eq!(c.psu_case, Some(PsuCase::B));
    let rep = verify_qsphere(&c.group, &c.sphere).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!((rep.rank, rep.e_order), (2, 9));
    let names: Vec<&str> = c.scalars.iter().map(|(k, _)| k.as_str()).collect();
    assert!(names.contains(&"z"));
}

#[test]
fn pgu_through_the_centre() {
    for (n, q, p) in [(2, 4, 5), (3, 4, 5), (3, 9, 5)] {
        let c = sphere_pgun(n, q, p).unwrap();
        let rep = verify_qsphere(&c.group, &c.sphere).unwrap();
        assert!(rep.passed(), "({n},{q},{p}): {rep:?}");
        assert_eq!(rep.rank, n - 1);
        let img = c.image_report.as_ref().unwrap();
        assert!(img.passed(), "({n},{q},{p}): {img:?}");
        assert_eq!(img.kernel_order as u64, q + 1);
        assert!(img.kernel_normalises_e && img.kernel_meets_e_trivially && img.injective_on_x);
        if (n, q) == (3, 4) {
            assert!(matches!(img.surjectivity, SurjectivityCheck::Enumerated { .. }));
        }
        let acc = chain_ce_xh(&c.group, &c.sphere).unwrap();
        assert!(verify_cycle_nonzero(&acc.chain).is_cycle);
    }
}

fn keyset(g: &AmbientGroup, elems: &[GroupElement]) -> BTreeSet<u128> {
    elems.iter().map(|x| g.key(x)).collect()
}

#[test]
fn field_automorphism_scalars_rank_two() {
    let b = build_pgun_phi(2, 5, 1, 3).unwrap();
    let f = b.field();
    assert_eq!(f.q().unwrap(), 125);
    let (n, a) = (2i64, b.alpha);
    // α lies in the fixed field of Φ and solves the orthogonality equations.
    assert_eq!(f.frobenius(a, 2), a);
    assert!(f.add(f.add(a, f.bar(a)), f.from_int(n - 2)).is_zero());
    assert!(!f.add(f.norm(a).unwrap(), f.from_int(n - 1)).is_zero());
    assert_ne!(a, f.one());
    // λ^{q+1} = 1 and Λ = λ^{1 - s^2} has prime order r ∉ {2, 3}.
    let lam = &b.lambda;
    assert_eq!(lam.r, 7);
    assert_eq!(f.pow(lam.lambda, 126), f.one());
    assert_eq!(lam.big_lambda, f.pow(lam.lambda, 1 - 25));
    assert_eq!(f.order(lam.big_lambda), 7);
    assert_eq!(f.order(lam.lambda), lam.lambda_order);
    // 7 divides s^3 + 1 = 126 and not s^2 - 1 = 24.
    assert!(prime_factors(126).contains(&7) && !prime_factors(24).contains(&7));
    assert_eq!(f.order(b.u), 3);
    assert_eq!(f.frobenius(b.u, 2), b.u);
}

#[test]
fn field_automorphism_x_and_h_rank_two() {
    let b = build_pgun_phi(2, 5, 1, 3).unwrap();
    let (g, f) = (&b.group, b.field());
    let space = HermitianSpace::new(f.clone(), 2).unwrap();
    let v1 = vec![b.alpha, f.one()];
    let v2 = vec![f.one(), b.alpha];
    let y1 = g.element(&space.quasi_reflection(&v1, b.lambda.lambda).unwrap());
    let y2 = g.element(&space.quasi_reflection(&v2, b.lambda.lambda).unwrap());
    let one = f.one();
    let x1 = g.element(&Mat::from_rows(&[vec![qsphere::Elem::ZERO, one], vec![one, qsphere::Elem::ZERO]]));
    assert_eq!(b.sphere.x_gens, vec![x1.clone()]);
    let expected: HashMap<u128, i64> = [
        (y1.clone(), -1),
        (y2.clone(), 1),
        (g.mul(&x1, &y1), -1),
        (g.mul(&x1, &y2), 1),
    ]
    .into_iter()
    .map(|(x, h)| (g.key(&x), h))
    .collect();
    let got: HashMap<u128, i64> = b
        .sphere
        .x_set
        .iter()
        .zip(&b.sphere.h)
        .map(|(x, &h)| (g.key(x), h))
        .collect();
    assert_eq!(got, expected);
    // e_1 = Y_{v_2,u}, e_2 = Φ.
    let e1 = g.element(&space.quasi_reflection(&v2, b.u).unwrap());
    assert_eq!(b.sphere.e_gens, vec![e1, g.phi()]);
}

#[test]
fn field_automorphism_hypotheses() {
    for (n, x_size) in [(2usize, 4usize), (3, 36)] {
        let b = build_pgun_phi(n, 5, 1, 3).unwrap();
        let rep = verify_degenerate_hypotheses(&b).unwrap();
        assert_eq!(rep.rank, n);
        assert_eq!(rep.x_size, x_size);
        assert!(rep.lambda_twist.passed, "{:?}", rep.lambda_twist);
        assert!(rep.centralisers.passed, "{:?}", rep.centralisers);
        assert!(rep.structural.passed, "{:?}", rep.structural);
        assert!(rep.agrees_with_brute_force);
        assert!(rep.corruption_detected);
        assert_eq!(rep.boundary_support, 0);
        assert!(rep.horizontal_pairs > 0 && rep.vertical_pairs > 0);
    }
}

/// The hypothesis that every witness simplex carries coefficient ±1. It does
/// not hold: `Y_{v_1,u}` is a scalar multiple of an element of `E`, so `Y_1`
/// and `x_1 Y_2` conjugate every simplex alike while `h` takes opposite
/// values on them, and the whole chain cancels.
#[test]
#[ignore = "known failure: the accumulated chain vanishes"]
fn field_automorphism_witness_coefficients() {
    for n in [2usize, 3] {
        let b = build_pgun_phi(n, 5, 1, 3).unwrap();
        let rep = verify_degenerate_hypotheses(&b).unwrap();
        assert!(rep.witnesses.passed, "n = {n}: {:?}", rep.witnesses.failures.first());
        assert!(rep.top_support > 0);
    }
}

#[test]
fn field_automorphism_chain_vanishes() {
    for n in [2usize, 3] {
        let b = build_pgun_phi(n, 5, 1, 3).unwrap();
        let (g, f) = (&b.group, b.field());
        let space = HermitianSpace::new(f.clone(), n).unwrap();
        let prod = b.vectors.iter().fold(Mat::identity(f, n), |m, v| {
            m.mul(f, &space.quasi_reflection(v, b.u).unwrap())
        });
        assert_eq!(prod, Mat::scalar(f, n, b.u));
        let acc = chain_ce_xh(g, &b.sphere).unwrap();
        assert!(acc.chain.is_zero());
    }
}

#[test]
fn field_automorphism_rank_three_black_simplex() {
    let b = build_pgun_phi(3, 5, 1, 3).unwrap();
    let g = &b.group;
    let p = b.params.p;
    let e = &b.sphere.e_gens;
    let y1 = g.element(&b.y_lambda[0]);
    let y1i = g.inv(&y1);
    let flag = [
        span(g, &e[..1], p),
        span(g, &e[..2], p),
        span(g, e, p),
    ];
    let conj = |c: &GroupElement, s: &[GroupElement]| -> Vec<GroupElement> {
        s.iter().map(|x| g.conj(c, x)).collect()
    };
    let x2 = &b.sphere.x_gens[1];
    for sub in &flag {
        let moved = conj(&y1i, sub);
        assert_eq!(keyset(g, &conj(x2, &moved)), keyset(g, &moved));
    }
}
