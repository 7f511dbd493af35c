use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::rational::{q, Q};
use crate::schreier::{schreier_member, FamilyDescriptor};
use crate::vector::C00Vector;

fn t_half() -> SpaceSpec {
    SpaceSpec::tsirelson(q(1, 2))
}

fn mixed2() -> SpaceSpec {
    SpaceSpec::new(2, vec![(1, q(1, 2)), (2, q(1, 4))], true).unwrap()
}

fn random_vector(rng: &mut ChaCha8Rng, p: u32, width: usize) -> C00Vector {
    let mut v = C00Vector::new(p);
    while v.is_empty() {
        for i in 1..=width {
            if rng.gen_bool(0.6) {
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                v.set(i, sign, q(rng.gen_range(1..10), rng.gen_range(1..6)));
            }
        }
    }
    v
}

/// One level of the norm equation, re-evaluated with `norm_p` on restrictions.
fn equation_rhs(x: &C00Vector, space: &SpaceSpec) -> Q {
    let idx = x.indices();
    let n = idx.len();
    let mut best = x.max_p();
    for mask in 1u32..(1 << n) {
        let pos: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| idx[k]).collect();
        if pos.len() < 2 {
            continue;
        }
        for cut in 1u32..(1 << (pos.len() - 1)) {
            let mut pieces: Vec<Vec<usize>> = vec![vec![pos[0]]];
            for r in 0..pos.len() - 1 {
                if cut >> r & 1 == 1 {
                    pieces.push(Vec::new());
                }
                pieces.last_mut().unwrap().push(pos[r + 1]);
            }
            let minima: Vec<usize> = pieces.iter().map(|p| p[0]).collect();
            for (c, theta) in space.pairs() {
                if schreier_member(&minima, *c) {
                    let s = pieces
                        .iter()
                        .map(|p| norm_p(&x.restrict_to(p), space).unwrap())
                        .fold(Q::zero(), |a, b| a + b);
                    let v = theta * s;
                    if v > best {
                        best = v;
                    }
                }
            }
        }
    }
    best
}

#[test]
fn exact_small_values() {
    let s = t_half();
    assert_eq!(norm_p(&C00Vector::ones(1, [1, 2]), &s).unwrap(), q(1, 1));
    assert_eq!(norm_p(&C00Vector::ones(1, 4..=7), &s).unwrap(), q(2, 1));
    assert_eq!(norm_p(&C00Vector::ones(1, [2, 3]), &s).unwrap(), q(1, 1));
    assert_eq!(norm_p(&C00Vector::new(1), &s), Err(Error::EmptyVector));
    let lp = SpaceSpec::single(2, 1, q(1, 1)).unwrap();
    let v = C00Vector::from_coeffs(2, [(1, q(1, 2)), (2, q(-3, 1))]);
    assert_eq!(norm_p(&v, &lp).unwrap(), q(37, 4));
}

#[test]
fn certificates() {
    let s = t_half();
    let x = C00Vector::ones(1, 4..=7);
    let c = norm_certificate(&x, &s).unwrap();
    let NormCertificate::Node { character, children } = &c else { panic!() };
    assert_eq!(*character, 1);
    assert_eq!(children.len(), 4);
    assert_eq!(verify_certificate(&c, &x, &s).unwrap(), q(2, 1));

    let e1 = C00Vector::unit(1, 1);
    assert_eq!(norm_certificate(&e1, &s).unwrap(), NormCertificate::Leaf { index: 1, sign: 1 });

    let x = C00Vector::ones(1, [2, 3]);
    let c = norm_certificate(&x, &s).unwrap();
    assert_eq!(c.leaves(), vec![2, 3]);
    assert_eq!(verify_certificate(&c, &x, &s).unwrap(), q(1, 1));

    let leaf = NormCertificate::Leaf { index: 5, sign: 1 };
    assert_eq!(verify_certificate(&leaf, &C00Vector::unit(1, 5), &s).unwrap(), q(1, 1));

    let bad = NormCertificate::Node {
        character: 1,
        children: vec![
            NormCertificate::Leaf { index: 1, sign: 1 },
            NormCertificate::Leaf { index: 2, sign: 1 },
        ],
    };
    let x = C00Vector::ones(1, [1, 2]);
    assert_eq!(verify_certificate(&bad, &x, &s), Err(Error::BadAdmissibility("root".into())));
    let unknown = NormCertificate::Node {
        character: 3,
        children: vec![NormCertificate::Leaf { index: 2, sign: 1 }],
    };
    assert_eq!(verify_certificate(&unknown, &x, &s), Err(Error::UnknownCharacter("root".into())));
    let outside = NormCertificate::Node {
        character: 1,
        children: vec![NormCertificate::Leaf { index: 9, sign: 1 }],
    };
    assert_eq!(
        verify_certificate(&outside, &x, &s),
        Err(Error::LeafOutsideSupport("root.0".into()))
    );
}

#[test]
fn certificate_json_shape() {
    let c = norm_certificate(&C00Vector::ones(1, [2, 3]), &t_half()).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    assert_eq!(
        s,
        r#"{"node":{"character":1,"children":[{"leaf":{"index":2,"sign":1}},{"leaf":{"index":3,"sign":1}}]}}"#
    );
}

#[test]
fn brute_examples() {
    let s = t_half();
    assert_eq!(brute_norm_p(&C00Vector::ones(1, [1, 2]), &s, 3).unwrap(), q(1, 1));
    assert_eq!(brute_norm_p(&C00Vector::ones(1, 4..=7), &s, 3).unwrap(), q(2, 1));
    assert!(matches!(
        brute_norm_p(&C00Vector::ones(1, 1..=13), &s, 2),
        Err(Error::WindowTooLarge(_))
    ));
}

#[test]
fn engine_matches_brute_and_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spaces = [t_half(), mixed2(), SpaceSpec::mixed_decay(1, 4)];
    for round in 0..40 {
        let s = &spaces[round % 3];
        let x = random_vector(&mut rng, s.p(), 8);
        let v = norm_p(&x, s).unwrap();
        assert_eq!(v, brute_norm_p(&x, s, 4).unwrap(), "{x:?}");
        assert_eq!(v, equation_rhs(&x, s), "{x:?}");
        let c = norm_certificate(&x, s).unwrap();
        assert_eq!(verify_certificate(&c, &x, s).unwrap(), v);
    }
}

#[test]
fn far_out_supports_use_high_characters() {
    let s = SpaceSpec::mixed_decay(1, 5);
    let x = C00Vector::ones(1, 20..=31);
    let v = norm_p(&x, &s).unwrap();
    assert_eq!(v, equation_rhs(&x.restrict(|i| i <= 27), &s).max(v.clone()));
    let c = norm_certificate(&x, &s).unwrap();
    assert_eq!(verify_certificate(&c, &x, &s).unwrap(), v);
    assert!(v >= x.max_p() && v <= x.sum_p());
}

#[test]
fn restriction_examples() {
    let s = t_half();
    let x = C00Vector::ones(1, 4..=7);
    assert_eq!(restriction_max(&x, &FamilyDescriptor::Schreier(0), &s).unwrap(), q(1, 1));
    assert_eq!(restriction_max(&x, &FamilyDescriptor::Schreier(1), &s).unwrap(), q(2, 1));
    assert_eq!(restriction_max(&x, &FamilyDescriptor::explicit([]), &s).unwrap(), Q::zero());
}

#[test]
fn restriction_closed_form_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s1_as_s1of = FamilyDescriptor::s1of(FamilyDescriptor::Schreier(0));
    for space in [t_half(), mixed2(), SpaceSpec::mixed_decay(1, 3)] {
        for _ in 0..15 {
            let x = random_vector(&mut rng, space.p(), 10);
            assert_eq!(
                restriction_max(&x, &FamilyDescriptor::Schreier(1), &space).unwrap(),
                restriction_max(&x, &s1_as_s1of, &space).unwrap()
            );
        }
    }
}

#[test]
fn upper_bound_dominates() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for space in [t_half(), mixed2(), SpaceSpec::mixed_decay(1, 4)] {
        for _ in 0..30 {
            let x = random_vector(&mut rng, space.p(), 12);
            assert!(norm_upper_bound(&x, &space).unwrap() >= norm_p(&x, &space).unwrap());
        }
    }
}

#[test]
fn sign_flips_do_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = mixed2();
    for _ in 0..20 {
        let x = random_vector(&mut rng, 2, 9);
        let v = norm_p(&x, &s).unwrap();
        for i in x.indices() {
            assert_eq!(norm_p(&x.flip(i), &s).unwrap(), v);
            let dropped = x.restrict(|k| k != i);
            if !dropped.is_empty() {
                assert!(norm_p(&dropped, &s).unwrap() <= v);
            }
        }
    }
    assert!(Q::one() > Q::zero());
}
