mod common;

use common::*;
use holo_core::affine::{
    affine_support, decide_a_transformable, is_affine, is_affine_alpha, so2_candidates_affine, CandidateSet,
};
use holo_core::decision::{DecideOptions, Outcome};
use holo_core::scalars::Scalar;
use holo_core::signatures::{apply_transform, DenseSignature, SignatureSet, Transform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pattern<R: Rng>(rng: &mut R, n: usize) -> DenseSignature {
    let entries = (0..1usize << n)
        .map(|_| match rng.gen_range(0..6) {
            0 | 1 => Scalar::zero(),
            r => Scalar::i_pow(r as i64),
        })
        .collect();
    DenseSignature::from_entries(entries).unwrap()
}

#[test]
fn support_affinity_is_triple_xor_closure() {
    for n in 1..=4usize {
        let size = 1usize << n;
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let masks: Vec<u64> = if size <= 8 {
            (1..1u64 << size).collect()
        } else {
            (0..3000).map(|_| rng.gen_range(1..1u64 << size)).collect()
        };
        for mask in masks {
            let s: Vec<usize> = (0..size).filter(|&x| mask >> x & 1 == 1).collect();
            let f = DenseSignature::from_entries(
                (0..size).map(|x| Scalar::from((mask >> x & 1) as i64)).collect(),
            )
            .unwrap();
            let found = affine_support(&f).unwrap();
            assert_eq!(found.is_some(), triple_xor_closed(&s), "support {s:?}");
            if let Some(sup) = found {
                let mut pts = sup.points();
                pts.sort_unstable();
                assert_eq!(pts, s);
                assert_eq!(sup.basis.len(), sup.dimension() + 1);
            }
        }
    }
}

#[test]
fn membership_matches_form_enumeration() {
    for n in 1..=3usize {
        let oracle = affine_patterns(n);
        let mut rng = ChaCha8Rng::seed_from_u64(7 + n as u64);
        for _ in 0..1500 {
            let f = if rng.gen_bool(0.5) { random_affine(&mut rng, n) } else { random_pattern(&mut rng, n) };
            let pattern = unit_pattern(&f).unwrap();
            let expected = pattern.iter().all(|&e| e == 4) || oracle.contains(&normalize_pattern(&pattern));
            let w = is_affine(&f).unwrap();
            assert_eq!(w.is_some(), expected, "{f:?}");
            if let Some(w) = w {
                assert_dense_eq(&w.reconstruct(), &f);
            }
        }
    }
}

#[test]
fn stabilizer_generators_preserve_affinity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let generators = [
        Transform::d(),
        Transform::h2(),
        Transform::x(),
        Transform::identity().scale(&Scalar::from(3)),
    ];
    for _ in 0..60 {
        let n = rng.gen_range(1..=4);
        let f = random_affine(&mut rng, n);
        assert!(is_affine(&f).unwrap().is_some());
        for m in &generators {
            assert!(is_affine(&apply_transform(m, &f)).unwrap().is_some());
        }
    }
}

#[test]
fn twisted_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let n = rng.gen_range(1..=4);
        let g = random_affine(&mut rng, n);
        let f = apply_transform(&Transform::d_alpha(), &g);
        assert!(is_affine_alpha(&f).unwrap().is_some());
    }
}

#[test]
fn raw_candidates_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let n = rng.gen_range(2..=3);
        let f = random_pattern(&mut rng, n);
        if f.is_zero().unwrap() {
            continue;
        }
        if let CandidateSet::List { raw, .. } = so2_candidates_affine(&f, 4096).unwrap() {
            assert!(raw <= 8 * n);
        }
    }
}

#[test]
fn rotated_sets_are_recognized() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for round in 0..12 {
        let h0 = random_rotation(&mut rng);
        let twist = round % 2 == 1;
        let sigs: Vec<DenseSignature> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let n = rng.gen_range(1..=3);
                let mut g = random_affine(&mut rng, n);
                if twist {
                    g = apply_transform(&Transform::d_alpha(), &g);
                }
                apply_transform(&h0, &g)
            })
            .collect();
        let d = decide_a_transformable(&SignatureSet::from_dense(sigs.clone()), &DecideOptions::default()).unwrap();
        assert_eq!(d.outcome, Outcome::Yes, "round {round}");
        let back = d.witness.as_ref().unwrap().transpose();
        for f in &sigs {
            let g = apply_transform(&back, f);
            let ok = match d.branch.as_deref() {
                Some("A") => is_affine(&g).unwrap().is_some(),
                _ => is_affine_alpha(&g).unwrap().is_some(),
            };
            assert!(ok);
        }
    }
}

#[test]
fn twisted_arity_four_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h0 = random_rotation(&mut rng);
    let sigs: Vec<DenseSignature> = (0..2)
        .map(|_| apply_transform(&h0, &apply_transform(&Transform::d_alpha(), &random_affine(&mut rng, 4))))
        .collect();
    let d = decide_a_transformable(&SignatureSet::from_dense(sigs), &DecideOptions::default()).unwrap();
    assert_eq!(d.outcome, Outcome::Yes);
}
