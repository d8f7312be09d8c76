mod common;

use cyclering::data;
use cyclering::isometry::automorphism_info;
use cyclering::lattice::GramTarget;
use cyclering::linalg::{rat, ratio};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn e8_rep_numbers_match_euclidean_box() {
    let e8 = data::e8();
    for q in 1..=3 {
        let t = GramTarget::scalar(rat(q)).unwrap();
        assert_eq!(e8.rep_number(&t), common::e8_box_count(q), "q = {q}");
    }
}

#[test]
fn i3_rep_numbers_match_box() {
    let i3 = data::identity(3);
    for k in 1..=4 {
        let t = GramTarget::scalar(ratio(k, 2)).unwrap();
        assert_eq!(i3.rep_number(&t), common::i3_box_count(k), "|x|² = {k}");
    }
}

#[test]
fn rep_numbers_survive_basis_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let e8 = data::e8();
    let u = common::random_unimodular(&mut rng, 8, 30);
    let moved = e8.transform(&u).unwrap();
    for q in 1..=2 {
        let t = GramTarget::scalar(rat(q)).unwrap();
        assert_eq!(moved.rep_number(&t), common::e8_box_count(q));
    }
}

#[test]
fn i3_group_is_the_signed_permutations() {
    let (all, proper) = common::signed_permutations(3);
    let a = automorphism_info(&data::identity(3)).unwrap();
    assert_eq!((a.order_o, a.order_so), (all as u128, proper as u128));
}

#[test]
fn d4_group_by_brute_force() {
    let g = data::d4_gram();
    let d4 = data::d4();
    let roots: Vec<Vec<i64>> = common::box_vectors(4, 2).into_iter().filter(|v| d4.int_norm(v) == 2).collect();
    assert_eq!(roots.len(), 24);
    let (all, proper) = common::brute_force_automorphisms(&g, &roots);
    let a = automorphism_info(&d4).unwrap();
    assert_eq!((a.order_o, a.order_so), (all as u128, proper as u128));
    assert_eq!(all, 1152);
}

#[test]
fn small_identity_groups() {
    for n in 1..=5 {
        let (all, proper) = common::signed_permutations(n);
        let a = automorphism_info(&data::identity(n)).unwrap();
        assert_eq!((a.order_o, a.order_so), (all as u128, proper as u128), "I{n}");
    }
}
