use std::collections::BTreeSet;

use super::*;
use crate::cli_io::fixture;

fn ints(v: &[i64]) -> Vec<Elem> {
    v.iter().map(|&x| Elem::int(x)).collect()
}

fn odd(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

/// Independent parity oracle: every window `(x, _, z)` has `x ≡ z (mod 2)`.
fn parity_word_ok(w: &[i64]) -> bool {
    w.windows(3).all(|t| odd(t[0]) == odd(t[2]))
}

fn words(letters: &[i64], k: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Number of distinct follower sets of `n`-blocks, by brute force over `-2..=2`.
fn brute_parity_classes(n: usize, k: usize) -> usize {
    let letters = [-2, -1, 0, 1, 2];
    let mut sets = BTreeSet::new();
    for a in words(&letters, n).into_iter().filter(|a| parity_word_ok(a)) {
        let f: BTreeSet<Vec<i64>> = words(&letters, k)
            .into_iter()
            .filter(|b| parity_word_ok(&[a.clone(), b.clone()].concat()))
            .collect();
        sets.insert(f);
    }
    sets.len()
}

#[test]
fn parity_identity_followers_are_the_evens() {
    let s = fixture("parity");
    let h = follower_subgroup(&s, 2, 1, 64).unwrap();
    for v in -6..6 {
        assert_eq!(h.contains(&ints(&[v])), !odd(v), "{v}");
    }
    let h1 = follower_subgroup(&s, 1, 1, 64).unwrap();
    assert!(h1.contains(&ints(&[1])) && h1.contains(&ints(&[0])));
}

#[test]
fn z4_identity_followers_by_exhaustion() {
    let s = fixture("z4_coset");
    let h = follower_subgroup(&s, 1, 1, 64).unwrap();
    assert!(h.complete);
    let found: Vec<u64> = (0..4).filter(|&b| h.contains(&[Elem::Mod(b)])).collect();
    let expected: Vec<u64> = (0..4).filter(|b| b % 2 == 0).collect();
    assert_eq!(found, expected);
    let p = predecessor_subgroup(&s, 1, 1, 64).unwrap();
    assert!(p.contains(&[Elem::Mod(2)]) && !p.contains(&[Elem::Mod(1)]));
}

#[test]
fn full_shift_identity_followers_are_everything() {
    let s = fixture("full_z2");
    let h = follower_subgroup(&s, 3, 2, 64).unwrap();
    for w in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        assert!(h.contains(&[Elem::Mod(w[0]), Elem::Mod(w[1])]));
    }
}

#[test]
fn broken_closure_is_rejected() {
    assert!(matches!(follower_subgroup(&fixture("broken_closure"), 1, 1, 64), Err(Error::ClosureViolation { .. })));
}

#[test]
fn parity_coset_law() {
    let s = fixture("parity");
    let r = coset_law_check(&s, &ints(&[1, 2]), 2, 16).unwrap();
    assert!(r.checks > 100);
    match s.follower_set(&ints(&[1, 2]), 2, 16).unwrap() {
        FollowerResult::CosetProduct { factors } => {
            assert_eq!(factors.len(), 2);
            // odd then even
            assert!(factors[0].contains(&s.alphabet, &Elem::int(3)));
            assert!(factors[1].contains(&s.alphabet, &Elem::int(-4)));
            assert!(!factors[1].contains(&s.alphabet, &Elem::int(1)));
        }
        other => panic!("{other:?}"),
    }
    predecessor_law_check(&s, &ints(&[1, 2]), 2, 16).unwrap();
}

#[test]
fn prufer_coset_law() {
    let s = fixture("prufer_fractal");
    let half = Elem::dyadic(1, 1);
    coset_law_check(&s, std::slice::from_ref(&half), 1, 16).unwrap();
    let letters = s.alphabet.enumerate(64);
    let found: Vec<Elem> = letters.iter().filter(|b| s.allowed(&half, b)).cloned().collect();
    assert_eq!(found, vec![Elem::dyadic(1, 2), Elem::dyadic(3, 2)]);
    match s.follower_set(&[half], 1, 16).unwrap() {
        FollowerResult::CosetProduct { factors } => {
            assert_eq!(factors[0].rep, Elem::dyadic(1, 2));
            assert_eq!(factors[0].sub.size(&s.alphabet), Size::Finite(2));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn z4_coset_law() {
    let s = fixture("z4_coset");
    coset_law_check(&s, &[Elem::Mod(1)], 1, 64).unwrap();
    let found: Vec<u64> = (0..4).filter(|&b| s.allowed(&Elem::Mod(1), &Elem::Mod(b))).collect();
    assert_eq!(found, vec![1, 3]);
    product_law_check(&s, &[Elem::Mod(1)], &[Elem::Mod(3)], 2, 64, Side::Follower).unwrap();
}

#[test]
fn parity_family_sizes() {
    let s = fixture("parity");
    for (n, k) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 2), (2, 3), (4, 4)] {
        let (f, p) = class_families(&s, n, k, 64).unwrap();
        let expected = brute_parity_classes(n, k.min(3));
        assert_eq!(f.len(), expected, "n={n} k={k}");
        assert!(f.complete());
        assert_eq!(p.len(), f.len());
    }
    assert_eq!(class_family(&s, 2, 2, 64, Side::Follower).unwrap().len(), 4);
    assert_eq!(class_family(&s, 1, 1, 64, Side::Follower).unwrap().len(), 1);
}

#[test]
fn z2_second_family_is_infinite() {
    let s = fixture("z2_second");
    let f = class_family(&s, 1, 1, 20, Side::Follower).unwrap();
    assert!(!f.complete());
    assert!(f.len() > 3);
    let keys: BTreeSet<_> = f.classes.iter().map(|c| c.key.clone()).collect();
    assert_eq!(keys.len(), f.len());
}

#[test]
fn tau_on_parity_is_a_group_isomorphism() {
    let s = fixture("parity");
    let t = tau_bijection(&s, 2, 2, 64).unwrap();
    assert!(t.complete());
    assert_eq!(t.followers.len(), 4);
    let image: BTreeSet<usize> = t.pairs.iter().copied().collect();
    assert_eq!(image.len(), 4);
    assert_eq!(t.products_checked, 16);
}

#[test]
fn tau_on_full_shift_is_trivial() {
    let t = tau_bijection(&fixture("full_z2"), 2, 3, 64).unwrap();
    assert_eq!((t.followers.len(), t.predecessors.len()), (1, 1));
}

#[test]
fn tau_on_prufer_is_bounded() {
    let s = fixture("prufer_fractal");
    let t = tau_bijection(&s, 1, 1, 24).unwrap();
    assert!(t.followers.len() > 4);
    assert!(!t.complete());
    // each follower class has two members, each predecessor class one
    for c in t.followers.classes.iter().take(4) {
        let members: Vec<Elem> = s.alphabet.enumerate(128).into_iter().filter(|b| s.allowed(&c.block[0], b)).collect();
        assert_eq!(members.len(), 2);
    }
}

#[test]
fn follower_subgroups_shrink() {
    for name in ["parity", "z4_coset", "prufer_fractal", "z2_second", "full_int_two_sided"] {
        monotonicity_check(&fixture(name), 12, 32).unwrap();
    }
}
