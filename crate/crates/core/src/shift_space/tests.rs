use super::*;
use crate::cli_io::fixture;
use crate::group_core::prufer;

fn ints(v: &[i64]) -> Vec<Elem> {
    v.iter().map(|&x| Elem::int(x)).collect()
}

fn mods(v: &[u64]) -> Vec<Elem> {
    v.iter().map(|&x| Elem::Mod(x)).collect()
}

/// Every word of length `k` over `letters` that extends `a` in the language.
fn brute(shift: &Shift, a: &[Elem], k: usize, letters: &[Elem]) -> BTreeSet<Vec<Elem>> {
    shift.brute_words(a, k, letters, true).into_iter().collect()
}

fn members(result: &FollowerResult, g: &Alphabet, letters: &[Elem], k: usize) -> BTreeSet<Vec<Elem>> {
    let mut words: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..k {
        words = words
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |x| {
                    let mut v = w.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    words
        .into_iter()
        .filter(|w| match result {
            FollowerResult::CosetProduct { factors } => factors.iter().zip(w).all(|(c, x)| c.contains(g, x)),
            FollowerResult::ExplicitSet { elements, .. } => elements.contains(w),
            FollowerResult::CosetChain { .. } => unreachable!(),
        })
        .collect()
}

#[test]
fn parity_membership() {
    let p = fixture("parity");
    let x = Sequence::periodic(Axis::TwoSided, ints(&[1, 2, 3, 4]));
    assert!(p.contains(&x).unwrap());
    let y = Sequence::bi_infinite(ints(&[0]), ints(&[1, 2, 2]), ints(&[0]), 0).unwrap();
    assert!(!p.contains(&y).unwrap());
    assert!(p.contains(&Sequence::empty(Axis::TwoSided)).unwrap());
}

#[test]
fn full_shift_contains_everything_infinite() {
    let f = fixture("full_int");
    assert!(f.contains(&Sequence::eventually_periodic(ints(&[5, -9]), ints(&[3])).unwrap()).unwrap());
    assert!(f.contains(&Sequence::finite(ints(&[1, 2]))).unwrap());
    assert!(f.contains(&Sequence::empty(Axis::OneSided)).unwrap());
    let z2 = fixture("full_z2_one_sided");
    assert!(!z2.contains(&Sequence::empty(Axis::OneSided)).unwrap());
    assert!(!z2.contains(&Sequence::finite(mods(&[1]))).unwrap());
}

#[test]
fn mixed_axis_is_rejected() {
    let p = fixture("parity");
    assert_eq!(p.contains(&Sequence::finite(ints(&[1]))), Err(Error::MixedAxis));
}

#[test]
fn periodic_closure_is_membership_only() {
    let p = fixture("periodic_closure");
    assert!(p.contains(&Sequence::periodic(Axis::TwoSided, ints(&[4, -1]))).unwrap());
    assert!(!p.contains(&Sequence::bi_infinite(ints(&[0]), ints(&[1]), ints(&[0]), 0).unwrap()).unwrap());
    assert!(p.contains(&Sequence::empty(Axis::TwoSided)).unwrap());
    assert_eq!(p.m_step(8), MStep::AtLeast(8));
}

#[test]
fn follower_examples() {
    let p = fixture("parity");
    let r = p.follower_set(&ints(&[3]), 1, 16).unwrap();
    assert_eq!(r, FollowerResult::CosetProduct { factors: vec![Coset { rep: Elem::int(0), sub: Subgroup::whole() }] });

    let z = fixture("z2_second");
    let a = vec![Elem::pair(7, 5)];
    match z.follower_set(&a, 2, 16).unwrap() {
        FollowerResult::CosetProduct { factors } => {
            assert_eq!(factors.len(), 2);
            for c in factors {
                assert_eq!(c.sub, Subgroup::first_axis());
                assert_eq!(c.rep, Elem::pair(0, 5));
            }
        }
        other => panic!("{other:?}"),
    }

    let f = fixture("prufer_fractal");
    match f.follower_set(&[prufer::identity()], 1, 16).unwrap() {
        FollowerResult::CosetProduct { factors } => {
            let elems: Vec<Elem> = factors[0].sub.iter(&f.alphabet).map(|h| f.alphabet.mul(&factors[0].rep, &h)).collect();
            assert_eq!(elems, vec![prufer::identity(), Elem::dyadic(1, 1)]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn predecessor_examples() {
    let f = fixture("prufer_fractal");
    let letters = f.alphabet.enumerate(1 << 8);
    let found = f.brute_words(&[prufer::identity()], 1, &letters, false);
    assert_eq!(found, vec![vec![prufer::identity()]]);

    let z4 = fixture("z4_coset");
    match z4.predecessor_set(&mods(&[0]), 1, 16).unwrap() {
        FollowerResult::CosetProduct { factors } => {
            assert_eq!(factors[0].sub.elements().unwrap(), &mods(&[0, 2])[..]);
            assert_eq!(factors[0].rep, Elem::Mod(0));
        }
        other => panic!("{other:?}"),
    }
    let full = fixture("full_z2");
    assert_eq!(full.brute_words(&mods(&[1]), 1, &mods(&[0, 1]), false).len(), 2);
}

#[test]
fn block_outside_language_is_an_error() {
    let p = fixture("parity");
    assert!(matches!(p.follower_set(&ints(&[1, 2, 2]), 1, 16), Err(Error::BlockNotInLanguage(_))));
}

#[test]
fn language_examples() {
    let full = fixture("full_z2");
    let (words, complete) = full.language(2, 64);
    assert_eq!(words.len(), 4);
    assert!(complete);

    let z4 = fixture("z4_coset");
    let (words, _) = z4.language(2, 64);
    assert_eq!(words.len(), 8);
    for w in &words {
        if let (Elem::Mod(a), Elem::Mod(b)) = (&w[0], &w[1]) {
            assert!((b + 4 - a) % 2 == 0);
        }
    }

    let p = fixture("parity");
    let (words, complete) = p.language(3, 6);
    assert!(!complete);
    let letters = Alphabet::Int.enumerate(6);
    let expected = letters.len().pow(3) / 2;
    assert_eq!(words.len(), expected);
}

#[test]
fn oracles_agree_with_brute_force() {
    let letters_for = |s: &Shift| s.alphabet.enumerate(16);
    for name in ["z4_coset", "parity", "z2_second", "full_z2", "identity_z2", "prufer_fractal"] {
        let s = fixture(name);
        let letters = letters_for(&s);
        let e = s.alphabet.identity();
        for a in [vec![e.clone()], vec![e.clone(), e.clone()], vec![letters[1].clone()]] {
            if !s.in_language(&a) {
                continue;
            }
            let r = s.follower_set(&a, 1, 16).unwrap();
            assert_eq!(members(&r, &s.alphabet, &letters, 1), brute(&s, &a, 1, &letters), "{name} {a:?}");
        }
    }
}

#[test]
fn keys_agree_with_brute_force_sets() {
    // equal keys must mean equal follower sets on the sampled prefix
    let s = fixture("parity");
    let letters = ints(&[0, 1, -1, 2, -2, 3]);
    let blocks = s.language_exact(2, &letters);
    for a in &blocks {
        for b in &blocks {
            for k in 1..=2 {
                let same = s.follower_key(a, k) == s.follower_key(b, k);
                assert_eq!(same, brute(&s, a, k, &letters) == brute(&s, b, k, &letters), "{a:?} {b:?} {k}");
            }
        }
    }
}

#[test]
fn classification_examples() {
    let f = fixture("prufer_fractal").classify(32);
    assert!(f.row_finite);
    assert_eq!(f.m_step, MStep::Exact(1));
    assert!(f.is_edge_shift);

    let z = fixture("z2_second").classify(32);
    assert_eq!(z.m_step, MStep::Exact(1));
    assert!(!z.sft);

    let full = fixture("full_int").classify(32);
    assert!(!full.row_finite);
    assert_eq!(full.m_step, MStep::Exact(0));

    assert_eq!(fixture("parity").m_step(32), MStep::Exact(2));
    assert!(fixture("z4_coset").classify(32).sft);
}

#[test]
fn product_of_full_shifts() {
    let a = fixture("full_z2");
    let p = Shift::product(vec![a.clone(), a.clone()]).unwrap();
    let full4 = Shift::full(Alphabet::Product(vec![Alphabet::Cyclic(2), Alphabet::Cyclic(2)]), Axis::TwoSided);
    let letters = p.alphabet.enumerate(4);
    for x in &letters {
        for y in &letters {
            let s = Sequence::periodic(Axis::TwoSided, vec![x.clone(), y.clone()]);
            assert_eq!(p.contains(&s).unwrap(), full4.contains(&s).unwrap());
        }
    }
    let mixed = Shift::product(vec![a, fixture("full_int")]);
    assert_eq!(mixed.unwrap_err(), Error::MixedAxis);
}

#[test]
fn product_with_trivial_factor() {
    let z4 = fixture("z4_coset");
    let unit = Shift::full(Alphabet::Cyclic(1), Axis::TwoSided);
    let p = Shift::product(vec![z4.clone(), unit]).unwrap();
    for w in [mods(&[0, 2]), mods(&[1, 2])] {
        let x = Sequence::periodic(Axis::TwoSided, w);
        let paired = x.map_letters(|a| Elem::Tuple(vec![a.clone(), Elem::Mod(0)]));
        assert_eq!(p.contains(&paired).unwrap(), z4.contains(&x).unwrap());
    }
}

#[test]
fn higher_block_of_parity() {
    let p = fixture("parity");
    let hb = p.higher_block(2).unwrap();
    let letters = ints(&[0, 1, 2, 3]);
    for a in &letters {
        for b in &letters {
            for c in &letters {
                let x = Elem::Tuple(vec![a.clone(), b.clone()]);
                let y = Elem::Tuple(vec![b.clone(), c.clone()]);
                let expected = p.in_language(&[a.clone(), b.clone(), c.clone()]);
                assert_eq!(hb.shift.allowed(&x, &y), expected);
            }
        }
    }
    let x = Sequence::periodic(Axis::TwoSided, ints(&[1, 2, 3, 4]));
    let y = hb.forward.apply(&x);
    assert!(hb.shift.contains(&y).unwrap());
    assert_eq!(hb.inverse.apply(&y), x);
    // a sequence ending on the right keeps its length
    let ray = Sequence::left_ray(ints(&[0, 1, -2, 1]), ints(&[4]), -1).unwrap();
    assert!(p.contains(&ray).unwrap());
    let y = hb.forward.apply(&ray);
    assert_eq!(y.length(), ray.length());
    assert!(hb.shift.contains(&y).unwrap());
    assert_eq!(hb.inverse.apply(&y), ray);
    assert_eq!(hb.shift.m_step(32), MStep::Exact(1));
}

#[test]
fn higher_block_of_markov_is_identity() {
    let z4 = fixture("z4_coset");
    let hb = z4.higher_block(1).unwrap();
    assert_eq!(hb.shift, z4);
    assert!(matches!(fixture("parity").higher_block(1), Err(Error::NotMStep { .. })));
}

#[test]
fn higher_block_of_z4() {
    let z4 = fixture("z4_coset");
    let hb = z4.higher_block(2).unwrap();
    let letters = z4.alphabet.enumerate(4);
    for a in &letters {
        for b in &letters {
            for c in &letters {
                let x = Elem::Tuple(vec![a.clone(), b.clone()]);
                let y = Elem::Tuple(vec![b.clone(), c.clone()]);
                if z4.allowed(a, b) {
                    assert_eq!(hb.shift.allowed(&x, &y), z4.allowed(b, c));
                }
            }
        }
    }
}

#[test]
fn no_sinks_or_sources() {
    for name in ["z4_coset", "prufer_fractal", "parity", "z2_second", "broken_closure", "identity_z2", "full_int"] {
        let s = fixture(name);
        for a in s.alphabet.enumerate(16) {
            let f = s.follower_rep(std::slice::from_ref(&a), 1).unwrap();
            assert!(s.allowed(&a, &f[0]), "{name}: {a}");
            let p = s.predecessor_rep(std::slice::from_ref(&a), 1).unwrap();
            assert!(s.allowed(&p[0], &a), "{name}: {a}");
        }
    }
}

#[test]
fn markov_follower_law() {
    let s = fixture("z4_coset");
    let (sub, rule) = s.markov_parts().unwrap();
    let g = &s.alphabet;
    for a in g.enumerate(4) {
        for b in g.enumerate(4) {
            let lhs = g.mul(&rule.class(g, sub, &a), &rule.class(g, sub, &b));
            assert_eq!(sub.canon(g, &lhs).unwrap(), rule.class(g, sub, &g.mul(&a, &b)));
        }
    }
}

#[test]
fn samples_lie_in_the_shift() {
    let mut sampler = Sampler::new(7, SampleParams::default());
    for name in ["z4_coset", "parity", "z2_second", "prufer_fractal", "broken_closure"] {
        let s = fixture(name);
        for _ in 0..20 {
            let x = sampler.member(&s);
            assert!(s.contains(&x).unwrap(), "{name}: {x}");
        }
    }
}

#[test]
fn json_round_trip() {
    for name in ["z4_coset", "parity", "broken_closure", "prufer_fractal", "union_groups"] {
        let s = fixture(name);
        let back = Shift::from_json(&s.to_json(), "").unwrap();
        assert_eq!(back, s);
    }
}
