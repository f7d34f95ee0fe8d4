use proptest::collection::vec;
use proptest::prelude::*;

use shiftforge_core::block_ops::OneBlockOp;
use shiftforge_core::cli_io::{fixture, run, Command, RunConfig};
use shiftforge_core::coset_structure::coset_law_check;
use shiftforge_core::group_core::{prufer, Alphabet, Elem};
use shiftforge_core::isg_embedding::{verify_chain_hypotheses, AbstractInverseMonoid, ChainEmbedding};
use shiftforge_core::sequence_core::{Axis, Sequence};

fn z4() -> impl Strategy<Value = Elem> {
    (0u64..4).prop_map(Elem::Mod)
}

fn one_sided() -> impl Strategy<Value = Sequence> {
    (vec(z4(), 0..4), prop::option::of(vec(z4(), 1..4))).prop_map(|(t, p)| match p {
        Some(p) => Sequence::eventually_periodic(t, p).unwrap(),
        None if t.is_empty() => Sequence::empty(Axis::OneSided),
        None => Sequence::finite(t),
    })
}

fn two_sided() -> impl Strategy<Value = Sequence> {
    (vec(z4(), 1..3), vec(z4(), 0..4), prop::option::of(vec(z4(), 1..3)), -3i64..3, any::<bool>()).prop_map(
        |(l, c, r, base, empty)| match r {
            _ if empty => Sequence::empty(Axis::TwoSided),
            Some(r) => Sequence::bi_infinite(l, c, r, base).unwrap(),
            None => Sequence::left_ray(l, c, base).unwrap(),
        },
    )
}

fn prufer_letter() -> impl Strategy<Value = Elem> {
    (0u64..200).prop_map(prufer::unrank)
}

fn check_inverse_semigroup(x: &Sequence, y: &Sequence, z: &Sequence) -> Result<(), TestCaseError> {
    let op = OneBlockOp::new(Alphabet::Cyclic(4));
    let m = |a: &Sequence, b: &Sequence| op.apply(a, b).unwrap();
    prop_assert_eq!(m(&m(x, y), z), m(x, &m(y, z)));
    let xs = op.star(x);
    prop_assert_eq!(m(&m(x, &xs), x), x.clone());
    prop_assert_eq!(m(&m(&xs, x), &xs), xs.clone());
    let (e, f) = (m(x, &xs), m(&op.star(y), y));
    prop_assert_eq!(m(&e, &f), m(&f, &e));
    prop_assert_eq!(m(x, y).shift(), m(&x.shift(), &y.shift()));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn one_sided_z4_is_an_inverse_semigroup(x in one_sided(), y in one_sided(), z in one_sided()) {
        check_inverse_semigroup(&x, &y, &z)?;
    }

    #[test]
    fn two_sided_z4_is_an_inverse_semigroup(x in two_sided(), y in two_sided(), z in two_sided()) {
        check_inverse_semigroup(&x, &y, &z)?;
    }

    #[test]
    fn length_of_a_product_is_the_least_length(x in one_sided(), y in one_sided()) {
        let op = OneBlockOp::new(Alphabet::Cyclic(4));
        prop_assert_eq!(op.apply(&x, &y).unwrap().length(), x.length().min(y.length()));
    }

    #[test]
    fn prufer_group_laws(a in prufer_letter(), b in prufer_letter(), c in prufer_letter()) {
        let g = Alphabet::Prufer2;
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
        prop_assert_eq!(g.mul(&a, &b), g.mul(&b, &a));
        prop_assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
        prop_assert_eq!(prufer::double(&prufer::half(&a)), a.clone());
        let Elem::Dyadic { level, .. } = &a else { unreachable!() };
        prop_assert_eq!(g.pow(&a, 1u64 << level), g.identity());
    }

    #[test]
    fn prufer_letters_round_trip_through_json(a in prufer_letter()) {
        prop_assert_eq!(Alphabet::Prufer2.decode(&a.to_json()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn truncated_monoids_embed(m in 1u64..4, len in 1usize..4) {
        let s = AbstractInverseMonoid::truncated_sequences(m, len).unwrap();
        let expected: u64 = (0..=len as u32).map(|i| m.pow(i)).sum();
        prop_assert_eq!(s.len() as u64, expected);
        let h = verify_chain_hypotheses(&s);
        prop_assert!(h.passed(), "{:?}", h.first_failure());
        let emb = ChainEmbedding::new(&s).unwrap();
        prop_assert_eq!(emb.group.order() as u64, m);
        let r = emb.verify().unwrap();
        prop_assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn parity_coset_law_on_random_blocks(a in vec(-3i64..4, 1..3), k in 1usize..3) {
        let s = fixture("parity");
        let block: Vec<Elem> = a.into_iter().map(|v| Elem::Int(v.into())).collect();
        prop_assume!(s.in_language(&block));
        coset_law_check(&s, &block, k, 16).unwrap();
    }

    #[test]
    fn reports_repeat_for_any_seed(seed in any::<u64>()) {
        let mut cfg = RunConfig::new(Command::OpCheck).with_spec("prufer_fractal");
        cfg.seed = seed;
        cfg.samples = 20;
        prop_assert_eq!(run(&cfg).report_text(), run(&cfg).report_text());
    }
}
