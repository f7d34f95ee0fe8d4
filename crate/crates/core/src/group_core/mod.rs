//! Exact arithmetic for countable groups: elements, alphabets, subgroups,
//! cosets and the coset-valued homomorphisms that drive Markov presentations.

mod alphabet;
mod elem;
mod hom;
pub mod prufer;
mod subgroup;

pub use alphabet::{Alphabet, Size};
pub use elem::{word_to_string, Elem};
pub use hom::{kernel, Rule};
pub use subgroup::{coset_eq, coset_mul, quotient_group, section_of, section_table, Coset, Subgroup, SubgroupKind};

/// Checks associativity, identity and inverse laws on the first `bound`
/// enumerated elements. Returns a description of the first failure.
pub fn check_axioms(g: &Alphabet, bound: usize) -> Option<String> {
    let elems = g.enumerate(bound);
    let e = g.identity();
    for a in &elems {
        if g.mul(&e, a) != *a || g.mul(a, &e) != *a {
            return Some(format!("identity law fails at {a}"));
        }
        if g.is_group() {
            let ai = g.inv(a);
            if g.mul(a, &ai) != e || g.mul(&ai, a) != e {
                return Some(format!("inverse law fails at {a}"));
            }
        }
    }
    for a in &elems {
        for b in &elems {
            let ab = g.mul(a, b);
            for c in &elems {
                if g.mul(&ab, c) != g.mul(a, &g.mul(b, c)) {
                    return Some(format!("associativity fails at ({a}, {b}, {c})"));
                }
            }
        }
    }
    None
}

/// Checks that the enumeration prefix is injective and agrees with `rank`.
pub fn check_enumeration(g: &Alphabet, bound: usize) -> Option<String> {
    let elems = g.enumerate(bound);
    let mut seen = std::collections::BTreeSet::new();
    for (i, a) in elems.iter().enumerate() {
        if !seen.insert(a.clone()) {
            return Some(format!("{a} enumerated twice"));
        }
        if g.rank(a) != num_bigint::BigUint::from(i) {
            return Some(format!("rank of {a} is {} but it sits at {i}", g.rank(a)));
        }
    }
    if let Size::Finite(n) = g.size() {
        if (n as usize) < bound && elems.len() != n as usize {
            return Some(format!("enumeration has {} elements, expected {n}", elems.len()));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zoo() -> Vec<Alphabet> {
        let z4 = Alphabet::Cyclic(4);
        let half = Subgroup::finite(&z4, vec![Elem::Mod(0), Elem::Mod(2)]).unwrap();
        vec![
            Alphabet::Cyclic(1),
            Alphabet::Cyclic(5),
            Alphabet::Sym3,
            Alphabet::Int,
            Alphabet::IntPair,
            Alphabet::Prufer2,
            Alphabet::block(Alphabet::Cyclic(2), 3),
            Alphabet::Product(vec![Alphabet::Cyclic(2), Alphabet::Int]),
            Alphabet::quotient(z4, half),
            Alphabet::quotient(Alphabet::Int, Subgroup::int_multiples(3)),
            Alphabet::UnionCyclic { orders: Some(vec![2, 3]) },
        ]
    }

    #[test]
    fn axioms_hold_on_prefixes() {
        for g in zoo() {
            assert_eq!(check_axioms(&g, 20), None, "{}", g.describe());
        }
    }

    #[test]
    fn enumerations_are_injective_and_ranked() {
        for g in zoo() {
            assert_eq!(check_enumeration(&g, 64), None, "{}", g.describe());
        }
    }

    #[test]
    fn small_examples() {
        let z = Alphabet::Int;
        assert_eq!(z.mul(&Elem::int(3), &Elem::int(-5)), Elem::int(-2));
        assert_eq!(Alphabet::Cyclic(4).inv(&Elem::Mod(3)), Elem::Mod(1));
        assert!(Alphabet::Prufer2.decode(&serde_json::json!([2, 2])).is_err());
    }

    #[test]
    fn huge_integers_do_not_wrap() {
        let z = Alphabet::Int;
        let big = Elem::Int("123456789012345678901234567890".parse().unwrap());
        let sum = z.mul(&big, &big);
        assert_eq!(sum.to_json(), serde_json::json!("246913578024691357802469135780"));
    }

    #[test]
    fn prufer_quotient_prefix() {
        let g = Alphabet::Prufer2;
        let h = Subgroup::finite(&g, vec![g.identity(), Elem::dyadic(1, 1)]).unwrap();
        let q = quotient_group(&g, &h).unwrap();
        let first = q.enumerate(4);
        assert_eq!(first.len(), 4);
        for (i, a) in first.iter().enumerate() {
            for b in &first[i + 1..] {
                let ca = Coset { rep: a.clone(), sub: h.clone() };
                let cb = Coset { rep: b.clone(), sub: h.clone() };
                assert!(!coset_eq(&g, &ca, &cb).unwrap());
            }
            assert_eq!(section_of(&q, a).unwrap(), *a);
        }
    }

    #[test]
    fn half_is_injective_on_prefix() {
        let elems = Alphabet::Prufer2.enumerate(64);
        let images: std::collections::BTreeSet<Elem> = elems.iter().map(prufer::half).collect();
        assert_eq!(images.len(), 64);
    }
}
