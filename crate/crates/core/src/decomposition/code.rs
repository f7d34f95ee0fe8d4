use std::fmt;
use std::sync::Arc;

use crate::group_core::Elem;
use crate::sequence_core::{Axis, Sequence};

type LocalRule = Arc<dyn Fn(&[Option<Elem>]) -> Option<Elem> + Send + Sync>;

/// A map `x ↦ (Φ(x_{i-K} .. x_{i+L}))_i` with `ø` handled by the local rule.
#[derive(Clone)]
pub struct SlidingBlockCode {
    pub name: String,
    pub memory: usize,
    pub anticipation: usize,
    rule: LocalRule,
}

impl fmt::Debug for SlidingBlockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SlidingBlockCode")
            .field("name", &self.name)
            .field("memory", &self.memory)
            .field("anticipation", &self.anticipation)
            .finish()
    }
}

impl SlidingBlockCode {
    pub fn new(
        name: impl Into<String>,
        memory: usize,
        anticipation: usize,
        rule: impl Fn(&[Option<Elem>]) -> Option<Elem> + Send + Sync + 'static,
    ) -> SlidingBlockCode {
        SlidingBlockCode { name: name.into(), memory, anticipation, rule: Arc::new(rule) }
    }

    /// A 1-block code; `ø` goes to `ø`.
    pub fn one_block(name: impl Into<String>, f: impl Fn(&Elem) -> Elem + Send + Sync + 'static) -> SlidingBlockCode {
        SlidingBlockCode::new(name, 0, 0, move |w| w[0].as_ref().map(&f))
    }

    pub fn identity() -> SlidingBlockCode {
        SlidingBlockCode::one_block("id", Elem::clone)
    }

    pub fn local(&self, window: &[Option<Elem>]) -> Option<Elem> {
        (self.rule)(window)
    }

    pub fn apply(&self, x: &Sequence) -> Sequence {
        self.apply_to_axis(x, x.axis())
    }

    pub fn apply_to_axis(&self, x: &Sequence, axis: Axis) -> Sequence {
        let rule = &self.rule;
        x.sliding_map(axis, self.memory, self.anticipation, |w| rule(w))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SlidingBlockCode) -> SlidingBlockCode {
        let (m1, a1) = (self.memory, self.anticipation);
        let (m2, a2) = (next.memory, next.anticipation);
        let first = self.rule.clone();
        let second = next.rule.clone();
        let rule = move |w: &[Option<Elem>]| {
            // w covers offsets -(m1+m2) ..= a1+a2; the inner code is evaluated
            // at offsets -m2 ..= a2
            let mid: Vec<Option<Elem>> = (0..=m2 + a2).map(|j| first(&w[j..j + m1 + a1 + 1])).collect();
            second(&mid)
        };
        SlidingBlockCode::new(format!("{} ; {}", self.name, next.name), m1 + m2, a1 + a2, rule)
    }

    pub fn chain(codes: &[SlidingBlockCode]) -> SlidingBlockCode {
        codes.iter().skip(1).fold(codes.first().cloned().unwrap_or_else(SlidingBlockCode::identity), |acc, c| acc.then(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u64]) -> Vec<Elem> {
        v.iter().map(|&x| Elem::Mod(x)).collect()
    }

    fn add(n: u64) -> SlidingBlockCode {
        SlidingBlockCode::one_block("add", move |a| match a {
            Elem::Mod(x) => Elem::Mod((x + n) % 5),
            _ => unreachable!(),
        })
    }

    fn diff() -> SlidingBlockCode {
        SlidingBlockCode::new("diff", 1, 0, |w| match (&w[0], &w[1]) {
            (Some(Elem::Mod(a)), Some(Elem::Mod(b))) => Some(Elem::Mod((b + 5 - a) % 5)),
            _ => None,
        })
    }

    #[test]
    fn composition_matches_sequential_application() {
        let x = Sequence::bi_infinite(m(&[1, 2]), m(&[0, 4, 4]), m(&[3]), -1).unwrap();
        for (f, g) in [(add(2), diff()), (diff(), add(1)), (diff(), diff())] {
            let direct = g.apply(&f.apply(&x));
            assert_eq!(f.then(&g).apply(&x), direct);
        }
        let c = diff().then(&diff());
        assert_eq!((c.memory, c.anticipation), (2, 0));
    }

    #[test]
    fn codes_commute_with_the_shift() {
        let x = Sequence::left_ray(m(&[0, 1, 3]), m(&[2, 2]), 2).unwrap();
        let d = diff();
        assert_eq!(d.apply(&x.shift()), d.apply(&x).shift());
    }
}
