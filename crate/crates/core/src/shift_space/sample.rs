//! Seeded sampling of eventually periodic sequences, either over the ambient
//! alphabet or along allowed walks of a presentation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Presentation, Shift};
use crate::group_core::{Alphabet, Elem};
use crate::sequence_core::{Axis, Sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleParams {
    pub max_transient: usize,
    pub max_period: usize,
    /// Letters are drawn from this many enumerated elements.
    pub letter_pool: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams { max_transient: 4, max_period: 6, letter_pool: 8 }
    }
}

/// Walks longer than this without revisiting a state give up on finding a cycle.
const WALK_CAP: usize = 32;

pub struct Sampler {
    rng: ChaCha8Rng,
    pub params: SampleParams,
}

impl Sampler {
    pub fn new(seed: u64, params: SampleParams) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), params }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn letter(&mut self, g: &Alphabet) -> Elem {
        let pool = g.enumerate(self.params.letter_pool.max(1));
        pool.choose(&mut self.rng).expect("alphabets are nonempty").clone()
    }

    fn word(&mut self, g: &Alphabet, len: usize) -> Vec<Elem> {
        let pool = g.enumerate(self.params.letter_pool.max(1));
        (0..len).map(|_| pool.choose(&mut self.rng).unwrap().clone()).collect()
    }

    /// An arbitrary eventually periodic sequence over the letter pool.
    pub fn ambient(&mut self, g: &Alphabet, axis: Axis) -> Sequence {
        let p = self.params;
        let roll = self.rng.gen_range(0..8);
        let t = self.rng.gen_range(0..=p.max_transient);
        if roll == 0 {
            return Sequence::empty(axis);
        }
        match (axis, roll <= 3) {
            (Axis::OneSided, true) => Sequence::finite(self.word(g, t + 1)),
            (Axis::OneSided, false) => {
                let q = self.rng.gen_range(1..=p.max_period);
                Sequence::eventually_periodic(self.word(g, t), self.word(g, q)).expect("nonempty period")
            }
            (Axis::TwoSided, true) => {
                let l = self.rng.gen_range(1..=p.max_period);
                let end = self.rng.gen_range(-3..=3);
                Sequence::left_ray(self.word(g, l), self.word(g, t), end).expect("nonempty period")
            }
            (Axis::TwoSided, false) => {
                let l = self.rng.gen_range(1..=p.max_period);
                let r = self.rng.gen_range(1..=p.max_period);
                let base = self.rng.gen_range(-3..=3);
                Sequence::bi_infinite(self.word(g, l), self.word(g, t), self.word(g, r), base).expect("nonempty periods")
            }
        }
    }

    /// A random `b` with `context·b` allowed.
    pub fn follower(&mut self, shift: &Shift, context: &[Elem]) -> Option<Elem> {
        let g = &shift.alphabet;
        let candidates: Vec<Elem> = match (&shift.pres, context.last()) {
            (Presentation::MarkovCoset { sub, rule }, Some(a)) => {
                let c = rule.class(g, sub, a);
                sub.iter(g).take(self.params.letter_pool).map(|n| g.mul(&c, &n)).collect()
            }
            (Presentation::EdgeGraph { .. }, Some(a)) => shift.followers_listed(a, 0),
            _ => g
                .enumerate(self.params.letter_pool)
                .into_iter()
                .filter(|b| {
                    let mut w = context.to_vec();
                    w.push(b.clone());
                    shift.in_language(&w)
                })
                .collect(),
        };
        match candidates.choose(&mut self.rng) {
            Some(b) => Some(b.clone()),
            None => shift.follower_rep(context, 1).map(|mut v| v.remove(0)),
        }
    }

    fn state_len(shift: &Shift) -> usize {
        shift.memory().unwrap_or(1).max(1)
    }

    /// Extends `context` by `len` random allowed letters.
    pub fn walk(&mut self, shift: &Shift, context: &[Elem], len: usize) -> Option<Vec<Elem>> {
        let m = Self::state_len(shift);
        let mut all = context.to_vec();
        for _ in 0..len {
            let tail = &all[all.len().saturating_sub(m)..];
            let b = self.follower(shift, tail)?;
            all.push(b);
        }
        Some(all[context.len()..].to_vec())
    }

    /// Walks from `context` until the state repeats. Returns the letters before
    /// the cycle and the cycle itself.
    pub fn cycle(&mut self, shift: &Shift, context: &[Elem]) -> Option<(Vec<Elem>, Vec<Elem>)> {
        let m = Self::state_len(shift);
        let mut all = context.to_vec();
        let mut seen: Vec<Vec<Elem>> = Vec::new();
        for _ in 0..WALK_CAP {
            let b = self.follower(shift, &all[all.len().saturating_sub(m)..])?;
            all.push(b);
            let walked = all.len() - context.len();
            let state = all[all.len().saturating_sub(m)..].to_vec();
            if walked >= m {
                if let Some(i) = seen.iter().position(|s| *s == state) {
                    let letters = &all[context.len()..];
                    let start = i + 1;
                    return Some((letters[..start].to_vec(), letters[start..].to_vec()));
                }
                seen.push(state);
            } else {
                seen.push(Vec::new());
            }
        }
        None
    }

    /// A periodic word that can be repeated forever inside the shift.
    fn left_cycle(&mut self, shift: &Shift) -> Vec<Elem> {
        let g = &shift.alphabet;
        let start = self.letter(g);
        if let Some((_, c)) = self.cycle(shift, &[start]) {
            if !c.is_empty() {
                return c;
            }
        }
        vec![g.identity()]
    }

    fn context_of(cycle: &[Elem], m: usize) -> Vec<Elem> {
        let mut ctx = Vec::new();
        while ctx.len() < m {
            ctx.extend_from_slice(cycle);
        }
        ctx
    }

    /// `…C C C w` followed by `ø` at the end, with `w` an allowed walk.
    pub fn walk_ray(&mut self, shift: &Shift, len: usize) -> Option<Sequence> {
        let m = Self::state_len(shift);
        let c = self.left_cycle(shift);
        let w = self.walk(shift, &Self::context_of(&c, m), len)?;
        let end = self.rng.gen_range(-3..=3);
        Sequence::left_ray(c, w, end).ok()
    }

    /// A sequence built only from allowed walks; finite ones need not lie in
    /// the shift when followers are finite.
    pub fn walk_sequence(&mut self, shift: &Shift) -> Option<Sequence> {
        let p = self.params;
        let axis = shift.axis;
        let m = Self::state_len(shift);
        let t = self.rng.gen_range(0..=p.max_transient);
        let roll = self.rng.gen_range(0..8);
        if roll == 0 {
            return Some(Sequence::empty(axis));
        }
        let finite = roll <= 3;
        match axis {
            Axis::OneSided => {
                let a = self.letter(&shift.alphabet);
                let rest = self.walk(shift, std::slice::from_ref(&a), t)?;
                let mut word = vec![a];
                word.extend(rest);
                if finite {
                    return Some(Sequence::finite(word));
                }
                let ctx = word[word.len().saturating_sub(m)..].to_vec();
                let (pre, cyc) = self.cycle(shift, &ctx)?;
                word.extend(pre);
                Sequence::eventually_periodic(word, cyc).ok()
            }
            Axis::TwoSided => {
                if finite {
                    return self.walk_ray(shift, t);
                }
                let c = self.left_cycle(shift);
                let ctx = Self::context_of(&c, m);
                let mut center = self.walk(shift, &ctx, t)?;
                let mut full = ctx.clone();
                full.extend(center.iter().cloned());
                let (pre, cyc) = self.cycle(shift, &full[full.len() - m..])?;
                center.extend(pre);
                let base = self.rng.gen_range(-3..=3);
                Sequence::bi_infinite(c, center, cyc, base).ok()
            }
        }
    }

    /// A sequence that belongs to the shift. Falls back to `e^∞`.
    pub fn member(&mut self, shift: &Shift) -> Sequence {
        for _ in 0..16 {
            if let Some(x) = self.walk_sequence(shift) {
                if shift.contains(&x).unwrap_or(false) {
                    return x;
                }
            }
        }
        Sequence::constant(shift.axis, shift.alphabet.identity())
    }
}
