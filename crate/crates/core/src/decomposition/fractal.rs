use serde_json::{json, Value};

use super::{compute_h, follower_set_shift, parts, CHECK_LETTERS};
use crate::error::{Error, Result};
use crate::group_core::{prufer, Alphabet, Elem, Size, SubgroupKind};
use crate::shift_space::Shift;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fractality {
    /// `N` is trivial at `stage`, so every later follower-set shift is the same shift.
    Fractal { stage: usize },
    /// `Λ̄^{[n]}` is isomorphic to `Λ̄^{[n-1]}` through `map`, verified to the letter bound.
    SelfSimilarAtLevel { level: usize, map: String },
    NonFractal { stage: usize, h_order: Size },
}

impl Fractality {
    pub fn is_fractal(&self) -> bool {
        !matches!(self, Fractality::NonFractal { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Fractality::Fractal { stage } => json!({"kind": "fractal", "stable_from_stage": stage}),
            Fractality::SelfSimilarAtLevel { level, map } => {
                json!({"kind": "self_similar", "level": level, "isomorphism": map})
            }
            Fractality::NonFractal { stage, h_order } => json!({
                "kind": "non_fractal",
                "stage": stage,
                "h_order": match h_order { Size::Finite(k) => json!(k), Size::Infinite => json!("infinite") },
            }),
        }
    }
}

/// Iterates follower-set shifts up to `depth` stages, checking `ℋ^{[n]}` at each.
pub fn is_fractal(p: &Shift, depth: usize) -> Result<Fractality> {
    let mut cur = p.clone();
    for stage in 0..=depth {
        let (n, _) = parts(&cur)?;
        let g = &cur.alphabet;
        let h = compute_h(&cur)?;
        if !h.is_trivial(g) {
            return Ok(Fractality::NonFractal { stage, h_order: h.size(g) });
        }
        if n.is_trivial(g) {
            return Ok(Fractality::Fractal { stage });
        }
        if stage == depth {
            break;
        }
        let next = follower_set_shift(&cur)?;
        if let Some(map) = isomorphic(&next, &cur) {
            return Ok(Fractality::SelfSimilarAtLevel { level: stage + 1, map });
        }
        cur = next;
    }
    Err(Error::DepthExhausted(depth))
}

type Map = Box<dyn Fn(&Elem) -> Elem>;

/// A known isomorphism from `next` onto `prev`, checked on the first letters.
fn isomorphic(next: &Shift, prev: &Shift) -> Option<String> {
    let (name, to, from) = candidate(next, prev)?;
    verify(next, prev, &to, &from).then_some(name)
}

fn candidate(next: &Shift, prev: &Shift) -> Option<(String, Map, Map)> {
    let Alphabet::Quotient { base, sub } = &next.alphabet else { return None };
    if **base != prev.alphabet {
        return None;
    }
    if sub.is_trivial(base) {
        return Some(("identity".into(), Box::new(Elem::clone), Box::new(Elem::clone)));
    }
    // the Prüfer group modulo its 2^j-torsion is again the Prüfer group, via doubling j times
    if **base == Alphabet::Prufer2 {
        let SubgroupKind::Finite(elems) = &sub.kind else { return None };
        let order = elems.len() as u64;
        if !order.is_power_of_two() || !elems.iter().all(|e| Alphabet::Prufer2.pow(e, order) == prufer::identity()) {
            return None;
        }
        let j = order.trailing_zeros();
        let s = (**sub).clone();
        let to: Map = Box::new(move |c| Alphabet::Prufer2.pow(c, order));
        let from: Map = Box::new(move |c| {
            let x = (0..j).fold(c.clone(), |acc, _| prufer::half(&acc));
            s.canon_unchecked(&Alphabet::Prufer2, &x)
        });
        return Some((format!("multiplication by {order}"), to, from));
    }
    None
}

fn verify(next: &Shift, prev: &Shift, to: &Map, from: &Map) -> bool {
    let (gn, gp) = (&next.alphabet, &prev.alphabet);
    let letters = gn.enumerate(CHECK_LETTERS);
    let images: Vec<Elem> = letters.iter().map(to).collect();
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != images.len() {
        return false;
    }
    let small = letters.len().min(16);
    for i in 0..small {
        for j in 0..small {
            if to(&gn.mul(&letters[i], &letters[j])) != gp.mul(&images[i], &images[j]) {
                return false;
            }
            if next.allowed(&letters[i], &letters[j]) != prev.allowed(&images[i], &images[j]) {
                return false;
            }
        }
    }
    for (a, fa) in letters.iter().zip(&images).take(small) {
        let mut mapped: Vec<Elem> = next.followers_listed(a, CHECK_LETTERS).iter().map(to).collect();
        let mut direct = prev.followers_listed(fa, CHECK_LETTERS);
        mapped.sort();
        direct.sort();
        if mapped != direct {
            return false;
        }
    }
    // onto the first letters of the previous stage
    gp.enumerate(CHECK_LETTERS).iter().all(|c| to(&from(c)) == *c && gn.validate(&from(c)).is_ok())
}
