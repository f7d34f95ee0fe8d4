//! Finite presentations of shift spaces with exact follower and predecessor
//! oracles.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::group_core::{word_to_string, Alphabet, Coset, Elem, Rule, Size, Subgroup};
use crate::sequence_core::{Axis, Length, Sequence};

mod classify;
mod higher;
mod sample;

pub use classify::{Classification, MStep, M_STEP_CAP};
pub use higher::HigherBlock;
pub use sample::{SampleParams, Sampler};

/// Built-in window predicates for M-step presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    /// `x_i ≡ x_{i+2} (mod 2)` over the integers.
    ZParity,
    /// Consecutive pairs share their second coordinate.
    Z2SecondCoord,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::ZParity => "z_parity",
            Predicate::Z2SecondCoord => "z2_second_coord",
        }
    }

    fn step(self) -> usize {
        match self {
            Predicate::ZParity => 2,
            Predicate::Z2SecondCoord => 1,
        }
    }

    fn alphabet(self) -> Alphabet {
        match self {
            Predicate::ZParity => Alphabet::Int,
            Predicate::Z2SecondCoord => Alphabet::IntPair,
        }
    }

    fn holds(self, w: &[Elem]) -> bool {
        match self {
            Predicate::ZParity => parity(&w[0]) == parity(&w[2]),
            Predicate::Z2SecondCoord => second(&w[0]) == second(&w[1]),
        }
    }
}

fn parity(a: &Elem) -> bool {
    a.as_int().is_some_and(|v| v.bit(0))
}

fn second(a: &Elem) -> &Elem {
    &a.as_tuple().expect("integer pair")[1]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Full,
    /// `a -> b` is allowed iff `b ∈ rule(a)·N`.
    MarkovCoset { sub: Subgroup, rule: Rule },
    PredicateMStep { m: usize, pred: Predicate },
    /// A vertex shift on the alphabet.
    EdgeGraph { succ: BTreeMap<Elem, BTreeSet<Elem>> },
    Product(Vec<Shift>),
    /// The closure of the periodic points; only membership is supported.
    PeriodicClosure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    pub alphabet: Alphabet,
    pub axis: Axis,
    pub pres: Presentation,
}

/// Exact fingerprint of a follower or predecessor set: equal keys mean equal sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    All,
    Coset(Elem),
    /// Forced parities of the first two letters.
    Parity(Option<bool>, Option<bool>),
    Second(Elem),
    Explicit(Vec<Vec<Elem>>),
    Tuple(Vec<ClassKey>),
}

impl ClassKey {
    pub fn to_json(&self) -> Value {
        match self {
            ClassKey::All => json!("all"),
            ClassKey::Coset(c) => json!({"coset": c.to_json()}),
            ClassKey::Parity(a, b) => json!({"parity": [a.map(u8::from), b.map(u8::from)]}),
            ClassKey::Second(s) => json!({"second": s.to_json()}),
            ClassKey::Explicit(ws) => json!({"words": ws.iter().map(|w| words_json(w)).collect::<Vec<_>>()}),
            ClassKey::Tuple(ks) => json!(ks.iter().map(ClassKey::to_json).collect::<Vec<_>>()),
        }
    }
}

fn words_json(w: &[Elem]) -> Value {
    Value::Array(w.iter().map(Elem::to_json).collect())
}

/// A follower or predecessor set in the most faithful form available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FollowerResult {
    ExplicitSet { elements: Vec<Vec<Elem>>, complete: bool, bound: usize },
    /// Words whose `j`-th letter ranges over the `j`-th coset.
    CosetProduct { factors: Vec<Coset> },
    /// Words `b` with `b_1 ∈ first` and `b_{j+1} ∈ rule(b_j)·N`.
    CosetChain { first: Coset, k: usize, rule: String },
}

impl FollowerResult {
    pub fn to_json(&self) -> Value {
        match self {
            FollowerResult::ExplicitSet { elements, complete, bound } => json!({
                "kind": "explicit_set",
                "elements": elements.iter().map(|w| words_json(w)).collect::<Vec<_>>(),
                "complete": complete,
                "bound": bound,
            }),
            FollowerResult::CosetProduct { factors } => json!({
                "kind": "coset_product",
                "factors": factors.iter().map(Coset::to_json).collect::<Vec<_>>(),
            }),
            FollowerResult::CosetChain { first, k, rule } => {
                json!({"kind": "coset_chain", "first": first.to_json(), "k": k, "rule": rule})
            }
        }
    }
}

fn project(word: &[Elem], j: usize) -> Vec<Elem> {
    word.iter().map(|t| t.as_tuple().expect("product letter")[j].clone()).collect()
}

fn zip_words(parts: Vec<Vec<Elem>>) -> Vec<Elem> {
    let n = parts.first().map_or(0, Vec::len);
    (0..n).map(|i| Elem::Tuple(parts.iter().map(|p| p[i].clone()).collect())).collect()
}

impl Shift {
    pub fn new(alphabet: Alphabet, axis: Axis, pres: Presentation) -> Shift {
        Shift { alphabet, axis, pres }
    }

    pub fn full(alphabet: Alphabet, axis: Axis) -> Shift {
        Shift::new(alphabet, axis, Presentation::Full)
    }

    pub fn markov(alphabet: Alphabet, axis: Axis, sub: Subgroup, rule: Rule) -> Shift {
        Shift::new(alphabet, axis, Presentation::MarkovCoset { sub, rule })
    }

    /// The window length minus one; `None` for presentations without finite memory.
    pub fn memory(&self) -> Option<usize> {
        match &self.pres {
            Presentation::Full => Some(0),
            Presentation::MarkovCoset { .. } | Presentation::EdgeGraph { .. } => Some(1),
            Presentation::PredicateMStep { m, .. } => Some(*m),
            Presentation::Product(fs) => fs.iter().map(Shift::memory).try_fold(0, |acc, m| m.map(|m| acc.max(m))),
            Presentation::PeriodicClosure => None,
        }
    }

    /// Whether a window of length `memory + 1` is allowed.
    pub fn window_ok(&self, w: &[Elem]) -> bool {
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => true,
            Presentation::MarkovCoset { sub, rule } => {
                let g = &self.alphabet;
                sub.contains(g, &g.mul(&g.inv(&rule.apply(g, &w[0])), &w[1]))
            }
            Presentation::PredicateMStep { pred, .. } => pred.holds(w),
            Presentation::EdgeGraph { succ } => succ.get(&w[0]).is_some_and(|s| s.contains(&w[1])),
            Presentation::Product(_) => self.in_language(w),
        }
    }

    pub fn allowed(&self, a: &Elem, b: &Elem) -> bool {
        self.in_language(&[a.clone(), b.clone()])
    }

    /// Exact membership of an ø-free word in the language.
    pub fn in_language(&self, word: &[Elem]) -> bool {
        match &self.pres {
            Presentation::Product(fs) => fs.iter().enumerate().all(|(j, f)| f.in_language(&project(word, j))),
            Presentation::EdgeGraph { succ } if word.len() == 1 => succ.contains_key(&word[0]),
            _ => {
                let w = self.memory().unwrap_or(0) + 1;
                word.len() < w || word.windows(w).all(|x| self.window_ok(x))
            }
        }
    }

    /// `|𝔉₁(Λ, a)|` for a word whose length is at least the memory, or any word.
    pub fn follower_count(&self, a: &[Elem]) -> Size {
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => self.alphabet.size(),
            Presentation::MarkovCoset { sub, .. } => {
                if a.is_empty() {
                    self.alphabet.size()
                } else {
                    sub.size(&self.alphabet)
                }
            }
            Presentation::PredicateMStep { .. } => Size::Infinite,
            Presentation::EdgeGraph { succ } => match a.last() {
                None => self.alphabet.size(),
                Some(x) => Size::Finite(succ.get(x).map_or(0, |s| s.len() as u64)),
            },
            Presentation::Product(fs) => {
                let counts: Vec<Size> = fs.iter().enumerate().map(|(j, f)| f.follower_count(&project(a, j))).collect();
                if counts.contains(&Size::Finite(0)) {
                    Size::Finite(0)
                } else if counts.iter().any(|c| !c.is_finite()) {
                    Size::Infinite
                } else {
                    Size::Finite(counts.iter().map(|c| c.finite().unwrap()).product())
                }
            }
        }
    }

    /// Whether the two-sided shift has infinitely many points.
    pub fn has_infinitely_many_points(&self) -> bool {
        let g = &self.alphabet;
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => g.size() != Size::Finite(1),
            Presentation::MarkovCoset { sub, .. } => !(g.size().is_finite() && sub.is_trivial(g)),
            Presentation::PredicateMStep { .. } => true,
            Presentation::EdgeGraph { succ } => succ.values().any(|s| s.len() > 1),
            Presentation::Product(fs) => fs.iter().any(Shift::has_infinitely_many_points),
        }
    }

    /// Whether `Ø` belongs to the shift.
    pub fn contains_empty(&self) -> bool {
        match self.axis {
            Axis::OneSided => !self.alphabet.size().is_finite(),
            Axis::TwoSided => self.has_infinitely_many_points(),
        }
    }

    pub fn contains(&self, x: &Sequence) -> Result<bool> {
        if x.axis() != self.axis {
            return Err(Error::MixedAxis);
        }
        x.validate(&self.alphabet).map_err(|e| Error::MixedAlphabet(e.to_string()))?;
        if x.is_empty() {
            return Ok(self.contains_empty());
        }
        match &self.pres {
            Presentation::PeriodicClosure => Ok(x.center().is_empty()
                && x.right_period().is_some()
                && (self.axis == Axis::OneSided || x.left_period() == x.right_period())),
            Presentation::Product(fs) => {
                for (j, f) in fs.iter().enumerate() {
                    let part = x.map_letters(|t| t.as_tuple().expect("product letter")[j].clone());
                    if !f.contains(&part)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => {
                let m = self.memory().unwrap_or(0);
                if m > 0 && x.blocks_of(m + 1).iter().any(|w| !self.window_ok(w)) {
                    return Ok(false);
                }
                if m > 0 && x.kind() == crate::sequence_core::SeqKind::FiniteOneSided && !self.in_language(x.center()) {
                    return Ok(false);
                }
                if let Length::Finite(end) = x.length() {
                    let lo = match self.axis {
                        Axis::OneSided => (end - m as i64 + 1).max(0),
                        Axis::TwoSided => end - m as i64 + 1,
                    };
                    let suffix: Vec<Elem> = x.slice(lo, end + 1).into_iter().flatten().collect();
                    return Ok(!self.follower_count(&suffix).is_finite());
                }
                Ok(true)
            }
        }
    }

    /// The canonical key of `𝔉ₖ(Λ, a)`.
    pub fn follower_key(&self, a: &[Elem], k: usize) -> ClassKey {
        let g = &self.alphabet;
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => ClassKey::All,
            Presentation::MarkovCoset { sub, rule } => match a.last() {
                Some(x) if sub.index_in(g) != Size::Finite(1) && k > 0 => ClassKey::Coset(rule.class(g, sub, x)),
                _ => ClassKey::All,
            },
            Presentation::PredicateMStep { pred: Predicate::ZParity, .. } => {
                let n = a.len();
                let first = (n >= 2 && k >= 1).then(|| parity(&a[n - 2]));
                let second = (n >= 1 && k >= 2).then(|| parity(&a[n - 1]));
                parity_key(first, second)
            }
            Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => match a.last() {
                Some(x) if k > 0 => ClassKey::Second(second(x).clone()),
                _ => ClassKey::All,
            },
            Presentation::EdgeGraph { .. } => self.explicit_key(a, k, true),
            Presentation::Product(fs) => {
                ClassKey::Tuple(fs.iter().enumerate().map(|(j, f)| f.follower_key(&project(a, j), k)).collect())
            }
        }
    }

    /// The canonical key of `𝔓ₖ(Λ, a)`.
    pub fn predecessor_key(&self, a: &[Elem], k: usize) -> ClassKey {
        let g = &self.alphabet;
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => ClassKey::All,
            Presentation::MarkovCoset { sub, .. } => match a.first() {
                Some(x) if sub.index_in(g) != Size::Finite(1) && k > 0 => ClassKey::Coset(sub.canon_unchecked(g, x)),
                _ => ClassKey::All,
            },
            Presentation::PredicateMStep { pred: Predicate::ZParity, .. } => {
                let n = a.len();
                let last = (n >= 2 && k >= 1).then(|| parity(&a[1]));
                let before = (n >= 1 && k >= 2).then(|| parity(&a[0]));
                parity_key(last, before)
            }
            Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => match a.first() {
                Some(x) if k > 0 => ClassKey::Second(second(x).clone()),
                _ => ClassKey::All,
            },
            Presentation::EdgeGraph { .. } => self.explicit_key(a, k, false),
            Presentation::Product(fs) => {
                ClassKey::Tuple(fs.iter().enumerate().map(|(j, f)| f.predecessor_key(&project(a, j), k)).collect())
            }
        }
    }

    fn explicit_key(&self, a: &[Elem], k: usize, forward: bool) -> ClassKey {
        let letters = self.alphabet.enumerate(usize::MAX);
        let all = self.language_exact(k, &letters);
        let set: Vec<Vec<Elem>> = all
            .iter()
            .filter(|b| {
                let w: Vec<Elem> = if forward {
                    a.iter().chain(b.iter()).cloned().collect()
                } else {
                    b.iter().chain(a.iter()).cloned().collect()
                };
                self.in_language(&w)
            })
            .cloned()
            .collect();
        if set.len() == all.len() {
            ClassKey::All
        } else {
            ClassKey::Explicit(set)
        }
    }

    /// All language words of length `n` over the given letters.
    pub fn language_exact(&self, n: usize, letters: &[Elem]) -> Vec<Vec<Elem>> {
        let mut words: Vec<Vec<Elem>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &words {
                for a in letters {
                    let mut v = w.clone();
                    v.push(a.clone());
                    if self.in_language(&v) {
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        words
    }

    /// Words of length `n` over the first `bound` letters, with a completeness flag.
    pub fn language(&self, n: usize, bound: usize) -> (Vec<Vec<Elem>>, bool) {
        let letters = self.alphabet.enumerate(bound);
        let complete = self.alphabet.size().finite().is_some_and(|s| s as usize <= bound);
        (self.language_exact(n, &letters), complete)
    }

    /// Some `b` of length `k` with `ab` in the language.
    pub fn follower_rep(&self, a: &[Elem], k: usize) -> Option<Vec<Elem>> {
        let g = &self.alphabet;
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => Some(vec![g.identity(); k]),
            Presentation::MarkovCoset { sub, rule } => {
                let mut out: Vec<Elem> = Vec::with_capacity(k);
                let mut prev = a.last().cloned();
                for _ in 0..k {
                    let next = match &prev {
                        Some(p) => rule.class(g, sub, p),
                        None => g.identity(),
                    };
                    out.push(next.clone());
                    prev = Some(next);
                }
                Some(out)
            }
            Presentation::PredicateMStep { pred: Predicate::ZParity, .. } => {
                let mut w: Vec<Option<bool>> = a.iter().map(|x| Some(parity(x))).collect();
                let n = w.len();
                for j in 0..k {
                    let forced = if n + j >= 2 { w[n + j - 2] } else { None };
                    w.push(Some(forced.unwrap_or(false)));
                }
                Some(w[n..].iter().map(|p| Elem::int(i64::from(p.unwrap_or(false)))).collect())
            }
            Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => {
                let s = a.last().map_or(Elem::int(0), |x| second(x).clone());
                Some(vec![Elem::Tuple(vec![Elem::int(0), s]); k])
            }
            Presentation::EdgeGraph { succ } => {
                let mut out = Vec::new();
                let mut prev = a.last().cloned().or_else(|| succ.keys().next().cloned());
                for _ in 0..k {
                    let next = succ.get(prev.as_ref()?)?.iter().next()?.clone();
                    out.push(next.clone());
                    prev = Some(next);
                }
                Some(out)
            }
            Presentation::Product(fs) => {
                let parts: Option<Vec<Vec<Elem>>> =
                    fs.iter().enumerate().map(|(j, f)| f.follower_rep(&project(a, j), k)).collect();
                Some(zip_words(parts?))
            }
        }
    }

    /// Some `b` of length `k` with `ba` in the language.
    pub fn predecessor_rep(&self, a: &[Elem], k: usize) -> Option<Vec<Elem>> {
        let g = &self.alphabet;
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => Some(vec![g.identity(); k]),
            Presentation::MarkovCoset { sub, rule } => {
                let mut out: Vec<Elem> = Vec::with_capacity(k);
                let mut next = a.first().cloned();
                for _ in 0..k {
                    let prev = match &next {
                        Some(x) => rule.preimage(g, sub, x, 256)?,
                        None => g.identity(),
                    };
                    out.push(prev.clone());
                    next = Some(prev);
                }
                out.reverse();
                Some(out)
            }
            Presentation::PredicateMStep { pred: Predicate::ZParity, .. } => {
                let mut w: Vec<Option<bool>> = a.iter().rev().map(|x| Some(parity(x))).collect();
                let n = w.len();
                for j in 0..k {
                    let forced = if n + j >= 2 { w[n + j - 2] } else { None };
                    w.push(Some(forced.unwrap_or(false)));
                }
                Some(w[n..].iter().rev().map(|p| Elem::int(i64::from(p.unwrap_or(false)))).collect())
            }
            Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => {
                let s = a.first().map_or(Elem::int(0), |x| second(x).clone());
                Some(vec![Elem::Tuple(vec![Elem::int(0), s]); k])
            }
            Presentation::EdgeGraph { succ } => {
                let mut out = Vec::new();
                let mut next = a.first().cloned().or_else(|| succ.keys().next().cloned());
                for _ in 0..k {
                    let target = next.clone()?;
                    let prev = succ.iter().find(|(_, s)| s.contains(&target)).map(|(v, _)| v.clone())?;
                    out.push(prev.clone());
                    next = Some(prev);
                }
                out.reverse();
                Some(out)
            }
            Presentation::Product(fs) => {
                let parts: Option<Vec<Vec<Elem>>> =
                    fs.iter().enumerate().map(|(j, f)| f.predecessor_rep(&project(a, j), k)).collect();
                Some(zip_words(parts?))
            }
        }
    }

    /// `𝔉₁(Λ, 1ⁿ)` as a subgroup of the alphabet.
    pub fn first_follower_subgroup(&self, n: usize) -> Result<Subgroup> {
        let g = &self.alphabet;
        if n == 0 {
            return Ok(Subgroup::whole());
        }
        Ok(match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => Subgroup::whole(),
            Presentation::MarkovCoset { sub, .. } => sub.clone(),
            Presentation::PredicateMStep { pred: Predicate::ZParity, .. } => {
                if n >= 2 {
                    Subgroup::int_multiples(2)
                } else {
                    Subgroup::whole()
                }
            }
            Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => Subgroup::first_axis(),
            Presentation::EdgeGraph { succ } => {
                let s = succ.get(&g.identity()).cloned().unwrap_or_default();
                if s.len() as u64 == g.size().finite().unwrap_or(0) {
                    Subgroup::whole()
                } else {
                    Subgroup::finite(g, s.into_iter().collect())?
                }
            }
            Presentation::Product(_) => {
                return Err(Error::Unsupported("follower subgroups of product presentations".into()))
            }
        })
    }

    /// The typed follower set `𝔉ₖ(Λ, a)`.
    pub fn follower_set(&self, a: &[Elem], k: usize, bound: usize) -> Result<FollowerResult> {
        self.typed_set(a, k, bound, true)
    }

    /// The typed predecessor set `𝔓ₖ(Λ, a)`.
    pub fn predecessor_set(&self, a: &[Elem], k: usize, bound: usize) -> Result<FollowerResult> {
        self.typed_set(a, k, bound, false)
    }

    fn typed_set(&self, a: &[Elem], k: usize, bound: usize, forward: bool) -> Result<FollowerResult> {
        if !self.in_language(a) {
            return Err(Error::BlockNotInLanguage(word_to_string(a)));
        }
        let g = &self.alphabet;
        match (&self.pres, forward) {
            (Presentation::MarkovCoset { sub, rule }, true) if !a.is_empty() && k >= 1 => {
                let first = Coset { rep: rule.class(g, sub, a.last().unwrap()), sub: sub.clone() };
                if k == 1 {
                    Ok(FollowerResult::CosetProduct { factors: vec![first] })
                } else {
                    Ok(FollowerResult::CosetChain { first, k, rule: rule.describe() })
                }
            }
            (Presentation::MarkovCoset { sub, rule }, false) if !a.is_empty() && k == 1 => {
                match (crate::group_core::kernel(g, sub, rule), rule.preimage(g, sub, &a[0], bound)) {
                    (Some(ker), Some(rep)) => {
                        let ker = Subgroup::finite_unchecked(g, ker);
                        let rep = ker.canon(g, &rep)?;
                        Ok(FollowerResult::CosetProduct { factors: vec![Coset { rep, sub: ker }] })
                    }
                    (Some(_), None) => Ok(FollowerResult::ExplicitSet { elements: vec![], complete: true, bound }),
                    _ => Ok(self.brute_set(a, k, bound, forward)),
                }
            }
            (Presentation::PredicateMStep { .. }, _) => {
                let rep = if forward { self.follower_rep(a, k) } else { self.predecessor_rep(a, k) };
                let rep = rep.ok_or_else(|| Error::BlockNotInLanguage(word_to_string(a)))?;
                let factors = (0..k)
                    .map(|j| {
                        let sub = self.position_subgroup(a, k, j, forward);
                        Ok(Coset { rep: sub.canon(g, &rep[j])?, sub })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FollowerResult::CosetProduct { factors })
            }
            (Presentation::Full, _) => Ok(FollowerResult::CosetProduct {
                factors: vec![Coset { rep: g.identity(), sub: Subgroup::whole() }; k],
            }),
            _ => Ok(self.brute_set(a, k, bound, forward)),
        }
    }

    /// For predicate presentations: the subgroup the `j`-th letter ranges over a coset of.
    fn position_subgroup(&self, a: &[Elem], k: usize, j: usize, forward: bool) -> Subgroup {
        match &self.pres {
            Presentation::PredicateMStep { pred: Predicate::ZParity, .. } => {
                // a letter is pinned to a parity class iff a letter two steps away exists
                let n = a.len();
                let has_partner = if forward { n + j >= 2 } else { n + (k - 1 - j) >= 2 };
                if has_partner {
                    Subgroup::int_multiples(2)
                } else {
                    Subgroup::whole()
                }
            }
            Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => {
                if a.is_empty() && j == 0 {
                    Subgroup::whole()
                } else {
                    Subgroup::first_axis()
                }
            }
            _ => Subgroup::whole(),
        }
    }

    /// Bounded enumeration over the first `bound` letters.
    pub fn brute_set(&self, a: &[Elem], k: usize, bound: usize, forward: bool) -> FollowerResult {
        let letters = self.alphabet.enumerate(bound);
        let elements = self.brute_words(a, k, &letters, forward);
        let complete = self.alphabet.size().finite().is_some_and(|s| s as usize <= bound);
        FollowerResult::ExplicitSet { elements, complete, bound }
    }

    pub fn brute_words(&self, a: &[Elem], k: usize, letters: &[Elem], forward: bool) -> Vec<Vec<Elem>> {
        let mut words: Vec<Vec<Elem>> = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::new();
            for w in &words {
                for x in letters {
                    let mut v = w.clone();
                    if forward {
                        v.push(x.clone());
                    } else {
                        v.insert(0, x.clone());
                    }
                    let full: Vec<Elem> = if forward {
                        a.iter().chain(v.iter()).cloned().collect()
                    } else {
                        v.iter().chain(a.iter()).cloned().collect()
                    };
                    if self.in_language(&full) {
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        words.sort();
        words
    }

    /// `Λ ⊠ Γ`.
    pub fn product(factors: Vec<Shift>) -> Result<Shift> {
        let axis = factors.first().map(|f| f.axis).ok_or_else(|| invalid("", "a product needs factors"))?;
        if factors.iter().any(|f| f.axis != axis) {
            return Err(Error::MixedAxis);
        }
        let alphabet = Alphabet::Product(factors.iter().map(|f| f.alphabet.clone()).collect());
        Ok(Shift::new(alphabet, axis, Presentation::Product(factors)))
    }

    pub fn describe(&self) -> String {
        let kind = match &self.pres {
            Presentation::Full => "full".to_string(),
            Presentation::MarkovCoset { sub, rule } => format!("markov_coset(N={}, f={})", sub.describe(), rule.describe()),
            Presentation::PredicateMStep { m, pred } => format!("predicate_mstep(m={m}, {})", pred.name()),
            Presentation::EdgeGraph { succ } => format!("edge_graph({} edges)", succ.values().map(BTreeSet::len).sum::<usize>()),
            Presentation::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(Shift::describe).collect();
                format!("product[{}]", parts.join(" ; "))
            }
            Presentation::PeriodicClosure => "periodic_closure".to_string(),
        };
        format!("{kind} over {} ({})", self.alphabet.describe(), self.axis.name())
    }

    pub fn to_json(&self) -> Value {
        let shift = match &self.pres {
            Presentation::Full => json!({"kind": "full"}),
            Presentation::MarkovCoset { sub, rule } => {
                json!({"kind": "markov_coset", "subgroup": sub.to_json(), "hom": rule.to_json()})
            }
            Presentation::PredicateMStep { m, pred } => json!({"kind": "predicate_mstep", "m": m, "predicate": pred.name()}),
            Presentation::EdgeGraph { succ } => {
                let edges: Vec<Value> = succ
                    .iter()
                    .flat_map(|(a, s)| s.iter().map(move |b| json!([a.to_json(), b.to_json()])))
                    .collect();
                json!({"kind": "edge_graph", "edges": edges})
            }
            Presentation::Product(fs) => json!({"kind": "product", "factors": fs.iter().map(Shift::to_json).collect::<Vec<_>>()}),
            Presentation::PeriodicClosure => json!({"kind": "periodic_closure"}),
        };
        json!({"alphabet": self.alphabet.to_json(), "axis": self.axis.name(), "shift": shift})
    }

    /// Parses `{"alphabet": …, "axis": …, "shift": …}`.
    pub fn from_json(v: &Value, pointer: &str) -> Result<Shift> {
        let axis = match v.get("axis") {
            None => Axis::TwoSided,
            Some(a) => a
                .as_str()
                .and_then(Axis::parse)
                .ok_or_else(|| invalid(format!("{pointer}/axis"), "expected \"one_sided\" or \"two_sided\""))?,
        };
        let sv = v.get("shift").ok_or_else(|| invalid(format!("{pointer}/shift"), "missing field"))?;
        let sp = format!("{pointer}/shift");
        let kind = sv
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid(&sp, "shift needs a string \"kind\""))?;
        if kind == "product" {
            let items = sv
                .get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid(format!("{sp}/factors"), "expected an array"))?;
            let mut fs = Vec::new();
            for (i, f) in items.iter().enumerate() {
                let mut f = f.clone();
                if f.get("axis").is_none() {
                    f["axis"] = json!(axis.name());
                }
                fs.push(Shift::from_json(&f, &format!("{sp}/factors/{i}"))?);
            }
            return Shift::product(fs).map_err(|e| invalid(&sp, e.to_string()));
        }
        let av = v.get("alphabet").ok_or_else(|| invalid(format!("{pointer}/alphabet"), "missing field"))?;
        let alphabet = Alphabet::from_json(av, &format!("{pointer}/alphabet"))?;
        let pres = match kind {
            "full" => Presentation::Full,
            "periodic_closure" => Presentation::PeriodicClosure,
            "markov_coset" => {
                let subv = sv.get("subgroup").ok_or_else(|| invalid(format!("{sp}/subgroup"), "missing field"))?;
                let sub = Subgroup::from_json(&alphabet, subv, &format!("{sp}/subgroup"))?;
                if !sub.normal {
                    return Err(invalid(format!("{sp}/subgroup"), "the subgroup must be normal"));
                }
                let homv = sv.get("hom").ok_or_else(|| invalid(format!("{sp}/hom"), "missing field"))?;
                let rule = Rule::from_json(&alphabet, homv, &format!("{sp}/hom"))?;
                Presentation::MarkovCoset { sub, rule }
            }
            "predicate_mstep" => {
                let name = sv.get("predicate").and_then(Value::as_str).unwrap_or_default();
                let pred = match name {
                    "z_parity" => Predicate::ZParity,
                    "z2_second_coord" => Predicate::Z2SecondCoord,
                    other => return Err(invalid(format!("{sp}/predicate"), format!("unknown predicate {other:?}"))),
                };
                if alphabet != pred.alphabet() {
                    return Err(invalid(
                        format!("{pointer}/alphabet"),
                        format!("{} needs the {} alphabet", pred.name(), pred.alphabet().describe()),
                    ));
                }
                let m = sv.get("m").and_then(Value::as_u64).map_or(pred.step(), |m| m as usize);
                if m != pred.step() {
                    return Err(invalid(format!("{sp}/m"), format!("{} is a {}-step predicate", pred.name(), pred.step())));
                }
                Presentation::PredicateMStep { m, pred }
            }
            "edge_graph" => {
                if !alphabet.size().is_finite() {
                    return Err(invalid(format!("{pointer}/alphabet"), "edge graphs need a finite alphabet"));
                }
                let items = sv
                    .get("edges")
                    .and_then(Value::as_array)
                    .ok_or_else(|| invalid(format!("{sp}/edges"), "expected an array of pairs"))?;
                let mut succ: BTreeMap<Elem, BTreeSet<Elem>> = BTreeMap::new();
                for (i, e) in items.iter().enumerate() {
                    let at = format!("{sp}/edges/{i}");
                    let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| invalid(&at, "expected a pair"))?;
                    let a = alphabet.decode(&pair[0]).map_err(|e| invalid(format!("{at}/0"), e.to_string()))?;
                    let b = alphabet.decode(&pair[1]).map_err(|e| invalid(format!("{at}/1"), e.to_string()))?;
                    succ.entry(a).or_default().insert(b);
                }
                Presentation::EdgeGraph { succ }
            }
            other => return Err(invalid(&sp, format!("unknown shift kind {other:?}"))),
        };
        Ok(Shift::new(alphabet, axis, pres))
    }

    /// Structural checks at load: homomorphism, no sinks and no sources on a prefix.
    pub fn validate(&self, bound: usize) -> Result<()> {
        let g = &self.alphabet;
        if let Presentation::MarkovCoset { sub, rule } = &self.pres {
            if let Some((a, b)) = rule.check_hom(g, sub, bound.min(32)) {
                return Err(invalid("/shift/hom", format!("not a homomorphism modulo N at ({a}, {b})")));
            }
            if !sub.contains(g, &rule.apply(g, &g.identity())) {
                return Err(invalid("/shift/hom", "f(1) must be N"));
            }
            if let Some(detail) = sub.check_closed(g, bound.min(32)) {
                return Err(invalid("/shift/subgroup", detail));
            }
        }
        if let Presentation::Product(fs) = &self.pres {
            for f in fs {
                f.validate(bound)?;
            }
            return Ok(());
        }
        for a in g.enumerate(bound.min(32)) {
            if self.follower_rep(std::slice::from_ref(&a), 1).is_none_or(|b| !self.allowed(&a, &b[0])) {
                return Err(invalid("/shift", format!("letter {a} has no follower")));
            }
            if self.predecessor_rep(std::slice::from_ref(&a), 1).is_none_or(|b| !self.allowed(&b[0], &a)) {
                return Err(invalid("/shift", format!("letter {a} has no predecessor")));
            }
        }
        Ok(())
    }

    /// A generated walk of letters following the presentation, used for DOT output.
    pub fn followers_listed(&self, a: &Elem, bound: usize) -> Vec<Elem> {
        let g = &self.alphabet;
        match &self.pres {
            Presentation::MarkovCoset { sub, rule } if sub.size(g).is_finite() => {
                let c = rule.class(g, sub, a);
                let mut out: Vec<Elem> = sub.iter(g).map(|n| g.mul(&c, &n)).collect();
                out.sort_by_key(|x| g.order_key(x));
                out
            }
            Presentation::EdgeGraph { succ } => succ.get(a).map(|s| s.iter().cloned().collect()).unwrap_or_default(),
            _ => g.enumerate(bound).into_iter().filter(|b| self.allowed(a, b)).collect(),
        }
    }

    /// Whether the subgroup `N` of a Markov presentation is of a kind we can list.
    pub fn markov_parts(&self) -> Option<(&Subgroup, &Rule)> {
        match &self.pres {
            Presentation::MarkovCoset { sub, rule } => Some((sub, rule)),
            _ => None,
        }
    }

    /// The same shift written as a Markov coset presentation, when it is one.
    pub fn as_markov(&self) -> Option<Shift> {
        match &self.pres {
            Presentation::MarkovCoset { .. } => Some(self.clone()),
            Presentation::Full => Some(Shift::markov(self.alphabet.clone(), self.axis, Subgroup::whole(), Rule::Constant)),
            Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => {
                Some(Shift::markov(self.alphabet.clone(), self.axis, Subgroup::first_axis(), Rule::Identity))
            }
            _ => None,
        }
    }
}

fn parity_key(a: Option<bool>, b: Option<bool>) -> ClassKey {
    if a.is_none() && b.is_none() {
        ClassKey::All
    } else {
        ClassKey::Parity(a, b)
    }
}

#[cfg(test)]
mod tests;
