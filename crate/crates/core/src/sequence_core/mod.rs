//! Eventually periodic sequences over `A ∪ {ø}` on either axis.
//!
//! A sequence is stored as a left period, a center and a right period. Periods
//! are anchored at absolute indices: the left region reads `L[i mod p]` and the
//! right region reads `R[i mod q]`. A missing right period means the sequence
//! is `ø` after the center.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group_core::{word_to_string, Alphabet, Elem};

mod cylinder;

pub use cylinder::Cylinder;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    OneSided,
    TwoSided,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::OneSided => "one_sided",
            Axis::TwoSided => "two_sided",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        match s {
            "one_sided" => Some(Axis::OneSided),
            "two_sided" => Some(Axis::TwoSided),
            _ => None,
        }
    }
}

/// `ℓ(x)`: the last index holding a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    NegInf,
    Finite(i64),
    PosInf,
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::NegInf => write!(f, "-inf"),
            Length::Finite(n) => write!(f, "{n}"),
            Length::PosInf => write!(f, "+inf"),
        }
    }
}

impl Length {
    pub fn to_json(self) -> Value {
        match self {
            Length::Finite(n) => json!(n),
            other => json!(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Empty,
    Body { left: Option<Vec<Elem>>, start: i64, center: Vec<Elem>, right: Option<Vec<Elem>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    axis: Axis,
    repr: Repr,
}

/// The variant view used for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqKind {
    Empty,
    FiniteOneSided,
    LeftRay,
    InfiniteOneSided,
    BiInfinite,
}

fn at(period: &[Elem], i: i64) -> &Elem {
    &period[i.rem_euclid(period.len() as i64) as usize]
}

fn primitive(mut w: Vec<Elem>) -> Vec<Elem> {
    let n = w.len();
    for d in 1..n {
        if n % d == 0 && (d..n).all(|j| w[j] == w[j - d]) {
            w.truncate(d);
            return w;
        }
    }
    w
}

/// Reindexes a period written from `offset` onwards into absolute anchoring.
fn anchor(rel: &[Elem], offset: i64) -> Vec<Elem> {
    let p = rel.len() as i64;
    (0..p).map(|j| rel[(j - offset).rem_euclid(p) as usize].clone()).collect()
}

fn rotate(abs: &[Elem], k: i64) -> Vec<Elem> {
    anchor(abs, -k)
}

impl Sequence {
    pub fn empty(axis: Axis) -> Sequence {
        Sequence { axis, repr: Repr::Empty }
    }

    /// `x_0 .. x_k` followed by `ø`.
    pub fn finite(word: Vec<Elem>) -> Sequence {
        Sequence::raw(Axis::OneSided, None, 0, word, None)
    }

    pub fn eventually_periodic(transient: Vec<Elem>, period: Vec<Elem>) -> Result<Sequence> {
        if period.is_empty() {
            return Err(Error::MalformedSequence("period must be nonempty".into()));
        }
        let right = anchor(&period, transient.len() as i64);
        Ok(Sequence::raw(Axis::OneSided, None, 0, transient, Some(right)))
    }

    /// A two-sided finite sequence: letters up to `end_index`, `ø` afterwards.
    pub fn left_ray(left_period: Vec<Elem>, left_transient: Vec<Elem>, end_index: i64) -> Result<Sequence> {
        if left_period.is_empty() {
            return Err(Error::MalformedSequence("left period must be nonempty".into()));
        }
        let start = end_index - left_transient.len() as i64 + 1;
        let left = anchor(&left_period, start - left_period.len() as i64);
        Ok(Sequence::raw(Axis::TwoSided, Some(left), start, left_transient, None))
    }

    pub fn bi_infinite(
        left_period: Vec<Elem>,
        center: Vec<Elem>,
        right_period: Vec<Elem>,
        base_index: i64,
    ) -> Result<Sequence> {
        if left_period.is_empty() || right_period.is_empty() {
            return Err(Error::MalformedSequence("periods must be nonempty".into()));
        }
        let left = anchor(&left_period, base_index - left_period.len() as i64);
        let right = anchor(&right_period, base_index + center.len() as i64);
        Ok(Sequence::raw(Axis::TwoSided, Some(left), base_index, center, Some(right)))
    }

    /// The purely periodic sequence with `x_i = period[i mod p]`.
    pub fn periodic(axis: Axis, period: Vec<Elem>) -> Sequence {
        assert!(!period.is_empty(), "period must be nonempty");
        match axis {
            Axis::OneSided => Sequence::raw(axis, None, 0, Vec::new(), Some(period)),
            Axis::TwoSided => Sequence::raw(axis, Some(period.clone()), 0, Vec::new(), Some(period)),
        }
    }

    pub fn constant(axis: Axis, a: Elem) -> Sequence {
        Sequence::periodic(axis, vec![a])
    }

    /// `e^n`: the identity up to index `n`, `ø` afterwards.
    pub fn identity_word(g: &Alphabet, axis: Axis, n: Length) -> Sequence {
        let e = g.identity();
        match (n, axis) {
            (Length::NegInf, _) => Sequence::empty(axis),
            (Length::PosInf, _) => Sequence::constant(axis, e),
            (Length::Finite(k), Axis::OneSided) => {
                if k < 0 {
                    Sequence::empty(axis)
                } else {
                    Sequence::finite(vec![e; k as usize + 1])
                }
            }
            (Length::Finite(k), Axis::TwoSided) => Sequence::raw(axis, Some(vec![e]), k + 1, Vec::new(), None),
        }
    }

    /// Builds and normalizes. Periods use absolute anchoring.
    pub(crate) fn raw(
        axis: Axis,
        left: Option<Vec<Elem>>,
        start: i64,
        center: Vec<Elem>,
        right: Option<Vec<Elem>>,
    ) -> Sequence {
        let (left, mut start) = match axis {
            Axis::OneSided => (None, 0),
            Axis::TwoSided => (Some(primitive(left.expect("two-sided sequences have a left tail"))), start),
        };
        let right = right.map(primitive);
        if axis == Axis::OneSided && center.is_empty() && right.is_none() {
            return Sequence::empty(axis);
        }
        if let (Some(l), Some(r)) = (&left, &right) {
            if l == r && center.iter().enumerate().all(|(j, c)| c == at(l, start + j as i64)) {
                return Sequence { axis, repr: Repr::Body { left, start: 0, center: Vec::new(), right } };
            }
        }
        let mut front = 0;
        if let Some(l) = &left {
            loop {
                if front < center.len() {
                    if center[front] != *at(l, start) {
                        break;
                    }
                    front += 1;
                    start += 1;
                } else if let Some(r) = &right {
                    if at(r, start) != at(l, start) {
                        break;
                    }
                    start += 1;
                } else {
                    break;
                }
            }
        }
        let mut center = if front <= center.len() { center[front..].to_vec() } else { Vec::new() };
        if let Some(r) = &right {
            while let Some(last) = center.last() {
                if last != at(r, start + center.len() as i64 - 1) {
                    break;
                }
                center.pop();
            }
        }
        Sequence { axis, repr: Repr::Body { left, start, center, right } }
    }

    /// Generic constructor from an entry function that is left-periodic with
    /// period `p` below `lo` and right-periodic with period `q` (or `ø`) from `hi`.
    pub(crate) fn build(
        axis: Axis,
        lo: i64,
        hi: i64,
        p: usize,
        q: usize,
        f: impl Fn(i64) -> Option<Elem>,
    ) -> Sequence {
        let lo = if axis == Axis::OneSided { 0 } else { lo };
        let hi = hi.max(lo);
        let left = match axis {
            Axis::OneSided => None,
            Axis::TwoSided => {
                let mut l = vec![None; p];
                for i in lo - p as i64..lo {
                    l[i.rem_euclid(p as i64) as usize] = f(i);
                }
                match l.into_iter().collect::<Option<Vec<Elem>>>() {
                    Some(l) => Some(l),
                    None => return Sequence::empty(axis),
                }
            }
        };
        let mut center = Vec::new();
        for i in lo..hi {
            match f(i) {
                Some(a) => center.push(a),
                None => return Sequence::raw(axis, left, lo, center, None),
            }
        }
        let right = if f(hi).is_none() {
            None
        } else {
            let mut r = vec![None; q];
            for i in hi..hi + q as i64 {
                r[i.rem_euclid(q as i64) as usize] = f(i);
            }
            match r.into_iter().collect::<Option<Vec<Elem>>>() {
                Some(r) => Some(r),
                None => {
                    let mut i = hi;
                    while let Some(a) = f(i) {
                        center.push(a);
                        i += 1;
                    }
                    None
                }
            }
        };
        Sequence::raw(axis, left, lo, center, right)
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn is_empty(&self) -> bool {
        self.repr == Repr::Empty
    }

    pub fn kind(&self) -> SeqKind {
        match (&self.repr, self.axis) {
            (Repr::Empty, _) => SeqKind::Empty,
            (Repr::Body { right: None, .. }, Axis::OneSided) => SeqKind::FiniteOneSided,
            (Repr::Body { right: None, .. }, Axis::TwoSided) => SeqKind::LeftRay,
            (Repr::Body { .. }, Axis::OneSided) => SeqKind::InfiniteOneSided,
            (Repr::Body { .. }, Axis::TwoSided) => SeqKind::BiInfinite,
        }
    }

    pub fn length(&self) -> Length {
        match &self.repr {
            Repr::Empty => Length::NegInf,
            Repr::Body { right: Some(_), .. } => Length::PosInf,
            Repr::Body { start, center, .. } => Length::Finite(start + center.len() as i64 - 1),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.length() == Length::PosInf
    }

    /// Index range `[lo, hi)` of the center.
    pub fn window(&self) -> (i64, i64) {
        match &self.repr {
            Repr::Empty => (0, 0),
            Repr::Body { start, center, .. } => (*start, start + center.len() as i64),
        }
    }

    pub fn left_period(&self) -> Option<&[Elem]> {
        match &self.repr {
            Repr::Body { left: Some(l), .. } => Some(l),
            _ => None,
        }
    }

    pub fn right_period(&self) -> Option<&[Elem]> {
        match &self.repr {
            Repr::Body { right: Some(r), .. } => Some(r),
            _ => None,
        }
    }

    pub fn center(&self) -> &[Elem] {
        match &self.repr {
            Repr::Body { center, .. } => center,
            Repr::Empty => &[],
        }
    }

    pub fn left_len(&self) -> usize {
        self.left_period().map_or(1, <[Elem]>::len)
    }

    pub fn right_len(&self) -> usize {
        self.right_period().map_or(1, <[Elem]>::len)
    }

    /// The letter at `i`, `None` for `ø`.
    pub fn entry(&self, i: i64) -> Option<Elem> {
        match &self.repr {
            Repr::Empty => None,
            Repr::Body { left, start, center, right } => {
                if i < *start {
                    return left.as_ref().map(|l| at(l, i).clone());
                }
                let off = (i - start) as usize;
                if off < center.len() {
                    return Some(center[off].clone());
                }
                right.as_ref().map(|r| at(r, i).clone())
            }
        }
    }

    pub fn entry_at(&self, i: i64) -> Result<Option<Elem>> {
        if self.axis == Axis::OneSided && i < 0 {
            return Err(Error::IndexOutsideAxis(i));
        }
        Ok(self.entry(i))
    }

    /// `σ`: `σ(x)_i = x_{i+1}`.
    pub fn shift(&self) -> Sequence {
        self.shift_by(1)
    }

    pub fn shift_by(&self, k: i64) -> Sequence {
        match &self.repr {
            Repr::Empty => self.clone(),
            Repr::Body { left, start, center, right } => match self.axis {
                Axis::TwoSided => Sequence::raw(
                    self.axis,
                    left.as_ref().map(|l| rotate(l, k)),
                    start - k,
                    center.clone(),
                    right.as_ref().map(|r| rotate(r, k)),
                ),
                Axis::OneSided => {
                    let hi = center.len() as i64;
                    Sequence::build(self.axis, 0, hi - k, 1, self.right_len(), |i| self.entry(i + k))
                }
            },
        }
    }

    /// Positions `[lo, hi)` outside of which every length-`n` window repeats.
    fn scan_range(&self, n: usize) -> (i64, i64) {
        let (lo, hi) = self.window();
        let p = self.left_len() as i64;
        let q = self.right_len() as i64;
        match self.axis {
            Axis::OneSided => (0, hi + q + n as i64),
            Axis::TwoSided => (lo - p - n as i64, hi + q + n as i64),
        }
    }

    /// The ø-free windows of length `n`.
    pub fn blocks_of(&self, n: usize) -> BTreeSet<Vec<Elem>> {
        self.windows(n).into_iter().filter_map(|w| w.into_iter().collect::<Option<Vec<Elem>>>()).collect()
    }

    /// All windows of length `n`, including those touching `ø`.
    pub fn windows(&self, n: usize) -> BTreeSet<Vec<Option<Elem>>> {
        let mut out = BTreeSet::new();
        if self.is_empty() || n == 0 {
            return out;
        }
        let (a, b) = self.scan_range(n);
        for i in a..b {
            out.insert((0..n as i64).map(|j| self.entry(i + j)).collect());
        }
        out
    }

    /// `(x_i)_{lo <= i < hi}`.
    pub fn slice(&self, lo: i64, hi: i64) -> Vec<Option<Elem>> {
        (lo..hi).map(|i| self.entry(i)).collect()
    }

    /// Applies a sliding rule with the given memory and anticipation. The rule
    /// sees `x_{i-memory} ..= x_{i+anticipation}`.
    pub fn sliding_map(
        &self,
        axis: Axis,
        memory: usize,
        anticipation: usize,
        rule: impl Fn(&[Option<Elem>]) -> Option<Elem>,
    ) -> Sequence {
        if self.is_empty() {
            return Sequence::empty(axis);
        }
        let (lo, hi) = self.window();
        let (m, a) = (memory as i64, anticipation as i64);
        let f = |i: i64| {
            let w: Vec<Option<Elem>> = (i - m..=i + a)
                .map(|j| if self.axis == Axis::OneSided && j < 0 { None } else { self.entry(j) })
                .collect();
            rule(&w)
        };
        Sequence::build(axis, lo - a, hi + m, self.left_len(), self.right_len(), f)
    }

    /// `℘`: entrywise combination with `ø` absorbing.
    pub fn zip_with(seqs: &[&Sequence], f: impl Fn(&[Elem]) -> Elem) -> Result<Sequence> {
        let axis = seqs.first().map(|s| s.axis).ok_or_else(|| Error::MalformedSequence("nothing to zip".into()))?;
        if seqs.iter().any(|s| s.axis != axis) {
            return Err(Error::MixedAxis);
        }
        if seqs.iter().any(|s| s.is_empty()) {
            return Ok(Sequence::empty(axis));
        }
        let lo = seqs.iter().map(|s| s.window().0).min().unwrap_or(0);
        let hi = seqs.iter().map(|s| s.window().1).max().unwrap_or(0);
        let p = seqs.iter().fold(1usize, |acc, s| acc.lcm(&s.left_len()));
        let q = seqs.iter().fold(1usize, |acc, s| acc.lcm(&s.right_len()));
        Ok(Sequence::build(axis, lo, hi, p, q, |i| {
            let letters: Option<Vec<Elem>> = seqs.iter().map(|s| s.entry(i)).collect();
            letters.map(|l| f(&l))
        }))
    }

    pub fn map_letters(&self, f: impl Fn(&Elem) -> Elem) -> Sequence {
        Sequence::zip_with(&[self], |l| f(&l[0])).expect("single sequence")
    }

    /// `π`: restriction of a two-sided sequence to the non-negative indices.
    pub fn project_nonneg(&self) -> Sequence {
        match &self.repr {
            Repr::Empty => Sequence::empty(Axis::OneSided),
            Repr::Body { .. } => {
                let hi = self.window().1.max(0);
                Sequence::build(Axis::OneSided, 0, hi, 1, self.right_len(), |i| self.entry(i))
            }
        }
    }

    /// The letters the sequence uses.
    pub fn letters(&self) -> BTreeSet<Elem> {
        self.blocks_of(1).into_iter().map(|mut w| w.remove(0)).collect()
    }

    pub fn validate(&self, g: &Alphabet) -> Result<()> {
        for a in self.letters() {
            g.validate(&a)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let word = |w: &[Elem]| Value::Array(w.iter().map(Elem::to_json).collect());
        match &self.repr {
            Repr::Empty => json!({"kind": "empty"}),
            Repr::Body { left, start, center, right } => {
                let end = start + center.len() as i64;
                match (left, right) {
                    (None, None) => json!({"kind": "finite", "word": word(center)}),
                    (None, Some(r)) => json!({
                        "kind": "periodic",
                        "center": word(center),
                        "right_period": word(&anchor(r, -end)),
                    }),
                    (Some(l), None) => json!({
                        "kind": "left_ray",
                        "left_period": word(&anchor(l, -start)),
                        "left_transient": word(center),
                        "end_index": end - 1,
                    }),
                    (Some(l), Some(r)) => json!({
                        "kind": "periodic",
                        "left_period": word(&anchor(l, -start)),
                        "center": word(center),
                        "right_period": word(&anchor(r, -end)),
                        "base_index": start,
                    }),
                }
            }
        }
    }

    pub fn from_json(g: &Alphabet, axis: Axis, v: &Value) -> Result<Sequence> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("sequence needs a string \"kind\": {v}")))?;
        let word = |name: &str| -> Result<Vec<Elem>> {
            match v.get(name) {
                Some(w) => g.decode_word(w),
                None => Ok(Vec::new()),
            }
        };
        let int = |name: &str| v.get(name).and_then(Value::as_i64).unwrap_or(0);
        let seq = match (kind, axis) {
            ("empty", _) => Sequence::empty(axis),
            ("finite", Axis::OneSided) => Sequence::finite(word("word")?),
            ("left_ray", Axis::TwoSided) => {
                Sequence::left_ray(word("left_period")?, word("left_transient")?, int("end_index"))?
            }
            ("periodic", Axis::OneSided) => {
                let transient = if v.get("transient").is_some() { word("transient")? } else { word("center")? };
                let period = if v.get("period").is_some() { word("period")? } else { word("right_period")? };
                Sequence::eventually_periodic(transient, period)?
            }
            ("periodic", Axis::TwoSided) => {
                Sequence::bi_infinite(word("left_period")?, word("center")?, word("right_period")?, int("base_index"))?
            }
            (k, a) => {
                return Err(Error::MalformedSequence(format!("kind {k:?} is not available on the {} axis", a.name())))
            }
        };
        seq.validate(g)?;
        Ok(seq)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Empty => write!(f, "Ø"),
            Repr::Body { left, start, center, right } => {
                if let Some(l) = left {
                    write!(f, "{}^∞ ", word_to_string(&anchor(l, -start)))?;
                }
                write!(f, "@{start} {}", word_to_string(center))?;
                match right {
                    Some(r) => write!(f, " {}^∞", word_to_string(&anchor(r, -(start + center.len() as i64)))),
                    None => write!(f, " ø^∞"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u64]) -> Vec<Elem> {
        v.iter().map(|x| Elem::Mod(*x)).collect()
    }

    #[test]
    fn entries_of_each_variant() {
        let x = Sequence::finite(m(&[1, 2]));
        assert_eq!(x.entry_at(5).unwrap(), None);
        assert_eq!(x.entry_at(-1), Err(Error::IndexOutsideAxis(-1)));
        let y = Sequence::bi_infinite(m(&[0]), m(&[7]), m(&[0]), 0).unwrap();
        assert_eq!(y.entry(0), Some(Elem::Mod(7)));
        assert_eq!(y.entry(-3), Some(Elem::Mod(0)));
        let r = Sequence::left_ray(m(&[4]), vec![], 3).unwrap();
        assert_eq!(r.entry(3), Some(Elem::Mod(4)));
        assert_eq!(r.entry(4), None);
        assert_eq!(r.length(), Length::Finite(3));
    }

    #[test]
    fn shifting() {
        assert!(Sequence::empty(Axis::OneSided).shift().is_empty());
        let x = Sequence::finite(m(&[1, 2, 3]));
        assert_eq!(x.shift(), Sequence::finite(m(&[2, 3])));
        assert_eq!(x.length(), Length::Finite(2));
        assert_eq!(x.shift().length(), Length::Finite(1));
        assert!(Sequence::finite(m(&[1])).shift().is_empty());
        let p = Sequence::periodic(Axis::TwoSided, m(&[0, 1]));
        assert_ne!(p.shift(), p);
        assert_eq!(p.shift().shift(), p);
        let r = Sequence::left_ray(m(&[1]), m(&[2]), 0).unwrap();
        assert_eq!(r.shift().length(), Length::Finite(-1));
    }

    #[test]
    fn normal_form_is_unique() {
        let a = Sequence::bi_infinite(m(&[0, 1]), m(&[0, 1, 0, 1]), m(&[0, 1]), 4).unwrap();
        let b = Sequence::periodic(Axis::TwoSided, m(&[0, 1]));
        assert_eq!(a, b);
        let c = Sequence::eventually_periodic(m(&[2, 3, 3]), m(&[3, 3])).unwrap();
        let d = Sequence::eventually_periodic(m(&[2]), m(&[3])).unwrap();
        assert_eq!(c, d);
        assert_eq!(c.center(), &m(&[2])[..]);
    }

    #[test]
    fn json_round_trip() {
        let g = Alphabet::Cyclic(5);
        let xs = vec![
            Sequence::empty(Axis::TwoSided),
            Sequence::left_ray(m(&[1, 2]), m(&[3, 4]), 7).unwrap(),
            Sequence::bi_infinite(m(&[1, 2]), m(&[3]), m(&[4, 0, 0]), -2).unwrap(),
        ];
        for x in xs {
            let back = Sequence::from_json(&g, Axis::TwoSided, &x.to_json()).unwrap();
            assert_eq!(back, x);
        }
        let y = Sequence::eventually_periodic(m(&[1, 2]), m(&[3, 4])).unwrap();
        assert_eq!(Sequence::from_json(&g, Axis::OneSided, &y.to_json()).unwrap(), y);
    }

    #[test]
    fn blocks() {
        let x = Sequence::periodic(Axis::OneSided, m(&[0, 1]));
        assert_eq!(x.blocks_of(2), [m(&[0, 1]), m(&[1, 0])].into_iter().collect());
        assert!(Sequence::empty(Axis::OneSided).blocks_of(3).is_empty());
        let f = Sequence::finite(m(&[0, 1, 2]));
        assert_eq!(f.blocks_of(2), [m(&[0, 1]), m(&[1, 2])].into_iter().collect());
    }

    #[test]
    fn zipping_takes_the_shorter_length() {
        let g = Alphabet::Cyclic(6);
        let a = Sequence::periodic(Axis::OneSided, m(&[0, 1]));
        let b = Sequence::periodic(Axis::OneSided, m(&[0, 1, 2]));
        let ab = Sequence::zip_with(&[&a, &b], |l| g.mul(&l[0], &l[1])).unwrap();
        assert_eq!(6 % ab.right_len(), 0);
        let f = Sequence::finite(m(&[1, 1]));
        let fb = Sequence::zip_with(&[&f, &b], |l| g.mul(&l[0], &l[1])).unwrap();
        assert_eq!(fb.length(), Length::Finite(1));
        let e = Sequence::empty(Axis::OneSided);
        assert!(Sequence::zip_with(&[&e, &b], |l| l[0].clone()).unwrap().is_empty());
    }

    #[test]
    fn projection() {
        assert!(Sequence::empty(Axis::TwoSided).project_nonneg().is_empty());
        let r = Sequence::left_ray(m(&[1]), vec![], -1).unwrap();
        assert!(r.project_nonneg().is_empty());
        let x = Sequence::bi_infinite(m(&[1]), m(&[2, 3]), m(&[4]), -1).unwrap();
        let p = x.project_nonneg();
        assert_eq!(p.kind(), SeqKind::InfiniteOneSided);
        assert_eq!(p.entry(0), Some(Elem::Mod(3)));
        assert_eq!(p.entry(9), Some(Elem::Mod(4)));
    }
}
