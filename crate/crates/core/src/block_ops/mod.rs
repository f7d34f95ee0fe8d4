//! The canonical 1-block operation `x • y = (x_i · y_i)_i` and the inverse
//! semigroup structure it induces on a shift.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group_core::{word_to_string, Alphabet, Elem, Size};
use crate::sequence_core::{Axis, Length, Sequence};
use crate::shift_space::{Presentation, Sampler, Shift};

/// The entrywise operation of an alphabet, with `ø` absorbing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneBlockOp {
    pub alphabet: Alphabet,
}

impl OneBlockOp {
    pub fn new(alphabet: Alphabet) -> OneBlockOp {
        OneBlockOp { alphabet }
    }

    pub fn apply(&self, x: &Sequence, y: &Sequence) -> Result<Sequence> {
        if x.axis() != y.axis() {
            return Err(Error::MixedAxis);
        }
        for s in [x, y] {
            s.validate(&self.alphabet).map_err(|e| Error::MixedAlphabet(e.to_string()))?;
        }
        Ok(self.apply_unchecked(x, y))
    }

    pub fn apply_unchecked(&self, x: &Sequence, y: &Sequence) -> Sequence {
        let g = &self.alphabet;
        Sequence::zip_with(&[x, y], |l| g.mul(&l[0], &l[1])).expect("same axis")
    }

    /// `x*`: the entrywise inverse.
    pub fn star(&self, x: &Sequence) -> Sequence {
        let g = &self.alphabet;
        x.map_letters(|a| g.inv(a))
    }

    /// `e^n` on the axis of `x`.
    pub fn idempotent(&self, axis: Axis, n: Length) -> Sequence {
        Sequence::identity_word(&self.alphabet, axis, n)
    }
}

/// `(x*, x•x*)`.
pub fn inverse_and_idempotents(op: &OneBlockOp, x: &Sequence) -> (Sequence, Sequence) {
    let xs = op.star(x);
    let e = op.apply_unchecked(x, &xs);
    (xs, e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub method: &'static str,
    /// Letters used when the check is an enumeration.
    pub letters: usize,
    pub pairs_checked: u64,
    pub complete: bool,
}

impl ClosureReport {
    pub fn to_json(&self) -> Value {
        json!({
            "closed": true,
            "method": self.method,
            "letters": self.letters,
            "pairs_checked": self.pairs_checked,
            "complete": self.complete,
        })
    }
}

/// Blocks per enumeration side are kept below this.
const BLOCK_BUDGET: f64 = 1500.0;

/// Checks that allowed windows are closed under the entrywise product.
pub fn verify_closure(shift: &Shift, bound: usize) -> Result<ClosureReport> {
    let g = &shift.alphabet;
    match &shift.pres {
        Presentation::Full => Ok(ClosureReport { method: "no_constraints", letters: 0, pairs_checked: 0, complete: true }),
        Presentation::PeriodicClosure => {
            Ok(ClosureReport { method: "periodic_lcm", letters: 0, pairs_checked: 0, complete: true })
        }
        Presentation::Product(fs) => {
            let mut total = ClosureReport { method: "factorwise", letters: 0, pairs_checked: 0, complete: true };
            for f in fs {
                let r = verify_closure(f, bound)?;
                total.letters = total.letters.max(r.letters);
                total.pairs_checked += r.pairs_checked;
                total.complete &= r.complete;
            }
            Ok(total)
        }
        Presentation::MarkovCoset { sub, rule } => {
            let n = bound.max(1);
            if let Some((a, b)) = rule.check_hom(g, sub, n) {
                let fa = rule.class(g, sub, &a);
                let fb = rule.class(g, sub, &b);
                return Err(Error::ClosureViolation {
                    left: word_to_string(&[a, fa]),
                    right: word_to_string(&[b, fb]),
                });
            }
            let used = g.enumerate(n).len();
            let complete = g.size().finite().is_some_and(|s| s as usize <= n);
            Ok(ClosureReport {
                method: "coset_algebra",
                letters: used,
                pairs_checked: (used * used) as u64,
                complete,
            })
        }
        _ => {
            let w = shift.memory().unwrap_or(1) + 1;
            let cap = BLOCK_BUDGET.powf(1.0 / w as f64).floor().max(2.0) as usize;
            let letters = g.enumerate(bound.min(cap));
            let blocks = shift.language_exact(w, &letters);
            let mut pairs = 0u64;
            for x in &blocks {
                for y in &blocks {
                    pairs += 1;
                    let p = g.mul_words(x, y);
                    if !shift.in_language(&p) {
                        return Err(Error::ClosureViolation { left: word_to_string(x), right: word_to_string(y) });
                    }
                }
            }
            let complete = g.size().finite().is_some_and(|s| s as usize <= letters.len());
            Ok(ClosureReport { method: "window_enumeration", letters: letters.len(), pairs_checked: pairs, complete })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemigroupKind {
    Group,
    InverseMonoidWithZero,
}

/// Which idempotents `e^n` lie in the shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Idempotents {
    /// `{e^∞}`
    TopOnly,
    /// `{e^{-∞}, e^∞}`
    TopAndZero,
    /// Every `e^n`.
    FullChain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemigroupClass {
    pub kind: SemigroupKind,
    pub idempotents: Idempotents,
}

impl SemigroupClass {
    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            SemigroupKind::Group => "group",
            SemigroupKind::InverseMonoidWithZero => "inverse_monoid_with_zero",
        };
        let e = match self.idempotents {
            Idempotents::TopOnly => json!(["e^inf"]),
            Idempotents::TopAndZero => json!(["e^-inf", "e^inf"]),
            Idempotents::FullChain => json!("all e^n"),
        };
        json!({"kind": kind, "idempotents": e})
    }
}

/// `true` when the operation makes the shift a group: one-sided with finitely
/// many letters, or two-sided with finitely many points.
fn is_group_case(shift: &Shift) -> bool {
    match shift.axis {
        Axis::OneSided => shift.alphabet.size().is_finite(),
        Axis::TwoSided => !shift.has_infinitely_many_points(),
    }
}

pub fn classify_semigroup(shift: &Shift) -> SemigroupClass {
    if is_group_case(shift) {
        return SemigroupClass { kind: SemigroupKind::Group, idempotents: Idempotents::TopOnly };
    }
    let e0 = Sequence::identity_word(&shift.alphabet, shift.axis, Length::Finite(0));
    let idempotents = if shift.contains(&e0).unwrap_or(false) { Idempotents::FullChain } else { Idempotents::TopAndZero };
    SemigroupClass { kind: SemigroupKind::InverseMonoidWithZero, idempotents }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Continuity {
    Continuous { reason: String },
    Discontinuous { witness: Value },
}

impl Continuity {
    pub fn is_continuous(&self) -> bool {
        matches!(self, Continuity::Continuous { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Continuity::Continuous { reason } => json!({"continuous": true, "reason": reason}),
            Continuity::Discontinuous { witness } => json!({"continuous": false, "witness": witness}),
        }
    }
}

/// Decides continuity of `•` on the shift.
pub fn continuity_check(shift: &Shift, bound: usize, sampler: &mut Sampler) -> Continuity {
    let g = &shift.alphabet;
    let op = OneBlockOp::new(g.clone());
    if !g.is_group() {
        return fiber_continuity(g, bound);
    }
    if is_group_case(shift) {
        let reason = match shift.axis {
            Axis::OneSided => "one-sided shift over finitely many letters",
            Axis::TwoSided => "two-sided shift with finitely many points",
        };
        return Continuity::Continuous { reason: reason.into() };
    }
    match shift.axis {
        Axis::OneSided => {
            let fiber: Vec<Value> = g
                .enumerate(bound)
                .iter()
                .map(|b| json!([b.to_json(), g.inv(b).to_json()]))
                .collect();
            Continuity::Discontinuous {
                witness: json!({
                    "kind": "infinite_fiber",
                    "target": g.identity().to_json(),
                    "pairs_listed": fiber.len(),
                    "pairs": fiber.into_iter().take(8).collect::<Vec<_>>(),
                    "bound": bound,
                }),
            }
        }
        Axis::TwoSided => Continuity::Discontinuous { witness: shifted_pair_witness(shift, &op, sampler) },
    }
}

/// `z^n = σ^n(x, x*)` leaves every finite window while `Φ(z^n) = e^∞`.
fn shifted_pair_witness(shift: &Shift, op: &OneBlockOp, sampler: &mut Sampler) -> Value {
    let g = &shift.alphabet;
    let e = g.identity();
    for _ in 0..64 {
        if let Some(x) = sampler.walk_sequence(shift) {
            if x.is_infinite() && x.letters().len() > 1 && shift.contains(&x).unwrap_or(false) {
                let (xs, _) = inverse_and_idempotents(op, &x);
                let images: Vec<bool> = (0..4)
                    .map(|n| op.apply_unchecked(&x.shift_by(n), &xs.shift_by(n)) == Sequence::constant(shift.axis, e.clone()))
                    .collect();
                return json!({
                    "kind": "shifted_pair",
                    "x": x.to_json(),
                    "x_star": xs.to_json(),
                    "images_equal_identity": images,
                });
            }
        }
    }
    // Only constant or non-periodic infinite points are at hand: show a window
    // of a non-constant walk, or distinct constant points.
    let ctx = vec![e.clone(); shift.memory().unwrap_or(1).max(1)];
    let mut walk = ctx.clone();
    for _ in 0..8 {
        let tail = walk[walk.len() - ctx.len()..].to_vec();
        let options = shift.followers_listed(&tail[tail.len() - 1], 8);
        let next = options
            .iter()
            .find(|b| **b != e && shift.in_language(&[tail.clone(), vec![(*b).clone()]].concat()))
            .cloned()
            .or_else(|| shift.follower_rep(&tail, 1).map(|mut v| v.remove(0)));
        match next {
            Some(b) => walk.push(b),
            None => break,
        }
    }
    let window: Vec<Elem> = walk[ctx.len() - 1..].to_vec();
    if window.iter().any(|a| *a != e) {
        let star: Vec<Elem> = window.iter().map(|a| g.inv(a)).collect();
        let product = g.mul_words(&window, &star);
        return json!({
            "kind": "shifted_pair_window",
            "x_window": window.iter().map(Elem::to_json).collect::<Vec<_>>(),
            "x_star_window": star.iter().map(Elem::to_json).collect::<Vec<_>>(),
            "product_window_is_identity": product.iter().all(|a| *a == e),
        });
    }
    let points: Vec<Value> = g.enumerate(4).iter().map(|a| Sequence::constant(shift.axis, a.clone()).to_json()).collect();
    json!({"kind": "distinct_constant_points", "points": points})
}

/// Fiber sizes `|{(b, c) : b·c = a}|` at two bounds; growth means an infinite fiber.
fn fiber_continuity(g: &Alphabet, bound: usize) -> Continuity {
    let count = |n: usize| -> BTreeMap<Elem, usize> {
        let letters = g.enumerate(n);
        let mut m = BTreeMap::new();
        for b in &letters {
            for c in &letters {
                *m.entry(g.mul(b, c)).or_insert(0) += 1;
            }
        }
        m
    };
    let half = count(bound / 2);
    let full = count(bound);
    for a in g.enumerate(bound / 2) {
        let (s, t) = (half.get(&a).copied().unwrap_or(0), full.get(&a).copied().unwrap_or(0));
        if t > s && g.size() == Size::Infinite {
            return Continuity::Discontinuous {
                witness: json!({"kind": "growing_fiber", "target": a.to_json(), "sizes": [s, t], "bounds": [bound / 2, bound]}),
            };
        }
    }
    Continuity::Continuous { reason: format!("every fiber over the first {} letters is stable up to {bound}", bound / 2) }
}

/// An alphabet operation recovered from a sequence operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedOp {
    pub table: BTreeMap<(Elem, Elem), Elem>,
}

impl InducedOp {
    pub fn mul(&self, a: &Elem, b: &Elem) -> Option<&Elem> {
        self.table.get(&(a.clone(), b.clone()))
    }

    /// The 1-block operation built from the table.
    pub fn apply(&self, x: &Sequence, y: &Sequence) -> Option<Sequence> {
        let letters_known =
            x.letters().iter().all(|a| y.letters().iter().all(|b| self.mul(a, b).is_some()));
        letters_known.then(|| {
            Sequence::zip_with(&[x, y], |l| self.mul(&l[0], &l[1]).expect("known letters").clone()).expect("same axis")
        })
    }
}

/// `a·b := (a^∞ ⋆ b^∞)_0` for a 1-block, `Ø`-absorbing sequence operation.
pub fn induce_alphabet_op(
    letters: &[Elem],
    axis: Axis,
    op: &dyn Fn(&Sequence, &Sequence) -> Sequence,
) -> Result<InducedOp> {
    let mut table = BTreeMap::new();
    for a in letters {
        for b in letters {
            let x = Sequence::constant(axis, a.clone());
            let y = Sequence::constant(axis, b.clone());
            match op(&x, &y).entry(0) {
                Some(c) => {
                    table.insert((a.clone(), b.clone()), c);
                }
                None => return Err(Error::ZeroDivisorDetected(format!("{a} * {b} has no letter"))),
            }
        }
    }
    Ok(InducedOp { table })
}

/// Axiom sampling outcome.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub samples: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn to_json(&self) -> Value {
        json!({
            "samples": self.samples,
            "violations": self.violations.len(),
            "first_violations": self.violations.iter().take(5).collect::<Vec<_>>(),
        })
    }
}

fn draw(shift: &Shift, sampler: &mut Sampler) -> Sequence {
    if sampler.rng().gen_bool(0.5) {
        sampler.member(shift)
    } else {
        sampler.ambient(&shift.alphabet, shift.axis)
    }
}

/// Checks the inverse semigroup identities on `samples` random triples.
pub fn check_axioms(shift: &Shift, sampler: &mut Sampler, samples: usize) -> AxiomReport {
    let op = OneBlockOp::new(shift.alphabet.clone());
    let axis = shift.axis;
    let group = shift.alphabet.is_group();
    let mut report = AxiomReport { samples, violations: Vec::new() };
    let mut fail = |what: &str, seqs: &[&Sequence]| {
        let shown: Vec<String> = seqs.iter().map(|s| s.to_string()).collect();
        report.violations.push(format!("{what}: {}", shown.join(" , ")));
    };
    for _ in 0..samples {
        let x = draw(shift, sampler);
        let y = draw(shift, sampler);
        let z = draw(shift, sampler);
        let m = |a: &Sequence, b: &Sequence| op.apply_unchecked(a, b);

        if m(&m(&x, &y), &z) != m(&x, &m(&y, &z)) {
            fail("associativity", &[&x, &y, &z]);
        }
        let (xs, ex) = inverse_and_idempotents(&op, &x);
        let (ys, ey) = inverse_and_idempotents(&op, &y);
        if m(&m(&x, &xs), &x) != x || m(&m(&xs, &x), &xs) != xs {
            fail("regularity", &[&x]);
        }
        if m(&ex, &ey) != m(&ey, &ex) {
            fail("idempotents commute", &[&x, &y]);
        }
        let xy = m(&x, &y);
        if xy.shift() != m(&x.shift(), &y.shift()) {
            fail("shift homomorphism", &[&x, &y]);
        }
        if group {
            let e_len = op.idempotent(axis, x.length());
            if ex != e_len || m(&xs, &x) != e_len {
                fail("x x* = x* x = e^l(x)", &[&x]);
            }
            if (m(&xs, &x) == m(&ys, &y)) != (x.length() == y.length()) {
                fail("L-classes are length classes", &[&x, &y]);
            }
        } else if m(&xs, &x) != ex || m(&ex, &ex) != ex {
            // a union of groups: x x* is the entrywise local identity
            fail("x x* = x* x is idempotent", &[&x]);
        }
        if xy.length() != x.length().min(y.length()) {
            fail("length of product", &[&x, &y]);
        }
        if x.is_infinite() && y.is_infinite() {
            let r = x.right_len().lcm(&y.right_len());
            if r % xy.right_len() != 0 {
                fail("period divides lcm", &[&x, &y]);
            }
        }
        for n in 0..4 {
            let en = op.idempotent(axis, Length::Finite(n));
            let p = m(&en, &x);
            if (n - 6..=n).any(|i| (axis == Axis::TwoSided || i >= 0) && Length::Finite(i) <= x.length() && p.entry(i) != x.entry(i)) {
                fail("e^n x agrees with x up to n", &[&x]);
            }
        }
    }
    report
}
