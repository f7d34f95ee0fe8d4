//! Follower-set shifts, the conjugacies `θ` and `φ`, fractality and the
//! decomposition of a Markov coset shift into a fractal factor times full shifts.

mod code;
mod fractal;
mod run;

use serde_json::{json, Value};

pub use code::SlidingBlockCode;
pub use fractal::{is_fractal, Fractality};
pub use run::{decompose, DecompositionResult, StepRecord, Verification};

use crate::error::{Error, Result};
use crate::group_core::{section_table, Alphabet, Elem, Rule, Size, Subgroup, SubgroupKind};
use crate::sequence_core::{Axis, Sequence};
use crate::shift_space::Shift;

/// Letters examined when a check cannot be exhaustive.
pub const CHECK_LETTERS: usize = 64;

fn parts(p: &Shift) -> Result<(&Subgroup, &Rule)> {
    p.markov_parts()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a Markov coset presentation", p.describe())))
}

fn listed(g: &Alphabet, n: &Subgroup) -> Result<Vec<Elem>> {
    match &n.kind {
        SubgroupKind::Whole => g
            .size()
            .finite()
            .map(|s| g.enumerate(s as usize))
            .ok_or_else(|| Error::NoCanonicalRep(format!("{} is infinite", g.describe()))),
        _ => n
            .elements()
            .map(<[Elem]>::to_vec)
            .ok_or_else(|| Error::NoCanonicalRep(format!("the subgroup {} is not listed", n.describe()))),
    }
}

/// `ℋ = 𝔉₁(Λ,1) ∩ 𝔓₁(Λ,1) = N ∩ f⁻¹(N)`.
pub fn compute_h(p: &Shift) -> Result<Subgroup> {
    let (n, rule) = parts(p)?;
    let g = &p.alphabet;
    if n.kind == SubgroupKind::Whole {
        return Ok(Subgroup::whole());
    }
    let elems = listed(g, n)?;
    Ok(Subgroup::finite_unchecked(g, elems.into_iter().filter(|a| rule.in_kernel(g, n, a)).collect()))
}

/// The Markov coset shift on `G/K` whose transitions come from `rule`, with
/// subgroup the image of `gens`.
fn quotient_shift(p: &Shift, k: &Subgroup, gens: &[Elem]) -> Result<Shift> {
    let (_, rule) = parts(p)?;
    let g = &p.alphabet;
    let q = Alphabet::quotient(g.clone(), k.clone());
    let mut image: Vec<Elem> = gens.iter().map(|x| k.canon(g, x)).collect::<Result<_>>()?;
    image.sort_by_key(|x| g.order_key(x));
    image.dedup();
    let sub = if q.size().finite().is_some_and(|s| s as usize == image.len()) {
        Subgroup::whole()
    } else {
        Subgroup::finite_unchecked(&q, image)
    };
    Ok(Shift::markov(q, p.axis, sub, Rule::Lifted(Box::new(rule.clone()))))
}

/// `Λ̄`: the Markov shift on the classes `f(a)·N`, with subgroup `f(N)·N`.
pub fn follower_set_shift(p: &Shift) -> Result<Shift> {
    let (n, rule) = parts(p)?;
    let g = &p.alphabet;
    let image: Vec<Elem> = listed(g, n)?.iter().map(|a| rule.apply(g, a)).collect();
    quotient_shift(p, n, &image)
}

/// `θ` with its memory-1 inverse.
#[derive(Clone, Debug)]
pub struct ThetaCode {
    pub code: SlidingBlockCode,
    pub inverse: SlidingBlockCode,
    pub target: Shift,
}

pub fn theta_code(p: &Shift) -> Result<ThetaCode> {
    let (n, rule) = parts(p)?;
    let g = p.alphabet.clone();
    let h = compute_h(p)?;
    if !h.is_trivial(&g) {
        return Err(Error::HNotTrivial(size_text(h.size(&g))));
    }
    let target = follower_set_shift(p)?;
    let members = listed(&g, n)?;
    let (nf, rf, gf) = (n.clone(), rule.clone(), g.clone());
    let code = SlidingBlockCode::one_block("theta", move |a| rf.class(&gf, &nf, a));
    let (nf, rf, gf) = (n.clone(), rule.clone(), g.clone());
    let inverse = SlidingBlockCode::new("theta^-1", 1, 0, move |w| {
        let (prev, cur) = (w[0].as_ref()?, w[1].as_ref()?);
        let hits = preimages(&gf, &nf, &rf, &members, prev, cur);
        (hits.len() == 1).then(|| hits[0].clone())
    });
    // uniqueness of preimages on the first letters of the image
    let members = listed(&g, n)?;
    for prev in target.alphabet.enumerate(CHECK_LETTERS) {
        for cur in target.followers_listed(&prev, CHECK_LETTERS) {
            let hits = preimages(&g, n, rule, &members, &prev, &cur);
            if hits.len() != 1 {
                return Err(Error::NonUniquePreimage(format!("{} letters of class {prev} map to {cur}", hits.len())));
            }
        }
    }
    Ok(ThetaCode { code, inverse, target })
}

/// `a ∈ prev·N` with `f(a)·N = cur`.
fn preimages(g: &Alphabet, n: &Subgroup, rule: &Rule, members: &[Elem], prev: &Elem, cur: &Elem) -> Vec<Elem> {
    members
        .iter()
        .map(|m| g.mul(prev, m))
        .filter(|a| rule.class(g, n, a) == *cur)
        .collect()
}

fn size_text(s: Size) -> String {
    match s {
        Size::Finite(k) => k.to_string(),
        Size::Infinite => "infinite".into(),
    }
}

/// `Λ̂` over `G/ℋ` together with `ℋ`.
#[derive(Clone, Debug)]
pub struct HatShift {
    pub shift: Shift,
    pub h: Subgroup,
    /// `ℋ` as an alphabet in its own right.
    pub h_alphabet: Alphabet,
}

pub fn hat_shift(p: &Shift) -> Result<HatShift> {
    let (n, _) = parts(p)?;
    let g = &p.alphabet;
    let h = compute_h(p)?;
    let shift = quotient_shift(p, &h, &listed(g, n)?)?;
    let h_hat = compute_h(&shift)?;
    if !h_hat.is_trivial(&shift.alphabet) {
        return Err(Error::LawViolation(format!(
            "the quotient by H still has H of order {}",
            size_text(h_hat.size(&shift.alphabet))
        )));
    }
    let h_alphabet = Alphabet::sub(g.clone(), h.clone());
    Ok(HatShift { shift, h, h_alphabet })
}

/// `φ(a) = (a·ℋ, S(a·ℋ)⁻¹·a)` with `S` the canonical section.
#[derive(Clone, Debug)]
pub struct PhiCode {
    pub hat: HatShift,
    pub code: SlidingBlockCode,
    pub inverse: SlidingBlockCode,
    pub star: DiamondOp,
    /// `Λ̂ ⊠ Σ_ℋ`.
    pub target: Shift,
    pub section: Vec<(String, Elem)>,
}

/// `(ℋ₁,h₁) ◇ (ℋ₂,h₂) = φ(φ⁻¹(ℋ₁,h₁)·φ⁻¹(ℋ₂,h₂))`, applied entrywise.
#[derive(Clone, Debug)]
pub struct DiamondOp {
    pub base: Alphabet,
    pub h: Subgroup,
}

impl DiamondOp {
    pub fn split(&self, a: &Elem) -> Elem {
        let c = self.h.canon_unchecked(&self.base, a);
        let r = self.base.mul(&self.base.inv(&c), a);
        Elem::Tuple(vec![c, r])
    }

    pub fn join(&self, t: &Elem) -> Elem {
        let t = t.as_tuple().expect("pair letter");
        self.base.mul(&t[0], &t[1])
    }

    pub fn mul(&self, p: &Elem, q: &Elem) -> Elem {
        self.split(&self.base.mul(&self.join(p), &self.join(q)))
    }

    pub fn apply(&self, x: &Sequence, y: &Sequence) -> Result<Sequence> {
        Sequence::zip_with(&[x, y], |l| self.mul(&l[0], &l[1]))
    }

    pub fn to_json(&self) -> Value {
        json!({"kind": "diamond", "base": self.base.describe(), "h": self.h.describe(), "block": 1})
    }
}

pub fn phi_code(p: &Shift) -> Result<PhiCode> {
    let hat = hat_shift(p)?;
    let star = DiamondOp { base: p.alphabet.clone(), h: hat.h.clone() };
    let (s1, s2) = (star.clone(), star.clone());
    let code = SlidingBlockCode::one_block("phi", move |a| s1.split(a));
    let inverse = SlidingBlockCode::one_block("phi^-1", move |t| s2.join(t));
    let target = Shift::product(vec![hat.shift.clone(), Shift::full(hat.h_alphabet.clone(), p.axis)])?;
    let section = section_table(&hat.shift.alphabet, CHECK_LETTERS);
    Ok(PhiCode { hat, code, inverse, star, target, section })
}

/// Round-trip and homomorphism checks for a code pair on the given sequences.
pub(crate) fn code_checks(
    forward: &SlidingBlockCode,
    inverse: &SlidingBlockCode,
    target: &Shift,
    samples: &[Sequence],
    op: &dyn Fn(&Sequence, &Sequence) -> Sequence,
    target_op: &dyn Fn(&Sequence, &Sequence) -> Sequence,
) -> Vec<String> {
    let mut bad = Vec::new();
    let mut note = |what: &str, x: &Sequence| {
        if bad.len() < 8 {
            bad.push(format!("{what}: {x}"));
        }
    };
    for x in samples {
        let fx = forward.apply(x);
        if inverse.apply(&fx) != *x {
            note("inverse after forward is not the identity", x);
        }
        if fx.length() != x.length() {
            note("length changed", x);
        }
        if forward.apply(&x.shift()) != fx.shift() {
            note("does not commute with the shift", x);
        }
        if x.axis() == Axis::TwoSided && !target.contains(&fx).unwrap_or(false) {
            note("image leaves the target shift", x);
        }
    }
    for (i, x) in samples.iter().enumerate() {
        let y = &samples[(i * 7 + 3) % samples.len()];
        if forward.apply(&op(x, y)) != target_op(&forward.apply(x), &forward.apply(y)) {
            note("not operation preserving", x);
        }
    }
    bad
}
