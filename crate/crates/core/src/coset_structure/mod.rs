//! Follower and predecessor sets of identity words as normal subgroups of
//! the block groups, the coset laws, and the bijection `τ` between the
//! follower-class and predecessor-class families.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::block_ops::verify_closure;
use crate::error::{Error, Result};
use crate::group_core::{word_to_string, Alphabet, Elem, Size};
use crate::shift_space::{ClassKey, FollowerResult, Predicate, Presentation, Shift};

/// Rough cap on `|letters|^k` for bounded block enumerations.
const WORD_BUDGET: f64 = 4096.0;
/// Elements used on each side of a sampled pairwise check.
const PAIR_SAMPLE: usize = 40;
/// Representatives per class when testing that `τ` is well defined.
const TAU_REPS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Follower,
    Predecessor,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Follower => "follower",
            Side::Predecessor => "predecessor",
        }
    }

    fn forward(self) -> bool {
        self == Side::Follower
    }
}

/// Letters whose `k`-words stay within the enumeration budget.
pub fn letters_for(g: &Alphabet, k: usize, bound: usize) -> Vec<Elem> {
    let cap = WORD_BUDGET.powf(1.0 / k.max(1) as f64).floor().max(2.0) as usize;
    g.enumerate(bound.min(cap).max(1))
}

fn identity_word(g: &Alphabet, n: usize) -> Vec<Elem> {
    vec![g.identity(); n]
}

fn glue(a: &[Elem], b: &[Elem], side: Side) -> Vec<Elem> {
    match side {
        Side::Follower => a.iter().chain(b).cloned().collect(),
        Side::Predecessor => b.iter().chain(a).cloned().collect(),
    }
}

/// `b ∈ 𝔉ₖ(Λ, a)` (or `𝔓ₖ`), decided by the language oracle.
pub fn member(shift: &Shift, a: &[Elem], b: &[Elem], side: Side) -> bool {
    shift.in_language(&glue(a, b, side))
}

fn key(shift: &Shift, a: &[Elem], k: usize, side: Side) -> ClassKey {
    match side {
        Side::Follower => shift.follower_key(a, k),
        Side::Predecessor => shift.predecessor_key(a, k),
    }
}

fn rep(shift: &Shift, a: &[Elem], k: usize, side: Side) -> Option<Vec<Elem>> {
    match side {
        Side::Follower => shift.follower_rep(a, k),
        Side::Predecessor => shift.predecessor_rep(a, k),
    }
}

fn require_group(shift: &Shift) -> Result<()> {
    if shift.alphabet.is_group() {
        Ok(())
    } else {
        Err(Error::Unsupported("coset structure needs a group alphabet".into()))
    }
}

/// `𝔉ₖ(Λ, 1ⁿ)` or `𝔓ₖ(Λ, 1ⁿ)` inside the block group `𝔅ₖ(Λ)`.
#[derive(Clone, Debug)]
pub struct BlockSubgroup {
    pub n: usize,
    pub k: usize,
    pub side: Side,
    pub shape: FollowerResult,
    /// Subgroup elements that took part in the closure and normality checks.
    pub checked: usize,
    /// Whether every block of length `k` was examined.
    pub complete: bool,
    shift: Shift,
}

impl BlockSubgroup {
    pub fn contains(&self, b: &[Elem]) -> bool {
        b.len() == self.k && member(&self.shift, &identity_word(&self.shift.alphabet, self.n), b, self.side)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "side": self.side.name(),
            "set": self.shape.to_json(),
            "checked": self.checked,
            "complete": self.complete,
        })
    }
}

/// Builds `𝔉ₖ(Λ, 1ⁿ)` and checks that it is a normal subgroup of `𝔅ₖ(Λ)`.
pub fn follower_subgroup(shift: &Shift, n: usize, k: usize, bound: usize) -> Result<BlockSubgroup> {
    side_subgroup(shift, n, k, bound, Side::Follower)
}

pub fn predecessor_subgroup(shift: &Shift, n: usize, k: usize, bound: usize) -> Result<BlockSubgroup> {
    side_subgroup(shift, n, k, bound, Side::Predecessor)
}

fn side_subgroup(shift: &Shift, n: usize, k: usize, bound: usize, side: Side) -> Result<BlockSubgroup> {
    require_group(shift)?;
    verify_closure(shift, bound)?;
    let g = &shift.alphabet;
    let e = identity_word(g, n);
    let shape = match side {
        Side::Follower => shift.follower_set(&e, k, bound)?,
        Side::Predecessor => shift.predecessor_set(&e, k, bound)?,
    };
    let letters = letters_for(g, k, bound);
    let complete = g.size().finite().is_some_and(|s| s as usize <= letters.len());
    let sub = BlockSubgroup { n, k, side, shape, checked: 0, complete, shift: shift.clone() };
    let hs: Vec<Vec<Elem>> = shift.brute_words(&e, k, &letters, side.forward());
    let blocks = shift.language_exact(k, &letters);
    let hs_small = &hs[..hs.len().min(PAIR_SAMPLE)];
    for h in hs_small {
        if !sub.contains(&g.inv_word(h)) {
            return Err(Error::LawViolation(format!("inverse of {} leaves the subgroup", word_to_string(h))));
        }
        for h2 in hs_small {
            let p = g.mul_words(h, h2);
            if !sub.contains(&p) {
                return Err(Error::LawViolation(format!(
                    "{} * {} leaves the subgroup",
                    word_to_string(h),
                    word_to_string(h2)
                )));
            }
        }
        for b in blocks.iter().take(PAIR_SAMPLE) {
            let c = g.mul_words(&g.mul_words(b, h), &g.inv_word(b));
            if !sub.contains(&c) {
                return Err(Error::LawViolation(format!(
                    "conjugate of {} by {} leaves the subgroup",
                    word_to_string(h),
                    word_to_string(b)
                )));
            }
        }
    }
    Ok(BlockSubgroup { checked: hs_small.len(), ..sub })
}

/// Outcome of a bounded law check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub checks: usize,
    pub letters: usize,
    pub complete: bool,
}

impl LawReport {
    pub fn to_json(&self) -> Value {
        json!({"holds": true, "checks": self.checks, "letters": self.letters, "complete": self.complete})
    }
}

/// Whether the typed set agrees with the language on `w`.
pub fn typed_contains(shift: &Shift, set: &FollowerResult, a: &[Elem], w: &[Elem], side: Side) -> bool {
    let g = &shift.alphabet;
    match set {
        FollowerResult::CosetProduct { factors } => {
            w.len() == factors.len() && factors.iter().zip(w).all(|(c, x)| c.contains(g, x))
        }
        FollowerResult::CosetChain { first, k, .. } => {
            w.len() == *k && first.contains(g, &w[0]) && w.windows(2).all(|p| shift.allowed(&p[0], &p[1]))
        }
        FollowerResult::ExplicitSet { elements, complete: true, .. } => elements.iter().any(|e| e == w),
        FollowerResult::ExplicitSet { .. } => member(shift, a, w, side),
    }
}

/// Checks `b·𝔉ₖ(Λ,1ⁿ) = 𝔉ₖ(Λ,1ⁿ)·b = 𝔉ₖ(Λ,a)` for `b ∈ 𝔉ₖ(Λ,a)`, where `n = |a|`,
/// and cross-checks the typed follower set against a window enumeration.
pub fn coset_law_check(shift: &Shift, a: &[Elem], k: usize, bound: usize) -> Result<LawReport> {
    law_check(shift, a, k, bound, Side::Follower)
}

pub fn predecessor_law_check(shift: &Shift, a: &[Elem], k: usize, bound: usize) -> Result<LawReport> {
    law_check(shift, a, k, bound, Side::Predecessor)
}

fn law_check(shift: &Shift, a: &[Elem], k: usize, bound: usize, side: Side) -> Result<LawReport> {
    require_group(shift)?;
    if !shift.in_language(a) {
        return Err(Error::BlockNotInLanguage(word_to_string(a)));
    }
    let g = &shift.alphabet;
    let e = identity_word(g, a.len());
    let letters = letters_for(g, k, bound);
    let complete = g.size().finite().is_some_and(|s| s as usize <= letters.len());
    let fa = shift.brute_words(a, k, &letters, side.forward());
    let fe = shift.brute_words(&e, k, &letters, side.forward());
    let violation = |what: &str, b: &[Elem], c: &[Elem]| {
        Error::LawViolation(format!(
            "{} {what} with a = {}, b = {}, c = {}",
            side.name(),
            word_to_string(a),
            word_to_string(b),
            word_to_string(c)
        ))
    };
    let mut checks = 0;
    for b in fa.iter().take(PAIR_SAMPLE / 4) {
        for h in fe.iter().take(PAIR_SAMPLE) {
            checks += 2;
            if !member(shift, a, &g.mul_words(b, h), side) {
                return Err(violation("b*h leaves the class", b, h));
            }
            if !member(shift, a, &g.mul_words(h, b), side) {
                return Err(violation("h*b leaves the class", b, h));
            }
        }
        let binv = g.inv_word(b);
        for c in fa.iter().take(PAIR_SAMPLE) {
            checks += 2;
            if !member(shift, &e, &g.mul_words(&binv, c), side) {
                return Err(violation("b^-1*c leaves the identity class", b, c));
            }
            if !member(shift, &e, &g.mul_words(c, &binv), side) {
                return Err(violation("c*b^-1 leaves the identity class", b, c));
            }
        }
    }
    // typed set versus enumeration over the same letters
    let typed = match side {
        Side::Follower => shift.follower_set(a, k, bound)?,
        Side::Predecessor => shift.predecessor_set(a, k, bound)?,
    };
    let found: BTreeSet<&Vec<Elem>> = fa.iter().collect();
    for w in all_words(&letters, k) {
        checks += 1;
        if typed_contains(shift, &typed, a, &w, side) != found.contains(&w) {
            return Err(violation("typed set disagrees with enumeration", &w, &[]));
        }
    }
    Ok(LawReport { checks, letters: letters.len(), complete })
}

fn all_words(letters: &[Elem], k: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
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
    out
}

/// Checks `𝔉ₖ(Λ,a)·𝔉ₖ(Λ,b) = 𝔉ₖ(Λ,a·b)` on enumerated elements.
pub fn product_law_check(shift: &Shift, a: &[Elem], b: &[Elem], k: usize, bound: usize, side: Side) -> Result<usize> {
    require_group(shift)?;
    let g = &shift.alphabet;
    let ab = g.mul_words(a, b);
    let letters = letters_for(g, k, bound);
    let fa = shift.brute_words(a, k, &letters, side.forward());
    let fb = shift.brute_words(b, k, &letters, side.forward());
    let fab = shift.brute_words(&ab, k, &letters, side.forward());
    let mut checks = 0;
    for u in fa.iter().take(PAIR_SAMPLE / 2) {
        for v in fb.iter().take(PAIR_SAMPLE / 2) {
            checks += 1;
            if !member(shift, &ab, &g.mul_words(u, v), side) {
                return Err(Error::LawViolation(format!(
                    "{} class product: {} * {} not in the class of {}",
                    side.name(),
                    word_to_string(u),
                    word_to_string(v),
                    word_to_string(&ab)
                )));
            }
        }
    }
    // every element of the product class factors through the class of `a`
    if let Some(u) = fa.first() {
        let uinv = g.inv_word(u);
        for w in fab.iter().take(PAIR_SAMPLE) {
            checks += 1;
            if !member(shift, b, &g.mul_words(&uinv, w), side) {
                return Err(Error::LawViolation(format!(
                    "{} class product: {} does not factor through {}",
                    side.name(),
                    word_to_string(w),
                    word_to_string(u)
                )));
            }
        }
    }
    Ok(checks)
}

/// Upper bound on the number of distinct classes, when one is known.
fn key_space(shift: &Shift, n: usize, k: usize) -> Size {
    if n == 0 || k == 0 {
        return Size::Finite(1);
    }
    let g = &shift.alphabet;
    match &shift.pres {
        Presentation::Full | Presentation::PeriodicClosure => Size::Finite(1),
        Presentation::MarkovCoset { sub, .. } => sub.index_in(g),
        Presentation::PredicateMStep { pred: Predicate::ZParity, .. } => {
            let pinned = usize::from(n >= 2) + usize::from(k >= 2);
            Size::Finite(1 << pinned)
        }
        Presentation::PredicateMStep { pred: Predicate::Z2SecondCoord, .. } => Size::Infinite,
        Presentation::EdgeGraph { .. } => g.size().finite().map_or(Size::Infinite, |s| Size::Finite(1 << s.min(62))),
        Presentation::Product(fs) => fs.iter().try_fold(Size::Finite(1), |acc, f| match (acc, key_space(f, n, k)) {
            (Size::Finite(x), Size::Finite(y)) => Some(Size::Finite(x.saturating_mul(y))),
            _ => None,
        })
        .unwrap_or(Size::Infinite),
    }
}

/// One class of a family: its canonical key, a base block realizing it and a member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub key: ClassKey,
    pub block: Vec<Elem>,
    pub member: Vec<Elem>,
}

/// `L̄^{n,k}` (followers of `n`-blocks) or `L̲^{n,k}` (predecessors of `n`-blocks).
#[derive(Clone, Debug)]
pub struct ClassFamily {
    pub n: usize,
    pub k: usize,
    pub side: Side,
    pub classes: Vec<ClassEntry>,
    /// Base blocks examined.
    pub blocks_seen: usize,
    /// Known upper bound on the number of classes.
    pub key_space: Size,
    pub bound: usize,
}

impl ClassFamily {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Every class has been found.
    pub fn complete(&self) -> bool {
        self.key_space.finite().is_some_and(|s| s as usize == self.classes.len())
    }

    pub fn index_of(&self, key: &ClassKey) -> Option<usize> {
        self.classes.iter().position(|c| c.key == *key)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "side": self.side.name(),
            "count": self.classes.len(),
            "complete": self.complete(),
            "key_space": match self.key_space { Size::Finite(s) => json!(s), Size::Infinite => json!("infinite") },
            "blocks_seen": self.blocks_seen,
            "bound": self.bound,
            "classes": self.classes.iter().map(|c| json!({
                "key": c.key.to_json(),
                "block": word_to_string(&c.block),
                "member": word_to_string(&c.member),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Distinct classes reached from the first `bound` base blocks.
pub fn class_family(shift: &Shift, n: usize, k: usize, bound: usize, side: Side) -> Result<ClassFamily> {
    require_group(shift)?;
    let g = &shift.alphabet;
    let space = key_space(shift, n, k);
    // spread the base blocks over all positions rather than the first few prefixes
    let per = (bound.max(1) as f64).powf(1.0 / n.max(1) as f64).floor().max(2.0) as usize;
    let letters = g.enumerate(per);
    let mut seen: BTreeMap<ClassKey, ClassEntry> = BTreeMap::new();
    let mut order = Vec::new();
    let mut blocks_seen = 0;
    for a in shift.language_exact(n, &letters) {
        blocks_seen += 1;
        let kk = key(shift, &a, k, side);
        if seen.contains_key(&kk) {
            continue;
        }
        let m = rep(shift, &a, k, side).ok_or_else(|| Error::BlockNotInLanguage(word_to_string(&a)))?;
        order.push(kk.clone());
        seen.insert(kk.clone(), ClassEntry { key: kk, block: a, member: m });
        if space.finite().is_some_and(|s| s as usize == seen.len()) {
            break;
        }
    }
    let classes: Vec<ClassEntry> = order.into_iter().map(|k| seen.remove(&k).expect("recorded")).collect();
    let fam = ClassFamily { n, k, side, classes, blocks_seen, key_space: space, bound };
    check_family(shift, &fam)?;
    Ok(fam)
}

/// Pairwise disjointness and the product law on the enumerated classes.
fn check_family(shift: &Shift, fam: &ClassFamily) -> Result<()> {
    let g = &shift.alphabet;
    let cs = &fam.classes[..fam.classes.len().min(PAIR_SAMPLE)];
    for (i, ci) in cs.iter().enumerate() {
        if !member(shift, &ci.block, &ci.member, fam.side) {
            return Err(Error::LawViolation(format!("representative of class {i} is not a member")));
        }
        for (j, cj) in cs.iter().enumerate() {
            if i != j && member(shift, &cj.block, &ci.member, fam.side) {
                return Err(Error::LawViolation(format!(
                    "{} classes of {} and {} intersect in {}",
                    fam.side.name(),
                    word_to_string(&ci.block),
                    word_to_string(&cj.block),
                    word_to_string(&ci.member)
                )));
            }
            let ab = g.mul_words(&ci.block, &cj.block);
            let uv = g.mul_words(&ci.member, &cj.member);
            if !member(shift, &ab, &uv, fam.side) {
                return Err(Error::LawViolation(format!(
                    "{} class product: {} * {} not in the class of {}",
                    fam.side.name(),
                    word_to_string(&ci.member),
                    word_to_string(&cj.member),
                    word_to_string(&ab)
                )));
            }
        }
    }
    Ok(())
}

/// `(L̄^{n,k}, L̲^{n,k})`.
pub fn class_families(shift: &Shift, n: usize, k: usize, bound: usize) -> Result<(ClassFamily, ClassFamily)> {
    Ok((class_family(shift, n, k, bound, Side::Follower)?, class_family(shift, n, k, bound, Side::Predecessor)?))
}

/// `τ : L̄^{n,k} → L̲^{k,n}`, `τ(𝔉) = 𝔓ₙ(Λ, b)` for any `b ∈ 𝔉`.
#[derive(Clone, Debug)]
pub struct TauMap {
    pub followers: ClassFamily,
    pub predecessors: ClassFamily,
    /// `pairs[i] = j`: the `i`-th follower class goes to the `j`-th predecessor class.
    pub pairs: Vec<usize>,
    pub reps_checked: usize,
    pub products_checked: usize,
}

impl TauMap {
    /// Both families fully enumerated.
    pub fn complete(&self) -> bool {
        self.followers.complete() && self.predecessors.complete()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "follower_classes": self.followers.len(),
            "predecessor_classes": self.predecessors.len(),
            "complete": self.complete(),
            "injective": true,
            "multiplicative": true,
            "pairs": self.pairs.iter().enumerate().map(|(i, j)| json!({
                "follower": self.followers.classes[i].key.to_json(),
                "predecessor": self.predecessors.classes[*j].key.to_json(),
            })).collect::<Vec<_>>(),
            "reps_checked": self.reps_checked,
            "products_checked": self.products_checked,
        })
    }
}

/// Members of a follower class: enumerated ones first, then `rep·h` translates.
fn class_members(shift: &Shift, c: &ClassEntry, k: usize, bound: usize, want: usize) -> Vec<Vec<Elem>> {
    let g = &shift.alphabet;
    let letters = letters_for(g, k, bound.min(16));
    let mut out = shift.brute_words(&c.block, k, &letters, true);
    out.truncate(want);
    if out.len() < want {
        let e = identity_word(g, c.block.len());
        for h in shift.brute_words(&e, k, &letters, true) {
            let m = g.mul_words(&c.member, &h);
            if !out.contains(&m) {
                out.push(m);
            }
            if out.len() >= want {
                break;
            }
        }
    }
    if out.is_empty() {
        out.push(c.member.clone());
    }
    out
}

pub fn tau_bijection(shift: &Shift, n: usize, k: usize, bound: usize) -> Result<TauMap> {
    let followers = class_family(shift, n, k, bound, Side::Follower)?;
    let mut predecessors = class_family(shift, k, n, bound, Side::Predecessor)?;
    let g = &shift.alphabet;
    let mut pairs = Vec::with_capacity(followers.len());
    let mut reps_checked = 0;
    for c in &followers.classes {
        let members = class_members(shift, c, k, bound, TAU_REPS);
        let keys: BTreeSet<ClassKey> = members.iter().map(|b| shift.predecessor_key(b, n)).collect();
        reps_checked += members.len();
        if keys.len() != 1 {
            return Err(Error::WellDefinednessViolation(format!(
                "members of the class of {} have {} different predecessor sets",
                word_to_string(&c.block),
                keys.len()
            )));
        }
        let kk = keys.into_iter().next().expect("one key");
        let j = match predecessors.index_of(&kk) {
            Some(j) => j,
            None => {
                // the bounded predecessor enumeration had not reached this class yet
                let member = shift.predecessor_rep(&members[0], n).ok_or_else(|| {
                    Error::WellDefinednessViolation(format!("{} has no predecessor", word_to_string(&members[0])))
                })?;
                predecessors.classes.push(ClassEntry { key: kk, block: members[0].clone(), member });
                predecessors.classes.len() - 1
            }
        };
        if pairs.contains(&j) {
            return Err(Error::WellDefinednessViolation(format!(
                "tau is not injective: the class of {} collides",
                word_to_string(&c.block)
            )));
        }
        pairs.push(j);
    }
    let mut products_checked = 0;
    let cs = &followers.classes[..followers.len().min(PAIR_SAMPLE / 2)];
    for (i, ci) in cs.iter().enumerate() {
        for cj in cs {
            products_checked += 1;
            let prod = g.mul_words(&ci.member, &cj.member);
            let image = shift.predecessor_key(&prod, n);
            let target = key(shift, &g.mul_words(&ci.block, &cj.block), k, Side::Follower);
            let Some(t) = followers.index_of(&target) else { continue };
            let expected = &predecessors.classes[pairs[t]].key;
            if image != *expected {
                return Err(Error::WellDefinednessViolation(format!(
                    "tau is not multiplicative at classes {i} and {}",
                    word_to_string(&cj.block)
                )));
            }
        }
    }
    if followers.complete() && predecessors.complete() && followers.len() != predecessors.len() {
        return Err(Error::WellDefinednessViolation(format!(
            "{} follower classes but {} predecessor classes",
            followers.len(),
            predecessors.len()
        )));
    }
    Ok(TauMap { followers, predecessors, pairs, reps_checked, products_checked })
}

/// Checks `𝔉₁(Λ,1^{m+1}) ⊆ 𝔉₁(Λ,1^m)` for `m < depth` over the first `bound` letters.
pub fn monotonicity_check(shift: &Shift, depth: usize, bound: usize) -> Result<usize> {
    let g = &shift.alphabet;
    let letters = g.enumerate(bound.min(64));
    let mut checks = 0;
    for m in 0..depth {
        let e = identity_word(g, m);
        let e1 = identity_word(g, m + 1);
        for b in &letters {
            checks += 1;
            if member(shift, &e1, std::slice::from_ref(b), Side::Follower)
                && !member(shift, &e, std::slice::from_ref(b), Side::Follower)
            {
                return Err(Error::LawViolation(format!("{b} follows 1^{} but not 1^{m}", m + 1)));
            }
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests;
