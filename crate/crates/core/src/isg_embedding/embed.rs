use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{verify_chain_hypotheses, AbstractInverseMonoid, HypothesisReport};
use crate::error::{Error, Result};
use crate::group_core::Elem;
use crate::sequence_core::{Axis, Length, Sequence};

/// `(e₁·Ŝ, ·)`. Letter `i` stands for the monoid element `members[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainGroup {
    pub members: Vec<usize>,
    pub labels: Vec<String>,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
}

impl ChainGroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn letter(&self, i: usize) -> Elem {
        Elem::Mod(i as u64)
    }

    pub fn index(&self, e: &Elem) -> Option<usize> {
        match e {
            Elem::Mod(i) if (*i as usize) < self.order() => Some(*i as usize),
            _ => None,
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let (i, j) = (self.index(a).expect("group letter"), self.index(b).expect("group letter"));
        self.letter(self.table[i][j])
    }

    /// `•`: entrywise product, `ø` absorbing.
    pub fn bullet(&self, x: &Sequence, y: &Sequence) -> Result<Sequence> {
        Sequence::zip_with(&[x, y], |l| self.mul(&l[0], &l[1]))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "elements": self.labels,
            "identity": self.labels[self.identity],
            "table": self.table.iter().map(|r| r.iter().map(|&c| self.labels[c].as_str()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// A monoid that passed the hypotheses, with `e₁` and its group.
#[derive(Clone, Debug)]
pub struct ChainEmbedding {
    pub monoid: AbstractInverseMonoid,
    pub hypotheses: HypothesisReport,
    pub e1: usize,
    pub group: ChainGroup,
}

pub fn chain_group(s: &AbstractInverseMonoid) -> Result<ChainGroup> {
    Ok(ChainEmbedding::new(s)?.group)
}

pub fn embed_theta(s: &AbstractInverseMonoid, x: usize) -> Result<Sequence> {
    ChainEmbedding::new(s)?.theta(x)
}

impl ChainEmbedding {
    pub fn new(s: &AbstractInverseMonoid) -> Result<Self> {
        let hypotheses = verify_chain_hypotheses(s);
        if let Some(c) = hypotheses.first_failure() {
            return Err(Error::HypothesisViolated(format!("{}: {}", c.name, c.detail.clone().unwrap_or_default())));
        }
        let e1 = hypotheses.chain[1];
        let group = build_group(s, e1)?;
        Ok(ChainEmbedding { monoid: s.clone(), hypotheses, e1, group })
    }

    /// `θ(x) = (e₁x, e₁T(x), …)`, stopping before the first `T^i(x) = e₀`.
    pub fn theta(&self, x: usize) -> Result<Sequence> {
        let s = &self.monoid;
        if x >= s.len() {
            return Err(Error::Validation { pointer: String::new(), message: format!("no element {x}") });
        }
        let mut orbit: Vec<usize> = Vec::new();
        let mut cur = x;
        loop {
            if cur == s.zero {
                let word = orbit.iter().map(|&a| self.letter_of(a)).collect();
                return Ok(Sequence::finite(word));
            }
            if let Some(i) = orbit.iter().position(|&a| a == cur) {
                let letters: Vec<Elem> = orbit.iter().map(|&a| self.letter_of(a)).collect();
                return Sequence::eventually_periodic(letters[..i].to_vec(), letters[i..].to_vec());
            }
            orbit.push(cur);
            cur = s.t[cur];
        }
    }

    fn letter_of(&self, a: usize) -> Elem {
        let m = self.monoid.mul(self.e1, a);
        let i = self.group.members.iter().position(|&g| g == m).expect("e1 s lies in the group");
        self.group.letter(i)
    }

    /// The idempotent whose image has the given length.
    fn chain_at(&self, len: Length) -> Option<usize> {
        let chain = &self.hypotheses.chain;
        match len {
            Length::NegInf => Some(chain[0]),
            Length::Finite(l) => {
                let n = (l + 1) as usize;
                (n < chain.len() && !(self.hypotheses.top_fixed && n == chain.len() - 1)).then(|| chain[n])
            }
            Length::PosInf => self.hypotheses.top_fixed.then(|| *chain.last().expect("nonempty chain")),
        }
    }

    /// Exhaustive checks of the embedding over all elements and pairs.
    pub fn verify(&self) -> Result<EmbeddingReport> {
        let s = &self.monoid;
        let n = s.len();
        let images: Vec<Sequence> = (0..n).map(|x| self.theta(x)).collect::<Result<_>>()?;
        let mut r = EmbeddingReport { elements: n, pairs: n * n, ..EmbeddingReport::default() };
        let l = |a: usize| s.label(a).to_string();

        let distinct: BTreeSet<&Sequence> = images.iter().collect();
        if distinct.len() != n {
            let (a, b) = first_collision(&images);
            r.violations.push(format!("injectivity: {} and {} have the same image", l(a), l(b)));
        }
        if images[s.zero] != Sequence::empty(Axis::OneSided) {
            r.violations.push("theta(0) is not empty".into());
        }
        for a in 0..n {
            for b in 0..n {
                if images[s.mul(a, b)] != self.group.bullet(&images[a], &images[b])? {
                    r.violations.push(format!("multiplicativity: {} {}", l(a), l(b)));
                }
            }
            if images[a].shift() != images[s.t[a]] {
                r.violations.push(format!("shift: sigma(theta({})) is not theta(T({}))", l(a), l(a)));
            }
        }
        for t in 0..n {
            let same_len: Vec<usize> = (0..n).filter(|&x| images[x].length() == images[t].length()).collect();
            let lt: Vec<usize> = (0..n).filter(|&x| s.left_ideal(x) == s.left_ideal(t)).collect();
            let rt: Vec<usize> = (0..n).filter(|&x| s.right_ideal(x) == s.right_ideal(t)).collect();
            if lt != same_len || rt != same_len {
                r.violations.push(format!("class law at {}", l(t)));
            }
            let star = s.star(t).expect("inverse monoid");
            let (xx, sx) = (s.mul(t, star), s.mul(star, t));
            if xx != sx || Some(xx) != self.chain_at(images[t].length()) {
                r.violations.push(format!("x x* at {}: {} and {}", l(t), l(xx), l(sx)));
            }
        }
        r.image = ImageReport::of(&images);
        Ok(r)
    }

    pub fn to_json(&self) -> Value {
        let s = &self.monoid;
        json!({
            "e1": s.label(self.e1),
            "group": self.group.to_json(),
            "theta": (0..s.len())
                .map(|x| json!({"element": s.label(x), "image": self.theta(x).map(|q| q.to_string()).unwrap_or_default()}))
                .collect::<Vec<_>>(),
        })
    }
}

fn first_collision(images: &[Sequence]) -> (usize, usize) {
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] == images[j] {
                return (i, j);
            }
        }
    }
    (0, 0)
}

fn build_group(s: &AbstractInverseMonoid, e1: usize) -> Result<ChainGroup> {
    let mut members: Vec<usize> = (0..s.len()).filter(|&a| a != s.zero).map(|a| s.mul(e1, a)).collect();
    members.sort_unstable();
    members.dedup();
    let pos = |m: usize| members.iter().position(|&g| g == m);
    let bad = |msg: String| Error::HypothesisViolated(format!("e1 S is not a group: {msg}"));
    let identity = pos(e1).ok_or_else(|| bad("e1 is missing".into()))?;
    let mut table = Vec::new();
    for &a in &members {
        let mut row = Vec::new();
        for &b in &members {
            let c = s.mul(a, b);
            row.push(pos(c).ok_or_else(|| bad(format!("{} {} leaves it", s.label(a), s.label(b))))?);
        }
        table.push(row);
    }
    let mut inverse = Vec::new();
    for (i, row) in table.iter().enumerate() {
        if row[identity] != i || table[identity][i] != i {
            return Err(bad(format!("e1 is not an identity for {}", s.label(members[i]))));
        }
        let j = (0..members.len())
            .find(|&j| row[j] == identity && table[j][i] == identity)
            .ok_or_else(|| bad(format!("{} has no inverse", s.label(members[i]))))?;
        inverse.push(j);
    }
    let labels = members.iter().map(|&m| s.label(m).to_string()).collect();
    Ok(ChainGroup { members, labels, identity, table, inverse })
}

#[derive(Clone, Debug, Default)]
pub struct EmbeddingReport {
    pub elements: usize,
    pub pairs: usize,
    pub violations: Vec<String>,
    pub image: ImageReport,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements,
            "pairs_checked": self.pairs,
            "violations": self.violations,
            "passed": self.passed(),
            "image": self.image.to_json(),
        })
    }
}

/// Shift-space axioms for the finite image `θ(S)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImageReport {
    pub sequences: usize,
    pub finite_nonempty: usize,
    pub shift_invariant: bool,
    pub shift_onto: bool,
    /// A finite image gives finitely many followers, so a nonempty finite word breaks it.
    pub infinite_extension: bool,
}

impl ImageReport {
    fn of(images: &[Sequence]) -> ImageReport {
        let set: BTreeSet<&Sequence> = images.iter().collect();
        let shifted: BTreeSet<Sequence> = set.iter().map(|x| x.shift()).collect();
        let finite_nonempty = set.iter().filter(|x| !x.is_empty() && !x.is_infinite()).count();
        ImageReport {
            sequences: set.len(),
            finite_nonempty,
            shift_invariant: shifted.iter().all(|x| set.contains(x)),
            shift_onto: set.iter().all(|x| shifted.contains(*x)),
            infinite_extension: finite_nonempty == 0,
        }
    }

    pub fn is_shift_space(&self) -> bool {
        self.shift_invariant && self.shift_onto && self.infinite_extension
    }

    fn to_json(&self) -> Value {
        json!({
            "sequences": self.sequences,
            "finite_nonempty": self.finite_nonempty,
            "shift_invariant": self.shift_invariant,
            "shift_onto": self.shift_onto,
            "infinite_extension_property": self.infinite_extension,
            "is_shift_space": self.is_shift_space(),
        })
    }
}
