use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::alphabet::{int_rank, int_unrank, Alphabet, Size};
use super::elem::Elem;
use crate::error::{invalid, Error, Result};

/// Largest finite subgroup closure computed from generators.
const CLOSURE_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupKind {
    /// Explicit elements, sorted by the parent enumeration order.
    Finite(Vec<Elem>),
    Whole,
    /// `dZ` inside the integers, `d >= 1`.
    IntMultiples(BigInt),
    /// `Z x {0}` inside the integer pairs.
    FirstAxis,
    /// `{1}^(len-1) x last` inside a tuple alphabet of length `len`.
    BlockLast { len: usize, last: Box<Subgroup> },
}

/// A subgroup of a parent alphabet together with its normality flag.
///
/// Every kind supplies a canonical coset representative: the element of the
/// coset that comes first in the parent enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub kind: SubgroupKind,
    pub normal: bool,
}

fn component(parent: &Alphabet) -> &Alphabet {
    match parent {
        Alphabet::Block { base, .. } => base,
        Alphabet::Language { shift, .. } => &shift.alphabet,
        Alphabet::Sub { base, .. } => component(base),
        _ => panic!("BlockLast needs a block alphabet, got {}", parent.describe()),
    }
}

impl Subgroup {
    pub fn whole() -> Subgroup {
        Subgroup { kind: SubgroupKind::Whole, normal: true }
    }

    pub fn trivial(parent: &Alphabet) -> Subgroup {
        Subgroup { kind: SubgroupKind::Finite(vec![parent.identity()]), normal: true }
    }

    pub fn int_multiples(d: i64) -> Subgroup {
        Subgroup { kind: SubgroupKind::IntMultiples(BigInt::from(d.abs().max(1))), normal: true }
    }

    pub fn first_axis() -> Subgroup {
        Subgroup { kind: SubgroupKind::FirstAxis, normal: true }
    }

    pub fn block_last(len: usize, last: Subgroup) -> Subgroup {
        let normal = last.normal;
        Subgroup { kind: SubgroupKind::BlockLast { len, last: Box::new(last) }, normal }
    }

    /// A finite subgroup from an explicit list; fails unless the list is closed.
    pub fn finite(parent: &Alphabet, elems: Vec<Elem>) -> Result<Subgroup> {
        let set: BTreeSet<Elem> = elems.into_iter().collect();
        if !set.contains(&parent.identity()) {
            return Err(invalid("", "subgroup must contain the identity"));
        }
        for a in &set {
            if !set.contains(&parent.inv(a)) {
                return Err(invalid("", format!("subgroup not closed under inverse at {a}")));
            }
            for b in &set {
                let ab = parent.mul(a, b);
                if !set.contains(&ab) {
                    return Err(invalid("", format!("subgroup not closed: {a} * {b} = {ab}")));
                }
            }
        }
        Ok(Subgroup::finite_unchecked(parent, set.into_iter().collect()))
    }

    /// A finite subgroup already known to be closed.
    pub fn finite_unchecked(parent: &Alphabet, mut elems: Vec<Elem>) -> Subgroup {
        elems.sort_by_cached_key(|e| parent.order_key(e));
        elems.dedup();
        let mut sub = Subgroup { kind: SubgroupKind::Finite(elems), normal: true };
        if !parent.is_abelian() {
            sub.normal = sub.check_normal(parent, 64).is_none();
        }
        sub
    }

    /// Closure of a generator list, when it is finite or recognizably infinite.
    pub fn generated(parent: &Alphabet, gens: &[Elem]) -> Result<Subgroup> {
        if let Alphabet::Int = parent {
            let mut g = BigInt::zero();
            for x in gens {
                g = g.gcd(x.as_int().expect("integer generator"));
            }
            return Ok(if g.is_zero() {
                Subgroup::trivial(parent)
            } else {
                Subgroup { kind: SubgroupKind::IntMultiples(g.abs()), normal: true }
            });
        }
        let mut set: BTreeSet<Elem> = BTreeSet::new();
        set.insert(parent.identity());
        let mut frontier: Vec<Elem> = vec![parent.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                for y in [parent.mul(&x, g), parent.mul(&x, &parent.inv(g))] {
                    if set.insert(y.clone()) {
                        if set.len() > CLOSURE_CAP {
                            return Err(Error::Unsupported(format!(
                                "generated subgroup exceeds {CLOSURE_CAP} elements"
                            )));
                        }
                        frontier.push(y);
                    }
                }
            }
        }
        Ok(Subgroup::finite_unchecked(parent, set.into_iter().collect()))
    }

    pub fn contains(&self, parent: &Alphabet, x: &Elem) -> bool {
        match &self.kind {
            SubgroupKind::Finite(v) => v.contains(x),
            SubgroupKind::Whole => true,
            SubgroupKind::IntMultiples(d) => x.as_int().is_some_and(|v| (v % d).is_zero()),
            SubgroupKind::FirstAxis => x.as_tuple().is_some_and(|t| t[1].as_int().is_some_and(Zero::is_zero)),
            SubgroupKind::BlockLast { len, last } => x.as_tuple().is_some_and(|t| {
                let base = component(parent);
                t.len() == *len
                    && t[..len - 1].iter().all(|e| *e == base.identity())
                    && last.contains(base, &t[len - 1])
            }),
        }
    }

    /// The canonical representative of the coset `x·H`.
    pub fn canon(&self, parent: &Alphabet, x: &Elem) -> Result<Elem> {
        Ok(match &self.kind {
            SubgroupKind::Finite(v) => v
                .iter()
                .map(|h| parent.mul(x, h))
                .min_by_key(|y| parent.order_key(y))
                .expect("subgroup is nonempty"),
            SubgroupKind::Whole => parent.identity(),
            SubgroupKind::IntMultiples(d) => {
                let v = x.as_int().ok_or_else(|| Error::MalformedElement(format!("{x} is not an integer")))?;
                let r = v.mod_floor(d);
                let alt = &r - d;
                Elem::Int(if int_rank(&alt) < int_rank(&r) { alt } else { r })
            }
            SubgroupKind::FirstAxis => {
                let t = x.as_tuple().ok_or_else(|| Error::MalformedElement(format!("{x} is not a pair")))?;
                Elem::Tuple(vec![Elem::int(0), t[1].clone()])
            }
            SubgroupKind::BlockLast { len, last } => {
                let t = x.as_tuple().ok_or_else(|| Error::MalformedElement(format!("{x} is not a block")))?;
                let mut out = t.to_vec();
                out[len - 1] = last.canon(component(parent), &t[len - 1])?;
                Elem::Tuple(out)
            }
        })
    }

    pub(crate) fn canon_unchecked(&self, parent: &Alphabet, x: &Elem) -> Elem {
        self.canon(parent, x).expect("canonical representative")
    }

    pub fn size(&self, parent: &Alphabet) -> Size {
        match &self.kind {
            SubgroupKind::Finite(v) => Size::Finite(v.len() as u64),
            SubgroupKind::Whole => parent.size(),
            SubgroupKind::IntMultiples(_) | SubgroupKind::FirstAxis => Size::Infinite,
            SubgroupKind::BlockLast { last, .. } => last.size(component(parent)),
        }
    }

    /// Number of cosets in the parent.
    pub fn index_in(&self, parent: &Alphabet) -> Size {
        match (&self.kind, parent.size(), self.size(parent)) {
            (SubgroupKind::Whole, _, _) => Size::Finite(1),
            (SubgroupKind::IntMultiples(d), _, _) => Size::Finite(d.try_into().unwrap_or(u64::MAX)),
            (_, Size::Finite(n), Size::Finite(h)) => Size::Finite(n / h),
            _ => Size::Infinite,
        }
    }

    pub fn is_trivial(&self, parent: &Alphabet) -> bool {
        self.size(parent) == Size::Finite(1)
    }

    pub fn elements(&self) -> Option<&[Elem]> {
        match &self.kind {
            SubgroupKind::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn iter<'a>(&'a self, parent: &'a Alphabet) -> Box<dyn Iterator<Item = Elem> + 'a> {
        match &self.kind {
            SubgroupKind::Finite(v) => Box::new(v.iter().cloned()),
            SubgroupKind::Whole => parent.iter(),
            SubgroupKind::IntMultiples(d) => Box::new((0u64..).map(move |k| Elem::Int(d * int_unrank(k)))),
            SubgroupKind::FirstAxis => {
                Box::new((0u64..).map(|k| Elem::Tuple(vec![Elem::Int(int_unrank(k)), Elem::int(0)])))
            }
            SubgroupKind::BlockLast { len, last } => {
                let base = component(parent);
                let prefix = vec![base.identity(); len - 1];
                Box::new(last.iter(base).map(move |l| {
                    let mut t = prefix.clone();
                    t.push(l);
                    Elem::Tuple(t)
                }))
            }
        }
    }

    /// First conjugation `g·h·g⁻¹ ∉ H` over the first `bound` elements, if any.
    pub fn check_normal(&self, parent: &Alphabet, bound: usize) -> Option<(Elem, Elem)> {
        if parent.is_abelian() {
            return None;
        }
        let hs: Vec<Elem> = self.iter(parent).take(bound).collect();
        for g in parent.enumerate(bound) {
            for h in &hs {
                let c = parent.mul(&parent.mul(&g, h), &parent.inv(&g));
                if !self.contains(parent, &c) {
                    return Some((g, h.clone()));
                }
            }
        }
        None
    }

    /// First closure failure over the first `bound` subgroup elements, if any.
    pub fn check_closed(&self, parent: &Alphabet, bound: usize) -> Option<String> {
        let hs: Vec<Elem> = self.iter(parent).take(bound).collect();
        if !self.contains(parent, &parent.identity()) {
            return Some("identity missing".into());
        }
        for a in &hs {
            if !self.contains(parent, &parent.inv(a)) {
                return Some(format!("inverse of {a} missing"));
            }
            for b in &hs {
                if !self.contains(parent, &parent.mul(a, b)) {
                    return Some(format!("{a} * {b} missing"));
                }
            }
        }
        None
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SubgroupKind::Finite(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", parts.join(","))
            }
            SubgroupKind::Whole => "G".into(),
            SubgroupKind::IntMultiples(d) => format!("{d}Z"),
            SubgroupKind::FirstAxis => "Zx{0}".into(),
            SubgroupKind::BlockLast { len, last } => format!("1^{}x{}", len - 1, last.describe()),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            SubgroupKind::Finite(v) => {
                json!({"kind": "finite_list", "elems": v.iter().map(Elem::to_json).collect::<Vec<_>>()})
            }
            SubgroupKind::Whole => json!({"kind": "builtin", "name": "whole"}),
            SubgroupKind::IntMultiples(d) if *d == BigInt::from(2) => json!({"kind": "builtin", "name": "evens"}),
            SubgroupKind::IntMultiples(d) => json!({"kind": "generated", "gens": [Elem::Int(d.clone()).to_json()]}),
            SubgroupKind::FirstAxis => json!({"kind": "builtin", "name": "first_axis"}),
            SubgroupKind::BlockLast { len, last } => {
                json!({"kind": "block_last", "len": len, "last": last.to_json()})
            }
        }
    }

    pub fn from_json(parent: &Alphabet, v: &Value, pointer: &str) -> Result<Subgroup> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid(pointer, "subgroup needs a string \"kind\""))?;
        let list = |name: &str| -> Result<Vec<Elem>> {
            let arr = v
                .get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| invalid(format!("{pointer}/{name}"), "expected an array"))?;
            arr.iter()
                .enumerate()
                .map(|(i, x)| {
                    parent.decode(x).map_err(|e| invalid(format!("{pointer}/{name}/{i}"), e.to_string()))
                })
                .collect()
        };
        let sub = match kind {
            "finite_list" => Subgroup::finite(parent, list("elems")?).map_err(|e| match e {
                Error::Validation { message, .. } => invalid(format!("{pointer}/elems"), message),
                other => other,
            })?,
            "generated" => Subgroup::generated(parent, &list("gens")?)
                .map_err(|e| invalid(format!("{pointer}/gens"), e.to_string()))?,
            "builtin" => {
                let name = v.get("name").and_then(Value::as_str).unwrap_or_default();
                match (name, parent) {
                    ("evens", Alphabet::Int) => Subgroup::int_multiples(2),
                    ("prufer2_H1", Alphabet::Prufer2) => {
                        Subgroup::finite_unchecked(parent, vec![parent.identity(), Elem::dyadic(1, 1)])
                    }
                    ("first_axis", Alphabet::IntPair) => Subgroup::first_axis(),
                    ("whole", _) => Subgroup::whole(),
                    ("trivial", _) => Subgroup::trivial(parent),
                    _ => {
                        return Err(invalid(
                            format!("{pointer}/name"),
                            format!("builtin {name:?} is not available in {}", parent.describe()),
                        ))
                    }
                }
            }
            other => return Err(invalid(pointer, format!("unknown subgroup kind {other:?}"))),
        };
        Ok(sub)
    }
}

/// A coset `rep·H` of a normal subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub rep: Elem,
    pub sub: Subgroup,
}

impl Coset {
    pub fn new(parent: &Alphabet, rep: Elem, sub: Subgroup) -> Result<Coset> {
        let rep = sub.canon(parent, &rep)?;
        Ok(Coset { rep, sub })
    }

    pub fn contains(&self, parent: &Alphabet, x: &Elem) -> bool {
        self.sub.contains(parent, &parent.mul(&parent.inv(&self.rep), x))
    }

    pub fn to_json(&self) -> Value {
        json!({"rep": self.rep.to_json(), "subgroup": self.sub.to_json()})
    }
}

/// `rep₁⁻¹·rep₂ ∈ H`.
pub fn coset_eq(parent: &Alphabet, c1: &Coset, c2: &Coset) -> Result<bool> {
    if c1.sub != c2.sub {
        return Err(Error::MismatchedSubgroup);
    }
    Ok(c1.sub.contains(parent, &parent.mul(&parent.inv(&c1.rep), &c2.rep)))
}

pub fn coset_mul(parent: &Alphabet, c1: &Coset, c2: &Coset) -> Result<Coset> {
    if c1.sub != c2.sub {
        return Err(Error::MismatchedSubgroup);
    }
    if !c1.sub.normal {
        return Err(Error::NotNormal);
    }
    Coset::new(parent, parent.mul(&c1.rep, &c2.rep), c1.sub.clone())
}

pub fn quotient_group(g: &Alphabet, h: &Subgroup) -> Result<Alphabet> {
    if !h.normal {
        return Err(Error::NotNormal);
    }
    if let Some((a, b)) = h.check_normal(g, 64) {
        return Err(Error::LawViolation(format!("{a}·{b}·{a}⁻¹ leaves the subgroup")));
    }
    Ok(Alphabet::quotient(g.clone(), h.clone()))
}

/// The section `S` of a quotient: each coset maps to its canonical representative,
/// which is the first element of the coset in the base enumeration.
pub fn section_of(q: &Alphabet, coset_rep: &Elem) -> Result<Elem> {
    match q {
        Alphabet::Quotient { base, sub } => sub.canon(base, coset_rep),
        _ => Err(Error::NoCanonicalRep(format!("{} is not a quotient", q.describe()))),
    }
}

/// The first `n` pairs `(coset, S(coset))` of a quotient, rendered for reports.
pub fn section_table(q: &Alphabet, n: usize) -> Vec<(String, Elem)> {
    match q {
        Alphabet::Quotient { sub, .. } => q
            .enumerate(n)
            .into_iter()
            .map(|rep| (format!("{rep}·{}", sub.describe()), rep))
            .collect(),
        _ => Vec::new(),
    }
}
