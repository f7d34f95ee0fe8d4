use serde_json::{json, Value};

use super::alphabet::Alphabet;
use super::elem::Elem;
use super::prufer;
use super::subgroup::Subgroup;
use crate::error::{invalid, Result};
use crate::shift_space::Shift;

/// A map `G -> G` that becomes a homomorphism `G -> G/N` after taking cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Identity,
    /// `[g,i] -> [g,i+1]` on the Prüfer group.
    PruferHalf,
    Table(Vec<(Elem, Elem)>),
    /// Every letter goes to the identity.
    Constant,
    /// The inner rule applied in the base group and pushed into the quotient.
    Lifted(Box<Rule>),
    /// `(a_1..a_M) -> (a_2..a_M, r)` with `r` any follower of the block.
    HigherBlock(Box<Shift>),
}

impl Rule {
    /// A representative of the image of `a`.
    pub fn apply(&self, g: &Alphabet, a: &Elem) -> Elem {
        match self {
            Rule::Identity => a.clone(),
            Rule::PruferHalf => prufer::half(a),
            Rule::Table(map) => map
                .iter()
                .find(|(x, _)| x == a)
                .map(|(_, y)| y.clone())
                .unwrap_or_else(|| panic!("table has no entry for {a}")),
            Rule::Constant => g.identity(),
            Rule::Lifted(inner) => lift(g, inner, a),
            Rule::HigherBlock(shift) => {
                let t = a.as_tuple().expect("block letter");
                let mut out = t[1..].to_vec();
                let next = shift.follower_rep(t, 1).expect("letters of the block shift have followers");
                out.push(next[0].clone());
                Elem::Tuple(out)
            }
        }
    }

    /// The coset `f(a)` as its canonical representative.
    pub fn class(&self, g: &Alphabet, n: &Subgroup, a: &Elem) -> Elem {
        n.canon_unchecked(g, &self.apply(g, a))
    }

    pub fn in_kernel(&self, g: &Alphabet, n: &Subgroup, a: &Elem) -> bool {
        n.contains(g, &self.apply(g, a))
    }

    /// First pair with `f(ab) != f(a)f(b)` among the first `bound` elements.
    pub fn check_hom(&self, g: &Alphabet, n: &Subgroup, bound: usize) -> Option<(Elem, Elem)> {
        let elems = g.enumerate(bound);
        let images: Vec<Elem> = elems.iter().map(|a| self.apply(g, a)).collect();
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let lhs = self.apply(g, &g.mul(a, b));
                let rhs = g.mul(&images[i], &images[j]);
                if !n.contains(g, &g.mul(&g.inv(&lhs), &rhs)) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }

    /// Some `a` with `f(a) = b·N`, if one exists.
    pub fn preimage(&self, g: &Alphabet, n: &Subgroup, b: &Elem, bound: usize) -> Option<Elem> {
        let hit = |a: &Elem| n.contains(g, &g.mul(&g.inv(b), &self.apply(g, a)));
        match self {
            Rule::Identity => Some(b.clone()),
            Rule::Constant => n.contains(g, b).then(|| g.identity()),
            Rule::PruferHalf => {
                let members: Vec<Elem> = n.iter(g).take(bound.max(1)).collect();
                members.iter().map(|h| g.mul(b, h)).find_map(|c| {
                    let a = prufer::double(&c);
                    (prufer::half(&a) == c).then_some(a)
                })
            }
            Rule::HigherBlock(shift) => {
                let t = b.as_tuple()?;
                let p = shift.predecessor_rep(t, 1)?;
                let mut a = p;
                a.extend_from_slice(&t[..t.len() - 1]);
                let a = Elem::Tuple(a);
                hit(&a).then_some(a)
            }
            Rule::Table(_) | Rule::Lifted(_) => g.iter().take(bound).find(|a| hit(a)),
        }
    }

    /// Whether `a -> f(a)` is onto `G/N`, decided exactly when possible.
    pub fn surjective(&self, g: &Alphabet, n: &Subgroup, bound: usize) -> Option<bool> {
        match self {
            Rule::Identity | Rule::PruferHalf | Rule::HigherBlock(_) => Some(true),
            _ => {
                let index = n.index_in(g).finite()?;
                let q = Alphabet::quotient(g.clone(), n.clone());
                let all = q.enumerate(index as usize);
                Some(all.iter().all(|c| self.preimage(g, n, c, bound.max(g.size().finite().unwrap_or(0) as usize)).is_some()))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Rule::Identity => "canonical_projection".into(),
            Rule::PruferHalf => "prufer_half".into(),
            Rule::Table(_) => "table".into(),
            Rule::Constant => "constant".into(),
            Rule::Lifted(inner) => format!("lifted({})", inner.describe()),
            Rule::HigherBlock(_) => "higher_block".into(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Rule::Table(map) => json!({
                "kind": "table",
                "map": map.iter().map(|(a, b)| json!([a.to_json(), b.to_json()])).collect::<Vec<_>>(),
            }),
            Rule::Lifted(inner) => json!({"kind": "lifted", "inner": inner.to_json()}),
            other => json!({"kind": other.describe()}),
        }
    }

    pub fn from_json(g: &Alphabet, v: &Value, pointer: &str) -> Result<Rule> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid(pointer, "hom needs a string \"kind\""))?;
        Ok(match kind {
            "canonical_projection" | "identity" => Rule::Identity,
            "prufer_half" | "prufer_half_then_coset" => {
                if *g != Alphabet::Prufer2 {
                    return Err(invalid(pointer, "prufer_half needs the prufer2 alphabet"));
                }
                Rule::PruferHalf
            }
            "constant" => Rule::Constant,
            "table" => {
                let arr = v
                    .get("map")
                    .and_then(Value::as_array)
                    .ok_or_else(|| invalid(format!("{pointer}/map"), "expected an array of pairs"))?;
                let mut map = Vec::new();
                for (i, pair) in arr.iter().enumerate() {
                    let at = format!("{pointer}/map/{i}");
                    let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| invalid(&at, "expected a pair"))?;
                    let a = g.decode(&p[0]).map_err(|e| invalid(format!("{at}/0"), e.to_string()))?;
                    let b = g.decode(&p[1]).map_err(|e| invalid(format!("{at}/1"), e.to_string()))?;
                    map.push((a, b));
                }
                if let Some(n) = g.size().finite() {
                    for a in g.iter() {
                        if !map.iter().any(|(x, _)| *x == a) {
                            return Err(invalid(format!("{pointer}/map"), format!("no entry for {a} (|G| = {n})")));
                        }
                    }
                } else {
                    return Err(invalid(pointer, "table homs need a finite alphabet"));
                }
                Rule::Table(map)
            }
            other => return Err(invalid(pointer, format!("unknown hom kind {other:?}"))),
        })
    }
}

fn lift(g: &Alphabet, inner: &Rule, a: &Elem) -> Elem {
    match g {
        Alphabet::Sub { base, .. } => lift(base, inner, a),
        Alphabet::Quotient { base, sub } => sub.canon_unchecked(base, &inner.apply(base, a)),
        _ => inner.apply(g, a),
    }
}

/// Preimages of `N` under the rule, when that set can be listed exactly.
pub fn kernel(g: &Alphabet, n: &Subgroup, rule: &Rule) -> Option<Vec<Elem>> {
    match (rule, g.size()) {
        (_, crate::group_core::Size::Finite(_)) => Some(g.iter().filter(|a| rule.in_kernel(g, n, a)).collect()),
        (Rule::Identity, _) => n.elements().map(<[Elem]>::to_vec),
        (Rule::PruferHalf, _) => {
            let mut out: Vec<Elem> = n
                .elements()?
                .iter()
                .filter_map(|c| {
                    let a = prufer::double(c);
                    (prufer::half(&a) == *c).then_some(a)
                })
                .collect();
            out.sort_by_key(|e| g.order_key(e));
            out.dedup();
            Some(out)
        }
        _ => None,
    }
}
