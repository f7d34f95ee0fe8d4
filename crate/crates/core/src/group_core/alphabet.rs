use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::elem::{json_to_big, Elem};
use super::prufer;
use super::subgroup::Subgroup;
use crate::error::{invalid, Error, Result};
use crate::shift_space::Shift;

/// Cardinality of an alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Size {
    Finite(u64),
    Infinite,
}

impl Size {
    pub fn is_finite(self) -> bool {
        matches!(self, Size::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Size::Finite(n) => Some(n),
            Size::Infinite => None,
        }
    }
}

/// A countable alphabet with exact operations and a canonical enumeration.
///
/// Everything except `UnionCyclic` is a group. `UnionCyclic` is the disjoint
/// union of cyclic groups where the product of letters from different groups
/// is the letter from the group of larger index; it is an inverse monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Cyclic(u64),
    Sym3,
    Int,
    IntPair,
    Prufer2,
    Block { base: Box<Alphabet>, len: usize },
    Product(Vec<Alphabet>),
    Quotient { base: Box<Alphabet>, sub: Box<Subgroup> },
    /// A subgroup viewed as a group in its own right.
    Sub { base: Box<Alphabet>, sub: Box<Subgroup> },
    /// The group of allowed blocks of length `len` of a shift.
    Language { shift: Box<Shift>, len: usize },
    /// `orders: None` means the infinite family of orders 2, 3, 4, ...
    UnionCyclic { orders: Option<Vec<u64>> },
}

const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub(crate) fn int_unrank(k: u64) -> BigInt {
    if k % 2 == 1 {
        BigInt::from(k.div_ceil(2))
    } else {
        -BigInt::from(k / 2)
    }
}

pub(crate) fn int_rank(v: &BigInt) -> BigUint {
    let two = BigInt::from(2);
    let r = if v.is_positive() { v * &two - 1 } else { -v * &two };
    r.to_biguint().expect("non-negative")
}

impl Alphabet {
    pub fn quotient(base: Alphabet, sub: Subgroup) -> Alphabet {
        Alphabet::Quotient { base: Box::new(base), sub: Box::new(sub) }
    }

    pub fn sub(base: Alphabet, sub: Subgroup) -> Alphabet {
        Alphabet::Sub { base: Box::new(base), sub: Box::new(sub) }
    }

    pub fn block(base: Alphabet, len: usize) -> Alphabet {
        Alphabet::Block { base: Box::new(base), len }
    }

    pub fn is_group(&self) -> bool {
        match self {
            Alphabet::UnionCyclic { .. } => false,
            Alphabet::Block { base, .. } => base.is_group(),
            Alphabet::Product(fs) => fs.iter().all(Alphabet::is_group),
            _ => true,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Alphabet::Sym3 => false,
            Alphabet::Block { base, .. } => base.is_abelian(),
            Alphabet::Product(fs) => fs.iter().all(Alphabet::is_abelian),
            Alphabet::Quotient { base, .. } | Alphabet::Sub { base, .. } => base.is_abelian(),
            Alphabet::Language { shift, .. } => shift.alphabet.is_abelian(),
            _ => true,
        }
    }

    /// Component alphabets when elements are tuples.
    pub fn factors(&self) -> Option<Vec<&Alphabet>> {
        match self {
            Alphabet::IntPair => None,
            Alphabet::Block { base, len } => Some(vec![base.as_ref(); *len]),
            Alphabet::Product(fs) => Some(fs.iter().collect()),
            _ => None,
        }
    }

    pub fn identity(&self) -> Elem {
        match self {
            Alphabet::Cyclic(_) => Elem::Mod(0),
            Alphabet::Sym3 => Elem::Perm([0, 1, 2]),
            Alphabet::Int => Elem::Int(BigInt::zero()),
            Alphabet::IntPair => Elem::pair(0, 0),
            Alphabet::Prufer2 => prufer::identity(),
            Alphabet::Block { base, len } => Elem::Tuple(vec![base.identity(); *len]),
            Alphabet::Product(fs) => Elem::Tuple(fs.iter().map(Alphabet::identity).collect()),
            Alphabet::Quotient { base, .. } | Alphabet::Sub { base, .. } => base.identity(),
            Alphabet::Language { shift, len } => Elem::Tuple(vec![shift.alphabet.identity(); *len]),
            Alphabet::UnionCyclic { .. } => Elem::Tuple(vec![Elem::Mod(0), Elem::Mod(0)]),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Alphabet::Cyclic(n), Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 + *y as u128) % *n as u128) as u64)
            }
            (Alphabet::Sym3, Elem::Perm(p), Elem::Perm(q)) => {
                Elem::Perm([p[q[0] as usize], p[q[1] as usize], p[q[2] as usize]])
            }
            (Alphabet::Int, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Alphabet::Prufer2, _, _) => prufer::mul(a, b),
            (Alphabet::IntPair, Elem::Tuple(x), Elem::Tuple(y)) => {
                Elem::Tuple(vec![Alphabet::Int.mul(&x[0], &y[0]), Alphabet::Int.mul(&x[1], &y[1])])
            }
            (Alphabet::Block { base, .. }, Elem::Tuple(x), Elem::Tuple(y)) => {
                Elem::Tuple(x.iter().zip(y).map(|(u, v)| base.mul(u, v)).collect())
            }
            (Alphabet::Product(fs), Elem::Tuple(x), Elem::Tuple(y)) => {
                Elem::Tuple(fs.iter().zip(x.iter().zip(y)).map(|(f, (u, v))| f.mul(u, v)).collect())
            }
            (Alphabet::Quotient { base, sub }, _, _) => sub.canon_unchecked(base, &base.mul(a, b)),
            (Alphabet::Sub { base, .. }, _, _) => base.mul(a, b),
            (Alphabet::Language { shift, .. }, Elem::Tuple(x), Elem::Tuple(y)) => Elem::Tuple(
                x.iter().zip(y).map(|(u, v)| shift.alphabet.mul(u, v)).collect(),
            ),
            (Alphabet::UnionCyclic { .. }, Elem::Tuple(x), Elem::Tuple(y)) => {
                let (gi, gj) = (union_index(x), union_index(y));
                if gi == gj {
                    let n = self.union_order(gi);
                    Elem::Tuple(vec![Elem::Mod(gi), Elem::Mod((union_res(x) + union_res(y)) % n)])
                } else if gi > gj {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            _ => panic!("element/alphabet mismatch: {a} * {b} in {}", self.describe()),
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match (self, a) {
            (Alphabet::Cyclic(n), Elem::Mod(x)) => Elem::Mod((n - x) % n),
            (Alphabet::Sym3, Elem::Perm(p)) => {
                let mut q = [0u8; 3];
                for (i, &v) in p.iter().enumerate() {
                    q[v as usize] = i as u8;
                }
                Elem::Perm(q)
            }
            (Alphabet::Int, Elem::Int(x)) => Elem::Int(-x),
            (Alphabet::Prufer2, _) => prufer::inv(a),
            (Alphabet::IntPair, Elem::Tuple(x)) => {
                Elem::Tuple(x.iter().map(|v| Alphabet::Int.inv(v)).collect())
            }
            (Alphabet::Block { base, .. }, Elem::Tuple(x)) => {
                Elem::Tuple(x.iter().map(|v| base.inv(v)).collect())
            }
            (Alphabet::Product(fs), Elem::Tuple(x)) => {
                Elem::Tuple(fs.iter().zip(x).map(|(f, v)| f.inv(v)).collect())
            }
            (Alphabet::Quotient { base, sub }, _) => sub.canon_unchecked(base, &base.inv(a)),
            (Alphabet::Sub { base, .. }, _) => base.inv(a),
            (Alphabet::Language { shift, .. }, Elem::Tuple(x)) => {
                Elem::Tuple(x.iter().map(|v| shift.alphabet.inv(v)).collect())
            }
            (Alphabet::UnionCyclic { .. }, Elem::Tuple(x)) => {
                let gi = union_index(x);
                let n = self.union_order(gi);
                Elem::Tuple(vec![Elem::Mod(gi), Elem::Mod((n - union_res(x)) % n)])
            }
            _ => panic!("element/alphabet mismatch: {a} in {}", self.describe()),
        }
    }

    pub fn pow(&self, a: &Elem, k: u64) -> Elem {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn mul_words(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(x, y)| self.mul(x, y)).collect()
    }

    pub fn inv_word(&self, a: &[Elem]) -> Vec<Elem> {
        a.iter().map(|x| self.inv(x)).collect()
    }

    fn union_order(&self, group: u64) -> u64 {
        match self {
            Alphabet::UnionCyclic { orders: Some(o) } => o[group as usize],
            _ => group + 2,
        }
    }

    pub fn validate(&self, a: &Elem) -> Result<()> {
        let bad = || Error::MalformedElement(format!("{a} is not an element of {}", self.describe()));
        match (self, a) {
            (Alphabet::Cyclic(n), Elem::Mod(x)) if x < n => Ok(()),
            (Alphabet::Sym3, Elem::Perm(p)) if PERMS.contains(p) => Ok(()),
            (Alphabet::Int, Elem::Int(_)) => Ok(()),
            (Alphabet::Prufer2, Elem::Dyadic { num, level }) => prufer::validate(num, *level),
            (Alphabet::IntPair, Elem::Tuple(x)) if x.len() == 2 => {
                x.iter().try_for_each(|v| Alphabet::Int.validate(v))
            }
            (Alphabet::Block { base, len }, Elem::Tuple(x)) if x.len() == *len => {
                x.iter().try_for_each(|v| base.validate(v))
            }
            (Alphabet::Product(fs), Elem::Tuple(x)) if x.len() == fs.len() => {
                fs.iter().zip(x).try_for_each(|(f, v)| f.validate(v))
            }
            (Alphabet::Quotient { base, sub }, _) => {
                base.validate(a)?;
                if sub.canon(base, a)? == *a {
                    Ok(())
                } else {
                    Err(Error::MalformedElement(format!("{a} is not a canonical coset representative")))
                }
            }
            (Alphabet::Sub { base, sub }, _) => {
                base.validate(a)?;
                if sub.contains(base, a) {
                    Ok(())
                } else {
                    Err(bad())
                }
            }
            (Alphabet::Language { shift, len }, Elem::Tuple(x)) if x.len() == *len => {
                x.iter().try_for_each(|v| shift.alphabet.validate(v))?;
                if shift.in_language(x) {
                    Ok(())
                } else {
                    Err(bad())
                }
            }
            (Alphabet::UnionCyclic { orders }, Elem::Tuple(x)) if x.len() == 2 => {
                let (Elem::Mod(g), Elem::Mod(r)) = (&x[0], &x[1]) else { return Err(bad()) };
                if let Some(o) = orders {
                    if *g as usize >= o.len() {
                        return Err(bad());
                    }
                }
                if *r < self.union_order(*g) {
                    Ok(())
                } else {
                    Err(bad())
                }
            }
            _ => Err(bad()),
        }
    }

    /// Canonical form of a possibly non-canonical encoding.
    pub fn canon(&self, a: &Elem) -> Result<Elem> {
        match self {
            Alphabet::Quotient { base, sub } => sub.canon(base, &base.canon(a)?),
            _ => Ok(a.clone()),
        }
    }

    pub fn size(&self) -> Size {
        match self {
            Alphabet::Cyclic(n) => Size::Finite(*n),
            Alphabet::Sym3 => Size::Finite(6),
            Alphabet::Int | Alphabet::IntPair | Alphabet::Prufer2 => Size::Infinite,
            Alphabet::Block { base, len } => match base.size() {
                Size::Finite(n) => n.checked_pow(*len as u32).map_or(Size::Infinite, Size::Finite),
                Size::Infinite => Size::Infinite,
            },
            Alphabet::Product(fs) => {
                let mut total: u64 = 1;
                for f in fs {
                    match f.size() {
                        Size::Finite(n) => total = total.saturating_mul(n),
                        Size::Infinite => return Size::Infinite,
                    }
                }
                Size::Finite(total)
            }
            Alphabet::Quotient { base, sub } => sub.index_in(base),
            Alphabet::Sub { base, sub } => sub.size(base),
            Alphabet::Language { shift, len } => match shift.alphabet.size() {
                Size::Finite(_) => {
                    let base = Alphabet::block(shift.alphabet.clone(), *len);
                    Size::Finite(base.iter().filter(|t| shift.in_language(t.as_tuple().unwrap())).count() as u64)
                }
                Size::Infinite => Size::Infinite,
            },
            Alphabet::UnionCyclic { orders: Some(o) } => Size::Finite(o.iter().sum()),
            Alphabet::UnionCyclic { orders: None } => Size::Infinite,
        }
    }

    /// The canonical enumeration, lazily.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Elem> + '_> {
        match self {
            Alphabet::Cyclic(n) => Box::new((0..*n).map(Elem::Mod)),
            Alphabet::Sym3 => Box::new(PERMS.iter().map(|p| Elem::Perm(*p))),
            Alphabet::Int => Box::new((0u64..).map(|k| Elem::Int(int_unrank(k)))),
            Alphabet::Prufer2 => Box::new((0u64..).map(prufer::unrank)),
            Alphabet::IntPair => {
                Box::new(ShellIter::new(vec![&Alphabet::Int, &Alphabet::Int]))
            }
            Alphabet::Block { .. } | Alphabet::Product(_) => {
                Box::new(ShellIter::new(self.factors().expect("tuple alphabet")))
            }
            Alphabet::Quotient { base, sub } => {
                let it = base.iter().filter(move |x| sub.canon_unchecked(base, x) == *x);
                match self.size() {
                    Size::Finite(n) => Box::new(it.take(n as usize)),
                    Size::Infinite => Box::new(it),
                }
            }
            Alphabet::Sub { base, sub } => sub.iter(base),
            Alphabet::Language { shift, len } => {
                let base = Alphabet::block(shift.alphabet.clone(), *len);
                let items: Box<dyn Iterator<Item = Elem>> = match base.size() {
                    Size::Finite(_) => Box::new(base.iter().collect::<Vec<_>>().into_iter()),
                    Size::Infinite => Box::new(OwnedIter::new(base)),
                };
                Box::new(items.filter(move |t| shift.in_language(t.as_tuple().unwrap())))
            }
            Alphabet::UnionCyclic { orders } => {
                let groups: Box<dyn Iterator<Item = u64>> = match orders {
                    Some(o) => Box::new(0..o.len() as u64),
                    None => Box::new(0u64..),
                };
                Box::new(groups.flat_map(move |g| {
                    (0..self.union_order(g)).map(move |r| Elem::Tuple(vec![Elem::Mod(g), Elem::Mod(r)]))
                }))
            }
        }
    }

    /// The first `n` enumerated elements (fewer when the alphabet is smaller).
    pub fn enumerate(&self, n: usize) -> Vec<Elem> {
        self.iter().take(n).collect()
    }

    /// Position in the canonical enumeration.
    pub fn rank(&self, a: &Elem) -> BigUint {
        match (self, a) {
            (Alphabet::Cyclic(_), Elem::Mod(x)) => BigUint::from(*x),
            (Alphabet::Sym3, Elem::Perm(p)) => {
                BigUint::from(PERMS.iter().position(|q| q == p).expect("valid permutation"))
            }
            (Alphabet::Int, Elem::Int(v)) => int_rank(v),
            (Alphabet::Prufer2, _) => prufer::rank(a),
            (Alphabet::IntPair, Elem::Tuple(x)) => {
                shell_rank(&[&Alphabet::Int, &Alphabet::Int], x)
            }
            (Alphabet::Block { .. } | Alphabet::Product(_), Elem::Tuple(x)) => {
                shell_rank(&self.factors().expect("tuple alphabet"), x)
            }
            (Alphabet::UnionCyclic { .. }, Elem::Tuple(x)) => {
                let g = union_index(x);
                let before: u64 = (0..g).map(|i| self.union_order(i)).sum();
                BigUint::from(before + union_res(x))
            }
            _ => BigUint::from(
                self.iter().position(|x| x == *a).expect("element occurs in enumeration"),
            ),
        }
    }

    /// A key that orders elements like the enumeration; cheaper than `rank` for
    /// filtered alphabets since their order is inherited from the base.
    pub fn order_key(&self, a: &Elem) -> BigUint {
        match self {
            Alphabet::Quotient { base, .. } => base.order_key(a),
            Alphabet::Language { shift, len } => {
                Alphabet::block(shift.alphabet.clone(), *len).order_key(a)
            }
            _ => self.rank(a),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Alphabet::Cyclic(n) => format!("Z{n}"),
            Alphabet::Sym3 => "S3".into(),
            Alphabet::Int => "Z".into(),
            Alphabet::IntPair => "Z^2".into(),
            Alphabet::Prufer2 => "Z(2^inf)".into(),
            Alphabet::Block { base, len } => format!("({})^{len}", base.describe()),
            Alphabet::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(Alphabet::describe).collect();
                format!("({})", parts.join(" x "))
            }
            Alphabet::Quotient { base, sub } => format!("{}/{}", base.describe(), sub.describe()),
            Alphabet::Sub { base, sub } => format!("{} < {}", sub.describe(), base.describe()),
            Alphabet::Language { shift, len } => format!("B_{len}({})", shift.alphabet.describe()),
            Alphabet::UnionCyclic { orders: Some(o) } => {
                let parts: Vec<String> = o.iter().map(|n| format!("Z{n}")).collect();
                format!("union({})", parts.join(","))
            }
            Alphabet::UnionCyclic { orders: None } => "union(Z2,Z3,...)".into(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Alphabet::Cyclic(n) => json!({"kind": "finite_cyclic", "n": n}),
            Alphabet::Sym3 => json!({"kind": "symmetric3"}),
            Alphabet::Int => json!({"kind": "int"}),
            Alphabet::IntPair => json!({"kind": "int_pair"}),
            Alphabet::Prufer2 => json!({"kind": "prufer2"}),
            Alphabet::Block { base, len } => json!({"kind": "block_group", "base": base.to_json(), "len": len}),
            Alphabet::Product(fs) => {
                json!({"kind": "product", "factors": fs.iter().map(Alphabet::to_json).collect::<Vec<_>>()})
            }
            Alphabet::Quotient { base, sub } => {
                json!({"kind": "quotient", "base": base.to_json(), "subgroup": sub.to_json()})
            }
            Alphabet::Sub { base, sub } => {
                json!({"kind": "subgroup", "base": base.to_json(), "subgroup": sub.to_json()})
            }
            Alphabet::Language { shift, len } => {
                json!({"kind": "block_language", "len": len, "base": shift.alphabet.to_json()})
            }
            Alphabet::UnionCyclic { orders } => match orders {
                Some(o) => json!({"kind": "union_cyclic", "orders": o}),
                None => json!({"kind": "union_cyclic"}),
            },
        }
    }

    pub fn from_json(v: &Value, pointer: &str) -> Result<Alphabet> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid(pointer, "alphabet needs a string \"kind\""))?;
        let field = |name: &str| {
            v.get(name).ok_or_else(|| invalid(format!("{pointer}/{name}"), "missing field"))
        };
        Ok(match kind {
            "finite_cyclic" => {
                let n = field("n")?.as_u64().filter(|n| *n >= 1);
                Alphabet::Cyclic(n.ok_or_else(|| invalid(format!("{pointer}/n"), "expected a positive integer"))?)
            }
            "symmetric3" => Alphabet::Sym3,
            "int" => Alphabet::Int,
            "int_pair" => Alphabet::IntPair,
            "prufer2" => Alphabet::Prufer2,
            "block_group" => {
                let base = Alphabet::from_json(field("base")?, &format!("{pointer}/base"))?;
                let len = field("len")?.as_u64().filter(|n| *n >= 1);
                let len = len.ok_or_else(|| invalid(format!("{pointer}/len"), "expected a positive integer"))?;
                Alphabet::block(base, len as usize)
            }
            "product" => {
                let items = field("factors")?
                    .as_array()
                    .ok_or_else(|| invalid(format!("{pointer}/factors"), "expected an array"))?;
                let fs = items
                    .iter()
                    .enumerate()
                    .map(|(i, f)| Alphabet::from_json(f, &format!("{pointer}/factors/{i}")))
                    .collect::<Result<Vec<_>>>()?;
                Alphabet::Product(fs)
            }
            "quotient" => {
                let base = Alphabet::from_json(field("base")?, &format!("{pointer}/base"))?;
                let sub = Subgroup::from_json(&base, field("subgroup")?, &format!("{pointer}/subgroup"))?;
                if !sub.normal {
                    return Err(invalid(format!("{pointer}/subgroup"), "quotient needs a normal subgroup"));
                }
                Alphabet::quotient(base, sub)
            }
            "union_cyclic" => match v.get("orders") {
                None => Alphabet::UnionCyclic { orders: None },
                Some(o) => {
                    let orders = o
                        .as_array()
                        .and_then(|a| a.iter().map(Value::as_u64).collect::<Option<Vec<_>>>())
                        .filter(|o| !o.is_empty() && o.iter().all(|n| *n >= 1))
                        .ok_or_else(|| invalid(format!("{pointer}/orders"), "expected positive integers"))?;
                    Alphabet::UnionCyclic { orders: Some(orders) }
                }
            },
            other => return Err(invalid(pointer, format!("unknown alphabet kind {other:?}"))),
        })
    }

    /// Decodes a JSON element literal and validates it.
    pub fn decode(&self, v: &Value) -> Result<Elem> {
        let bad = || Error::MalformedElement(format!("{v} is not an element of {}", self.describe()));
        let e = match self {
            Alphabet::Cyclic(_) => Elem::Mod(v.as_u64().ok_or_else(bad)?),
            Alphabet::Int => Elem::Int(json_to_big(v).ok_or_else(bad)?),
            Alphabet::Prufer2 => {
                let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                let num = json_to_big(&arr[0]).and_then(|n| n.to_biguint()).ok_or_else(bad)?;
                let level = arr[1].as_u64().and_then(|l| u32::try_from(l).ok()).ok_or_else(bad)?;
                prufer::validate(&num, level)?;
                Elem::Dyadic { num, level }
            }
            Alphabet::Sym3 => {
                let arr = v.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
                let mut p = [0u8; 3];
                for (i, x) in arr.iter().enumerate() {
                    p[i] = x.as_u64().and_then(|x| u8::try_from(x).ok()).ok_or_else(bad)?;
                }
                Elem::Perm(p)
            }
            Alphabet::IntPair => {
                let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                Elem::Tuple(arr.iter().map(|x| Alphabet::Int.decode(x)).collect::<Result<_>>()?)
            }
            Alphabet::Block { .. } | Alphabet::Product(_) => {
                let fs = self.factors().unwrap();
                let arr = v.as_array().filter(|a| a.len() == fs.len()).ok_or_else(bad)?;
                Elem::Tuple(fs.iter().zip(arr).map(|(f, x)| f.decode(x)).collect::<Result<_>>()?)
            }
            Alphabet::Quotient { base, sub } => sub.canon(base, &base.decode(v)?)?,
            Alphabet::Sub { base, .. } => base.decode(v)?,
            Alphabet::Language { shift, len } => {
                let arr = v.as_array().filter(|a| a.len() == *len).ok_or_else(bad)?;
                Elem::Tuple(arr.iter().map(|x| shift.alphabet.decode(x)).collect::<Result<_>>()?)
            }
            Alphabet::UnionCyclic { .. } => {
                let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                let g = arr[0].as_u64().ok_or_else(bad)?;
                let r = arr[1].as_u64().ok_or_else(bad)?;
                Elem::Tuple(vec![Elem::Mod(g), Elem::Mod(r)])
            }
        };
        self.validate(&e)?;
        Ok(e)
    }

    pub fn decode_word(&self, v: &Value) -> Result<Vec<Elem>> {
        let arr = v.as_array().ok_or_else(|| Error::Parse(format!("expected an array of letters, got {v}")))?;
        arr.iter().map(|x| self.decode(x)).collect()
    }
}

fn union_index(x: &[Elem]) -> u64 {
    match x[0] {
        Elem::Mod(g) => g,
        _ => panic!("malformed union element"),
    }
}

fn union_res(x: &[Elem]) -> u64 {
    match x[1] {
        Elem::Mod(r) => r,
        _ => panic!("malformed union element"),
    }
}

fn size_big(a: &Alphabet) -> Option<BigUint> {
    a.size().finite().map(BigUint::from)
}

fn min_size(m: &BigUint, n: &Option<BigUint>) -> BigUint {
    match n {
        Some(n) if n < m => n.clone(),
        _ => m.clone(),
    }
}

/// Rank in shell order: tuples sorted by the largest component index, then
/// lexicographically.
fn shell_rank(factors: &[&Alphabet], x: &[Elem]) -> BigUint {
    let ranks: Vec<BigUint> = factors.iter().zip(x).map(|(f, v)| f.rank(v)).collect();
    let sizes: Vec<Option<BigUint>> = factors.iter().map(|f| size_big(f)).collect();
    let m = ranks.iter().max().cloned().unwrap_or_default();
    let m1 = &m + 1u32;
    let mut total: BigUint = sizes.iter().map(|n| min_size(&m, n)).product();
    let mut has_m = false;
    for j in 0..ranks.len() {
        let upto: BigUint = sizes[j + 1..].iter().map(|n| min_size(&m1, n)).product();
        let below: BigUint = sizes[j + 1..].iter().map(|n| min_size(&m, n)).product();
        let completions = if has_m { upto } else { upto - below };
        total += &ranks[j] * completions;
        if ranks[j] == m {
            has_m = true;
        }
    }
    total
}

/// Shell-order enumeration of a finite product of alphabets.
struct ShellIter<'a> {
    iters: Vec<Box<dyn Iterator<Item = Elem> + 'a>>,
    caches: Vec<Vec<Elem>>,
    shell: usize,
    pending: std::collections::VecDeque<Elem>,
    done: bool,
}

impl<'a> ShellIter<'a> {
    fn new(factors: Vec<&'a Alphabet>) -> Self {
        let n = factors.len();
        ShellIter {
            iters: factors.into_iter().map(|f| f.iter()).collect(),
            caches: vec![Vec::new(); n],
            shell: 0,
            pending: Default::default(),
            done: n == 0,
        }
    }

    fn fill_shell(&mut self) {
        let m = self.shell;
        for (cache, it) in self.caches.iter_mut().zip(self.iters.iter_mut()) {
            while cache.len() <= m {
                match it.next() {
                    Some(e) => cache.push(e),
                    None => break,
                }
            }
        }
        if self.caches.iter().all(|c| c.len() <= m) {
            self.done = true;
            return;
        }
        let limits: Vec<usize> = self.caches.iter().map(|c| c.len().min(m + 1)).collect();
        let k = limits.len();
        let mut idx = vec![0usize; k];
        loop {
            if idx.iter().any(|&r| r == m) {
                self.pending
                    .push_back(Elem::Tuple(idx.iter().zip(&self.caches).map(|(&r, c)| c[r].clone()).collect()));
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    self.shell += 1;
                    return;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < limits[pos] {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

impl Iterator for ShellIter<'_> {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        while self.pending.is_empty() && !self.done {
            self.fill_shell();
        }
        self.pending.pop_front()
    }
}

/// Enumeration of an alphabet that the iterator owns.
struct OwnedIter {
    alphabet: Alphabet,
    pos: usize,
    buffer: Vec<Elem>,
}

impl OwnedIter {
    fn new(alphabet: Alphabet) -> Self {
        OwnedIter { alphabet, pos: 0, buffer: Vec::new() }
    }
}

impl Iterator for OwnedIter {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        if self.pos >= self.buffer.len() {
            let want = (self.buffer.len() * 2).max(64);
            self.buffer = self.alphabet.enumerate(want);
            if self.pos >= self.buffer.len() {
                return None;
            }
        }
        self.pos += 1;
        Some(self.buffer[self.pos - 1].clone())
    }
}
