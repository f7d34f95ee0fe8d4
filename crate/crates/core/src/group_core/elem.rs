use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::Value;

/// A group element in canonical encoding.
///
/// The variant is fixed by the alphabet: residues for finite cyclic groups,
/// arbitrary-precision integers for the integers, reduced dyadic pairs for the
/// Prüfer 2-group, permutations for S3 and tuples for products and blocks.
/// Quotient elements are stored as their canonical representative in the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Mod(u64),
    Int(BigInt),
    /// `[num, level]` stands for `num / 2^level` modulo 1, with `num` odd or `(0, 1)`.
    Dyadic { num: BigUint, level: u32 },
    Perm([u8; 3]),
    Tuple(Vec<Elem>),
}

impl Elem {
    pub fn int(v: i64) -> Elem {
        Elem::Int(BigInt::from(v))
    }

    pub fn pair(a: i64, b: i64) -> Elem {
        Elem::Tuple(vec![Elem::int(a), Elem::int(b)])
    }

    /// Builds a Prüfer element from a pair, normalizing it.
    pub fn dyadic(num: u64, level: u32) -> Elem {
        super::prufer::normalize(BigUint::from(num), level)
    }

    pub fn tuple(items: Vec<Elem>) -> Elem {
        Elem::Tuple(items)
    }

    pub fn as_tuple(&self) -> Option<&[Elem]> {
        match self {
            Elem::Tuple(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Elem::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Elem::Mod(v) => Value::from(*v),
            Elem::Int(v) => big_to_json(v),
            Elem::Dyadic { num, level } => {
                Value::Array(vec![big_to_json(&BigInt::from(num.clone())), Value::from(*level)])
            }
            Elem::Perm(p) => Value::Array(p.iter().map(|x| Value::from(*x)).collect()),
            Elem::Tuple(items) => Value::Array(items.iter().map(Elem::to_json).collect()),
        }
    }
}

fn big_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

pub(crate) fn json_to_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Renders a word of letters, `ø` for the empty letter.
pub fn word_to_string(word: &[Elem]) -> String {
    let parts: Vec<String> = word.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}
