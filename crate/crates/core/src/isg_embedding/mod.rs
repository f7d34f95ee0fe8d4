//! Finite inverse monoids with zero whose idempotents form a chain, the
//! hypothesis checks for embedding them into a one-sided full shift, and the
//! embedding itself.

mod embed;
mod hypotheses;

use serde_json::{json, Value};

pub use embed::{chain_group, embed_theta, ChainEmbedding, ChainGroup, EmbeddingReport};
pub use hypotheses::{verify_chain_hypotheses, Check, HypothesisReport};

use crate::error::{invalid, Error, Result};

/// Elements are indices into `labels`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractInverseMonoid {
    pub name: String,
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub zero: usize,
    /// `T`, one image per element.
    pub t: Vec<usize>,
}

impl AbstractInverseMonoid {
    pub fn new(name: &str, labels: Vec<String>, table: Vec<Vec<usize>>, zero: usize, t: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(invalid("/elements", "a monoid needs at least one element"));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(invalid("/table", format!("expected a {n}x{n} table of elements")));
        }
        if zero >= n {
            return Err(invalid("/zero", "zero is not an element"));
        }
        if t.len() != n || t.iter().any(|&c| c >= n) {
            return Err(invalid("/t", format!("expected {n} images")));
        }
        Ok(AbstractInverseMonoid { name: name.into(), labels, table, zero, t })
    }

    /// Words of length `0..=max_len` over `Z_m`, multiplied entrywise and
    /// truncated to the shorter length. `T` drops the first letter.
    pub fn truncated_sequences(m: u64, max_len: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("/modulus", "modulus must be positive"));
        }
        let mut words: Vec<Vec<u64>> = vec![vec![]];
        for len in 1..=max_len {
            let start = words.iter().position(|w| w.len() == len - 1).unwrap_or(0);
            let prev: Vec<Vec<u64>> = words[start..].to_vec();
            for w in prev {
                for a in 0..m {
                    let mut v = w.clone();
                    v.push(a);
                    words.push(v);
                }
            }
            if words.len() > 4096 {
                return Err(invalid("/max_length", "more than 4096 elements"));
            }
        }
        let index = |w: &[u64]| words.iter().position(|v| v == w).expect("closed under truncation");
        let table = words
            .iter()
            .map(|x| {
                words
                    .iter()
                    .map(|y| index(&x.iter().zip(y).map(|(a, b)| (a + b) % m).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let t = words.iter().map(|w| index(w.get(1..).unwrap_or(&[]))).collect();
        let labels = words
            .iter()
            .map(|w| format!("({})", w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        AbstractInverseMonoid::new(&format!("truncated_z{m}_len{max_len}"), labels, table, 0, t)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.is_idempotent(a)).collect()
    }

    pub fn identity(&self) -> Option<usize> {
        (0..self.len()).find(|&e| (0..self.len()).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    /// All `b` with `aba = a` and `bab = b`.
    pub fn inverses(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.mul(self.mul(a, b), a) == a && self.mul(self.mul(b, a), b) == b).collect()
    }

    /// The unique inverse `a*`, if there is exactly one.
    pub fn star(&self, a: usize) -> Option<usize> {
        match self.inverses(a).as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// `S¹a`, which is `Sa` in a monoid.
    pub fn left_ideal(&self, a: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).map(|s| self.mul(s, a)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn right_ideal(&self, a: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).map(|s| self.mul(a, s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "kind": "table",
            "elements": self.labels,
            "table": self.table.iter().map(|r| r.iter().map(|&c| self.label(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "zero": self.label(self.zero),
            "idempotents": self.idempotents().iter().map(|&e| self.label(e)).collect::<Vec<_>>(),
            "t": self.t.iter().map(|&c| self.label(c)).collect::<Vec<_>>(),
        })
    }

    /// Reads a table descriptor or a `truncated_sequences` descriptor.
    pub fn from_json(v: &Value) -> Result<Self> {
        let name = v.get("name").and_then(Value::as_str).unwrap_or("monoid");
        match v.get("kind").and_then(Value::as_str).unwrap_or("table") {
            "truncated_sequences" => {
                let m = v.get("modulus").and_then(Value::as_u64).ok_or_else(|| invalid("/modulus", "expected a positive integer"))?;
                let len = v.get("max_length").and_then(Value::as_u64).ok_or_else(|| invalid("/max_length", "expected an integer"))?;
                let mut s = AbstractInverseMonoid::truncated_sequences(m, len as usize)?;
                if let Some(n) = v.get("name").and_then(Value::as_str) {
                    s.name = n.into();
                }
                Ok(s)
            }
            "table" => from_table(name, v),
            other => Err(invalid("/kind", format!("unknown monoid kind {other:?}"))),
        }
    }
}

fn from_table(name: &str, v: &Value) -> Result<AbstractInverseMonoid> {
    let labels: Vec<String> = v
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("/elements", "expected an array of labels"))?
        .iter()
        .enumerate()
        .map(|(i, l)| l.as_str().map(str::to_string).ok_or_else(|| invalid(format!("/elements/{i}"), "expected a string")))
        .collect::<Result<_>>()?;
    let mut sorted = labels.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != labels.len() {
        return Err(invalid("/elements", "labels repeat"));
    }
    let find = |x: &Value, ptr: String| -> Result<usize> {
        let s = x.as_str().ok_or_else(|| invalid(ptr.clone(), "expected a label"))?;
        labels.iter().position(|l| l == s).ok_or_else(|| invalid(ptr, format!("unknown element {s:?}")))
    };
    let rows = v.get("table").and_then(Value::as_array).ok_or_else(|| invalid("/table", "expected an array of rows"))?;
    let mut table = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| invalid(format!("/table/{i}"), "expected an array"))?;
        table.push(row.iter().enumerate().map(|(j, c)| find(c, format!("/table/{i}/{j}"))).collect::<Result<Vec<_>>>()?);
    }
    let zero = find(v.get("zero").unwrap_or(&Value::Null), "/zero".into())?;
    let t = v
        .get("t")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("/t", "expected an array of images"))?
        .iter()
        .enumerate()
        .map(|(i, c)| find(c, format!("/t/{i}")))
        .collect::<Result<Vec<_>>>()?;
    let s = AbstractInverseMonoid::new(name, labels.clone(), table, zero, t)?;
    if let Some(list) = v.get("idempotents").and_then(Value::as_array) {
        let mut given = list.iter().enumerate().map(|(i, c)| find(c, format!("/idempotents/{i}"))).collect::<Result<Vec<_>>>()?;
        given.sort_unstable();
        if given != s.idempotents() {
            return Err(invalid("/idempotents", "the listed idempotents differ from those of the table"));
        }
    }
    Ok(s)
}

/// Parses a monoid descriptor from text.
pub fn parse_monoid(text: &str, origin: &str) -> Result<AbstractInverseMonoid> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
    AbstractInverseMonoid::from_json(&v)
}


/// A bundled monoid fixture by name. Panics if it is missing or invalid.
pub fn monoid_fixture(name: &str) -> AbstractInverseMonoid {
    let text = crate::cli_io::fixtures::bundled(name).unwrap_or_else(|| panic!("no bundled fixture {name}"));
    parse_monoid(text, name).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
