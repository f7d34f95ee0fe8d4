use serde_json::{json, Value};

use super::AbstractInverseMonoid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Counterexample or remark.
    pub detail: Option<String>,
}

impl Check {
    fn pass(name: &str) -> Check {
        Check { name: name.into(), passed: true, detail: None }
    }

    fn note(name: &str, detail: String) -> Check {
        Check { name: name.into(), passed: true, detail: Some(detail) }
    }

    fn fail(name: &str, detail: String) -> Check {
        Check { name: name.into(), passed: false, detail: Some(detail) }
    }

    fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

#[derive(Clone, Debug)]
pub struct HypothesisReport {
    /// Inverse monoid with zero: associativity, identity, zero, unique inverses.
    pub inverse_monoid: Check,
    /// Hypotheses 1 to 5 in order.
    pub hypotheses: Vec<Check>,
    /// `e₀ ≤ e₁ ≤ …`, when the idempotents form a chain.
    pub chain: Vec<usize>,
    /// `T` fixes the top of the chain, which then plays the part of `e_∞`.
    pub top_fixed: bool,
    pub t_surjective: bool,
    pub elements: usize,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.inverse_monoid.passed && self.hypotheses.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        std::iter::once(&self.inverse_monoid).chain(&self.hypotheses).find(|c| !c.passed)
    }

    pub fn to_json(&self, s: &AbstractInverseMonoid) -> Value {
        json!({
            "elements": self.elements,
            "inverse_monoid": self.inverse_monoid.to_json(),
            "hypotheses": self.hypotheses.iter().map(Check::to_json).collect::<Vec<_>>(),
            "chain": self.chain.iter().map(|&e| s.label(e)).collect::<Vec<_>>(),
            "top_fixed_by_t": self.top_fixed,
            "t_surjective": self.t_surjective,
            "passed": self.passed(),
        })
    }
}

/// Checks everything exhaustively over the table.
pub fn verify_chain_hypotheses(s: &AbstractInverseMonoid) -> HypothesisReport {
    let n = s.len();
    let inverse_monoid = inverse_monoid_axioms(s);
    let h1 = no_zero_divisors(s);
    let (h2, chain) = linear_chain(s);
    let t_surjective = {
        let mut img = s.t.clone();
        img.sort_unstable();
        img.dedup();
        img.len() == n
    };
    let top_fixed = chain.last().is_some_and(|&top| s.t[top] == top);
    let h3 = t_hom(s, &chain, top_fixed, t_surjective);
    let (h4, h5) = match chain.get(1) {
        Some(&e1) => (central_e1(s, e1), lift_idempotent(s, e1)),
        None => {
            let missing = || Check::fail("", "there is no e1".into());
            (missing(), missing())
        }
    };
    let names = ["no zero divisors", "idempotents form a chain", "T is a homomorphism lowering the chain", "e1 is central", "T(s) idempotent and e1 s = e1 imply s idempotent"];
    let hypotheses = [h1, h2, h3, h4, h5]
        .into_iter()
        .zip(names)
        .map(|(mut c, name)| {
            c.name = name.into();
            c
        })
        .collect();
    HypothesisReport { inverse_monoid, hypotheses, chain, top_fixed, t_surjective, elements: n }
}

fn inverse_monoid_axioms(s: &AbstractInverseMonoid) -> Check {
    let n = s.len();
    let l = |a| s.label(a).to_string();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c)) {
                    return Check::fail("", format!("({} {}) {} is not {} ({} {})", l(a), l(b), l(c), l(a), l(b), l(c)));
                }
            }
        }
    }
    if s.identity().is_none() {
        return Check::fail("", "no identity".into());
    }
    if let Some(a) = (0..n).find(|&a| s.mul(s.zero, a) != s.zero || s.mul(a, s.zero) != s.zero) {
        return Check::fail("", format!("{} does not absorb {}", l(s.zero), l(a)));
    }
    if let Some(a) = (0..n).find(|&a| s.inverses(a).len() != 1) {
        return Check::fail("", format!("{} has {} inverses", l(a), s.inverses(a).len()));
    }
    Check::pass("")
}

fn no_zero_divisors(s: &AbstractInverseMonoid) -> Check {
    let nonzero: Vec<usize> = (0..s.len()).filter(|&a| a != s.zero).collect();
    for &a in &nonzero {
        for &b in &nonzero {
            if s.mul(a, b) == s.zero {
                return Check::fail("", format!("{} {} = {}", s.label(a), s.label(b), s.label(s.zero)));
            }
        }
    }
    Check::pass("")
}

/// The idempotents sorted by `e ≤ f ⇔ ef = e`, or the first incomparable pair.
fn linear_chain(s: &AbstractInverseMonoid) -> (Check, Vec<usize>) {
    let e = s.idempotents();
    for (i, &a) in e.iter().enumerate() {
        for &b in &e[i + 1..] {
            let ab = s.mul(a, b);
            if s.mul(b, a) != ab || (ab != a && ab != b) {
                return (Check::fail("", format!("{} and {} are incomparable", s.label(a), s.label(b))), vec![]);
            }
        }
    }
    let mut chain = e.clone();
    chain.sort_by_key(|&a| e.iter().filter(|&&b| s.mul(b, a) == b).count());
    if chain.first() != Some(&s.zero) {
        return (Check::fail("", "the least idempotent is not 0".into()), chain);
    }
    if chain.last().copied() != s.identity() {
        return (Check::fail("", "the greatest idempotent is not the identity".into()), chain);
    }
    if chain.len() < 2 {
        return (Check::fail("", "no idempotent besides 0".into()), chain);
    }
    (Check::pass(""), chain)
}

fn t_hom(s: &AbstractInverseMonoid, chain: &[usize], top_fixed: bool, surjective: bool) -> Check {
    let n = s.len();
    for a in 0..n {
        for b in 0..n {
            if s.t[s.mul(a, b)] != s.mul(s.t[a], s.t[b]) {
                return Check::fail("", format!("T({} {}) is not T({}) T({})", s.label(a), s.label(b), s.label(a), s.label(b)));
            }
        }
    }
    if chain.len() < 2 {
        return Check::fail("", "no chain to lower".into());
    }
    let k = chain.len() - 1;
    // the top is either e_k with T(e_k) = e_{k-1}, or e_∞ fixed by a surjective T
    let lowered = if top_fixed { k } else { k + 1 };
    for i in 1..lowered {
        if s.t[chain[i]] != chain[i - 1] {
            return Check::fail("", format!("T(e{i}) = {} is not e{}", s.label(s.t[chain[i]]), i - 1));
        }
    }
    match (top_fixed, surjective) {
        (true, false) => Check::fail("", "T fixes the top of the chain but is not surjective".into()),
        (true, true) => Check::note("", "the identity is fixed and plays the part of e_inf".into()),
        (false, true) => Check::pass(""),
        (false, false) => Check::note("", format!("finite chain e0..e{k}; T is not surjective, which a finite chain allows")),
    }
}

fn central_e1(s: &AbstractInverseMonoid, e1: usize) -> Check {
    match (0..s.len()).find(|&a| s.mul(e1, a) != s.mul(a, e1)) {
        Some(a) => Check::fail("", format!("e1 does not commute with {}", s.label(a))),
        None => Check::pass(""),
    }
}

fn lift_idempotent(s: &AbstractInverseMonoid, e1: usize) -> Check {
    let bad = (0..s.len()).find(|&a| s.is_idempotent(s.t[a]) && s.mul(e1, a) == e1 && !s.is_idempotent(a));
    match bad {
        Some(a) => Check::fail("", format!("{} is not idempotent", s.label(a))),
        None => Check::pass(""),
    }
}
