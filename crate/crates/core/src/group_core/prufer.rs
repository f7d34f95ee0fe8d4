//! Arithmetic in the Prüfer 2-group, the direct limit of `Z/2^i` under doubling.
//!
//! `[g, i]` is identified with `g / 2^i mod 1`. Elements are kept in first
//! representation: `g` odd, or `(0, 1)` for the identity.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::elem::Elem;
use crate::error::{Error, Result};

pub fn identity() -> Elem {
    Elem::Dyadic { num: BigUint::zero(), level: 1 }
}

/// Reduces `num / 2^level` modulo 1 and strips common factors of two.
pub fn normalize(num: BigUint, level: u32) -> Elem {
    let modulus = BigUint::one() << level;
    let num = num % modulus;
    if num.is_zero() {
        return identity();
    }
    let tz = num.trailing_zeros().unwrap_or(0) as u32;
    Elem::Dyadic { num: num >> tz, level: level - tz }
}

fn parts(e: &Elem) -> (&BigUint, u32) {
    match e {
        Elem::Dyadic { num, level } => (num, *level),
        other => panic!("not a Prüfer element: {other}"),
    }
}

pub fn validate(num: &BigUint, level: u32) -> Result<()> {
    if level == 0 {
        return Err(Error::MalformedElement(format!("[{num},0]: level must be at least 1")));
    }
    if num.is_zero() {
        return if level == 1 {
            Ok(())
        } else {
            Err(Error::MalformedElement(format!("[0,{level}] is not in first representation")))
        };
    }
    if !num.bit(0) {
        return Err(Error::MalformedElement(format!("[{num},{level}] has an even numerator")));
    }
    if *num >= BigUint::one() << level {
        return Err(Error::MalformedElement(format!("[{num},{level}] numerator exceeds 2^{level}")));
    }
    Ok(())
}

/// `[g,i]·[h,j] = [g·2^(j-i) + h, j]` for `i <= j`, then renormalized.
pub fn mul(a: &Elem, b: &Elem) -> Elem {
    let (g, i) = parts(a);
    let (h, j) = parts(b);
    if i <= j {
        normalize((g << (j - i)) + h, j)
    } else {
        normalize(g + (h << (i - j)), i)
    }
}

pub fn inv(a: &Elem) -> Elem {
    let (g, i) = parts(a);
    if g.is_zero() {
        return identity();
    }
    normalize((BigUint::one() << i) - g, i)
}

/// The half map: the representative in `[0,1)` divided by two.
pub fn half(a: &Elem) -> Elem {
    let (g, i) = parts(a);
    if g.is_zero() {
        return identity();
    }
    Elem::Dyadic { num: g.clone(), level: i + 1 }
}

/// Multiplication by two, the left inverse of [`half`].
pub fn double(a: &Elem) -> Elem {
    let (g, i) = parts(a);
    if g.is_zero() || i == 1 {
        return identity();
    }
    normalize(g.clone(), i - 1)
}

/// Position in the enumeration `e, [1,1], [1,2], [3,2], [1,3], ...`.
pub fn rank(a: &Elem) -> BigUint {
    let (g, i) = parts(a);
    if g.is_zero() {
        return BigUint::zero();
    }
    (BigUint::one() << (i - 1)) + ((g - 1u32) >> 1)
}

pub fn unrank(k: u64) -> Elem {
    if k == 0 {
        return identity();
    }
    let level = 64 - k.leading_zeros();
    let offset = k - (1u64 << (level - 1));
    Elem::Dyadic { num: BigUint::from(2 * offset + 1), level }
}
