use num_integer::Integer;

use super::{Axis, Length, Sequence};
use crate::group_core::Elem;

/// Generalized cylinders: `Z(x, F)` and complements of finite unions of `Z(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cylinder {
    /// Sequences agreeing with `base` up to `ℓ(base)` whose next letter avoids `excluded`.
    Basic { base: Sequence, excluded: Vec<Elem> },
    Complement(Vec<Sequence>),
}

fn agrees_up_to(x: &Sequence, y: &Sequence, k: i64) -> bool {
    match x.axis() {
        Axis::OneSided => (0..=k).all(|i| x.entry(i) == y.entry(i)),
        Axis::TwoSided => {
            if y.is_empty() {
                return false;
            }
            let lo = x.window().0.min(y.window().0);
            let p = x.left_len().lcm(&y.left_len()) as i64;
            (lo - p..=k).all(|i| x.entry(i) == y.entry(i))
        }
    }
}

impl Cylinder {
    pub fn basic(base: Sequence, excluded: Vec<Elem>) -> Cylinder {
        Cylinder::Basic { base, excluded }
    }

    pub fn contains(&self, y: &Sequence) -> bool {
        match self {
            Cylinder::Basic { base, excluded } => {
                let k = match base.length() {
                    Length::Finite(k) => k,
                    Length::NegInf => -1,
                    Length::PosInf => return base == y,
                };
                if k >= 0 && !agrees_up_to(base, y, k) {
                    return false;
                }
                match y.entry(k + 1) {
                    Some(a) => !excluded.contains(&a),
                    None => true,
                }
            }
            Cylinder::Complement(bases) => !bases
                .iter()
                .any(|b| Cylinder::Basic { base: b.clone(), excluded: Vec::new() }.contains(y)),
        }
    }
}
