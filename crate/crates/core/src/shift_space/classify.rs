use serde_json::{json, Value};

use super::{Predicate, Presentation, Shift};
use crate::group_core::{Rule, Size};

/// Search cap for follower stabilization.
pub const M_STEP_CAP: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MStep {
    Exact(usize),
    /// Not stabilized within the cap; the shift is at least this many steps.
    AtLeast(usize),
}

impl MStep {
    pub fn exact(self) -> Option<usize> {
        match self {
            MStep::Exact(m) => Some(m),
            MStep::AtLeast(_) => None,
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            MStep::Exact(m) => json!(m),
            MStep::AtLeast(m) => json!(format!(">={m}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub row_finite: bool,
    pub column_finite: bool,
    pub m_step: MStep,
    pub sft: bool,
    pub is_edge_shift: bool,
    pub cap: usize,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        json!({
            "row_finite": self.row_finite,
            "column_finite": self.column_finite,
            "m_step_bound": self.m_step.to_json(),
            "sft": self.sft,
            "is_edge_shift": self.is_edge_shift,
            "m_step_cap": self.cap,
        })
    }
}

impl Shift {
    /// Least `M` such that `𝔉₁(Λ, 1^m)` is the same set for every `m >= M`,
    /// searched up to `cap`.
    pub fn m_step(&self, cap: usize) -> MStep {
        if self.memory().is_none() {
            return MStep::AtLeast(cap);
        }
        let e = self.alphabet.identity();
        let keys: Vec<_> = (0..=cap).map(|m| self.follower_key(&vec![e.clone(); m], 1)).collect();
        let last = &keys[cap];
        let first_stable = (0..=cap).rev().take_while(|&m| keys[m] == *last).last().unwrap_or(cap);
        if first_stable == cap && cap > 0 && keys[cap - 1] != *last {
            MStep::AtLeast(cap)
        } else {
            MStep::Exact(first_stable)
        }
    }

    pub fn row_finite(&self) -> bool {
        let g = &self.alphabet;
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => g.size().is_finite(),
            Presentation::MarkovCoset { sub, .. } => sub.size(g).is_finite(),
            Presentation::PredicateMStep { .. } => false,
            Presentation::EdgeGraph { .. } => true,
            Presentation::Product(fs) => fs.iter().all(Shift::row_finite),
        }
    }

    pub fn column_finite(&self) -> bool {
        let g = &self.alphabet;
        if g.size().is_finite() {
            return true;
        }
        match &self.pres {
            Presentation::Full | Presentation::PeriodicClosure => false,
            Presentation::MarkovCoset { sub, rule } => match rule {
                Rule::Constant => false,
                Rule::Identity | Rule::PruferHalf => sub.size(g).is_finite(),
                Rule::HigherBlock(base) => base.column_finite(),
                _ => crate::group_core::kernel(g, sub, rule).is_some(),
            },
            Presentation::PredicateMStep { pred: Predicate::ZParity | Predicate::Z2SecondCoord, .. } => false,
            Presentation::EdgeGraph { .. } => true,
            Presentation::Product(fs) => fs.iter().all(Shift::column_finite),
        }
    }

    pub fn is_sft(&self) -> bool {
        match &self.pres {
            Presentation::Full => true,
            Presentation::Product(fs) => fs.iter().all(Shift::is_sft),
            _ => self.alphabet.size() != Size::Infinite && self.memory().is_some(),
        }
    }

    pub fn classify(&self, cap: usize) -> Classification {
        let m_step = self.m_step(cap);
        Classification {
            row_finite: self.row_finite(),
            column_finite: self.column_finite(),
            m_step,
            sft: self.is_sft(),
            is_edge_shift: m_step.exact().is_some_and(|m| m <= 1),
            cap,
        }
    }
}
