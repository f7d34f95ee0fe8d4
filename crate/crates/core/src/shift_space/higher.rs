use super::{Presentation, Shift};
use crate::decomposition::SlidingBlockCode;
use crate::error::{Error, Result};
use crate::group_core::{Alphabet, Elem, Rule, Subgroup};
use crate::sequence_core::Axis;

/// The `M`-th higher block presentation together with its recoding pair.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    pub m: usize,
    pub shift: Shift,
    /// `x ↦ (x_{i-M+1} .. x_i)_i`.
    pub forward: SlidingBlockCode,
    /// Last component of each block.
    pub inverse: SlidingBlockCode,
}

impl Shift {
    /// Recodes an `M`-step shift as a Markov coset shift over its `M`-blocks.
    pub fn higher_block(&self, m: usize) -> Result<HigherBlock> {
        if self.axis != Axis::TwoSided {
            return Err(Error::Unsupported("higher block codes are only invertible on two-sided shifts".into()));
        }
        let stable = self.m_step(super::classify::M_STEP_CAP);
        match stable.exact() {
            Some(s) if s <= m => {}
            _ => {
                return Err(Error::NotMStep {
                    m,
                    detail: format!("followers of the identity stabilize at {}", describe_m(stable)),
                })
            }
        }
        if m <= 1 {
            return Ok(HigherBlock {
                m: 1,
                shift: self.clone(),
                forward: SlidingBlockCode::identity(),
                inverse: SlidingBlockCode::identity(),
            });
        }
        let alphabet = Alphabet::Language { shift: Box::new(self.clone()), len: m };
        let sub = Subgroup::block_last(m, self.first_follower_subgroup(m)?);
        let shift = Shift::new(
            alphabet,
            self.axis,
            Presentation::MarkovCoset { sub, rule: Rule::HigherBlock(Box::new(self.clone())) },
        );
        // looking back keeps the length: two-sided sequences only end on the right
        let forward = SlidingBlockCode::new(format!("block{m}"), m - 1, 0, |w| {
            w.iter().cloned().collect::<Option<Vec<Elem>>>().map(Elem::Tuple)
        });
        let inverse = SlidingBlockCode::one_block("last", |t| t.as_tuple().expect("block letter").last().expect("nonempty block").clone());
        Ok(HigherBlock { m, shift, forward, inverse })
    }
}

fn describe_m(m: super::MStep) -> String {
    match m {
        super::MStep::Exact(k) => k.to_string(),
        super::MStep::AtLeast(k) => format!(">={k}"),
    }
}
