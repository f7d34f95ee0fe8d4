use serde_json::{json, Value};

use super::{code_checks, compute_h, is_fractal, phi_code, theta_code, Fractality, SlidingBlockCode};
use crate::block_ops::OneBlockOp;
use crate::error::{Error, Result};
use crate::group_core::{Alphabet, Elem, Size};
use crate::sequence_core::{Axis, Sequence};
use crate::shift_space::{Presentation, SampleParams, Sampler, Shift};

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub kind: &'static str,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub seed: u64,
    pub samples: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    /// The Markov coset presentation that was decomposed.
    pub input: Shift,
    /// Block length of the recoding applied first, if any.
    pub higher_block: Option<usize>,
    /// `𝔽`.
    pub fractal: Shift,
    pub fractality: Fractality,
    /// `[ℋ₁, ℋ₂, …]` as alphabets.
    pub h_list: Vec<Alphabet>,
    pub forward: SlidingBlockCode,
    pub inverse: SlidingBlockCode,
    /// `𝔽 ⊠ Σ_ℋ₁ ⊠ Σ_ℋ₂ ⊠ …`.
    pub target: Shift,
    pub steps: Vec<StepRecord>,
    /// The head factor before the first step and after each step.
    pub stages: Vec<Shift>,
    pub sections: Vec<Value>,
    pub depth: usize,
    pub verification: Verification,
}

impl DecompositionResult {
    pub fn phi_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == "phi").count()
    }

    pub fn theta_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == "theta").count()
    }

    pub fn h_orders(&self) -> Vec<Size> {
        self.h_list.iter().map(Alphabet::size).collect()
    }

    /// The operation carried to the target: `x ⋆ y = F(F⁻¹x • F⁻¹y)`, a block
    /// operation whose memory is that of the inverse code.
    pub fn star(&self, x: &Sequence, y: &Sequence) -> Sequence {
        let op = OneBlockOp::new(self.input.alphabet.clone());
        self.forward.apply(&op.apply_unchecked(&self.inverse.apply(x), &self.inverse.apply(y)))
    }

    /// The `𝔽` coordinate of a target sequence.
    pub fn head(&self, y: &Sequence) -> Sequence {
        if self.h_list.is_empty() {
            y.clone()
        } else {
            y.map_letters(|t| t.as_tuple().expect("product letter")[0].clone())
        }
    }

    pub fn trace(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(m) = self.higher_block {
            out.push(format!("recode to {m}-blocks"));
        }
        for s in &self.steps {
            out.push(format!("{}: {}", s.kind, s.detail["summary"].as_str().unwrap_or("")));
        }
        out.push(format!("fractal factor over {}", self.fractal.alphabet.describe()));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "input": self.input.describe(),
            "higher_block": self.higher_block,
            "fractal_factor": {
                "alphabet": self.fractal.alphabet.describe(),
                "order": size_json(self.fractal.alphabet.size()),
                "presentation": self.fractal.describe(),
                "fractality": self.fractality.to_json(),
            },
            "h_list": self.h_list.iter().map(|h| json!({
                "group": h.describe(),
                "order": size_json(h.size()),
            })).collect::<Vec<_>>(),
            "full_shift_alphabet": product_order(&self.h_list),
            "phi_steps": self.phi_steps(),
            "theta_steps": self.theta_steps(),
            "forward": {"memory": self.forward.memory, "anticipation": self.forward.anticipation},
            "inverse": {"memory": self.inverse.memory, "anticipation": self.inverse.anticipation},
            "star_operation": {"kind": "block", "memory": self.inverse.memory, "anticipation": 0},
            "steps": self.steps.iter().map(|s| json!({"kind": s.kind, "detail": s.detail})).collect::<Vec<_>>(),
            "sections": self.sections,
            "trace": self.trace(),
            "depth": self.depth,
            "verification": {
                "seed": self.verification.seed,
                "samples": self.verification.samples,
                "violations": self.verification.violations,
            },
        })
    }
}

fn size_json(s: Size) -> Value {
    match s {
        Size::Finite(k) => json!(k),
        Size::Infinite => json!("infinite"),
    }
}

/// `|B|` for `B = ℋ₁ × ℋ₂ × …`, or the factor list when some factor is infinite.
fn product_order(hs: &[Alphabet]) -> Value {
    hs.iter()
        .try_fold(1u64, |acc, h| h.size().finite().map(|s| acc.saturating_mul(s)))
        .map_or_else(|| json!("factor list"), |n| json!(n))
}

fn wrap() -> SlidingBlockCode {
    SlidingBlockCode::one_block("wrap", |a| Elem::Tuple(vec![a.clone()]))
}

fn unwrap() -> SlidingBlockCode {
    SlidingBlockCode::one_block("unwrap", |t| t.as_tuple().expect("wrapped letter")[0].clone())
}

fn head_of(x: &Option<Elem>) -> Option<Elem> {
    x.as_ref().map(|t| t.as_tuple().expect("wrapped letter")[0].clone())
}

/// Applies a code to the first coordinate of tuple letters, keeping the rest.
fn on_head(c: &SlidingBlockCode) -> SlidingBlockCode {
    let inner = c.clone();
    let m = c.memory;
    SlidingBlockCode::new(c.name.clone(), m, c.anticipation, move |w| {
        let heads: Vec<Option<Elem>> = w.iter().map(head_of).collect();
        let head = inner.local(&heads)?;
        let cur = w[m].as_ref()?.as_tuple().expect("wrapped letter");
        let mut out = vec![head];
        out.extend_from_slice(&cur[1..]);
        Some(Elem::Tuple(out))
    })
}

/// `(a, h₁..) ↦ (a·ℋ, h₁.., S(a·ℋ)⁻¹·a)` and back.
fn phi_pair(split: impl Fn(&Elem) -> Elem + Send + Sync + 'static, join: impl Fn(&Elem) -> Elem + Send + Sync + 'static) -> (SlidingBlockCode, SlidingBlockCode) {
    let fwd = SlidingBlockCode::one_block("phi", move |t| {
        let t = t.as_tuple().expect("wrapped letter");
        let s = split(&t[0]);
        let s = s.as_tuple().expect("pair");
        let mut out = vec![s[0].clone()];
        out.extend_from_slice(&t[1..]);
        out.push(s[1].clone());
        Elem::Tuple(out)
    });
    let inv = SlidingBlockCode::one_block("phi^-1", move |t| {
        let t = t.as_tuple().expect("wrapped letter");
        let last = t.len() - 1;
        let mut out = vec![join(&Elem::Tuple(vec![t[0].clone(), t[last].clone()]))];
        out.extend_from_slice(&t[1..last]);
        Elem::Tuple(out)
    });
    (fwd, inv)
}

/// The Markov coset presentation to decompose, and the recoding block length.
fn markovize(p: &Shift) -> Result<(Shift, Option<crate::shift_space::HigherBlock>)> {
    if p.axis != Axis::TwoSided {
        return Err(Error::Unsupported("decomposition needs a two-sided shift".into()));
    }
    if let Some(m) = p.as_markov() {
        return Ok((m, None));
    }
    match &p.pres {
        Presentation::PeriodicClosure => Err(Error::Unsupported("the periodic closure is not a finite-step shift".into())),
        Presentation::PredicateMStep { .. } => {
            let m = p
                .m_step(crate::shift_space::M_STEP_CAP)
                .exact()
                .ok_or_else(|| Error::NotMStep { m: 0, detail: "follower subgroups do not stabilize".into() })?;
            let hb = p.higher_block(m)?;
            Ok((hb.shift.clone(), Some(hb)))
        }
        _ => Err(Error::Unsupported(format!("{} is not a Markov coset presentation", p.describe()))),
    }
}

fn draw(shift: &Shift, sampler: &mut Sampler, n: usize) -> Vec<Sequence> {
    let mut out = vec![
        Sequence::empty(shift.axis),
        Sequence::constant(shift.axis, shift.alphabet.identity()),
    ];
    while out.len() < n.max(2) {
        out.push(sampler.member(shift));
    }
    out.retain(|x| shift.contains(x).unwrap_or(false));
    out
}

/// Alternates `φ` (when `ℋ` is nontrivial) and `θ` until the head factor is
/// certified fractal to `depth`.
pub fn decompose(p: &Shift, depth: usize, seed: u64, samples: usize) -> Result<DecompositionResult> {
    let (input, hb) = markovize(p)?;
    let mut sampler = Sampler::new(seed, SampleParams::default());
    let mut head = input.clone();
    let mut h_list: Vec<Alphabet> = Vec::new();
    let mut steps = Vec::new();
    let mut stages = vec![input.clone()];
    let mut sections = Vec::new();
    let mut fwd = vec![wrap()];
    let mut inv: Vec<SlidingBlockCode> = Vec::new();
    let mut violations = Vec::new();
    let mut checked = 0;
    let fractality = loop {
        let f = is_fractal(&head, depth)?;
        if f.is_fractal() {
            break f;
        }
        if steps.len() >= 2 * depth {
            return Err(Error::DepthExhausted(depth));
        }
        let g = head.alphabet.clone();
        let h = compute_h(&head)?;
        if !h.is_trivial(&g) {
            let phi = phi_code(&head)?;
            let (qs, hs) = (phi.hat.shift.alphabet.size(), phi.hat.h_alphabet.size());
            if let (Size::Finite(n), Size::Finite(q), Size::Finite(k)) = (g.size(), qs, hs) {
                if n != q * k {
                    return Err(Error::LawViolation(format!("|G| = {n} but |G/H|·|H| = {q}·{k}")));
                }
            }
            let xs = draw(&head, &mut sampler, samples);
            checked += xs.len();
            let op = OneBlockOp::new(g.clone());
            let star = phi.star.clone();
            violations.extend(
                code_checks(&phi.code, &phi.inverse, &phi.target, &xs, &|x, y| op.apply_unchecked(x, y), &|x, y| {
                    star.apply(x, y).expect("same axis")
                })
                .into_iter()
                .map(|v| format!("phi {}: {v}", steps.len())),
            );
            steps.push(StepRecord {
                kind: "phi",
                detail: json!({
                    "summary": format!("{} = ({}) x {}", g.describe(), phi.hat.shift.alphabet.describe(), phi.hat.h_alphabet.describe()),
                    "group_order": size_json(g.size()),
                    "quotient_order": size_json(qs),
                    "h_order": size_json(hs),
                    "h": phi.hat.h.describe(),
                }),
            });
            sections.push(json!({
                "stage": steps.len() - 1,
                "section": phi.section.iter().map(|(c, s)| json!({"coset": c, "rep": s.to_json()})).collect::<Vec<_>>(),
            }));
            let (s1, s2) = (phi.star.clone(), phi.star.clone());
            let (pf, pi) = phi_pair(move |a| s1.split(a), move |t| s2.join(t));
            fwd.push(pf);
            inv.push(pi);
            h_list.push(phi.hat.h_alphabet.clone());
            head = phi.hat.shift;
            stages.push(head.clone());
        }
        let theta = theta_code(&head)?;
        let xs = draw(&head, &mut sampler, samples);
        checked += xs.len();
        let (op, top) = (OneBlockOp::new(head.alphabet.clone()), OneBlockOp::new(theta.target.alphabet.clone()));
        violations.extend(
            code_checks(&theta.code, &theta.inverse, &theta.target, &xs, &|x, y| op.apply_unchecked(x, y), &|x, y| {
                top.apply_unchecked(x, y)
            })
            .into_iter()
            .map(|v| format!("theta {}: {v}", steps.len())),
        );
        steps.push(StepRecord {
            kind: "theta",
            detail: json!({
                "summary": format!("{} -> {}", head.alphabet.describe(), theta.target.alphabet.describe()),
                "from_order": size_json(head.alphabet.size()),
                "to_order": size_json(theta.target.alphabet.size()),
            }),
        });
        fwd.push(on_head(&theta.code));
        inv.push(on_head(&theta.inverse));
        head = theta.target;
        stages.push(head.clone());
    };
    let target = if h_list.is_empty() {
        head.clone()
    } else {
        let mut fs = vec![head.clone()];
        fs.extend(h_list.iter().map(|h| Shift::full(h.clone(), Axis::TwoSided)));
        Shift::product(fs)?
    };
    let mut back: Vec<SlidingBlockCode> = Vec::new();
    if h_list.is_empty() {
        fwd.push(unwrap());
        back.push(wrap());
    }
    back.extend(inv.into_iter().rev());
    back.push(unwrap());
    if let Some(hb) = &hb {
        fwd.insert(0, hb.forward.clone());
        back.push(hb.inverse.clone());
    }
    let forward = SlidingBlockCode::chain(&fwd);
    let inverse = SlidingBlockCode::chain(&back);
    let mut result = DecompositionResult {
        input: input.clone(),
        higher_block: hb.as_ref().map(|h| h.m),
        fractal: head,
        fractality,
        h_list,
        forward,
        inverse,
        target,
        steps,
        stages,
        sections,
        depth,
        verification: Verification { seed, samples: 0, violations: Vec::new() },
    };
    // the composite on samples of the original shift
    let xs = if hb.is_some() { Vec::new() } else { draw(&input, &mut sampler, samples) };
    checked += xs.len();
    let op = OneBlockOp::new(input.alphabet.clone());
    violations.extend(
        code_checks(&result.forward, &result.inverse, &result.target, &xs, &|x, y| op.apply_unchecked(x, y), &|x, y| {
            result.star(x, y)
        })
        .into_iter()
        .map(|v| format!("composite: {v}")),
    );
    let fop = OneBlockOp::new(result.fractal.alphabet.clone());
    for (i, x) in xs.iter().enumerate() {
        let y = &xs[(i * 5 + 1) % xs.len()];
        let lhs = result.head(&result.forward.apply(&op.apply_unchecked(x, y)));
        let rhs = fop.apply_unchecked(&result.head(&result.forward.apply(x)), &result.head(&result.forward.apply(y)));
        if lhs != rhs {
            violations.push(format!("composite: fractal coordinate is not a homomorphism at {x}"));
        }
    }
    result.verification = Verification { seed, samples: checked, violations };
    Ok(result)
}
