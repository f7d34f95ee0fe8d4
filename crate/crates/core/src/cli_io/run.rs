use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use super::dot::emit_dot;
use super::spec::{load_spec, read_text, Spec};
use crate::block_ops::{check_axioms, classify_semigroup, continuity_check, verify_closure};
use crate::coset_structure::{
    class_families, coset_law_check, monotonicity_check, predecessor_law_check, tau_bijection,
};
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::group_core::Elem;
use crate::isg_embedding::{parse_monoid, verify_chain_hypotheses, ChainEmbedding};
use crate::shift_space::{SampleParams, Sampler, Shift, M_STEP_CAP};

pub const REPORT_SCHEMA: &str = "shiftforge-report";
pub const REPORT_VERSION: u32 = 1;
pub const DEFAULT_BOUND: usize = 64;
pub const BOUND_ENV: &str = "SHIFTFORGE_DEFAULT_BOUND";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Classify,
    Followers,
    Classes,
    OpCheck,
    Decompose,
    Embed,
    Graph,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Verify,
        Command::Classify,
        Command::Followers,
        Command::Classes,
        Command::OpCheck,
        Command::Decompose,
        Command::Embed,
        Command::Graph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Classify => "classify",
            Command::Followers => "followers",
            Command::Classes => "classes",
            Command::OpCheck => "op-check",
            Command::Decompose => "decompose",
            Command::Embed => "embed",
            Command::Graph => "graph",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown command {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub spec: Option<String>,
    pub monoid: Option<String>,
    pub seed: u64,
    pub bound: usize,
    pub depth: usize,
    pub samples: usize,
    pub k: usize,
    pub n: usize,
    /// JSON array of letters.
    pub block: Option<String>,
    pub max_transient: usize,
    pub max_period: usize,
    pub emit_dot: Option<String>,
    pub out: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        let p = SampleParams::default();
        RunConfig {
            command,
            spec: None,
            monoid: None,
            seed: 0,
            bound: DEFAULT_BOUND,
            depth: 8,
            samples: 200,
            k: 1,
            n: 1,
            block: None,
            max_transient: p.max_transient,
            max_period: p.max_period,
            emit_dot: None,
            out: None,
        }
    }

    pub fn with_spec(mut self, spec: &str) -> RunConfig {
        self.spec = Some(spec.into());
        self
    }

    fn validate(&self) -> Result<()> {
        let named = [
            ("bound", self.bound),
            ("depth", self.depth),
            ("samples", self.samples),
            ("k", self.k),
            ("n", self.n),
            ("max-period", self.max_period),
        ];
        if let Some((name, _)) = named.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Validation { pointer: format!("/bounds/{name}"), message: "must be positive".into() });
        }
        Ok(())
    }

    fn sampler(&self) -> Sampler {
        let params = SampleParams { max_transient: self.max_transient, max_period: self.max_period, ..SampleParams::default() };
        Sampler::new(self.seed, params)
    }

    pub fn bounds_json(&self) -> Value {
        json!({
            "bound": self.bound,
            "depth": self.depth,
            "samples": self.samples,
            "k": self.k,
            "n": self.n,
            "max_transient": self.max_transient,
            "max_period": self.max_period,
            "m_step_cap": M_STEP_CAP,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Violation,
    Inconclusive,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Inconclusive => 2,
            Status::InputError => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
            Status::Inconclusive => "inconclusive",
            Status::InputError => "input_error",
        }
    }
}

/// Report, DOT texts keyed by output path (`None` for stdout) and status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
    pub dot: Vec<(Option<String>, String)>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Pretty JSON with a trailing newline.
    pub fn report_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("json values serialize");
        s.push('\n');
        s
    }
}

struct Body {
    status: Status,
    result: Value,
    witness: Option<Value>,
    dot: Vec<(Option<String>, String)>,
}

impl Body {
    fn new(result: Value) -> Body {
        Body { status: Status::Pass, result, witness: None, dot: Vec::new() }
    }

    fn flag(&mut self, status: Status, witness: Option<Value>) {
        if self.status == Status::Pass || (status == Status::Violation && self.status == Status::Inconclusive) {
            self.status = status;
        }
        if self.witness.is_none() {
            self.witness = witness;
        }
    }
}

fn classify_error(e: &Error) -> (Status, Value) {
    let status = match e {
        Error::ClosureViolation { .. }
        | Error::LawViolation(_)
        | Error::WellDefinednessViolation(_)
        | Error::HNotTrivial(_)
        | Error::NonUniquePreimage(_)
        | Error::HypothesisViolated(_)
        | Error::ZeroDivisorDetected(_) => Status::Violation,
        Error::DepthExhausted(_) | Error::Unsupported(_) | Error::NoCanonicalRep(_) | Error::NotMStep { .. } => {
            Status::Inconclusive
        }
        _ => Status::InputError,
    };
    let witness = match e {
        Error::ClosureViolation { left, right } => json!({"left": left, "right": right, "message": e.to_string()}),
        Error::Validation { pointer, message } => json!({"pointer": pointer, "message": message}),
        _ => json!({"message": e.to_string()}),
    };
    (status, witness)
}

/// Runs one command. Failures of any kind end up in the report.
pub fn run(cfg: &RunConfig) -> Outcome {
    let (name, body) = match cfg.validate().and_then(|_| dispatch(cfg)) {
        Ok(x) => x,
        Err(e) => {
            let (status, witness) = classify_error(&e);
            let name = cfg.spec.clone().or_else(|| cfg.monoid.clone()).unwrap_or_default();
            (name, Body { status, result: Value::Null, witness: Some(witness), dot: Vec::new() })
        }
    };
    let report = json!({
        "schema": REPORT_SCHEMA,
        "version": REPORT_VERSION,
        "command": cfg.command.name(),
        "input": name,
        "seed": cfg.seed,
        "bounds": cfg.bounds_json(),
        "status": body.status.name(),
        "exit_code": body.status.exit_code(),
        "witness": body.witness,
        "result": body.result,
        "dot_files": body.dot.iter().filter_map(|(p, _)| p.clone()).collect::<Vec<_>>(),
    });
    Outcome { status: body.status, report, dot: body.dot }
}

/// Writes DOT files and the report to the configured paths.
pub fn write_outputs(cfg: &RunConfig, outcome: &Outcome) -> Result<()> {
    let write = |path: &str, text: &str| {
        let io = |e: std::io::Error| Error::Io(format!("{path}: {e}"));
        if let Some(dir) = std::path::Path::new(path).parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
        std::fs::write(path, text).map_err(io)
    };
    for (path, text) in &outcome.dot {
        if let Some(p) = path {
            write(p, text)?;
        }
    }
    if let Some(p) = &cfg.out {
        write(p, &outcome.report_text())?;
    }
    Ok(())
}

fn load(cfg: &RunConfig) -> Result<Spec> {
    let path = cfg.spec.as_deref().ok_or_else(|| Error::Validation { pointer: "/spec".into(), message: "--spec is required".into() })?;
    load_spec(path, cfg.bound)
}

fn dispatch(cfg: &RunConfig) -> Result<(String, Body)> {
    if cfg.command == Command::Embed {
        return embed(cfg);
    }
    let spec = load(cfg)?;
    let s = &spec.shift;
    let body = match cfg.command {
        Command::Verify => verify(cfg, s),
        Command::Classify => classify(cfg, s),
        Command::Followers => followers(cfg, s)?,
        Command::Classes => classes(cfg, s)?,
        Command::OpCheck => op_check(cfg, s),
        Command::Decompose => decompose_cmd(cfg, &spec.name, s)?,
        Command::Graph => graph(cfg, &spec.name, s),
        Command::Embed => unreachable!("handled above"),
    };
    Ok((spec.name, body))
}

fn verify(cfg: &RunConfig, s: &Shift) -> Body {
    let mut body = Body::new(Value::Null);
    let closure = match verify_closure(s, cfg.bound) {
        Ok(r) => r.to_json(),
        Err(e) => {
            let (status, w) = classify_error(&e);
            body.flag(status, Some(w));
            json!({"closed": false})
        }
    };
    let mono = if body.status == Status::Pass {
        match monotonicity_check(s, cfg.depth, cfg.bound) {
            Ok(checked) => json!({"checked": checked, "depth": cfg.depth}),
            Err(e) => {
                let (status, w) = classify_error(&e);
                body.flag(status, Some(w.clone()));
                json!({"error": w})
            }
        }
    } else {
        Value::Null
    };
    body.result = json!({
        "shift": s.to_json(),
        "presentation": s.describe(),
        "closure": closure,
        "follower_subgroup_chain": mono,
    });
    body
}

fn classify(cfg: &RunConfig, s: &Shift) -> Body {
    let c = s.classify(M_STEP_CAP);
    let mut sampler = cfg.sampler();
    let cont = continuity_check(s, cfg.bound, &mut sampler);
    let mut body = Body::new(json!({
        "presentation": s.describe(),
        "classification": c.to_json(),
        "semigroup": classify_semigroup(s).to_json(),
        "continuity": cont.to_json(),
    }));
    if c.m_step.exact().is_none() {
        body.flag(Status::Inconclusive, Some(json!({"message": format!("follower sets did not stabilize within {M_STEP_CAP} steps")})));
    }
    body
}

fn parse_block(cfg: &RunConfig, s: &Shift) -> Result<Vec<Elem>> {
    let Some(text) = &cfg.block else { return Ok(vec![s.alphabet.identity()]) };
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("--block: {e}")))?;
    let arr = v
        .as_array()
        .filter(|a| !a.is_empty())
        .ok_or_else(|| Error::Validation { pointer: "/block".into(), message: "expected a nonempty JSON array of letters".into() })?;
    let block: Vec<Elem> = arr.iter().map(|x| s.alphabet.decode(x)).collect::<Result<_>>()?;
    if !s.in_language(&block) {
        return Err(Error::BlockNotInLanguage(crate::group_core::word_to_string(&block)));
    }
    Ok(block)
}

fn followers(cfg: &RunConfig, s: &Shift) -> Result<Body> {
    let a = parse_block(cfg, s)?;
    let fol = s.follower_set(&a, cfg.k, cfg.bound)?;
    let pre = s.predecessor_set(&a, cfg.k, cfg.bound)?;
    let mut body = Body::new(Value::Null);
    let mut law = |r: Result<crate::coset_structure::LawReport>| match r {
        Ok(r) => r.to_json(),
        Err(e) => {
            let (status, w) = classify_error(&e);
            body.flag(status, Some(w.clone()));
            json!({"error": w})
        }
    };
    let fl = law(coset_law_check(s, &a, cfg.k, cfg.bound));
    let pl = law(predecessor_law_check(s, &a, cfg.k, cfg.bound));
    body.result = json!({
        "block": a.iter().map(Elem::to_json).collect::<Vec<_>>(),
        "k": cfg.k,
        "followers": fol.to_json(),
        "predecessors": pre.to_json(),
        "follower_law": fl,
        "predecessor_law": pl,
    });
    Ok(body)
}

fn classes(cfg: &RunConfig, s: &Shift) -> Result<Body> {
    let (fol, pre) = class_families(s, cfg.n, cfg.k, cfg.bound)?;
    let tau = tau_bijection(s, cfg.n, cfg.k, cfg.bound)?;
    let mut body = Body::new(json!({
        "n": cfg.n,
        "k": cfg.k,
        "followers": fol.to_json(),
        "predecessors": pre.to_json(),
        "tau": tau.to_json(),
    }));
    if !fol.complete() || !pre.complete() || !tau.complete() {
        body.flag(
            Status::Inconclusive,
            Some(json!({"message": format!("bound {} exhausted before every class was seen", cfg.bound)})),
        );
    }
    Ok(body)
}

fn op_check(cfg: &RunConfig, s: &Shift) -> Body {
    let mut sampler = cfg.sampler();
    let axioms = check_axioms(s, &mut sampler, cfg.samples);
    let cont = continuity_check(s, cfg.bound, &mut sampler);
    let mut body = Body::new(json!({
        "axioms": axioms.to_json(),
        "semigroup": classify_semigroup(s).to_json(),
        "continuity": cont.to_json(),
    }));
    if let Some(v) = axioms.violations.first() {
        body.flag(Status::Violation, Some(json!({"message": v})));
    }
    body
}

/// `out.dot` becomes `out.stage3.dot`.
fn stage_path(base: &str, i: usize) -> String {
    let p = Path::new(base);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("stage");
    let name = format!("{stem}.stage{i}.dot");
    match p.parent().filter(|d| !d.as_os_str().is_empty()) {
        Some(d) => d.join(name).to_string_lossy().into_owned(),
        None => name,
    }
}

fn decompose_cmd(cfg: &RunConfig, name: &str, s: &Shift) -> Result<Body> {
    let r = decompose(s, cfg.depth, cfg.seed, cfg.samples)?;
    let mut result = r.to_json();
    result["trace"] = json!(r.trace());
    let mut body = Body::new(result);
    if let Some(base) = &cfg.emit_dot {
        for (i, stage) in r.stages.iter().enumerate() {
            body.dot.push((Some(stage_path(base, i)), emit_dot(&format!("{name} stage {i}"), stage, cfg.bound)));
        }
    }
    if let Some(v) = r.verification.violations.first() {
        body.flag(Status::Violation, Some(json!({"message": v})));
    }
    Ok(body)
}

fn graph(cfg: &RunConfig, name: &str, s: &Shift) -> Body {
    let text = emit_dot(name, s, cfg.bound);
    let letters = s.alphabet.enumerate(cfg.bound).len();
    let mut body = Body::new(json!({"letters": letters, "edges": text.matches(" -> ").count()}));
    body.dot.push((cfg.emit_dot.clone(), text));
    body
}

fn embed(cfg: &RunConfig) -> Result<(String, Body)> {
    let path = cfg.monoid.as_deref().or(cfg.spec.as_deref()).ok_or_else(|| Error::Validation {
        pointer: "/monoid".into(),
        message: "--monoid is required".into(),
    })?;
    let m = parse_monoid(&read_text(path)?, path)?;
    let hyp = verify_chain_hypotheses(&m);
    let mut body = Body::new(json!({"monoid": m.name, "elements": m.len(), "hypotheses": hyp.to_json(&m)}));
    if let Some(c) = hyp.first_failure() {
        body.flag(Status::Violation, Some(json!({"hypothesis": c.name, "counterexample": c.detail})));
        return Ok((m.name.clone(), body));
    }
    let emb = ChainEmbedding::new(&m)?;
    let v = emb.verify()?;
    body.result["embedding"] = emb.to_json();
    body.result["verification"] = v.to_json();
    if let Some(x) = v.violations.first() {
        body.flag(Status::Violation, Some(json!({"message": x})));
    }
    Ok((m.name.clone(), body))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(cmd: Command, spec: &str) -> Outcome {
        run(&RunConfig::new(cmd).with_spec(spec))
    }

    #[test]
    fn verify_z4_passes() {
        let o = go(Command::Verify, "z4_coset");
        assert_eq!(o.exit_code(), 0, "{}", o.report_text());
        assert_eq!(o.report["bounds"]["bound"], 64);
        assert_eq!(o.report["version"], REPORT_VERSION);
    }

    #[test]
    fn broken_closure_gives_a_witness_pair() {
        let o = go(Command::Verify, "broken_closure");
        assert_eq!(o.exit_code(), 1);
        assert!(o.report["witness"]["left"].is_string() && o.report["witness"]["right"].is_string());
    }

    #[test]
    fn decompose_z4_passes() {
        let o = go(Command::Decompose, "z4_coset");
        assert_eq!(o.exit_code(), 0, "{}", o.report_text());
        assert_eq!(o.report["result"]["h_list"][0]["order"], 2);
    }

    #[test]
    fn unlistable_subgroup_is_inconclusive() {
        // the recoded parity shift has an infinite subgroup with no finite list of members
        let o = go(Command::Decompose, "parity");
        assert_eq!(o.exit_code(), 2);
        assert!(o.report["witness"]["message"].as_str().unwrap().contains("not listed"));
    }

    #[test]
    fn exhausted_depth_maps_to_inconclusive() {
        assert_eq!(classify_error(&Error::DepthExhausted(3)).0, Status::Inconclusive);
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let o = go(Command::Verify, "/nonexistent/thing.json");
        assert_eq!(o.exit_code(), 3);
    }

    #[test]
    fn zero_bound_is_rejected() {
        let mut cfg = RunConfig::new(Command::Verify).with_spec("z4_coset");
        cfg.bound = 0;
        let o = run(&cfg);
        assert_eq!(o.exit_code(), 3);
        assert_eq!(o.report["witness"]["pointer"], "/bounds/bound");
    }

    #[test]
    fn embed_runs_and_fails_on_engineered_monoids() {
        let mut cfg = RunConfig::new(Command::Embed);
        cfg.monoid = Some("truncated_z3".into());
        assert_eq!(run(&cfg).exit_code(), 0);
        cfg.monoid = Some("zero_divisors".into());
        let o = run(&cfg);
        assert_eq!(o.exit_code(), 1);
        assert_eq!(o.report["witness"]["hypothesis"], "no zero divisors");
    }

    #[test]
    fn classes_on_z2_second_exhaust_the_bound() {
        let mut cfg = RunConfig::new(Command::Classes).with_spec("z2_second");
        cfg.bound = 16;
        assert_eq!(run(&cfg).exit_code(), 2);
    }

    #[test]
    fn every_command_is_deterministic() {
        for cmd in Command::ALL {
            let mut cfg = RunConfig::new(cmd).with_spec("z4_coset");
            cfg.monoid = Some("truncated_z2".into());
            cfg.samples = 30;
            cfg.emit_dot = Some("g.dot".into());
            let (a, b) = (run(&cfg), run(&cfg));
            assert_eq!(a.report_text(), b.report_text(), "{cmd}");
            assert_eq!(a.dot, b.dot, "{cmd}");
        }
    }

    #[test]
    fn stage_paths() {
        assert_eq!(stage_path("out/z4.dot", 2), "out/z4.stage2.dot");
        assert_eq!(stage_path("z4.dot", 0), "z4.stage0.dot");
    }
}
