use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shiftforge_core::cli_io::{run, write_outputs, Command, RunConfig, BOUND_ENV, DEFAULT_BOUND};

/// Bounded verification of shift spaces over group alphabets.
#[derive(Parser)]
#[command(name = "shiftforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closure of the shift under the entrywise product and the follower subgroup chain.
    Verify(Flags),
    /// Row/column finiteness, M-step bound, semigroup type and continuity.
    Classify(Flags),
    /// Follower and predecessor sets of a block, with the coset laws.
    Followers(Flags),
    /// Follower and predecessor class families and the bijection between them.
    Classes(Flags),
    /// Inverse semigroup identities on sampled sequences, and continuity.
    #[command(name = "op-check")]
    OpCheck(Flags),
    /// Fractal factor times full shifts.
    Decompose(Flags),
    /// Embedding of a finite inverse monoid with a chain of idempotents.
    Embed(Flags),
    /// DOT transition graph on the first letters.
    Graph(Flags),
}

#[derive(Args)]
struct Flags {
    /// Shift descriptor (path or bundled fixture name).
    #[arg(long)]
    spec: Option<String>,
    /// Monoid descriptor for `embed`.
    #[arg(long)]
    monoid: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Letters enumerated per check.
    #[arg(long, env = BOUND_ENV, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// JSON array of letters, e.g. '[1,0]'.
    #[arg(long)]
    block: Option<String>,
    #[arg(long, default_value_t = 4)]
    max_transient: usize,
    #[arg(long, default_value_t = 6)]
    max_period: usize,
    /// DOT output path; `decompose` writes one file per stage next to it.
    #[arg(long)]
    emit_dot: Option<String>,
    /// Report path; the report goes to stdout otherwise.
    #[arg(long)]
    out: Option<String>,
}

impl Cmd {
    fn split(self) -> (Command, Flags) {
        match self {
            Cmd::Verify(f) => (Command::Verify, f),
            Cmd::Classify(f) => (Command::Classify, f),
            Cmd::Followers(f) => (Command::Followers, f),
            Cmd::Classes(f) => (Command::Classes, f),
            Cmd::OpCheck(f) => (Command::OpCheck, f),
            Cmd::Decompose(f) => (Command::Decompose, f),
            Cmd::Embed(f) => (Command::Embed, f),
            Cmd::Graph(f) => (Command::Graph, f),
        }
    }
}

fn config(cmd: Cmd) -> RunConfig {
    let (command, f) = cmd.split();
    RunConfig {
        command,
        spec: f.spec,
        monoid: f.monoid,
        seed: f.seed,
        bound: f.bound,
        depth: f.depth,
        samples: f.samples,
        k: f.k,
        n: f.n,
        block: f.block,
        max_transient: f.max_transient,
        max_period: f.max_period,
        emit_dot: f.emit_dot,
        out: f.out,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let cfg = config(cli.command);
    let outcome = run(&cfg);
    if let Err(e) = write_outputs(&cfg, &outcome) {
        eprintln!("shiftforge: {e}");
        return ExitCode::from(3);
    }
    let mut stdout = std::io::stdout().lock();
    let dot_on_stdout: Vec<&String> = outcome.dot.iter().filter(|(p, _)| p.is_none()).map(|(_, t)| t).collect();
    for text in &dot_on_stdout {
        let _ = stdout.write_all(text.as_bytes());
    }
    if cfg.out.is_none() && dot_on_stdout.is_empty() {
        let _ = stdout.write_all(outcome.report_text().as_bytes());
    }
    if let Some(w) = outcome.report.get("witness").filter(|w| !w.is_null()) {
        eprintln!("shiftforge: {} ({w})", outcome.report["status"].as_str().unwrap_or(""));
    }
    ExitCode::from(outcome.exit_code() as u8)
}
