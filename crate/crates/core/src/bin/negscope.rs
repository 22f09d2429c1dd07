use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use negscope::corpus::CorpusFormat;
use negscope::experiment::{self, RunConfig, SynthConfig};
use negscope::TraceMode;

#[derive(Parser)]
#[command(
    name = "negscope",
    version,
    about = "Learn negation scopes from document ratings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train per-fold policies and report cross-validated R².
    Train(Common),
    /// Evaluate the rule-based baselines on the same folds.
    Baselines(Common),
    /// Describe the scopes a stored policy assigns on the held-out fold.
    Stats {
        #[command(flatten)]
        common: Common,
        /// Q-table export to analyse.
        #[arg(long)]
        qtable: PathBuf,
    },
    /// Write a synthetic corpus and its planted masks.
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        docs: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    format: Option<CorpusFormat>,
    #[arg(long)]
    lexicon_pos: Option<PathBuf>,
    #[arg(long)]
    lexicon_neg: Option<PathBuf>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    phase1_iters: Option<usize>,
    #[arg(long)]
    phase2_iters: Option<usize>,
    #[arg(long)]
    trace_mode: Option<TraceMode>,
}

impl Common {
    fn resolve(self) -> negscope::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field { $target = v.into(); })*
            };
        }
        set! {
            corpus => cfg.corpus,
            format => cfg.format,
            lexicon_pos => cfg.lexicon_pos,
            lexicon_neg => cfg.lexicon_neg,
            folds => cfg.folds,
            seed => cfg.seed,
            out => cfg.out,
            epsilon => cfg.train.epsilon,
            alpha => cfg.train.alpha,
            gamma => cfg.train.gamma,
            lambda => cfg.train.lambda,
            c => cfg.train.c,
            phase1_iters => cfg.train.phase1_iters,
            phase2_iters => cfg.train.phase2_iters,
            trace_mode => cfg.train.trace_mode,
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> negscope::Result<()> {
    match cli.command {
        Command::Train(common) => {
            let run = experiment::cmd_train(&common.resolve()?)?;
            print!("{}", run.report.to_table());
        }
        Command::Baselines(common) => {
            let report = experiment::cmd_baselines(&common.resolve()?)?;
            print!("{}", report.to_table());
        }
        Command::Stats { common, qtable } => {
            let cfg = common.resolve()?;
            let stats = experiment::cmd_stats(&cfg, &qtable)?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
        Command::Synth { common, docs } => {
            let mut cfg = common.resolve()?;
            let synth = cfg.synthetic.get_or_insert_with(SynthConfig::default);
            if let Some(n) = docs {
                synth.doc_count = n;
            }
            let path = experiment::cmd_synth(&cfg)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("negscope: {e}");
            ExitCode::FAILURE
        }
    }
}
