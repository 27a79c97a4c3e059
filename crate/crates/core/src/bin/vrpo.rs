use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vrpo::experiment::{self, ExperimentConfig};
use vrpo::learner::Algorithm;
use vrpo::{Error, Result};

#[derive(Parser)]
#[command(name = "vrpo", version, about = "Q-boosted policy optimization on small zero-sum games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train every configured seed and write metrics, checkpoint and summary.
    Train(Common),
    /// Exploitability of a checkpoint's current and averaged policies.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
    },
    /// Per-iteration advantage standard deviation of several algorithms.
    VarianceReport {
        #[command(flatten)]
        common: Common,
        /// Comma-separated algorithms to compare.
        #[arg(long, default_value = "vrpo,mappo,ippo")]
        algos: String,
    },
    /// Reproduce the matching-pennies estimator comparison.
    Figure1Demo,
    /// State and information-set counts of built-in games.
    Enumerate {
        /// Defaults to every fixed-size built-in game.
        #[arg(long)]
        game: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output root; overrides the environment variable and the config file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    game: Option<String>,
    #[arg(long)]
    algo: Option<String>,
    /// Any config key, e.g. `--set lr_base=0.05`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    minibatches: Option<usize>,
    #[arg(long)]
    actor_epochs: Option<usize>,
    #[arg(long)]
    critic_epochs: Option<usize>,
    #[arg(long)]
    clip_base: Option<f64>,
    #[arg(long)]
    reg_base: Option<f64>,
    #[arg(long)]
    lr_base: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lr_horizon: Option<usize>,
    #[arg(long)]
    reg_horizon: Option<usize>,
    #[arg(long)]
    replay_ratio: Option<usize>,
    #[arg(long)]
    ema_decay: Option<f64>,
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    eval_interval: Option<usize>,
    #[arg(long)]
    critic_init: Option<String>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let mut flags: Vec<(&str, String)> = Vec::new();
        let mut push = |key: &'static str, value: Option<String>| {
            if let Some(v) = value {
                flags.push((key, v));
            }
        };
        push("game", self.game.clone());
        push("algo", self.algo.clone());
        push("seed", self.seed.map(|v| v.to_string()));
        push("iterations", self.iterations.map(|v| v.to_string()));
        push("batch_size", self.batch_size.map(|v| v.to_string()));
        push("minibatches", self.minibatches.map(|v| v.to_string()));
        push("actor_epochs", self.actor_epochs.map(|v| v.to_string()));
        push("critic_epochs", self.critic_epochs.map(|v| v.to_string()));
        push("clip_base", self.clip_base.map(|v| v.to_string()));
        push("reg_base", self.reg_base.map(|v| v.to_string()));
        push("lr_base", self.lr_base.map(|v| v.to_string()));
        push("lambda", self.lambda.map(|v| v.to_string()));
        push("gamma", self.gamma.map(|v| v.to_string()));
        push("lr_horizon", self.lr_horizon.map(|v| v.to_string()));
        push("reg_horizon", self.reg_horizon.map(|v| v.to_string()));
        push("replay_ratio", self.replay_ratio.map(|v| v.to_string()));
        push("ema_decay", self.ema_decay.map(|v| v.to_string()));
        push("momentum", self.momentum.map(|v| v.to_string()));
        push("eval_interval", self.eval_interval.map(|v| v.to_string()));
        push("critic_init", self.critic_init.clone());
        for (key, value) in flags {
            config.set(key, &value)?;
        }
        for entry in &self.overrides {
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig { field: "set".into(), message: format!("expected KEY=VALUE, got `{entry}`") })?;
            config.set(key.trim(), value.trim())?;
        }
        config.resolve_out_dir(self.out.as_deref());
        config.validate()?;
        Ok(config)
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable report")
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Train(common) => {
            let config = common.resolve()?;
            for artifact in experiment::run(&config)? {
                println!("{}", to_json(&artifact.summary));
                println!("artifacts: {}", artifact.summary_json.parent().unwrap_or(Path::new(".")).display());
            }
        }
        Command::Evaluate { checkpoint } => println!("{}", to_json(&experiment::evaluate(&checkpoint)?)),
        Command::VarianceReport { common, algos } => {
            let config = common.resolve()?;
            let algorithms = algos
                .split(',')
                .map(|a| a.trim().parse())
                .collect::<Result<Vec<Algorithm>>>()?;
            let report = experiment::variance_report(&config, config.trainer.total_iterations, &algorithms)?;
            fs::create_dir_all(&config.out_dir).map_err(|e| Error::IoFailure { path: config.out_dir.clone(), source: e })?;
            let path = config.out_dir.join(format!("variance-{}.csv", config.game.replace(':', "_")));
            report.write_csv(&path)?;
            println!("{}", path.display());
        }
        Command::Figure1Demo => print!("{}", experiment::figure1_demo()?),
        Command::Enumerate { game } => {
            let names = match game {
                Some(name) => vec![name],
                None => ["matching_pennies_perfect", "matching_pennies_imperfect", "kuhn", "leduc", "liars_dice:1x3"]
                    .map(String::from)
                    .to_vec(),
            };
            for name in names {
                println!("{}", to_json(&experiment::enumerate(&name)?));
            }
        }
    }
    Ok(())
}

fn fail(kind: &str, message: &str) -> ExitCode {
    eprintln!("error kind={kind} message={}", serde_json::Value::from(message));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.to_string();
            return fail("Usage", message.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string()),
    }
}
