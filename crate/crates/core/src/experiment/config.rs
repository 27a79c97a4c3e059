use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learner::{Algorithm, TrainerConfig};

/// Environment variable that overrides the output root of every command.
pub const OUT_DIR_ENV: &str = "VRPO_OUT_DIR";

/// One experiment: a game, an algorithm, trainer settings, an output root and the
/// seeds to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub game: String,
    pub algorithm: Algorithm,
    pub trainer: TrainerConfig,
    pub out_dir: PathBuf,
    pub seeds: Vec<u64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            game: "kuhn".into(),
            algorithm: Algorithm::Vrpo,
            trainer: TrainerConfig::default(),
            out_dir: PathBuf::from("runs"),
            seeds: vec![0],
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(key, format!("cannot parse `{value}`")))
}

impl ExperimentConfig {
    /// Reads a flat `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = ExperimentConfig::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!("line {}", number + 1), format!("expected key = value, got `{line}`"))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one field by name. Dashes and underscores are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        let t = &mut self.trainer;
        match key.as_str() {
            "game" => self.game = value.to_string(),
            "algo" | "algorithm" => self.algorithm = value.parse()?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            "seed" => self.seeds = vec![parse(&key, value)?],
            "seeds" => {
                self.seeds = value
                    .split(',')
                    .map(|s| parse(&key, s.trim()))
                    .collect::<Result<Vec<u64>>>()?
            }
            "batch_size" => t.batch_size = parse(&key, value)?,
            "minibatches" => t.minibatches = parse(&key, value)?,
            "actor_epochs" => t.actor_epochs = parse(&key, value)?,
            "critic_epochs" => t.critic_epochs = parse(&key, value)?,
            "clip_base" => t.clip_base = parse(&key, value)?,
            "reg_base" => t.reg_base = parse(&key, value)?,
            "lr_base" => t.lr_base = parse(&key, value)?,
            "lambda" => t.lambda = parse(&key, value)?,
            "gamma" => t.gamma = parse(&key, value)?,
            "iterations" | "total_iterations" => t.total_iterations = parse(&key, value)?,
            "lr_horizon" => t.lr_horizon = parse(&key, value)?,
            "reg_horizon" => t.reg_horizon = parse(&key, value)?,
            "replay_ratio" => t.replay_ratio = parse(&key, value)?,
            "ema_decay" => t.ema_decay = parse(&key, value)?,
            "momentum" => t.momentum = parse(&key, value)?,
            "eval_interval" => t.eval_interval = parse(&key, value)?,
            "critic_init" => t.critic_init = value.parse()?,
            _ => return Err(Error::invalid(key.clone(), "unknown config key")),
        }
        Ok(())
    }

    /// Output root after applying the precedence flag > environment > file/default.
    pub fn resolve_out_dir(&mut self, flag: Option<&Path>) {
        if let Some(dir) = flag {
            self.out_dir = dir.to_path_buf();
        } else if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
            self.out_dir = PathBuf::from(dir);
        }
    }

    /// Checks everything except that the game fits the size guard.
    pub fn validate(&self) -> Result<()> {
        validate_game_name(&self.game)?;
        if self.seeds.is_empty() {
            return Err(Error::invalid("seeds", "at least one seed is required"));
        }
        self.trainer.validate()
    }

    /// Trainer settings for one seed.
    pub fn trainer_for(&self, seed: u64) -> TrainerConfig {
        TrainerConfig { seed, ..self.trainer.clone() }
    }
}

/// Accepts the built-in names without building the game.
pub fn validate_game_name(name: &str) -> Result<()> {
    const FIXED: [&str; 4] = ["matching_pennies_imperfect", "matching_pennies_perfect", "kuhn", "leduc"];
    if FIXED.contains(&name) {
        return Ok(());
    }
    let well_formed = name
        .strip_prefix("liars_dice:")
        .and_then(|s| s.split_once('x'))
        .is_some_and(|(d, f)| d.parse::<usize>().is_ok() && f.parse::<usize>().is_ok());
    if well_formed {
        Ok(())
    } else {
        Err(Error::invalid("game", format!("unknown game `{name}`")))
    }
}
