use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which policy-optimization variant drives the trainer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Q-boosted advantages with a centralized action-value critic.
    Vrpo,
    /// GAE with a centralized state-value critic.
    Mappo,
    /// GAE with a per-player critic keyed by the player's own observation.
    Ippo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Vrpo, Algorithm::Mappo, Algorithm::Ippo];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Vrpo => "vrpo",
            Algorithm::Mappo => "mappo",
            Algorithm::Ippo => "ippo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vrpo" => Ok(Algorithm::Vrpo),
            "mappo" => Ok(Algorithm::Mappo),
            "ippo" => Ok(Algorithm::Ippo),
            other => Err(Error::invalid("algo", format!("unknown algorithm `{other}` (expected vrpo, mappo or ippo)"))),
        }
    }
}

/// Initial critic contents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticInit {
    Zero,
    /// Exact values of the initial (uniform) profile.
    Oracle,
}

impl FromStr for CriticInit {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero" => Ok(CriticInit::Zero),
            "oracle" => Ok(CriticInit::Oracle),
            other => Err(Error::invalid("critic_init", format!("unknown critic init `{other}` (expected zero or oracle)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerConfig {
    /// Trajectories collected per iteration (B).
    pub batch_size: usize,
    /// Minibatches per epoch (M).
    pub minibatches: usize,
    pub actor_epochs: usize,
    pub critic_epochs: usize,
    pub clip_base: f64,
    pub reg_base: f64,
    pub lr_base: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub total_iterations: usize,
    pub lr_horizon: usize,
    pub reg_horizon: usize,
    /// Replay capacity in units of B.
    pub replay_ratio: usize,
    pub ema_decay: f64,
    pub momentum: f64,
    /// Exploitability is evaluated every this many iterations and at the last one.
    pub eval_interval: usize,
    pub critic_init: CriticInit,
    pub seed: u64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            batch_size: 256,
            minibatches: 4,
            actor_epochs: 4,
            critic_epochs: 4,
            clip_base: 0.02,
            reg_base: 0.1,
            lr_base: 0.02,
            lambda: 0.95,
            gamma: 1.0,
            total_iterations: 500,
            lr_horizon: 125,
            reg_horizon: 125,
            replay_ratio: 64,
            ema_decay: 0.999,
            momentum: 0.9,
            eval_interval: 10,
            critic_init: CriticInit::Zero,
            seed: 0,
        }
    }
}

impl TrainerConfig {
    pub fn replay_capacity(&self) -> usize {
        self.replay_ratio * self.batch_size
    }

    pub fn minibatch_size(&self) -> usize {
        self.batch_size / self.minibatches
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("batch_size", self.batch_size),
            ("minibatches", self.minibatches),
            ("actor_epochs", self.actor_epochs),
            ("critic_epochs", self.critic_epochs),
            ("lr_horizon", self.lr_horizon),
            ("reg_horizon", self.reg_horizon),
            ("replay_ratio", self.replay_ratio),
            ("eval_interval", self.eval_interval),
        ];
        for (field, value) in positive {
            if value == 0 {
                return Err(Error::invalid(field, "must be positive"));
            }
        }
        if !self.batch_size.is_multiple_of(self.minibatches) {
            return Err(Error::invalid(
                "minibatches",
                format!("batch_size {} is not divisible by {}", self.batch_size, self.minibatches),
            ));
        }
        let reals = [
            ("clip_base", self.clip_base),
            ("reg_base", self.reg_base),
            ("lr_base", self.lr_base),
        ];
        for (field, value) in reals {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(field, format!("must be a positive number, got {value}")));
            }
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::invalid("lambda", format!("must lie in [0, 1], got {}", self.lambda)));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::invalid("gamma", format!("must lie in (0, 1], got {}", self.gamma)));
        }
        if !(0.0..1.0).contains(&self.ema_decay) {
            return Err(Error::invalid("ema_decay", format!("must lie in [0, 1), got {}", self.ema_decay)));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::invalid("momentum", format!("must lie in [0, 1), got {}", self.momentum)));
        }
        Ok(())
    }
}
