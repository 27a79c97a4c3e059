use serde::Serialize;

use super::TrainerConfig;

/// Learning rates, clip coefficient and regularization coefficient at one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub lr_actor: f64,
    pub lr_critic: f64,
    pub clip: f64,
    pub reg: f64,
}

/// Inverse-time decay after `lr_horizon` / `reg_horizon` stable iterations; the critic
/// rate and the regularization decay with the square root of the factor.
pub fn schedules(config: &TrainerConfig, iteration: usize) -> Schedule {
    assert!(iteration >= 1, "iterations are counted from 1");
    let t = iteration as f64;
    let lr_factor = (config.lr_horizon as f64 / t).min(1.0);
    let reg_factor = (config.reg_horizon as f64 / t).min(1.0);
    Schedule {
        lr_actor: config.lr_base * lr_factor,
        lr_critic: config.lr_base * lr_factor.sqrt(),
        clip: config.clip_base * lr_factor,
        reg: config.reg_base * reg_factor.sqrt(),
    }
}
