//! Tabular self-play training: softmax actors, clipped-surrogate updates, critic
//! regression, schedules, replay and the evaluation average.

mod actor;
mod config;
mod loss;
mod optim;
mod replay;
mod schedule;
mod trainer;

pub use actor::{joint_profile, softmax, SoftmaxActor};
pub use config::{Algorithm, CriticInit, TrainerConfig};
pub use loss::{
    critic_loss, kl_divergence, kl_to_uniform, kl_uniform, surrogate_loss, CriticSample, PolicySample,
    SurrogateOutput,
};
pub use optim::Momentum;
pub use replay::ReplayBuffer;
pub use schedule::{schedules, Schedule};
pub use trainer::{ema_update, Critic, IterationMetrics, Trainer, TrainerState, CHECKPOINT_VERSION};
