use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::actor::{joint_profile, SoftmaxActor};
use super::config::{Algorithm, CriticInit, TrainerConfig};
use super::loss::{critic_loss, kl_divergence, kl_to_uniform, kl_uniform, surrogate_loss, CriticSample, PolicySample};
use super::optim::Momentum;
use super::replay::ReplayBuffer;
use super::schedule::{schedules, Schedule};
use crate::error::{Error, Result};
use crate::estimators::{
    gae_advantages, gae_targets, qboost_advantages, qboost_targets, recompute_with_policy, AdvantageRecord,
    ObservationVCritic, QCritic, StateValue, VCritic,
};
use crate::game::{rollout_batch, Game, Policy, TabularProfile, Trajectory};
use crate::oracle::{exact_values, exploitability, reach_probabilities};

/// Checkpoint format version; bumped on any layout change.
pub const CHECKPOINT_VERSION: u32 = 1;

/// The critic table of each algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Critic {
    Action(QCritic),
    Central(VCritic),
    Decentral(ObservationVCritic),
}

impl Critic {
    pub fn table(&self) -> &[f64] {
        match self {
            Critic::Action(c) => c.table(),
            Critic::Central(c) => c.table(),
            Critic::Decentral(c) => c.table(),
        }
    }

    fn table_mut(&mut self) -> &mut [f64] {
        match self {
            Critic::Action(c) => c.table_mut(),
            Critic::Central(c) => c.table_mut(),
            Critic::Decentral(c) => c.table_mut(),
        }
    }

    fn value(&self) -> Option<&dyn StateValue> {
        match self {
            Critic::Action(_) => None,
            Critic::Central(c) => Some(c),
            Critic::Decentral(c) => Some(c),
        }
    }
}

fn initial_critic(game: &Game, algorithm: Algorithm, init: CriticInit) -> Critic {
    let uniform = TabularProfile::uniform(game);
    match (algorithm, init) {
        (Algorithm::Vrpo, CriticInit::Zero) => Critic::Action(QCritic::zeros(game)),
        (Algorithm::Vrpo, CriticInit::Oracle) => Critic::Action(QCritic::from_exact(&exact_values(game, &uniform))),
        (Algorithm::Mappo, CriticInit::Zero) => Critic::Central(VCritic::zeros(game)),
        (Algorithm::Mappo, CriticInit::Oracle) => Critic::Central(VCritic::from_exact(&exact_values(game, &uniform))),
        (Algorithm::Ippo, CriticInit::Zero) => Critic::Decentral(ObservationVCritic::zeros(game)),
        (Algorithm::Ippo, CriticInit::Oracle) => {
            // reach-weighted mean of the exact value over the states sharing an observation
            let exact = exact_values(game, &uniform);
            let reach = reach_probabilities(game, &uniform);
            let mut critic = ObservationVCritic::zeros(game);
            let mut mass = vec![0.0; critic.table().len()];
            let mut sum = vec![0.0; critic.table().len()];
            for s in (0..game.num_states()).filter(|&s| !game.is_terminal(s)) {
                for p in 0..game.num_players() {
                    let k = critic.index(game, s, p);
                    mass[k] += reach[s];
                    sum[k] += reach[s] * exact.v(s, p);
                }
            }
            for (k, v) in critic.table_mut().iter_mut().enumerate() {
                if mass[k] > 0.0 {
                    *v = sum[k] / mass[k];
                }
            }
            Critic::Decentral(critic)
        }
    }
}

/// Diagnostics of one training iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationMetrics {
    pub iteration: usize,
    /// Present on evaluation iterations.
    pub exploitability: Option<f64>,
    /// Population standard deviation of every advantage consumed by actor updates.
    pub adv_std: f64,
    /// The same statistic restricted to each player's own decisions.
    pub adv_std_per_player: Vec<f64>,
    pub clip_fraction: f64,
    /// Mean `KL(π‖π_ref)` over the rollout's decision points after the actor phase.
    pub kl_ref: f64,
    /// Mean `KL(π‖Unif)` over the same decision points.
    pub kl_uniform: f64,
    pub mean_return_p1: f64,
    pub mean_traj_len: f64,
    pub lr_actor: f64,
    pub lr_critic: f64,
    pub eps: f64,
    pub alpha: f64,
}

/// Everything needed to continue training bit-identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerState {
    pub version: u32,
    pub game: String,
    pub algorithm: Algorithm,
    pub config: TrainerConfig,
    /// Completed iterations.
    pub iteration: usize,
    pub actors: Vec<SoftmaxActor>,
    pub actor_optim: Vec<Momentum>,
    pub critic: Critic,
    pub critic_optim: Momentum,
    pub ema: Vec<SoftmaxActor>,
    pub replay: ReplayBuffer<Trajectory>,
    pub rng: ChaCha8Rng,
}

/// Self-play trainer over an enumerated game.
pub struct Trainer<'g> {
    game: &'g Game,
    state: TrainerState,
}

impl<'g> Trainer<'g> {
    pub fn new(game: &'g Game, algorithm: Algorithm, config: TrainerConfig) -> Result<Self> {
        config.validate()?;
        let actors: Vec<SoftmaxActor> = (0..game.num_players()).map(|p| SoftmaxActor::new(game, p)).collect();
        let actor_optim = actors.iter().map(|a| Momentum::new(a.num_params(), config.momentum)).collect();
        let critic = initial_critic(game, algorithm, config.critic_init);
        let critic_optim = Momentum::new(critic.table().len(), config.momentum);
        let state = TrainerState {
            version: CHECKPOINT_VERSION,
            game: game.name().to_string(),
            algorithm,
            iteration: 0,
            ema: actors.clone(),
            actors,
            actor_optim,
            critic,
            critic_optim,
            replay: ReplayBuffer::new(config.replay_capacity()),
            rng: ChaCha8Rng::seed_from_u64(config.seed ^ 0x5EED_0F5A_3B1E),
            config,
        };
        Ok(Trainer { game, state })
    }

    /// Resumes from a state produced by [`Trainer::state`] or [`Trainer::load`].
    pub fn from_state(game: &'g Game, state: TrainerState) -> Result<Self> {
        if state.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint version {} (expected {CHECKPOINT_VERSION})",
                state.version
            )));
        }
        if state.game != game.name() {
            return Err(Error::Checkpoint(format!(
                "checkpoint was written for game `{}`, not `{}`",
                state.game,
                game.name()
            )));
        }
        let fresh = Trainer::new(game, state.algorithm, state.config.clone())?;
        let shapes_match = state.actors.len() == fresh.state.actors.len()
            && state.actors.iter().zip(&fresh.state.actors).all(|(a, b)| a.num_params() == b.num_params())
            && state.ema.len() == state.actors.len()
            && state.critic.table().len() == fresh.state.critic.table().len();
        if !shapes_match {
            return Err(Error::Checkpoint("table shapes do not match the game".into()));
        }
        Ok(Trainer { game, state })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(&self.state).map_err(|e| Error::Checkpoint(e.to_string()))?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(game: &'g Game, path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let state: TrainerState = serde_json::from_str(&text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        Trainer::from_state(game, state)
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn state(&self) -> &TrainerState {
        &self.state
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.state.config
    }

    pub fn algorithm(&self) -> Algorithm {
        self.state.algorithm
    }

    pub fn iteration(&self) -> usize {
        self.state.iteration
    }

    pub fn actors(&self) -> &[SoftmaxActor] {
        &self.state.actors
    }

    pub fn critic(&self) -> &Critic {
        &self.state.critic
    }

    pub fn replay(&self) -> &ReplayBuffer<Trajectory> {
        &self.state.replay
    }

    /// Joint profile of the current actors; this is what rollouts sample from.
    pub fn profile(&self) -> TabularProfile {
        joint_profile(self.game, &self.state.actors)
    }

    /// Joint profile of the exponential moving average of the actors.
    pub fn ema_profile(&self) -> TabularProfile {
        joint_profile(self.game, &self.state.ema)
    }

    /// Runs one iteration of the configured algorithm.
    pub fn step(&mut self) -> IterationMetrics {
        match self.state.algorithm {
            Algorithm::Vrpo => self.vrpo_iteration(),
            Algorithm::Mappo | Algorithm::Ippo => self.baseline_iteration(),
        }
    }

    /// One iteration with Q-boosted advantages and action-value critic regression.
    pub fn vrpo_iteration(&mut self) -> IterationMetrics {
        assert_eq!(self.state.algorithm, Algorithm::Vrpo, "vrpo iteration on a baseline trainer");
        self.iterate()
    }

    /// One iteration with GAE advantages and state-value critic regression.
    pub fn baseline_iteration(&mut self) -> IterationMetrics {
        assert_ne!(self.state.algorithm, Algorithm::Vrpo, "baseline iteration on a vrpo trainer");
        self.iterate()
    }

    fn iterate(&mut self) -> IterationMetrics {
        let game = self.game;
        let n = game.num_players();
        let t = self.state.iteration + 1;
        let config = self.state.config.clone();
        let schedule = schedules(&config, t);

        let reference = self.profile();
        let batch = rollout_batch(game, &reference, config.seed, t as u64, config.batch_size);

        // Rollout-time records; baseline records stay fixed because the critic does
        // not move during the actor phase.
        let stored: Vec<Vec<AdvantageRecord>> = batch
            .iter()
            .map(|traj| self.records(traj, &reference, None))
            .collect();

        let mut advantages = Vec::new();
        let mut per_player: Vec<Vec<f64>> = vec![Vec::new(); n];
        let mut clipped = 0.0;
        let mut evaluated = 0usize;
        let mut order: Vec<usize> = (0..batch.len()).collect();
        let mb_size = config.minibatch_size();
        for _ in 0..config.actor_epochs {
            order.shuffle(&mut self.state.rng);
            for block in order.chunks(mb_size) {
                let current = self.profile();
                let records: Vec<(usize, Vec<AdvantageRecord>)> = block
                    .iter()
                    .map(|&k| {
                        let traj = &batch[k];
                        assert_eq!(
                            traj.origin.iteration, t as u64,
                            "actor update consumed a trajectory from another iteration"
                        );
                        (k, self.records(traj, &current, Some(&stored[k])))
                    })
                    .collect();
                for player in 0..n {
                    let mut samples = Vec::new();
                    for (k, recs) in &records {
                        let traj = &batch[*k];
                        for rec in recs.iter().filter(|r| r.player == player) {
                            let step = &traj.steps[rec.timestep];
                            let (_, infoset) = game.agent(step.state).expect("record at a non-decision step");
                            samples.push(PolicySample {
                                local: game.infoset(infoset).local,
                                action: step.action,
                                ref_prob: reference.infoset_probs(infoset)[step.action],
                                advantage: rec.advantage,
                            });
                        }
                    }
                    if samples.is_empty() {
                        continue;
                    }
                    let actor = &self.state.actors[player];
                    let out = surrogate_loss(&samples, actor, schedule.clip);
                    let visits: Vec<usize> = samples.iter().map(|s| s.local).collect();
                    let (_, reg_grad) = kl_uniform(actor, &visits);
                    let scale = 1.0 / block.len() as f64;
                    let grad: Vec<f64> = out
                        .grad
                        .iter()
                        .zip(&reg_grad)
                        .map(|(g, r)| scale * (g + schedule.reg * r))
                        .collect();
                    clipped += out.clip_fraction * samples.len() as f64;
                    evaluated += samples.len();
                    advantages.extend(samples.iter().map(|s| s.advantage));
                    per_player[player].extend(samples.iter().map(|s| s.advantage));
                    let actor = &mut self.state.actors[player];
                    self.state.actor_optim[player].step(actor.logits_mut(), &grad, schedule.lr_actor);
                }
            }
        }

        let updated = self.profile();
        let (kl_ref, kl_unif) = policy_drift(game, &batch, &updated, &reference);

        let mean_return_p1 = batch.iter().map(|tr| tr.discounted_return(0, config.gamma)).sum::<f64>() / batch.len() as f64;
        let mean_traj_len = batch.iter().map(|tr| tr.horizon() as f64).sum::<f64>() / batch.len() as f64;

        self.state.replay.extend(batch.iter().cloned());
        self.critic_phase(&batch, &updated, &schedule);

        for (ema, actor) in self.state.ema.iter_mut().zip(&self.state.actors) {
            ema_update(ema, actor, config.ema_decay);
        }
        self.state.iteration = t;

        let evaluate = t.is_multiple_of(config.eval_interval) || t == config.total_iterations;
        let exploitability = evaluate.then(|| exploitability(game, &self.profile()).exploitability);

        IterationMetrics {
            iteration: t,
            exploitability,
            adv_std: population_std(&advantages),
            adv_std_per_player: per_player.iter().map(|a| population_std(a)).collect(),
            clip_fraction: if evaluated == 0 { 0.0 } else { clipped / evaluated as f64 },
            kl_ref,
            kl_uniform: kl_unif,
            mean_return_p1,
            mean_traj_len,
            lr_actor: schedule.lr_actor,
            lr_critic: schedule.lr_critic,
            eps: schedule.clip,
            alpha: schedule.reg,
        }
    }

    /// Advantage records of every player along `traj`. With `stored` given, Q-boosting
    /// records are recomputed under `profile`; GAE records are returned as stored.
    fn records(&self, traj: &Trajectory, profile: &TabularProfile, stored: Option<&[AdvantageRecord]>) -> Vec<AdvantageRecord> {
        let game = self.game;
        let c = &self.state.config;
        match (&self.state.critic, stored) {
            (Critic::Action(q), Some(recs)) => recompute_with_policy(game, recs, traj, q, profile, c.lambda, c.gamma),
            (Critic::Action(q), None) => (0..game.num_players())
                .flat_map(|p| qboost_advantages(game, traj, q, profile, c.lambda, c.gamma, p))
                .collect(),
            (_, Some(recs)) => recs.to_vec(),
            (critic, None) => {
                let v = critic.value().expect("state-value critic");
                (0..game.num_players())
                    .flat_map(|p| gae_advantages(game, traj, v, c.lambda, c.gamma, p))
                    .collect()
            }
        }
    }

    /// `K_critic × M` regression steps: the first minibatch is the whole fresh rollout,
    /// the rest are drawn from replay without replacement within each epoch.
    fn critic_phase(&mut self, fresh: &[Trajectory], profile: &TabularProfile, schedule: &Schedule) {
        let config = self.state.config.clone();
        let mb_size = config.minibatch_size();
        for epoch in 0..config.critic_epochs {
            let drawn = self.state.replay.sample_indices(&mut self.state.rng, config.batch_size);
            for (m, block) in drawn.chunks(mb_size).enumerate().take(config.minibatches) {
                let minibatch: Vec<&Trajectory> = if epoch == 0 && m == 0 {
                    fresh.iter().collect()
                } else {
                    block.iter().map(|&i| self.state.replay.get(i).expect("replay index")).collect()
                };
                let samples: Vec<CriticSample> = minibatch
                    .iter()
                    .flat_map(|traj| self.critic_samples(traj, profile))
                    .collect();
                let (_, mut grad) = critic_loss(self.state.critic.table(), &samples);
                let scale = 1.0 / minibatch.len() as f64;
                grad.iter_mut().for_each(|g| *g *= scale);
                self.state
                    .critic_optim
                    .step(self.state.critic.table_mut(), &grad, schedule.lr_critic);
            }
        }
    }

    /// Regression targets of every player at every step of `traj`, computed with the
    /// critic as it stands.
    fn critic_samples(&self, traj: &Trajectory, profile: &TabularProfile) -> Vec<CriticSample> {
        let game = self.game;
        let n = game.num_players();
        let c = &self.state.config;
        let mut out = Vec::with_capacity(traj.horizon() * n);
        match &self.state.critic {
            Critic::Action(q) => {
                let targets = qboost_targets(game, traj, q, profile, c.lambda, c.gamma);
                for (t, step) in traj.steps.iter().enumerate() {
                    for p in 0..n {
                        out.push(CriticSample {
                            index: q.index(game, step.state, step.action, p),
                            target: targets[t * n + p],
                        });
                    }
                }
            }
            Critic::Central(v) => {
                let targets = gae_targets(game, traj, v, c.lambda, c.gamma);
                for (t, step) in traj.steps.iter().enumerate() {
                    for p in 0..n {
                        out.push(CriticSample { index: v.index(step.state, p), target: targets[t * n + p] });
                    }
                }
            }
            Critic::Decentral(v) => {
                let targets = gae_targets(game, traj, v, c.lambda, c.gamma);
                for (t, step) in traj.steps.iter().enumerate() {
                    for p in 0..n {
                        out.push(CriticSample { index: v.index(game, step.state, p), target: targets[t * n + p] });
                    }
                }
            }
        }
        out
    }
}

/// Mean `KL(π‖π_ref)` and `KL(π‖Unif)` over the decision points visited by `batch`.
fn policy_drift(game: &Game, batch: &[Trajectory], current: &TabularProfile, reference: &TabularProfile) -> (f64, f64) {
    let mut kl_ref = 0.0;
    let mut kl_unif = 0.0;
    let mut count = 0usize;
    for traj in batch {
        for step in &traj.steps {
            if let Some((_, infoset)) = game.agent(step.state) {
                let probs = current.infoset_probs(infoset);
                kl_ref += kl_divergence(probs, reference.infoset_probs(infoset));
                kl_unif += kl_to_uniform(probs);
                count += 1;
            }
        }
    }
    if count == 0 {
        return (0.0, 0.0);
    }
    (kl_ref / count as f64, kl_unif / count as f64)
}

fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}

/// `eval ← β·eval + (1−β)·actor`, logit-wise.
pub fn ema_update(eval: &mut SoftmaxActor, actor: &SoftmaxActor, beta: f64) {
    assert!((0.0..1.0).contains(&beta), "EMA decay must lie in [0, 1)");
    for (e, &a) in eval.logits_mut().iter_mut().zip(actor.logits()) {
        *e = beta * *e + (1.0 - beta) * a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_game, build_matching_pennies};

    fn small() -> TrainerConfig {
        TrainerConfig { batch_size: 32, total_iterations: 20, eval_interval: 5, ..TrainerConfig::default() }
    }

    #[test]
    fn ema_with_zero_decay_copies() {
        let game = build_matching_pennies(true);
        let mut actor = SoftmaxActor::new(&game, 0);
        actor.logits_mut().copy_from_slice(&[0.7, -0.1]);
        let mut eval = SoftmaxActor::new(&game, 0);
        ema_update(&mut eval, &actor, 0.0);
        assert_eq!(eval, actor);
    }

    #[test]
    fn ema_geometric_approach() {
        let game = build_matching_pennies(true);
        let mut actor = SoftmaxActor::new(&game, 0);
        actor.logits_mut().copy_from_slice(&[1.0, 0.0]);
        let mut eval = SoftmaxActor::new(&game, 0);
        for _ in 0..10 {
            ema_update(&mut eval, &actor, 0.5);
        }
        assert!((eval.logits()[0] - (1.0 - 0.5f64.powi(10))).abs() < 1e-15);
    }

    #[test]
    fn first_iteration_has_fresh_reference() {
        let game = build_game("kuhn").unwrap();
        let config = TrainerConfig { actor_epochs: 1, minibatches: 1, ..small() };
        let mut trainer = Trainer::new(&game, Algorithm::Vrpo, config).unwrap();
        let metrics = trainer.step();
        assert_eq!(metrics.clip_fraction, 0.0);
        assert!(metrics.kl_ref >= 0.0 && metrics.kl_uniform >= 0.0);
    }

    #[test]
    fn identical_seeds_identical_metrics() {
        let game = build_game("kuhn").unwrap();
        for algo in Algorithm::ALL {
            let run = || {
                let mut trainer = Trainer::new(&game, algo, small()).unwrap();
                (0..6).map(|_| trainer.step()).collect::<Vec<_>>()
            };
            assert_eq!(run(), run());
        }
    }

    #[test]
    fn replay_stays_within_capacity() {
        let game = build_matching_pennies(true);
        let config = TrainerConfig { batch_size: 8, minibatches: 2, replay_ratio: 2, ..small() };
        let mut trainer = Trainer::new(&game, Algorithm::Vrpo, config).unwrap();
        for _ in 0..5 {
            trainer.step();
            assert!(trainer.replay().len() <= 16);
        }
        assert_eq!(trainer.replay().get(0).unwrap().origin.iteration, 4);
    }

    #[test]
    fn state_round_trips_through_json() {
        let game = build_game("kuhn").unwrap();
        let mut trainer = Trainer::new(&game, Algorithm::Mappo, small()).unwrap();
        trainer.step();
        let text = serde_json::to_string(trainer.state()).unwrap();
        let back: TrainerState = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, trainer.state());
    }

    #[test]
    fn rejects_checkpoint_of_another_game() {
        let kuhn = build_game("kuhn").unwrap();
        let pennies = build_matching_pennies(true);
        let trainer = Trainer::new(&kuhn, Algorithm::Vrpo, small()).unwrap();
        assert!(Trainer::from_state(&pennies, trainer.state().clone()).is_err());
    }
}
