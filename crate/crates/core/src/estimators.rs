//! GAE and Q-boosting advantage estimators over sampled trajectories.
//!
//! Both traces run over every timestep of a trajectory, including Nature's and the other
//! players' moves, using the estimating player's rewards. Records are only emitted at
//! that player's own decisions. The terminal state has value zero.

use serde::{Deserialize, Serialize};

use crate::game::{Game, Policy, Trajectory};
use crate::oracle::ExactValues;

/// Default trace parameter.
pub const DEFAULT_LAMBDA: f64 = 0.95;

/// A state-value function usable by GAE.
pub trait StateValue {
    /// Value of `player` at a non-terminal `state`.
    fn state_value(&self, game: &Game, state: usize, player: usize) -> f64;
}

/// Centralized state-value table keyed by full state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VCritic {
    n_players: usize,
    values: Vec<f64>,
}

impl VCritic {
    pub fn zeros(game: &Game) -> Self {
        VCritic {
            n_players: game.num_players(),
            values: vec![0.0; game.num_states() * game.num_players()],
        }
    }

    pub fn from_exact(exact: &ExactValues) -> Self {
        VCritic {
            n_players: exact.num_players(),
            values: exact.v_table().to_vec(),
        }
    }

    pub fn get(&self, state: usize, player: usize) -> f64 {
        self.values[state * self.n_players + player]
    }

    pub fn set(&mut self, state: usize, player: usize, value: f64) {
        self.values[state * self.n_players + player] = value;
    }

    pub fn table(&self) -> &[f64] {
        &self.values
    }

    pub fn table_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn index(&self, state: usize, player: usize) -> usize {
        state * self.n_players + player
    }
}

impl StateValue for VCritic {
    fn state_value(&self, _game: &Game, state: usize, player: usize) -> f64 {
        self.get(state, player)
    }
}

/// Decentralized state-value table keyed by `(player, observation)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationVCritic {
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl ObservationVCritic {
    pub fn zeros(game: &Game) -> Self {
        let mut offsets = vec![0];
        for p in 0..game.num_players() {
            offsets.push(offsets[p] + game.num_observations(p));
        }
        let n = offsets[game.num_players()];
        ObservationVCritic {
            offsets,
            values: vec![0.0; n],
        }
    }

    /// Table slot of `player`'s value at `state`.
    pub fn index(&self, game: &Game, state: usize, player: usize) -> usize {
        let obs = game
            .observation_id(state, player)
            .expect("observation of a terminal state");
        self.offsets[player] + obs
    }

    pub fn table(&self) -> &[f64] {
        &self.values
    }

    pub fn table_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

impl StateValue for ObservationVCritic {
    fn state_value(&self, game: &Game, state: usize, player: usize) -> f64 {
        self.values[self.index(game, state, player)]
    }
}

/// Centralized action-value table keyed by `(state, action)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QCritic {
    n_players: usize,
    values: Vec<f64>,
}

impl QCritic {
    pub fn zeros(game: &Game) -> Self {
        QCritic {
            n_players: game.num_players(),
            values: vec![0.0; game.num_edges() * game.num_players()],
        }
    }

    pub fn from_exact(exact: &ExactValues) -> Self {
        QCritic {
            n_players: exact.num_players(),
            values: exact.q_table().to_vec(),
        }
    }

    pub fn get(&self, game: &Game, state: usize, action: usize, player: usize) -> f64 {
        self.values[game.edge(state, action) * self.n_players + player]
    }

    pub fn set(&mut self, game: &Game, state: usize, action: usize, player: usize, value: f64) {
        self.values[game.edge(state, action) * self.n_players + player] = value;
    }

    pub fn index(&self, game: &Game, state: usize, action: usize, player: usize) -> usize {
        game.edge(state, action) * self.n_players + player
    }

    pub fn table(&self) -> &[f64] {
        &self.values
    }

    pub fn table_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// `max |self - other|` over all entries.
    pub fn max_abs_diff(&self, other: &QCritic) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn v_bar<P: Policy + ?Sized>(game: &Game, critic: &QCritic, profile: &P, state: usize, player: usize) -> f64 {
    if game.is_terminal(state) {
        return 0.0;
    }
    game.action_probs(profile, state)
        .iter()
        .enumerate()
        .map(|(a, p)| p * critic.get(game, state, a, player))
        .sum()
}

/// Policy-weighted action values at a non-terminal state, one entry per player.
pub fn v_from_q<P: Policy + ?Sized>(game: &Game, critic: &QCritic, profile: &P, state: usize) -> Vec<f64> {
    (0..game.num_players())
        .map(|p| v_bar(game, critic, profile, state, p))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorKind {
    Gae,
    QBoost,
}

/// One advantage estimate at a decision of `player`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvantageRecord {
    pub traj_index: usize,
    pub timestep: usize,
    pub player: usize,
    pub advantage: f64,
    pub kind: EstimatorKind,
    /// Critic target at this step; present only for Q-boosting records.
    pub target: Option<f64>,
}

fn is_decision_of(traj: &Trajectory, t: usize, player: usize) -> bool {
    traj.steps[t].role == crate::game::Role::Agent(player)
}

/// GAE advantages of `player` at every timestep.
pub fn gae_trace<V: StateValue + ?Sized>(
    game: &Game,
    traj: &Trajectory,
    critic: &V,
    lambda: f64,
    gamma: f64,
    player: usize,
) -> Vec<f64> {
    let horizon = traj.horizon();
    let mut out = vec![0.0; horizon];
    let mut acc = 0.0;
    let mut next_value = 0.0;
    for t in (0..horizon).rev() {
        let step = &traj.steps[t];
        let value = critic.state_value(game, step.state, player);
        let delta = step.reward[player] + gamma * next_value - value;
        acc = delta + lambda * gamma * acc;
        out[t] = acc;
        next_value = value;
    }
    out
}

/// GAE records at `player`'s decisions.
pub fn gae_advantages<V: StateValue + ?Sized>(
    game: &Game,
    traj: &Trajectory,
    critic: &V,
    lambda: f64,
    gamma: f64,
    player: usize,
) -> Vec<AdvantageRecord> {
    let trace = gae_trace(game, traj, critic, lambda, gamma, player);
    (0..traj.horizon())
        .filter(|&t| is_decision_of(traj, t, player))
        .map(|t| AdvantageRecord {
            traj_index: traj.origin.index,
            timestep: t,
            player,
            advantage: trace[t],
            kind: EstimatorKind::Gae,
            target: None,
        })
        .collect()
}

/// λ-return targets `V(s_t) + Â^GAE_t` for every timestep and player, row-major
/// `[t * n_players + player]`.
pub fn gae_targets<V: StateValue + ?Sized>(
    game: &Game,
    traj: &Trajectory,
    critic: &V,
    lambda: f64,
    gamma: f64,
) -> Vec<f64> {
    let n = game.num_players();
    let mut targets = vec![0.0; traj.horizon() * n];
    for p in 0..n {
        let trace = gae_trace(game, traj, critic, lambda, gamma, p);
        for (t, adv) in trace.into_iter().enumerate() {
            targets[t * n + p] = critic.state_value(game, traj.steps[t].state, p) + adv;
        }
    }
    targets
}

/// Q-boosting quantities of one player along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct QBoostTrace {
    /// `Q(s_t,a_t) - V̄(s_t) + Σ (λγ)^k δ⁺`.
    pub advantages: Vec<f64>,
    /// `Q(s_t,a_t) + Σ (λγ)^k δ⁺`.
    pub targets: Vec<f64>,
    /// Expected-SARSA residuals δ⁺.
    pub residuals: Vec<f64>,
}

/// Q-boosting advantages, critic targets and residuals of `player` at every timestep,
/// in one backward pass.
pub fn qboost_trace<P: Policy + ?Sized>(
    game: &Game,
    traj: &Trajectory,
    critic: &QCritic,
    profile: &P,
    lambda: f64,
    gamma: f64,
    player: usize,
) -> QBoostTrace {
    let horizon = traj.horizon();
    let mut advantages = vec![0.0; horizon];
    let mut targets = vec![0.0; horizon];
    let mut residuals = vec![0.0; horizon];
    let mut acc = 0.0;
    let mut next_v = 0.0;
    for t in (0..horizon).rev() {
        let step = &traj.steps[t];
        let q = critic.get(game, step.state, step.action, player);
        let v = v_bar(game, critic, profile, step.state, player);
        let delta = step.reward[player] + gamma * next_v - q;
        acc = delta + lambda * gamma * acc;
        residuals[t] = delta;
        advantages[t] = q - v + acc;
        targets[t] = q + acc;
        next_v = v;
    }
    QBoostTrace {
        advantages,
        targets,
        residuals,
    }
}

/// Q-boosting records at `player`'s decisions, each carrying its critic target.
pub fn qboost_advantages<P: Policy + ?Sized>(
    game: &Game,
    traj: &Trajectory,
    critic: &QCritic,
    profile: &P,
    lambda: f64,
    gamma: f64,
    player: usize,
) -> Vec<AdvantageRecord> {
    let trace = qboost_trace(game, traj, critic, profile, lambda, gamma, player);
    (0..traj.horizon())
        .filter(|&t| is_decision_of(traj, t, player))
        .map(|t| AdvantageRecord {
            traj_index: traj.origin.index,
            timestep: t,
            player,
            advantage: trace.advantages[t],
            kind: EstimatorKind::QBoost,
            target: Some(trace.targets[t]),
        })
        .collect()
}

/// Multi-step Expected-SARSA targets for every timestep and every player, row-major
/// `[t * n_players + player]`.
pub fn qboost_targets<P: Policy + ?Sized>(
    game: &Game,
    traj: &Trajectory,
    critic: &QCritic,
    profile: &P,
    lambda: f64,
    gamma: f64,
) -> Vec<f64> {
    let n = game.num_players();
    let mut targets = vec![0.0; traj.horizon() * n];
    for p in 0..n {
        let trace = qboost_trace(game, traj, critic, profile, lambda, gamma, p);
        for (t, target) in trace.targets.into_iter().enumerate() {
            targets[t * n + p] = target;
        }
    }
    targets
}

/// Recomputes Q-boosting records under `profile` with the critic held fixed. GAE
/// records are returned unchanged.
pub fn recompute_with_policy<P: Policy + ?Sized>(
    game: &Game,
    records: &[AdvantageRecord],
    traj: &Trajectory,
    critic: &QCritic,
    profile: &P,
    lambda: f64,
    gamma: f64,
) -> Vec<AdvantageRecord> {
    let mut traces: Vec<Option<QBoostTrace>> = vec![None; game.num_players()];
    records
        .iter()
        .map(|rec| {
            if rec.kind == EstimatorKind::Gae {
                return rec.clone();
            }
            let trace = traces[rec.player].get_or_insert_with(|| {
                qboost_trace(game, traj, critic, profile, lambda, gamma, rec.player)
            });
            AdvantageRecord {
                advantage: trace.advantages[rec.timestep],
                target: Some(trace.targets[rec.timestep]),
                ..rec.clone()
            }
        })
        .collect()
}
