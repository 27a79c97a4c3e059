use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Game, Policy, Role};

/// One transition of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub state: usize,
    pub role: Role,
    pub action: usize,
    pub reward: Vec<f64>,
}

/// Which batch a trajectory came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Origin {
    pub iteration: u64,
    pub index: usize,
}

/// A sampled play from some state to a terminal state.
///
/// Past the terminal state the trajectory is treated as an absorbing terminal with zero
/// reward and zero value, so estimators may sum over a fixed horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub terminal: usize,
    pub origin: Origin,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    /// State visited at timestep `t`; `t == horizon` is the terminal state.
    pub fn state_at(&self, t: usize) -> usize {
        self.steps.get(t).map_or(self.terminal, |s| s.state)
    }

    /// Undiscounted sum of `player`'s rewards.
    pub fn total_reward(&self, player: usize) -> f64 {
        self.steps.iter().map(|s| s.reward[player]).sum()
    }

    /// Discounted return of `player` from the first step.
    pub fn discounted_return(&self, player: usize, discount: f64) -> f64 {
        self.steps
            .iter()
            .rev()
            .fold(0.0, |acc, s| s.reward[player] + discount * acc)
    }

    /// True when every step follows the game's transition table and the last state is
    /// terminal.
    pub fn is_consistent(&self, game: &Game) -> bool {
        let transitions_ok = self.steps.iter().enumerate().all(|(t, step)| {
            step.action < game.num_actions(step.state)
                && game.role(step.state) == Some(step.role)
                && game.reward(step.state, step.action) == step.reward.as_slice()
                && game.successor(step.state, step.action) == self.state_at(t + 1)
        });
        transitions_ok && game.is_terminal(self.terminal)
    }
}

/// Samples an index from a discrete distribution with one uniform draw.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if u < acc {
                return i;
            }
        }
    }
    last_positive
}

/// Samples one play from the initial state.
pub fn rollout<P: Policy + ?Sized, R: Rng + ?Sized>(game: &Game, policy: &P, rng: &mut R) -> Trajectory {
    rollout_from(game, policy, game.root(), rng)
}

/// Samples one play starting at `start`.
pub fn rollout_from<P: Policy + ?Sized, R: Rng + ?Sized>(
    game: &Game,
    policy: &P,
    start: usize,
    rng: &mut R,
) -> Trajectory {
    let mut steps = Vec::new();
    let mut state = start;
    while let Some(role) = game.role(state) {
        let action = sample_index(game.action_probs(policy, state), rng);
        steps.push(Step {
            state,
            role,
            action,
            reward: game.reward(state, action).to_vec(),
        });
        state = game.successor(state, action);
    }
    Trajectory {
        steps,
        terminal: state,
        origin: Origin::default(),
    }
}

/// Builds the trajectory that follows `actions` from `start`.
///
/// Panics if an action is illegal or the play does not end in a terminal state.
pub fn scripted_trajectory(game: &Game, start: usize, actions: &[usize]) -> Trajectory {
    let mut steps = Vec::with_capacity(actions.len());
    let mut state = start;
    for &action in actions {
        let role = game.role(state).expect("scripted play continues past a terminal");
        assert!(action < game.num_actions(state), "illegal scripted action");
        steps.push(Step {
            state,
            role,
            action,
            reward: game.reward(state, action).to_vec(),
        });
        state = game.successor(state, action);
    }
    assert!(game.is_terminal(state), "scripted play stops before a terminal");
    Trajectory {
        steps,
        terminal: state,
        origin: Origin::default(),
    }
}

/// Seed of trajectory `index` of batch `iteration` under run seed `seed`.
pub fn trajectory_seed(seed: u64, iteration: u64, index: usize) -> u64 {
    // splitmix64 finalizer over the three words
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(iteration.rotate_left(21))
        .wrapping_add((index as u64).rotate_left(42) ^ 0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples `count` plays in parallel. Each play has its own generator seeded from
/// `(seed, iteration, index)`, so the batch does not depend on the worker count.
pub fn rollout_batch<P: Policy + Sync + ?Sized>(
    game: &Game,
    policy: &P,
    seed: u64,
    iteration: u64,
    count: usize,
) -> Vec<Trajectory> {
    (0..count)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(trajectory_seed(seed, iteration, index));
            let mut traj = rollout(game, policy, &mut rng);
            traj.origin = Origin { iteration, index };
            traj
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_kuhn_poker, build_matching_pennies, TabularProfile};

    #[test]
    fn deterministic_heads_play() {
        let game = build_matching_pennies(true);
        let mut profile = TabularProfile::uniform(&game);
        for id in 0..game.infosets().len() {
            profile.set_pure(id, 0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let traj = rollout(&game, &profile, &mut rng);
        assert_eq!(traj.steps.len(), 2);
        assert_eq!(traj.steps[0].action, 0);
        assert_eq!(traj.steps[1].action, 0);
        assert_eq!(traj.total_reward(0), 1.0);
        assert!(traj.is_consistent(&game));
    }

    #[test]
    fn same_seed_same_play() {
        let game = build_kuhn_poker();
        let profile = TabularProfile::uniform(&game);
        let a = rollout(&game, &profile, &mut ChaCha8Rng::seed_from_u64(3));
        let b = rollout(&game, &profile, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn batch_independent_of_thread_count() {
        let game = build_kuhn_poker();
        let profile = TabularProfile::uniform(&game);
        let wide = rollout_batch(&game, &profile, 11, 4, 64);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let narrow = pool.install(|| rollout_batch(&game, &profile, 11, 4, 64));
        assert_eq!(wide, narrow);
        assert!(wide.iter().all(|t| t.is_consistent(&game)));
    }

    #[test]
    fn sampling_skips_zero_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(sample_index(&[0.0, 1.0, 0.0], &mut rng), 1);
        }
    }
}
