use crate::error::{Error, Result};
use crate::estimators::{gae_trace, qboost_trace, QCritic, VCritic};
use crate::game::{Game, Policy, Step, Trajectory};

use super::exact_values;

/// Which estimator [`estimator_mse`] evaluates.
#[derive(Debug, Clone, Copy)]
pub enum EstimatorSpec<'a> {
    Gae(&'a VCritic),
    QBoost(&'a QCritic),
}

/// One complete play after a fixed `(state, action)`, with its conditional probability.
#[derive(Debug, Clone)]
pub struct Continuation {
    pub probability: f64,
    /// Starts with the conditioning step.
    pub trajectory: Trajectory,
}

/// Every play that continues `(state, action)` under `profile`, with probabilities
/// conditional on that pair. Zero-probability branches are dropped.
pub fn enumerate_continuations<P: Policy + ?Sized>(
    game: &Game,
    profile: &P,
    state: usize,
    action: usize,
    path_guard: usize,
) -> Result<Vec<Continuation>> {
    let role = game.role(state).expect("continuations of a terminal state");
    let first = Step {
        state,
        role,
        action,
        reward: game.reward(state, action).to_vec(),
    };
    let mut out = Vec::new();
    let mut stack = vec![(game.successor(state, action), 1.0, vec![first])];
    while let Some((s, prob, steps)) = stack.pop() {
        let Some(role) = game.role(s) else {
            if out.len() == path_guard {
                return Err(Error::SizeGuardExceeded {
                    what: "continuations",
                    required: path_guard as u128 + 1,
                    limit: path_guard as u128,
                });
            }
            out.push(Continuation {
                probability: prob,
                trajectory: Trajectory {
                    steps,
                    terminal: s,
                    origin: Default::default(),
                },
            });
            continue;
        };
        for (a, &p) in game.action_probs(profile, s).iter().enumerate().rev() {
            if p == 0.0 {
                continue;
            }
            let mut next = steps.clone();
            next.push(Step {
                state: s,
                role,
                action: a,
                reward: game.reward(s, a).to_vec(),
            });
            stack.push((game.successor(s, a), prob * p, next));
        }
    }
    Ok(out)
}

/// Exact conditional mean-squared error `E[(Â - A(s,a))² | s, a]` of `player`'s
/// advantage estimate at `(state, action)`, by enumerating every continuation.
#[allow(clippy::too_many_arguments)]
pub fn estimator_mse<P: Policy + ?Sized>(
    game: &Game,
    profile: &P,
    spec: EstimatorSpec<'_>,
    state: usize,
    action: usize,
    player: usize,
    lambda: f64,
    gamma: f64,
) -> Result<f64> {
    let truth = exact_values(game, profile).advantage(game, state, action, player);
    let plays = enumerate_continuations(game, profile, state, action, super::DEFAULT_PATH_GUARD)?;
    let mse = plays
        .iter()
        .map(|c| {
            let estimate = match spec {
                EstimatorSpec::Gae(critic) => {
                    gae_trace(game, &c.trajectory, critic, lambda, gamma, player)[0]
                }
                EstimatorSpec::QBoost(critic) => {
                    qboost_trace(game, &c.trajectory, critic, profile, lambda, gamma, player)
                        .advantages[0]
                }
            };
            c.probability * (estimate - truth).powi(2)
        })
        .sum();
    Ok(mse)
}

/// Conditional future-action noise
/// `Σ_{u>τ} (λγ)^{2(u-τ)} E[A_i(s_u,a_u)² | s_τ, a_τ]`, which equals the mean-squared
/// error of GAE with the exact state-value critic.
pub fn future_action_noise<P: Policy + ?Sized>(
    game: &Game,
    profile: &P,
    state: usize,
    action: usize,
    player: usize,
    lambda: f64,
    gamma: f64,
) -> f64 {
    let values = exact_values(game, profile);
    let rho = lambda * gamma;
    let base_depth = game.depth(state);
    let mut total = 0.0;
    let mut stack = vec![(game.successor(state, action), 1.0)];
    while let Some((s, prob)) = stack.pop() {
        if game.is_terminal(s) {
            continue;
        }
        let k = (game.depth(s) - base_depth) as i32;
        let probs = game.action_probs(profile, s);
        let second_moment: f64 = probs
            .iter()
            .enumerate()
            .map(|(a, p)| p * values.advantage(game, s, a, player).powi(2))
            .sum();
        total += prob * rho.powi(2 * k) * second_moment;
        for (a, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                stack.push((game.successor(s, a), prob * p));
            }
        }
    }
    total
}

/// Critic-accuracy radius below which Q-boosting beats exact-V GAE at `(state, action)`:
/// `√Γ / ((1+γ) Σ_{k<L} (λγ)^k)`, with `L` the longest remaining number of actions.
pub fn xi_threshold<P: Policy + ?Sized>(
    game: &Game,
    profile: &P,
    state: usize,
    action: usize,
    player: usize,
    lambda: f64,
    gamma: f64,
) -> Result<f64> {
    let noise = future_action_noise(game, profile, state, action, player, lambda, gamma);
    if noise <= 0.0 {
        return Err(Error::DegenerateVariance { state, action });
    }
    let rho = lambda * gamma;
    let steps = game.height(state);
    let geometric: f64 = (0..steps).map(|k| rho.powi(k as i32)).sum();
    Ok(noise.sqrt() / ((1.0 + gamma) * geometric))
}
