use crate::error::{Error, Result};
use crate::game::{Game, Policy};
use crate::learner::SoftmaxActor;

use super::exact_values;

/// Default cap on enumerated trajectories for the path-based oracles.
pub const DEFAULT_PATH_GUARD: usize = 1_000_000;

/// Probability of reaching every state from the initial state under `profile`.
pub fn reach_probabilities<P: Policy + ?Sized>(game: &Game, profile: &P) -> Vec<f64> {
    let mut reach = vec![0.0; game.num_states()];
    reach[game.root()] = 1.0;
    for s in 0..game.num_states() {
        if game.is_terminal(s) || reach[s] == 0.0 {
            continue;
        }
        for (a, &p) in game.action_probs(profile, s).iter().enumerate() {
            reach[game.successor(s, a)] = reach[s] * p;
        }
    }
    reach
}

/// Exact policy gradient of `player`'s expected return with respect to the softmax
/// logits of `actor`:
/// `E_h[ Σ_{τ: i(s_τ)=i} A_i(s_τ,a_τ) ∇ log π_i(a_τ|o_τ) ]`.
///
/// The expectation over trajectories is taken state by state with reach
/// probabilities; `actor` fixes the output layout and must agree with `profile` at the
/// player's information sets. Fails when the game has more than `path_guard` plays.
pub fn exact_policy_gradient<P: Policy + ?Sized>(
    game: &Game,
    profile: &P,
    actor: &SoftmaxActor,
    player: usize,
    path_guard: usize,
) -> Result<Vec<f64>> {
    let plays = (0..game.num_states()).filter(|&s| game.is_terminal(s)).count();
    if plays > path_guard {
        return Err(Error::SizeGuardExceeded {
            what: "trajectories",
            required: plays as u128,
            limit: path_guard as u128,
        });
    }
    let values = exact_values(game, profile);
    let reach = reach_probabilities(game, profile);
    let mut grad = actor.zeros_like();
    for s in 0..game.num_states() {
        let Some((acting, infoset)) = game.agent(s) else {
            continue;
        };
        if acting != player || reach[s] == 0.0 {
            continue;
        }
        let local = game.infoset(infoset).local;
        let range = actor.range(local);
        let probs = game.action_probs(profile, s);
        for (a, &pa) in probs.iter().enumerate() {
            let weight = reach[s] * pa * values.advantage(game, s, a, player);
            // ∇_z log softmax(z)_a = e_a - π
            for (k, slot) in grad[range.clone()].iter_mut().enumerate() {
                let indicator = if k == a { 1.0 } else { 0.0 };
                *slot += weight * (indicator - probs[k]);
            }
        }
    }
    Ok(grad)
}
