//! Exact, enumeration-based ground truth: action and state values, advantages, policy
//! gradients, best responses, exploitability and estimator error.

mod best_response;
mod gradient;
mod mse;

use crate::game::{Game, Policy};

pub use best_response::{best_response, exploitability, BestResponse, DeviationReport};
pub use gradient::{exact_policy_gradient, reach_probabilities, DEFAULT_PATH_GUARD};
pub use mse::{
    enumerate_continuations, estimator_mse, future_action_noise, xi_threshold, Continuation,
    EstimatorSpec,
};

/// Exact `Q` and `V` of every player under a fixed joint profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactValues {
    n_players: usize,
    // edge * n + player
    q: Vec<f64>,
    // state * n + player
    v: Vec<f64>,
}

impl ExactValues {
    pub fn num_players(&self) -> usize {
        self.n_players
    }

    pub fn q(&self, game: &Game, state: usize, action: usize, player: usize) -> f64 {
        self.q[game.edge(state, action) * self.n_players + player]
    }

    pub fn v(&self, state: usize, player: usize) -> f64 {
        self.v[state * self.n_players + player]
    }

    pub fn advantage(&self, game: &Game, state: usize, action: usize, player: usize) -> f64 {
        self.q(game, state, action, player) - self.v(state, player)
    }

    pub fn q_table(&self) -> &[f64] {
        &self.q
    }

    pub fn v_table(&self) -> &[f64] {
        &self.v
    }

    /// On-policy expected return of every player from the initial state.
    pub fn root_values(&self) -> Vec<f64> {
        self.v[..self.n_players].to_vec()
    }
}

/// Expected-SARSA backward induction in reverse state order:
/// `Q_i(s,a) = r_i(s,a) + γ Σ_a' π(a'|s') Q_i(s',a')` and `V_i(s) = Σ_a π(a|s) Q_i(s,a)`.
pub fn exact_values<P: Policy + ?Sized>(game: &Game, profile: &P) -> ExactValues {
    let n = game.num_players();
    let gamma = game.discount();
    let mut q = vec![0.0; game.num_edges() * n];
    let mut v = vec![0.0; game.num_states() * n];
    for s in (0..game.num_states()).rev() {
        if game.is_terminal(s) {
            continue;
        }
        let probs = game.action_probs(profile, s);
        for (a, &prob) in probs.iter().enumerate() {
            let e = game.edge(s, a);
            let child = game.successor(s, a);
            let reward = game.reward(s, a);
            for p in 0..n {
                let value = reward[p] + gamma * v[child * n + p];
                q[e * n + p] = value;
                v[s * n + p] += prob * value;
            }
        }
    }
    ExactValues { n_players: n, q, v }
}

/// Largest Bellman residual `|Q(s,a) - r(s,a) - γ Σ π Q(s',·)|` and state-value
/// inconsistency `|V(s) - Σ π Q(s,·)|` over all states, actions and players.
pub fn bellman_residual<P: Policy + ?Sized>(game: &Game, profile: &P, values: &ExactValues) -> f64 {
    let n = game.num_players();
    let gamma = game.discount();
    let mut worst: f64 = 0.0;
    for s in 0..game.num_states() {
        if game.is_terminal(s) {
            for p in 0..n {
                worst = worst.max(values.v(s, p).abs());
            }
            continue;
        }
        let probs = game.action_probs(profile, s);
        for p in 0..n {
            let mut v = 0.0;
            for (a, &prob) in probs.iter().enumerate() {
                let child = game.successor(s, a);
                let backed: f64 = if game.is_terminal(child) {
                    0.0
                } else {
                    game.action_probs(profile, child)
                        .iter()
                        .enumerate()
                        .map(|(b, pb)| pb * values.q(game, child, b, p))
                        .sum()
                };
                let q = values.q(game, s, a, p);
                worst = worst.max((q - game.reward(s, a)[p] - gamma * backed).abs());
                v += prob * q;
            }
            worst = worst.max((values.v(s, p) - v).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_matching_pennies, TabularProfile, HEADS, TAILS};

    #[test]
    fn figure_one_values() {
        let game = build_matching_pennies(true);
        let profile = TabularProfile::uniform(&game);
        let exact = exact_values(&game, &profile);
        let h = game.successor(0, HEADS);
        assert_eq!(exact.q(&game, h, TAILS, 0), -1.0);
        assert_eq!(exact.v(h, 0), 0.0);
        assert_eq!(exact.advantage(&game, 0, HEADS, 0), 0.0);
        assert_eq!(bellman_residual(&game, &profile, &exact), 0.0);
    }

    #[test]
    fn perfect_information_best_reply() {
        let game = build_matching_pennies(false);
        let mut profile = TabularProfile::uniform(&game);
        let h = game.successor(0, HEADS);
        let t = game.successor(0, TAILS);
        profile.set_pure(game.agent(h).unwrap().1, TAILS);
        profile.set_pure(game.agent(t).unwrap().1, HEADS);
        let exact = exact_values(&game, &profile);
        assert_eq!(exact.v(h, 0), -1.0);
        assert_eq!(exact.root_values(), vec![-1.0, 1.0]);
    }
}
