use rayon::prelude::*;
use serde::Serialize;

use crate::game::{Game, NodeKind, Policy};

use super::exact_values;

/// A deviator's best response: its expected return and a pure action per owned
/// information set (local order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestResponse {
    pub player: usize,
    pub value: f64,
    pub strategy: Vec<usize>,
}

/// Per-player deviation gains and their average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub gains: Vec<f64>,
    pub exploitability: f64,
    pub best_responses: Vec<BestResponse>,
}

struct Traversal<'a> {
    game: &'a Game,
    player: usize,
    // probability mass of Nature and the other players on the path to each state
    opp_reach: Vec<f64>,
    state_value: Vec<Option<f64>>,
    decision: Vec<Option<usize>>,
    discount_at_depth: Vec<f64>,
}

impl<'a> Traversal<'a> {
    fn new<P: Policy + ?Sized>(game: &'a Game, profile: &P, player: usize) -> Self {
        let mut opp_reach = vec![0.0; game.num_states()];
        opp_reach[game.root()] = 1.0;
        let mut max_depth = 0;
        for s in 0..game.num_states() {
            max_depth = max_depth.max(game.depth(s));
            if game.is_terminal(s) {
                continue;
            }
            let own = matches!(game.kind(s), NodeKind::Agent { player: p, .. } if p == player);
            let probs = game.action_probs(profile, s);
            for a in 0..game.num_actions(s) {
                let w = if own { 1.0 } else { probs[a] };
                opp_reach[game.successor(s, a)] = opp_reach[s] * w;
            }
        }
        let gamma = game.discount();
        let discount_at_depth = (0..=max_depth).map(|d| gamma.powi(d as i32)).collect();
        Traversal {
            game,
            player,
            opp_reach,
            state_value: vec![None; game.num_states()],
            decision: vec![None; game.infosets().len()],
            discount_at_depth,
        }
    }

    // counterfactual value: sum over plays below `state` of opponent reach times the
    // player's discounted reward, with the player following the best response
    fn value(&mut self, state: usize) -> f64 {
        if let Some(v) = self.state_value[state] {
            return v;
        }
        let v = match self.game.kind(state) {
            NodeKind::Terminal => 0.0,
            NodeKind::Agent { player, infoset } if player == self.player => {
                let a = self.decide(infoset);
                self.edge_value(state, a)
            }
            _ => (0..self.game.num_actions(state))
                .map(|a| self.edge_value(state, a))
                .sum(),
        };
        self.state_value[state] = Some(v);
        v
    }

    fn edge_value(&mut self, state: usize, action: usize) -> f64 {
        let child = self.game.successor(state, action);
        let reward = self.game.reward(state, action)[self.player];
        let immediate = if reward == 0.0 {
            0.0
        } else {
            self.opp_reach[child] * self.discount_at_depth[self.game.depth(state)] * reward
        };
        immediate + self.value(child)
    }

    fn decide(&mut self, infoset: usize) -> usize {
        if let Some(a) = self.decision[infoset] {
            return a;
        }
        let info = self.game.infoset(infoset);
        let members = info.members.clone();
        let mut best = 0;
        let mut best_value = f64::NEG_INFINITY;
        for a in 0..info.num_actions {
            let total: f64 = members.iter().map(|&s| self.edge_value(s, a)).sum();
            // strict improvement keeps the lowest index on ties
            if total > best_value {
                best_value = total;
                best = a;
            }
        }
        self.decision[infoset] = Some(best);
        best
    }
}

/// Best response of `player` against the rest of `profile`, by a counterfactual
/// traversal: each of the player's information sets picks the action with the largest
/// opponent-reach-weighted value over its member states (lowest index on ties).
pub fn best_response<P: Policy + ?Sized>(game: &Game, profile: &P, player: usize) -> BestResponse {
    let mut traversal = Traversal::new(game, profile, player);
    let value = traversal.value(game.root());
    let strategy = game
        .player_infosets(player)
        .iter()
        .map(|&id| traversal.decide(id))
        .collect();
    BestResponse {
        player,
        value,
        strategy,
    }
}

/// Average deviation gain `(1/n) Σ_i [BR_i - V_i]` of a joint profile.
pub fn exploitability<P: Policy + Sync + ?Sized>(game: &Game, profile: &P) -> DeviationReport {
    let on_policy = exact_values(game, profile).root_values();
    let best_responses: Vec<BestResponse> = (0..game.num_players())
        .into_par_iter()
        .map(|p| best_response(game, profile, p))
        .collect();
    let gains: Vec<f64> = best_responses
        .iter()
        .map(|br| br.value - on_policy[br.player])
        .collect();
    let exploitability = gains.iter().sum::<f64>() / game.num_players() as f64;
    DeviationReport {
        gains,
        exploitability,
        best_responses,
    }
}
