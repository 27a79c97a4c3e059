use serde::{Deserialize, Serialize};

use crate::game::{Game, TabularProfile};

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Tabular softmax policy of one player: a logit vector per owned information set,
/// stored flat in the player's local information-set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxActor {
    player: usize,
    offsets: Vec<usize>,
    logits: Vec<f64>,
}

impl SoftmaxActor {
    /// All-zero logits, i.e. the uniform policy.
    pub fn new(game: &Game, player: usize) -> Self {
        let mut offsets = vec![0];
        for &id in game.player_infosets(player) {
            offsets.push(offsets.last().unwrap() + game.infoset(id).num_actions);
        }
        let n = *offsets.last().unwrap();
        SoftmaxActor {
            player,
            offsets,
            logits: vec![0.0; n],
        }
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn num_infosets(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_params(&self) -> usize {
        self.logits.len()
    }

    /// Flat parameter range of local information set `local`.
    pub fn range(&self, local: usize) -> std::ops::Range<usize> {
        self.offsets[local]..self.offsets[local + 1]
    }

    pub fn logits(&self) -> &[f64] {
        &self.logits
    }

    pub fn logits_mut(&mut self) -> &mut [f64] {
        &mut self.logits
    }

    pub fn infoset_logits(&self, local: usize) -> &[f64] {
        &self.logits[self.range(local)]
    }

    pub fn probs(&self, local: usize) -> Vec<f64> {
        softmax(self.infoset_logits(local))
    }

    /// Overwrites this player's distributions in `profile` with the softmax policy.
    pub fn write_into(&self, game: &Game, profile: &mut TabularProfile) {
        for (local, &id) in game.player_infosets(self.player).iter().enumerate() {
            profile.set(id, &self.probs(local));
        }
    }

    /// A zero table with this actor's layout.
    pub fn zeros_like(&self) -> Vec<f64> {
        vec![0.0; self.logits.len()]
    }
}

/// Joint profile of a full set of actors, one per seat.
pub fn joint_profile(game: &Game, actors: &[SoftmaxActor]) -> TabularProfile {
    let mut profile = TabularProfile::uniform(game);
    for actor in actors {
        actor.write_into(game, &mut profile);
    }
    profile
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_kuhn_poker;

    #[test]
    fn softmax_is_a_distribution() {
        let p = softmax(&[1000.0, 999.0, 990.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|&x| x > 0.0));
        assert!(p[0] > p[1]);
    }

    #[test]
    fn zero_logits_are_uniform() {
        let game = build_kuhn_poker();
        let actor = SoftmaxActor::new(&game, 1);
        assert_eq!(actor.num_infosets(), 6);
        assert_eq!(actor.num_params(), 12);
        assert_eq!(joint_profile(&game, &[SoftmaxActor::new(&game, 0), actor]), TabularProfile::uniform(&game));
    }
}
