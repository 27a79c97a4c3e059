use super::Game;

/// Read access to a behaviour strategy: an action distribution per information set.
pub trait Policy {
    fn infoset_probs(&self, infoset: usize) -> &[f64];
}

/// Action distributions for every information set of a game, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularProfile {
    offsets: Vec<usize>,
    probs: Vec<f64>,
}

impl TabularProfile {
    /// Uniform over the legal actions at every information set.
    pub fn uniform(game: &Game) -> Self {
        Self::from_fn(game, |_, n| vec![1.0 / n as f64; n])
    }

    /// Builds a profile from `f(infoset id, action count)`.
    pub fn from_fn(game: &Game, mut f: impl FnMut(usize, usize) -> Vec<f64>) -> Self {
        let mut offsets = Vec::with_capacity(game.infosets().len() + 1);
        let mut probs = Vec::new();
        for (id, info) in game.infosets().iter().enumerate() {
            offsets.push(probs.len());
            let dist = f(id, info.num_actions);
            assert_eq!(dist.len(), info.num_actions, "distribution arity at infoset {id}");
            probs.extend(dist);
        }
        offsets.push(probs.len());
        TabularProfile { offsets, probs }
    }

    pub fn num_infosets(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn probs(&self, infoset: usize) -> &[f64] {
        &self.probs[self.offsets[infoset]..self.offsets[infoset + 1]]
    }

    pub fn probs_mut(&mut self, infoset: usize) -> &mut [f64] {
        &mut self.probs[self.offsets[infoset]..self.offsets[infoset + 1]]
    }

    pub fn set(&mut self, infoset: usize, dist: &[f64]) {
        self.probs_mut(infoset).copy_from_slice(dist);
    }

    /// Puts all mass on `action` at `infoset`.
    pub fn set_pure(&mut self, infoset: usize, action: usize) {
        let dist = self.probs_mut(infoset);
        dist.fill(0.0);
        dist[action] = 1.0;
    }

    /// Copies the distributions of `player`'s information sets from `other`.
    pub fn splice_player(&mut self, game: &Game, player: usize, other: &TabularProfile) {
        for &id in game.player_infosets(player) {
            let src = other.probs(id).to_vec();
            self.set(id, &src);
        }
    }
}

impl Policy for TabularProfile {
    fn infoset_probs(&self, infoset: usize) -> &[f64] {
        self.probs(infoset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_kuhn_poker;

    #[test]
    fn uniform_is_normalized() {
        let game = build_kuhn_poker();
        let profile = TabularProfile::uniform(&game);
        assert_eq!(profile.num_infosets(), 12);
        for id in 0..profile.num_infosets() {
            let total: f64 = profile.probs(id).iter().sum();
            assert!((total - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn set_pure_puts_all_mass_on_one_action() {
        let game = build_kuhn_poker();
        let mut profile = TabularProfile::uniform(&game);
        profile.set_pure(3, 1);
        assert_eq!(profile.probs(3), &[0.0, 1.0]);
    }
}
