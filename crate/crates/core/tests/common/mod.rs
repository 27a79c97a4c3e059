#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vrpo::estimators::{qboost_advantages, QCritic};
use vrpo::game::{Game, Policy, TabularProfile, Trajectory};
use vrpo::learner::{joint_profile, SoftmaxActor};
use vrpo::oracle::{enumerate_continuations, exact_values, DEFAULT_PATH_GUARD};

/// Actors with logits drawn uniformly from `[-scale, scale]`.
pub fn random_actors(game: &Game, seed: u64, scale: f64) -> Vec<SoftmaxActor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..game.num_players())
        .map(|p| {
            let mut actor = SoftmaxActor::new(game, p);
            for z in actor.logits_mut() {
                *z = rng.gen_range(-scale..=scale);
            }
            actor
        })
        .collect()
}

pub fn random_profile(game: &Game, seed: u64) -> TabularProfile {
    joint_profile(game, &random_actors(game, seed, 2.0))
}

/// Every complete play from the initial state with its probability.
pub fn all_plays<P: Policy + ?Sized>(game: &Game, profile: &P) -> Vec<(f64, Trajectory)> {
    let root = game.root();
    let mut out = Vec::new();
    for (a, &p) in game.action_probs(profile, root).iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for c in enumerate_continuations(game, profile, root, a, DEFAULT_PATH_GUARD).unwrap() {
            out.push((p * c.probability, c.trajectory));
        }
    }
    out
}

/// Exact `E[Σ_τ Â^boost_τ ∇ log π(a_τ|o_τ)]` of `actor`'s player, by enumeration.
pub fn expected_boost_gradient(
    game: &Game,
    profile: &TabularProfile,
    actor: &SoftmaxActor,
    critic: &QCritic,
    lambda: f64,
) -> Vec<f64> {
    let player = actor.player();
    let mut grad = actor.zeros_like();
    for (prob, traj) in all_plays(game, profile) {
        for rec in qboost_advantages(game, &traj, critic, profile, lambda, game.discount(), player) {
            let step = &traj.steps[rec.timestep];
            let (_, infoset) = game.agent(step.state).unwrap();
            let local = game.infoset(infoset).local;
            let probs = profile.infoset_probs(infoset);
            for (k, g) in grad[actor.range(local)].iter_mut().enumerate() {
                let indicator = if k == step.action { 1.0 } else { 0.0 };
                *g += prob * rec.advantage * (indicator - probs[k]);
            }
        }
    }
    grad
}

/// Oracle action values shifted entry-wise by deterministic offsets in `[-max, max]`.
pub fn perturbed_critic(game: &Game, profile: &TabularProfile, seed: u64, max: f64) -> QCritic {
    let mut critic = QCritic::from_exact(&exact_values(game, profile));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for q in critic.table_mut() {
        *q += rng.gen_range(-max..=max);
    }
    critic
}

/// Largest best-response value of `player` over every pure strategy, by evaluating
/// each one exactly.
pub fn brute_force_best_response(game: &Game, profile: &TabularProfile, player: usize) -> f64 {
    let infosets = game.player_infosets(player).to_vec();
    let counts: Vec<usize> = infosets.iter().map(|&id| game.infoset(id).num_actions).collect();
    let total: usize = counts.iter().product();
    let mut best = f64::NEG_INFINITY;
    for mut code in 0..total {
        let mut candidate = profile.clone();
        for (&id, &n) in infosets.iter().zip(&counts) {
            candidate.set_pure(id, code % n);
            code /= n;
        }
        best = best.max(exact_values(game, &candidate).v(game.root(), player));
    }
    best
}
