mod common;

use common::{brute_force_best_response, expected_boost_gradient, perturbed_critic, random_actors, random_profile};
use vrpo::estimators::QCritic;
use vrpo::game::{build_game, build_kuhn_poker, build_matching_pennies, TabularProfile};
use vrpo::learner::joint_profile;
use vrpo::oracle::{
    bellman_residual, best_response, exact_policy_gradient, exact_values, exploitability, DEFAULT_PATH_GUARD,
};

const BUILT_INS: [&str; 5] = ["matching_pennies_imperfect", "matching_pennies_perfect", "kuhn", "leduc", "liars_dice:1x3"];

#[test]
fn bellman_residual_vanishes_on_every_built_in() {
    for name in BUILT_INS {
        let game = build_game(name).unwrap();
        for seed in 0..10 {
            let profile = random_profile(&game, seed);
            let values = exact_values(&game, &profile);
            let residual = bellman_residual(&game, &profile, &values);
            assert!(residual <= 1e-10, "{name} seed {seed}: residual {residual}");
        }
    }
}

#[test]
fn uniform_kuhn_value() {
    // showdowns cancel over card pairs; bet-fold (+1, prob 1/4) and check-bet-fold
    // (-1, prob 1/8) leave the first player +1/8
    let game = build_kuhn_poker();
    let values = exact_values(&game, &TabularProfile::uniform(&game));
    assert!((values.root_values()[0] - 0.125).abs() < 1e-12);
    assert!((values.root_values()[1] - -0.125).abs() < 1e-12);
}

#[test]
fn policy_gradient_matches_central_differences() {
    let game = build_kuhn_poker();
    let actors = random_actors(&game, 11, 1.5);
    let profile = joint_profile(&game, &actors);
    let h = 1e-5;
    for player in 0..2 {
        let grad = exact_policy_gradient(&game, &profile, &actors[player], player, DEFAULT_PATH_GUARD).unwrap();
        for k in 0..actors[player].num_params() {
            let value_at = |delta: f64| {
                let mut shifted = actors.clone();
                shifted[player].logits_mut()[k] += delta;
                exact_values(&game, &joint_profile(&game, &shifted)).v(game.root(), player)
            };
            let fd = (value_at(h) - value_at(-h)) / (2.0 * h);
            let scale = grad[k].abs().max(1e-3);
            assert!((fd - grad[k]).abs() / scale < 1e-6, "player {player} logit {k}: fd {fd} vs {}", grad[k]);
        }
    }
}

#[test]
fn best_response_matches_brute_force_on_kuhn() {
    let game = build_kuhn_poker();
    for seed in 0..5 {
        let profile = random_profile(&game, 100 + seed);
        for player in 0..2 {
            let br = best_response(&game, &profile, player);
            let brute = brute_force_best_response(&game, &profile, player);
            assert!((br.value - brute).abs() < 1e-12, "seed {seed} player {player}");
            let mut deviation = profile.clone();
            for (&id, &a) in game.player_infosets(player).iter().zip(&br.strategy) {
                deviation.set_pure(id, a);
            }
            let realized = exact_values(&game, &deviation).v(game.root(), player);
            assert!((realized - brute).abs() < 1e-12);
        }
    }
}

#[test]
fn exploitability_is_never_negative() {
    for name in BUILT_INS {
        let game = build_game(name).unwrap();
        for seed in 0..3 {
            let report = exploitability(&game, &random_profile(&game, seed));
            assert!(report.exploitability >= -1e-10, "{name}: {}", report.exploitability);
            assert!(report.gains.iter().all(|&g| g >= -1e-10));
        }
    }
}

#[test]
fn kuhn_equilibrium_family_is_unexploitable() {
    // first player with a jack bets with probability 1/3, the rest follows
    let game = build_kuhn_poker();
    let profile = kuhn_equilibrium(&game, 1.0 / 3.0);
    let report = exploitability(&game, &profile);
    assert!(report.exploitability.abs() < 1e-12, "{}", report.exploitability);
    assert!((exact_values(&game, &profile).root_values()[0] - -1.0 / 18.0).abs() < 1e-12);
}

/// The textbook equilibrium with parameter `alpha` (probability of betting a jack).
fn kuhn_equilibrium(game: &vrpo::game::Game, alpha: f64) -> TabularProfile {
    TabularProfile::from_fn(game, |id, _| {
        let key = &game.infoset(id).key;
        let card = key.observation[1];
        let history = &key.observation[2..];
        // cards 0, 1, 2 are jack, queen, king; action 1 is bet/call
        let bet = match (key.player, history) {
            (0, []) => [alpha, 0.0, 3.0 * alpha][card as usize],
            (0, [0, 1]) => [0.0, alpha + 1.0 / 3.0, 1.0][card as usize],
            (1, [1]) => [0.0, 1.0 / 3.0, 1.0][card as usize],
            (1, [0]) => [1.0 / 3.0, 0.0, 1.0][card as usize],
            _ => unreachable!("unexpected history {history:?}"),
        };
        vec![1.0 - bet, bet]
    })
}

#[test]
fn boosted_gradient_is_unbiased_for_any_critic() {
    for game in [build_matching_pennies(true), build_kuhn_poker()] {
        let actors = random_actors(&game, 5, 1.0);
        let profile = joint_profile(&game, &actors);
        for seed in 0..5 {
            let critic = perturbed_critic(&game, &profile, seed, 5.0);
            for actor in &actors {
                let truth = exact_policy_gradient(&game, &profile, actor, actor.player(), DEFAULT_PATH_GUARD).unwrap();
                let estimate = expected_boost_gradient(&game, &profile, actor, &critic, 1.0);
                for (a, b) in truth.iter().zip(&estimate) {
                    assert!((a - b).abs() < 1e-9, "{}: {a} vs {b}", game.name());
                }
            }
        }
    }
}

#[test]
fn boosted_gradient_is_biased_for_short_traces_with_a_wrong_critic() {
    let game = build_kuhn_poker();
    let actors = random_actors(&game, 5, 1.0);
    let profile = joint_profile(&game, &actors);
    let critic = perturbed_critic(&game, &profile, 1, 5.0);
    let truth = exact_policy_gradient(&game, &profile, &actors[0], 0, DEFAULT_PATH_GUARD).unwrap();
    let estimate = expected_boost_gradient(&game, &profile, &actors[0], &critic, 0.0);
    let gap = truth.iter().zip(&estimate).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(gap > 1e-3);
    // with the exact critic every trace length is exact
    let exact = QCritic::from_exact(&exact_values(&game, &profile));
    let estimate = expected_boost_gradient(&game, &profile, &actors[0], &exact, 0.0);
    for (a, b) in truth.iter().zip(&estimate) {
        assert!((a - b).abs() < 1e-12);
    }
}
