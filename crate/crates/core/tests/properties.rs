mod common;

use common::{perturbed_critic, random_actors, random_profile};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vrpo::estimators::{gae_trace, qboost_advantages, qboost_trace, v_from_q, QCritic, VCritic};
use vrpo::game::{build_game, rollout, Game, Policy};
use vrpo::learner::{
    joint_profile, kl_uniform, schedules, softmax, surrogate_loss, Algorithm, PolicySample, ReplayBuffer, Trainer,
    TrainerConfig,
};
use vrpo::oracle::{bellman_residual, enumerate_continuations, exact_values, DEFAULT_PATH_GUARD};

fn game_strategy() -> impl Strategy<Value = Game> {
    prop_oneof![
        Just("matching_pennies_imperfect"),
        Just("matching_pennies_perfect"),
        Just("kuhn"),
        Just("liars_dice:1x3"),
    ]
    .prop_map(|name| build_game(name).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bellman_residual_is_zero(game in game_strategy(), seed in any::<u64>()) {
        let profile = random_profile(&game, seed);
        let values = exact_values(&game, &profile);
        prop_assert!(bellman_residual(&game, &profile, &values) <= 1e-10);
    }

    #[test]
    fn exact_critic_gives_exact_advantages_pathwise(game in game_strategy(), seed in any::<u64>(), lambda in 0.0..=1.0f64) {
        let profile = random_profile(&game, seed);
        let exact = exact_values(&game, &profile);
        let critic = QCritic::from_exact(&exact);
        let traj = rollout(&game, &profile, &mut ChaCha8Rng::seed_from_u64(seed));
        for p in 0..game.num_players() {
            let trace = qboost_trace(&game, &traj, &critic, &profile, lambda, 1.0, p);
            prop_assert!(trace.residuals.iter().all(|d| d.abs() < 1e-12));
            for rec in qboost_advantages(&game, &traj, &critic, &profile, lambda, 1.0, p) {
                let step = &traj.steps[rec.timestep];
                prop_assert!((rec.advantage - exact.advantage(&game, step.state, step.action, p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boosted_advantage_telescopes(game in game_strategy(), seed in any::<u64>(), offset in 0.0..5.0f64) {
        let profile = random_profile(&game, seed);
        let critic = perturbed_critic(&game, &profile, seed ^ 1, offset);
        let traj = rollout(&game, &profile, &mut ChaCha8Rng::seed_from_u64(seed));
        let v_bar = |s: usize, p: usize| v_from_q(&game, &critic, &profile, s)[p];
        for p in 0..game.num_players() {
            let trace = qboost_trace(&game, &traj, &critic, &profile, 1.0, 1.0, p);
            for t in 0..traj.horizon() {
                let ret: f64 = traj.steps[t..].iter().map(|s| s.reward[p]).sum();
                let martingale: f64 = traj.steps[t + 1..]
                    .iter()
                    .map(|s| v_bar(s.state, p) - critic.get(&game, s.state, s.action, p))
                    .sum();
                let expected = ret - v_bar(traj.steps[t].state, p) + martingale;
                prop_assert!((trace.advantages[t] - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn conditional_mean_and_martingale_cancellation(game in game_strategy(), seed in any::<u64>(), offset in 0.0..5.0f64) {
        let profile = random_profile(&game, seed);
        let exact = exact_values(&game, &profile);
        let critic = perturbed_critic(&game, &profile, seed ^ 7, offset);
        let decisions: Vec<usize> = (0..game.num_states()).filter(|&s| game.agent(s).is_some()).collect();
        let s = decisions[(seed % decisions.len() as u64) as usize];
        let (p, _) = game.agent(s).unwrap();
        let a = (seed / 7 % game.num_actions(s) as u64) as usize;
        let plays = enumerate_continuations(&game, &profile, s, a, DEFAULT_PATH_GUARD).unwrap();
        let mut mean = 0.0;
        let mut noise = 0.0;
        for c in &plays {
            mean += c.probability * qboost_trace(&game, &c.trajectory, &critic, &profile, 1.0, 1.0, p).advantages[0];
            noise += c.probability
                * c.trajectory.steps[1..]
                    .iter()
                    .map(|st| v_from_q(&game, &critic, &profile, st.state)[p] - critic.get(&game, st.state, st.action, p))
                    .sum::<f64>();
        }
        let baseline = v_from_q(&game, &critic, &profile, s)[p];
        prop_assert!((mean - (exact.q(&game, s, a, p) - baseline)).abs() < 1e-9);
        prop_assert!(noise.abs() < 1e-9);
    }

    #[test]
    fn one_step_gae_is_the_td_residual(game in game_strategy(), seed in any::<u64>()) {
        let profile = random_profile(&game, seed);
        let critic = VCritic::from_exact(&exact_values(&game, &profile));
        let traj = rollout(&game, &profile, &mut ChaCha8Rng::seed_from_u64(seed));
        let trace = gae_trace(&game, &traj, &critic, 0.0, 1.0, 0);
        for t in 0..traj.horizon() {
            let next = if t + 1 < traj.horizon() { critic.get(traj.steps[t + 1].state, 0) } else { 0.0 };
            let delta = traj.steps[t].reward[0] + next - critic.get(traj.steps[t].state, 0);
            prop_assert!((trace[t] - delta).abs() < 1e-12);
        }
    }

    #[test]
    fn softmax_is_a_strict_distribution(logits in prop::collection::vec(-30.0..30.0f64, 1..8)) {
        let p = softmax(&logits);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn surrogate_gradient_matches_differences(
        logits in prop::collection::vec(-2.0..2.0f64, 2),
        reference in 0.2..0.8f64,
        advantage in -3.0..3.0f64,
        action in 0usize..2,
    ) {
        let game = build_game("matching_pennies_imperfect").unwrap();
        let mut actor = vrpo::learner::SoftmaxActor::new(&game, 0);
        actor.logits_mut().copy_from_slice(&logits);
        let ref_prob = if action == 0 { reference } else { 1.0 - reference };
        let samples = [PolicySample { local: 0, action, ref_prob, advantage }];
        let clip = 0.2;
        let ratio = actor.probs(0)[action] / ref_prob;
        // keep away from the clamp boundaries, where the loss has kinks
        prop_assume!(((ratio - 1.0).abs() - clip).abs() > 1e-3);
        let out = surrogate_loss(&samples, &actor, clip);
        let h = 1e-6;
        for k in 0..2 {
            let mut plus = actor.clone();
            plus.logits_mut()[k] += h;
            let mut minus = actor.clone();
            minus.logits_mut()[k] -= h;
            let fd = (surrogate_loss(&samples, &plus, clip).loss - surrogate_loss(&samples, &minus, clip).loss) / (2.0 * h);
            prop_assert!((fd - out.grad[k]).abs() < 1e-6);
        }
        prop_assert!((0.0..=1.0).contains(&out.clip_fraction));
    }

    #[test]
    fn kl_gradient_matches_differences(logits in prop::collection::vec(-3.0..3.0f64, 3)) {
        let game = build_game("kuhn").unwrap();
        let actors = random_actors(&game, 0, 0.0);
        let mut actor = actors[0].clone();
        actor.logits_mut()[..3].copy_from_slice(&logits[..3]);
        let visits = [0, 1, 0];
        let (loss, grad) = kl_uniform(&actor, &visits);
        prop_assert!(loss >= 0.0);
        let h = 1e-6;
        for k in 0..actor.num_params() {
            let mut plus = actor.clone();
            plus.logits_mut()[k] += h;
            let mut minus = actor.clone();
            minus.logits_mut()[k] -= h;
            let fd = (kl_uniform(&plus, &visits).0 - kl_uniform(&minus, &visits).0) / (2.0 * h);
            prop_assert!((fd - grad[k]).abs() < 1e-6);
        }
    }

    #[test]
    fn schedules_never_increase(lr_h in 1usize..300, reg_h in 1usize..300, t in 1usize..2000) {
        let config = TrainerConfig { lr_horizon: lr_h, reg_horizon: reg_h, ..TrainerConfig::default() };
        let now = schedules(&config, t);
        let next = schedules(&config, t + 1);
        prop_assert!(next.lr_actor <= now.lr_actor && next.lr_critic <= now.lr_critic);
        prop_assert!(next.clip <= now.clip && next.reg <= now.reg);
        prop_assert!(now.lr_actor <= config.lr_base && now.reg <= config.reg_base);
    }

    #[test]
    fn replay_keeps_the_newest_items(capacity in 1usize..20, pushes in 0usize..80) {
        let mut buffer = ReplayBuffer::new(capacity);
        for i in 0..pushes {
            buffer.push(i);
            prop_assert!(buffer.len() <= capacity);
        }
        let kept: Vec<usize> = buffer.iter().copied().collect();
        let expected: Vec<usize> = (pushes.saturating_sub(capacity)..pushes).collect();
        prop_assert_eq!(kept, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn policies_stay_valid_during_training(seed in any::<u64>(), algo in 0usize..3) {
        let game = build_game("kuhn").unwrap();
        let config = TrainerConfig { batch_size: 32, lr_base: 0.5, seed, ..TrainerConfig::default() };
        let mut trainer = Trainer::new(&game, Algorithm::ALL[algo], config).unwrap();
        for _ in 0..5 {
            let m = trainer.step();
            prop_assert!((0.0..=1.0).contains(&m.clip_fraction));
            prop_assert!(m.kl_ref >= 0.0 && m.kl_uniform >= 0.0);
            let profile = joint_profile(&game, trainer.actors());
            for id in 0..game.infosets().len() {
                let probs = profile.infoset_probs(id);
                prop_assert!(probs.iter().all(|&p| p > 0.0));
                prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}
