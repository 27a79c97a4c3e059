//! Actor and critic objectives with analytic gradients over tabular parameters.

use super::actor::SoftmaxActor;

/// One of the player's decisions as seen by the clipped surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicySample {
    /// Local information set of the acting player.
    pub local: usize,
    pub action: usize,
    /// Probability of `action` under the rollout-time reference policy.
    pub ref_prob: f64,
    /// Advantage coefficient, constant with respect to the gradient.
    pub advantage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateOutput {
    pub loss: f64,
    pub grad: Vec<f64>,
    pub clip_fraction: f64,
}

/// Clipped surrogate `-Σ min{ρ·Â, clamp(ρ, 1-ε, 1+ε)·Â}` with `ρ = π(a|o)/π_ref(a|o)`.
///
/// The gradient flows through the unclipped branch whenever the minimum selects it and
/// is zero where the clamped constant is selected.
pub fn surrogate_loss(samples: &[PolicySample], actor: &SoftmaxActor, clip: f64) -> SurrogateOutput {
    let mut loss = 0.0;
    let mut grad = actor.zeros_like();
    let mut clipped = 0usize;
    for sample in samples {
        let probs = actor.probs(sample.local);
        let ratio = probs[sample.action] / sample.ref_prob;
        if (ratio - 1.0).abs() > clip {
            clipped += 1;
        }
        let unclipped = ratio * sample.advantage;
        let clamped = ratio.clamp(1.0 - clip, 1.0 + clip) * sample.advantage;
        if unclipped <= clamped {
            loss -= unclipped;
            // ∂ρ/∂z_k = ρ (1[k=a] - π_k)
            let range = actor.range(sample.local);
            for (k, g) in grad[range].iter_mut().enumerate() {
                let indicator = if k == sample.action { 1.0 } else { 0.0 };
                *g -= sample.advantage * ratio * (indicator - probs[k]);
            }
        } else {
            loss -= clamped;
        }
    }
    let clip_fraction = if samples.is_empty() {
        0.0
    } else {
        clipped as f64 / samples.len() as f64
    };
    SurrogateOutput {
        loss,
        grad,
        clip_fraction,
    }
}

/// `KL(π(·|o) ‖ Unif)` over the legal actions of one information set.
pub fn kl_to_uniform(probs: &[f64]) -> f64 {
    let n = probs.len() as f64;
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * (p * n).ln())
        .sum()
}

/// `KL(π‖π_ref)` for two distributions over the same actions.
pub fn kl_divergence(probs: &[f64], reference: &[f64]) -> f64 {
    probs
        .iter()
        .zip(reference)
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, &q)| p * (p / q).ln())
        .sum()
}

/// Sum of `KL(π(·|o) ‖ Unif)` over visited local information sets (with repetition),
/// and its gradient over the actor's logits.
pub fn kl_uniform(actor: &SoftmaxActor, visits: &[usize]) -> (f64, Vec<f64>) {
    let mut loss = 0.0;
    let mut grad = actor.zeros_like();
    for &local in visits {
        let probs = actor.probs(local);
        let neg_entropy: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum();
        loss += neg_entropy + (probs.len() as f64).ln();
        // ∂/∂z_k Σ_j π_j ln π_j = π_k (ln π_k - Σ_j π_j ln π_j)
        for (k, g) in grad[actor.range(local)].iter_mut().enumerate() {
            *g += probs[k] * (probs[k].ln() - neg_entropy);
        }
    }
    (loss, grad)
}

/// A critic regression term: flat table slot and its target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticSample {
    pub index: usize,
    pub target: f64,
}

/// `Σ ½ (table[index] - target)²` and its gradient `table[index] - target` per visit.
pub fn critic_loss(table: &[f64], samples: &[CriticSample]) -> (f64, Vec<f64>) {
    let mut loss = 0.0;
    let mut grad = vec![0.0; table.len()];
    for s in samples {
        let diff = table[s.index] - s.target;
        loss += 0.5 * diff * diff;
        grad[s.index] += diff;
    }
    (loss, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_matching_pennies;

    fn actor_with(logits: &[f64]) -> SoftmaxActor {
        let game = build_matching_pennies(true);
        let mut actor = SoftmaxActor::new(&game, 0);
        actor.logits_mut().copy_from_slice(logits);
        actor
    }

    #[test]
    fn fresh_reference_has_no_clipping() {
        let actor = actor_with(&[0.3, -0.2]);
        let probs = actor.probs(0);
        let samples = [
            PolicySample { local: 0, action: 0, ref_prob: probs[0], advantage: 1.5 },
            PolicySample { local: 0, action: 1, ref_prob: probs[1], advantage: -0.5 },
        ];
        let out = surrogate_loss(&samples, &actor, 0.02);
        assert!((out.loss - -1.0).abs() < 1e-15);
        assert_eq!(out.clip_fraction, 0.0);
    }

    #[test]
    fn clamped_branch_has_zero_gradient() {
        let actor = actor_with(&[0.0, 0.0]);
        // π = 0.5 against a reference of 1/3 gives ρ = 1.5
        let samples = [PolicySample { local: 0, action: 0, ref_prob: 1.0 / 3.0, advantage: 2.0 }];
        let out = surrogate_loss(&samples, &actor, 0.02);
        assert!((out.loss - -1.02 * 2.0).abs() < 1e-12);
        assert_eq!(out.grad, vec![0.0, 0.0]);
        assert_eq!(out.clip_fraction, 1.0);
    }

    #[test]
    fn two_action_kl_value() {
        let kl = kl_to_uniform(&[0.9, 0.1]);
        let expected = 0.9 * 1.8f64.ln() + 0.1 * 0.2f64.ln();
        assert!((kl - expected).abs() < 1e-15);
        assert!((kl - 0.368).abs() < 1e-3);
        assert_eq!(kl_to_uniform(&[0.5, 0.5]), 0.0);
    }

    #[test]
    fn kl_gradient_vanishes_at_uniform() {
        let actor = actor_with(&[0.0, 0.0]);
        let (loss, grad) = kl_uniform(&actor, &[0, 0]);
        assert_eq!(loss, 0.0);
        assert_eq!(grad, vec![0.0, 0.0]);
    }

    #[test]
    fn critic_regression_scalar() {
        let (loss, grad) = critic_loss(&[0.0], &[CriticSample { index: 0, target: -1.0 }]);
        assert_eq!(loss, 0.5);
        assert_eq!(grad, vec![1.0]);
        let (loss, grad) = critic_loss(&[2.0], &[CriticSample { index: 0, target: 2.0 }]);
        assert_eq!((loss, grad), (0.0, vec![0.0]));
    }

    #[test]
    fn unit_step_reaches_target() {
        let mut table = vec![0.0];
        let (_, grad) = critic_loss(&table, &[CriticSample { index: 0, target: -1.0 }]);
        table[0] -= 1.0 * grad[0];
        assert_eq!(table[0], -1.0);
    }
}
