use serde::{Deserialize, Serialize};

/// Gradient descent with classical momentum:
/// `velocity ← m·velocity + grad; param ← param − rate·velocity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Momentum {
    momentum: f64,
    velocity: Vec<f64>,
}

impl Momentum {
    pub fn new(size: usize, momentum: f64) -> Self {
        Momentum {
            momentum,
            velocity: vec![0.0; size],
        }
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], rate: f64) {
        assert_eq!(params.len(), grad.len(), "parameter/gradient shape mismatch");
        assert_eq!(params.len(), self.velocity.len(), "parameter/velocity shape mismatch");
        for ((p, v), g) in params.iter_mut().zip(&mut self.velocity).zip(grad) {
            *v = self.momentum * *v + g;
            *p -= rate * *v;
        }
    }
}
