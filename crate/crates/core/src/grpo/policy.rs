use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::behavior::{BehaviorTuple, BEHAVIOR_COUNT};
use super::GrpoError;

/// Std floor below which a group counts as having identical rewards.
pub const STD_EPSILON: f64 = 1e-8;

/// Softmax policy over the behavior grid, one logit per tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyPolicy {
    logits: Vec<f64>,
}

impl Default for ToyPolicy {
    fn default() -> Self {
        ToyPolicy::uniform()
    }
}

impl ToyPolicy {
    pub fn uniform() -> Self {
        ToyPolicy {
            logits: vec![0.0; BEHAVIOR_COUNT],
        }
    }

    pub fn from_logits(logits: Vec<f64>) -> Result<Self, GrpoError> {
        if logits.len() != BEHAVIOR_COUNT {
            return Err(GrpoError::InvalidConfig("policy needs one logit per behavior tuple"));
        }
        if logits.iter().any(|l| !l.is_finite()) {
            return Err(GrpoError::Numerical);
        }
        Ok(ToyPolicy { logits })
    }

    pub fn logits(&self) -> &[f64] {
        &self.logits
    }

    pub fn probabilities(&self) -> Vec<f64> {
        softmax(&self.logits)
    }

    pub fn probability(&self, tuple: BehaviorTuple) -> f64 {
        self.probabilities()[tuple.index()]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BehaviorTuple {
        let probs = self.probabilities();
        sample_index(&probs, rng.random::<f64>())
    }

    /// `Σ π(t) · f(t)` over the grid.
    pub fn expectation(&self, f: impl Fn(BehaviorTuple) -> f64) -> f64 {
        self.probabilities()
            .iter()
            .zip(BehaviorTuple::all())
            .map(|(p, t)| p * f(t))
            .sum()
    }
}

pub(crate) fn sample_index(probs: &[f64], u: f64) -> BehaviorTuple {
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return BehaviorTuple::from_index(i).expect("index in range");
        }
    }
    // u landed in the rounding gap above the last partial sum
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1);
    BehaviorTuple::from_index(last).expect("index in range")
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| libm::exp(l - max)).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Group-relative advantages: `(r - mean) / std` with the population std.
/// A group whose std is below [`STD_EPSILON`] gets all zeros.
pub fn group_advantages(rewards: &[f64]) -> Result<Vec<f64>, GrpoError> {
    if rewards.len() < 2 {
        return Err(GrpoError::DegenerateGroup(rewards.len()));
    }
    if rewards.iter().any(|r| !r.is_finite()) {
        return Err(GrpoError::Numerical);
    }
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    let var = rewards.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
    let std = libm::sqrt(var);
    if std < STD_EPSILON {
        return Ok(vec![0.0; rewards.len()]);
    }
    Ok(rewards.iter().map(|r| (r - mean) / std).collect())
}

/// `(1/G) Σ_i A_i · log π(t_i)`, the likelihood-ratio surrogate whose
/// gradient is the policy-gradient estimate. Averaged over the group as in
/// the GRPO objective.
pub fn surrogate(policy: &ToyPolicy, tuples: &[BehaviorTuple], advantages: &[f64]) -> f64 {
    if tuples.is_empty() {
        return 0.0;
    }
    let probs = policy.probabilities();
    let sum: f64 = tuples
        .iter()
        .zip(advantages)
        .map(|(t, a)| a * libm::log(probs[t.index()]))
        .sum();
    sum / tuples.len() as f64
}

/// Analytic gradient of [`surrogate`] with respect to the logits:
/// `(1/G) Σ_i A_i · (onehot(t_i) - π)`.
pub fn surrogate_gradient(
    policy: &ToyPolicy,
    tuples: &[BehaviorTuple],
    advantages: &[f64],
) -> Vec<f64> {
    let probs = policy.probabilities();
    if tuples.is_empty() {
        return vec![0.0; probs.len()];
    }
    let g = tuples.len() as f64;
    let total: f64 = advantages.iter().sum();
    let mut grad: Vec<f64> = probs.iter().map(|p| -total * p / g).collect();
    for (t, a) in tuples.iter().zip(advantages) {
        grad[t.index()] += a / g;
    }
    grad
}

/// One ascent step on the surrogate: `logits += lr · gradient`.
pub fn policy_step(
    policy: &ToyPolicy,
    tuples: &[BehaviorTuple],
    advantages: &[f64],
    lr: f64,
) -> Result<ToyPolicy, GrpoError> {
    if !(lr > 0.0 && lr.is_finite()) {
        return Err(GrpoError::InvalidConfig("learning rate must be positive"));
    }
    if tuples.len() != advantages.len() {
        return Err(GrpoError::InvalidConfig("one advantage per sampled tuple"));
    }
    let grad = surrogate_gradient(policy, tuples, advantages);
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(GrpoError::Numerical);
    }
    let logits: Vec<f64> = policy
        .logits
        .iter()
        .zip(&grad)
        .map(|(l, g)| l + lr * g)
        .collect();
    if logits.iter().any(|l| !l.is_finite()) {
        return Err(GrpoError::Numerical);
    }
    Ok(ToyPolicy { logits })
}
