use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::behavior::{BehaviorTuple, BEHAVIOR_COUNT};
use super::policy::{group_advantages, policy_step, ToyPolicy};
use super::render::render;
use super::GrpoError;
use crate::reward::{total_reward, RewardBreakdown, RewardConfig};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub steps: usize,
    pub group_size: usize,
    pub lr: f64,
    pub seed: u64,
    pub reward: RewardConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            steps: 2000,
            group_size: 8,
            lr: 0.1,
            seed: 0,
            reward: RewardConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), GrpoError> {
        if self.steps == 0 {
            return Err(GrpoError::InvalidConfig("steps must be at least 1"));
        }
        if self.group_size < 2 {
            return Err(GrpoError::DegenerateGroup(self.group_size));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(GrpoError::InvalidConfig("learning rate must be positive"));
        }
        self.reward
            .weights
            .validated()
            .map_err(|_| GrpoError::InvalidConfig("reward weights must be finite and non-negative"))?;
        Ok(())
    }
}

/// One group of sampled behaviors with their scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRollout {
    pub tuples: Vec<BehaviorTuple>,
    /// Index into the sample list, shared by the whole group.
    pub sample: usize,
    pub rendered: Vec<String>,
    pub rewards: Vec<f64>,
    pub advantages: Vec<f64>,
}

/// Per-step statistics, recorded after the policy update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// Mean total reward of the sampled group.
    pub mean_reward: f64,
    pub mean_format: f64,
    pub mean_ocr: f64,
    pub mean_asr: f64,
    pub mean_va: f64,
    /// Exact expected total reward of the updated policy, averaged over samples.
    pub expected_reward: f64,
    pub optimal_mass: f64,
    pub format_ok_mass: f64,
    pub expected_ocr_level: f64,
    pub expected_asr_level: f64,
    pub expected_anchor_level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    pub seed: u64,
    pub config: TrainConfig,
    pub steps: Vec<StepRecord>,
    pub final_probabilities: Vec<f64>,
}

impl TrainTrace {
    pub fn last(&self) -> &StepRecord {
        self.steps.last().expect("trace has at least one step")
    }
}

fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for rendering `tuple` on sample `sample_index` within a run.
pub fn render_seed(run_seed: u64, sample_index: usize, tuple: BehaviorTuple) -> u64 {
    mix(mix(run_seed ^ 0x5EED) ^ mix(sample_index as u64) ^ ((tuple.index() as u64) << 40))
}

/// Rendered rollouts and their scores for every (sample, tuple) pair.
/// Rendering is deterministic per pair, so this is computed once per run.
#[derive(Debug, Clone)]
pub struct RewardTable {
    rendered: Vec<Vec<String>>,
    scores: Vec<Vec<RewardBreakdown>>,
}

impl RewardTable {
    pub fn build(samples: &[Sample], seed: u64, reward: &RewardConfig) -> Result<Self, GrpoError> {
        if samples.is_empty() {
            return Err(GrpoError::InvalidConfig("at least one sample is required"));
        }
        let mut rendered = Vec::with_capacity(samples.len());
        let mut scores = Vec::with_capacity(samples.len());
        for (i, sample) in samples.iter().enumerate() {
            let mut row_text = Vec::with_capacity(BEHAVIOR_COUNT);
            let mut row_score = Vec::with_capacity(BEHAVIOR_COUNT);
            for tuple in BehaviorTuple::all() {
                let mut rng = ChaCha8Rng::seed_from_u64(render_seed(seed, i, tuple));
                let text = render(tuple, sample, &mut rng)?;
                row_score.push(total_reward(sample, &text, reward));
                row_text.push(text);
            }
            rendered.push(row_text);
            scores.push(row_score);
        }
        Ok(RewardTable { rendered, scores })
    }

    pub fn score(&self, sample: usize, tuple: BehaviorTuple) -> &RewardBreakdown {
        &self.scores[sample][tuple.index()]
    }

    pub fn rendered(&self, sample: usize, tuple: BehaviorTuple) -> &str {
        &self.rendered[sample][tuple.index()]
    }

    /// Per-tuple total reward averaged over samples.
    pub fn mean_totals(&self) -> Vec<f64> {
        let n = self.scores.len() as f64;
        (0..BEHAVIOR_COUNT)
            .map(|t| self.scores.iter().map(|row| row[t].total).sum::<f64>() / n)
            .collect()
    }
}

/// Samples one group from `policy` and scores it. Like GRPO, every rollout
/// in a group answers the same sample, drawn uniformly.
pub fn sample_group<R: Rng + ?Sized>(
    policy: &ToyPolicy,
    table: &RewardTable,
    sample_count: usize,
    group_size: usize,
    rng: &mut R,
) -> Result<GroupRollout, GrpoError> {
    let mut tuples = Vec::with_capacity(group_size);
    let mut rendered = Vec::with_capacity(group_size);
    let mut rewards = Vec::with_capacity(group_size);
    let s = rng.random_range(0..sample_count);
    for _ in 0..group_size {
        let tuple = policy.sample(rng);
        rewards.push(table.score(s, tuple).total);
        rendered.push(table.rendered(s, tuple).into());
        tuples.push(tuple);
    }
    let advantages = group_advantages(&rewards)?;
    Ok(GroupRollout {
        tuples,
        sample: s,
        rendered,
        rewards,
        advantages,
    })
}

/// Runs the sample, score, normalize, update loop for `config.steps` steps.
pub fn train(config: &TrainConfig, samples: &[Sample]) -> Result<TrainTrace, GrpoError> {
    config.validate()?;
    let table = RewardTable::build(samples, config.seed, &config.reward)?;
    let mean_totals = table.mean_totals();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut policy = ToyPolicy::uniform();
    let mut steps = Vec::with_capacity(config.steps);

    for step in 0..config.steps {
        let group = sample_group(&policy, &table, samples.len(), config.group_size, &mut rng)?;
        policy = policy_step(&policy, &group.tuples, &group.advantages, config.lr)?;

        let g = config.group_size as f64;
        let mut comp = [0.0f64; 4];
        for t in &group.tuples {
            let b = table.score(group.sample, *t);
            comp[0] += b.r_format;
            comp[1] += b.r_ocr;
            comp[2] += b.r_asr;
            comp[3] += b.r_va;
        }
        let probs = policy.probabilities();
        let mut marg = [0.0f64; 4];
        let mut expected_reward = 0.0;
        for (t, p) in BehaviorTuple::all().zip(&probs) {
            expected_reward += p * mean_totals[t.index()];
            marg[0] += p * f64::from(u8::from(t.format_ok));
            marg[1] += p * t.ocr.value();
            marg[2] += p * t.asr.value();
            marg[3] += p * t.anchor.value();
        }
        steps.push(StepRecord {
            step,
            mean_reward: group.rewards.iter().sum::<f64>() / g,
            mean_format: comp[0] / g,
            mean_ocr: comp[1] / g,
            mean_asr: comp[2] / g,
            mean_va: comp[3] / g,
            expected_reward,
            optimal_mass: probs[BehaviorTuple::OPTIMAL.index()],
            format_ok_mass: marg[0],
            expected_ocr_level: marg[1],
            expected_asr_level: marg[2],
            expected_anchor_level: marg[3],
        });
    }

    Ok(TrainTrace {
        seed: config.seed,
        config: *config,
        steps,
        final_probabilities: policy.probabilities(),
    })
}

/// Expected reward of the uniform policy, for reference in reports.
pub fn uniform_baseline(table: &RewardTable) -> f64 {
    let totals = table.mean_totals();
    totals.iter().sum::<f64>() / totals.len() as f64
}
