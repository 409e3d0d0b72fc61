//! Desk-scale GRPO on a softmax policy over a discrete behavior grid.
//!
//! The policy picks a [`BehaviorTuple`], the tuple is rendered into a
//! concrete `<think>/<answer>` string for a sample, the reward engine scores
//! it, and advantages are normalized within each sampled group. There is no
//! KL term and no ratio clipping: every group is fresh and on-policy.
//! The update averages over the group rather than summing, so the step
//! size does not grow with the group size.

mod behavior;
mod policy;
mod render;
mod train;

use alloc::string::String;

use thiserror::Error;

pub use behavior::{BehaviorTuple, Grade, BEHAVIOR_COUNT};
pub use policy::{
    group_advantages, policy_step, softmax, surrogate, surrogate_gradient, ToyPolicy, STD_EPSILON,
};
pub use render::{render, MIN_ENTITIES, MIN_TRANSCRIPT_TOKENS};
pub use train::{
    render_seed, sample_group, train, uniform_baseline, GroupRollout, RewardTable, StepRecord,
    TrainConfig, TrainTrace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrpoError {
    #[error("degenerate-group: group size {0} is below 2")]
    DegenerateGroup(usize),
    #[error("numerical: non-finite gradient or logits")]
    Numerical,
    #[error("sample-too-small: sample `{0}` needs at least 2 entities and 8 transcript tokens")]
    SampleTooSmall(String),
    #[error("invalid config: {0}")]
    InvalidConfig(&'static str),
}
