//! Data-generating processes, datasets and gap estimators.

mod config;
mod dataset;
mod gaps;
mod instance;

pub use config::{load_instance, parse_instance};
pub use dataset::{sample_dataset, Dataset, RewardReader, EAGER_ENTRY_LIMIT};
pub use gaps::{argmax, gap_hat, gap_hat_arm};
pub(crate) use gaps::top_two_gap;
pub use instance::{BanditInstance, LinearStructure, Noise};
