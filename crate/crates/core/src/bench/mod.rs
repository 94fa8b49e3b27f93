//! Experiment orchestration: capability sweeps, classification runs,
//! metrics and suite reports.

pub mod capability;
pub mod classify;
pub mod metrics;
pub mod suite;

pub use capability::{learning_capability, CapabilityConfig, CapabilityResult};
pub use classify::{run_classification, ClassificationConfig, LabelledTable};
pub use metrics::{classification_metrics, roc_auc, ClassificationMetrics};
pub use suite::{run_suite, Preset, SuiteConfig, SuiteOverrides};
