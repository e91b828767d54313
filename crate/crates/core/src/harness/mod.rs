//! Experiment drivers: brackets, shape conditions, DC/DSC checks, example
//! generation, the end-to-end remainder pipeline and the Laurent-form checker.

pub mod bracket;
pub mod conditions;
pub mod dc;
pub mod generate;
pub mod pipeline;
pub mod valqui;

pub use bracket::jacobian_bracket;
pub use conditions::{check_conditions, ConditionReport};
pub use dc::{dc_dsc_check, DcMode, DcReport};
pub use generate::{generate_examples, GenKind, Generated};
pub use pipeline::{remainder_pipeline, PipelineOptions, PipelineRun};
pub use valqui::{valqui_check, ValquiReport};
