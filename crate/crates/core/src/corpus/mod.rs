pub mod code;
pub mod gpqa;
pub mod named;
pub mod report;
pub mod sweep;

pub use code::{cyclic_code_basis, rotation_classes, Analyses, GroupAnalysis};
pub use gpqa::{verify_gpqa_case, GPQA_CASES};
pub use report::{
    render_text, summarize, Check, Finding, Instance, Status, Tally, TheoremReport, Witness, WitnessData,
};
pub use sweep::{resolve_cases, run_cases, sweep, ALL_CASES};
