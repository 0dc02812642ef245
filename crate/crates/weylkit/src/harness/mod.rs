//! Randomized input generators, sweep orchestration, and report emission.

pub mod config;
pub mod generate;
pub mod report;
pub mod sweep;

pub use config::{Suite, SweepConfig};
pub use generate::{
    derive_seed, generate_function, generate_operator, harmonic_sequence, linear_index_weight,
    reciprocal_index_weight, FunctionKind, OperatorDecay,
};
pub use report::{emit_report, parse_json, to_csv_string, to_json_string, RatioReport, ReportFormat};
pub use sweep::{
    all_passed, bench_transform, evaluate_reports, max_ratio_per_suite, run_sweep, BenchRow,
    SuiteCheck,
};
