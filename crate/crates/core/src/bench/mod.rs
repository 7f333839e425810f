//! Experiment harness: matcher configuration, replay with timing and
//! verification, aggregation and reporting.

mod config;
mod profile;
mod report;
mod run;

pub use config::{Algorithm, ConfigError, MatcherConfig};
pub use profile::{
    default_taus, geometric_mean, performance_profile, ProfileError, ProfileMode, ProfileRow,
    ResultTable, StatsError,
};
pub use report::{
    parse_summaries_csv, profile_svg, profile_to_csv, records_to_csv, summaries_to_csv,
    table_from_summaries, Objective, ReportError, SummaryRow, PROFILE_HEADER, RECORD_HEADER,
    SUMMARY_HEADER,
};
pub use run::{
    run_experiment, run_repetitions, BenchRecord, Checkpoint, ExperimentResult, RunError,
    RunOptions, Summary,
};
