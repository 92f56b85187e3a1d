//! Training orchestration, curriculum transfer, evaluation sweeps, and
//! run comparison.

mod compare;
mod config;
mod curriculum;
mod episode;
mod eval;
mod io;
mod metrics;
mod passive;
mod train;

pub use compare::{
    compare_runs, comparison_csv, CompareError, CompareRow, LoadedReport, ReportRow,
    COMPARE_HEADER,
};
pub use config::{
    Algorithm, Behavior, PassiveConfig, Seeds, TrainConfig, TrainError, WorldConfig,
};
pub use curriculum::curriculum_init;
pub use episode::UpdateCounters;
pub use eval::{
    eval_reports_csv, evaluate, trace_episode, write_eval_csv, EvalAggregates, EvalConfig,
    EvalLayout, EvalReport, EVAL_HEADER,
};
pub use io::{write_checkpoints, FileSink};
pub use metrics::{metrics_csv_header, metrics_csv_row, write_metrics_csv, EpisodeMetrics};
pub use train::{
    train, train_independent_ddpg, train_ps_ddpg, train_single_ddpg, train_with_sink, NoSink,
    TrainOutcome, TrainSink,
};
