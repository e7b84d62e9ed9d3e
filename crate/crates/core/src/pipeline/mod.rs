//! Config-driven analysis: ingestion, binning, synthetic data, fit,
//! exclusion curve and report files.

pub mod binning;
pub mod config;
pub mod io;
pub mod run;
pub mod synth;

pub use binning::{bin_dataset, centred_log_edges, BinErrors, BinnedData, CorrectionErrors};
pub use config::AnalysisConfig;
pub use io::{load_raw_csv, read_raw_csv, RawPoint};
pub use run::{analyze, load_or_synthesize, run_analysis, Report};
pub use synth::{synthesize, SyntheticModel};
