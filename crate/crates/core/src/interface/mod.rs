//! Configuration parsing, energy-grid scans, table emission and the
//! invariant-check runner behind the command-line tool.

pub mod check;
pub mod config;
pub mod scan;
pub mod table;

pub use check::{default_channels, run_check, run_table_check, CheckReport, SuiteResult};
pub use config::{
    channels_from_json, EnergyGrid, MethodChoice, OutputFormat, OutputSpec, RunConfig,
};
pub use scan::{run_scan, PointStatus, ScanReport, ScanRow};
pub use table::{build_table, emit_table, TableDump, TridiagonalJson};

/// Process exit status for a configuration error.
pub const EXIT_CONFIG: u8 = 1;
/// Process exit status when no grid point could be evaluated.
pub const EXIT_NO_POINTS: u8 = 2;
/// Process exit status when an invariant check fails.
pub const EXIT_CHECK_FAILED: u8 = 3;
