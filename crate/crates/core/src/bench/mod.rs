//! Scenario corpus, benchmark suites, CSV records and SVG rendering.

mod config;
mod scenarios;
mod suite;
mod svg;

pub use config::{FlatConfig, ENV_PREFIX};
pub use scenarios::{builtin, gen_m_block, BUILTIN};
pub use suite::{run_case, run_suite, write_csv, BenchRecord, ScenarioSource, SuiteEntry, TaskSuite, CSV_HEADER};
pub use svg::render_svg;
