//! Scenario files, trajectory logs, SVG figures and the `legiplan` command
//! line on top of `legiplan-core`.

pub mod cli;
pub mod exec;
pub mod log;
pub mod report;
pub mod scenario;
pub mod svg;

pub use exec::PoolExecutor;
pub use scenario::{parse_scenario, serialize_scenario, ScenarioError};
