//! File formats, registry front end and reports for `curvlab-core`.

pub mod app;
pub mod manifold;
pub mod report;

pub use app::{execute, Cli, Request, RunConfig};
pub use manifold::{parse_manifold, ParseError};
pub use report::{Check, Report};
