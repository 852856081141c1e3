//! Command-line front end for `lna-core`.

pub mod args;
pub mod cli;
pub mod commands;
pub mod report;
pub mod svg;

pub use cli::{run, Cli};
pub use svg::{render_smith_svg, to_svg, SmithPlotSpec};
