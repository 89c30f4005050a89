//! Command-line front end for `germslice`: germ and corpus files, the
//! analysis report, and its text and JSON renderings.

pub mod corpus;
pub mod input;
pub mod render;
pub mod report;

pub use input::{GermInput, InputError};
pub use report::{analyze, exit_code, Analysis, AnalysisReport, AnalyzeOptions};
