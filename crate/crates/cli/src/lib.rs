//! Command-line front end: model files and reports.

pub mod modelfile;
pub mod report;
