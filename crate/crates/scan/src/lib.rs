//! Command-line front end: parameter-plane scans, certificate suites and
//! figure data for the border-collision normal form.

pub mod cli;
pub mod config;
pub mod figures;
pub mod scan;
pub mod suite;
pub mod table;
