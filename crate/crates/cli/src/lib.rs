//! Command-line front end for `websym`: web files, the example corpus and
//! machine-readable reports.

pub mod commands;
pub mod corpus;
pub mod report;
pub mod webfile;
