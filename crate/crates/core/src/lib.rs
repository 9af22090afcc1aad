//! Policy text mining and index scoring for implicit-guarantee analysis.
//!
//! The pipeline: load a manifest-driven corpus ([`corpus`]), extract keyword
//! candidates ([`keywords`]), build co-word matrices and clusters ([`coword`]),
//! score documents against a hierarchical indicator schema ([`schema`],
//! [`scoring`]), and compute index values, intensity, and reports ([`engine`],
//! [`report`]). The `pmckit` binary exposes the same steps as subcommands.

pub mod cli;
pub mod corpus;
pub mod coword;
pub mod engine;
pub mod error;
pub mod keywords;
pub mod report;
pub mod schema;
pub mod scoring;

pub use error::{Error, ErrorClass, Result};
