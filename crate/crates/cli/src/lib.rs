//! Scenario runner for the beltrami-core experiments: TOML configuration,
//! a registry of named scenarios, CSV tables and optional SVG plots.

// `!(x > 0.0)` also rejects NaN, which is the point of writing it that way.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod run;
pub mod scenarios;
pub mod schema;
pub mod svg;
pub mod table;
