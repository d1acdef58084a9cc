//! Experiment runner and command-line front end for the diameter laboratory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod harness;
pub mod oracle;
pub mod report;
pub mod spec_json;
