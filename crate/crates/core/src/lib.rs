#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod dist;
pub mod empirical;
pub mod error;
pub mod grid;
pub mod harness;
pub mod process;
pub mod rng;
pub mod stats;
