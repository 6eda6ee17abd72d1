//! Verification front end for `diraclab-core`: configuration, the check
//! suites, report assembly and the trajectory and convergence commands.

// `!(err <= tol)` is used so that NaN fails.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;
