//! Configuration-driven experiment runner for the `smc-mmle` binary.

pub mod commands;
pub mod config;
pub mod experiment;
pub mod output;
