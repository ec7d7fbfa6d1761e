// SPDX-License-Identifier: Apache-2.0

pub mod archlib;
pub mod cli_report;
pub mod error;
pub mod estimator;
pub mod stats;
pub mod stimgen;
pub mod toggle_sim;

pub use error::{Error, Result};
