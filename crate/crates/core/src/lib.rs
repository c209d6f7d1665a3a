//! Analysis toolkit for the F-beta effectiveness measure: closed-form
//! CDFs of F-beta under two randomized precision/recall mixtures, Monte
//! Carlo verification oracles, a knee-point search that picks beta_opt
//! from a precision/recall pair, a penalty-weighted cross entropy built on
//! that beta, and small simulators plus a dense-network trainer to
//! exercise the loss end to end.

pub mod dist;
pub mod error;
pub mod fbeta;
pub mod knee;
pub mod loss;
pub mod net;
pub mod oracle;
pub mod rng;
pub mod sim;
pub mod train;

pub use error::{Error, Result};
