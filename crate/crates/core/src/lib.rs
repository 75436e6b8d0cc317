//! Revealed subjective expected utility for non-diversified demand data.

pub mod axioms;
pub mod beliefs;
pub mod cli;
pub mod error;
pub mod families;
pub mod model;
pub mod plot;
pub mod rational;
pub mod report;
pub mod simplex;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Beliefs, Dataset, Observation};
pub use rational::Rational;
