//! Transport, concentration and entropy-decay bounds for noisy quantum
//! circuits, together with the exact simulators used to check them.

pub mod bounds;
pub mod config;
pub mod entropy;
pub mod error;
pub mod maxcut;
pub mod numerics;
pub mod quantum;
pub mod randutil;
pub mod transport;

pub use error::{Error, Result};
