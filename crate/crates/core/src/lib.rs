pub mod convergents;
pub mod decimal;
pub mod engine;
pub mod error;
pub mod field;
pub mod harness;
pub mod padic;
mod recurrence;
pub mod stochastics;
