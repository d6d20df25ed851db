//! Report schema and verification drivers behind the `trigdet` binary.

pub mod report;
pub mod verify;

pub use report::{Identity, Status, VerificationReport};
pub use verify::{scan, verify_one, VerifyOptions};
