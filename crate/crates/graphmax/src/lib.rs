//! File formats, reports, parallel search and the verification suites behind
//! the `graphmax` command.

pub mod error;
pub mod io;
pub mod parallel;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use report::{Entry, Report, Status};
