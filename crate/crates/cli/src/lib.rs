//! Command-line tool and HTTP service for `caylink`.

pub mod document;
pub mod failure;
pub mod report;
pub mod server;

pub use document::{load_text, LinkageDocument, Loaded};
pub use failure::{Failure, Outcome};
