//! File formats, grid cache, parallel evaluation, SVG output, the static
//! experiment comparison and the command-line interface around
//! `elastica-core`.

pub mod cache;
pub mod cli;
pub mod error;
pub mod parallel;
pub mod plan_file;
pub mod planning;
pub mod scene;
pub mod svg;
pub mod validation;

pub use error::{Result, SteerError};

pub(crate) fn hex(bytes: &[u8]) -> String {
    use std::fmt::Write as _;
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}
