//! Deletion and burst-deletion correcting codes over even alphabets.
//!
//! Everything here is pure computation over `alloc`; file formats, the
//! CLI and the colored-table cache live in the `qdel` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod strings;
pub mod sketch;
pub mod coloring;
pub mod window;
pub mod locator;
pub mod encode;
pub mod params;
pub mod twodel;
pub mod burst_bin;
pub mod burst_q;
pub mod codec;
mod intmath;

pub use error::{Error, Result};
pub use strings::{Interval, MatrixView, QaryString, RunDecomposition};
pub use sketch::PackedSketch;
