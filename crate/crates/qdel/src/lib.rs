//! File formats, the colored-table cache, the deletion channel,
//! verification drivers and redundancy reports for `qdel-core`.

pub mod channel;
pub mod format;
pub mod report;
pub mod tables;
pub mod text;
pub mod verify;

pub use qdel_core as core;
