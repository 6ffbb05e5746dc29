//! File formats, caching and batch drivers around `polytc-core`.

pub mod batch;
pub mod cache;
pub mod formats;
pub mod table1;
