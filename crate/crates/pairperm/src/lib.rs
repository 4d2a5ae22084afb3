//! File formats, dataset loaders, caching and the experiment runner built
//! on `pairperm-core`.

pub mod cache;
pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod off;
pub mod pipeline;
pub mod tudataset;

pub use error::{Error, Result};
