#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;

pub mod diagrams;
pub mod error;
pub mod features;
pub mod filtration;
pub mod graph;
pub mod kernels;
pub mod learn;
pub mod linalg;
pub mod math;
pub mod persistence;
pub mod rng;

pub use error::{Error, Result};
