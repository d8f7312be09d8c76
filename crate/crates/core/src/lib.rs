#![allow(clippy::needless_range_loop)]

pub mod cycle_ring;
pub mod data;
pub mod error;
pub mod genus;
pub mod json;
pub mod isometry;
pub mod lattice;
pub mod weights;
pub mod linalg;
pub mod qseries;
pub mod special_cycles;
pub mod verify;

pub use error::{Error, Result};
