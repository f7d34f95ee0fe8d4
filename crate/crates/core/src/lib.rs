//! Shift spaces over countable group alphabets, their canonical 1-block
//! inverse semigroup operations, follower coset structure and the
//! decomposition of Markov coset shifts into a fractal factor times full shifts.

pub mod block_ops;
pub mod cli_io;
pub mod coset_structure;
pub mod decomposition;
pub mod error;
pub mod group_core;
pub mod isg_embedding;
pub mod sequence_core;
pub mod shift_space;

pub use error::{Error, Result};
