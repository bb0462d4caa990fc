//! Two-stage prefix code for Bernoulli sequences: a count code for the
//! Hamming weight followed by the lexicographic rank of the sequence among
//! all sequences of that weight.

pub mod analysis;
pub mod baselines;
pub mod bitio;
pub mod codec;
pub mod combinatorics;
pub mod countcode;
pub mod error;
pub mod experiment;
pub mod graph;
mod nat;

pub use bitio::{BitReader, BitSequence, BitWriter, ContainerHeader, Mode};
pub use error::{Error, Result};
