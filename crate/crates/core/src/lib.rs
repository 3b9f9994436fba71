//! Two-level superposition coding for cooperative broadcasting.
//!
//! Two source nodes transmit the halves of a Plotkin `|u|u+v|` codeword on
//! orthogonal QPSK axes; the destination receives their sum, optionally
//! Alamouti-coded across the two nodes, and decodes the composite code with
//! belief propagation. Near receivers recover both message classes, far
//! receivers the strongly protected one.
//!
//! This crate is `no_std` (with `alloc`). File formats, the Monte-Carlo
//! harness and the CLI live in the `supercast` crate.

#![no_std]

extern crate alloc;

pub mod channel;
pub mod codes;
pub mod decoder;
mod error;
pub mod gf2;
pub mod link;
pub mod modem;
pub mod stbc;

pub use error::{Error, Result};

/// Seed under which [`codes::gallager_ldpc`] yields the shipped (20,7,6) code.
pub const GOLDEN_LDPC_SEED: u64 = 2009;
