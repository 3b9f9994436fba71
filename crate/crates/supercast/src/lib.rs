//! File formats, the Monte-Carlo harness and the command-line front end for
//! [`supercast_core`].

pub mod alist;
pub mod cli;
pub mod codebook;
pub mod harness;
pub mod symbols;

