#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod caption;
pub mod eval;
pub mod fusion;
pub mod prosody;
pub mod sentiment;
pub mod stats;
pub mod visual;
