#![no_std]
//! Proofs of knowledge that exploit problem structure (linearity, quasi-cyclicity,
//! ideal codes) together with their Fiat-Shamir signatures and the parameter
//! arithmetic used to size them.

extern crate alloc;

pub mod algebra;
pub mod primitives;
pub mod codes;
pub mod numeric;
pub mod chain;
pub mod protocols;
pub mod analysis;
pub mod fiat_shamir;
