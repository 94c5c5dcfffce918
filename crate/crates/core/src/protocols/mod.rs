//! The four proofs of knowledge.

pub mod sd_helper;
pub mod ipkp;
pub mod qcsd;
pub mod irsl;
