//! Hashing, seed expansion, seed trees, samplers and encodings shared by all protocols.

pub mod bitio;
pub mod challenge;
pub mod combinatorics;
pub mod hash;
pub mod isometry;
pub mod perm;
pub mod sample;
pub mod tree;

pub use bitio::{BitReader, BitWriter};
pub use hash::{commit, tag, Commitment, Digest, Hasher, Prg, Salt, Seed, DIGEST_BYTES, LAMBDA, SEED_BYTES};
pub use isometry::Isometry;
pub use perm::Permutation;
pub use tree::SeedTree;
