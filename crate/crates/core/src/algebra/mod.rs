//! Finite fields and dense linear algebra over them.

pub mod bits;
pub mod field;
pub mod matrix;

pub use bits::{echelon_basis, rank_of_words, BitMatrix, BitVec, LinAlgError, SmallMat};
pub use field::{BinExtField, Field, Gf2, PrimeField};
pub use matrix::{hamming_weight, Matrix};

/// Rank weight of a vector over `GF(2^m)` whose coordinates are bit masks.
pub fn rank_weight(x: &[u64]) -> usize {
    rank_of_words(x)
}

/// Reduced echelon basis of the F2-span of the coordinates of `x`.
pub fn support(x: &[u64]) -> alloc::vec::Vec<u64> {
    echelon_basis(x)
}

/// Whether `v` lies in the span of a reduced echelon basis.
pub fn in_span(basis: &[u64], v: u64) -> bool {
    let mut v = v;
    for &b in basis {
        let lead = 63 - b.leading_zeros();
        if v >> lead & 1 == 1 {
            v ^= b;
        }
    }
    v == 0
}
