use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r *= n - i;
        r /= i + 1;
    }
    r
}

/// Bits needed to index a weight-`k` subset of `[0, n)`.
pub fn subset_rank_bits(n: u64, k: u64) -> usize {
    let c = binomial(n, k);
    if c <= BigUint::one() {
        0
    } else {
        (c - 1u32).bits() as usize
    }
}

/// Colex rank of a strictly increasing position list: `sum_i C(c_i, i + 1)`.
pub fn rank_subset(positions: &[usize]) -> BigUint {
    debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
    let mut r = BigUint::zero();
    for (i, &c) in positions.iter().enumerate() {
        r += binomial(c as u64, i as u64 + 1);
    }
    r
}

/// Inverse of [`rank_subset`] for subsets of size `k` of `[0, n)`;
/// `None` if `rank >= C(n, k)`.
pub fn unrank_subset(rank: &BigUint, n: usize, k: usize) -> Option<Vec<usize>> {
    if *rank >= binomial(n as u64, k as u64) {
        return None;
    }
    let mut r = rank.clone();
    let mut out = alloc::vec![0usize; k];
    // cur = C(c, i), walking c downward from n - 1
    let mut c = n;
    let mut i = k;
    while i > 0 {
        c -= 1;
        let mut cur = binomial(c as u64, i as u64);
        while cur > r {
            // C(c - 1, i) = C(c, i) * (c - i) / c
            cur = cur * (c - i) / c;
            c -= 1;
        }
        r -= &cur;
        out[i - 1] = c;
        i -= 1;
        if i == 0 {
            break;
        }
        // continue below c with a fresh binomial at the next step
    }
    Some(out)
}
