use super::hash::{Digest, Prg, Salt};
use crate::algebra::BitVec;
use alloc::vec::Vec;

/// Challenge stream expanded from a transcript digest.
pub fn stream(salt: &Salt, digest: &Digest, label: &[u8]) -> Prg {
    Prg::new(salt, digest, label)
}

/// Second challenge `alpha` in `[0, n)` (zero-based party index).
pub fn alpha(prg: &mut Prg, n: usize) -> usize {
    prg.below(n as u64) as usize
}

/// `kappa` in `F_q^*`.
pub fn kappa(prg: &mut Prg, q: u16) -> u16 {
    1 + prg.below(q as u64 - 1) as u16
}

/// Packed `(mu, kappa)` index `mu + big_m * kappa` over `big_m * k` values.
pub fn mu_kappa(prg: &mut Prg, big_m: usize, k: usize) -> (usize, usize) {
    let idx = prg.below((big_m * k) as u64) as usize;
    (idx % big_m, idx / big_m)
}

/// Non-zero vector of `F2^bits`, row-major over `(i, j)`.
pub fn gamma(prg: &mut Prg, bits: usize) -> BitVec {
    loop {
        let words = (0..bits.div_ceil(64)).map(|_| prg.u64()).collect();
        let v = BitVec::from_words(bits, words);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Uniform `tau`-subset of `[0, total)` as a membership mask.
pub fn subset(prg: &mut Prg, total: usize, tau: usize) -> Vec<bool> {
    assert!(tau <= total);
    let mut idx: Vec<usize> = (0..total).collect();
    for i in 0..tau {
        let j = i + prg.below((total - i) as u64) as usize;
        idx.swap(i, j);
    }
    let mut mask = alloc::vec![false; total];
    for &i in &idx[..tau] {
        mask[i] = true;
    }
    mask
}
