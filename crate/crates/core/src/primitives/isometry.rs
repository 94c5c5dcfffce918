use crate::algebra::SmallMat;
use alloc::vec;
use alloc::vec::Vec;

/// Rank-metric isometry `x -> P x Q` on vectors of `GF(2^m)^n` seen as
/// `m x n` binary matrices whose columns are the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    p: SmallMat,
    q: SmallMat,
    p_inv: SmallMat,
    q_inv: SmallMat,
}

fn times_q(x: &[u64], q: &SmallMat) -> Vec<u64> {
    let mut out = vec![0u64; x.len()];
    for (i, &row) in q.rows().iter().enumerate() {
        let xi = x[i];
        let mut r = row;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            out[j] ^= xi;
            r &= r - 1;
        }
    }
    out
}

impl Isometry {
    /// Returns `None` if either matrix is singular.
    pub fn new(p: SmallMat, q: SmallMat) -> Option<Self> {
        let p_inv = p.inverse()?;
        let q_inv = q.inverse()?;
        Some(Self { p, q, p_inv, q_inv })
    }

    pub(crate) fn from_parts(p: SmallMat, q: SmallMat, p_inv: SmallMat, q_inv: SmallMat) -> Self {
        Self { p, q, p_inv, q_inv }
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Self::new(SmallMat::identity(m), SmallMat::identity(n)).unwrap()
    }

    pub fn p(&self) -> &SmallMat {
        &self.p
    }

    pub fn q(&self) -> &SmallMat {
        &self.q
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.q.size());
        let px: Vec<u64> = x.iter().map(|&c| self.p.apply(c)).collect();
        times_q(&px, &self.q)
    }

    pub fn apply_inv(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.q.size());
        let px: Vec<u64> = x.iter().map(|&c| self.p_inv.apply(c)).collect();
        times_q(&px, &self.q_inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::new(self.p.mul(&other.p), other.q.mul(&self.q)).unwrap()
    }
}
