//! Parity-check matrices (random, quasi-cyclic, ideal), syndromes and the
//! rotation operator.

use crate::algebra::field::{is_prime, smallest_irreducible};
use crate::algebra::{BinExtField, BitMatrix, BitVec, Field, LinAlgError, Matrix};
use crate::primitives::{sample, Prg};
use alloc::vec;
use alloc::vec::Vec;

/// Parameter validation failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamError {
    /// Block length is not a prime with 2 primitive modulo it.
    NotPrimitivePrime,
    /// Extension degree out of range.
    Degree,
    /// Inconsistent dimensions.
    Shape,
}

/// A linear map `x -> H x^T` acting on a vector type.
pub trait ParityCheck<V> {
    type Syndrome: Clone + PartialEq + core::fmt::Debug;

    fn syndrome(&self, x: &V) -> Self::Syndrome;
    /// Some `x` with `H x^T = y`.
    fn preimage(&self, y: &Self::Syndrome) -> Result<V, LinAlgError>;
    fn syndrome_add(&self, a: &Self::Syndrome, b: &Self::Syndrome) -> Self::Syndrome;
    fn syndrome_bytes(&self, s: &Self::Syndrome) -> Vec<u8>;
}

impl ParityCheck<BitVec> for BitMatrix {
    type Syndrome = BitVec;
    fn syndrome(&self, x: &BitVec) -> BitVec {
        self.matvec(x).expect("syndrome shape")
    }
    fn preimage(&self, y: &BitVec) -> Result<BitVec, LinAlgError> {
        self.solve_preimage(y)
    }
    fn syndrome_add(&self, a: &BitVec, b: &BitVec) -> BitVec {
        a.xor(b)
    }
    fn syndrome_bytes(&self, s: &BitVec) -> Vec<u8> {
        s.to_bytes()
    }
}

/// Little-endian bytes of extension-field coordinates, `ceil(m/8)` each.
pub fn ext_bytes(m: u32, x: &[u64]) -> Vec<u8> {
    let nb = m.div_ceil(8) as usize;
    x.iter().flat_map(|c| c.to_le_bytes().into_iter().take(nb)).collect()
}

impl ParityCheck<Vec<u64>> for Matrix<BinExtField> {
    type Syndrome = Vec<u64>;
    fn syndrome(&self, x: &Vec<u64>) -> Vec<u64> {
        self.matvec(x).expect("syndrome shape")
    }
    fn preimage(&self, y: &Vec<u64>) -> Result<Vec<u64>, LinAlgError> {
        self.solve_preimage(y)
    }
    fn syndrome_add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }
    fn syndrome_bytes(&self, s: &Vec<u64>) -> Vec<u8> {
        ext_bytes(self.field().degree(), s)
    }
}

/// Uniform `(n-k) x n` binary parity-check matrix, rows drawn in order.
pub fn random_binary(prg: &mut Prg, n: usize, k: usize) -> BitMatrix {
    let rows = (0..n - k).map(|_| sample::bitvec(prg, n)).collect();
    BitMatrix::from_rows(n, rows)
}

/// Uniform `(n-k) x n` parity-check matrix over `GF(2^m)`, row-major.
pub fn random_ext(prg: &mut Prg, field: BinExtField, n: usize, k: usize) -> Matrix<BinExtField> {
    let data = (0..(n - k) * n).map(|_| prg.bits(field.degree())).collect();
    Matrix::from_vec(field, n - k, n, data).unwrap()
}

/// Whether `k` is prime and 2 generates the multiplicative group modulo `k`.
pub fn is_primitive_prime(k: usize) -> bool {
    if k < 3 || !is_prime(k as u64) {
        return false;
    }
    let mut x = 1usize;
    for i in 1..k {
        x = x * 2 % k;
        if x == 1 {
            return i == k - 1;
        }
    }
    false
}

/// Cyclic right rotation of a length-`k` or length-`2k` vector; each half rotates independently.
pub fn rot(v: &BitVec, k: usize, r: usize) -> BitVec {
    assert!(r < k, "rotation out of range");
    match v.len() {
        l if l == k => v.rotate_right(r),
        l if l == 2 * k => v.slice(0, k).rotate_right(r).concat(&v.slice(k, k).rotate_right(r)),
        _ => panic!("rot: length must be k or 2k"),
    }
}

/// `H = [I_k | B]` with `B` circulant, row `i` of `B` being `rot_i(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiCyclicPcm {
    k: usize,
    b: BitVec,
    /// `b'_i = b_{-i mod k}`, so column `c` of `B` is `rot_c(b')`.
    col0: BitVec,
}

impl QuasiCyclicPcm {
    /// Requires `k` to be a prime with 2 primitive modulo `k`.
    pub fn new(b: BitVec) -> Result<Self, ParamError> {
        if !is_primitive_prime(b.len()) {
            return Err(ParamError::NotPrimitivePrime);
        }
        Ok(Self::new_unchecked(b))
    }

    /// Skips the primitive-prime check; for toy parameters only.
    pub fn new_unchecked(b: BitVec) -> Self {
        let k = b.len();
        let mut col0 = BitVec::zeros(k);
        for i in 0..k {
            col0.set(i, b.get((k - i) % k));
        }
        Self { k, b, col0 }
    }

    pub fn from_prg(prg: &mut Prg, k: usize, checked: bool) -> Result<Self, ParamError> {
        let b = sample::bitvec(prg, k);
        if checked {
            Self::new(b)
        } else {
            Ok(Self::new_unchecked(b))
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        2 * self.k
    }

    pub fn first_row(&self) -> &BitVec {
        &self.b
    }

    pub fn expand(&self) -> BitMatrix {
        let k = self.k;
        let rows = (0..k)
            .map(|i| {
                let mut e = BitVec::zeros(k);
                e.set(i, true);
                e.concat(&self.b.rotate_right(i))
            })
            .collect();
        BitMatrix::from_rows(2 * k, rows)
    }

    pub fn rot(&self, v: &BitVec, r: usize) -> BitVec {
        rot(v, self.k, r)
    }

    pub fn rotation_identity_check(&self, x: &BitVec, y: &BitVec, r: usize) -> bool {
        self.syndrome(&self.rot(x, r)) == self.rot(y, r)
    }
}

impl ParityCheck<BitVec> for QuasiCyclicPcm {
    type Syndrome = BitVec;
    fn syndrome(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), 2 * self.k, "syndrome shape");
        let mut y = x.slice(0, self.k);
        let x2 = x.slice(self.k, self.k);
        for c in x2.iter_ones() {
            y.xor_assign(&self.col0.rotate_right(c));
        }
        y
    }
    fn preimage(&self, y: &BitVec) -> Result<BitVec, LinAlgError> {
        if y.len() != self.k {
            return Err(LinAlgError::Shape);
        }
        Ok(y.concat(&BitVec::zeros(self.k)))
    }
    fn syndrome_add(&self, a: &BitVec, b: &BitVec) -> BitVec {
        a.xor(b)
    }
    fn syndrome_bytes(&self, s: &BitVec) -> Vec<u8> {
        s.to_bytes()
    }
}

/// `H = [I_k | IM_P(h)]` over `GF(2^m)` where row `i` of `IM_P(h)` is `X^i h mod P`.
///
/// The rotation used with this code is the column action of `IM_P(X^r)`, which
/// commutes with `IM_P(h)`; it is the plain cyclic shift when `P = X^k - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPcm {
    field: BinExtField,
    k: usize,
    /// `P` over F2 with the leading `X^k` term.
    poly: u64,
    h: Vec<u64>,
    /// `X^j mod P` for `j < 2k`, as bit masks of length `k`.
    powers: Vec<u64>,
}

impl IdealPcm {
    /// `P` is the smallest irreducible polynomial of degree `k`.
    pub fn new(field: BinExtField, h: Vec<u64>) -> Result<Self, ParamError> {
        let k = h.len();
        if k == 0 || k > 62 {
            return Err(ParamError::Shape);
        }
        Ok(Self::with_poly(field, smallest_irreducible(k as u32), h))
    }

    pub fn with_poly(field: BinExtField, poly: u64, h: Vec<u64>) -> Self {
        let k = h.len();
        assert_eq!(63 - poly.leading_zeros() as usize, k);
        let mut powers = Vec::with_capacity(2 * k);
        let mut cur = 1u64;
        for _ in 0..2 * k {
            powers.push(cur);
            cur <<= 1;
            if cur >> k & 1 == 1 {
                cur ^= poly;
            }
        }
        Self { field, k, poly, h, powers }
    }

    pub fn from_prg(prg: &mut Prg, field: BinExtField, k: usize) -> Result<Self, ParamError> {
        let h = sample::ext_vector(prg, field.degree(), k);
        Self::new(field, h)
    }

    pub fn field(&self) -> &BinExtField {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        2 * self.k
    }

    pub fn modulus(&self) -> u64 {
        self.poly
    }

    pub fn generator(&self) -> &[u64] {
        &self.h
    }

    /// `X * v mod P` for a coefficient vector over `GF(2^m)`.
    fn times_x(&self, v: &[u64]) -> Vec<u64> {
        let k = self.k;
        let top = v[k - 1];
        let mut out = vec![0u64; k];
        out[1..k].copy_from_slice(&v[..k - 1]);
        for (c, o) in out.iter_mut().enumerate() {
            if self.poly >> c & 1 == 1 {
                *o ^= top;
            }
        }
        out
    }

    /// Rows of `IM_P(h)`.
    pub fn ideal_rows(&self) -> Vec<Vec<u64>> {
        let mut rows = Vec::with_capacity(self.k);
        let mut cur = self.h.clone();
        for _ in 0..self.k {
            let next = self.times_x(&cur);
            rows.push(cur);
            cur = next;
        }
        rows
    }

    pub fn expand(&self) -> Matrix<BinExtField> {
        let k = self.k;
        let mut m = Matrix::zeros(self.field, k, 2 * k);
        for (i, row) in self.ideal_rows().into_iter().enumerate() {
            m.set(i, i, 1);
            for (c, v) in row.into_iter().enumerate() {
                m.set(i, k + c, v);
            }
        }
        m
    }

    /// `IM_P(X^r) v^T` for a length-`k` vector.
    fn rot_half(&self, v: &[u64], r: usize) -> Vec<u64> {
        (0..self.k)
            .map(|row| {
                let mut mask = self.powers[r + row];
                let mut acc = 0u64;
                while mask != 0 {
                    let c = mask.trailing_zeros() as usize;
                    acc ^= v[c];
                    mask &= mask - 1;
                }
                acc
            })
            .collect()
    }

    /// Rotation of a length-`k` or length-`2k` vector, each half independently.
    pub fn rot(&self, v: &[u64], r: usize) -> Vec<u64> {
        let k = self.k;
        assert!(r < k, "rotation out of range");
        match v.len() {
            l if l == k => self.rot_half(v, r),
            l if l == 2 * k => {
                let mut out = self.rot_half(&v[..k], r);
                out.extend(self.rot_half(&v[k..], r));
                out
            }
            _ => panic!("rot: length must be k or 2k"),
        }
    }

    pub fn rotation_identity_check(&self, x: &[u64], y: &[u64], r: usize) -> bool {
        self.syndrome(&x.to_vec()) == y && self.syndrome(&self.rot(x, r)) == self.rot(y, r)
    }
}

impl ParityCheck<Vec<u64>> for IdealPcm {
    type Syndrome = Vec<u64>;
    fn syndrome(&self, x: &Vec<u64>) -> Vec<u64> {
        let k = self.k;
        assert_eq!(x.len(), 2 * k, "syndrome shape");
        let f = &self.field;
        let mut y = x[..k].to_vec();
        for (i, row) in self.ideal_rows().iter().enumerate() {
            for (c, &hc) in row.iter().enumerate() {
                y[i] ^= f.mul(hc, x[k + c]);
            }
        }
        y
    }
    fn preimage(&self, y: &Vec<u64>) -> Result<Vec<u64>, LinAlgError> {
        if y.len() != self.k {
            return Err(LinAlgError::Shape);
        }
        let mut x = y.clone();
        x.resize(2 * self.k, 0);
        Ok(x)
    }
    fn syndrome_add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }
    fn syndrome_bytes(&self, s: &Vec<u64>) -> Vec<u8> {
        ext_bytes(self.field.degree(), s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prg(l: &[u8]) -> Prg {
        Prg::new(&[0; 32], b"codes", l)
    }

    #[test]
    fn rot_follows_index_formula() {
        let a = BitVec::from_bits(&[1, 0, 0]);
        assert_eq!(rot(&a, 3, 1), BitVec::from_bits(&[0, 1, 0]));
        let a = BitVec::from_bits(&[1, 1, 0]);
        assert_eq!(rot(&a, 3, 1), BitVec::from_bits(&[0, 1, 1]));
        assert_eq!(rot(&a, 3, 0), a);
    }

    #[test]
    fn rot_composes_additively_on_halves() {
        let mut p = prg(b"r");
        let k = 11;
        let v = sample::bitvec(&mut p, 2 * k);
        for a in 0..k {
            for b in 0..k {
                assert_eq!(rot(&rot(&v, k, a), k, b), rot(&v, k, (a + b) % k));
            }
        }
    }

    #[test]
    fn qc_identity_block_cancels_equal_halves() {
        let mut b = BitVec::zeros(11);
        b.set(0, true);
        let h = QuasiCyclicPcm::new(b).unwrap();
        assert_eq!(h.expand().rank(), 11);
        let mut p = prg(b"u");
        let u = sample::bitvec(&mut p, 11);
        assert!(h.syndrome(&u.concat(&u)).is_zero());
        assert!(h.syndrome(&BitVec::zeros(22)).is_zero());
    }

    #[test]
    fn qc_syndrome_matches_expansion() {
        let mut p = prg(b"qc");
        let h = QuasiCyclicPcm::from_prg(&mut p, 653, true).unwrap();
        let dense = h.expand();
        for _ in 0..10 {
            let x = sample::bitvec(&mut p, 1306);
            assert_eq!(h.syndrome(&x), dense.matvec(&x).unwrap());
        }
    }

    #[test]
    fn primitive_primes() {
        assert!(is_primitive_prime(653));
        assert!(is_primitive_prime(11));
        assert!(is_primitive_prime(5));
        assert!(!is_primitive_prime(7));
        assert!(!is_primitive_prime(17));
        assert!(!is_primitive_prime(15));
        assert_eq!(
            QuasiCyclicPcm::new(BitVec::zeros(7)).unwrap_err(),
            ParamError::NotPrimitivePrime
        );
    }

    #[test]
    fn ideal_rows_follow_recurrence() {
        let f = BinExtField::new(6).unwrap();
        let h = IdealPcm::new(f, alloc::vec![1, 0, 0]).unwrap();
        assert_eq!(h.modulus(), 0b1011);
        // h = 1: rows are X^i mod P as F2 coefficient vectors
        let rows = h.ideal_rows();
        assert_eq!(rows[0], alloc::vec![1, 0, 0]);
        assert_eq!(rows[1], alloc::vec![0, 1, 0]);
        assert_eq!(rows[2], alloc::vec![0, 0, 1]);
        let h17 = IdealPcm::new(BinExtField::new(37).unwrap(), alloc::vec![0; 17]).unwrap();
        assert_eq!(h17.modulus(), (1 << 17) | (1 << 3) | 1);
    }

    #[test]
    fn ideal_syndrome_matches_expansion() {
        let mut p = prg(b"id");
        let f = BinExtField::new(37).unwrap();
        let h = IdealPcm::from_prg(&mut p, f, 17).unwrap();
        let dense = h.expand();
        for _ in 0..10 {
            let x = sample::ext_vector(&mut p, 37, 34);
            assert_eq!(h.syndrome(&x), dense.matvec(&x).unwrap());
        }
    }

    #[test]
    fn ideal_rotation_identity() {
        let mut p = prg(b"idrot");
        let f = BinExtField::new(37).unwrap();
        let h = IdealPcm::from_prg(&mut p, f, 17).unwrap();
        let x = sample::ext_vector(&mut p, 37, 34);
        let y = h.syndrome(&x);
        for r in 0..17 {
            assert!(h.rotation_identity_check(&x, &y, r));
        }
        let mut bad = y.clone();
        bad[0] ^= 1;
        assert!(!h.rotation_identity_check(&x, &bad, 1));
    }

    #[test]
    fn preimages_are_exact() {
        let mut p = prg(b"pre");
        let h = random_binary(&mut p, 10, 5);
        let y = sample::bitvec(&mut p, 5);
        if let Ok(x) = h.preimage(&y) {
            assert_eq!(h.syndrome(&x), y);
        }
        let qc = QuasiCyclicPcm::from_prg(&mut p, 11, true).unwrap();
        let y = sample::bitvec(&mut p, 11);
        assert_eq!(qc.syndrome(&qc.preimage(&y).unwrap()), y);
    }
}
