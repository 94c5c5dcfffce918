use crate::algebra::BitVec;
use alloc::vec::Vec;
use num_bigint::BigUint;

/// Least-significant-bit-first bit writer.
#[derive(Clone, Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bits: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bit_len(&self) -> usize {
        self.bits
    }

    pub fn write_bit(&mut self, b: bool) {
        if self.bits % 8 == 0 {
            self.bytes.push(0);
        }
        if b {
            *self.bytes.last_mut().unwrap() |= 1 << (self.bits % 8);
        }
        self.bits += 1;
    }

    /// Low `n` bits of `v`, `n <= 64`.
    pub fn write_bits(&mut self, v: u64, n: usize) {
        debug_assert!(n == 64 || v >> n == 0);
        for i in 0..n {
            self.write_bit(v >> i & 1 == 1);
        }
    }

    pub fn write_bytes(&mut self, b: &[u8]) {
        if self.bits % 8 == 0 {
            self.bytes.extend_from_slice(b);
            self.bits += 8 * b.len();
        } else {
            for &x in b {
                self.write_bits(x as u64, 8);
            }
        }
    }

    pub fn write_bitvec(&mut self, v: &BitVec) {
        let n = v.len();
        for (wi, &w) in v.words().iter().enumerate() {
            let take = (n - wi * 64).min(64);
            self.write_bits(w, take);
        }
    }

    /// `v` in exactly `n` bits.
    pub fn write_biguint(&mut self, v: &BigUint, n: usize) {
        debug_assert!(v.bits() as usize <= n);
        let digits = v.to_u64_digits();
        for i in 0..n.div_ceil(64) {
            let d = digits.get(i).copied().unwrap_or(0);
            self.write_bits(d, (n - 64 * i).min(64));
        }
    }

    /// Zero-padded to a byte boundary.
    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

/// Reader matching [`BitWriter`]; every method returns `None` past the end.
#[derive(Clone, Debug)]
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let byte = *self.data.get(self.pos / 8)?;
        let b = byte >> (self.pos % 8) & 1 == 1;
        self.pos += 1;
        Some(b)
    }

    pub fn read_bits(&mut self, n: usize) -> Option<u64> {
        if self.pos + n > 8 * self.data.len() {
            return None;
        }
        let mut v = 0u64;
        for i in 0..n {
            if self.read_bit()? {
                v |= 1 << i;
            }
        }
        Some(v)
    }

    pub fn read_bytes(&mut self, k: usize) -> Option<Vec<u8>> {
        if self.pos % 8 == 0 {
            let start = self.pos / 8;
            let s = self.data.get(start..start + k)?;
            self.pos += 8 * k;
            return Some(s.to_vec());
        }
        (0..k).map(|_| self.read_bits(8).map(|b| b as u8)).collect()
    }

    pub fn read_array<const K: usize>(&mut self) -> Option<[u8; K]> {
        let v = self.read_bytes(K)?;
        v.try_into().ok()
    }

    pub fn read_bitvec(&mut self, n: usize) -> Option<BitVec> {
        let mut words = Vec::with_capacity(n.div_ceil(64));
        for wi in 0..n.div_ceil(64) {
            words.push(self.read_bits((n - wi * 64).min(64))?);
        }
        Some(BitVec::from_words(n, words))
    }

    pub fn read_biguint(&mut self, n: usize) -> Option<BigUint> {
        let mut digits = Vec::with_capacity(n.div_ceil(64));
        for i in 0..n.div_ceil(64) {
            digits.push(self.read_bits((n - 64 * i).min(64))?);
        }
        let bytes: Vec<u8> = digits.iter().flat_map(|d| d.to_le_bytes()).collect();
        Some(BigUint::from_bytes_le(&bytes))
    }

    /// Succeeds only if the remaining bits are zero padding within the last byte.
    pub fn finish(self) -> Option<()> {
        if self.data.len() != self.pos.div_ceil(8) {
            return None;
        }
        if self.pos % 8 != 0 {
            let last = self.data[self.pos / 8];
            if last >> (self.pos % 8) != 0 {
                return None;
            }
        }
        Some(())
    }
}
