use alloc::vec;
use alloc::vec::Vec;

/// Bit-packed vector over F2, 64 coordinates per word, unused tail bits zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl core::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("BitVec(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self { len, words: vec![!0; words_for(len)] };
        v.clear_tail();
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Takes ownership of raw words, masking any bits past `len`.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / 64];
        let m = 1u64 << (i % 64);
        if b {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the coordinate-wise product.
    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Coordinates `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len);
        let mut out = BitVec::zeros(len);
        for (wi, w) in out.words.iter_mut().enumerate() {
            *w = self.word_at(start + wi * 64);
        }
        out.clear_tail();
        out
    }

    /// 64 bits starting at bit `pos`, zero-filled past the end.
    fn word_at(&self, pos: usize) -> u64 {
        let wi = pos / 64;
        let sh = pos % 64;
        let lo = self.words.get(wi).copied().unwrap_or(0);
        if sh == 0 {
            lo
        } else {
            let hi = self.words.get(wi + 1).copied().unwrap_or(0);
            (lo >> sh) | (hi << (64 - sh))
        }
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// 64 bits starting at a possibly negative bit position, zero outside.
    fn word_at_signed(&self, pos: isize) -> u64 {
        if pos >= 0 {
            self.word_at(pos as usize)
        } else if pos > -64 {
            self.word_at(0) << (-pos) as u32
        } else {
            0
        }
    }

    /// Cyclic right shift: coordinate `i` moves to `(i + r) mod len`.
    pub fn rotate_right(&self, r: usize) -> BitVec {
        let n = self.len;
        if n == 0 || r % n == 0 {
            return self.clone();
        }
        let r = r % n;
        let mut out = BitVec::zeros(n);
        for (wi, w) in out.words.iter_mut().enumerate() {
            let j = (wi * 64) as isize;
            // low part: self[j - r], high part: self[j + n - r]
            *w = self.word_at_signed(j - r as isize) | self.word_at(wi * 64 + n - r);
        }
        out.clear_tail();
        out
    }

    /// Little-endian byte serialisation, `ceil(len/8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nb = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nb);
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nb);
        out
    }

    pub fn from_bytes(len: usize, bytes: &[u8]) -> Option<BitVec> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut words = vec![0u64; words_for(len)];
        for (i, &b) in bytes.iter().enumerate() {
            words[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        let v = BitVec { len, words };
        let mut check = v.clone();
        check.clear_tail();
        (check == v).then_some(v)
    }
}

/// Dense F2 matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

/// Errors from linear algebra routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinAlgError {
    Shape,
    NoSolution,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Self { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.data[r].set(c, b)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].iter_ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    pub fn matvec(&self, x: &BitVec) -> Result<BitVec, LinAlgError> {
        if x.len() != self.cols {
            return Err(LinAlgError::Shape);
        }
        let mut y = BitVec::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                y.set(i, true);
            }
        }
        Ok(y)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::Shape);
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for k in row.iter_ones() {
                out.data[i].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if let Some(p) = (rank..m.len()).find(|&r| m[r].get(c)) {
                m.swap(rank, p);
                let pivot = m[rank].clone();
                for r in rank + 1..m.len() {
                    if m[r].get(c) {
                        m[r].xor_assign(&pivot);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    /// Some `x` with `self * x = y`; free variables are set to zero and
    /// pivots are the first non-zero entry at or below the current row.
    pub fn solve_preimage(&self, y: &BitVec) -> Result<BitVec, LinAlgError> {
        if y.len() != self.rows {
            return Err(LinAlgError::Shape);
        }
        let mut m = self.data.clone();
        let mut rhs: Vec<bool> = (0..self.rows).map(|i| y.get(i)).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == m.len() {
                break;
            }
            if let Some(p) = (rank..m.len()).find(|&r| m[r].get(c)) {
                m.swap(rank, p);
                rhs.swap(rank, p);
                let pivot = m[rank].clone();
                let pb = rhs[rank];
                for r in 0..m.len() {
                    if r != rank && m[r].get(c) {
                        m[r].xor_assign(&pivot);
                        rhs[r] ^= pb;
                    }
                }
                pivots.push(c);
                rank += 1;
            }
        }
        if rhs[rank..].iter().any(|&b| b) {
            return Err(LinAlgError::NoSolution);
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &c) in pivots.iter().enumerate() {
            x.set(c, rhs[i]);
        }
        Ok(x)
    }
}

/// Square F2 matrix of size at most 64, one `u64` per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallMat {
    n: usize,
    rows: Vec<u64>,
}

impl SmallMat {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64);
        Self { n, rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    pub fn from_rows(n: usize, rows: Vec<u64>) -> Self {
        assert!(n <= 64 && rows.len() == n);
        let mask = if n == 64 { !0 } else { (1u64 << n) - 1 };
        assert!(rows.iter().all(|&r| r & !mask == 0));
        Self { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Matrix times column vector given as a bit mask.
    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        let mut y = 0u64;
        for (i, &r) in self.rows.iter().enumerate() {
            y |= (((r & x).count_ones() & 1) as u64) << i;
        }
        y
    }

    pub fn mul(&self, other: &SmallMat) -> SmallMat {
        assert_eq!(self.n, other.n);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut r = r;
                while r != 0 {
                    let k = r.trailing_zeros() as usize;
                    acc ^= other.rows[k];
                    r &= r - 1;
                }
                acc
            })
            .collect();
        SmallMat { n: self.n, rows }
    }

    pub fn rank(&self) -> usize {
        rank_of_words(&self.rows)
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self) -> Option<SmallMat> {
        let n = self.n;
        // low half: the matrix, high half: the inverse being built
        let mut a: Vec<u128> = self.rows.iter().enumerate().map(|(i, &r)| r as u128 | 1u128 << (64 + i)).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| a[r] >> c & 1 == 1)?;
            a.swap(c, p);
            let pivot = a[c];
            for x in a.iter_mut() {
                *x ^= pivot & (*x >> c & 1).wrapping_neg();
            }
            a[c] = pivot;
        }
        Some(SmallMat { n, rows: a.into_iter().map(|x| (x >> 64) as u64).collect() })
    }
}

/// Rank over F2 of a set of vectors given as `u64` bit masks.
pub fn rank_of_words(v: &[u64]) -> usize {
    echelon_basis(v).len()
}

/// Reduced row echelon basis of the F2-span of `v`: each element has a
/// distinct leading bit that is clear in every other element; sorted by
/// decreasing leading bit.
pub fn echelon_basis(v: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &x in v {
        let mut x = x;
        for &b in &basis {
            let lead = 63 - b.leading_zeros();
            if x >> lead & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 {
            let lead = 63 - x.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> lead & 1 == 1 {
                    *b ^= x;
                }
            }
            basis.push(x);
        }
    }
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_rot(v: &BitVec, r: usize) -> BitVec {
        let n = v.len();
        let mut out = BitVec::zeros(n);
        for i in 0..n {
            out.set((i + r) % n, v.get(i));
        }
        out
    }

    fn lcg(state: &mut u64) -> u64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *state >> 11
    }

    fn random_bitvec(n: usize, s: &mut u64) -> BitVec {
        BitVec::from_bits(&(0..n).map(|_| (lcg(s) & 1) as u8).collect::<Vec<_>>())
    }

    #[test]
    fn rotation_matches_naive_for_many_lengths() {
        let mut s = 7;
        for n in [1usize, 3, 5, 63, 64, 65, 127, 128, 129, 200, 653] {
            let v = random_bitvec(n, &mut s);
            for r in [0, 1, 2, 31, 63, 64, 65, 100, n / 2, n.saturating_sub(1)] {
                let r = r % n;
                assert_eq!(v.rotate_right(r), naive_rot(&v, r), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn rotation_by_one_on_three() {
        let a = BitVec::from_bits(&[1, 0, 0]);
        assert_eq!(a.rotate_right(1), BitVec::from_bits(&[0, 1, 0]));
    }

    #[test]
    fn slicing_and_concat_roundtrip() {
        let mut s = 3;
        let v = random_bitvec(300, &mut s);
        let a = v.slice(0, 131);
        let b = v.slice(131, 169);
        assert_eq!(a.concat(&b), v);
    }

    #[test]
    fn bytes_roundtrip_and_tail_check() {
        let mut s = 9;
        let v = random_bitvec(21, &mut s);
        let b = v.to_bytes();
        assert_eq!(b.len(), 3);
        assert_eq!(BitVec::from_bytes(21, &b).unwrap(), v);
        let mut bad = b.clone();
        bad[2] |= 0x80;
        assert!(BitVec::from_bytes(21, &bad).is_none());
    }

    #[test]
    fn identity_matvec_and_rank() {
        let i3 = BitMatrix::identity(3);
        let x = BitVec::from_bits(&[1, 0, 1]);
        assert_eq!(i3.matvec(&x).unwrap(), x);
        assert_eq!(i3.rank(), 3);
        assert_eq!(BitMatrix::zeros(4, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(2, 3).matvec(&x).unwrap(), BitVec::zeros(2));
    }

    #[test]
    fn rank_with_dependent_row() {
        let r1 = BitVec::from_bits(&[1, 0, 1, 1]);
        let r2 = BitVec::from_bits(&[0, 1, 1, 0]);
        let r3 = r1.xor(&r2);
        let m = BitMatrix::from_rows(4, alloc::vec![r1, r2, r3]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn small_inverse() {
        let m = SmallMat::from_rows(3, alloc::vec![0b011, 0b110, 0b001]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SmallMat::identity(3));
        let sing = SmallMat::from_rows(2, alloc::vec![0b11, 0b11]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn echelon_is_reduced() {
        let b = echelon_basis(&[0b1100, 0b1010, 0b0110, 0b0001]);
        assert_eq!(b.len(), 3);
        for (i, &x) in b.iter().enumerate() {
            let lead = 63 - x.leading_zeros();
            for (j, &y) in b.iter().enumerate() {
                if i != j {
                    assert_eq!(y >> lead & 1, 0);
                }
            }
        }
    }
}
