use crate::algebra::BitVec;
use alloc::vec::Vec;

/// Permutation of `[0, n)` acting on vectors by `pi[x]_j = x_{img[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    img: Vec<u32>,
    inv: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let img: Vec<u32> = (0..n as u32).collect();
        Self { inv: img.clone(), img }
    }

    /// Returns `None` unless `img` is a bijection of `[0, n)`.
    pub fn from_images(img: Vec<u32>) -> Option<Self> {
        let n = img.len();
        let mut inv = alloc::vec![u32::MAX; n];
        for (j, &i) in img.iter().enumerate() {
            let slot = inv.get_mut(i as usize)?;
            if *slot != u32::MAX {
                return None;
            }
            *slot = j as u32;
        }
        Some(Self { img, inv })
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    pub fn inverse(&self) -> Self {
        Self { img: self.inv.clone(), inv: self.img.clone() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        let img = self.img.iter().map(|&j| other.img[j as usize]).collect();
        Self::from_images(img).unwrap()
    }

    pub fn apply_bits(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.len());
        let mut out = BitVec::zeros(x.len());
        for i in x.iter_ones() {
            out.set(self.inv[i] as usize, true);
        }
        out
    }

    pub fn apply_inv_bits(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.len());
        let mut out = BitVec::zeros(x.len());
        for j in x.iter_ones() {
            out.set(self.img[j] as usize, true);
        }
        out
    }

    pub fn apply<T: Copy>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.len());
        self.img.iter().map(|&i| x[i as usize]).collect()
    }

    pub fn apply_inv<T: Copy>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.len());
        self.inv.iter().map(|&j| x[j as usize]).collect()
    }

    /// Canonical bytes: images as little-endian `u16`.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.img.iter().flat_map(|&i| (i as u16).to_le_bytes()).collect()
    }
}
