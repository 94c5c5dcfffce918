use super::hash::Prg;
use super::isometry::Isometry;
use super::perm::Permutation;
use crate::algebra::{echelon_basis, rank_weight, BitVec, Field, PrimeField, SmallMat};
use alloc::vec::Vec;

/// Uniform permutation of `[0, n)` by Fisher-Yates.
pub fn permutation(prg: &mut Prg, n: usize) -> Permutation {
    let mut img: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = prg.below(i as u64 + 1) as usize;
        img.swap(i, j);
    }
    Permutation::from_images(img).unwrap()
}

/// Uniform vector of `F2^n`.
pub fn bitvec(prg: &mut Prg, n: usize) -> BitVec {
    let words = (0..n.div_ceil(64)).map(|_| prg.u64()).collect();
    BitVec::from_words(n, words)
}

/// Uniform vector of weight exactly `w`.
pub fn fixed_weight(prg: &mut Prg, n: usize, w: usize) -> BitVec {
    assert!(w <= n);
    let mut base = BitVec::zeros(n);
    for i in 0..w {
        base.set(i, true);
    }
    permutation(prg, n).apply_bits(&base)
}

/// Uniform vector of `F_q^n`.
pub fn fq_vector(prg: &mut Prg, f: &PrimeField, n: usize) -> Vec<u16> {
    (0..n).map(|_| prg.below(f.order()) as u16).collect()
}

/// Uniform non-zero element of `F_q`.
pub fn fq_nonzero(prg: &mut Prg, f: &PrimeField) -> u16 {
    1 + prg.below(f.order() - 1) as u16
}

/// Uniform vector of `GF(2^m)^n`.
pub fn ext_vector(prg: &mut Prg, m: u32, n: usize) -> Vec<u64> {
    (0..n).map(|_| prg.bits(m)).collect()
}

/// Uniform invertible `s x s` binary matrix by rejection.
pub fn invertible(prg: &mut Prg, s: usize) -> SmallMat {
    invertible_with_inverse(prg, s).0
}

/// Rows drawn one at a time, each redrawn while it lies in the span of the
/// previous ones; this is uniform over `GL_s`.
fn invertible_with_inverse(prg: &mut Prg, s: usize) -> (SmallMat, SmallMat) {
    let mut rows = Vec::with_capacity(s);
    let mut pivots = [0u64; 64];
    while rows.len() < s {
        let r = prg.bits(s as u32);
        let mut x = r;
        while x != 0 && pivots[63 - x.leading_zeros() as usize] != 0 {
            x ^= pivots[63 - x.leading_zeros() as usize];
        }
        if x != 0 {
            pivots[63 - x.leading_zeros() as usize] = x;
            rows.push(r);
        }
    }
    let m = SmallMat::from_rows(s, rows);
    let inv = m.inverse().expect("rows are independent");
    (m, inv)
}

/// Uniform isometry of `GF(2^m)^n`.
pub fn isometry(prg: &mut Prg, m: usize, n: usize) -> Isometry {
    let (p, p_inv) = invertible_with_inverse(prg, m);
    let (q, q_inv) = invertible_with_inverse(prg, n);
    Isometry::from_parts(p, q, p_inv, q_inv)
}

/// Uniform `w`-dimensional subspace of `GF(2^m)`, returned as a reduced echelon basis.
pub fn subspace(prg: &mut Prg, m: u32, w: usize) -> Vec<u64> {
    assert!(w <= m as usize);
    loop {
        let v: Vec<u64> = (0..w).map(|_| prg.bits(m)).collect();
        let b = echelon_basis(&v);
        if b.len() == w {
            return b;
        }
    }
}

/// A vector of `GF(2^m)^n` whose support is exactly the span of `basis`.
pub fn vector_with_support(prg: &mut Prg, basis: &[u64], n: usize) -> Vec<u64> {
    let w = basis.len();
    assert!(w <= n);
    loop {
        let x: Vec<u64> = (0..n)
            .map(|_| {
                let c = prg.bits(w as u32);
                basis.iter().enumerate().filter(|(l, _)| c >> l & 1 == 1).fold(0, |a, (_, &b)| a ^ b)
            })
            .collect();
        if rank_weight(&x) == w {
            return x;
        }
    }
}

/// A random support `E` of dimension `w` and `count` vectors with support exactly `E`.
pub fn support_vectors(prg: &mut Prg, m: u32, n: usize, w: usize, count: usize) -> (Vec<u64>, Vec<Vec<u64>>) {
    assert!(w <= (m as usize).min(n));
    let e = subspace(prg, m, w);
    let xs = (0..count).map(|_| vector_with_support(prg, &e, n)).collect();
    (e, xs)
}

/// Uniform vector of rank weight exactly `w`.
pub fn rank_weight_vector(prg: &mut Prg, m: u32, n: usize, w: usize) -> Vec<u64> {
    let e = subspace(prg, m, w);
    vector_with_support(prg, &e, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::in_span;

    fn prg(label: &[u8]) -> Prg {
        Prg::new(&[0u8; 32], b"sample-tests", label)
    }

    #[test]
    fn trivial_cases() {
        let mut p = prg(b"t");
        assert_eq!(permutation(&mut p, 1), Permutation::identity(1));
        assert_eq!(fixed_weight(&mut p, 7, 0), BitVec::zeros(7));
        assert_eq!(fixed_weight(&mut p, 7, 7), BitVec::ones(7));
        assert_eq!(invertible(&mut p, 1), SmallMat::identity(1));
    }

    #[test]
    fn fixed_weight_is_exact() {
        let mut p = prg(b"w");
        for _ in 0..1000 {
            assert_eq!(fixed_weight(&mut p, 10, 3).weight(), 3);
        }
    }

    #[test]
    fn invertible_has_full_rank() {
        let mut p = prg(b"inv");
        for s in [2usize, 5, 31, 37, 64] {
            for _ in 0..20 {
                assert_eq!(invertible(&mut p, s).rank(), s);
            }
        }
    }

    #[test]
    fn support_vectors_have_exact_support() {
        let mut p = prg(b"sup");
        let (e, xs) = support_vectors(&mut p, 37, 34, 10, 5);
        assert_eq!(e.len(), 10);
        for x in &xs {
            assert_eq!(rank_weight(x), 10);
            assert!(x.iter().all(|&c| in_span(&e, c)));
            assert_eq!(echelon_basis(x), e);
        }
        let (e1, xs1) = support_vectors(&mut p, 8, 6, 1, 3);
        for x in &xs1 {
            assert!(x.iter().all(|&c| c == 0 || c == e1[0]));
        }
    }

    #[test]
    fn first_image_is_uniform() {
        // chi-square on pi(0) for n = 5 over 10^4 seeds, 4 degrees of freedom
        let mut counts = [0u32; 5];
        for s in 0..10_000u32 {
            let mut p = Prg::new(&[0u8; 32], &s.to_le_bytes(), b"chi");
            counts[permutation(&mut p, 5).images()[0] as usize] += 1;
        }
        let expect = 2000.0;
        let chi: f64 = counts.iter().map(|&c| (c as f64 - expect) * (c as f64 - expect) / expect).sum();
        // 99.9% quantile of chi-square(4) is 18.47
        assert!(chi < 18.47, "chi^2 = {chi}");
    }
}
