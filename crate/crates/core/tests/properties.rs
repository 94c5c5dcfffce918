use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use pokstruct_core::algebra::{rank_weight, BinExtField, BitVec, Field, PrimeField};
use pokstruct_core::analysis::{p1, p1_partition_sum};
use pokstruct_core::chain::{Hamming, Metric, Rank};
use pokstruct_core::codes::{IdealPcm, ParityCheck, QuasiCyclicPcm};
use pokstruct_core::primitives::combinatorics::{binomial, rank_subset, unrank_subset};
use pokstruct_core::primitives::tree::{recover, recover_one};
use pokstruct_core::primitives::{sample, BitReader, BitWriter, Isometry, Permutation, Prg, SeedTree};
use proptest::prelude::*;

fn prg(seed: u64) -> Prg {
    Prg::new(&[0; 32], &seed.to_le_bytes(), b"prop")
}

fn perm(seed: u64, n: usize) -> Permutation {
    sample::permutation(&mut prg(seed), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_applies_right_operand_first(n in 1usize..40, a in any::<u64>(), b in any::<u64>()) {
        let (p, q) = (perm(a, n), perm(b ^ 1, n));
        let x: Vec<u32> = (0..n as u32).map(|i| i * 7 + 1).collect();
        prop_assert_eq!(p.compose(&q).apply(&x), p.apply(&q.apply(&x)));
        prop_assert_eq!(p.compose(&p.inverse()), Permutation::identity(n));
        prop_assert_eq!(p.apply_inv(&p.apply(&x)), x);
    }

    #[test]
    fn permutation_bits_match_slices(n in 1usize..100, a in any::<u64>()) {
        let p = perm(a, n);
        let x = sample::bitvec(&mut prg(a ^ 9), n);
        let as_u8: Vec<u8> = (0..n).map(|i| x.get(i) as u8).collect();
        let expected = BitVec::from_bits(&p.apply(&as_u8));
        prop_assert_eq!(p.apply_bits(&x), expected);
        prop_assert_eq!(p.apply_inv_bits(&p.apply_bits(&x)), x);
    }

    #[test]
    fn bit_io_round_trips(fields in prop::collection::vec((any::<u64>(), 0usize..=64), 0..40)) {
        let mut w = BitWriter::new();
        for &(v, n) in &fields {
            let v = if n == 64 { v } else { v & ((1u64 << n) - 1) };
            w.write_bits(v, n);
        }
        let total = w.bit_len();
        let bytes = w.finish();
        prop_assert_eq!(bytes.len(), total.div_ceil(8));
        let mut r = BitReader::new(&bytes);
        for &(v, n) in &fields {
            let v = if n == 64 { v } else { v & ((1u64 << n) - 1) };
            prop_assert_eq!(r.read_bits(n), Some(v));
        }
        prop_assert!(r.finish().is_some());
    }

    #[test]
    fn bitvec_bytes_round_trip(len in 0usize..300, s in any::<u64>()) {
        let v = sample::bitvec(&mut prg(s), len);
        prop_assert_eq!(BitVec::from_bytes(len, &v.to_bytes()), Some(v));
    }

    #[test]
    fn subset_rank_is_a_bijection(n in 1usize..60, s in any::<u64>()) {
        let k = (s as usize) % (n + 1);
        let pos: Vec<usize> = sample::fixed_weight(&mut prg(s), n, k).iter_ones().collect();
        let r = rank_subset(&pos);
        prop_assert!(r < binomial(n as u64, k as u64));
        prop_assert_eq!(unrank_subset(&r, n, k), Some(pos));
        prop_assert_eq!(unrank_subset(&binomial(n as u64, k as u64), n, k), None);
    }

    #[test]
    fn seed_tree_opening_hides_exactly_the_flagged_leaves(count in 1usize..70, s in any::<u64>()) {
        let mut g = prg(s);
        let root = g.seed();
        let tree = SeedTree::build(&[3; 32], 5, &root, count);
        let hidden: Vec<bool> = (0..count).map(|_| g.below(3) == 0).collect();
        let got = recover(&[3; 32], 5, count, &hidden, &tree.open(&hidden)).unwrap();
        for j in 0..count {
            prop_assert_eq!(got[j], if hidden[j] { None } else { Some(*tree.leaf(j)) });
        }
        let alpha = g.below(count as u64) as usize;
        let one = recover_one(&[3; 32], 5, count, alpha, &tree.open_one(alpha)).unwrap();
        prop_assert!(one[alpha].is_none());
        prop_assert_eq!(one.iter().flatten().count(), count - 1);
    }

    #[test]
    fn extension_field_inverses(m in 1u32..40, s in any::<u64>()) {
        let f = BinExtField::new(m).unwrap();
        let mut g = prg(s);
        let a = g.bits(m);
        let b = g.bits(m);
        let c = g.bits(m);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn prime_field_inverses(a in 1u16..997) {
        let f = PrimeField::new(997).unwrap();
        prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
    }

    #[test]
    fn isometries_preserve_rank(m in 1usize..40, n in 1usize..40, s in any::<u64>()) {
        let mut g = prg(s);
        let w = 1 + (s as usize) % m.min(n);
        let iso = sample::isometry(&mut g, m, n);
        let x = sample::rank_weight_vector(&mut g, m as u32, n, w);
        let y = iso.apply(&x);
        prop_assert_eq!(rank_weight(&y), w);
        prop_assert_eq!(iso.apply_inv(&y), x.clone());
        let other = sample::isometry(&mut g, m, n);
        let composed: Isometry = iso.compose(&other);
        prop_assert_eq!(composed.apply(&x), iso.apply(&other.apply(&x)));
    }

    #[test]
    fn quasi_cyclic_rotation_identity(s in any::<u64>(), idx in 0usize..4) {
        let k = [11, 13, 19, 29][idx];
        let mut g = prg(s);
        let h = QuasiCyclicPcm::from_prg(&mut g, k, true).unwrap();
        let x = sample::bitvec(&mut g, 2 * k);
        let y = h.syndrome(&x);
        prop_assert_eq!(h.expand().matvec(&x).unwrap(), y.clone());
        for r in 0..k {
            prop_assert!(h.rotation_identity_check(&x, &y, r));
        }
    }

    #[test]
    fn ideal_rotation_identity(s in any::<u64>(), m in 3u32..20, k in 2usize..20) {
        let mut g = prg(s);
        let h = IdealPcm::from_prg(&mut g, BinExtField::new(m).unwrap(), k).unwrap();
        let x = sample::ext_vector(&mut g, m, 2 * k);
        let y = h.syndrome(&x);
        prop_assert_eq!(h.expand().matvec(&x).unwrap(), y.clone());
        for r in 0..k {
            prop_assert!(h.rotation_identity_check(&x, &y, r));
        }
    }

    #[test]
    fn p1_is_a_tail_probability(tau in 0usize..30, c1 in 2u64..2000) {
        let c1 = BigUint::from(c1);
        prop_assert_eq!(p1(0, tau, &c1), BigRational::one());
        prop_assert_eq!(p1_partition_sum(tau, &c1), BigRational::one());
        for r in 1..=tau {
            prop_assert!(p1(r, tau, &c1) <= p1(r - 1, tau, &c1));
        }
    }

    #[test]
    fn hamming_short_encoding_round_trips(n in 1usize..200, s in any::<u64>()) {
        let omega = (s as usize) % (n + 1);
        let metric = Hamming { n, omega };
        let x = metric.sample_weighted(&mut prg(s));
        let mut w = BitWriter::new();
        prop_assert!(metric.write_short(&mut w, &x));
        prop_assert_eq!(w.bit_len(), metric.short_bits());
        let bytes = w.finish();
        prop_assert_eq!(metric.read_short(&mut BitReader::new(&bytes)), Some(x));
    }

    #[test]
    fn rank_short_encoding_round_trips(m in 2u32..40, n in 2usize..40, s in any::<u64>()) {
        let omega = 1 + (s as usize) % (m as usize).min(n);
        let metric = Rank { m, n, omega };
        let x = metric.sample_weighted(&mut prg(s));
        prop_assert_eq!(metric.weight(&x), omega);
        let mut w = BitWriter::new();
        prop_assert!(metric.write_short(&mut w, &x));
        prop_assert_eq!(w.bit_len(), metric.short_bits());
        let bytes = w.finish();
        prop_assert_eq!(metric.read_short(&mut BitReader::new(&bytes)), Some(x));
    }
}
