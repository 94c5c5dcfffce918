use pokstruct_core::analysis::{lookup, ParamSet};
use pokstruct_core::fiat_shamir::{self, layout_bits, PublicKey, Signature};
use pokstruct_core::primitives::Prg;
use std::sync::atomic::{AtomicUsize, Ordering};

const FLIPS: usize = 1000;
const FAST: [&str; 6] = ["ipkp-fast", "sd-helper-fast", "qcsd-fast", "rsd-helper-fast", "irsd-fast", "irsl-fast"];

fn signed(name: &str, msg: &[u8]) -> (&'static ParamSet, PublicKey, Vec<u8>) {
    let set = lookup(name).unwrap();
    let (pk, sk) = fiat_shamir::keygen(set, [4; 32]).unwrap();
    let sig = fiat_shamir::sign(&sk, msg, &[5; 32]).unwrap().to_bytes(set);
    (set, pk, sig)
}

/// Count of accepted single-bit modifications over `FLIPS` random positions.
fn accepted_flips(name: &str) -> usize {
    let (_, pk, sig) = signed(name, b"fuzz");
    assert!(fiat_shamir::verify_bytes(&pk, b"fuzz", &sig));
    let mut prg = Prg::new(&[0; 32], name.as_bytes(), b"flips");
    let positions: Vec<usize> = (0..FLIPS).map(|_| prg.below(8 * sig.len() as u64) as usize).collect();
    let next = AtomicUsize::new(0);
    let accepted = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&bit) = positions.get(i) else { break };
                let mut bad = sig.clone();
                bad[bit / 8] ^= 1 << (bit % 8);
                if fiat_shamir::verify_bytes(&pk, b"fuzz", &bad) {
                    accepted.fetch_add(1, Ordering::Relaxed);
                }
            });
        }
    });
    accepted.into_inner()
}

#[test]
fn single_bit_flips_are_rejected() {
    for name in FAST {
        assert_eq!(accepted_flips(name), 0, "{name}");
    }
}

#[test]
fn malformed_lengths_are_rejected() {
    for name in ["ipkp-fast", "qcsd-fast", "irsl-fast"] {
        let (set, pk, sig) = signed(name, b"m");
        assert!(!fiat_shamir::verify_bytes(&pk, b"m", &sig[..sig.len() - 1]));
        assert!(!fiat_shamir::verify_bytes(&pk, b"m", &[]));
        let mut long = sig.clone();
        long.push(0);
        assert!(Signature::from_bytes(set, &long).is_err());
        assert!(!fiat_shamir::verify_bytes(&pk, b"m", &long));
    }
}

#[test]
fn wrong_message_key_or_scheme_is_rejected() {
    let (_, pk, sig) = signed("irsd-fast", b"one");
    assert!(fiat_shamir::verify_bytes(&pk, b"one", &sig));
    assert!(!fiat_shamir::verify_bytes(&pk, b"two", &sig));
    let (other, _) = fiat_shamir::keygen(pk.set, [6; 32]).unwrap();
    assert!(!fiat_shamir::verify_bytes(&other, b"one", &sig));
    let (irsl_pk, _) = fiat_shamir::keygen(lookup("irsl-fast").unwrap(), [4; 32]).unwrap();
    assert!(!fiat_shamir::verify_bytes(&irsl_pk, b"one", &sig));
    let (qc_pk, _) = fiat_shamir::keygen(lookup("qcsd-fast").unwrap(), [4; 32]).unwrap();
    assert!(!fiat_shamir::verify_bytes(&qc_pk, b"one", &sig));
}

#[test]
fn signing_is_deterministic_in_its_inputs() {
    let set = lookup("ipkp-fast").unwrap();
    let (pk, sk) = fiat_shamir::keygen(set, [8; 32]).unwrap();
    let a = fiat_shamir::sign(&sk, b"m", &[1; 32]).unwrap();
    let b = fiat_shamir::sign(&sk, b"m", &[1; 32]).unwrap();
    let c = fiat_shamir::sign(&sk, b"m", &[2; 32]).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.salt, c.salt);
    assert!(fiat_shamir::verify(&pk, b"m", &c));
}

#[test]
fn helper_signatures_execute_tau_setups() {
    for name in ["sd-helper-fast", "rsd-helper-fast"] {
        let set = lookup(name).unwrap();
        let (pk, sk) = fiat_shamir::keygen(set, [3; 32]).unwrap();
        let sig = fiat_shamir::sign(&sk, b"cut", &[7; 32]).unwrap();
        let executed = match &sig.responses {
            fiat_shamir::Responses::Hamming(r) => r.len(),
            fiat_shamir::Responses::Rank(r) => r.len(),
            fiat_shamir::Responses::Ipkp(_) => unreachable!(),
        };
        assert_eq!(executed, set.tau);
        assert!(!sig.master.is_empty() && sig.master.len() <= set.m_prime - set.tau);
        let bytes = sig.to_bytes(set);
        assert_eq!(bytes.len(), layout_bits(set, 0, sig.master.len()).div_ceil(8));
        assert_eq!(Signature::from_bytes(set, &bytes).unwrap(), sig);
        let mut dropped = sig.clone();
        dropped.master.pop();
        assert!(!fiat_shamir::verify(&pk, b"cut", &dropped));
    }
}

#[test]
fn public_keys_round_trip_and_reject_garbage() {
    for name in FAST {
        let set = lookup(name).unwrap();
        let (pk, _) = fiat_shamir::keygen(set, [2; 32]).unwrap();
        let bytes = pk.to_bytes();
        assert_eq!(PublicKey::from_bytes(set, &bytes).unwrap().to_bytes(), bytes);
        assert!(PublicKey::from_bytes(set, &bytes[1..]).is_err());
    }
}
