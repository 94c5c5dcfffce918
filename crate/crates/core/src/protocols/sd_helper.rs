//! Proof of knowledge with helper for syndrome decoding, in the Hamming
//! metric over `F2` and, with isometries, in the rank metric.

use crate::algebra::{BinExtField, BitMatrix, BitVec, Matrix};
use crate::chain::{self, Ctx, ExtractError, Hamming, Metric, Rank, Response, Second, Setup};
use crate::codes::{random_binary, random_ext, ParityCheck};
use crate::primitives::{sample, Prg, Seed};
use alloc::vec::Vec;

/// `(H, y)` together with the weight notion of the witness.
#[derive(Clone, Debug)]
pub struct Statement<M: Metric, C: ParityCheck<M::Vector>> {
    pub metric: M,
    pub h: C,
    pub y: C::Syndrome,
}

pub type SdStatement = Statement<Hamming, BitMatrix>;
pub type RsdStatement = Statement<Rank, Matrix<BinExtField>>;

pub type Transcript<V> = chain::Transcript<(), V>;

pub fn expand_sd(h_seed: &[u8], n: usize, k: usize) -> BitMatrix {
    random_binary(&mut Prg::new(&[0; 32], h_seed, b"sd/H"), n, k)
}

pub fn expand_rsd(h_seed: &[u8], m: u32, n: usize, k: usize) -> Matrix<BinExtField> {
    let field = BinExtField::new(m).expect("extension degree");
    random_ext(&mut Prg::new(&[0; 32], h_seed, b"rsd/H"), field, n, k)
}

/// Random binary SD instance with a planted weight-`omega` solution.
pub fn keygen_sd(h_seed: &[u8], w_seed: &[u8], n: usize, k: usize, omega: usize) -> (SdStatement, BitVec) {
    let h = expand_sd(h_seed, n, k);
    let x = sample::fixed_weight(&mut Prg::new(&[0; 32], w_seed, b"sd/x"), n, omega);
    let y = h.syndrome(&x);
    (Statement { metric: Hamming { n, omega }, h, y }, x)
}

/// Random RSD instance over `GF(2^m)` with a planted rank-`omega` solution.
pub fn keygen_rsd(h_seed: &[u8], w_seed: &[u8], m: u32, n: usize, k: usize, omega: usize) -> (RsdStatement, Vec<u64>) {
    let h = expand_rsd(h_seed, m, n, k);
    let x = sample::rank_weight_vector(&mut Prg::new(&[0; 32], w_seed, b"rsd/x"), m, n, omega);
    let y = h.syndrome(&x);
    (Statement { metric: Rank { m, n, omega }, h, y }, x)
}

impl<M: Metric, C: ParityCheck<M::Vector>> Statement<M, C> {
    pub fn is_witness(&self, x: &M::Vector) -> bool {
        self.metric.weight(x) == self.metric.omega() && self.h.syndrome(x) == self.y
    }

    /// The helper: everything derived from `(theta, xi)`.
    pub fn setup(&self, ctx: Ctx, theta: Seed, xi: Seed, n_parties: usize) -> Setup<M> {
        chain::setup_for(&self.metric, &self.h, ctx, theta, xi, n_parties)
    }

    pub fn commit(&self, setup: &Setup<M>, x: &M::Vector) -> Second<M::Vector> {
        setup.commit2(&self.metric, x)
    }

    pub fn respond(&self, setup: &Setup<M>, second: &Second<M::Vector>, alpha: usize) -> Response<M::Vector> {
        assert!(alpha < setup.n_parties(), "alpha out of range");
        setup.respond(&self.metric, second, alpha)
    }

    /// Honest run of the whole protocol for a given challenge.
    pub fn prove(&self, ctx: Ctx, theta: Seed, xi: Seed, n_parties: usize, x: &M::Vector, alpha: usize) -> Transcript<M::Vector> {
        let setup = self.setup(ctx, theta, xi, n_parties);
        let second = self.commit(&setup, x);
        let rsp = self.respond(&setup, &second, alpha);
        Transcript { com1: setup.com1, ch: (), com2: second.com2, alpha, rsp }
    }

    /// `b1 ∧ b2 ∧ b3`.
    pub fn verify(&self, ctx: &Ctx, n_parties: usize, t: &Transcript<M::Vector>) -> bool {
        chain::verify_for(&self.metric, &self.h, &self.y, ctx, n_parties, t)
    }

    /// Witness from two accepting transcripts sharing `(com1, com2)` with distinct `alpha`.
    pub fn extract(
        &self,
        ctx: &Ctx,
        n_parties: usize,
        t1: &Transcript<M::Vector>,
        t2: &Transcript<M::Vector>,
    ) -> Result<M::Vector, ExtractError> {
        if !self.verify(ctx, n_parties, t1) || !self.verify(ctx, n_parties, t2) {
            return Err(ExtractError::Rejected);
        }
        if t1.com1 != t2.com1 || t1.com2 != t2.com2 {
            return Err(ExtractError::Inconsistent);
        }
        if t1.alpha == t2.alpha {
            return Err(ExtractError::Challenges);
        }
        let parties = chain::parties_from(
            &self.metric,
            ctx,
            n_parties,
            &[(t1.alpha, &t1.rsp.opening), (t2.alpha, &t2.rsp.opening)],
        )?;
        Ok(chain::pull_back(&self.metric, &parties, t1.alpha, &t1.rsp.z4))
    }

    /// Witness-free commitment consistent at party `alpha`.
    pub fn simulate_commit(
        &self,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        alpha: usize,
        prg: &mut Prg,
    ) -> (Setup<M>, Second<M::Vector>) {
        chain::simulate_commit_for(&self.metric, &self.h, &self.y, ctx, theta, xi, n_parties, alpha, prg)
    }

    /// Accepting transcript for challenge `alpha` built from public data only.
    pub fn simulate(
        &self,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        alpha: usize,
        prg: &mut Prg,
    ) -> Transcript<M::Vector> {
        let (setup, second) = self.simulate_commit(ctx, theta, xi, n_parties, alpha, prg);
        let rsp = setup.respond(&self.metric, &second, alpha);
        Transcript { com1: setup.com1, ch: (), com2: second.com2, alpha, rsp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(i: u32) -> Ctx {
        Ctx::new([7; 32], i)
    }

    #[test]
    fn honest_transcripts_verify_for_every_alpha() {
        let (st, x) = keygen_sd(b"h", b"w", 24, 12, 4);
        assert!(st.is_witness(&x));
        for alpha in 0..4 {
            let t = st.prove(ctx(0), [1; 16], [2; 16], 4, &x, alpha);
            assert!(st.verify(&ctx(0), 4, &t));
            assert_eq!(st.metric.weight(&t.rsp.z4), 4);
        }
    }

    #[test]
    fn last_alpha_reveals_full_composition() {
        let (st, x) = keygen_sd(b"h", b"w", 24, 12, 4);
        let setup = st.setup(ctx(0), [1; 16], [2; 16], 5);
        let rsp = st.respond(&setup, &st.commit(&setup, &x), 4);
        let pi = setup.aggregate_transform(&st.metric);
        assert_eq!(rsp.z4, pi.apply_bits(&x));
        let rsp = st.respond(&setup, &st.commit(&setup, &x), 0);
        assert_eq!(rsp.z4, setup.parties[0].transform.apply_bits(&x));
    }

    #[test]
    fn tampering_is_rejected() {
        let (st, x) = keygen_sd(b"h", b"w", 24, 12, 4);
        let t = st.prove(ctx(0), [1; 16], [2; 16], 4, &x, 2);
        let mut bad = t.clone();
        bad.rsp.z1.flip(3);
        assert!(!st.verify(&ctx(0), 4, &bad));
        let mut bad = t.clone();
        let j = (0..24).find(|&j| !bad.rsp.z4.get(j)).unwrap();
        bad.rsp.z4.flip(j);
        assert!(!st.verify(&ctx(0), 4, &bad));
        let mut bad = t.clone();
        bad.rsp.opening[0][0] ^= 1;
        assert!(!st.verify(&ctx(0), 4, &bad));
        assert!(!st.verify(&ctx(1), 4, &t));
    }

    #[test]
    fn extraction_recovers_planted_witness() {
        let (st, x) = keygen_sd(b"h2", b"w2", 24, 12, 4);
        let t1 = st.prove(ctx(0), [3; 16], [4; 16], 4, &x, 0);
        let t2 = st.prove(ctx(0), [3; 16], [4; 16], 4, &x, 1);
        assert_eq!(st.extract(&ctx(0), 4, &t1, &t2).unwrap(), x);
        assert_eq!(st.extract(&ctx(0), 4, &t2, &t1).unwrap(), x);
        let mut bad = t2.clone();
        bad.com2[0] ^= 1;
        assert!(st.extract(&ctx(0), 4, &t1, &bad).is_err());
        assert_eq!(st.extract(&ctx(0), 4, &t1, &t1), Err(ExtractError::Challenges));
    }

    #[test]
    fn simulated_transcripts_verify() {
        let (st, _) = keygen_sd(b"h3", b"w3", 24, 12, 4);
        let mut prg = Prg::new(&[0; 32], b"sim", b"");
        for alpha in 0..4 {
            let t = st.simulate(ctx(0), prg.seed(), prg.seed(), 4, alpha, &mut prg);
            assert!(st.verify(&ctx(0), 4, &t));
        }
    }

    #[test]
    fn rank_variant_accepts_and_extracts() {
        let (st, x) = keygen_rsd(b"h", b"w", 7, 8, 4, 2);
        assert!(st.is_witness(&x));
        for alpha in 0..4 {
            let t = st.prove(ctx(0), [1; 16], [2; 16], 4, &x, alpha);
            assert!(st.verify(&ctx(0), 4, &t));
        }
        let t1 = st.prove(ctx(0), [1; 16], [2; 16], 4, &x, 3);
        let t2 = st.prove(ctx(0), [1; 16], [2; 16], 4, &x, 1);
        assert_eq!(st.extract(&ctx(0), 4, &t1, &t2).unwrap(), x);
    }
}
