//! Five-round proof of knowledge for quasi-cyclic syndrome decoding with
//! `M` syndromes: first challenge `(mu, kappa)` picks a syndrome and a
//! rotation, second challenge `alpha`.

use crate::algebra::BitVec;
use crate::chain::{self, Ctx, ExtractError, Hamming, Response, Second, Setup};
use crate::codes::{ParamError, ParityCheck, QuasiCyclicPcm};
use crate::numeric::log2_ratio;
use crate::primitives::combinatorics::binomial;
use crate::primitives::{sample, Prg, Seed};
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

/// First challenge `(mu, kappa)`, zero-based.
pub type Challenge = (usize, usize);
pub type QcsdTranscript = chain::Transcript<Challenge, BitVec>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcsdStatement {
    pub metric: Hamming,
    pub h: QuasiCyclicPcm,
    pub ys: Vec<BitVec>,
}

/// `H d_j + c = rot_{kappa_j}(y_{mu_j})` with `w(d_j) = omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSdSolution {
    pub c: BitVec,
    /// `(d_j, kappa_j, mu_j)`.
    pub entries: Vec<(BitVec, usize, usize)>,
}

pub fn expand(h_seed: &[u8], k: usize, checked: bool) -> Result<QuasiCyclicPcm, ParamError> {
    QuasiCyclicPcm::from_prg(&mut Prg::new(&[0; 32], h_seed, b"qcsd/H"), k, checked)
}

/// `H` from `h_seed`, `M` weight-`omega` witnesses from `w_seed`. With
/// `checked`, `k` must be a prime with 2 primitive modulo `k`.
pub fn keygen(
    h_seed: &[u8],
    w_seed: &[u8],
    k: usize,
    omega: usize,
    big_m: usize,
    checked: bool,
) -> Result<(QcsdStatement, Vec<BitVec>), ParamError> {
    let h = expand(h_seed, k, checked)?;
    let mut p = Prg::new(&[0; 32], w_seed, b"qcsd/x");
    let xs: Vec<BitVec> = (0..big_m).map(|_| sample::fixed_weight(&mut p, 2 * k, omega)).collect();
    let ys = xs.iter().map(|x| h.syndrome(x)).collect();
    Ok((QcsdStatement { metric: Hamming { n: 2 * k, omega }, h, ys }, xs))
}

impl QcsdStatement {
    pub fn k(&self) -> usize {
        self.h.k()
    }

    pub fn big_m(&self) -> usize {
        self.ys.len()
    }

    /// `rot_kappa(y_mu)`.
    pub fn target(&self, ch: Challenge) -> BitVec {
        self.h.rot(&self.ys[ch.0], ch.1)
    }

    pub fn setup(&self, ctx: Ctx, theta: Seed, xi: Seed, n_parties: usize) -> Setup<Hamming> {
        chain::setup_for(&self.metric, &self.h, ctx, theta, xi, n_parties)
    }

    /// Chain on `x_{mu,kappa} = rot_kappa(x_mu)`.
    pub fn commit2(&self, setup: &Setup<Hamming>, xs: &[BitVec], ch: Challenge) -> Second<BitVec> {
        setup.commit2(&self.metric, &self.h.rot(&xs[ch.0], ch.1))
    }

    pub fn respond(&self, setup: &Setup<Hamming>, second: &Second<BitVec>, alpha: usize) -> Response<BitVec> {
        assert!(alpha < setup.n_parties(), "alpha out of range");
        setup.respond(&self.metric, second, alpha)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn prove(&self, ctx: Ctx, theta: Seed, xi: Seed, n_parties: usize, xs: &[BitVec], ch: Challenge, alpha: usize) -> QcsdTranscript {
        let setup = self.setup(ctx, theta, xi, n_parties);
        let second = self.commit2(&setup, xs, ch);
        let rsp = self.respond(&setup, &second, alpha);
        QcsdTranscript { com1: setup.com1, ch, com2: second.com2, alpha, rsp }
    }

    pub fn verify(&self, ctx: &Ctx, n_parties: usize, t: &QcsdTranscript) -> bool {
        if t.ch.0 >= self.big_m() || t.ch.1 >= self.k() {
            return false;
        }
        chain::verify_for(&self.metric, &self.h, &self.target(t.ch), ctx, n_parties, t)
    }

    /// Differential solution from `Delta` pairs of transcripts; pair `j`
    /// answers challenge `(mu_j, kappa_j)` with `alpha_1` then `alpha_2`.
    pub fn extract(&self, ctx: &Ctx, n_parties: usize, pairs: &[(QcsdTranscript, QcsdTranscript)]) -> Result<DiffSdSolution, ExtractError> {
        let mut seen = Vec::new();
        for (a, b) in pairs {
            if a.ch != b.ch || seen.contains(&a.ch) || !self.verify(ctx, n_parties, a) || !self.verify(ctx, n_parties, b) {
                return Err(ExtractError::Challenges);
            }
            seen.push(a.ch);
        }
        let groups: Vec<_> = pairs.iter().map(|(a, b)| (self.target(a.ch), a, b)).collect();
        let parts = chain::diff_extract(&self.metric, &self.h, ctx, n_parties, &groups)?;
        let entries = parts.d.into_iter().zip(pairs).map(|(d, (a, _))| (d, a.ch.1, a.ch.0)).collect();
        Ok(DiffSdSolution { c: parts.c, entries })
    }

    pub fn is_diff_solution(&self, sol: &DiffSdSolution) -> bool {
        let mut seen = Vec::new();
        sol.c.len() == self.k()
            && sol.entries.iter().all(|(d, kappa, mu)| {
                let fresh = !seen.contains(&(*kappa, *mu));
                seen.push((*kappa, *mu));
                fresh
                    && *mu < self.big_m()
                    && *kappa < self.k()
                    && d.len() == self.h.n()
                    && d.weight() == self.metric.omega
                    && self.h.syndrome(d).xor(&sol.c) == self.target((*mu, *kappa))
            })
    }

    /// `rot_{k - kappa_1}(d_1)` when `c = 0`.
    pub fn diffsd_to_qcsd(&self, sol: &DiffSdSolution) -> Option<BitVec> {
        if !sol.c.is_zero() {
            return None;
        }
        let (d, kappa, _) = sol.entries.first()?;
        Some(self.h.rot(d, (self.k() - kappa) % self.k()))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn simulate_commit(
        &self,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        ch: Challenge,
        alpha: usize,
        prg: &mut Prg,
    ) -> (Setup<Hamming>, Second<BitVec>) {
        chain::simulate_commit_for(&self.metric, &self.h, &self.target(ch), ctx, theta, xi, n_parties, alpha, prg)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn simulate(
        &self,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        ch: Challenge,
        alpha: usize,
        prg: &mut Prg,
    ) -> QcsdTranscript {
        let (setup, second) = self.simulate_commit(ctx, theta, xi, n_parties, ch, alpha, prg);
        let rsp = setup.respond(&self.metric, &second, alpha);
        QcsdTranscript { com1: setup.com1, ch, com2: second.com2, alpha, rsp }
    }
}

/// `M p + (2^{n-k} - 2) p^Delta` with `p = C(n, omega) / 2^{n-k}`, exactly.
pub fn reduction_loss_exact(n: u64, k: u64, omega: u64, big_m: u64, delta: u32) -> BigRational {
    let syn = BigUint::one() << (n - k);
    let p = BigRational::new(BigInt::from(binomial(n, omega)), BigInt::from(syn.clone()));
    let count = BigInt::from(syn) - 2;
    p.clone() * BigInt::from(big_m) + num_traits::pow(p, delta as usize) * count
}

/// `log2` of [`reduction_loss_exact`].
pub fn reduction_loss(n: u64, k: u64, omega: u64, big_m: u64, delta: u32) -> f64 {
    log2_ratio(&reduction_loss_exact(n, k, omega, big_m, delta))
}
