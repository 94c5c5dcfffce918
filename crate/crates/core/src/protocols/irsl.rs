//! Five-round proof of knowledge for ideal rank support learning: the first
//! challenge `gamma` selects a non-zero combination of rotated witnesses,
//! chains use rank isometries. With `M = 1` this is the ideal RSD protocol.

use crate::algebra::{rank_weight, support, BinExtField, BitMatrix, BitVec};
use crate::chain::{self, Ctx, ExtractError, Rank, Response, Second, Setup};
use crate::codes::{IdealPcm, ParamError, ParityCheck};
use crate::numeric::log2_ratio;
use crate::primitives::{sample, Prg, Seed};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};

pub type IrslTranscript = chain::Transcript<BitVec, Vec<u64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrslStatement {
    pub metric: Rank,
    pub h: IdealPcm,
    pub ys: Vec<Vec<u64>>,
}

/// Witness vectors sharing the support `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrslWitness {
    pub e: Vec<u64>,
    pub xs: Vec<Vec<u64>>,
}

/// `x_gamma` lost rank: its support is a proper subspace of `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankDefect {
    pub rank: usize,
}

/// `H d_delta + c = sum gamma^delta_{ij} rot_j(y_i)` with all `d_delta`
/// sharing one support of dimension `omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffIrslSolution {
    pub c: Vec<u64>,
    pub entries: Vec<(Vec<u64>, BitVec)>,
}

pub fn expand(h_seed: &[u8], field: BinExtField, k: usize) -> Result<IdealPcm, ParamError> {
    IdealPcm::from_prg(&mut Prg::new(&[0; 32], h_seed, b"irsl/H"), field, k)
}

pub fn keygen(
    h_seed: &[u8],
    w_seed: &[u8],
    m: u32,
    k: usize,
    omega: usize,
    big_m: usize,
) -> Result<(IrslStatement, IrslWitness), ParamError> {
    let field = BinExtField::new(m).ok_or(ParamError::Degree)?;
    if omega > (m as usize).min(2 * k) || big_m == 0 {
        return Err(ParamError::Shape);
    }
    let h = expand(h_seed, field, k)?;
    let (e, xs) = sample::support_vectors(&mut Prg::new(&[0; 32], w_seed, b"irsl/x"), m, 2 * k, omega, big_m);
    let ys = xs.iter().map(|x| h.syndrome(x)).collect();
    Ok((IrslStatement { metric: Rank { m, n: 2 * k, omega }, h, ys }, IrslWitness { e, xs }))
}

fn xor_into(acc: &mut [u64], v: &[u64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= b;
    }
}

impl IrslStatement {
    pub fn k(&self) -> usize {
        self.h.k()
    }

    pub fn big_m(&self) -> usize {
        self.ys.len()
    }

    /// `sum gamma_{ij} rot_j(v_i)`, `gamma` indexed by `i * k + j`.
    pub fn combine(&self, vs: &[Vec<u64>], gamma: &BitVec) -> Vec<u64> {
        let k = self.k();
        assert_eq!(gamma.len(), vs.len() * k, "gamma length");
        let mut acc = vec![0u64; vs[0].len()];
        for idx in gamma.iter_ones() {
            xor_into(&mut acc, &self.h.rot(&vs[idx / k], idx % k));
        }
        acc
    }

    pub fn target(&self, gamma: &BitVec) -> Vec<u64> {
        self.combine(&self.ys, gamma)
    }

    pub fn setup(&self, ctx: Ctx, theta: Seed, xi: Seed, n_parties: usize) -> Setup<Rank> {
        chain::setup_for(&self.metric, &self.h, ctx, theta, xi, n_parties)
    }

    /// Chain on `x_gamma`; refuses when `x_gamma` has rank below `omega`.
    pub fn commit2(&self, setup: &Setup<Rank>, w: &IrslWitness, gamma: &BitVec) -> Result<Second<Vec<u64>>, RankDefect> {
        let x = self.combine(&w.xs, gamma);
        let rank = rank_weight(&x);
        if rank != self.metric.omega {
            return Err(RankDefect { rank });
        }
        Ok(setup.commit2(&self.metric, &x))
    }

    pub fn respond(&self, setup: &Setup<Rank>, second: &Second<Vec<u64>>, alpha: usize) -> Response<Vec<u64>> {
        assert!(alpha < setup.n_parties(), "alpha out of range");
        setup.respond(&self.metric, second, alpha)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn prove(
        &self,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        w: &IrslWitness,
        gamma: &BitVec,
        alpha: usize,
    ) -> Result<IrslTranscript, RankDefect> {
        let setup = self.setup(ctx, theta, xi, n_parties);
        let second = self.commit2(&setup, w, gamma)?;
        let rsp = self.respond(&setup, &second, alpha);
        Ok(IrslTranscript { com1: setup.com1, ch: gamma.clone(), com2: second.com2, alpha, rsp })
    }

    pub fn verify(&self, ctx: &Ctx, n_parties: usize, t: &IrslTranscript) -> bool {
        if t.ch.len() != self.big_m() * self.k() || t.ch.is_zero() {
            return false;
        }
        chain::verify_for(&self.metric, &self.h, &self.target(&t.ch), ctx, n_parties, t)
    }

    pub fn extract(&self, ctx: &Ctx, n_parties: usize, pairs: &[(IrslTranscript, IrslTranscript)]) -> Result<DiffIrslSolution, ExtractError> {
        let mut seen: Vec<&BitVec> = Vec::new();
        for (a, b) in pairs {
            if a.ch != b.ch || seen.contains(&&a.ch) || !self.verify(ctx, n_parties, a) || !self.verify(ctx, n_parties, b) {
                return Err(ExtractError::Challenges);
            }
            seen.push(&a.ch);
        }
        let groups: Vec<_> = pairs.iter().map(|(a, b)| (self.target(&a.ch), a, b)).collect();
        let parts = chain::diff_extract(&self.metric, &self.h, ctx, n_parties, &groups)?;
        let entries = parts.d.into_iter().zip(pairs).map(|(d, (a, _))| (d, a.ch.clone())).collect();
        Ok(DiffIrslSolution { c: parts.c, entries })
    }

    pub fn is_diff_solution(&self, sol: &DiffIrslSolution) -> bool {
        let Some((d0, _)) = sol.entries.first() else {
            return false;
        };
        let f = support(d0);
        let mut seen: Vec<&BitVec> = Vec::new();
        sol.c.len() == self.k()
            && f.len() == self.metric.omega
            && sol.entries.iter().all(|(d, g)| {
                let fresh = !seen.contains(&g);
                seen.push(g);
                fresh
                    && g.len() == self.big_m() * self.k()
                    && !g.is_zero()
                    && d.len() == self.h.n()
                    && support(d) == f
                    && self.h.syndrome_add(&self.h.syndrome(d), &sol.c) == self.target(g)
            })
    }

    /// `Sup(d_1)` when `c = 0`.
    pub fn diffirsl_to_irsl(&self, sol: &DiffIrslSolution) -> Option<Vec<u64>> {
        if sol.c.iter().any(|&c| c != 0) {
            return None;
        }
        sol.entries.first().map(|(d, _)| support(d))
    }

    /// Some `x_i` with coordinates in the span of `e` and `H x_i = y_i`, if any.
    pub fn preimage_in(&self, e: &[u64], y: &[u64]) -> Option<Vec<u64>> {
        let (n, w, m) = (self.h.n(), e.len(), self.metric.m as usize);
        let flat = |s: &[u64]| {
            let mut b = BitVec::zeros(s.len() * m);
            for (c, &v) in s.iter().enumerate() {
                for bit in 0..m {
                    b.set(c * m + bit, v >> bit & 1 == 1);
                }
            }
            b
        };
        let mut cols = Vec::with_capacity(n * w);
        for c in 0..n {
            for &b in e {
                let mut x = vec![0u64; n];
                x[c] = b;
                cols.push(flat(&self.h.syndrome(&x)));
            }
        }
        let a = BitMatrix::from_rows(self.k() * m, cols).transpose();
        let sol = a.solve_preimage(&flat(y)).ok()?;
        let mut x = vec![0u64; n];
        for c in 0..n {
            for (l, &b) in e.iter().enumerate() {
                if sol.get(c * w + l) {
                    x[c] ^= b;
                }
            }
        }
        Some(x)
    }

    /// `e` has dimension `omega` and every syndrome has a preimage supported in it.
    pub fn is_support_solution(&self, e: &[u64]) -> bool {
        rank_weight(e) == self.metric.omega && self.ys.iter().all(|y| self.preimage_in(e, y).is_some())
    }

    #[allow(clippy::too_many_arguments)]
    pub fn simulate_commit(
        &self,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        gamma: &BitVec,
        alpha: usize,
        prg: &mut Prg,
    ) -> (Setup<Rank>, Second<Vec<u64>>) {
        chain::simulate_commit_for(&self.metric, &self.h, &self.target(gamma), ctx, theta, xi, n_parties, alpha, prg)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn simulate(
        &self,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        gamma: &BitVec,
        alpha: usize,
        prg: &mut Prg,
    ) -> IrslTranscript {
        let (setup, second) = self.simulate_commit(ctx, theta, xi, n_parties, gamma, alpha, prg);
        let rsp = setup.respond(&self.metric, &second, alpha);
        IrslTranscript { com1: setup.com1, ch: gamma.clone(), com2: second.com2, alpha, rsp }
    }
}

/// Exponent of `q` in the loss bound, reading `q^{m(n-k)} - 1` as `q^{m(n-k)}`:
/// `m(n-k) + Delta (omega(m-omega) + n omega - m(n-k))`.
pub fn reduction_loss_rank_exponent(m: i64, n: i64, k: i64, omega: i64, delta: i64) -> i64 {
    let syn = m * (n - k);
    syn + delta * (omega * (m - omega) + n * omega - syn)
}

/// `(q^{m(n-k)} - 1) (q^{omega(m-omega) + n omega - m(n-k)})^Delta`, exactly.
pub fn reduction_loss_rank_exact(q: u64, m: i64, n: i64, k: i64, omega: i64, delta: i64) -> BigRational {
    let syn = m * (n - k);
    let e = delta * (omega * (m - omega) + n * omega - syn);
    let qb = BigUint::from(q);
    let first = BigInt::from(Pow::pow(&qb, syn as u64)) - 1;
    let pow = BigInt::from(Pow::pow(&qb, e.unsigned_abs()));
    let factor = if e >= 0 { BigRational::from_integer(pow) } else { BigRational::new(BigInt::one(), pow) };
    BigRational::from_integer(first) * factor
}

/// `log2` of [`reduction_loss_rank_exact`].
pub fn reduction_loss_rank(q: u64, m: i64, n: i64, k: i64, omega: i64, delta: i64) -> f64 {
    log2_ratio(&reduction_loss_rank_exact(q, m, n, k, omega, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::in_span;

    fn ctx() -> Ctx {
        Ctx::new([6; 32], 0)
    }

    fn toy() -> (IrslStatement, IrslWitness) {
        keygen(b"h", b"w", 6, 3, 2, 2).unwrap()
    }

    fn gammas(st: &IrslStatement, w: &IrslWitness) -> Vec<BitVec> {
        let mut p = Prg::new(&[0; 32], b"g", b"");
        let mut out = Vec::new();
        while out.len() < 6 {
            let g = crate::primitives::challenge::gamma(&mut p, 6);
            if rank_weight(&st.combine(&w.xs, &g)) == 2 && !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }

    #[test]
    fn unit_gamma_selects_a_witness() {
        let (st, w) = toy();
        let mut g = BitVec::zeros(6);
        g.set(3, true);
        assert_eq!(st.combine(&w.xs, &g), w.xs[1]);
    }

    #[test]
    fn combination_stays_in_support_and_is_linear() {
        let (st, w) = keygen(b"h2", b"w2", 37, 17, 10, 5).unwrap();
        let mut p = Prg::new(&[0; 32], b"g", b"");
        for _ in 0..20 {
            let g = crate::primitives::challenge::gamma(&mut p, 85);
            let x = st.combine(&w.xs, &g);
            assert!(x.iter().all(|&c| in_span(&w.e, c)));
            assert_eq!(st.h.syndrome(&x), st.target(&g));
        }
    }

    #[test]
    fn honest_accepts_every_alpha() {
        let (st, w) = toy();
        for g in gammas(&st, &w) {
            for alpha in 0..4 {
                let t = st.prove(ctx(), [1; 16], [2; 16], 4, &w, &g, alpha).unwrap();
                assert!(st.verify(&ctx(), 4, &t));
                assert_eq!(rank_weight(&t.rsp.z4), 2);
                let mut bad = t.clone();
                bad.ch.flip(0);
                assert!(!st.verify(&ctx(), 4, &bad));
            }
        }
    }

    #[test]
    fn rank_defect_is_reported() {
        let (st, mut w) = toy();
        w.xs[1] = w.xs[0].clone();
        let setup = st.setup(ctx(), [1; 16], [2; 16], 4);
        let mut g = BitVec::zeros(6);
        g.set(0, true);
        g.set(3, true);
        assert_eq!(st.commit2(&setup, &w, &g).unwrap_err(), RankDefect { rank: 0 });
    }

    #[test]
    fn extraction_recovers_support() {
        let (st, w) = toy();
        let gs = gammas(&st, &w);
        let pairs: Vec<_> = gs[..3]
            .iter()
            .map(|g| {
                (
                    st.prove(ctx(), [3; 16], [4; 16], 4, &w, g, 1).unwrap(),
                    st.prove(ctx(), [3; 16], [4; 16], 4, &w, g, 3).unwrap(),
                )
            })
            .collect();
        let sol = st.extract(&ctx(), 4, &pairs).unwrap();
        assert!(sol.c.iter().all(|&c| c == 0));
        assert!(st.is_diff_solution(&sol));
        assert_eq!(sol.entries[0].0, st.combine(&w.xs, &gs[0]));
        let e = st.diffirsl_to_irsl(&sol).unwrap();
        assert_eq!(e, w.e);
        assert!(st.is_support_solution(&e));
    }

    #[test]
    fn simulation_verifies() {
        let (st, w) = toy();
        let mut prg = Prg::new(&[0; 32], b"sim", b"");
        for (alpha, g) in gammas(&st, &w).iter().enumerate().take(4) {
            let t = st.simulate(ctx(), prg.seed(), prg.seed(), 4, g, alpha, &mut prg);
            assert!(st.verify(&ctx(), 4, &t));
        }
    }

    #[test]
    fn loss_exponents() {
        assert_eq!(reduction_loss_rank_exponent(37, 34, 17, 10, 40), 629 - 760);
        assert_eq!(reduction_loss_rank_exponent(37, 34, 17, 10, 1), 0 + 610);
        let l = reduction_loss_rank(2, 37, 34, 17, 10, 40);
        assert!((l + 131.0).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for d in 1..50 {
            let v = reduction_loss_rank(2, 37, 34, 17, 10, d);
            assert!(v < prev);
            prev = v;
        }
    }
}
