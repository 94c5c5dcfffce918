//! Five-round proof of knowledge for the inhomogeneous permuted kernel
//! problem: first challenge `kappa` in `F_q^*`, second challenge `alpha`.

use crate::algebra::{Field, Matrix, PrimeField};
use crate::chain::{leaf_secrets, Ctx, ExtractError};
use crate::primitives::tree::recover_one;
use crate::primitives::{commit, sample, tag, Commitment, Hasher, Permutation, Prg, Salt, Seed, SeedTree};
use alloc::vec::Vec;

/// `(H, x, y)` with `H` of shape `m x n` over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpkpStatement {
    pub field: PrimeField,
    pub h: Matrix<PrimeField>,
    pub x: Vec<u16>,
    pub y: Vec<u16>,
}

/// Public part `(H, x)` expanded from a seed.
pub fn expand_public(h_seed: &[u8], field: PrimeField, m: usize, n: usize) -> (Matrix<PrimeField>, Vec<u16>) {
    let mut p = Prg::new(&[0; 32], h_seed, b"ipkp/H");
    let data = sample::fq_vector(&mut p, &field, m * n);
    let h = Matrix::from_vec(field, m, n, data).unwrap();
    let x = sample::fq_vector(&mut p, &field, n);
    (h, x)
}

pub fn keygen(h_seed: &[u8], w_seed: &[u8], q: u16, m: usize, n: usize) -> (IpkpStatement, Permutation) {
    let field = PrimeField::new(q).expect("q must be prime");
    let (h, x) = expand_public(h_seed, field, m, n);
    let pi = sample::permutation(&mut Prg::new(&[0; 32], w_seed, b"ipkp/pi"), n);
    let y = h.matvec(&pi.apply(&x)).unwrap();
    (IpkpStatement { field, h, x, y }, pi)
}

fn fq_bytes(v: &[u16]) -> Vec<u8> {
    v.iter().flat_map(|c| c.to_le_bytes()).collect()
}

#[derive(Clone, Debug)]
pub struct IpkpParty {
    pub theta: Seed,
    pub phi: Seed,
    pub r1: Seed,
    pub perm: Permutation,
    pub mask: Vec<u16>,
    pub com: Commitment,
}

fn party_mask(f: &PrimeField, salt: &Salt, phi: &Seed, n: usize) -> Vec<u16> {
    sample::fq_vector(&mut Prg::new(salt, phi, b"ipkp/v"), f, n)
}

fn party_perm(salt: &Salt, phi: &Seed, n: usize) -> Permutation {
    sample::permutation(&mut Prg::new(salt, phi, b"ipkp/pi"), n)
}

fn first_com(salt: &Salt, r1: &Seed, pi1: &Permutation, phi: &Seed) -> Commitment {
    let mut m = pi1.to_bytes();
    m.extend_from_slice(phi);
    commit(salt, r1, &m)
}

/// Party `i` from its seed; party 0 takes the explicit `pi1`.
fn derive_party(f: &PrimeField, ctx: &Ctx, n: usize, i: usize, theta: Seed, pi1: Option<&Permutation>) -> IpkpParty {
    let (phi, r1) = leaf_secrets(ctx, i, &theta);
    let mask = party_mask(f, &ctx.salt, &phi, n);
    let (perm, com) = match (i, pi1) {
        (0, Some(p)) => (p.clone(), first_com(&ctx.salt, &r1, p, &phi)),
        _ => (party_perm(&ctx.salt, &phi, n), commit(&ctx.salt, &r1, &phi)),
    };
    IpkpParty { theta, phi, r1, perm, mask, com }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IpkpSecond {
    pub chain: Vec<Vec<u16>>,
    pub com2: Commitment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpkpResponse {
    /// `s_alpha`.
    pub z1: Vec<u16>,
    /// Present exactly when `alpha` is not the first party.
    pub pi1: Option<Permutation>,
    pub opening: Vec<Seed>,
    pub com_alpha: Commitment,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IpkpTranscript {
    pub com1: Commitment,
    pub kappa: u16,
    pub com2: Commitment,
    pub alpha: usize,
    pub rsp: IpkpResponse,
}

/// First-round prover state.
#[derive(Clone, Debug)]
pub struct IpkpSetup {
    pub ctx: Ctx,
    pub tree: SeedTree,
    pub parties: Vec<IpkpParty>,
    pub com1: Commitment,
}

fn com_second(salt: &Salt, chain: &[Vec<u16>]) -> Commitment {
    let mut h = Hasher::new(tag::COM_SECOND, salt);
    for s in chain {
        h.update(&fq_bytes(s));
    }
    h.finish()
}

impl IpkpStatement {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_witness(&self, pi: &Permutation) -> bool {
        pi.len() == self.n() && self.h.matvec(&pi.apply(&self.x)).unwrap() == self.y
    }

    fn add(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    fn sub(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    fn scale(&self, k: u16, a: &[u16]) -> Vec<u16> {
        a.iter().map(|&x| self.field.mul(k, x)).collect()
    }

    fn forward(&self, parties: &[IpkpParty], start: Vec<u16>) -> Vec<Vec<u16>> {
        let mut s = start;
        parties
            .iter()
            .map(|p| {
                s = self.add(&p.perm.apply(&s), &p.mask);
                s.clone()
            })
            .collect()
    }

    fn root(&self, salt: &Salt, hv: &[u16], coms: impl Iterator<Item = Commitment>) -> Commitment {
        let mut h = Hasher::new(tag::COM_ROOT, salt);
        h.update(&fq_bytes(hv));
        for c in coms {
            h.update(&c);
        }
        h.finish()
    }

    /// Setup with an explicit first permutation.
    pub fn commit1_with_first(&self, ctx: Ctx, theta: Seed, n_parties: usize, pi1: Permutation) -> IpkpSetup {
        let tree = SeedTree::build(&ctx.salt, ctx.domain, &theta, n_parties);
        let parties: Vec<IpkpParty> = (0..n_parties)
            .map(|i| derive_party(&self.field, &ctx, self.n(), i, *tree.leaf(i), Some(&pi1)))
            .collect();
        let v = self.forward(&parties, alloc::vec![0; self.n()]).pop().unwrap();
        let hv = self.h.matvec(&v).unwrap();
        let com1 = self.root(&ctx.salt, &hv, parties.iter().map(|p| p.com));
        IpkpSetup { ctx, tree, parties, com1 }
    }

    /// `pi_1 = pi_2^{-1} ∘ .. ∘ pi_N^{-1} ∘ pi` so that the chain composes to `pi`.
    pub fn commit1(&self, ctx: Ctx, theta: Seed, n_parties: usize, pi: &Permutation) -> IpkpSetup {
        let tree = SeedTree::build(&ctx.salt, ctx.domain, &theta, n_parties);
        let mut pi1 = pi.clone();
        for i in (1..n_parties).rev() {
            let (phi, _) = leaf_secrets(&ctx, i, tree.leaf(i));
            pi1 = party_perm(&ctx.salt, &phi, self.n()).inverse().compose(&pi1);
        }
        self.commit1_with_first(ctx, theta, n_parties, pi1)
    }

    pub fn commit2(&self, setup: &IpkpSetup, kappa: u16) -> IpkpSecond {
        assert!(kappa != 0, "kappa must be non-zero");
        let chain = self.forward(&setup.parties, self.scale(kappa, &self.x));
        let com2 = com_second(&setup.ctx.salt, &chain);
        IpkpSecond { chain, com2 }
    }

    pub fn respond(&self, setup: &IpkpSetup, second: &IpkpSecond, alpha: usize) -> IpkpResponse {
        assert!(alpha < setup.parties.len(), "alpha out of range");
        IpkpResponse {
            z1: second.chain[alpha].clone(),
            pi1: (alpha != 0).then(|| setup.parties[0].perm.clone()),
            opening: setup.tree.open_one(alpha),
            com_alpha: setup.parties[alpha].com,
        }
    }

    pub fn prove(&self, ctx: Ctx, theta: Seed, n_parties: usize, pi: &Permutation, kappa: u16, alpha: usize) -> IpkpTranscript {
        let setup = self.commit1(ctx, theta, n_parties, pi);
        let second = self.commit2(&setup, kappa);
        let rsp = self.respond(&setup, &second, alpha);
        IpkpTranscript { com1: setup.com1, kappa, com2: second.com2, alpha, rsp }
    }

    fn revealed(&self, ctx: &Ctx, n_parties: usize, alpha: usize, rsp: &IpkpResponse) -> Option<Vec<Option<IpkpParty>>> {
        if (alpha != 0) != rsp.pi1.is_some() || rsp.pi1.as_ref().is_some_and(|p| p.len() != self.n()) {
            return None;
        }
        let leaves = recover_one(&ctx.salt, ctx.domain, n_parties, alpha, &rsp.opening).ok()?;
        Some(
            leaves
                .into_iter()
                .enumerate()
                .map(|(i, l)| l.map(|th| derive_party(&self.field, ctx, self.n(), i, th, rsp.pi1.as_ref())))
                .collect(),
        )
    }

    /// Recomputed `(com1, com2)` for a response, or `None` if it is malformed.
    pub fn replay(&self, ctx: &Ctx, n_parties: usize, kappa: u16, alpha: usize, rsp: &IpkpResponse) -> Option<(Commitment, Commitment)> {
        if alpha >= n_parties || kappa == 0 || kappa >= self.field.modulus() || rsp.z1.len() != self.n() {
            return None;
        }
        if rsp.z1.iter().any(|&c| c >= self.field.modulus()) {
            return None;
        }
        let parties = self.revealed(ctx, n_parties, alpha, rsp)?;
        let mut s = self.scale(kappa, &self.x);
        let mut chain = Vec::with_capacity(n_parties);
        for p in &parties {
            s = match p {
                None => rsp.z1.clone(),
                Some(p) => self.add(&p.perm.apply(&s), &p.mask),
            };
            chain.push(s.clone());
        }
        let hs = self.h.matvec(&s).unwrap();
        let syn = self.sub(&hs, &self.scale(kappa, &self.y));
        let com1 = self.root(&ctx.salt, &syn, parties.iter().map(|p| p.as_ref().map_or(rsp.com_alpha, |p| p.com)));
        Some((com1, com_second(&ctx.salt, &chain)))
    }

    pub fn verify(&self, ctx: &Ctx, n_parties: usize, t: &IpkpTranscript) -> bool {
        self.replay(ctx, n_parties, t.kappa, t.alpha, &t.rsp) == Some((t.com1, t.com2))
    }

    /// Witness from transcripts for `(kappa, a1), (kappa, a2), (kappa', a1), (kappa', a2)`.
    pub fn extract(&self, ctx: &Ctx, n_parties: usize, ts: &[IpkpTranscript; 4]) -> Result<Permutation, ExtractError> {
        if ts.iter().any(|t| !self.verify(ctx, n_parties, t)) {
            return Err(ExtractError::Rejected);
        }
        let [a, b, c, d] = ts;
        if ts.iter().any(|t| t.com1 != a.com1) || a.com2 != b.com2 || c.com2 != d.com2 {
            return Err(ExtractError::Inconsistent);
        }
        if a.kappa != b.kappa || c.kappa != d.kappa || a.kappa == c.kappa || a.alpha == b.alpha {
            return Err(ExtractError::Challenges);
        }
        let seeds = crate::chain::union_leaves(ctx, n_parties, &[(a.alpha, &a.rsp.opening), (b.alpha, &b.rsp.opening)])?;
        let pi1 = a.rsp.pi1.as_ref().or(b.rsp.pi1.as_ref()).ok_or(ExtractError::Challenges)?;
        let mut pi = pi1.clone();
        for (i, th) in seeds.iter().enumerate().skip(1) {
            let (phi, _) = leaf_secrets(ctx, i, th);
            pi = party_perm(&ctx.salt, &phi, self.n()).compose(&pi);
        }
        Ok(pi)
    }

    /// Witness-free commitments whose chain is consistent at party `alpha`.
    pub fn simulate_commit(
        &self,
        ctx: Ctx,
        theta: Seed,
        n_parties: usize,
        kappa: u16,
        alpha: usize,
        prg: &mut Prg,
    ) -> (IpkpSetup, IpkpSecond) {
        let pi1 = sample::permutation(prg, self.n());
        let setup = self.commit1_with_first(ctx, theta, n_parties, pi1);
        let x_t = self.h.solve_preimage(&self.scale(kappa, &self.y)).expect("syndrome outside the column span");
        let kx = self.scale(kappa, &self.x);
        let parties = &setup.parties;
        let mut pi_kx = kx.clone();
        for p in parties {
            pi_kx = p.perm.apply(&pi_kx);
        }
        let mut offset = self.sub(&x_t, &pi_kx);
        for p in parties[alpha + 1..].iter().rev() {
            offset = p.perm.apply_inv(&offset);
        }
        let mut chain = self.forward(&parties[..alpha], kx);
        let prev = chain.last().cloned().unwrap_or_else(|| self.scale(kappa, &self.x));
        let pa = &parties[alpha];
        let s_alpha = self.add(&self.add(&pa.perm.apply(&prev), &pa.mask), &offset);
        chain.push(s_alpha.clone());
        chain.extend(self.forward(&parties[alpha + 1..], s_alpha));
        let com2 = com_second(&setup.ctx.salt, &chain);
        (setup, IpkpSecond { chain, com2 })
    }

    pub fn simulate(&self, ctx: Ctx, theta: Seed, n_parties: usize, kappa: u16, alpha: usize, prg: &mut Prg) -> IpkpTranscript {
        let (setup, second) = self.simulate_commit(ctx, theta, n_parties, kappa, alpha, prg);
        let rsp = self.respond(&setup, &second, alpha);
        IpkpTranscript { com1: setup.com1, kappa, com2: second.com2, alpha, rsp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new([3; 32], 0)
    }

    #[test]
    fn chain_composes_to_witness() {
        let (st, pi) = keygen(b"h", b"w", 7, 3, 8);
        assert!(st.is_witness(&pi));
        for n in [1, 2, 5] {
            let s = st.commit1(ctx(), [1; 16], n, &pi);
            let mut agg = s.parties[0].perm.clone();
            for p in &s.parties[1..] {
                agg = p.perm.compose(&agg);
            }
            assert_eq!(agg, pi);
            let sec = st.commit2(&s, 3);
            let v = st.forward(&s.parties, alloc::vec![0; 8]).pop().unwrap();
            assert_eq!(sec.chain[n - 1], st.add(&pi.apply(&st.scale(3, &st.x)), &v));
        }
    }

    #[test]
    fn honest_transcripts_verify() {
        let (st, pi) = keygen(b"h", b"w", 7, 3, 8);
        for kappa in 1..7 {
            for alpha in 0..4 {
                let t = st.prove(ctx(), [2; 16], 4, &pi, kappa, alpha);
                assert_eq!(t.rsp.pi1.is_some(), alpha != 0);
                assert!(st.verify(&ctx(), 4, &t));
                let mut bad = t.clone();
                bad.kappa = kappa % 6 + 1;
                assert!(!st.verify(&ctx(), 4, &bad));
                let mut bad = t.clone();
                bad.rsp.z1[0] = (bad.rsp.z1[0] + 1) % 7;
                assert!(!st.verify(&ctx(), 4, &bad));
            }
        }
    }

    #[test]
    fn extraction_and_simulation() {
        let (st, pi) = keygen(b"h4", b"w4", 7, 3, 8);
        let ts = [(2, 0), (2, 3), (5, 0), (5, 3)].map(|(k, a)| st.prove(ctx(), [9; 16], 4, &pi, k, a));
        let got = st.extract(&ctx(), 4, &ts).unwrap();
        assert!(st.is_witness(&got));
        let mut prg = Prg::new(&[0; 32], b"sim", b"");
        for alpha in 0..4 {
            let t = st.simulate(ctx(), prg.seed(), 4, 1 + alpha as u16, alpha, &mut prg);
            assert!(st.verify(&ctx(), 4, &t));
        }
    }
}
