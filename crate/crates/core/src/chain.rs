//! The masked permutation chain shared by every protocol: per-party
//! transforms and masks, the forward `s` chain, the backward `t` chain from
//! the public target `r`, and the meet-in-the-middle replay.

use crate::algebra::{echelon_basis, rank_weight, BitVec};
use crate::codes::{ext_bytes, ParityCheck};
use crate::primitives::combinatorics::{rank_subset, subset_rank_bits, unrank_subset};
use crate::primitives::tree::{recover_one, TreeError};
use crate::primitives::{
    commit, sample, tag, BitReader, BitWriter, Commitment, Hasher, Isometry, Permutation, Prg, Salt, Seed,
    SeedTree,
};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

/// A weight notion together with the transforms preserving it.
pub trait Metric {
    type Vector: Clone + PartialEq + Debug;
    type Transform: Clone + Debug;

    fn omega(&self) -> usize;
    fn zero(&self) -> Self::Vector;
    fn add(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector;
    fn weight(&self, x: &Self::Vector) -> usize;
    fn sample_vector(&self, prg: &mut Prg) -> Self::Vector;
    fn sample_weighted(&self, prg: &mut Prg) -> Self::Vector;
    fn sample_transform(&self, prg: &mut Prg) -> Self::Transform;
    fn apply(&self, t: &Self::Transform, x: &Self::Vector) -> Self::Vector;
    fn apply_inv(&self, t: &Self::Transform, x: &Self::Vector) -> Self::Vector;
    /// `a ∘ b`.
    fn compose(&self, a: &Self::Transform, b: &Self::Transform) -> Self::Transform;
    fn to_bytes(&self, x: &Self::Vector) -> Vec<u8>;

    fn full_bits(&self) -> usize;
    fn write_full(&self, w: &mut BitWriter, x: &Self::Vector);
    fn read_full(&self, r: &mut BitReader) -> Option<Self::Vector>;
    /// Encoded size of a weight-`omega` vector.
    fn short_bits(&self) -> usize;
    /// Returns false if `x` does not have weight `omega`.
    fn write_short(&self, w: &mut BitWriter, x: &Self::Vector) -> bool;
    fn read_short(&self, r: &mut BitReader) -> Option<Self::Vector>;
}

/// Hamming weight on `F2^n` with coordinate permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hamming {
    pub n: usize,
    pub omega: usize,
}

impl Metric for Hamming {
    type Vector = BitVec;
    type Transform = Permutation;

    fn omega(&self) -> usize {
        self.omega
    }
    fn zero(&self) -> BitVec {
        BitVec::zeros(self.n)
    }
    fn add(&self, a: &BitVec, b: &BitVec) -> BitVec {
        a.xor(b)
    }
    fn weight(&self, x: &BitVec) -> usize {
        x.weight()
    }
    fn sample_vector(&self, prg: &mut Prg) -> BitVec {
        sample::bitvec(prg, self.n)
    }
    fn sample_weighted(&self, prg: &mut Prg) -> BitVec {
        sample::fixed_weight(prg, self.n, self.omega)
    }
    fn sample_transform(&self, prg: &mut Prg) -> Permutation {
        sample::permutation(prg, self.n)
    }
    fn apply(&self, t: &Permutation, x: &BitVec) -> BitVec {
        t.apply_bits(x)
    }
    fn apply_inv(&self, t: &Permutation, x: &BitVec) -> BitVec {
        t.apply_inv_bits(x)
    }
    fn compose(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }
    fn to_bytes(&self, x: &BitVec) -> Vec<u8> {
        x.to_bytes()
    }

    fn full_bits(&self) -> usize {
        self.n
    }
    fn write_full(&self, w: &mut BitWriter, x: &BitVec) {
        w.write_bitvec(x)
    }
    fn read_full(&self, r: &mut BitReader) -> Option<BitVec> {
        r.read_bitvec(self.n)
    }
    fn short_bits(&self) -> usize {
        subset_rank_bits(self.n as u64, self.omega as u64)
    }
    fn write_short(&self, w: &mut BitWriter, x: &BitVec) -> bool {
        if x.weight() != self.omega {
            return false;
        }
        let pos: Vec<usize> = x.iter_ones().collect();
        w.write_biguint(&rank_subset(&pos), self.short_bits());
        true
    }
    fn read_short(&self, r: &mut BitReader) -> Option<BitVec> {
        let rank = r.read_biguint(self.short_bits())?;
        let pos = unrank_subset(&rank, self.n, self.omega)?;
        let mut x = BitVec::zeros(self.n);
        for p in pos {
            x.set(p, true);
        }
        Some(x)
    }
}

/// Rank weight on `GF(2^m)^n` with isometries `x -> P x Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rank {
    pub m: u32,
    pub n: usize,
    pub omega: usize,
}

impl Rank {
    fn pivot_bits(&self) -> usize {
        subset_rank_bits(self.m as u64, self.omega as u64)
    }
}

impl Metric for Rank {
    type Vector = Vec<u64>;
    type Transform = Isometry;

    fn omega(&self) -> usize {
        self.omega
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.n]
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }
    fn weight(&self, x: &Vec<u64>) -> usize {
        rank_weight(x)
    }
    fn sample_vector(&self, prg: &mut Prg) -> Vec<u64> {
        sample::ext_vector(prg, self.m, self.n)
    }
    fn sample_weighted(&self, prg: &mut Prg) -> Vec<u64> {
        sample::rank_weight_vector(prg, self.m, self.n, self.omega)
    }
    fn sample_transform(&self, prg: &mut Prg) -> Isometry {
        sample::isometry(prg, self.m as usize, self.n)
    }
    fn apply(&self, t: &Isometry, x: &Vec<u64>) -> Vec<u64> {
        t.apply(x)
    }
    fn apply_inv(&self, t: &Isometry, x: &Vec<u64>) -> Vec<u64> {
        t.apply_inv(x)
    }
    fn compose(&self, a: &Isometry, b: &Isometry) -> Isometry {
        a.compose(b)
    }
    fn to_bytes(&self, x: &Vec<u64>) -> Vec<u8> {
        ext_bytes(self.m, x)
    }

    fn full_bits(&self) -> usize {
        self.m as usize * self.n
    }
    fn write_full(&self, w: &mut BitWriter, x: &Vec<u64>) {
        for &c in x {
            w.write_bits(c, self.m as usize);
        }
    }
    fn read_full(&self, r: &mut BitReader) -> Option<Vec<u64>> {
        (0..self.n).map(|_| r.read_bits(self.m as usize)).collect()
    }
    fn short_bits(&self) -> usize {
        let (m, w) = (self.m as usize, self.omega);
        self.pivot_bits() + w * (m - w) + w * self.n
    }
    /// Pivot set, then the non-pivot bits of each reduced echelon basis
    /// vector, then each coordinate's coefficients in that basis.
    fn write_short(&self, w: &mut BitWriter, x: &Vec<u64>) -> bool {
        let basis = echelon_basis(x);
        if basis.len() != self.omega {
            return false;
        }
        let leads: Vec<usize> = basis.iter().map(|b| 63 - b.leading_zeros() as usize).collect();
        let mut pivots = leads.clone();
        pivots.sort_unstable();
        w.write_biguint(&rank_subset(&pivots), self.pivot_bits());
        let free: Vec<usize> = (0..self.m as usize).filter(|p| !pivots.contains(p)).collect();
        for &b in &basis {
            for &p in &free {
                w.write_bit(b >> p & 1 == 1);
            }
        }
        for &c in x {
            for &l in &leads {
                w.write_bit(c >> l & 1 == 1);
            }
        }
        true
    }
    fn read_short(&self, r: &mut BitReader) -> Option<Vec<u64>> {
        let m = self.m as usize;
        let rank = r.read_biguint(self.pivot_bits())?;
        let pivots = unrank_subset(&rank, m, self.omega)?;
        let leads: Vec<usize> = pivots.iter().rev().copied().collect();
        let free: Vec<usize> = (0..m).filter(|p| !pivots.contains(p)).collect();
        let mut basis = Vec::with_capacity(self.omega);
        for &lead in &leads {
            let mut b = 1u64 << lead;
            for &p in &free {
                if r.read_bit()? {
                    if p > lead {
                        return None;
                    }
                    b |= 1 << p;
                }
            }
            basis.push(b);
        }
        let mut x = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let mut c = 0u64;
            for b in &basis {
                if r.read_bit()? {
                    c ^= b;
                }
            }
            x.push(c);
        }
        if echelon_basis(&x) != basis {
            return None;
        }
        Some(x)
    }
}

/// Hash context of one repetition: the salt and a tree/label domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub salt: Salt,
    pub domain: u32,
}

impl Ctx {
    pub fn new(salt: Salt, domain: u32) -> Self {
        Self { salt, domain }
    }

    pub(crate) fn label(&self, name: &[u8], i: usize) -> Vec<u8> {
        let mut l = name.to_vec();
        l.extend_from_slice(&self.domain.to_le_bytes());
        l.extend_from_slice(&(i as u32).to_le_bytes());
        l
    }
}

/// `(phi_i, r_{1,i})` derived from the party seed `theta_i`.
pub fn leaf_secrets(ctx: &Ctx, i: usize, theta: &Seed) -> (Seed, Seed) {
    let mut p = Prg::new(&ctx.salt, theta, &ctx.label(b"leaf", i));
    (p.seed(), p.seed())
}

/// One party of the chain.
#[derive(Clone, Debug)]
pub struct Party<M: Metric> {
    pub theta: Seed,
    pub phi: Seed,
    pub r1: Seed,
    pub transform: M::Transform,
    pub mask: M::Vector,
    pub com: Commitment,
}

impl<M: Metric> Party<M> {
    pub fn derive(metric: &M, ctx: &Ctx, i: usize, theta: Seed) -> Self {
        let (phi, r1) = leaf_secrets(ctx, i, &theta);
        let mut p = Prg::new(&ctx.salt, &phi, b"party");
        let transform = metric.sample_transform(&mut p);
        let mask = metric.sample_vector(&mut p);
        let com = commit(&ctx.salt, &r1, &phi);
        Self { theta, phi, r1, transform, mask, com }
    }
}

/// Public chain target `r` derived from `xi`.
pub fn target<M: Metric>(metric: &M, ctx: &Ctx, xi: &Seed) -> M::Vector {
    let mut p = Prg::new(&ctx.salt, xi, &ctx.label(b"target", 0));
    metric.sample_vector(&mut p)
}

pub fn com_root(salt: &Salt, syn: &[u8], r: &[u8], leaves: &[Commitment]) -> Commitment {
    let mut h = Hasher::new(tag::COM_ROOT, salt);
    h.update(syn).update(r);
    for c in leaves {
        h.update(c);
    }
    h.finish()
}

pub fn com_second<M: Metric>(metric: &M, salt: &Salt, z1: &M::Vector, chain: &[M::Vector]) -> Commitment {
    let mut h = Hasher::new(tag::COM_SECOND, salt);
    h.update(&metric.to_bytes(z1));
    for s in chain {
        h.update(&metric.to_bytes(s));
    }
    h.finish()
}

/// Everything produced from `(theta, xi)`: the former helper's output.
#[derive(Clone, Debug)]
pub struct Setup<M: Metric> {
    pub ctx: Ctx,
    pub theta: Seed,
    pub xi: Seed,
    pub tree: SeedTree,
    pub parties: Vec<Party<M>>,
    pub r: M::Vector,
    /// `u = pi^{-1}[r - v]`.
    pub u: M::Vector,
    pub com1: Commitment,
}

/// Second-round prover state: the committed chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Second<V> {
    pub z1: V,
    /// `s_1 .. s_N`.
    pub chain: Vec<V>,
    pub com2: Commitment,
}

/// Response to the second challenge.
#[derive(Clone, Debug, PartialEq)]
pub struct Response<V> {
    pub z1: V,
    /// Seed-tree opening of every `theta_i` but `theta_alpha`.
    pub opening: Vec<Seed>,
    pub xi: Seed,
    pub z4: V,
    pub com_alpha: Commitment,
}

/// Values recomputed by the verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub com1: Commitment,
    pub com2: Commitment,
    pub weight_ok: bool,
}

impl<M: Metric> Setup<M> {
    /// `syn` maps `u` to the bytes of its syndrome.
    pub fn new(
        metric: &M,
        ctx: Ctx,
        theta: Seed,
        xi: Seed,
        n_parties: usize,
        syn: impl FnOnce(&M::Vector) -> Vec<u8>,
    ) -> Self {
        let tree = SeedTree::build(&ctx.salt, ctx.domain, &theta, n_parties);
        let parties: Vec<Party<M>> =
            (0..n_parties).map(|i| Party::derive(metric, &ctx, i, *tree.leaf(i))).collect();
        let r = target(metric, &ctx, &xi);
        let u = backward(metric, &parties, r.clone(), 0);
        let u = metric.apply_inv(&parties[0].transform, &metric.add(&u, &parties[0].mask));
        let coms: Vec<Commitment> = parties.iter().map(|p| p.com).collect();
        let com1 = com_root(&ctx.salt, &syn(&u), &metric.to_bytes(&r), &coms);
        Self { ctx, theta, xi, tree, parties, r, u, com1 }
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    /// Aggregate transform `pi_N ∘ .. ∘ pi_1`.
    pub fn aggregate_transform(&self, metric: &M) -> M::Transform {
        let mut t = self.parties[0].transform.clone();
        for p in &self.parties[1..] {
            t = metric.compose(&p.transform, &t);
        }
        t
    }

    /// Aggregate mask `v`: the chain run from zero.
    pub fn aggregate_mask(&self, metric: &M) -> M::Vector {
        forward(metric, &self.parties, metric.zero()).pop().unwrap()
    }

    /// Backward chain value `t_alpha` from `r`.
    pub fn t_at(&self, metric: &M, alpha: usize) -> M::Vector {
        backward(metric, &self.parties, self.r.clone(), alpha)
    }

    pub fn commit2(&self, metric: &M, x: &M::Vector) -> Second<M::Vector> {
        let z1 = metric.add(&self.u, x);
        let chain = forward(metric, &self.parties, z1.clone());
        let com2 = com_second(metric, &self.ctx.salt, &z1, &chain);
        Second { z1, chain, com2 }
    }

    /// Chain started from `u + x1` whose value at `alpha` instead continues
    /// the chain started from `u + x2`.
    pub fn commit2_blend(&self, metric: &M, x1: &M::Vector, x2: &M::Vector, alpha: usize) -> Second<M::Vector> {
        let z1 = metric.add(&self.u, x1);
        let mut chain = forward(metric, &self.parties, z1.clone());
        let alt = forward(metric, &self.parties[..=alpha], metric.add(&self.u, x2));
        let mut s = alt[alpha].clone();
        chain[alpha] = s.clone();
        for i in alpha + 1..self.parties.len() {
            let p = &self.parties[i];
            s = metric.add(&metric.apply(&p.transform, &s), &p.mask);
            chain[i] = s.clone();
        }
        let com2 = com_second(metric, &self.ctx.salt, &z1, &chain);
        Second { z1, chain, com2 }
    }

    /// Opens everything but party `alpha`; `z4 = s_alpha - t_alpha`, which
    /// equals `pi_alpha .. pi_1 [x]` on an honest chain.
    pub fn respond(&self, metric: &M, second: &Second<M::Vector>, alpha: usize) -> Response<M::Vector> {
        let z4 = metric.add(&second.chain[alpha], &self.t_at(metric, alpha));
        Response {
            z1: second.z1.clone(),
            opening: self.tree.open_one(alpha),
            xi: self.xi,
            z4,
            com_alpha: self.parties[alpha].com,
        }
    }
}

/// `s_0 = start`, `s_i = T_i[s_{i-1}] + v_i`; returns `s_1 ..`.
pub fn forward<M: Metric>(metric: &M, parties: &[Party<M>], start: M::Vector) -> Vec<M::Vector> {
    let mut s = start;
    parties
        .iter()
        .map(|p| {
            s = metric.add(&metric.apply(&p.transform, &s), &p.mask);
            s.clone()
        })
        .collect()
}

/// `t_N = end`, `t_{i-1} = T_i^{-1}[t_i - v_i]`, down to `t_alpha` (zero-based).
pub fn backward<M: Metric>(metric: &M, parties: &[Party<M>], end: M::Vector, alpha: usize) -> M::Vector {
    let mut t = end;
    for p in parties[alpha + 1..].iter().rev() {
        t = metric.apply_inv(&p.transform, &metric.add(&t, &p.mask));
    }
    t
}

/// `T_1^{-1} ∘ .. ∘ T_alpha^{-1} [z]`.
pub fn pull_back<M: Metric>(metric: &M, parties: &[Party<M>], alpha: usize, z: &M::Vector) -> M::Vector {
    let mut x = z.clone();
    for p in parties[..=alpha].iter().rev() {
        x = metric.apply_inv(&p.transform, &x);
    }
    x
}

/// `T_alpha ∘ .. ∘ T_1 [x]`.
pub fn push<M: Metric>(metric: &M, parties: &[Party<M>], alpha: usize, x: &M::Vector) -> M::Vector {
    let mut z = x.clone();
    for p in &parties[..=alpha] {
        z = metric.apply(&p.transform, &z);
    }
    z
}

/// Verifier-side recomputation. `syn` is the syndrome bytes of
/// `H z1 - target`, which the caller computes from `rsp.z1`.
pub fn replay<M: Metric>(
    metric: &M,
    ctx: &Ctx,
    n_parties: usize,
    alpha: usize,
    rsp: &Response<M::Vector>,
    syn: &[u8],
) -> Result<Replay, TreeError> {
    let leaves = recover_one(&ctx.salt, ctx.domain, n_parties, alpha, &rsp.opening)?;
    let mut parties: Vec<Option<Party<M>>> = Vec::with_capacity(n_parties);
    for (i, l) in leaves.into_iter().enumerate() {
        parties.push(l.map(|th| Party::derive(metric, ctx, i, th)));
    }
    let r = target(metric, ctx, &rsp.xi);
    let mut t = r.clone();
    for p in parties[alpha + 1..].iter().rev() {
        let p = p.as_ref().unwrap();
        t = metric.apply_inv(&p.transform, &metric.add(&t, &p.mask));
    }
    let mut chain = Vec::with_capacity(n_parties);
    let mut s = rsp.z1.clone();
    for p in &parties {
        s = match p {
            None => metric.add(&t, &rsp.z4),
            Some(p) => metric.add(&metric.apply(&p.transform, &s), &p.mask),
        };
        chain.push(s.clone());
    }
    let coms: Vec<Commitment> = parties.iter().map(|p| p.as_ref().map_or(rsp.com_alpha, |p| p.com)).collect();
    Ok(Replay {
        com1: com_root(&ctx.salt, syn, &metric.to_bytes(&r), &coms),
        com2: com_second(metric, &ctx.salt, &rsp.z1, &chain),
        weight_ok: metric.weight(&rsp.z4) == metric.omega(),
    })
}

/// Extraction failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtractError {
    /// A transcript does not verify.
    Rejected,
    /// Transcripts disagree on shared commitments or openings.
    Inconsistent,
    /// The challenge pattern does not cover the tree of transcripts.
    Challenges,
}

/// All party seeds, from openings hiding distinct indices.
pub fn union_leaves(ctx: &Ctx, n_parties: usize, openings: &[(usize, &[Seed])]) -> Result<Vec<Seed>, ExtractError> {
    let mut all: Vec<Option<Seed>> = vec![None; n_parties];
    for &(alpha, op) in openings {
        let leaves = recover_one(&ctx.salt, ctx.domain, n_parties, alpha, op).map_err(|_| ExtractError::Rejected)?;
        for (slot, l) in all.iter_mut().zip(leaves) {
            match (*slot, l) {
                (Some(a), Some(b)) if a != b => return Err(ExtractError::Inconsistent),
                (None, Some(b)) => *slot = Some(b),
                _ => {}
            }
        }
    }
    all.into_iter().collect::<Option<Vec<_>>>().ok_or(ExtractError::Challenges)
}

/// Parties rebuilt from two responses with distinct `alpha`.
pub fn parties_from<M: Metric>(
    metric: &M,
    ctx: &Ctx,
    n_parties: usize,
    openings: &[(usize, &[Seed])],
) -> Result<Vec<Party<M>>, ExtractError> {
    let seeds = union_leaves(ctx, n_parties, openings)?;
    Ok(seeds.into_iter().enumerate().map(|(i, th)| Party::derive(metric, ctx, i, th)).collect())
}

/// `(com1, ch, com2, alpha, rsp)`; `ch` is `()` for the helper protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct Transcript<C, V> {
    pub com1: Commitment,
    pub ch: C,
    pub com2: Commitment,
    pub alpha: usize,
    pub rsp: Response<V>,
}

/// Setup whose root commitment binds `H u`.
pub fn setup_for<M: Metric, C: ParityCheck<M::Vector>>(
    metric: &M,
    h: &C,
    ctx: Ctx,
    theta: Seed,
    xi: Seed,
    n_parties: usize,
) -> Setup<M> {
    Setup::new(metric, ctx, theta, xi, n_parties, |u| h.syndrome_bytes(&h.syndrome(u)))
}

/// `b1 ∧ b2 ∧ b3` against the syndrome `y`.
pub fn verify_for<M: Metric, C: ParityCheck<M::Vector>, Ch>(
    metric: &M,
    h: &C,
    y: &C::Syndrome,
    ctx: &Ctx,
    n_parties: usize,
    t: &Transcript<Ch, M::Vector>,
) -> bool {
    if t.alpha >= n_parties {
        return false;
    }
    let syn = h.syndrome_add(&h.syndrome(&t.rsp.z1), y);
    match replay(metric, ctx, n_parties, t.alpha, &t.rsp, &h.syndrome_bytes(&syn)) {
        Ok(r) => r.com1 == t.com1 && r.com2 == t.com2 && r.weight_ok,
        Err(_) => false,
    }
}

/// Witness-free commitment: the chain follows a preimage of `y` up to
/// `alpha` and a random weight-`omega` vector from `alpha` on.
#[allow(clippy::too_many_arguments)]
pub fn simulate_commit_for<M: Metric, C: ParityCheck<M::Vector>>(
    metric: &M,
    h: &C,
    y: &C::Syndrome,
    ctx: Ctx,
    theta: Seed,
    xi: Seed,
    n_parties: usize,
    alpha: usize,
    prg: &mut Prg,
) -> (Setup<M>, Second<M::Vector>) {
    let setup = setup_for(metric, h, ctx, theta, xi, n_parties);
    let x1 = h.preimage(y).expect("syndrome outside the column span");
    let x2 = metric.sample_weighted(prg);
    let second = setup.commit2_blend(metric, &x1, &x2, alpha);
    (setup, second)
}

/// Offset `c` and the pulled-back responses `d_j` of a differential solution.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffParts<V, S> {
    pub c: S,
    pub d: Vec<V>,
}

/// Extractor shared by the structured protocols. Each group holds the
/// target syndrome of one first challenge and two transcripts answering
/// `alpha_1` and `alpha_2`, identical across groups.
pub fn diff_extract<M: Metric, C: ParityCheck<M::Vector>, Ch>(
    metric: &M,
    h: &C,
    ctx: &Ctx,
    n_parties: usize,
    groups: &[(C::Syndrome, &Transcript<Ch, M::Vector>, &Transcript<Ch, M::Vector>)],
) -> Result<DiffParts<M::Vector, C::Syndrome>, ExtractError> {
    let (y1, a1, b1) = groups.first().ok_or(ExtractError::Challenges)?;
    for (y, a, b) in groups {
        if !verify_for(metric, h, y, ctx, n_parties, a) || !verify_for(metric, h, y, ctx, n_parties, b) {
            return Err(ExtractError::Rejected);
        }
        if a.com1 != a1.com1 || b.com1 != a1.com1 || a.com2 != b.com2 {
            return Err(ExtractError::Inconsistent);
        }
        if a.alpha != a1.alpha || b.alpha != b1.alpha || a.alpha == b.alpha {
            return Err(ExtractError::Challenges);
        }
    }
    let alpha = a1.alpha;
    let parties = parties_from(metric, ctx, n_parties, &[(a1.alpha, &a1.rsp.opening), (b1.alpha, &b1.rsp.opening)])?;
    let c1 = h.syndrome_add(&h.syndrome(&a1.rsp.z1), y1);
    let c2 = metric.add(&push(metric, &parties, alpha, &a1.rsp.z1), &a1.rsp.z4);
    for (y, a, _) in groups {
        if h.syndrome_add(&h.syndrome(&a.rsp.z1), y) != c1
            || metric.add(&push(metric, &parties, alpha, &a.rsp.z1), &a.rsp.z4) != c2
        {
            return Err(ExtractError::Inconsistent);
        }
    }
    let c = h.syndrome_add(&h.syndrome(&pull_back(metric, &parties, alpha, &c2)), &c1);
    let d = groups.iter().map(|(_, a, _)| pull_back(metric, &parties, alpha, &a.rsp.z4)).collect();
    Ok(DiffParts { c, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new([9; 32], 3)
    }

    fn check_meet<M: Metric>(metric: &M, x: M::Vector, n: usize) {
        let s = Setup::new(metric, ctx(), [1; 16], [2; 16], n, |_| Vec::new());
        // pi[u] + v = r
        let pu = metric.apply(&s.aggregate_transform(metric), &s.u);
        assert_eq!(metric.add(&pu, &s.aggregate_mask(metric)), s.r);
        let sec = s.commit2(metric, &x);
        for alpha in 0..n {
            let rsp = s.respond(metric, &sec, alpha);
            assert_eq!(rsp.z4, push(metric, &s.parties, alpha, &x));
            assert_eq!(pull_back(metric, &s.parties, alpha, &rsp.z4), x);
            let rep = replay(metric, &s.ctx, n, alpha, &rsp, &[]).unwrap();
            assert_eq!(rep.com1, s.com1);
            assert_eq!(rep.com2, sec.com2);
            assert!(rep.weight_ok);
        }
    }

    #[test]
    fn hamming_meet_in_the_middle() {
        let m = Hamming { n: 40, omega: 7 };
        let mut p = Prg::new(&[0; 32], b"x", b"");
        for n in [1, 2, 5, 8] {
            check_meet(&m, m.sample_weighted(&mut p), n);
        }
    }

    #[test]
    fn rank_meet_in_the_middle() {
        let m = Rank { m: 13, n: 9, omega: 3 };
        let mut p = Prg::new(&[0; 32], b"x", b"");
        for n in [1, 3, 4] {
            check_meet(&m, m.sample_weighted(&mut p), n);
        }
    }

    #[test]
    fn single_party_aggregates_are_the_party() {
        let m = Hamming { n: 16, omega: 3 };
        let s = Setup::new(&m, ctx(), [4; 16], [5; 16], 1, |_| Vec::new());
        assert_eq!(s.aggregate_transform(&m), s.parties[0].transform);
        assert_eq!(s.aggregate_mask(&m), s.parties[0].mask);
    }

    #[test]
    fn short_encodings_round_trip() {
        let mut p = Prg::new(&[0; 32], b"enc", b"");
        let h = Hamming { n: 200, omega: 17 };
        let r = Rank { m: 11, n: 8, omega: 4 };
        for _ in 0..20 {
            let x = h.sample_weighted(&mut p);
            let y = r.sample_weighted(&mut p);
            let mut w = BitWriter::new();
            assert!(h.write_short(&mut w, &x));
            assert!(r.write_short(&mut w, &y));
            assert_eq!(w.bit_len(), h.short_bits() + r.short_bits());
            let bytes = w.finish();
            let mut rd = BitReader::new(&bytes);
            assert_eq!(h.read_short(&mut rd).unwrap(), x);
            assert_eq!(r.read_short(&mut rd).unwrap(), y);
            rd.finish().unwrap();
        }
        assert_eq!(r.short_bits() - r.pivot_bits(), 4 * (11 - 4) + 4 * 8);
    }

    #[test]
    fn short_encoding_rejects_wrong_weight() {
        let r = Rank { m: 11, n: 8, omega: 4 };
        let mut w = BitWriter::new();
        assert!(!r.write_short(&mut w, &vec![1; 8]));
        let h = Hamming { n: 10, omega: 2 };
        assert!(!h.write_short(&mut w, &BitVec::zeros(10)));
    }

    #[test]
    fn union_needs_two_distinct_hidden_indices() {
        let s = Setup::new(&Hamming { n: 8, omega: 1 }, ctx(), [4; 16], [5; 16], 6, |_| Vec::new());
        let a = s.tree.open_one(1);
        let b = s.tree.open_one(4);
        let all = union_leaves(&s.ctx, 6, &[(1, &a), (4, &b)]).unwrap();
        assert_eq!(all, s.tree.leaves());
        assert_eq!(union_leaves(&s.ctx, 6, &[(1, &a), (1, &a)]), Err(ExtractError::Challenges));
    }
}
