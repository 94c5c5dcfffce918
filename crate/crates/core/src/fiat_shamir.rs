//! Salted Fiat-Shamir signatures. Five-round schemes keep both challenge
//! rounds: `h1` binds every `com1`, `h2` binds `h1` and every `com2`. The
//! helper scheme prepares `M'` setups, `h1` picks `tau` of them to execute and
//! the rest are opened through a master seed tree.
//!
//! Byte layout: `salt ‖ h1 ‖ h2 ‖ [master opening] ‖ responses`, bit-packed and
//! zero-padded to a byte once at the end.

use crate::algebra::{BinExtField, BitVec, PrimeField};
use crate::analysis::{field_bits, ParamSet, SchemeId};
use crate::chain::{self, Ctx, Hamming, Metric, Rank, Response};
use crate::codes::ParityCheck;
use crate::primitives::tree::{opening_len_one, opening_nodes, recover};
use crate::primitives::{
    challenge, tag, BitReader, BitWriter, Commitment, Digest, Hasher, Permutation, Prg, Salt, Seed, SeedTree,
    DIGEST_BYTES, SEED_BYTES,
};
use crate::protocols::ipkp::{self, IpkpResponse, IpkpStatement};
use crate::protocols::irsl::{self, IrslStatement, IrslWitness};
use crate::protocols::qcsd::{self, QcsdStatement};
use crate::protocols::sd_helper::{self, Statement as HelperStatement};
use alloc::vec::Vec;

/// Signing attempts before a run of rank defects is reported.
pub const MAX_ATTEMPTS: u32 = 64;

/// Tree domain of the helper scheme's master tree.
const MASTER_DOMAIN: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyError {
    /// Structural parameters rejected by the code constructors.
    Params,
    /// Public-key bytes of the wrong length or with non-canonical fields.
    Encoding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignError {
    /// Every attempt hit a rank defect in `x_gamma`.
    RankDefect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseError {
    Length,
    Value,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Sd(sd_helper::SdStatement),
    Rsd(sd_helper::RsdStatement),
    Ipkp(IpkpStatement),
    Qcsd(QcsdStatement),
    Irsl(IrslStatement),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Sd(BitVec),
    Rsd(Vec<u64>),
    Ipkp(Permutation),
    Qcsd(Vec<BitVec>),
    Irsl(IrslWitness),
}

#[derive(Clone, Debug)]
pub struct PublicKey {
    pub set: &'static ParamSet,
    pub seed: [u8; 32],
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecretKey {
    pub set: &'static ParamSet,
    pub seed: [u8; 32],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Responses {
    Hamming(Vec<Response<BitVec>>),
    Rank(Vec<Response<Vec<u64>>>),
    Ipkp(Vec<IpkpResponse>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    pub salt: Salt,
    pub h1: Digest,
    pub h2: Digest,
    /// Master-tree opening of the unexecuted setups (helper scheme only).
    pub master: Vec<Seed>,
    pub responses: Responses,
}

fn sub_seed(sk: &[u8; 32], label: &[u8]) -> [u8; 32] {
    let mut out = [0u8; 32];
    Prg::new(&[0; 32], sk, label).fill(&mut out);
    out
}

fn ext(m: u32) -> BinExtField {
    BinExtField::new(m).expect("extension degree")
}

fn instance_from(set: &'static ParamSet, h_seed: &[u8; 32], w_seed: &[u8; 32]) -> Result<(Instance, Witness), KeyError> {
    let p = set;
    Ok(match p.scheme {
        SchemeId::SdHelper => {
            let (st, x) = sd_helper::keygen_sd(h_seed, w_seed, p.n, p.k, p.omega);
            (Instance::Sd(st), Witness::Sd(x))
        }
        SchemeId::RsdHelper => {
            let (st, x) = sd_helper::keygen_rsd(h_seed, w_seed, p.m, p.n, p.k, p.omega);
            (Instance::Rsd(st), Witness::Rsd(x))
        }
        SchemeId::Ipkp => {
            let (st, pi) = ipkp::keygen(h_seed, w_seed, p.q as u16, p.m as usize, p.n);
            (Instance::Ipkp(st), Witness::Ipkp(pi))
        }
        SchemeId::Qcsd => {
            let (st, xs) = qcsd::keygen(h_seed, w_seed, p.k, p.omega, p.big_m, true).map_err(|_| KeyError::Params)?;
            (Instance::Qcsd(st), Witness::Qcsd(xs))
        }
        SchemeId::Irsd | SchemeId::Irsl => {
            let (st, w) = irsl::keygen(h_seed, w_seed, p.m, p.k, p.omega, p.big_m).map_err(|_| KeyError::Params)?;
            (Instance::Irsl(st), Witness::Irsl(w))
        }
    })
}

/// Key pair from a 32-byte master seed.
pub fn keygen(set: &'static ParamSet, seed: [u8; 32]) -> Result<(PublicKey, SecretKey), KeyError> {
    let (pk, _) = expand_secret(&SecretKey { set, seed })?;
    Ok((pk, SecretKey { set, seed }))
}

/// Public key and witness behind a secret key.
pub fn expand_secret(sk: &SecretKey) -> Result<(PublicKey, Witness), KeyError> {
    let h_seed = sub_seed(&sk.seed, b"keygen/H");
    let w_seed = sub_seed(&sk.seed, b"keygen/w");
    let (instance, w) = instance_from(sk.set, &h_seed, &w_seed)?;
    Ok((PublicKey { set: sk.set, seed: h_seed, instance }, w))
}

fn write_ext(w: &mut BitWriter, m: u32, v: &[u64]) {
    for &c in v {
        w.write_bits(c, m as usize);
    }
}

fn read_ext(r: &mut BitReader, m: u32, len: usize) -> Option<Vec<u64>> {
    (0..len).map(|_| r.read_bits(m as usize)).collect()
}

impl PublicKey {
    /// `seed ‖ packed syndromes`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = BitWriter::new();
        w.write_bytes(&self.seed);
        match &self.instance {
            Instance::Sd(st) => w.write_bitvec(&st.y),
            Instance::Rsd(st) => write_ext(&mut w, st.metric.m, &st.y),
            Instance::Ipkp(st) => {
                let b = field_bits(self.set.q);
                for &c in &st.y {
                    w.write_bits(c as u64, b);
                }
            }
            Instance::Qcsd(st) => st.ys.iter().for_each(|y| w.write_bitvec(y)),
            Instance::Irsl(st) => st.ys.iter().for_each(|y| write_ext(&mut w, st.metric.m, y)),
        }
        w.finish()
    }

    pub fn from_bytes(set: &'static ParamSet, bytes: &[u8]) -> Result<Self, KeyError> {
        let p = set;
        let mut r = BitReader::new(bytes);
        let seed: [u8; 32] = r.read_array().ok_or(KeyError::Encoding)?;
        let e = KeyError::Encoding;
        let instance = match p.scheme {
            SchemeId::SdHelper => {
                let y = r.read_bitvec(p.n - p.k).ok_or(e)?;
                let h = sd_helper::expand_sd(&seed, p.n, p.k);
                Instance::Sd(HelperStatement { metric: Hamming { n: p.n, omega: p.omega }, h, y })
            }
            SchemeId::RsdHelper => {
                let y = read_ext(&mut r, p.m, p.n - p.k).ok_or(e)?;
                let h = sd_helper::expand_rsd(&seed, p.m, p.n, p.k);
                Instance::Rsd(HelperStatement { metric: Rank { m: p.m, n: p.n, omega: p.omega }, h, y })
            }
            SchemeId::Ipkp => {
                let field = PrimeField::new(p.q as u16).ok_or(KeyError::Params)?;
                let b = field_bits(p.q);
                let y: Vec<u16> = (0..p.m).map(|_| r.read_bits(b).map(|v| v as u16)).collect::<Option<_>>().ok_or(e)?;
                if y.iter().any(|&c| c as u64 >= p.q) {
                    return Err(e);
                }
                let (h, x) = ipkp::expand_public(&seed, field, p.m as usize, p.n);
                Instance::Ipkp(IpkpStatement { field, h, x, y })
            }
            SchemeId::Qcsd => {
                let ys = (0..p.big_m).map(|_| r.read_bitvec(p.k)).collect::<Option<Vec<_>>>().ok_or(e)?;
                let h = qcsd::expand(&seed, p.k, true).map_err(|_| KeyError::Params)?;
                Instance::Qcsd(QcsdStatement { metric: Hamming { n: 2 * p.k, omega: p.omega }, h, ys })
            }
            SchemeId::Irsd | SchemeId::Irsl => {
                let ys = (0..p.big_m).map(|_| read_ext(&mut r, p.m, p.k)).collect::<Option<Vec<_>>>().ok_or(e)?;
                let h = irsl::expand(&seed, ext(p.m), p.k).map_err(|_| KeyError::Params)?;
                Instance::Irsl(IrslStatement { metric: Rank { m: p.m, n: 2 * p.k, omega: p.omega }, h, ys })
            }
        };
        r.finish().ok_or(e)?;
        Ok(PublicKey { set, seed, instance })
    }
}

/// Public `xi` of setup `e`.
pub fn public_xi(salt: &Salt, e: usize) -> Seed {
    Prg::new(salt, &(e as u32).to_le_bytes(), b"xi").seed()
}

fn secret_root(salt: &Salt, sk: &[u8; 32], msg: &[u8]) -> Seed {
    let mut h = Hasher::new(tag::PRG, salt);
    h.update(b"sign").update(sk).update(msg);
    h.finish_seed()
}

fn attempt_salt(entropy: &[u8; 32], attempt: u32) -> Salt {
    let mut s = [0u8; DIGEST_BYTES];
    Prg::new(&[0; 32], entropy, &attempt.to_le_bytes()).fill(&mut s);
    s
}

fn digest1(salt: &Salt, msg: &[u8], coms: &[Commitment]) -> Digest {
    let mut h = Hasher::new(tag::CHALLENGE_1, salt);
    h.update(&(msg.len() as u64).to_le_bytes()).update(msg);
    coms.iter().for_each(|c| {
        h.update(c);
    });
    h.finish()
}

fn digest2(salt: &Salt, msg: &[u8], h1: &Digest, coms: &[Commitment]) -> Digest {
    let mut h = Hasher::new(tag::CHALLENGE_2, salt);
    h.update(&(msg.len() as u64).to_le_bytes()).update(msg).update(h1);
    coms.iter().for_each(|c| {
        h.update(c);
    });
    h.finish()
}

fn alphas(salt: &Salt, h2: &Digest, n_parties: usize, count: usize) -> Vec<usize> {
    let mut p = challenge::stream(salt, h2, b"ch2");
    (0..count).map(|_| challenge::alpha(&mut p, n_parties)).collect()
}

fn executed(salt: &Salt, h1: &Digest, m_prime: usize, tau: usize) -> Vec<bool> {
    challenge::subset(&mut challenge::stream(salt, h1, b"ch1"), m_prime, tau)
}

/// The two prover rounds of a five-round protocol.
trait FiveRound {
    type W;
    type Ch;
    type Setup;
    type Second;
    type Rsp;

    fn commit1(&self, w: &Self::W, ctx: Ctx, theta: Seed, xi: Seed, n: usize) -> (Self::Setup, Commitment);
    fn draw(&self, prg: &mut Prg) -> Self::Ch;
    fn commit2(&self, w: &Self::W, s: &Self::Setup, ch: &Self::Ch) -> Option<(Self::Second, Commitment)>;
    fn respond(&self, s: &Self::Setup, sec: &Self::Second, alpha: usize) -> Self::Rsp;
    fn replay(&self, ctx: &Ctx, n: usize, ch: &Self::Ch, alpha: usize, rsp: &Self::Rsp) -> Option<(Commitment, Commitment)>;
}

impl FiveRound for IpkpStatement {
    type W = Permutation;
    type Ch = u16;
    type Setup = ipkp::IpkpSetup;
    type Second = ipkp::IpkpSecond;
    type Rsp = IpkpResponse;

    fn commit1(&self, w: &Permutation, ctx: Ctx, theta: Seed, _xi: Seed, n: usize) -> (Self::Setup, Commitment) {
        let s = IpkpStatement::commit1(self, ctx, theta, n, w);
        let c = s.com1;
        (s, c)
    }
    fn draw(&self, prg: &mut Prg) -> u16 {
        challenge::kappa(prg, self.field.modulus())
    }
    fn commit2(&self, _w: &Permutation, s: &Self::Setup, ch: &u16) -> Option<(Self::Second, Commitment)> {
        let sec = IpkpStatement::commit2(self, s, *ch);
        let c = sec.com2;
        Some((sec, c))
    }
    fn respond(&self, s: &Self::Setup, sec: &Self::Second, alpha: usize) -> IpkpResponse {
        IpkpStatement::respond(self, s, sec, alpha)
    }
    fn replay(&self, ctx: &Ctx, n: usize, ch: &u16, alpha: usize, rsp: &IpkpResponse) -> Option<(Commitment, Commitment)> {
        IpkpStatement::replay(self, ctx, n, *ch, alpha, rsp)
    }
}

fn chain_replay<M: Metric, C: ParityCheck<M::Vector>>(
    metric: &M,
    h: &C,
    y: &C::Syndrome,
    ctx: &Ctx,
    n: usize,
    alpha: usize,
    rsp: &Response<M::Vector>,
) -> Option<(Commitment, Commitment)> {
    if alpha >= n {
        return None;
    }
    let syn = h.syndrome_add(&h.syndrome(&rsp.z1), y);
    let r = chain::replay(metric, ctx, n, alpha, rsp, &h.syndrome_bytes(&syn)).ok()?;
    r.weight_ok.then_some((r.com1, r.com2))
}

impl FiveRound for QcsdStatement {
    type W = Vec<BitVec>;
    type Ch = (usize, usize);
    type Setup = chain::Setup<Hamming>;
    type Second = chain::Second<BitVec>;
    type Rsp = Response<BitVec>;

    fn commit1(&self, _w: &Vec<BitVec>, ctx: Ctx, theta: Seed, xi: Seed, n: usize) -> (Self::Setup, Commitment) {
        let s = self.setup(ctx, theta, xi, n);
        let c = s.com1;
        (s, c)
    }
    fn draw(&self, prg: &mut Prg) -> (usize, usize) {
        challenge::mu_kappa(prg, self.big_m(), self.k())
    }
    fn commit2(&self, w: &Vec<BitVec>, s: &Self::Setup, ch: &(usize, usize)) -> Option<(Self::Second, Commitment)> {
        let sec = QcsdStatement::commit2(self, s, w, *ch);
        let c = sec.com2;
        Some((sec, c))
    }
    fn respond(&self, s: &Self::Setup, sec: &Self::Second, alpha: usize) -> Self::Rsp {
        QcsdStatement::respond(self, s, sec, alpha)
    }
    fn replay(&self, ctx: &Ctx, n: usize, ch: &(usize, usize), alpha: usize, rsp: &Self::Rsp) -> Option<(Commitment, Commitment)> {
        chain_replay(&self.metric, &self.h, &self.target(*ch), ctx, n, alpha, rsp)
    }
}

impl FiveRound for IrslStatement {
    type W = IrslWitness;
    type Ch = BitVec;
    type Setup = chain::Setup<Rank>;
    type Second = chain::Second<Vec<u64>>;
    type Rsp = Response<Vec<u64>>;

    fn commit1(&self, _w: &IrslWitness, ctx: Ctx, theta: Seed, xi: Seed, n: usize) -> (Self::Setup, Commitment) {
        let s = self.setup(ctx, theta, xi, n);
        let c = s.com1;
        (s, c)
    }
    fn draw(&self, prg: &mut Prg) -> BitVec {
        challenge::gamma(prg, self.big_m() * self.k())
    }
    fn commit2(&self, w: &IrslWitness, s: &Self::Setup, ch: &BitVec) -> Option<(Self::Second, Commitment)> {
        let sec = IrslStatement::commit2(self, s, w, ch).ok()?;
        let c = sec.com2;
        Some((sec, c))
    }
    fn respond(&self, s: &Self::Setup, sec: &Self::Second, alpha: usize) -> Self::Rsp {
        IrslStatement::respond(self, s, sec, alpha)
    }
    fn replay(&self, ctx: &Ctx, n: usize, ch: &BitVec, alpha: usize, rsp: &Self::Rsp) -> Option<(Commitment, Commitment)> {
        chain_replay(&self.metric, &self.h, &self.target(ch), ctx, n, alpha, rsp)
    }
}

struct Signed<R> {
    salt: Salt,
    h1: Digest,
    h2: Digest,
    master: Vec<Seed>,
    rsps: Vec<R>,
}

fn sign5<P: FiveRound>(
    p: &P,
    w: &P::W,
    sk: &[u8; 32],
    msg: &[u8],
    n: usize,
    tau: usize,
    entropy: &[u8; 32],
) -> Result<Signed<P::Rsp>, SignError> {
    'attempt: for attempt in 0..MAX_ATTEMPTS {
        let salt = attempt_salt(entropy, attempt);
        let mut thetas = Prg::new(&salt, &secret_root(&salt, sk, msg), b"theta");
        let firsts: Vec<(P::Setup, Commitment)> = (0..tau)
            .map(|e| p.commit1(w, Ctx::new(salt, e as u32), thetas.seed(), public_xi(&salt, e), n))
            .collect();
        let com1: Vec<Commitment> = firsts.iter().map(|f| f.1).collect();
        let h1 = digest1(&salt, msg, &com1);
        let mut chs = challenge::stream(&salt, &h1, b"ch1");
        let mut seconds = Vec::with_capacity(tau);
        for (s, _) in &firsts {
            match p.commit2(w, s, &p.draw(&mut chs)) {
                Some(sec) => seconds.push(sec),
                None => continue 'attempt,
            }
        }
        let com2: Vec<Commitment> = seconds.iter().map(|s| s.1).collect();
        let h2 = digest2(&salt, msg, &h1, &com2);
        let rsps = firsts
            .iter()
            .zip(&seconds)
            .zip(alphas(&salt, &h2, n, tau))
            .map(|(((s, _), (sec, _)), a)| p.respond(s, sec, a))
            .collect();
        return Ok(Signed { salt, h1, h2, master: Vec::new(), rsps });
    }
    Err(SignError::RankDefect)
}

fn verify5<P: FiveRound>(p: &P, msg: &[u8], n: usize, sig: &Signature, rsps: &[P::Rsp]) -> bool {
    let salt = &sig.salt;
    let mut chs = challenge::stream(salt, &sig.h1, b"ch1");
    let al = alphas(salt, &sig.h2, n, rsps.len());
    let mut com1 = Vec::with_capacity(rsps.len());
    let mut com2 = Vec::with_capacity(rsps.len());
    for (e, (rsp, &a)) in rsps.iter().zip(&al).enumerate() {
        let ch = p.draw(&mut chs);
        match p.replay(&Ctx::new(*salt, e as u32), n, &ch, a, rsp) {
            Some((c1, c2)) => {
                com1.push(c1);
                com2.push(c2);
            }
            None => return false,
        }
    }
    digest1(salt, msg, &com1) == sig.h1 && digest2(salt, msg, &sig.h1, &com2) == sig.h2
}

fn sign_helper<M: Metric, C: ParityCheck<M::Vector>>(
    st: &HelperStatement<M, C>,
    x: &M::Vector,
    sk: &[u8; 32],
    msg: &[u8],
    set: &ParamSet,
    entropy: &[u8; 32],
) -> Signed<Response<M::Vector>> {
    let (n, tau, mp) = (set.n_parties, set.tau, set.m_prime);
    let salt = attempt_salt(entropy, 0);
    let master = SeedTree::build(&salt, MASTER_DOMAIN, &secret_root(&salt, sk, msg), mp);
    let setups: Vec<_> = (0..mp)
        .map(|j| st.setup(Ctx::new(salt, j as u32), *master.leaf(j), public_xi(&salt, j), n))
        .collect();
    let com1: Vec<Commitment> = setups.iter().map(|s| s.com1).collect();
    let h1 = digest1(&salt, msg, &com1);
    let mask = executed(&salt, &h1, mp, tau);
    let run: Vec<_> = setups.iter().zip(&mask).filter(|(_, &m)| m).map(|(s, _)| s).collect();
    let seconds: Vec<_> = run.iter().map(|s| st.commit(s, x)).collect();
    let com2: Vec<Commitment> = seconds.iter().map(|s| s.com2).collect();
    let h2 = digest2(&salt, msg, &h1, &com2);
    let rsps = run
        .iter()
        .zip(&seconds)
        .zip(alphas(&salt, &h2, n, tau))
        .map(|((s, sec), a)| st.respond(s, sec, a))
        .collect();
    Signed { salt, h1, h2, master: master.open(&mask), rsps }
}

fn verify_helper<M: Metric, C: ParityCheck<M::Vector>>(
    st: &HelperStatement<M, C>,
    msg: &[u8],
    set: &ParamSet,
    sig: &Signature,
    rsps: &[Response<M::Vector>],
) -> bool {
    let (n, tau, mp) = (set.n_parties, set.tau, set.m_prime);
    let salt = &sig.salt;
    let mask = executed(salt, &sig.h1, mp, tau);
    let Ok(leaves) = recover(salt, MASTER_DOMAIN, mp, &mask, &sig.master) else {
        return false;
    };
    let al = alphas(salt, &sig.h2, n, tau);
    let mut run = rsps.iter().zip(al);
    let mut com1 = Vec::with_capacity(mp);
    let mut com2 = Vec::with_capacity(tau);
    for (j, leaf) in leaves.iter().enumerate() {
        let ctx = Ctx::new(*salt, j as u32);
        match leaf {
            Some(theta) => com1.push(st.setup(ctx, *theta, public_xi(salt, j), n).com1),
            None => {
                let Some((rsp, a)) = run.next() else { return false };
                match chain_replay(&st.metric, &st.h, &st.y, &ctx, n, a, rsp) {
                    Some((c1, c2)) => {
                        com1.push(c1);
                        com2.push(c2);
                    }
                    None => return false,
                }
            }
        }
    }
    run.next().is_none() && digest1(salt, msg, &com1) == sig.h1 && digest2(salt, msg, &sig.h1, &com2) == sig.h2
}

impl<R> Signed<R> {
    fn into_sig(self, wrap: impl FnOnce(Vec<R>) -> Responses) -> Signature {
        Signature { salt: self.salt, h1: self.h1, h2: self.h2, master: self.master, responses: wrap(self.rsps) }
    }
}

/// Signs `msg`; `entropy` seeds the salt (and any restart salts).
pub fn sign(sk: &SecretKey, msg: &[u8], entropy: &[u8; 32]) -> Result<Signature, SignError> {
    let (pk, w) = expand_secret(sk).expect("registered parameter set");
    let p = sk.set;
    let (n, tau) = (p.n_parties, p.tau);
    Ok(match (&pk.instance, &w) {
        (Instance::Sd(st), Witness::Sd(x)) => sign_helper(st, x, &sk.seed, msg, p, entropy).into_sig(Responses::Hamming),
        (Instance::Rsd(st), Witness::Rsd(x)) => sign_helper(st, x, &sk.seed, msg, p, entropy).into_sig(Responses::Rank),
        (Instance::Ipkp(st), Witness::Ipkp(pi)) => sign5(st, pi, &sk.seed, msg, n, tau, entropy)?.into_sig(Responses::Ipkp),
        (Instance::Qcsd(st), Witness::Qcsd(xs)) => sign5(st, xs, &sk.seed, msg, n, tau, entropy)?.into_sig(Responses::Hamming),
        (Instance::Irsl(st), Witness::Irsl(iw)) => sign5(st, iw, &sk.seed, msg, n, tau, entropy)?.into_sig(Responses::Rank),
        _ => unreachable!("instance and witness come from one keygen"),
    })
}

pub fn verify(pk: &PublicKey, msg: &[u8], sig: &Signature) -> bool {
    let p = pk.set;
    let n = p.n_parties;
    let five = p.scheme.five_round();
    if five && (!sig.master.is_empty()) {
        return false;
    }
    match (&pk.instance, &sig.responses) {
        (Instance::Sd(st), Responses::Hamming(r)) => verify_helper(st, msg, p, sig, r),
        (Instance::Rsd(st), Responses::Rank(r)) => verify_helper(st, msg, p, sig, r),
        (Instance::Ipkp(st), Responses::Ipkp(r)) => r.len() == p.tau && verify5(st, msg, n, sig, r),
        (Instance::Qcsd(st), Responses::Hamming(r)) => r.len() == p.tau && verify5(st, msg, n, sig, r),
        (Instance::Irsl(st), Responses::Rank(r)) => r.len() == p.tau && verify5(st, msg, n, sig, r),
        _ => false,
    }
}

/// Parses and verifies; malformed bytes are rejected.
pub fn verify_bytes(pk: &PublicKey, msg: &[u8], bytes: &[u8]) -> bool {
    Signature::from_bytes(pk.set, bytes).is_ok_and(|sig| verify(pk, msg, &sig))
}

fn hamming_metric(p: &ParamSet) -> Hamming {
    match p.scheme {
        SchemeId::Qcsd => Hamming { n: 2 * p.k, omega: p.omega },
        _ => Hamming { n: p.n, omega: p.omega },
    }
}

fn rank_metric(p: &ParamSet) -> Rank {
    match p.scheme {
        SchemeId::Irsd | SchemeId::Irsl => Rank { m: p.m, n: 2 * p.k, omega: p.omega },
        _ => Rank { m: p.m, n: p.n, omega: p.omega },
    }
}

fn perm_bits(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

fn write_chain<M: Metric>(metric: &M, w: &mut BitWriter, rsp: &Response<M::Vector>) {
    metric.write_full(w, &rsp.z1);
    rsp.opening.iter().for_each(|s| w.write_bytes(s));
    assert!(metric.write_short(w, &rsp.z4), "z4 has the wrong weight");
    w.write_bytes(&rsp.com_alpha);
}

fn read_chain<M: Metric>(metric: &M, r: &mut BitReader, n: usize, alpha: usize, xi: Seed) -> Option<Response<M::Vector>> {
    let z1 = metric.read_full(r)?;
    let opening = (0..opening_len_one(n, alpha)).map(|_| r.read_array::<SEED_BYTES>()).collect::<Option<_>>()?;
    let z4 = metric.read_short(r)?;
    let com_alpha = r.read_array()?;
    Some(Response { z1, opening, xi, z4, com_alpha })
}

fn write_ipkp(p: &ParamSet, w: &mut BitWriter, rsp: &IpkpResponse) {
    let b = field_bits(p.q);
    rsp.z1.iter().for_each(|&c| w.write_bits(c as u64, b));
    if let Some(pi) = &rsp.pi1 {
        pi.images().iter().for_each(|&i| w.write_bits(i as u64, perm_bits(p.n)));
    }
    rsp.opening.iter().for_each(|s| w.write_bytes(s));
    w.write_bytes(&rsp.com_alpha);
}

fn read_ipkp(p: &ParamSet, r: &mut BitReader, alpha: usize) -> Option<IpkpResponse> {
    let b = field_bits(p.q);
    let z1: Vec<u16> = (0..p.n).map(|_| r.read_bits(b).map(|v| v as u16)).collect::<Option<_>>()?;
    let pi1 = if alpha != 0 {
        let img: Vec<u32> = (0..p.n).map(|_| r.read_bits(perm_bits(p.n)).map(|v| v as u32)).collect::<Option<_>>()?;
        Some(Permutation::from_images(img)?)
    } else {
        None
    };
    let opening = (0..opening_len_one(p.n_parties, alpha)).map(|_| r.read_array::<SEED_BYTES>()).collect::<Option<_>>()?;
    let com_alpha = r.read_array()?;
    Some(IpkpResponse { z1, pi1, opening, com_alpha })
}

impl Signature {
    pub fn to_bytes(&self, set: &ParamSet) -> Vec<u8> {
        let mut w = BitWriter::new();
        w.write_bytes(&self.salt);
        w.write_bytes(&self.h1);
        w.write_bytes(&self.h2);
        self.master.iter().for_each(|s| w.write_bytes(s));
        match &self.responses {
            Responses::Hamming(r) => r.iter().for_each(|x| write_chain(&hamming_metric(set), &mut w, x)),
            Responses::Rank(r) => r.iter().for_each(|x| write_chain(&rank_metric(set), &mut w, x)),
            Responses::Ipkp(r) => r.iter().for_each(|x| write_ipkp(set, &mut w, x)),
        }
        w.finish()
    }

    pub fn from_bytes(set: &ParamSet, bytes: &[u8]) -> Result<Self, ParseError> {
        let mut r = BitReader::new(bytes);
        let e = ParseError::Length;
        let salt: Salt = r.read_array().ok_or(e)?;
        let h1: Digest = r.read_array().ok_or(e)?;
        let h2: Digest = r.read_array().ok_or(e)?;
        let n = set.n_parties;
        let al = alphas(&salt, &h2, n, set.tau);
        let (master, ids): (Vec<Seed>, Vec<usize>) = if set.scheme.five_round() {
            (Vec::new(), (0..set.tau).collect())
        } else {
            let mask = executed(&salt, &h1, set.m_prime, set.tau);
            let len = opening_nodes(set.m_prime, &mask).len();
            let master = (0..len).map(|_| r.read_array::<SEED_BYTES>()).collect::<Option<_>>().ok_or(e)?;
            (master, (0..set.m_prime).filter(|&j| mask[j]).collect())
        };
        let v = ParseError::Value;
        let responses = match set.scheme {
            SchemeId::SdHelper | SchemeId::Qcsd => {
                let m = hamming_metric(set);
                Responses::Hamming(
                    ids.iter()
                        .zip(&al)
                        .map(|(&j, &a)| read_chain(&m, &mut r, n, a, public_xi(&salt, j)))
                        .collect::<Option<_>>()
                        .ok_or(v)?,
                )
            }
            SchemeId::RsdHelper | SchemeId::Irsd | SchemeId::Irsl => {
                let m = rank_metric(set);
                Responses::Rank(
                    ids.iter()
                        .zip(&al)
                        .map(|(&j, &a)| read_chain(&m, &mut r, n, a, public_xi(&salt, j)))
                        .collect::<Option<_>>()
                        .ok_or(v)?,
                )
            }
            SchemeId::Ipkp => Responses::Ipkp(al.iter().map(|&a| read_ipkp(set, &mut r, a)).collect::<Option<_>>().ok_or(v)?),
        };
        r.finish().ok_or(e)?;
        Ok(Signature { salt, h1, h2, master, responses })
    }

    /// Number of repetitions whose IPKP response omits `pi_1`.
    pub fn ipkp_first_party_hidden(&self) -> usize {
        match &self.responses {
            Responses::Ipkp(r) => r.iter().filter(|x| x.pi1.is_none()).count(),
            _ => 0,
        }
    }
}

/// Serialized bit length predicted field by field. `hidden_first` is the number
/// of IPKP repetitions with `alpha = 0`; `master_nodes` the size of the helper
/// master opening.
pub fn layout_bits(set: &ParamSet, hidden_first: usize, master_nodes: usize) -> usize {
    let seed = 8 * SEED_BYTES;
    let com = 8 * DIGEST_BYTES;
    let header = 3 * com;
    let log_n = opening_len_one(set.n_parties, 0);
    let per = |full: usize, short: usize| full + log_n * seed + short + com;
    match set.scheme {
        SchemeId::Ipkp => {
            let base = set.n * field_bits(set.q) + log_n * seed + com;
            header + set.tau * base + (set.tau - hidden_first) * set.n * perm_bits(set.n)
        }
        SchemeId::Qcsd | SchemeId::SdHelper => {
            let m = hamming_metric(set);
            header + master_nodes * seed + set.tau * per(m.full_bits(), m.short_bits())
        }
        SchemeId::RsdHelper | SchemeId::Irsd | SchemeId::Irsl => {
            let m = rank_metric(set);
            header + master_nodes * seed + set.tau * per(m.full_bits(), m.short_bits())
        }
    }
}

/// Public-key length in bytes.
pub fn public_key_len(set: &ParamSet) -> usize {
    crate::analysis::public_key_bits(set).div_ceil(8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lookup;

    fn roundtrip(name: &str) {
        let set = lookup(name).unwrap();
        let (pk, sk) = keygen(set, [9; 32]).unwrap();
        let pkb = pk.to_bytes();
        assert_eq!(pkb.len(), public_key_len(set));
        let pk2 = PublicKey::from_bytes(set, &pkb).unwrap();
        let sig = sign(&sk, b"msg", &[1; 32]).unwrap();
        let bytes = sig.to_bytes(set);
        let back = Signature::from_bytes(set, &bytes).unwrap();
        assert_eq!(back, sig);
        assert!(verify(&pk2, b"msg", &back));
        assert!(!verify(&pk2, b"msh", &back));
        let master = sig.master.len();
        assert_eq!(layout_bits(set, sig.ipkp_first_party_hidden(), master).div_ceil(8), bytes.len());
    }

    #[test]
    fn ipkp_roundtrip() {
        roundtrip("ipkp-fast");
    }

    #[test]
    fn qcsd_roundtrip() {
        roundtrip("qcsd-short");
    }

    #[test]
    fn irsl_roundtrip() {
        roundtrip("irsl-fast");
    }

    #[test]
    fn helper_roundtrip() {
        roundtrip("sd-helper-fast");
        roundtrip("rsd-helper-short");
    }

    #[test]
    fn truncation_and_padding_rejected() {
        let set = lookup("irsd-fast").unwrap();
        let (pk, sk) = keygen(set, [2; 32]).unwrap();
        let mut bytes = sign(&sk, b"", &[0; 32]).unwrap().to_bytes(set);
        assert!(verify_bytes(&pk, b"", &bytes));
        bytes.push(0);
        assert!(!verify_bytes(&pk, b"", &bytes));
        bytes.truncate(bytes.len() - 2);
        assert!(!verify_bytes(&pk, b"", &bytes));
    }
}
