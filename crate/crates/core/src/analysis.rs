//! Parameter registry, soundness errors, the KZ20 forgery cost and the size
//! formulas of the signature tables.

use crate::numeric::log2_ratio;
use crate::primitives::combinatorics::binomial;
use crate::primitives::LAMBDA;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

pub use crate::protocols::irsl::{reduction_loss_rank, reduction_loss_rank_exact, reduction_loss_rank_exponent};
pub use crate::protocols::qcsd::{reduction_loss, reduction_loss_exact};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeId {
    /// Three-round helper scheme over `F2` with cut-and-choose.
    SdHelper,
    /// Three-round helper scheme in the rank metric.
    RsdHelper,
    Ipkp,
    Qcsd,
    /// IRSL with `M = 1`.
    Irsd,
    Irsl,
}

impl SchemeId {
    pub fn five_round(self) -> bool {
        !matches!(self, SchemeId::SdHelper | SchemeId::RsdHelper)
    }

    pub fn label(self) -> &'static str {
        match self {
            SchemeId::SdHelper => "SD-Helper",
            SchemeId::RsdHelper => "RSD-Helper",
            SchemeId::Ipkp => "IPKP",
            SchemeId::Qcsd => "QCSD",
            SchemeId::Irsd => "IRSD",
            SchemeId::Irsl => "IRSL",
        }
    }
}

/// One registered parameter set. Unused fields are zero.
///
/// For IPKP `m` is the number of rows of `H` and `n` the permutation size.
/// For the helper schemes `tau` and `m_prime` are stored as published.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamSet {
    pub name: &'static str,
    pub scheme: SchemeId,
    pub q: u64,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub omega: usize,
    pub big_m: usize,
    pub delta: u32,
    pub n_parties: usize,
    pub tau: usize,
    pub m_prime: usize,
    /// Published signature size, kB.
    pub published_sig_kb: f64,
    /// Published public-key size, kB.
    pub published_pk_kb: f64,
}

const BASE: ParamSet = ParamSet {
    name: "",
    scheme: SchemeId::Ipkp,
    q: 2,
    m: 0,
    n: 0,
    k: 0,
    omega: 0,
    big_m: 1,
    delta: 0,
    n_parties: 0,
    tau: 0,
    m_prime: 0,
    published_sig_kb: 0.0,
    published_pk_kb: 0.0,
};

const SD: ParamSet = ParamSet { scheme: SchemeId::SdHelper, n: 1190, k: 595, omega: 132, published_pk_kb: 0.1, ..BASE };
const RSD: ParamSet = ParamSet { scheme: SchemeId::RsdHelper, m: 31, n: 30, k: 15, omega: 9, published_pk_kb: 0.1, ..BASE };
const IPKP: ParamSet = ParamSet { scheme: SchemeId::Ipkp, q: 997, m: 28, n: 61, published_pk_kb: 0.1, ..BASE };
const QCSD: ParamSet = ParamSet { scheme: SchemeId::Qcsd, n: 1306, k: 653, omega: 132, delta: 17, ..BASE };
const IRSD: ParamSet = ParamSet { scheme: SchemeId::Irsd, m: 37, n: 34, k: 17, omega: 9, delta: 10, published_pk_kb: 0.1, ..BASE };
const IRSL: ParamSet = ParamSet { scheme: SchemeId::Irsl, m: 37, n: 34, k: 17, omega: 10, delta: 40, big_m: 5, published_pk_kb: 0.5, ..BASE };

pub static REGISTRY: [ParamSet; 12] = [
    ParamSet { name: "ipkp-fast", n_parties: 32, tau: 42, published_sig_kb: 10.0, ..IPKP },
    ParamSet { name: "ipkp-short", n_parties: 256, tau: 31, published_sig_kb: 8.9, ..IPKP },
    ParamSet { name: "sd-helper-fast", n_parties: 8, tau: 49, m_prime: 187, published_sig_kb: 19.6, ..SD },
    ParamSet { name: "sd-helper-short", n_parties: 32, tau: 28, m_prime: 389, published_sig_kb: 14.8, ..SD },
    ParamSet { name: "qcsd-fast", n_parties: 32, tau: 42, big_m: 22, published_sig_kb: 15.1, published_pk_kb: 1.8, ..QCSD },
    ParamSet { name: "qcsd-short", n_parties: 256, tau: 33, big_m: 12, published_sig_kb: 13.5, published_pk_kb: 1.0, ..QCSD },
    ParamSet { name: "rsd-helper-fast", n_parties: 8, tau: 49, m_prime: 187, published_sig_kb: 17.2, ..RSD },
    ParamSet { name: "rsd-helper-short", n_parties: 32, tau: 28, m_prime: 389, published_sig_kb: 13.5, ..RSD },
    ParamSet { name: "irsd-fast", n_parties: 32, tau: 37, published_sig_kb: 12.6, ..IRSD },
    ParamSet { name: "irsd-short", n_parties: 512, tau: 25, published_sig_kb: 10.2, ..IRSD },
    ParamSet { name: "irsl-fast", n_parties: 64, tau: 23, published_sig_kb: 8.4, ..IRSL },
    ParamSet { name: "irsl-short", n_parties: 1024, tau: 14, published_sig_kb: 6.1, ..IRSL },
];

pub fn lookup(name: &str) -> Option<&'static ParamSet> {
    REGISTRY.iter().find(|p| p.name == name)
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `sum_{i=r}^{tau} (1/c1)^i ((c1-1)/c1)^{tau-i} C(tau, i)`.
pub fn p1(r: usize, tau: usize, c1: &BigUint) -> BigRational {
    assert!(r <= tau);
    let c1m = c1 - 1u32;
    let mut num = BigUint::zero();
    for i in r..=tau {
        num += binomial(tau as u64, i as u64) * Pow::pow(&c1m, (tau - i) as u64);
    }
    ratio(num, Pow::pow(c1, tau as u64))
}

/// Optimal split of the KZ20 forgery.
#[derive(Clone, Debug, PartialEq)]
pub struct AttackCostReport {
    pub tau_star: usize,
    pub cost: BigRational,
    pub log2_cost: f64,
    /// `log2(1 / P1)` at `tau_star`.
    pub log2_first: f64,
    /// `log2(C2^{tau - tau_star})`.
    pub log2_second: f64,
}

/// `min_r 1/P1(r, tau, c1) + c2^{tau - r}`; `c2 = None` stands for an infinite
/// second challenge space.
pub fn kz20_cost(tau: usize, c1: &BigUint, c2: Option<&BigUint>) -> AttackCostReport {
    let mut best: Option<AttackCostReport> = None;
    for r in 0..=tau {
        let first = p1(r, tau, c1).recip();
        let second = match c2 {
            Some(c2) => ratio(Pow::pow(c2, (tau - r) as u64), BigUint::one()),
            None if r == tau => BigRational::one(),
            None => continue,
        };
        let cost = first.clone() + second.clone();
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(AttackCostReport {
                tau_star: r,
                log2_cost: log2_ratio(&cost),
                log2_first: log2_ratio(&first),
                log2_second: log2_ratio(&second),
                cost,
            });
        }
    }
    best.unwrap()
}

/// Smallest `tau` whose KZ20 cost reaches `2^lambda`.
pub fn find_min_tau(lambda: u32, c1: &BigUint, c2: &BigUint) -> usize {
    let target = BigRational::from_integer(BigInt::one() << lambda as usize);
    (0..).find(|&tau| kz20_cost(tau, c1, Some(c2)).cost >= target).unwrap()
}

/// Size of the first challenge space used in the KZ20 bound.
pub fn first_challenge_space(p: &ParamSet) -> Option<BigUint> {
    match p.scheme {
        SchemeId::Ipkp => Some(BigUint::from(p.q - 1)),
        SchemeId::Qcsd => Some(BigUint::from((p.big_m * p.k) as u64)),
        SchemeId::Irsd | SchemeId::Irsl => Some(Pow::pow(&BigUint::from(p.q), (p.big_m * p.k) as u64) - 1u32),
        SchemeId::SdHelper | SchemeId::RsdHelper => None,
    }
}

/// KZ20 cost of a five-round set with `C2 = N`.
pub fn kz20_for(p: &ParamSet) -> Option<AttackCostReport> {
    let c1 = first_challenge_space(p)?;
    Some(kz20_cost(p.tau, &c1, Some(&BigUint::from(p.n_parties))))
}

/// Per-repetition soundness error of the interactive protocol.
pub fn soundness_error(p: &ParamSet) -> BigRational {
    let n = p.n_parties as u64;
    let base = ratio(BigUint::one(), BigUint::from(n));
    let tail = |den: BigUint| {
        let num = BigUint::from(n - 1) * BigUint::from(p.delta.saturating_sub(1));
        ratio(num, BigUint::from(n) * den)
    };
    match p.scheme {
        SchemeId::SdHelper | SchemeId::RsdHelper => base,
        SchemeId::Ipkp => base + ratio(BigUint::from(n - 1), BigUint::from(n * (p.q - 1))),
        SchemeId::Qcsd => base + tail(BigUint::from((p.big_m * p.k) as u64)),
        SchemeId::Irsd | SchemeId::Irsl => base + tail(first_challenge_space(p).unwrap()),
    }
}

fn lg(x: f64) -> f64 {
    libm::log2(x)
}

/// Signature size in bits from the table formula of the scheme.
pub fn signature_size(p: &ParamSet) -> f64 {
    signature_size_tau(p, p.tau)
}

pub fn signature_size_tau(p: &ParamSet, tau: usize) -> f64 {
    let l = LAMBDA as f64;
    let (n, m, w) = (p.n as f64, p.m as f64, p.omega as f64);
    let big_n = lg(p.n_parties as f64);
    let t = tau as f64;
    let cut = if tau == 0 { 0.0 } else { 3.0 * l * lg(p.m_prime as f64 / t) };
    match p.scheme {
        SchemeId::Ipkp => 5.0 * l + t * (n * lg(p.q as f64) + n * lg(n) + l * big_n + 2.0 * l),
        SchemeId::Qcsd => 5.0 * l + t * (1.5 * n + l * big_n + 2.0 * l),
        SchemeId::SdHelper => 3.0 * l + t * (1.5 * n + l * big_n + 2.0 * l + cut),
        SchemeId::RsdHelper => 3.0 * l + t * (m * n + w * (m + n - w) + l * big_n + 2.0 * l + cut),
        SchemeId::Irsd | SchemeId::Irsl => 5.0 * l + t * (m * n + w * (m + n - w) + l * big_n + 2.0 * l),
    }
}

/// Public key: a `2 lambda`-bit matrix seed and the packed syndromes.
pub fn public_key_bits(p: &ParamSet) -> usize {
    let syn = match p.scheme {
        SchemeId::Ipkp => p.m as usize * field_bits(p.q),
        SchemeId::SdHelper | SchemeId::Qcsd => p.big_m * (p.n - p.k),
        SchemeId::RsdHelper | SchemeId::Irsd | SchemeId::Irsl => p.big_m * p.m as usize * (p.n - p.k),
    };
    2 * LAMBDA + syn
}

/// Bits per `F_q` element.
pub fn field_bits(q: u64) -> usize {
    (u64::BITS - (q - 1).leading_zeros()) as usize
}

pub fn bits_to_kb(bits: f64) -> f64 {
    bits / 8000.0
}

/// Rows of the report tables.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub set: &'static ParamSet,
    pub pk_bits: usize,
    pub formula_bits: f64,
    pub log2_soundness: f64,
    pub kz20: Option<AttackCostReport>,
    /// `log2` of the reduction loss (QCSD, IRSL) where one applies.
    pub log2_loss: Option<f64>,
}

pub fn report(p: &'static ParamSet) -> ReportRow {
    let log2_loss = match p.scheme {
        SchemeId::Qcsd => Some(reduction_loss(p.n as u64, p.k as u64, p.omega as u64, p.big_m as u64, p.delta)),
        SchemeId::Irsl | SchemeId::Irsd => Some(reduction_loss_rank(
            p.q,
            p.m as i64,
            p.n as i64,
            p.k as i64,
            p.omega as i64,
            p.delta as i64,
        )),
        _ => None,
    };
    ReportRow {
        set: p,
        pk_bits: public_key_bits(p),
        formula_bits: signature_size(p),
        log2_soundness: log2_ratio(&soundness_error(p)),
        kz20: kz20_for(p),
        log2_loss,
    }
}

pub fn report_all() -> Vec<ReportRow> {
    REGISTRY.iter().map(report).collect()
}

/// Sum of the `P1` increments over `r`, which telescopes to one.
pub fn p1_partition_sum(tau: usize, c1: &BigUint) -> BigRational {
    let mut s = BigRational::zero();
    for r in 0..=tau {
        let next = if r == tau { BigRational::zero() } else { p1(r + 1, tau, c1) };
        s += p1(r, tau, c1) - next;
    }
    s
}
