use alloc::vec::Vec;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Shake256, Shake256Reader};

/// Security parameter in bits.
pub const LAMBDA: usize = 128;
pub const SEED_BYTES: usize = LAMBDA / 8;
pub const DIGEST_BYTES: usize = 2 * LAMBDA / 8;

pub type Seed = [u8; SEED_BYTES];
pub type Commitment = [u8; DIGEST_BYTES];
pub type Digest = [u8; DIGEST_BYTES];
pub type Salt = [u8; DIGEST_BYTES];

/// Domain separation prefixes.
pub mod tag {
    pub const COM_LEAF: u8 = 0x01;
    pub const COM_ROOT: u8 = 0x02;
    pub const COM_SECOND: u8 = 0x03;
    pub const CHALLENGE_1: u8 = 0x04;
    pub const CHALLENGE_2: u8 = 0x05;
    pub const TREE_NODE: u8 = 0x06;
    pub const PRG: u8 = 0x07;
}

/// Incremental SHAKE256 with a domain tag and salt already absorbed.
#[derive(Clone)]
pub struct Hasher(Shake256);

impl Hasher {
    pub fn new(domain: u8, salt: &Salt) -> Self {
        let mut h = Shake256::default();
        h.update(&[domain]);
        h.update(salt);
        Self(h)
    }

    pub fn update(&mut self, data: &[u8]) -> &mut Self {
        self.0.update(data);
        self
    }

    pub fn finish(self) -> Digest {
        let mut out = [0u8; DIGEST_BYTES];
        self.0.finalize_xof().read(&mut out);
        out
    }

    pub fn finish_seed(self) -> Seed {
        let mut out = [0u8; SEED_BYTES];
        self.0.finalize_xof().read(&mut out);
        out
    }
}

/// `Com(r, m)`: digest of `0x01 || salt || r || m`.
pub fn commit(salt: &Salt, r: &Seed, m: &[u8]) -> Commitment {
    let mut h = Hasher::new(tag::COM_LEAF, salt);
    h.update(r).update(m);
    h.finish()
}

/// Domain-separated expandable stream with rejection-sampling helpers.
pub struct Prg {
    reader: Shake256Reader,
    buf: [u8; 136],
    pos: usize,
}

impl Prg {
    /// Stream from `0x07 || salt || seed || label`.
    pub fn new(salt: &Salt, seed: &[u8], label: &[u8]) -> Self {
        let mut h = Shake256::default();
        h.update(&[tag::PRG]);
        h.update(salt);
        h.update(&(seed.len() as u32).to_le_bytes());
        h.update(seed);
        h.update(label);
        Self { reader: h.finalize_xof(), buf: [0; 136], pos: 136 }
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        let mut done = 0;
        while done < out.len() {
            if self.pos == self.buf.len() {
                self.reader.read(&mut self.buf);
                self.pos = 0;
            }
            let take = (out.len() - done).min(self.buf.len() - self.pos);
            out[done..done + take].copy_from_slice(&self.buf[self.pos..self.pos + take]);
            self.pos += take;
            done += take;
        }
    }

    pub fn bytes(&mut self, n: usize) -> Vec<u8> {
        let mut v = alloc::vec![0u8; n];
        self.fill(&mut v);
        v
    }

    pub fn seed(&mut self) -> Seed {
        let mut s = [0u8; SEED_BYTES];
        self.fill(&mut s);
        s
    }

    pub fn u64(&mut self) -> u64 {
        let mut b = [0u8; 8];
        self.fill(&mut b);
        u64::from_le_bytes(b)
    }

    /// Uniform `k`-bit value, `k <= 64`, consuming `ceil(k/8)` bytes.
    pub fn bits(&mut self, k: u32) -> u64 {
        if k == 0 {
            return 0;
        }
        let nb = k.div_ceil(8) as usize;
        let mut b = [0u8; 8];
        self.fill(&mut b[..nb]);
        let v = u64::from_le_bytes(b);
        if k == 64 {
            v
        } else {
            v & ((1u64 << k) - 1)
        }
    }

    /// Uniform value in `[0, n)` by rejection on the minimal bit width.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        if n == 1 {
            return 0;
        }
        let k = 64 - (n - 1).leading_zeros();
        loop {
            let v = self.bits(k);
            if v < n {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commit_is_deterministic_and_sensitive() {
        let salt = [1u8; 32];
        let r = [2u8; 16];
        let a = commit(&salt, &r, b"message");
        assert_eq!(a, commit(&salt, &r, b"message"));
        assert_ne!(a, commit(&salt, &r, b"messagf"));
        assert_ne!(a, commit(&salt, &[3u8; 16], b"message"));
        assert_ne!(a, commit(&[0u8; 32], &r, b"message"));
    }

    #[test]
    fn prg_prefix_property_and_domains() {
        let salt = [0u8; 32];
        let mut a = Prg::new(&salt, b"seed", b"x");
        let mut b = Prg::new(&salt, b"seed", b"x");
        let long = a.bytes(32);
        let short = b.bytes(16);
        assert_eq!(&long[..16], &short[..]);
        let mut c = Prg::new(&salt, b"seed", b"y");
        assert_ne!(c.bytes(32), long);
    }

    #[test]
    fn below_stays_in_range() {
        let mut p = Prg::new(&[0u8; 32], b"r", b"");
        for n in 1..200u64 {
            for _ in 0..20 {
                assert!(p.below(n) < n);
            }
        }
    }
}
