use core::fmt::Debug;

/// Arithmetic over a finite field whose elements are small copyable values.
pub trait Field: Clone + Debug {
    type Elem: Copy + Eq + Debug + Default;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn neg(&self, a: Self::Elem) -> Self::Elem {
        self.sub(self.zero(), a)
    }
    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
    /// Number of elements.
    fn order(&self) -> u64;
    /// Element from its canonical index in `[0, order)`.
    fn from_index(&self, i: u64) -> Self::Elem;
    fn to_index(&self, a: Self::Elem) -> u64;
}

/// The binary field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Gf2;

impl Field for Gf2 {
    type Elem = u8;
    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }
    fn sub(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }
    fn mul(&self, a: u8, b: u8) -> u8 {
        a & b
    }
    fn inv(&self, a: u8) -> Option<u8> {
        (a == 1).then_some(1)
    }
    fn order(&self) -> u64 {
        2
    }
    fn from_index(&self, i: u64) -> u8 {
        (i & 1) as u8
    }
    fn to_index(&self, a: u8) -> u64 {
        a as u64
    }
}

/// Integers modulo a prime `q < 2^15`, stored as canonical `u16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u16,
}

impl PrimeField {
    /// Returns `None` unless `q` is a prime below `2^15`.
    pub fn new(q: u16) -> Option<Self> {
        if q < 2 || q >= 1 << 15 || !is_prime(q as u64) {
            return None;
        }
        Some(Self { q })
    }

    pub fn modulus(&self) -> u16 {
        self.q
    }

    /// Bits needed to write one element.
    pub fn elem_bits(&self) -> usize {
        bits_for(self.q as u64 - 1)
    }
}

impl Field for PrimeField {
    type Elem = u16;
    fn zero(&self) -> u16 {
        0
    }
    fn one(&self) -> u16 {
        1
    }
    fn add(&self, a: u16, b: u16) -> u16 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    fn sub(&self, a: u16, b: u16) -> u16 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    fn mul(&self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.q as u32) as u16
    }
    fn inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        // Fermat
        let mut r = 1u32;
        let mut b = a as u32;
        let mut e = self.q as u32 - 2;
        let q = self.q as u32;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q;
            }
            b = b * b % q;
            e >>= 1;
        }
        Some(r as u16)
    }
    fn order(&self) -> u64 {
        self.q as u64
    }
    fn from_index(&self, i: u64) -> u16 {
        (i % self.q as u64) as u16
    }
    fn to_index(&self, a: u16) -> u64 {
        a as u64
    }
}

/// `GF(2^m)` for `m <= 63`, elements are bit strings of coefficients in the
/// polynomial basis defined by the reduction polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinExtField {
    m: u32,
    /// Reduction polynomial including the leading `x^m` term.
    poly: u64,
}

impl BinExtField {
    /// Field with the repository's fixed reduction polynomial for `m`.
    pub fn new(m: u32) -> Option<Self> {
        if m == 0 || m > 63 {
            return None;
        }
        Some(Self { m, poly: reduction_poly(m) })
    }

    /// Field with an explicit reduction polynomial; it must be irreducible of degree `m`.
    pub fn with_poly(m: u32, poly: u64) -> Option<Self> {
        if m == 0 || m > 63 || poly >> m != 1 || !is_irreducible(poly) {
            return None;
        }
        Some(Self { m, poly })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn mask(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    fn reduce(&self, mut x: u128) -> u64 {
        let m = self.m;
        let p = self.poly as u128;
        let mut top = 127 - x.leading_zeros().min(127);
        while x >> m != 0 {
            if x >> top & 1 == 1 {
                x ^= p << (top - m);
            }
            top -= 1;
        }
        x as u64
    }
}

impl Field for BinExtField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(clmul(a, b))
    }
    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // a^(2^m - 2)
        let mut r = 1u64;
        let mut b = a;
        for _ in 1..self.m {
            b = self.mul(b, b);
            r = self.mul(r, b);
        }
        Some(r)
    }
    fn order(&self) -> u64 {
        1u64 << self.m
    }
    fn from_index(&self, i: u64) -> u64 {
        i & self.mask()
    }
    fn to_index(&self, a: u64) -> u64 {
        a
    }
}

/// Carry-less product of two 64-bit polynomials.
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut r = 0u128;
    let mut b = b;
    let a = a as u128;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    r
}

fn poly_mulmod(a: u64, b: u64, p: u64) -> u64 {
    let deg = 63 - p.leading_zeros();
    let mut x = clmul(a, b);
    let mut top = 127 - x.leading_zeros().min(127);
    while top >= deg && x != 0 {
        if x >> top & 1 == 1 {
            x ^= (p as u128) << (top - deg);
        }
        if top == 0 {
            break;
        }
        top -= 1;
    }
    x as u64
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            let da = 63 - a.leading_zeros();
            a ^= b << (da - db);
        }
        core::mem::swap(&mut a, &mut b);
    }
    a
}

/// Rabin irreducibility test over F2 for polynomials of degree 1..=63.
pub fn is_irreducible(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let n = 63 - p.leading_zeros();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // x^(2^i) mod p
    let frob = |k: u32| {
        let mut x = 2u64;
        for _ in 0..k {
            x = poly_mulmod(x, x, p);
        }
        x
    };
    if frob(n) != 2 {
        return false;
    }
    let mut d = n;
    let mut primes = [0u32; 8];
    let mut np = 0;
    let mut f = 2;
    while f * f <= d {
        if d % f == 0 {
            primes[np] = f;
            np += 1;
            while d % f == 0 {
                d /= f;
            }
        }
        f += 1;
    }
    if d > 1 {
        primes[np] = d;
        np += 1;
    }
    for &r in &primes[..np] {
        let g = poly_gcd(p, frob(n / r) ^ 2);
        if g != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest irreducible polynomial of degree `d` over F2.
pub fn smallest_irreducible(d: u32) -> u64 {
    assert!((1..=63).contains(&d));
    let base = 1u64 << d;
    (0..base).map(|low| base | low).find(|&p| is_irreducible(p)).unwrap()
}

/// Fixed reduction polynomials; degrees without an entry use the smallest irreducible.
pub fn reduction_poly(m: u32) -> u64 {
    match m {
        31 => (1 << 31) | (1 << 3) | 1,
        37 => (1 << 37) | (1 << 6) | (1 << 4) | (1 << 1) | 1,
        _ => smallest_irreducible(m),
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Number of bits needed to write every integer in `[0, max]`.
pub fn bits_for(max: u64) -> usize {
    (64 - max.leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axioms<F: Field>(f: &F) {
        let n = f.order();
        for i in 0..n {
            let a = f.from_index(i);
            assert_eq!(f.add(a, f.zero()), a);
            assert_eq!(f.mul(a, f.one()), a);
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            if a != f.zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            for j in 0..n {
                let b = f.from_index(j);
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                for k in 0..n {
                    let c = f.from_index(k);
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        axioms(&Gf2);
        axioms(&PrimeField::new(3).unwrap());
        axioms(&PrimeField::new(7).unwrap());
        axioms(&BinExtField::new(2).unwrap());
        axioms(&BinExtField::new(3).unwrap());
    }

    #[test]
    fn fixed_polynomials() {
        assert!(is_irreducible(reduction_poly(31)));
        assert!(is_irreducible(reduction_poly(37)));
        assert_eq!(smallest_irreducible(2), 0b111);
        assert_eq!(smallest_irreducible(3), 0b1011);
        assert_eq!(smallest_irreducible(6), 0b100_0011);
        assert_eq!(smallest_irreducible(17), (1 << 17) | (1 << 3) | 1);
        assert!(!is_irreducible(0b101));
        assert!(!is_irreducible((1 << 4) | 1));
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        // brute-force oracle: no factor of degree 1..=d/2
        for p in 2u64..(1 << 11) {
            let d = 63 - p.leading_zeros();
            let mut reducible = false;
            for f in 2u64..p {
                let df = 63 - f.leading_zeros();
                if df == 0 || 2 * df > d {
                    continue;
                }
                if poly_mod(p, f) == 0 {
                    reducible = true;
                    break;
                }
            }
            assert_eq!(is_irreducible(p), !reducible && d >= 1, "p = {p:b}");
        }
    }

    fn poly_mod(mut a: u64, b: u64) -> u64 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            a ^= b << (63 - a.leading_zeros() - db);
        }
        a
    }

    #[test]
    fn gf2_37_inverse_roundtrip() {
        let f = BinExtField::new(37).unwrap();
        let mut a = 0x1234_5678_9u64 & f.mask();
        for _ in 0..200 {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1);
            a = f.mul(a, 0x1f) ^ 3;
        }
    }

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(997).is_some());
        assert!(PrimeField::new(996).is_none());
        assert!(PrimeField::new(1).is_none());
        assert_eq!(PrimeField::new(997).unwrap().elem_bits(), 10);
    }
}
