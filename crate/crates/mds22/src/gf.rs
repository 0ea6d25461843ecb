//! Arithmetic in GF(p^m) for prime powers up to 2^16, plus the
//! number-theoretic predicates the constructions need (absolute trace,
//! quadratic character, primitive elements).
//!
//! Elements are encoded as integers in `[0, q)`: the element
//! `c_0 + c_1*x + ... + c_{m-1}*x^{m-1}` is stored as the base-p digit
//! integer with `c_0` the least significant digit. This encoding is the
//! wire format used by the JSON interchange in [`crate::code`].
//!
//! The modulus is a monic irreducible polynomial of degree m over GF(p),
//! stored constant term first. Unless overridden, it defaults to the
//! lexicographically smallest irreducible (compared from the constant
//! term upward), except for a handful of fields where a specific modulus
//! is baked in so that explicit element tables elsewhere in the crate are
//! byte-exact: GF(4): x^2+x+1, GF(9): x^2+1, GF(25): x^2+2,
//! GF(27): x^3+2x^2+1, GF(32): x^5+x^2+1, GF(81): x^4+x^3+x^2+1.

use thiserror::Error;

/// Largest admitted field size.
pub const MAX_Q: u32 = 1 << 16;

/// Multiplication uses log/antilog tables up to this size, schoolbook
/// polynomial arithmetic above it.
const TABLE_LIMIT: u32 = 4096;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus is not a monic irreducible of the required degree")]
    NotIrreducible,
    #[error("field size {0} exceeds the 2^16 cap")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("quadratic character is undefined in even characteristic")]
    EvenCharacteristic,
    #[error("quadratic character of zero requested")]
    ZeroInput,
}

/// A concrete finite field GF(p^m).
///
/// Immutable after construction; all operations are pure, so a context can
/// be shared freely across threads.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    /// Monic irreducible of degree m, constant term first, length m+1.
    modulus: Vec<u16>,
    /// Base-p digits of every element, flattened with stride m.
    digits: Vec<u8>,
    /// Antilog table: exp[i] = g^i for the canonical generator g.
    /// Doubled so that exp[log a + log b] never wraps. Empty when q > 4096.
    exp: Vec<u16>,
    /// Log table: log[exp[i]] = i. log[0] is unused. Empty when q > 4096.
    log: Vec<u16>,
    /// Smallest-encoded element of multiplicative order q-1.
    generator: u16,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for FieldCtx {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factors q as p^m for prime p, if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut n = q;
            let mut m = 0;
            while n.is_multiple_of(p) {
                n /= p;
                m += 1;
            }
            return if n == 1 { Some((p, m)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn trial_factorize(mut n: u32) -> Vec<u32> {
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            primes.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

// --- polynomial helpers over GF(p), coefficients little-endian ---

fn poly_trim(c: &mut Vec<u16>) {
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
}

fn poly_mul(a: &[u16], b: &[u16], p: u32) -> Vec<u16> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u32 * y as u32) % p;
        }
    }
    out.into_iter().map(|x| x as u16).collect()
}

/// Remainder of a modulo the monic polynomial mb.
fn poly_rem(a: &[u16], mb: &[u16], p: u32) -> Vec<u16> {
    let mut r: Vec<u16> = a.to_vec();
    poly_trim(&mut r);
    let d = mb.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap() as u32;
        let shift = r.len() - 1 - d;
        if lead != 0 {
            for (i, &c) in mb.iter().enumerate() {
                let idx = shift + i;
                let sub = (lead * c as u32) % p;
                let cur = r[idx] as u32;
                r[idx] = ((cur + p - sub) % p) as u16;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..=deg/2. Fine at desk scale (p^(deg/2+1) trial divisors).
fn poly_is_irreducible(f: &[u16], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 || *f.last().unwrap() != 1 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // enumerate monic divisors of degree d by their lower coefficients
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                g.push((k % p as u64) as u16);
                k /= p as u64;
            }
            g.push(1);
            let r = poly_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

/// Baked-in moduli for the fields whose representation the explicit
/// element tables in this crate depend on.
fn modulus_override(p: u32, m: u32) -> Option<Vec<u16>> {
    match (p, m) {
        (2, 2) => Some(vec![1, 1, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (5, 2) => Some(vec![2, 0, 1]),
        (3, 3) => Some(vec![1, 0, 2, 1]),
        (2, 5) => Some(vec![1, 0, 1, 0, 0, 1]),
        (3, 4) => Some(vec![1, 0, 1, 1, 1]),
        _ => None,
    }
}

/// Lexicographically smallest monic irreducible of degree m over GF(p),
/// comparing coefficient lists from the constant term upward.
fn default_modulus(p: u32, m: u32) -> Vec<u16> {
    if let Some(f) = modulus_override(p, m) {
        return f;
    }
    if m == 1 {
        return vec![0, 1]; // the polynomial x
    }
    let count = (p as u64).pow(m);
    for idx in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut k = idx;
        for _ in 0..m {
            f.push((k % p as u64) as u16);
            k /= p as u64;
        }
        f.push(1);
        if poly_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible of every degree exists over GF(p)")
}

impl FieldCtx {
    /// Builds GF(p^m) with the default (or overridden) modulus.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u16>>) -> Result<FieldCtx, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m < 1 {
            return Err(GfError::NotIrreducible);
        }
        let q64 = (p as u64).checked_pow(m).ok_or(GfError::FieldTooLarge(u64::MAX))?;
        if q64 > MAX_Q as u64 {
            return Err(GfError::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = match modulus {
            Some(f) => {
                if f.len() != m as usize + 1
                    || f.iter().any(|&c| c as u32 >= p)
                    || !poly_is_irreducible(&f, p)
                {
                    return Err(GfError::NotIrreducible);
                }
                f
            }
            None => default_modulus(p, m),
        };

        let mut digits = vec![0u8; (q as usize) * (m as usize)];
        for v in 0..q {
            let mut k = v;
            for i in 0..m as usize {
                digits[v as usize * m as usize + i] = (k % p) as u8;
                k /= p;
            }
        }

        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            digits,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        ctx.generator = ctx.find_generator();
        if q <= TABLE_LIMIT {
            ctx.build_tables();
        }
        Ok(ctx)
    }

    /// Convenience constructor for GF(q) with q a prime power.
    pub fn of_order(q: u32) -> Result<FieldCtx, GfError> {
        let (p, m) = prime_power(q).ok_or(GfError::NotPrime(q))?;
        FieldCtx::new(p, m, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    #[inline]
    fn digit(&self, v: u16, i: usize) -> u32 {
        self.digits[v as usize * self.m as usize + i] as u32
    }

    fn compose_digits(&self, d: &[u32]) -> u16 {
        let mut v = 0u32;
        for i in (0..self.m as usize).rev() {
            v = v * self.p + d[i] % self.p;
        }
        v as u16
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        let m = self.m as usize;
        let mut d = [0u32; 16];
        for (i, di) in d[..m].iter_mut().enumerate() {
            *di = self.digit(a, i) + self.digit(b, i);
        }
        self.compose_digits(&d[..m])
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            return a;
        }
        let m = self.m as usize;
        let mut d = [0u32; 16];
        for (i, di) in d[..m].iter_mut().enumerate() {
            *di = (self.p - self.digit(a, i)) % self.p;
        }
        self.compose_digits(&d[..m])
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let idx = self.log[a as usize] as usize + self.log[b as usize] as usize;
            return self.exp[idx];
        }
        self.mul_schoolbook(a, b)
    }

    fn mul_schoolbook(&self, a: u16, b: u16) -> u16 {
        let m = self.m as usize;
        let da: Vec<u16> = (0..m).map(|i| self.digit(a, i) as u16).collect();
        let db: Vec<u16> = (0..m).map(|i| self.digit(b, i) as u16).collect();
        let prod = poly_mul(&da, &db, self.p);
        let rem = poly_rem(&prod, &self.modulus, self.p);
        let mut d = [0u32; 16];
        for (i, &c) in rem.iter().enumerate() {
            d[i] = c as u32;
        }
        self.compose_digits(&d[..m])
    }

    pub fn inv(&self, a: u16) -> Result<u16, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        if !self.exp.is_empty() {
            let n = (self.q - 1) as usize;
            return Ok(self.exp[n - self.log[a as usize] as usize]);
        }
        Ok(self.pow(a, (self.q - 2) as u64))
    }

    pub fn div(&self, a: u16, b: u16) -> Result<u16, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let e = e % (self.q as u64 - 1);
        let mut base = a;
        let mut acc = 1u16;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a non-zero element.
    pub fn order(&self, a: u16) -> u32 {
        assert!(a != 0, "order of zero is undefined");
        let mut ord = self.q - 1;
        for r in trial_factorize(self.q - 1) {
            while ord.is_multiple_of(r) && self.pow(a, (ord / r) as u64) == 1 {
                ord /= r;
            }
        }
        ord
    }

    fn find_generator(&self) -> u16 {
        if self.q == 2 {
            return 1;
        }
        let primes = trial_factorize(self.q - 1);
        'outer: for v in 1..self.q {
            let v = v as u16;
            for &r in &primes {
                if self.pow(v, ((self.q - 1) / r) as u64) == 1 {
                    continue 'outer;
                }
            }
            return v;
        }
        unreachable!("GF(q) has a primitive element")
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u16; 2 * n.max(1)];
        let mut log = vec![0u16; self.q as usize];
        let g = self.generator;
        let mut x = 1u16;
        for (i, e) in exp[..n].iter_mut().enumerate() {
            *e = x;
            log[x as usize] = i as u16;
            x = self.mul_schoolbook(x, g);
        }
        let (head, tail) = exp.split_at_mut(n);
        tail.copy_from_slice(&head[..tail.len()]);
        self.exp = exp;
        self.log = log;
    }

    /// The element of smallest integer encoding whose multiplicative order
    /// is q-1. Deterministic per context.
    pub fn primitive_element(&self) -> u16 {
        self.generator
    }

    /// Absolute trace a + a^p + ... + a^(p^(m-1)), an element of the prime
    /// subfield (its encoding is therefore < p).
    pub fn abs_trace(&self, a: u16) -> u16 {
        let mut acc = a;
        let mut x = a;
        for _ in 1..self.m {
            x = self.pow(x, self.p as u64);
            acc = self.add(acc, x);
        }
        debug_assert!((acc as u32) < self.p, "trace must land in the prime subfield");
        acc
    }

    /// Whether a is a non-zero square, via the quadratic character
    /// a^((q-1)/2). Odd characteristic only.
    pub fn is_square(&self, a: u16) -> Result<bool, GfError> {
        if self.p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        if a == 0 {
            return Err(GfError::ZeroInput);
        }
        Ok(self.pow(a, ((self.q - 1) / 2) as u64) == 1)
    }

    /// Embeds a constant from GF(p) (0 <= c < p).
    #[inline]
    pub fn from_int(&self, c: i64) -> u16 {
        let p = self.p as i64;
        (((c % p) + p) % p) as u16
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.q as u16
    }
}

/// Embedding table of `sub` = GF(p^m) into `ext` = GF(p^(km)): maps each
/// sub-element encoding to its image encoding. The embedding sends the
/// canonical root of sub's modulus to the smallest-encoded root of that
/// modulus inside ext, which makes it a deterministic field homomorphism.
pub fn embedding_table(sub: &FieldCtx, ext: &FieldCtx) -> Result<Vec<u16>, GfError> {
    if sub.p != ext.p || !ext.m.is_multiple_of(sub.m) {
        return Err(GfError::FieldMismatch);
    }
    // smallest root of sub.modulus in ext
    let mut root = None;
    'scan: for r in ext.elements() {
        let mut acc = 0u16;
        let mut pw = 1u16;
        for &c in sub.modulus.iter() {
            acc = ext.add(acc, ext.mul(ext.from_int(c as i64), pw));
            pw = ext.mul(pw, r);
        }
        if acc == 0 {
            root = Some(r);
            break 'scan;
        }
    }
    let root = root.ok_or(GfError::NotIrreducible)?;
    let mut table = vec![0u16; sub.q as usize];
    for v in sub.elements() {
        let mut acc = 0u16;
        let mut pw = 1u16;
        for i in 0..sub.m as usize {
            let c = sub.digit(v, i);
            acc = ext.add(acc, ext.mul(ext.from_int(c as i64), pw));
            pw = ext.mul(pw, root);
        }
        table[v as usize] = acc;
    }
    Ok(table)
}
