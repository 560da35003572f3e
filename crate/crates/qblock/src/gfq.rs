//! Exact arithmetic in finite fields F_q for prime powers q.
//!
//! Elements are encoded as indices in `[0, q)`, interpreted as base-p digit
//! vectors of the polynomial coordinates (low-order digit first). Index 0 is
//! the additive identity and index 1 the multiplicative identity. For e > 1
//! multiplication goes through precomputed log/antilog tables over a
//! deterministic irreducible modulus, so the model of F_q is reproducible
//! across runs and machines.

use crate::{Error, Result};

/// Fields are precomputed table-driven; this caps the table sizes.
pub const DEFAULT_MAX_ORDER: u64 = 16;

/// An element of F_q, encoded as its base-p digit index.
pub type FieldElement = u8;

/// A concrete model of the finite field F_q = F_{p^e}.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Monic irreducible modulus over F_p, degree e, low-order first.
    /// For e = 1 this is the placeholder `x - 0`.
    modulus: Vec<u8>,
    add_table: Vec<u8>,
    mul_table: Vec<u8>,
    neg_table: Vec<u8>,
    inv_table: Vec<u8>,
    /// log[a] for a != 0, base `generator`.
    log_table: Vec<u32>,
    /// antilog[i] = generator^i for 0 <= i < q-1.
    antilog_table: Vec<u8>,
    generator: u8,
}

/// Returns `Some((p, e))` with q = p^e if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut n = q;
    let mut p = 0u64;
    for d in 2..=q {
        if d * d > q {
            p = n; // n itself is prime
            break;
        }
        if n % d == 0 {
            p = d;
            break;
        }
    }
    let mut e = 0u32;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    if n == 1 {
        Some((p as u32, e))
    } else {
        None
    }
}

fn poly_trim(p: &mut Vec<u8>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_mul(a: &[u8], b: &[u8], p: u32) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u32 * bj as u32) % p;
        }
    }
    let mut out: Vec<u8> = out.into_iter().map(|c| c as u8).collect();
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `m` over F_p.
fn poly_rem(a: &[u8], m: &[u8], p: u32) -> Vec<u8> {
    let mut r: Vec<u8> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() as u32;
        let shift = r.len() - 1 - dm;
        for i in 0..=dm {
            let sub = lead * m[i] as u32 % p;
            let idx = i + shift;
            r[idx] = ((r[idx] as u32 + p - sub) % p) as u8;
        }
        poly_trim(&mut r);
    }
    r
}

fn index_to_poly(idx: u32, p: u32, e: u32) -> Vec<u8> {
    let mut digits = Vec::with_capacity(e as usize);
    let mut n = idx;
    for _ in 0..e {
        digits.push((n % p) as u8);
        n /= p;
    }
    let mut digits = digits;
    poly_trim(&mut digits);
    digits
}

fn poly_to_index(poly: &[u8], p: u32) -> u32 {
    let mut idx = 0u32;
    for &c in poly.iter().rev() {
        idx = idx * p + c as u32;
    }
    idx
}

/// True if the monic polynomial (low-order first) is irreducible over F_p.
/// Checks for roots, then for monic factors of degree up to deg/2 by trial
/// division.
fn is_irreducible(m: &[u8], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for r in 0..p {
        // evaluate at r
        let mut acc = 0u32;
        for &c in m.iter().rev() {
            acc = (acc * r + c as u32) % p;
        }
        if acc == 0 {
            return false;
        }
    }
    if deg <= 3 {
        return true; // a reducible cubic or quadratic has a linear factor
    }
    for d in 2..=deg / 2 {
        // all monic divisor candidates of degree d
        for idx in 0..p.pow(d as u32) {
            let mut cand = index_to_poly(idx, p, d as u32);
            cand.resize(d + 1, 0);
            cand[d] = 1;
            if poly_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds the field F_q with the deterministic modulus (lexicographically
    /// smallest monic irreducible, coefficients compared high-order first).
    pub fn new(q: u64) -> Result<FieldSpec> {
        FieldSpec::with_limit(q, DEFAULT_MAX_ORDER)
    }

    pub fn with_limit(q: u64, limit: u64) -> Result<FieldSpec> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > limit || q > 256 {
            return Err(Error::FieldTooLarge(q, limit.min(256)));
        }
        let q = q as u32;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            // counter ordered so that earlier = smaller high-order-first tuple
            'outer: for hi in 0..p.pow(e) {
                // least significant digit of the counter = constant term, so
                // increasing counters walk the high-order-first lex order
                let mut m = vec![0u8; e as usize + 1];
                m[e as usize] = 1;
                let mut n = hi;
                for i in 0..e as usize {
                    m[i] = (n % p) as u8;
                    n /= p;
                }
                if is_irreducible(&m, p) {
                    found = Some(m);
                    break 'outer;
                }
            }
            found.expect("an irreducible polynomial of every degree exists over F_p")
        };

        let mut spec = FieldSpec {
            p,
            e,
            q,
            modulus,
            add_table: vec![0; (q * q) as usize],
            mul_table: vec![0; (q * q) as usize],
            neg_table: vec![0; q as usize],
            inv_table: vec![0; q as usize],
            log_table: vec![0; q as usize],
            antilog_table: Vec::new(),
            generator: 0,
        };
        spec.build_tables();
        Ok(spec)
    }

    fn raw_add(&self, a: u32, b: u32) -> u32 {
        // digit-wise addition mod p
        let (mut a, mut b, mut pow, mut out) = (a, b, 1u32, 0u32);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * pow;
            a /= self.p;
            b /= self.p;
            pow *= self.p;
        }
        out
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        let pa = index_to_poly(a, self.p, self.e);
        let pb = index_to_poly(b, self.p, self.e);
        let prod = poly_mul(&pa, &pb, self.p);
        let rem = poly_rem(&prod, &self.modulus, self.p);
        poly_to_index(&rem, self.p)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        for a in 0..q {
            for b in 0..q {
                self.add_table[(a * q + b) as usize] = self.raw_add(a, b) as u8;
            }
        }
        for a in 0..q {
            for b in 0..q {
                if self.add_table[(a * q + b) as usize] == 0 {
                    self.neg_table[a as usize] = b as u8;
                }
            }
        }
        // generator: smallest index of multiplicative order q-1
        let ord = |g: u32, f: &FieldSpec| -> u32 {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = f.raw_mul(x, g);
                n += 1;
            }
            n
        };
        let mut generator = 1;
        for g in 1..q {
            if ord(g, self) == q - 1 {
                generator = g;
                break;
            }
        }
        self.generator = generator as u8;
        self.antilog_table = Vec::with_capacity((q - 1) as usize);
        let mut x = 1u32;
        for i in 0..q - 1 {
            self.antilog_table.push(x as u8);
            self.log_table[x as usize] = i;
            x = self.raw_mul(x, generator);
        }
        // multiplication via logs
        for a in 1..q {
            for b in 1..q {
                let s = (self.log_table[a as usize] + self.log_table[b as usize]) % (q - 1);
                self.mul_table[(a * q + b) as usize] = self.antilog_table[s as usize];
            }
        }
        for a in 1..q {
            let i = (q - 1 - self.log_table[a as usize]) % (q - 1);
            self.inv_table[a as usize] = self.antilog_table[i as usize];
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Modulus coefficients, low-order first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add_table[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul_table[a as usize * self.q as usize + b as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(self.inv_table[a as usize])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn log(&self, a: FieldElement) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(self.log_table[a as usize])
    }

    pub fn antilog(&self, i: u32) -> FieldElement {
        self.antilog_table[(i % (self.q - 1)) as usize]
    }
}

/// An injective field homomorphism F_q -> F_{q^m} together with an F_q-basis
/// of the extension, so that F_{q^m}^k can be reread as F_q^{mk}.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    /// map[a] = image of the sub-field element a in the extension.
    map: Vec<u8>,
    /// F_sub-basis of the extension, m = ext.e / sub.e elements.
    basis: Vec<u8>,
    /// coords[x] = the F_sub-coordinates of extension element x w.r.t. `basis`.
    coords: Vec<Vec<u8>>,
}

impl FieldEmbedding {
    /// Number of basis elements (degree of the extension over the subfield).
    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Image of the subfield element `a` in the extension.
    pub fn apply(&self, a: FieldElement) -> FieldElement {
        self.map[a as usize]
    }

    /// F_sub-coordinates of the extension element `x` w.r.t. the basis.
    pub fn coords(&self, x: FieldElement) -> &[FieldElement] {
        &self.coords[x as usize]
    }
}

/// Builds the deterministic embedding of `sub` into `ext`.
///
/// The image of the canonical generator-of-representation `x` of `sub` is the
/// smallest root of `sub`'s modulus in `ext`; the basis is the power basis of
/// the smallest extension element whose F_sub-combinations are a bijection
/// onto `ext`.
pub fn embed(sub: &FieldSpec, ext: &FieldSpec) -> Result<FieldEmbedding> {
    if sub.p() != ext.p() {
        return Err(Error::IncompatibleFields(format!(
            "characteristics differ: {} vs {}",
            sub.p(),
            ext.p()
        )));
    }
    if ext.e() % sub.e() != 0 {
        return Err(Error::IncompatibleFields(format!(
            "degree {} does not divide {}",
            sub.e(),
            ext.e()
        )));
    }
    let m = (ext.e() / sub.e()) as usize;
    let map = if sub.e() == 1 {
        // constants already sit inside the extension's digit encoding
        (0..sub.q() as u8).collect::<Vec<_>>()
    } else {
        // image of x = smallest root of sub's modulus in ext
        let mut root = None;
        for cand in 0..ext.q() as u8 {
            let mut acc: u8 = 0;
            for &c in sub.modulus().iter().rev() {
                acc = ext.add(ext.mul(acc, cand), c);
            }
            if acc == 0 {
                root = Some(cand);
                break;
            }
        }
        let root = root.expect("the subfield modulus splits in the extension");
        (0..sub.q())
            .map(|a| {
                let digits = index_to_poly(a, sub.p(), sub.e());
                let mut acc: u8 = 0;
                for &c in digits.iter().rev() {
                    acc = ext.add(ext.mul(acc, root), c);
                }
                acc
            })
            .collect()
    };

    // power basis of the smallest element generating ext over sub
    for beta in 0..ext.q() as u8 {
        let mut basis = Vec::with_capacity(m);
        let mut pw: u8 = 1;
        for _ in 0..m {
            basis.push(pw);
            pw = ext.mul(pw, beta);
        }
        let mut coords: Vec<Option<Vec<u8>>> = vec![None; ext.q() as usize];
        let mut bijective = true;
        let mut combo = vec![0u8; m];
        'combos: loop {
            let mut x: u8 = 0;
            for (i, &c) in combo.iter().enumerate() {
                x = ext.add(x, ext.mul(map[c as usize], basis[i]));
            }
            if coords[x as usize].is_some() {
                bijective = false;
                break 'combos;
            }
            coords[x as usize] = Some(combo.clone());
            // advance the odometer
            for digit in combo.iter_mut() {
                *digit += 1;
                if (*digit as u32) < sub.q() {
                    continue 'combos;
                }
                *digit = 0;
            }
            break;
        }
        if bijective {
            return Ok(FieldEmbedding {
                map,
                basis,
                coords: coords.into_iter().map(|c| c.unwrap()).collect(),
            });
        }
    }
    unreachable!("a primitive element of the extension always exists")
}
