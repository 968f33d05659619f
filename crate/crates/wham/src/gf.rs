//! Exact arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded as indices in `[0, q)`: the base-p digits of the
//! index, low-to-high, are the coefficients of the residue polynomial.
//! Index 0 is the additive identity and index 1 the multiplicative one.
//! All operations are table lookups precomputed at field construction.

use crate::Error;

/// Hard upper bound on the field size; everything here is desk scale.
pub const MAX_Q: u32 = 256;

/// An element of a [`Field`], stored as its index in `[0, q)`.
///
/// Elements carry no back-reference to their field; arithmetic goes
/// through the owning [`Field`] which asserts the index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub(crate) u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u16 {
        self.0 as u16
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A finite field GF(p^m) with q = p^m ≤ 256.
///
/// Immutable after construction; all operations are pure lookups, so a
/// `Field` can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct Field {
    p: u16,
    m: u32,
    q: u16,
    /// Monic modulus polynomial, low-to-high, length m+1. For m = 1 this
    /// is `[0, 1]` (i.e. x) unless an explicit one was supplied.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two coefficient vectors over GF(p) (plain convolution).
fn poly_mul_p(a: &[u8], b: &[u8], p: u16) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let v = (out[i + j] as u32 + ai as u32 * bj as u32) % p as u32;
            out[i + j] = v as u8;
        }
    }
    out
}

/// Reduce `a` modulo the monic polynomial `q_poly` over GF(p), in place
/// on a copy; returns coefficients of the remainder (len < deg q_poly).
fn poly_mod_p(a: &[u8], q_poly: &[u8], p: u16) -> Vec<u8> {
    let deg_q = q_poly.len() - 1;
    let mut rem: Vec<u8> = a.to_vec();
    while rem.len() > deg_q {
        let lead = *rem.last().unwrap() as u32;
        let shift = rem.len() - 1 - deg_q;
        if lead != 0 {
            // q_poly is monic, so the quotient digit is just `lead`.
            for (k, &qc) in q_poly.iter().enumerate() {
                let idx = shift + k;
                let sub = (lead * qc as u32) % p as u32;
                let cur = rem[idx] as u32;
                rem[idx] = ((cur + p as u32 - sub) % p as u32) as u8;
            }
        }
        debug_assert_eq!(*rem.last().unwrap(), 0);
        rem.pop();
    }
    rem
}

fn poly_is_zero(a: &[u8]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Irreducibility of a monic polynomial over GF(p) by trial division
/// with every monic polynomial of degree 1..=deg/2.
fn is_irreducible(poly: &[u8], p: u16) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    if poly[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=deg / 2 {
        // All monic divisor candidates of degree d: p^d coefficient tuples.
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut v = n;
            for _ in 0..d {
                cand.push((v % p as u64) as u8);
                v /= p as u64;
            }
            cand.push(1);
            if poly_is_zero(&poly_mod_p(poly, &cand, p)) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest (low-to-high coefficient order) monic
/// irreducible polynomial of degree m over GF(p).
fn default_modulus(p: u16, m: u32) -> Vec<u8> {
    debug_assert!(m >= 2);
    let deg = m as usize;
    // Enumerate lower coefficient tuples in lexicographic order: c_0 is the
    // most significant comparison position.
    let mut coeffs = vec![0u8; deg];
    loop {
        let mut cand = coeffs.clone();
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
        // Odometer with the last position fastest preserves lex order.
        let mut pos = deg;
        loop {
            debug_assert!(pos > 0, "an irreducible of every degree exists");
            pos -= 1;
            if coeffs[pos] as u16 + 1 < p {
                coeffs[pos] += 1;
                for c in &mut coeffs[pos + 1..] {
                    *c = 0;
                }
                break;
            }
        }
    }
}

impl Field {
    /// Build GF(p^m). When `modulus` is omitted and m > 1 the
    /// lexicographically smallest monic irreducible of degree m is used,
    /// so identical parameters always give the identical field.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Field, Error> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if m < 1 {
            return Err(Error::BadExtensionDegree(m));
        }
        let q = (p as u128).checked_pow(m).ok_or(Error::FieldTooLarge)?;
        if q > MAX_Q as u128 {
            return Err(Error::FieldTooLarge);
        }
        let p = p as u16;
        let q = q as u16;

        let modulus: Vec<u8> = match modulus {
            Some(coeffs) => {
                if coeffs.len() != m as usize + 1 {
                    return Err(Error::MalformedModulus(format!(
                        "expected {} coefficients, got {}",
                        m + 1,
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|&c| c >= p as u64) {
                    return Err(Error::MalformedModulus(format!(
                        "coefficients must lie in [0, {p})"
                    )));
                }
                if *coeffs.last().unwrap() != 1 {
                    return Err(Error::MalformedModulus("modulus must be monic".into()));
                }
                let coeffs: Vec<u8> = coeffs.iter().map(|&c| c as u8).collect();
                if m > 1 && !is_irreducible(&coeffs, p) {
                    return Err(Error::ReducibleModulus);
                }
                coeffs
            }
            None => {
                if m == 1 {
                    vec![0, 1]
                } else {
                    default_modulus(p, m)
                }
            }
        };

        let qu = q as usize;
        let m_us = m as usize;

        // Digit decomposition of every index, reused for both tables.
        let digits: Vec<Vec<u8>> = (0..qu)
            .map(|idx| {
                let mut v = idx;
                (0..m_us)
                    .map(|_| {
                        let d = (v % p as usize) as u8;
                        v /= p as usize;
                        d
                    })
                    .collect()
            })
            .collect();
        let index_of = |poly: &[u8]| -> u8 {
            let mut idx = 0usize;
            for &c in poly.iter().rev() {
                idx = idx * p as usize + c as usize;
            }
            idx as u8
        };

        let mut add = vec![0u8; qu * qu];
        let mut mul = vec![0u8; qu * qu];
        let mut neg = vec![0u8; qu];
        let mut inv = vec![0u8; qu];
        for a in 0..qu {
            for b in 0..qu {
                let sum: Vec<u8> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(&x, &y)| ((x as u16 + y as u16) % p) as u8)
                    .collect();
                add[a * qu + b] = index_of(&sum);

                let mut prod = poly_mod_p(&poly_mul_p(&digits[a], &digits[b], p), &modulus, p);
                prod.resize(m_us, 0);
                mul[a * qu + b] = index_of(&prod);
            }
            let negated: Vec<u8> = digits[a]
                .iter()
                .map(|&x| ((p - x as u16) % p) as u8)
                .collect();
            neg[a] = index_of(&negated);
        }
        for a in 1..qu {
            for b in 1..qu {
                if mul[a * qu + b] == 1 {
                    inv[a] = b as u8;
                    break;
                }
            }
        }

        Ok(Field {
            p,
            m,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn p(&self) -> u16 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    /// Modulus coefficients, low-to-high (length m+1).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Checked element constructor from an index.
    pub fn element(&self, index: u64) -> Result<FieldElement, Error> {
        if index < self.q as u64 {
            Ok(FieldElement(index as u8))
        } else {
            Err(Error::ElementOutOfRange {
                index,
                q: self.q,
            })
        }
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| FieldElement(i as u8))
    }

    /// Nonzero elements in index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(|i| FieldElement(i as u8))
    }

    #[inline]
    fn check(&self, a: FieldElement) -> usize {
        let idx = a.0 as usize;
        assert!(idx < self.q as usize, "element index {idx} outside GF({})", self.q);
        idx
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[self.check(a) * self.q as usize + self.check(b)])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[self.check(a)])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[self.check(a) * self.q as usize + self.check(b)])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, Error> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement(self.inv[self.check(a)]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, Error> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Exponentiation by squaring; negative exponents invert first, so
    /// `pow(0, e)` errors for e < 0.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, Error> {
        let (base, mut e) = if e < 0 {
            (self.inv(a)?, e.unsigned_abs())
        } else {
            (a, e as u64)
        };
        let mut base = base;
        let mut acc = FieldElement::ONE;
        self.check(base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }
}
