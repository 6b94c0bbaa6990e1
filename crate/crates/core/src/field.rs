//! Finite fields F_{p^e} with deterministic construction.
//!
//! Elements are coded as base-p digit values of their coefficient vectors,
//! low-degree digit least significant; the code doubles as the canonical
//! element ordering. The modulus for e >= 2 is the monic irreducible
//! polynomial of degree e over F_p with the smallest element code, so two
//! fields with equal (p, e) are always the same field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order. Everything at desk scale is far below this.
const ORDER_CEILING: u64 = 1 << 32;
/// exp/log tables are built up to this order; beyond it multiplication falls
/// back to polynomial arithmetic (same semantics, slower).
const TABLE_CEILING: u64 = 1 << 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FieldElement(u64);

impl FieldElement {
    pub fn code(self) -> u64 {
        self.0
    }
}

struct FieldInner {
    p: u64,
    e: u32,
    size: u64,
    /// Monic modulus, length e+1, low-degree-first. Empty when e == 1.
    modulus: Vec<u64>,
    /// Code of the canonical primitive element: smallest code with
    /// multiplicative order size − 1.
    primitive: u64,
    /// exp[i] = primitive^i for i in 0..size−1; empty above TABLE_CEILING.
    exp: Vec<u64>,
    /// log[code] with log[0] unused; empty above TABLE_CEILING.
    log: Vec<u64>,
}

#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}
impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

fn is_prime(n: u64) -> bool {
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

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over F_p, low-degree-first, no trailing-zero guarantee.
mod poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of a by monic b.
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        debug_assert_eq!(*b.last().unwrap(), 1);
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            if lead != 0 {
                for i in 0..db {
                    r[shift + i] = (r[shift + i] + p - lead * b[i] % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    /// Trial division by every monic polynomial of degree 1..=deg/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let deg = f.len() - 1;
        if deg == 0 || *f.last().unwrap() != 1 {
            return false;
        }
        for d in 1..=deg / 2 {
            // Monic divisors of degree d, low coefficients counted in base p.
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut v = idx;
                for _ in 0..d {
                    g.push(v % p);
                    v /= p;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// Monic irreducible of degree e over F_p with the smallest element code
/// (sum of c_i p^i), i.e. the first hit counting x^e, x^e + 1, x^e + 2, ...
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let mut coeffs = vec![0u64; e];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
        // Base-p successor, constant coefficient least significant.
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
            assert!(i < e, "no irreducible of degree {e} over F_{p}");
        }
    }
}

impl FieldSpec {
    pub fn new(p: u64, e: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::OutOfRange("extension degree must be >= 1".into()));
        }
        let size = p
            .checked_pow(e)
            .filter(|&s| s <= ORDER_CEILING)
            .ok_or(Error::FieldTooLarge(p, e))?;
        let modulus = if e == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, e)
        };
        let mut inner = FieldInner {
            p,
            e,
            size,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        inner.primitive = inner.find_primitive();
        if size <= TABLE_CEILING {
            inner.build_tables();
        }
        Ok(FieldSpec(Arc::new(inner)))
    }

    /// Field of the same characteristic with extension degree e * m.
    pub fn extend(&self, m: u32) -> Result<FieldSpec> {
        FieldSpec::new(self.0.p, self.0.e * m)
    }

    /// Recovers the canonical field of a given order, factoring it as p^e.
    /// Rejects orders that are not prime powers.
    pub fn from_order(order: u64) -> Result<FieldSpec> {
        if order < 2 {
            return Err(Error::InvalidInput(format!("{order} is not a prime power")));
        }
        let mut p = order;
        let mut f = 2u64;
        while f.saturating_mul(f) <= order {
            if order % f == 0 {
                p = f;
                break;
            }
            f += 1;
        }
        let mut e = 0u32;
        let mut rest = order;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidInput(format!("{order} is not a prime power")));
        }
        FieldSpec::new(p, e)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    pub fn order(&self) -> u64 {
        self.0.size
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }
    /// Monic modulus, low-degree-first; empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, code: u64) -> Result<FieldElement> {
        if code < self.0.size {
            Ok(FieldElement(code))
        } else {
            Err(Error::OutOfRange(format!(
                "element code {code} not below field order {}",
                self.0.size
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.size).map(FieldElement)
    }

    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.0.primitive)
    }

    /// Coefficient vector of a, low-degree-first, length e.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u64> {
        let mut v = a.0;
        (0..self.0.e)
            .map(|_| {
                let d = v % self.0.p;
                v /= self.0.p;
                d
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.0.e as usize {
            return Err(Error::Shape(format!(
                "{} coefficients for extension degree {}",
                coeffs.len(),
                self.0.e
            )));
        }
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(Error::OutOfRange(format!("coefficient {c} not below {}", self.0.p)));
            }
            code = code * self.0.p + c;
        }
        Ok(FieldElement(code))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if f.e == 1 {
            return FieldElement((a.0 + b.0) % f.p);
        }
        let mut out = 0u64;
        let (mut x, mut y, mut mult) = (a.0, b.0, 1u64);
        for _ in 0..f.e {
            out += (x % f.p + y % f.p) % f.p * mult;
            x /= f.p;
            y /= f.p;
            mult *= f.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.p == 2 {
            return a;
        }
        if f.e == 1 {
            return FieldElement((f.p - a.0) % f.p);
        }
        let mut out = 0u64;
        let (mut x, mut mult) = (a.0, 1u64);
        for _ in 0..f.e {
            out += (f.p - x % f.p) % f.p * mult;
            x /= f.p;
            mult *= f.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let f = &*self.0;
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        if f.e == 1 {
            return FieldElement(a.0 * b.0 % f.p);
        }
        if !f.exp.is_empty() {
            let order = f.size - 1;
            return FieldElement(f.exp[((f.log[a.0 as usize] + f.log[b.0 as usize]) % order) as usize]);
        }
        FieldElement(f.mul_poly(a.0, b.0))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let f = &*self.0;
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if !f.exp.is_empty() {
            let order = f.size - 1;
            return Ok(FieldElement(f.exp[((order - f.log[a.0 as usize]) % order) as usize]));
        }
        Ok(self.pow(a, f.size - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// a^q for a declared subfield order q = p^d with d dividing e.
    pub fn frobenius(&self, a: FieldElement, subfield_order: u64) -> Result<FieldElement> {
        let f = &*self.0;
        let mut d = 0u32;
        let mut s = 1u64;
        while s < subfield_order {
            s *= f.p;
            d += 1;
        }
        if s != subfield_order || d == 0 || f.e % d != 0 {
            return Err(Error::BadSubfield(subfield_order));
        }
        Ok(self.pow(a, subfield_order))
    }

    /// Multiplicative order; 0 is rejected by construction of callers.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let group = self.0.size - 1;
        let mut ord = group;
        for r in prime_factors(group) {
            while ord % r == 0 && self.pow(a, ord / r).0 == 1 {
                ord /= r;
            }
        }
        Ok(ord)
    }
}

impl FieldInner {
    fn mul_poly(&self, a: u64, b: u64) -> u64 {
        let decompose = |mut v: u64| {
            let mut out = Vec::with_capacity(self.e as usize);
            for _ in 0..self.e {
                out.push(v % self.p);
                v /= self.p;
            }
            out
        };
        let prod = poly::mul(&decompose(a), &decompose(b), self.p);
        let r = if self.e == 1 {
            prod
        } else {
            poly::rem(&prod, &self.modulus, self.p)
        };
        let mut code = 0u64;
        for &c in r.iter().rev() {
            code = code * self.p + c;
        }
        code
    }

    fn pow_poly(&self, a: u64, mut n: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            n >>= 1;
        }
        acc
    }

    fn find_primitive(&self) -> u64 {
        let group = self.size - 1;
        if group == 1 {
            return 1;
        }
        let factors = prime_factors(group);
        'cand: for c in 2..self.size {
            for &r in &factors {
                if self.pow_poly(c, group / r) == 1 {
                    continue 'cand;
                }
            }
            return c;
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    fn build_tables(&mut self) {
        let order = (self.size - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![0u64; self.size as usize];
        let mut acc = 1u64;
        for i in 0..order {
            exp.push(acc);
            log[acc as usize] = i as u64;
            acc = self.mul_poly(acc, self.primitive);
        }
        debug_assert_eq!(acc, 1);
        self.exp = exp;
        self.log = log;
    }
}
