//! Finite fields GF(p^k).
//!
//! Elements are stored by their canonical index: the base-p digits of the
//! index are the coefficients of the element as a polynomial in the
//! generator `t` (digit `i` is the coefficient of `t^i`). The index is the
//! canonical form, so equality, ordering and hashing are plain integer
//! operations and no lazy reduction ever happens.
//!
//! Multiplication goes through discrete log / antilog tables built at
//! construction from a primitive element, so fields are capped by a
//! configurable order budget.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::poly::Poly;

/// Default cap on the field order q = p^k.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 20;

/// An element of a finite field, identified by its canonical index in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The data describing one field: characteristic, degree, modulus and the
/// multiplication tables.
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over GF(p), coefficients low to high (length k + 1).
    modulus: Option<Vec<u32>>,
    /// `exp[i] = g^i` for i in `[0, 2(q-1))`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// Shared handle to a [`FieldSpec`]. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // Moduli are chosen deterministically, so (p, k) identifies the field.
        Arc::ptr_eq(&self.0, &other.0) || (self.p == other.p && self.k == other.k)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.k)
        }
    }
}

/// Builds GF(p^k) with the default order budget.
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    Field::with_budget(p, k, DEFAULT_FIELD_BUDGET)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Splits a prime power q into (p, k). Returns `None` if q is not a prime power.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    let primes = prime_divisors(q);
    if primes.len() != 1 {
        return None;
    }
    let p = primes[0];
    let mut k = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        k += 1;
    }
    Some((p, k))
}

impl Field {
    pub fn new(p: u64, k: u32) -> Result<Field> {
        make_field(p, k)
    }

    /// Builds GF(p^k), rejecting orders above `budget`.
    pub fn with_budget(p: u64, k: u32, budget: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::InvalidDegree);
        }
        let over = Error::OrderOverBudget { p, k, budget };
        let q = p.checked_pow(k).ok_or(over.clone())?;
        if q > budget || q > u32::MAX as u64 / 2 {
            return Err(over);
        }
        if k == 1 {
            return Ok(Field(Arc::new(build_tables(p as u32, 1, None))));
        }
        let base = Field::with_budget(p, 1, budget)?;
        let modulus = first_irreducible(&base, k as usize);
        Ok(Field(Arc::new(build_tables(p as u32, k, Some(modulus)))))
    }

    /// Convenience constructor for a prime field.
    pub fn prime(p: u64) -> Result<Field> {
        make_field(p, 1)
    }
}

/// Scans monic degree-k polynomials with (c_{k-1}, ..., c_0) ascending
/// lexicographically and returns the first irreducible one.
fn first_irreducible(base: &Field, k: usize) -> Vec<u32> {
    let p = base.p;
    // digits[0] is c_{k-1}, the most significant position of the scan.
    let mut digits = vec![0u32; k];
    loop {
        let mut coeffs: Vec<Elem> = digits.iter().rev().map(|&c| Elem(c)).collect();
        coeffs.push(Elem::ONE);
        let candidate = Poly::from_elems(base, coeffs);
        if is_irreducible(&candidate).unwrap_or(false) {
            let mut out: Vec<u32> = digits.iter().rev().copied().collect();
            out.push(1);
            return out;
        }
        // odometer on digits, last digit fastest
        let mut i = k;
        loop {
            // Irreducible polynomials of every degree exist, so the scan terminates.
            assert!(i > 0, "no irreducible polynomial of degree {k} found");
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn digits_of(mut index: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = index % p;
            index /= p;
            d
        })
        .collect()
}

fn index_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplication of digit vectors modulo the modulus, without tables.
fn slow_mul(a: u32, b: u32, p: u32, k: u32, modulus: Option<&[u32]>) -> u32 {
    let Some(m) = modulus else {
        return ((a as u64 * b as u64) % p as u64) as u32;
    };
    let k = k as usize;
    let da = digits_of(a, p, k as u32);
    let db = digits_of(b, p, k as u32);
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for top in (k..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        // subtract c * t^(top-k) * modulus
        for (j, &mj) in m.iter().enumerate() {
            let pos = top - k + j;
            prod[pos] = (prod[pos] + (p as u64 - c) * mj as u64) % p as u64;
        }
    }
    let reduced: Vec<u32> = prod[..k].iter().map(|&d| d as u32).collect();
    index_of(&reduced, p)
}

fn slow_pow(mut base: u32, mut e: u64, p: u32, k: u32, modulus: Option<&[u32]>) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(acc, base, p, k, modulus);
        }
        base = slow_mul(base, base, p, k, modulus);
        e >>= 1;
    }
    acc
}

fn build_tables(p: u32, k: u32, modulus: Option<Vec<u32>>) -> FieldSpec {
    let q = p.pow(k);
    let group = (q - 1) as u64;
    let m = modulus.as_deref();
    let primes = prime_divisors(group);
    let generator = (1..q)
        .find(|&g| {
            if group == 1 {
                return true;
            }
            primes.iter().all(|&l| slow_pow(g, group / l, p, k, m) != 1)
        })
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(2 * group as usize);
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for i in 0..group as u32 {
        exp.push(cur);
        log[cur as usize] = i;
        cur = slow_mul(cur, generator, p, k, m);
    }
    for i in 0..group as usize {
        exp.push(exp[i]);
    }
    FieldSpec {
        p,
        k,
        q,
        modulus,
        exp,
        log,
    }
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.q)
    }

    /// Modulus coefficients over GF(p), low to high; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// The adjoined root `t` of the modulus; `None` for prime fields.
    pub fn generator(&self) -> Option<Elem> {
        (self.k > 1).then_some(Elem(self.p))
    }

    pub fn element_index(&self, a: Elem) -> u64 {
        a.0 as u64
    }

    /// Inverse of [`element_index`](Self::element_index).
    pub fn index_element(&self, index: u64) -> Result<Elem> {
        if index >= self.q as u64 {
            return Err(Error::IndexOutOfRange {
                index: index.to_string(),
                bound: self.q.to_string(),
            });
        }
        Ok(Elem(index as u32))
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    /// Coefficients (c_0, ..., c_{k-1}) of `a` over GF(p).
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        digits_of(a.0, self.p, self.k)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.k as usize {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.k
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::CoefficientOutOfRange {
                value: bad.to_string(),
                order: self.p as u64,
            });
        }
        Ok(Elem(index_of(coeffs, self.p)))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let l = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[l as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let group = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let group = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % group)) % group;
        Elem(self.exp[l as usize])
    }

    pub fn pow_big(&self, a: Elem, e: &BigUint) -> Elem {
        if e.is_zero() {
            return Elem::ONE;
        }
        let reduced = (e % BigUint::from(self.q - 1)).to_u64().unwrap_or(0);
        if a.0 == 0 {
            return Elem::ZERO;
        }
        // e > 0 and e ≡ 0 mod (q-1) gives a^(q-1) = 1, which pow(a, 0) also returns.
        self.pow(a, reduced)
    }

    /// The Frobenius automorphism `a ↦ a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// The unique `b` with `b^p = a`, namely `a^(p^(k-1))`.
    pub fn frobenius_inverse(&self, a: Elem) -> Elem {
        self.pow(a, (self.p as u64).pow(self.k - 1))
    }

    /// Checks that `a` is a valid index in this field.
    pub fn check(&self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::MixedFields)
        }
    }

    /// Parses an element in the text format (its decimal index).
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let t = text.trim();
        let v: u64 = t.parse().map_err(|_| Error::Parse {
            position: 0,
            message: format!("invalid field element {t:?}"),
        })?;
        if v >= self.q as u64 {
            return Err(Error::CoefficientOutOfRange {
                value: t.to_string(),
                order: self.q as u64,
            });
        }
        Ok(Elem(v as u32))
    }
}
