//! Base fields: the rationals and small finite fields GF(p^k).
//!
//! Fields are runtime objects; elements are plain values and every
//! operation goes through the field, so one generic code path serves both
//! the rationals and finite fields.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers (numerator and positive denominator, always reduced).
pub type ExactRational = BigRational;

pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// `None` for infinite fields.
    fn size(&self) -> Option<u64>;
    /// Elements in a fixed order; only meaningful for finite fields.
    fn elements(&self) -> Vec<Self::Elem> {
        Vec::new()
    }
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// Short tag used in files: `Q` or `GF(q)`.
    fn tag(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn format_rational(q: &ExactRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let bad = || Error::input(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() || d.is_negative() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

impl Field for Rationals {
    type Elem = ExactRational;

    fn zero(&self) -> ExactRational {
        BigRational::zero()
    }
    fn one(&self) -> ExactRational {
        BigRational::one()
    }
    fn add(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a + b
    }
    fn neg(&self, a: &ExactRational) -> ExactRational {
        -a
    }
    fn sub(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a - b
    }
    fn mul(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a * b
    }
    fn inv(&self, a: &ExactRational) -> Option<ExactRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &ExactRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> ExactRational {
        rat_int(n)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn size(&self) -> Option<u64> {
        None
    }
    fn parse_elem(&self, s: &str) -> Result<ExactRational> {
        parse_rational(s)
    }
    fn format_elem(&self, a: &ExactRational) -> String {
        format_rational(a)
    }
    fn tag(&self) -> String {
        "Q".into()
    }
}

/// Trial-division primality test.
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

/// Writes `q = p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Largest field order the table-based implementation accepts.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// GF(p^k) with log/antilog tables.
///
/// Elements are encoded as integers `0..q` whose base-`p` digits are the
/// coefficients of the element in the basis `1, t, …, t^{k-1}`, where `t` is
/// a root of the lexicographically least primitive polynomial of degree `k`.
/// For `k = 1` the encoding is the residue itself.
#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: std::sync::Arc<Vec<u32>>,
    log: std::sync::Arc<Vec<u32>>,
}

impl Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::input(format!("{q} is not a prime power")))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::capability(format!("GF({q}) exceeds the supported order {MAX_FIELD_ORDER}")));
        }
        // Search monic degree-k polynomials over GF(p) in lexicographic order of
        // their low coefficients for one whose root generates the unit group.
        let k_us = k as usize;
        let mut low = vec![0u64; k_us];
        loop {
            let mut modulus = low.clone();
            modulus.push(1);
            if let Some((exp, log)) = build_tables(p, k_us, q, &modulus) {
                return Ok(FiniteField { p, k, q, modulus, exp: exp.into(), log: log.into() });
            }
            // next coefficient vector (little-endian counter)
            let mut i = 0;
            loop {
                if i == k_us {
                    return Err(Error::Internal(format!("no primitive polynomial found for GF({q})")));
                }
                low[i] += 1;
                if low[i] < p {
                    break;
                }
                low[i] = 0;
                i += 1;
            }
        }
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Coefficients (low to high) of the defining primitive polynomial over GF(p).
    pub fn defining_polynomial(&self) -> &[u64] {
        &self.modulus
    }

    fn digits(&self, mut a: u32) -> Vec<u64> {
        let mut d = vec![0u64; self.k as usize];
        for slot in d.iter_mut() {
            *slot = a as u64 % self.p;
            a /= self.p as u32;
        }
        d
    }

    fn from_digits(&self, d: &[u64]) -> u32 {
        d.iter().rev().fold(0u64, |acc, &x| acc * self.p + x) as u32
    }
}

/// Builds exp/log tables if `t` is primitive modulo `modulus`.
fn build_tables(p: u64, k: usize, q: u64, modulus: &[u64]) -> Option<(Vec<u32>, Vec<u32>)> {
    if modulus[0] == 0 && k > 1 {
        return None;
    }
    let encode = |d: &[u64]| d.iter().rev().fold(0u64, |acc, &x| acc * p + x) as u32;
    let mut exp = Vec::with_capacity(q as usize);
    let mut log = vec![u32::MAX; q as usize];
    // current power of t, as digit vector
    let mut cur = vec![0u64; k];
    cur[0] = 1;
    let generator_k1 = if k == 1 {
        // For prime fields pick the least primitive root.
        (1..p).find(|&g| {
            let mut x = 1u64;
            for i in 1..p - 1 {
                x = x * g % p;
                if x == 1 && i < p - 1 {
                    return false;
                }
            }
            true
        })?
    } else {
        0
    };
    if k == 1 && modulus[0] != (p - generator_k1) % p {
        // For k = 1 only accept X - g with g the least primitive root.
        return None;
    }
    for i in 0..(q - 1) {
        let code = encode(&cur);
        if log[code as usize] != u32::MAX {
            return None;
        }
        log[code as usize] = i as u32;
        exp.push(code);
        // multiply cur by t modulo monic `modulus`
        if k == 1 {
            cur[0] = cur[0] * generator_k1 % p;
        } else {
            let top = cur[k - 1];
            for j in (1..k).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for j in 0..k {
                cur[j] = (cur[j] + (p - top) * modulus[j] % p) % p;
            }
        }
    }
    (cur.iter().enumerate().all(|(i, &c)| c == u64::from(i == 0))).then_some((exp, log))
}

impl Field for FiniteField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            return ((*a as u64 + *b as u64) % self.p) as u32;
        }
        let (da, db) = (self.digits(*a), self.digits(*b));
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }
    fn neg(&self, a: &u32) -> u32 {
        if self.k == 1 {
            return ((self.p - *a as u64) % self.p) as u32;
        }
        let s: Vec<u64> = self.digits(*a).iter().map(|x| (self.p - x) % self.p).collect();
        self.from_digits(&s)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let l = (self.log[*a as usize] as u64 + self.log[*b as usize] as u64) % (self.q - 1);
        self.exp[l as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let l = (self.q - 1 - self.log[*a as usize] as u64) % (self.q - 1);
        Some(self.exp[l as usize])
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn size(&self) -> Option<u64> {
        Some(self.q)
    }
    fn elements(&self) -> Vec<u32> {
        (0..self.q as u32).collect()
    }
    fn parse_elem(&self, s: &str) -> Result<u32> {
        let v: i64 = s.parse().map_err(|_| Error::input(format!("not a GF({}) element: {s:?}", self.q)))?;
        if self.k == 1 {
            return Ok(self.from_i64(v));
        }
        if v < 0 || v as u64 >= self.q {
            return Err(Error::input(format!("GF({}) element code out of range: {v}", self.q)));
        }
        Ok(v as u32)
    }
    fn format_elem(&self, a: &u32) -> String {
        a.to_string()
    }
    fn tag(&self) -> String {
        format!("GF({})", self.q)
    }
}
