//! Dense univariate polynomials over a [`Field`].
//!
//! A polynomial is a coefficient vector, lowest degree first, with no
//! trailing zeros; the zero polynomial is the empty vector.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Result;
use crate::field::Field;

pub type Poly<F> = Vec<<F as Field>::Elem>;

/// Polynomial arithmetic over a fixed field.
#[derive(Debug, Clone)]
pub struct PolyRing<F: Field> {
    pub field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn trim(&self, mut a: Poly<F>) -> Poly<F> {
        while a.last().is_some_and(|c| self.field.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn from_coeffs(&self, coeffs: Vec<F::Elem>) -> Poly<F> {
        self.trim(coeffs)
    }

    pub fn from_i64s(&self, coeffs: &[i64]) -> Poly<F> {
        self.trim(coeffs.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn one(&self) -> Poly<F> {
        vec![self.field.one()]
    }

    /// `X`
    pub fn x(&self) -> Poly<F> {
        vec![self.field.zero(), self.field.one()]
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        self.trim(vec![c])
    }

    pub fn degree(&self, a: &[F::Elem]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn is_monic(&self, a: &[F::Elem]) -> bool {
        a.last().is_some_and(|c| *c == self.field.one())
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        let n = a.len().max(b.len());
        let z = self.field.zero();
        let out = (0..n).map(|i| self.field.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.trim(out)
    }

    pub fn neg(&self, a: &[F::Elem]) -> Poly<F> {
        a.iter().map(|c| self.field.neg(c)).collect()
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &[F::Elem], s: &F::Elem) -> Poly<F> {
        self.trim(a.iter().map(|c| self.field.mul(c, s)).collect())
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(x, y));
            }
        }
        self.trim(out)
    }

    /// Quotient and remainder. Panics on division by the zero polynomial.
    pub fn divrem(&self, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
        let lead = b.last().expect("division by zero polynomial");
        let lead_inv = self.field.inv(lead).expect("leading coefficient is a unit");
        let mut rem: Poly<F> = self.trim(a.to_vec());
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![self.field.zero(); rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let coef = self.field.mul(rem.last().unwrap(), &lead_inv);
            for (j, bj) in b.iter().enumerate() {
                let t = self.field.mul(&coef, bj);
                rem[shift + j] = self.field.sub(&rem[shift + j], &t);
            }
            quot[shift] = coef;
            rem.pop();
            rem = self.trim(rem);
        }
        (self.trim(quot), rem)
    }

    pub fn rem(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        self.divrem(a, b).1
    }

    pub fn monic(&self, a: &[F::Elem]) -> Poly<F> {
        match a.last() {
            None => Vec::new(),
            Some(l) => {
                let li = self.field.inv(l).expect("nonzero leading coefficient");
                self.scale(a, &li)
            }
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        let (mut x, mut y) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns `(g, s, t)` with `g = s a + t b` and `g` monic.
    pub fn ext_gcd(&self, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
        let (mut r0, mut r1) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        let (mut s0, mut s1) = (self.one(), Vec::new());
        let (mut t0, mut t1) = (Vec::new(), self.one());
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = self.field.inv(l).unwrap();
                (self.scale(&r0, &li), self.scale(&s0, &li), self.scale(&t0, &li))
            }
        }
    }

    /// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
    pub fn inv_mod(&self, a: &[F::Elem], m: &[F::Elem]) -> Option<Poly<F>> {
        let (g, s, _) = self.ext_gcd(a, m);
        (g == self.one()).then(|| self.rem(&s, m))
    }

    pub fn mulmod(&self, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod_big(&self, base: &[F::Elem], exp: &BigUint, m: &[F::Elem]) -> Poly<F> {
        let mut acc = self.rem(&self.one(), m);
        let base = self.rem(base, m);
        for i in (0..exp.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if exp.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn powmod(&self, base: &[F::Elem], exp: u64, m: &[F::Elem]) -> Poly<F> {
        self.powmod_big(base, &BigUint::from(exp), m)
    }

    pub fn pow(&self, base: &[F::Elem], exp: usize) -> Poly<F> {
        (0..exp).fold(self.one(), |acc, _| self.mul(&acc, base))
    }

    pub fn derivative(&self, a: &[F::Elem]) -> Poly<F> {
        let out =
            a.iter().enumerate().skip(1).map(|(i, c)| self.field.mul(c, &self.field.from_i64(i as i64))).collect();
        self.trim(out)
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, a: &[F::Elem], x: &F::Elem) -> F::Elem {
        a.iter().rev().fold(self.field.zero(), |acc, c| self.field.add(&self.field.mul(&acc, x), c))
    }

    /// `a(b(X))`.
    pub fn compose(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        a.iter().rev().fold(Vec::new(), |acc, c| self.add(&self.mul(&acc, b), &self.constant(c.clone())))
    }

    /// `a(b) mod m`.
    pub fn compose_mod(&self, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F> {
        a.iter().rev().fold(Vec::new(), |acc, c| self.add(&self.mulmod(&acc, b, m), &self.constant(c.clone())))
    }

    pub fn is_squarefree(&self, a: &[F::Elem]) -> bool {
        self.gcd(a, &self.derivative(a)).len() <= 1
    }

    /// `∏ (X - r)` over the given roots.
    pub fn from_roots(&self, roots: &[F::Elem]) -> Poly<F> {
        roots.iter().fold(self.one(), |acc, r| self.mul(&acc, &[self.field.neg(r), self.field.one()]))
    }
}

/// Fields over which squarefree polynomials can be factored.
pub trait Factoring: Field {
    /// Monic irreducible factors of a squarefree polynomial, canonical order.
    fn factor_poly(&self, f: &[Self::Elem], seed: u64) -> Result<Vec<Poly<Self>>>;

    fn poly_is_irreducible(&self, f: &[Self::Elem]) -> Result<bool>;
}

/// `(q^d - 1)/2` as a big integer.
pub(crate) fn half_power_minus_one(q: u64, d: usize) -> BigUint {
    (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1
}
