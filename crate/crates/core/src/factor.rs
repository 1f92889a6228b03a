//! Factorisation of squarefree polynomials over GF(q): distinct-degree
//! splitting followed by Cantor–Zassenhaus equal-degree splitting.
//!
//! The equal-degree step draws random polynomials from a ChaCha stream, so
//! the *set* of factors never depends on the seed; only the work done does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FiniteField};
use crate::poly::{half_power_minus_one, Factoring, Poly, PolyRing};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x6a09_e667;

pub type FfPoly = Poly<FiniteField>;

/// Canonical factor order: by degree, then coefficient vector (constant term first).
pub fn sort_factors<T: Ord>(factors: &mut [Vec<T>]) {
    factors.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

/// Returns `(g, d)` pairs: `g` is the product of all irreducible factors of
/// degree `d`. `f` must be monic and squarefree.
pub fn distinct_degree(ring: &PolyRing<FiniteField>, f: &[u32]) -> Vec<(FfPoly, usize)> {
    let q = ring.field.order();
    let x = ring.x();
    let mut rest = f.to_vec();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((rest, deg));
            break;
        }
        h = ring.powmod(&h, q, &rest);
        let g = ring.gcd(&ring.sub(&h, &x), &rest);
        if g.len() > 1 {
            rest = ring.divrem(&rest, &g).0;
            h = ring.rem(&h, &rest);
            out.push((g, d));
        }
    }
    out
}

fn random_poly(ring: &PolyRing<FiniteField>, deg_below: usize, rng: &mut ChaCha8Rng) -> FfPoly {
    let q = ring.field.order() as u32;
    ring.trim((0..deg_below).map(|_| rng.gen_range(0..q)).collect())
}

/// Splits `g`, a product of distinct monic irreducibles of degree `d`.
fn equal_degree(ring: &PolyRing<FiniteField>, g: FfPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FfPoly>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g);
        return;
    }
    let q = ring.field.order();
    let (p, k) = (ring.field.prime(), ring.field.degree() as usize);
    let exp = (p != 2).then(|| half_power_minus_one(q, d));
    loop {
        let a = random_poly(ring, n, rng);
        if a.len() < 2 {
            continue;
        }
        let b = match &exp {
            Some(e) => ring.sub(&ring.powmod_big(&a, e, &g), &ring.one()),
            None => {
                // absolute trace to GF(2)
                let mut t = ring.rem(&a, &g);
                let mut acc = t.clone();
                for _ in 1..k * d {
                    t = ring.mulmod(&t, &t, &g);
                    acc = ring.add(&acc, &t);
                }
                acc
            }
        };
        let h = ring.gcd(&b, &g);
        if h.len() > 1 && h.len() < g.len() {
            let other = ring.divrem(&g, &h).0;
            equal_degree(ring, h, d, rng, out);
            equal_degree(ring, other, d, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial, in canonical order.
pub fn factor_squarefree(ring: &PolyRing<FiniteField>, f: &[u32], seed: u64) -> Result<Vec<FfPoly>> {
    if f.is_empty() {
        return Err(Error::input("cannot factor the zero polynomial"));
    }
    let f = ring.monic(f);
    if !ring.is_squarefree(&f) {
        return Err(Error::input("polynomial is not squarefree over the residue field"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(ring, &f) {
        equal_degree(ring, g, d, &mut rng, &mut out);
    }
    sort_factors(&mut out);
    Ok(out)
}

/// Irreducibility over GF(q) (constants are not irreducible).
pub fn is_irreducible(ring: &PolyRing<FiniteField>, f: &[u32]) -> bool {
    if f.len() < 2 {
        return false;
    }
    let f = ring.monic(f);
    if !ring.is_squarefree(&f) {
        return false;
    }
    let dd = distinct_degree(ring, &f);
    dd.len() == 1 && dd[0].1 == f.len() - 1
}

/// Roots of `f` in GF(q), ascending by element code.
pub fn roots(ring: &PolyRing<FiniteField>, f: &[u32]) -> Vec<u32> {
    ring.field.elements().into_iter().filter(|a| ring.field.is_zero(&ring.eval(f, a))).collect()
}

impl Factoring for FiniteField {
    fn factor_poly(&self, f: &[u32], seed: u64) -> Result<Vec<FfPoly>> {
        factor_squarefree(&PolyRing::new(self.clone()), f, seed)
    }

    fn poly_is_irreducible(&self, f: &[u32]) -> Result<bool> {
        Ok(is_irreducible(&PolyRing::new(self.clone()), f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn ring(q: u64) -> PolyRing<FiniteField> {
        PolyRing::new(FiniteField::new(q).unwrap())
    }

    // Independent oracle: trial division by every monic polynomial of degree <= n/2.
    fn brute_irreducible(r: &PolyRing<FiniteField>, f: &[u32]) -> bool {
        let q = r.field.order() as u32;
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let total = (q as u64).pow(d as u32);
            for code in 0..total {
                let mut c = code;
                let mut g: Vec<u32> = (0..d)
                    .map(|_| {
                        let v = (c % q as u64) as u32;
                        c /= q as u64;
                        v
                    })
                    .collect();
                g.push(1);
                if r.rem(f, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn factors_multiply_back_and_are_irreducible() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let r = ring(q);
            let qq = q as u32;
            // a handful of squarefree polynomials of degree up to 6
            for code in [7u64, 19, 123, 999, 4321, 77777] {
                let mut c = code;
                let mut f: Vec<u32> = (0..6)
                    .map(|_| {
                        let v = (c % q) as u32;
                        c /= q;
                        v
                    })
                    .collect();
                f.push(1);
                f[0] = f[0].max(1) % qq;
                if !r.is_squarefree(&f) {
                    continue;
                }
                let fs = factor_squarefree(&r, &f, DEFAULT_SEED).unwrap();
                let prod = fs.iter().fold(r.one(), |acc, g| r.mul(&acc, g));
                assert_eq!(prod, f, "q={q} f={f:?}");
                for g in &fs {
                    assert!(brute_irreducible(&r, g), "q={q} factor {g:?}");
                    assert!(is_irreducible(&r, g));
                }
                let other = factor_squarefree(&r, &f, 12345).unwrap();
                assert_eq!(fs, other);
            }
        }
    }

    #[test]
    fn cyclotomic_counts() {
        // x^4 + x^3 + x^2 + x + 1 mod 2 is irreducible (ord_5 2 = 4)
        let r = ring(2);
        assert_eq!(factor_squarefree(&r, &[1, 1, 1, 1, 1], 1).unwrap().len(), 1);
        // x^4 + 1 mod 7 splits into two quadratics
        let r = ring(7);
        let fs = factor_squarefree(&r, &r.from_i64s(&[1, 0, 0, 0, 1]), 1).unwrap();
        assert_eq!(fs.iter().map(|g| g.len() - 1).collect::<Vec<_>>(), vec![2, 2]);
        // x^2 - 2 mod 7: 3^2 = 2
        let fs = factor_squarefree(&r, &r.from_i64s(&[-2, 0, 1]), 1).unwrap();
        assert_eq!(fs, vec![vec![3, 1], vec![4, 1]]);
        assert_eq!(roots(&r, &r.from_i64s(&[-2, 0, 1])), vec![3, 4]);
    }

    #[test]
    fn rejects_repeated_factors() {
        let r = ring(3);
        assert!(factor_squarefree(&r, &r.from_i64s(&[1, 2, 1]), 1).is_err());
        assert!(!is_irreducible(&r, &r.from_i64s(&[1, 2, 1])));
    }
}
