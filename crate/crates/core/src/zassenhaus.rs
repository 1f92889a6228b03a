//! Factorisation over the rationals for small degree: factor modulo a good
//! prime, Hensel-lift past a Mignotte-type coefficient bound, then recombine
//! lifted factors by trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::{factor_squarefree, sort_factors, FfPoly, DEFAULT_SEED};
use crate::field::{is_prime, ExactRational, FiniteField, Rationals};
use crate::poly::{Factoring, Poly, PolyRing};

/// Largest degree accepted by [`factor_rational`].
pub const MAX_RATIONAL_DEGREE: usize = 8;

type ZPoly = Vec<BigInt>;
pub type QPoly = Poly<Rationals>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zreduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &[BigInt]) -> ZPoly {
    let c = content(a);
    let sign = if a.last().is_some_and(|l| l.is_negative()) { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|x| x / &c * &sign).collect()
}

/// Clears denominators and content; leading coefficient positive.
fn to_primitive_integer(f: &[ExactRational]) -> ZPoly {
    let lcm = f.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: ZPoly = f.iter().map(|c| (c * BigRational::from(lcm.clone())).to_integer()).collect();
    primitive(&ints)
}

fn to_q(a: &[BigInt]) -> QPoly {
    a.iter().map(|c| BigRational::from(c.clone())).collect()
}

fn to_ff(a: &[BigInt], p: u64) -> FfPoly {
    let pb = BigInt::from(p);
    let ring = PolyRing::new(FiniteField::new(p).expect("prime"));
    ring.trim(a.iter().map(|c| c.mod_floor(&pb).to_u32().unwrap()).collect())
}

fn from_ff(a: &[u32]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f ≡ g0 · h0 (mod p)` to `f ≡ g · h (mod p^k)` with `g` monic.
fn hensel_pair(ring: &PolyRing<FiniteField>, f: &[BigInt], g0: &FfPoly, h0: &FfPoly, k: u32) -> (ZPoly, ZPoly) {
    let p = ring.field.order();
    let pb = BigInt::from(p);
    let (one, s, t) = ring.ext_gcd(g0, h0);
    debug_assert_eq!(one, ring.one());
    let (mut g, mut h) = (from_ff(g0), from_ff(h0));
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff: ZPoly = {
            let gh = zmul(&g, &h);
            let n = f.len().max(gh.len());
            (0..n)
                .map(|i| f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default())
                .map(|c| c / &pj)
                .collect()
        };
        let e = to_ff(&diff, p);
        let (q, r) = ring.divrem(&ring.mul(&t, &e), g0);
        let b = ring.add(&ring.mul(&s, &e), &ring.mul(&q, h0));
        let next = &pj * &pb;
        g = zreduce(&add_scaled(&g, &from_ff(&r), &pj), &next);
        h = zreduce(&add_scaled(&h, &from_ff(&b), &pj), &next);
        pj = next;
    }
    (g, h)
}

fn add_scaled(a: &[BigInt], b: &[BigInt], s: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default() * s).collect()
}

fn hensel_multi(ring: &PolyRing<FiniteField>, f: &[BigInt], factors: &[FfPoly], k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(ring.field.order()).pow(k);
    if factors.len() == 1 {
        let lc = f.last().unwrap().mod_floor(&pk);
        let inv = lc.modinv(&pk).expect("leading coefficient is a unit");
        let scaled: ZPoly = f.iter().map(|c| c * &inv).collect();
        return vec![zreduce(&scaled, &pk)];
    }
    let lc_p = to_ff(&[f.last().unwrap().clone()], ring.field.order());
    let rest = factors[1..].iter().fold(ring.constant(lc_p[0]), |acc, g| ring.mul(&acc, g));
    let (g, h) = hensel_pair(ring, f, &factors[0], &rest, k);
    let mut out = vec![g];
    out.extend(hensel_multi(ring, &h, &factors[1..], k));
    out
}

fn exact_quotient(f: &[BigInt], g: &[BigInt]) -> Option<ZPoly> {
    let r = PolyRing::new(Rationals);
    let (q, rem) = r.divrem(&to_q(f), &to_q(g));
    if !rem.is_empty() || q.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.iter().map(|c| c.to_integer()).collect())
}

fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if s > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..s).rev().find(|&i| idx[i] < n - s + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Monic irreducible factors over ℚ of a squarefree polynomial, canonical order.
pub fn factor_rational(f: &[ExactRational]) -> Result<Vec<QPoly>> {
    let qr = PolyRing::new(Rationals);
    let f = qr.trim(f.to_vec());
    let n = match f.len() {
        0 | 1 => return Err(Error::input("cannot factor a constant polynomial")),
        l => l - 1,
    };
    if n > MAX_RATIONAL_DEGREE {
        return Err(Error::capability(format!(
            "rational factorisation is limited to degree {MAX_RATIONAL_DEGREE}, got {n}"
        )));
    }
    if !qr.is_squarefree(&f) {
        return Err(Error::input("polynomial is not squarefree over the rationals"));
    }
    if n == 1 {
        return Ok(vec![qr.monic(&f)]);
    }
    let fz = to_primitive_integer(&f);
    let lc = fz.last().unwrap().clone();

    // Among the first few good primes keep the one with the fewest modular factors.
    let mut best: Option<(u64, Vec<FfPoly>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&p| is_prime(p)) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let ring = PolyRing::new(FiniteField::new(p).unwrap());
        let fp = to_ff(&fz, p);
        if !ring.is_squarefree(&fp) {
            continue;
        }
        let fs = factor_squarefree(&ring, &fp, DEFAULT_SEED)?;
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, modular) = best.expect("a good prime always exists for squarefree input");
    if modular.len() == 1 {
        return Ok(vec![qr.monic(&f)]);
    }

    let max_coef = fz.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = BigInt::from(2u32).pow(n as u32) * BigInt::from(n + 1) * max_coef * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    while pb.pow(k) <= bound {
        k += 1;
    }
    let pk = pb.pow(k);
    let ring = PolyRing::new(FiniteField::new(p).unwrap());
    let mut lifted = hensel_multi(&ring, &fz, &modular, k);

    let mut result: Vec<ZPoly> = Vec::new();
    let mut rest = fz;
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let lc = rest.last().unwrap().clone();
        let hit = combinations(lifted.len(), s).into_iter().find_map(|subset| {
            let prod = subset.iter().fold(vec![lc.clone()], |acc, &i| zreduce(&zmul(&acc, &lifted[i]), &pk));
            let cand = primitive(&symmetric(&prod, &pk));
            exact_quotient(&rest, &cand).map(|quot| (subset, cand, quot))
        });
        match hit {
            Some((subset, cand, quot)) => {
                result.push(cand);
                rest = quot;
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g).collect();
            }
            None => s += 1,
        }
    }
    result.push(rest);
    let mut out: Vec<QPoly> = result.iter().map(|g| qr.monic(&to_q(g))).collect();
    sort_factors(&mut out);
    Ok(out)
}

/// Irreducibility over ℚ; repeated factors make a polynomial reducible.
pub fn is_irreducible_rational(f: &[ExactRational]) -> Result<bool> {
    let qr = PolyRing::new(Rationals);
    let f = qr.trim(f.to_vec());
    if f.len() < 2 {
        return Ok(false);
    }
    if !qr.is_squarefree(&f) {
        return Ok(f.len() == 2);
    }
    Ok(factor_rational(&f)?.len() == 1)
}

impl Factoring for Rationals {
    fn factor_poly(&self, f: &[ExactRational], _seed: u64) -> Result<Vec<QPoly>> {
        factor_rational(f)
    }

    fn poly_is_irreducible(&self, f: &[ExactRational]) -> Result<bool> {
        is_irreducible_rational(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;

    fn q(coeffs: &[i64]) -> QPoly {
        coeffs.iter().map(|&c| rat_int(c)).collect()
    }

    fn degrees(fs: &[QPoly]) -> Vec<usize> {
        fs.iter().map(|g| g.len() - 1).collect()
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(2, 1), vec![vec![0], vec![1]]);
    }

    #[test]
    fn swinnerton_dyer_style_quartic_stays_whole() {
        // x^4 + 1 splits modulo every prime but is irreducible over Q
        assert_eq!(factor_rational(&q(&[1, 0, 0, 0, 1])).unwrap().len(), 1);
        // x^4 - 10x^2 + 1, minimal polynomial of sqrt2 + sqrt3
        assert_eq!(factor_rational(&q(&[1, 0, -10, 0, 1])).unwrap().len(), 1);
    }

    #[test]
    fn splits_products() {
        let r = PolyRing::new(Rationals);
        let f = r.mul(&q(&[-2, 0, 1]), &q(&[-8, 0, 1]));
        let fs = factor_rational(&f).unwrap();
        assert_eq!(fs, vec![q(&[-8, 0, 1]), q(&[-2, 0, 1])]);
        // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let fs = factor_rational(&q(&[-1, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(degrees(&fs), vec![1, 1, 2, 2]);
        let prod = fs.iter().fold(r.one(), |a, g| r.mul(&a, g));
        assert_eq!(prod, q(&[-1, 0, 0, 0, 0, 0, 1]));
        // non-monic input: (2x - 1)(3x^2 + 1)
        let f = r.mul(&q(&[-1, 2]), &q(&[1, 0, 3]));
        assert_eq!(degrees(&factor_rational(&f).unwrap()), vec![1, 2]);
    }

    #[test]
    fn cyclotomic_polynomials_are_irreducible() {
        for coeffs in [&[1, 1, 1, 1, 1][..], &[1, 1, 1, 1, 1, 1, 1], &[1, 0, -1, 0, 1], &[2, -1, 1]] {
            assert!(is_irreducible_rational(&q(coeffs)).unwrap(), "{coeffs:?}");
        }
        assert!(!is_irreducible_rational(&q(&[1, 2, 1])).unwrap());
    }

    #[test]
    fn degree_cap_is_a_capability_error() {
        let mut c = vec![0i64; 10];
        c[0] = 2;
        c[9] = 1;
        assert!(matches!(factor_rational(&q(&c)), Err(Error::Capability(_))));
    }
}
