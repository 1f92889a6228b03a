//! p-adic valuations on ℚ, weak approximation, prolongation counting for
//! unramified primes and the decomposition-subfield criterion.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::extension::GaloisExtension;
use crate::factor::{factor_squarefree, roots, FfPoly};
use crate::field::{format_rational, is_prime, ExactRational, Field, FiniteField, Rationals};
use crate::group::{all_subgroups, Subgroup};
use crate::poly::{Factoring, Poly, PolyRing};
use crate::zassenhaus::{is_irreducible_rational, QPoly};

/// A value in `ℤ ∪ {+∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn exceeds(self, bound: i64) -> bool {
        self > Order::Finite(bound)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PAdicValuation {
    p: u64,
}

impl PAdicValuation {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        Ok(PAdicValuation { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn v(&self, x: &ExactRational) -> Order {
        vp(x, self.p)
    }
}

fn vp_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

/// Exact `p`-adic order; `p` is assumed prime.
pub fn vp(x: &ExactRational, p: u64) -> Order {
    if x.is_zero() {
        return Order::Infinite;
    }
    Order::Finite(vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

/// Some `x` with `v_{p_i}(x − a_i) > γ_i` for every constraint: clear
/// denominators, solve the congruences by CRT (least non-negative solution),
/// rescale, then re-check every inequality.
pub fn crt_approximate(constraints: &[(u64, ExactRational, i64)]) -> Result<ExactRational> {
    for (i, (p, _, _)) in constraints.iter().enumerate() {
        if !is_prime(*p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if constraints[..i].iter().any(|(q, _, _)| q == p) {
            return Err(Error::input(format!("prime {p} appears twice")));
        }
    }
    let d = constraints.iter().fold(BigInt::one(), |acc, (_, a, _)| acc.lcm(a.denom()));
    let (mut r, mut m) = (BigInt::zero(), BigInt::one());
    for (p, a, gamma) in constraints {
        let e = gamma + 1 + vp_int(&d, *p);
        if e <= 0 {
            continue;
        }
        let target = (a * BigRational::from_integer(d.clone())).to_integer();
        let modulus = BigInt::from(*p).pow(e as u32);
        // r + m·t ≡ target (mod modulus); m is a unit mod modulus
        let inv = m.extended_gcd(&modulus).x;
        let t = ((target - &r) * inv).mod_floor(&modulus);
        r += &m * t;
        m *= modulus;
        r = r.mod_floor(&m);
    }
    let x = BigRational::new(r, d);
    for (p, a, gamma) in constraints {
        if !vp(&(&x - a), *p).exceeds(*gamma) {
            return Err(Error::Internal(format!("approximation fails at p = {p}")));
        }
    }
    Ok(x)
}

/// `x = p^{γ+1}/q`, so that `v_p(x) > γ` and `v_q(x) < 0`.
pub fn independence_witness(p: u64, q: u64, gamma: i64) -> Result<ExactRational> {
    if !is_prime(p) || !is_prime(q) {
        return Err(Error::input("independence witness needs two primes"));
    }
    if p == q {
        return Err(Error::input(format!("the two primes must differ, both are {p}")));
    }
    if gamma < -1 {
        return Err(Error::input(format!("bound must be at least -1, got {gamma}")));
    }
    let x = BigRational::new(BigInt::from(p).pow((gamma + 1) as u32), BigInt::from(q));
    if !vp(&x, p).exceeds(gamma) || vp(&x, q) >= Order::Finite(0) {
        return Err(Error::Internal("independence witness failed its own check".into()));
    }
    Ok(x)
}

fn integer_coefficients(f: &[ExactRational]) -> Result<Vec<BigInt>> {
    f.iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::input(format!("coefficient {} is not an integer", format_rational(c))))
            }
        })
        .collect()
}

/// Reduction of an integral polynomial modulo `p`.
pub fn reduce_mod_p(f: &[ExactRational], p: u64) -> Result<(PolyRing<FiniteField>, FfPoly)> {
    let ring = PolyRing::new(FiniteField::new(p)?);
    let pb = BigInt::from(p);
    let coeffs =
        integer_coefficients(f)?.iter().map(|c| u32::try_from(c.mod_floor(&pb)).expect("residue fits")).collect();
    let fp = ring.trim(coeffs);
    Ok((ring, fp))
}

/// Irreducible factors of `f mod p` for monic integral `f`; the unramified
/// squarefree regime only.
pub fn prolongation_factors(f: &QPoly, p: u64, seed: u64) -> Result<Vec<FfPoly>> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if f.len() < 2 || !f.last().unwrap().is_one() {
        return Err(Error::input("polynomial must be monic of positive degree"));
    }
    let (ring, fp) = reduce_mod_p(f, p)?;
    if !ring.is_squarefree(&fp) {
        return Err(Error::capability(format!(
            "criterion inapplicable: f mod {p} has a repeated factor (ramified or inseparable reduction)"
        )));
    }
    factor_squarefree(&ring, &fp, seed)
}

/// Number of prolongations of `v_p` to `ℚ[X]/(f)`.
pub fn count_prolongations(f: &QPoly, p: u64, seed: u64) -> Result<usize> {
    prolongation_factors(f, p, seed).map(|fs| fs.len())
}

/// `K = ℚ[Y]/(min_poly)` with a claimed root of `h` in `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubfieldCertificate {
    pub min_poly: QPoly,
    pub root: QPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma210Report {
    pub irreducible: bool,
    pub root_verified: bool,
    /// `(name, valuation)` for `h_0, …, h_{r−2}` and `1 + h_{r−1}`.
    pub inequalities: Vec<(String, Order)>,
    pub shape_ok: bool,
    pub hensel_ok: bool,
    pub holds: bool,
}

pub fn lemma210_check(h: &QPoly, p: u64, cert: &SubfieldCertificate) -> Result<Lemma210Report> {
    let qr = PolyRing::new(Rationals);
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let h = qr.trim(h.clone());
    if h.len() < 2 || !h.last().unwrap().is_one() {
        return Err(Error::input("h must be monic of degree at least 1"));
    }
    let m = qr.trim(cert.min_poly.clone());
    if m.len() < 2 || !m.last().unwrap().is_one() {
        return Err(Error::input("certificate minimal polynomial must be monic of degree at least 1"));
    }
    if !is_irreducible_rational(&m)? {
        return Err(Error::input("certificate minimal polynomial is reducible"));
    }
    if cert.root.len() >= m.len() {
        return Err(Error::input("certificate root is not reduced modulo the minimal polynomial"));
    }
    let irreducible = is_irreducible_rational(&h)?;
    let root_verified = qr.compose_mod(&h, &cert.root, &m).is_empty();

    let r = h.len() - 1;
    let mut inequalities: Vec<(String, Order)> = (0..r - 1).map(|i| (format!("h{i}"), vp(&h[i], p))).collect();
    inequalities.push((format!("1+h{}", r - 1), vp(&(&h[r - 1] + BigRational::one()), p)));
    let shape_ok = inequalities.iter().all(|(_, v)| v.exceeds(0));

    let one = BigRational::one();
    let hensel_ok =
        vp(&qr.eval(&h, &one), p).exceeds(0) && vp(&qr.eval(&qr.derivative(&h), &one), p) == Order::Finite(0);
    Ok(Lemma210Report {
        irreducible,
        root_verified,
        inequalities,
        shape_ok,
        hensel_ok,
        holds: irreducible && root_verified && shape_ok,
    })
}

/// A decomposition subfield `K = L^D` together with the polynomial `h`.
#[derive(Debug, Clone)]
pub struct DecompositionCertificate {
    pub subgroup: Subgroup,
    pub prolongations: usize,
    /// Primitive element of `K` as an element of `L`.
    pub theta: QPoly,
    /// The root `x` of `h`, as an element of `L`.
    pub element: QPoly,
    pub certificate: SubfieldCertificate,
    pub h: QPoly,
    pub report: Lemma210Report,
}

fn is_integral(f: &[ExactRational]) -> bool {
    f.iter().all(|c| c.is_integer())
}

/// Searches fixed fields of index-`r` subgroups, in subgroup order, for one
/// passing [`lemma210_check`]. Returns `None` when `v_p` has more than `r`
/// prolongations or nothing passes.
pub fn lemma210_search(
    ext: &GaloisExtension<Rationals>,
    p: u64,
    r: usize,
    seed: u64,
) -> Result<Option<DecompositionCertificate>> {
    if !is_integral(&ext.modulus) {
        return Err(Error::input("extension modulus must have integer coefficients"));
    }
    let count = count_prolongations(&ext.modulus, p, seed)?;
    let n = ext.degree();
    if r == 0 || !n.is_multiple_of(r) || count > r {
        return Ok(None);
    }
    for d in all_subgroups(&ext.group).into_iter().filter(|d| d.order() * r == n) {
        if let Some(cert) = certify_subgroup(ext, p, &d, count)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Tries to certify `L^d` as a decomposition subfield: a primitive element
/// `θ` whose minimal polynomial splits into distinct linear factors mod `p`,
/// and `x = P(θ)` with `P ≡ 1` at one root and `0` at the others.
fn certify_subgroup(
    ext: &GaloisExtension<Rationals>,
    p: u64,
    d: &Subgroup,
    count: usize,
) -> Result<Option<DecompositionCertificate>> {
    let qr = &ext.ring;
    let r = ext.degree() / d.order();
    let Some((theta, m)) = ext.fixed_field_candidates(d).into_iter().find_map(|t| {
        if ext.stabilizer(&t) != *d {
            return None;
        }
        let m = ext.min_poly(&t);
        let (ring, mp) = reduce_mod_p(&m, p).ok()?;
        (is_integral(&m) && ring.is_squarefree(&mp)).then_some((t, m))
    }) else {
        return Ok(None);
    };
    let (ring, mp) = reduce_mod_p(&m, p)?;
    let rts = roots(&ring, &mp);
    if rts.len() != r {
        return Ok(None);
    }
    let f = &ring.field;
    let num = ring.from_roots(&rts[1..]);
    let den = rts[1..].iter().fold(f.one(), |acc, &b| f.mul(&acc, &f.sub(&rts[0], &b)));
    let lagrange = ring.scale(&num, &f.inv(&den).expect("distinct roots"));
    let base: QPoly = qr.trim(lagrange.iter().map(|&c| Rationals.from_i64(c as i64)).collect());

    // adding multiples of p·θ keeps the residues and eventually separates conjugates
    let Some((root, element, conj)) = (0..=16i64).find_map(|a| {
        let root = qr.add(&base, &qr.from_i64s(&[0, a * p as i64]));
        let x = ext.reduce(&qr.compose(&root, &theta));
        let conj = ext.conjugates(&x);
        (conj.len() == r).then_some((root, x, conj))
    }) else {
        return Ok(None);
    };
    let h = ext.product_over_base(&conj)?;
    let certificate = SubfieldCertificate { root: qr.rem(&root, &m), min_poly: m };
    let report = lemma210_check(&h, p, &certificate)?;
    Ok(report.holds.then(|| DecompositionCertificate {
        subgroup: d.clone(),
        prolongations: count,
        theta,
        element,
        certificate,
        h,
        report,
    }))
}

/// Fields whose elements can be tested against the maximal ideal of a
/// prime valuation, and which can produce decomposition-subfield elements.
pub trait ValuedField: Factoring {
    /// `O(t)` for the valuation attached to `p`; trivial valuations accept everything.
    fn in_valuation_ring(&self, t: &Self::Elem, p: u64) -> bool;

    fn in_maximal_ideal(&self, t: &Self::Elem, p: u64) -> Result<bool>;

    /// An element of `L` fixed exactly by `d` whose conjugates multiply to a
    /// polynomial of the `X^{r−1}(X − 1) mod ℳ` shape.
    fn decomposition_element(
        ext: &GaloisExtension<Self>,
        p: u64,
        d: &Subgroup,
        seed: u64,
    ) -> Result<Option<Poly<Self>>>;
}

impl ValuedField for Rationals {
    fn in_valuation_ring(&self, t: &ExactRational, p: u64) -> bool {
        vp(t, p).exceeds(-1)
    }

    fn in_maximal_ideal(&self, t: &ExactRational, p: u64) -> Result<bool> {
        Ok(vp(t, p).exceeds(0))
    }

    fn decomposition_element(ext: &GaloisExtension<Self>, p: u64, d: &Subgroup, seed: u64) -> Result<Option<QPoly>> {
        if !is_integral(&ext.modulus) {
            return Err(Error::input("extension modulus must have integer coefficients"));
        }
        let count = count_prolongations(&ext.modulus, p, seed)?;
        Ok(certify_subgroup(ext, p, d, count)?.map(|c| c.element))
    }
}

impl ValuedField for FiniteField {
    fn in_valuation_ring(&self, _t: &u32, _p: u64) -> bool {
        true
    }

    fn in_maximal_ideal(&self, _t: &u32, _p: u64) -> Result<bool> {
        Err(Error::capability("valuation atoms unsupported over a finite field"))
    }

    fn decomposition_element(
        _ext: &GaloisExtension<Self>,
        _p: u64,
        _d: &Subgroup,
        _seed: u64,
    ) -> Result<Option<FfPoly>> {
        Err(Error::capability("valuation blocks unsupported over a finite field"))
    }
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1`).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{cyclotomic, cyclotomic_polynomial, units_mod};
    use crate::factor::DEFAULT_SEED;
    use crate::field::{rat, rat_int};
    use crate::group::subgroup_generated;
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QPoly {
        PolyRing::new(Rationals).from_i64s(c)
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&rat_int(12), 2), Order::Finite(2));
        assert_eq!(vp(&rat(1, 9), 3), Order::Finite(-2));
        assert_eq!(vp(&rat_int(0), 5), Order::Infinite);
        assert!(PAdicValuation::new(6).is_err());
    }

    proptest! {
        #[test]
        fn valuation_laws(p in prop::sample::select(vec![2u64, 3, 5, 7]),
                          a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500) {
            let x = rat(a, b);
            let y = rat(c, d);
            let (vx, vy) = (vp(&x, p), vp(&y, p));
            let vxy = vp(&(&x * &y), p);
            match (vx, vy) {
                (Order::Finite(s), Order::Finite(t)) => prop_assert_eq!(vxy, Order::Finite(s + t)),
                _ => prop_assert_eq!(vxy, Order::Infinite),
            }
            prop_assert!(vp(&(&x + &y), p) >= vx.min(vy));
        }

        #[test]
        fn crt_outputs_verify(g1 in -2i64..4, g2 in -2i64..4, a in -50i64..50, b in 1i64..30, c in -50i64..50) {
            let cons = vec![(2, rat(a, b), g1), (3, rat_int(c), g2), (7, rat(c, b), 1)];
            let x = crt_approximate(&cons).unwrap();
            for (p, t, g) in &cons {
                prop_assert!(vp(&(&x - t), *p).exceeds(*g));
            }
        }
    }

    #[test]
    fn crt_examples() {
        let x = crt_approximate(&[(2, rat_int(0), 3), (3, rat_int(1), 2)]).unwrap();
        assert_eq!(x, rat_int(352));
        let x = crt_approximate(&[(2, rat(1, 2), 0), (5, rat_int(0), 1)]).unwrap();
        assert!(vp(&(&x - rat(1, 2)), 2) >= Order::Finite(1));
        assert!(vp(&x, 5) >= Order::Finite(2));
        assert_eq!(x, rat(25, 2));
        assert!(crt_approximate(&[(2, rat_int(0), 1), (2, rat_int(1), 1)]).is_err());
        let a = rat(7, 3);
        assert!(vp(&(crt_approximate(&[(5, a.clone(), 2)]).unwrap() - a), 5).exceeds(2));
    }

    #[test]
    fn independence() {
        assert_eq!(independence_witness(2, 3, 0).unwrap(), rat(2, 3));
        assert_eq!(independence_witness(3, 2, 5).unwrap(), rat(729, 2));
        assert_eq!(independence_witness(5, 7, -1).unwrap(), rat(1, 7));
        assert!(independence_witness(5, 7, -3).is_err());
        assert!(independence_witness(5, 5, 0).is_err());
    }

    #[test]
    fn prolongation_examples() {
        assert_eq!(count_prolongations(&cyclotomic_polynomial(5), 2, DEFAULT_SEED).unwrap(), 1);
        assert_eq!(count_prolongations(&q(&[1, 0, 0, 0, 1]), 7, DEFAULT_SEED).unwrap(), 2);
        assert_eq!(count_prolongations(&q(&[-2, 0, 1]), 7, DEFAULT_SEED).unwrap(), 2);
        let err = count_prolongations(&cyclotomic_polynomial(5), 5, DEFAULT_SEED).unwrap_err();
        assert!(err.to_string().contains("inapplicable"));
    }

    #[test]
    fn prolongations_match_frobenius_order() {
        for m in [5u64, 7, 8, 12] {
            let phi = units_mod(m as usize).len() as u64;
            for p in (2..=50).filter(|&p| is_prime(p) && m % p != 0) {
                let c = count_prolongations(&cyclotomic_polynomial(m as usize), p, DEFAULT_SEED).unwrap() as u64;
                assert_eq!(c, phi / multiplicative_order(p, m), "m = {m}, p = {p}");
            }
        }
    }

    #[test]
    fn check_examples() {
        let trivial = SubfieldCertificate { min_poly: q(&[0, 1]), root: q(&[1]) };
        for p in [2, 3, 5] {
            assert!(lemma210_check(&q(&[-1, 1]), p, &trivial).unwrap().holds);
        }
        let k = SubfieldCertificate { min_poly: q(&[2, -1, 1]), root: q(&[0, 1]) };
        let rep = lemma210_check(&q(&[2, -1, 1]), 2, &k).unwrap();
        assert!(rep.holds && rep.hensel_ok);
        let i = SubfieldCertificate { min_poly: q(&[1, 0, 1]), root: q(&[0, 1]) };
        let rep = lemma210_check(&q(&[1, 0, 1]), 5, &i).unwrap();
        assert!(rep.irreducible && rep.root_verified && !rep.shape_ok && !rep.holds);
        let bad = SubfieldCertificate { min_poly: q(&[-1, 0, 1]), root: q(&[0, 1]) };
        assert!(lemma210_check(&q(&[1, 0, 1]), 5, &bad).is_err());
    }

    fn frobenius_group(m: usize, p: usize) -> Subgroup {
        let l = cyclotomic(m).unwrap();
        let k = l.group.find_label(&(p % m).to_string()).unwrap();
        subgroup_generated(&l.group, &[k]).unwrap()
    }

    #[test]
    fn search_examples() {
        for (m, p, r) in [(5, 2, 1), (8, 7, 2), (12, 13, 4), (7, 2, 2), (12, 5, 2)] {
            let l = cyclotomic(m).unwrap();
            let hit = lemma210_search(&l, p as u64, r, DEFAULT_SEED).unwrap().expect("a decomposition subfield");
            assert_eq!(hit.subgroup, frobenius_group(m, p), "m = {m}, p = {p}");
            assert_eq!(hit.subgroup.order() * hit.prolongations, l.degree());
            assert_eq!(hit.h.len(), r + 1);
        }
        let l = cyclotomic(5).unwrap();
        assert_eq!(lemma210_search(&l, 2, 1, DEFAULT_SEED).unwrap().unwrap().h, q(&[-1, 1]));
        // wrong degree: no subfield passes
        assert!(lemma210_search(&l, 2, 2, DEFAULT_SEED).unwrap().is_none());
        assert!(lemma210_search(&cyclotomic(8).unwrap(), 7, 1, DEFAULT_SEED).unwrap().is_none());
        assert!(lemma210_search(&l, 5, 1, DEFAULT_SEED).is_err());
    }
}
