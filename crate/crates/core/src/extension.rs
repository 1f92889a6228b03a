//! Explicit finite Galois extensions `L = F[X]/(f_L)` together with the full
//! automorphism group, given by the images of the generator `θ = X mod f_L`.

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{Field, FiniteField, Rationals};
use crate::group::{FiniteGroup, GroupRef, Subgroup};
use crate::poly::{Poly, PolyRing};
use crate::zassenhaus::is_irreducible_rational;

#[derive(Clone, Debug)]
pub struct GaloisExtension<F: Field> {
    pub ring: PolyRing<F>,
    pub modulus: Poly<F>,
    /// Index `k` of `group` acts by `θ ↦ autos[k]`; `autos[0] = θ`.
    pub autos: Vec<Poly<F>>,
    /// Element `a·b` is `σ_a ∘ σ_b`.
    pub group: GroupRef,
}

impl<F: Field> GaloisExtension<F> {
    /// Validates that `autos` are distinct roots of the monic `modulus`, one per
    /// degree, closed under composition. Irreducibility is the caller's claim
    /// (checked by the named constructors).
    pub fn new(
        field: F,
        modulus: Poly<F>,
        autos: Vec<Poly<F>>,
        labels: Option<Vec<String>>,
        name: &str,
    ) -> Result<Self> {
        let ring = PolyRing::new(field);
        let modulus = ring.trim(modulus);
        if modulus.len() < 2 || !ring.is_monic(&modulus) {
            return Err(Error::input("extension modulus must be monic of positive degree"));
        }
        let n = modulus.len() - 1;
        if autos.len() != n {
            return Err(Error::input(format!("{} automorphisms for an extension of degree {n}", autos.len())));
        }
        let autos: Vec<Poly<F>> = autos.into_iter().map(|a| ring.rem(&a, &modulus)).collect();
        if autos[0] != ring.rem(&ring.x(), &modulus) {
            return Err(Error::input("the first automorphism must be the identity"));
        }
        for (k, a) in autos.iter().enumerate() {
            if !ring.compose_mod(&modulus, a, &modulus).is_empty() {
                return Err(Error::input(format!("automorphism {k} does not map θ to a root of f_L")));
            }
            if autos[..k].contains(a) {
                return Err(Error::input(format!("automorphism {k} repeats an earlier one")));
            }
        }
        let rows = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let c = ring.compose_mod(&autos[b], &autos[a], &modulus);
                        autos
                            .iter()
                            .position(|x| *x == c)
                            .ok_or_else(|| Error::input("automorphisms are not closed under composition"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let group = FiniteGroup::from_table(rows, labels)?.with_name(name).into_ref();
        Ok(GaloisExtension { ring, modulus, autos, group })
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn reduce(&self, a: &[F::Elem]) -> Poly<F> {
        self.ring.rem(a, &self.modulus)
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
        self.ring.mulmod(a, b, &self.modulus)
    }

    pub fn inv(&self, a: &[F::Elem]) -> Option<Poly<F>> {
        self.ring.inv_mod(a, &self.modulus)
    }

    /// `σ_k(a)`
    pub fn apply(&self, k: usize, a: &[F::Elem]) -> Poly<F> {
        self.ring.compose_mod(a, &self.autos[k], &self.modulus)
    }

    pub fn stabilizer(&self, y: &[F::Elem]) -> Subgroup {
        let y = self.reduce(y);
        let elems = self.group.elements().filter(|&k| self.apply(k, &y) == y).collect();
        Subgroup::new(self.group.clone(), elems).expect("stabilizer is a subgroup")
    }

    /// `Σ_{σ ∈ H} σ(y)`
    pub fn relative_trace(&self, h: &Subgroup, y: &[F::Elem]) -> Poly<F> {
        h.elements().iter().fold(Vec::new(), |acc, &k| self.ring.add(&acc, &self.apply(k, y)))
    }

    /// `∏ (X − r)` over the given elements of `L`; fails unless every
    /// coefficient lies in the base field.
    pub fn product_over_base(&self, roots: &[Poly<F>]) -> Result<Poly<F>> {
        // coefficients live in L, lowest degree first
        let mut acc: Vec<Poly<F>> = vec![self.ring.one()];
        for r in roots {
            let mut next = vec![Vec::new(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] = self.ring.add(&next[i + 1], c);
                next[i] = self.ring.sub(&next[i], &self.mul(c, r));
            }
            acc = next;
        }
        acc.iter()
            .map(|c| match c.len() {
                0 => Ok(self.field().zero()),
                1 => Ok(c[0].clone()),
                _ => Err(Error::input("product has coefficients outside the base field")),
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| self.ring.trim(v))
    }

    /// Distinct conjugates of `y`, in group order of first appearance.
    pub fn conjugates(&self, y: &[F::Elem]) -> Vec<Poly<F>> {
        let mut out: Vec<Poly<F>> = Vec::new();
        for k in self.group.elements() {
            let c = self.apply(k, y);
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    pub fn min_poly(&self, y: &[F::Elem]) -> Poly<F> {
        self.product_over_base(&self.conjugates(y)).expect("Galois orbit products are rational")
    }

    /// Elements of the fixed field of `h` to try as primitive elements:
    /// relative traces of `θ^j`, then `t_i + c·t_j` for small scalars `c`.
    pub fn fixed_field_candidates(&self, h: &Subgroup) -> Vec<Poly<F>> {
        let r = &self.ring;
        let traces: Vec<Poly<F>> =
            (1..self.degree().max(2)).map(|j| self.relative_trace(h, &self.reduce(&r.pow(&r.x(), j)))).collect();
        let mut out = traces.clone();
        for i in 0..traces.len() {
            for j in i + 1..traces.len() {
                for c in 1..=4 {
                    out.push(r.add(&traces[i], &r.scale(&traces[j], &self.field().from_i64(c))));
                }
            }
        }
        out
    }

    /// An element whose stabiliser is exactly `h`. Over a finite base field
    /// falls back to scanning all of `L` in coordinate order.
    pub fn primitive_element(&self, h: &Subgroup) -> Option<Poly<F>> {
        if let Some(y) = self.fixed_field_candidates(h).into_iter().find(|y| self.stabilizer(y) == *h) {
            return Some(y);
        }
        let elems = self.field().elements();
        let total = elems.len().checked_pow(self.degree() as u32).filter(|&t| t > 0 && t <= 1 << 16)?;
        (0..total).find_map(|mut code| {
            let coeffs = (0..self.degree())
                .map(|_| {
                    let e = elems[code % elems.len()].clone();
                    code /= elems.len();
                    e
                })
                .collect();
            let y = self.ring.trim(coeffs);
            (self.stabilizer(&y) == *h).then_some(y)
        })
    }
}

/// `Φ_m` by exact division of `X^m − 1` by `Φ_d` for proper divisors `d`.
pub fn cyclotomic_polynomial(m: usize) -> Poly<Rationals> {
    let r = PolyRing::new(Rationals);
    let mut f = {
        let mut c = vec![0i64; m + 1];
        c[0] = -1;
        c[m] = 1;
        r.from_i64s(&c)
    };
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        f = r.divrem(&f, &cyclotomic_polynomial(d)).0;
    }
    f
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Units of `ℤ/m`, ascending.
pub fn units_mod(m: usize) -> Vec<usize> {
    (1..m.max(2)).filter(|&u| gcd(u, m) == 1).collect()
}

/// `ℚ(ζ_m)` with `(ℤ/m)^×` acting by `ζ ↦ ζ^u`; group element `k` is the `k`-th unit.
pub fn cyclotomic(m: usize) -> Result<GaloisExtension<Rationals>> {
    if m < 3 {
        return Err(Error::input("cyclotomic extensions need m ≥ 3"));
    }
    let r = PolyRing::new(Rationals);
    let f = cyclotomic_polynomial(m);
    let units = units_mod(m);
    let autos = units.iter().map(|&u| r.rem(&r.pow(&r.x(), u), &f)).collect();
    let labels = units.iter().map(|u| u.to_string()).collect();
    GaloisExtension::new(Rationals, f, autos, Some(labels), &format!("(Z/{m})^x"))
}

/// `ℚ(√d)` for a non-square integer `d`.
pub fn quadratic(d: i64) -> Result<GaloisExtension<Rationals>> {
    let r = PolyRing::new(Rationals);
    let f = r.from_i64s(&[-d, 0, 1]);
    if !is_irreducible_rational(&f)? {
        return Err(Error::input(format!("{d} is a square")));
    }
    GaloisExtension::new(Rationals, f, vec![r.x(), r.from_i64s(&[0, -1])], Some(vec!["1".into(), "s".into()]), "C2")
}

/// Least monic irreducible of degree `k` over GF(q), coefficients compared
/// from the constant term up as base-q digits.
pub fn least_irreducible(field: &FiniteField, k: usize) -> Poly<FiniteField> {
    let ring = PolyRing::new(field.clone());
    let q = field.order();
    (0..q.pow(k as u32))
        .map(|mut code| {
            let mut c: Vec<u32> = (0..k)
                .map(|_| {
                    let v = (code % q) as u32;
                    code /= q;
                    v
                })
                .collect();
            c.push(1);
            c
        })
        .find(|c| is_irreducible(&ring, c))
        .expect("irreducibles exist in every degree")
}

/// `GF(q^k)/GF(q)`, the `j`-th group element being the `j`-th Frobenius power.
pub fn finite_field_extension(q: u64, k: usize) -> Result<GaloisExtension<FiniteField>> {
    let field = FiniteField::new(q)?;
    if q.checked_pow(k as u32).is_none_or(|qk| qk > 1 << 16) {
        return Err(Error::capability(format!("GF({q}^{k}) is too large")));
    }
    let f = least_irreducible(&field, k);
    let ring = PolyRing::new(field.clone());
    let mut autos = vec![ring.rem(&ring.x(), &f)];
    for j in 1..k {
        let prev = autos[j - 1].clone();
        autos.push(ring.powmod(&prev, q, &f));
    }
    let labels = (0..k).map(|j| if j == 0 { "id".into() } else { format!("Frob^{j}") }).collect();
    GaloisExtension::new(field, f, autos, Some(labels), &format!("C{k}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;

    #[test]
    fn cyclotomic_polynomials() {
        let r = PolyRing::new(Rationals);
        assert_eq!(cyclotomic_polynomial(5), r.from_i64s(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(8), r.from_i64s(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), r.from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(7).len(), 7);
    }

    #[test]
    fn cyclotomic_groups() {
        let l = cyclotomic(8).unwrap();
        assert_eq!(l.group.order(), 4);
        assert!(l.group.is_abelian());
        // (Z/8)^x is not cyclic: every element squares to 1
        assert!(l.group.elements().all(|k| l.group.mul(k, k) == 0));
        let l = cyclotomic(7).unwrap();
        assert_eq!(l.group.order(), 6);
        assert!(l.group.elements().any(|k| l.group.element_order(k) == 6));
    }

    #[test]
    fn min_polys_and_traces() {
        let l = cyclotomic(8).unwrap();
        let r = &l.ring;
        // ζ + ζ^7 = √2 has min poly X^2 − 2
        let k7 = l.group.find_label("7").unwrap();
        let h = Subgroup::new(l.group.clone(), vec![0, k7]).unwrap();
        let s = l.relative_trace(&h, &r.x());
        assert_eq!(l.min_poly(&s), r.from_i64s(&[-2, 0, 1]));
        assert_eq!(l.stabilizer(&s), h);
        assert_eq!(l.min_poly(&r.x()), cyclotomic_polynomial(8));
        assert_eq!(l.min_poly(&[rat_int(3)]), r.from_i64s(&[-3, 1]));
    }

    #[test]
    fn finite_field_frobenius() {
        let l = finite_field_extension(2, 2).unwrap();
        assert_eq!(l.modulus, vec![1, 1, 1]);
        assert_eq!(l.autos[1], vec![1, 1]); // X^2 = X + 1
        let l = finite_field_extension(3, 4).unwrap();
        assert_eq!(l.group.order(), 4);
        assert!(l.group.elements().any(|k| l.group.element_order(k) == 4));
        assert!(finite_field_extension(4, 2).is_ok());
    }

    #[test]
    fn rejects_inconsistent_data() {
        let r = PolyRing::new(Rationals);
        let f = r.from_i64s(&[-2, 0, 1]);
        assert!(GaloisExtension::new(Rationals, f.clone(), vec![r.x(), r.x()], None, "bad").is_err());
        assert!(GaloisExtension::new(Rationals, f, vec![r.x(), r.from_i64s(&[1, 1])], None, "bad").is_err());
        assert!(quadratic(4).is_err());
    }
}
