//! Galois-algebra witnesses: an étale algebra `L′ = F[X]/(f_c)` with a finite
//! group `A = {a_1 = 1, …, a_d}` acting by `X ↦ x_k`, roots `z_j` of the
//! minimal polynomial of a generator of `E`, and per-valuation blocks.
//!
//! Group element `k` (0-based, identity first) acts on `L′` by substituting
//! `x_k` for `X`; the data is consistent when `a_k ∘ a_l = a_{kl}`.

mod check;
mod extract;
mod generate;
mod lemma28;

pub use check::{check_obs53, check_phi, check_prop54, check_psi, check_theta, Verdict};
pub use extract::{extract_solution, BlockReport, Extraction};
pub use generate::{derive_side, induced_algebra_witness, Scenario};
pub use lemma28::{lemma28_certificate, Lemma28Certificate};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{GroupHom, GroupRef, Subgroup};
use crate::poly::{Poly, PolyRing};
use crate::sexp::Sexp;

/// `F[X]/(f_c)` with `f_c = X^d + c_{d−1}X^{d−1} + ⋯ + c_0`; elements are
/// coordinate vectors of length `d`.
#[derive(Debug, Clone)]
pub struct GaloisAlgebra<F: Field> {
    pub ring: PolyRing<F>,
    pub modulus: Poly<F>,
}

impl<F: Field> GaloisAlgebra<F> {
    pub fn new(field: F, c: &[F::Elem]) -> Self {
        let mut m = c.to_vec();
        m.push(field.one());
        GaloisAlgebra { ring: PolyRing::new(field), modulus: m }
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn dim(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn to_vec(&self, p: &[F::Elem]) -> Vec<F::Elem> {
        let mut v = self.ring.rem(p, &self.modulus);
        v.resize(self.dim(), self.field().zero());
        v
    }

    pub fn poly(&self, v: &[F::Elem]) -> Poly<F> {
        self.ring.trim(v.to_vec())
    }

    pub fn one(&self) -> Vec<F::Elem> {
        self.to_vec(&self.ring.one())
    }

    pub fn scalar(&self, a: F::Elem) -> Vec<F::Elem> {
        self.to_vec(&self.ring.constant(a))
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.to_vec(&self.ring.add(a, b))
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.to_vec(&self.ring.sub(&self.poly(a), &self.poly(b)))
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.to_vec(&self.ring.mulmod(&self.poly(a), &self.poly(b), &self.modulus))
    }

    pub fn pow(&self, a: &[F::Elem], e: usize) -> Vec<F::Elem> {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// `Σ p_j · x^j` (the action of the automorphism `X ↦ x` on `p`).
    pub fn subst(&self, p: &[F::Elem], x: &[F::Elem]) -> Vec<F::Elem> {
        self.to_vec(&self.ring.compose_mod(&self.poly(p), &self.poly(x), &self.modulus))
    }

    pub fn is_zero(&self, a: &[F::Elem]) -> bool {
        a.iter().all(|c| self.field().is_zero(c))
    }
}

/// Product in `F[X]/(f_c)`.
pub fn algebra_mul<F: Field>(field: &F, c: &[F::Elem], x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
    GaloisAlgebra::new(field.clone(), c).mul(x, y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaBlock<F: Field> {
    pub y: Vec<F::Elem>,
    /// `h_0, …, h_{r−1}` of the monic polynomial satisfied by `y`.
    pub h: Vec<F::Elem>,
    /// Coefficients of `y`-powers giving a root of the part polynomial.
    pub w: Vec<F::Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisWitness<F: Field> {
    pub c: Vec<F::Elem>,
    pub x: Vec<Vec<F::Elem>>,
    pub u: Vec<F::Elem>,
    pub z: Vec<Vec<F::Elem>>,
    pub blocks: Vec<ThetaBlock<F>>,
}

/// Data of one part: the image `im β_i ≤ A`, coset representatives `S_i`
/// (identity first) and the minimal polynomial `g_i` of a generator of the
/// decomposition subfield of `E`.
#[derive(Debug, Clone)]
pub struct PartSide<F: Field> {
    pub image: Subgroup,
    pub coset_reps: Vec<usize>,
    pub g: Poly<F>,
}

impl<F: Field> PartSide<F> {
    pub fn new(image: Subgroup, g: Poly<F>) -> Self {
        let coset_reps = left_coset_reps(&image);
        PartSide { image, coset_reps, g }
    }

    pub fn r(&self) -> usize {
        self.coset_reps.len()
    }
}

/// First element of each left coset `aH`, in group order.
pub fn left_coset_reps(h: &Subgroup) -> Vec<usize> {
    let g = &h.parent;
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for a in g.elements() {
        if seen[a] {
            continue;
        }
        reps.push(a);
        for &x in h.elements() {
            seen[g.mul(a, x)] = true;
        }
    }
    reps
}

/// The group-theoretic and field data a witness is checked against.
#[derive(Debug, Clone)]
pub struct ProblemSide<F: Field> {
    pub field: F,
    pub a: GroupRef,
    pub b: GroupRef,
    pub beta: GroupHom,
    /// `psi[b][j′] = j` when `ψ^{-1}(b)` maps `ζ_{j′}` to `ζ_j`.
    pub psi: Vec<Vec<usize>>,
    /// Minimal polynomial of the generator `ζ` of `E`.
    pub g: Poly<F>,
    pub parts: Vec<PartSide<F>>,
}

impl<F: Field> ProblemSide<F> {
    pub fn new(field: F, beta: GroupHom, psi: Vec<Vec<usize>>, g: Poly<F>, parts: Vec<PartSide<F>>) -> Result<Self> {
        let ring = PolyRing::new(field.clone());
        let g = ring.trim(g);
        if g.len() < 2 || !ring.is_monic(&g) {
            return Err(Error::input("g must be monic of positive degree"));
        }
        let e = g.len() - 1;
        if !beta.is_epi() {
            return Err(Error::input("β must be surjective"));
        }
        let b = beta.codomain.clone();
        if psi.len() != b.order() {
            return Err(Error::input(format!("ψ-action has {} rows, B has order {}", psi.len(), b.order())));
        }
        for (k, row) in psi.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if sorted != (0..e).collect::<Vec<_>>() {
                return Err(Error::input(format!("ψ-action row {k} is not a permutation of 0..{e}")));
            }
        }
        for x in b.elements() {
            for y in b.elements() {
                let xy = b.mul(x, y);
                if (0..e).any(|j| psi[xy][j] != psi[x][psi[y][j]]) {
                    return Err(Error::input(format!("ψ-action is not an action at ({x}, {y})")));
                }
            }
        }
        if (1..b.order()).any(|x| (0..e).all(|j| psi[x][j] == j)) {
            return Err(Error::input("ψ-action is not faithful"));
        }
        if (0..e).any(|j| !b.elements().any(|x| psi[x][0] == j)) {
            return Err(Error::input("ψ-action is not transitive"));
        }
        for (i, p) in parts.iter().enumerate() {
            if *p.image.parent != *beta.domain {
                return Err(Error::input(format!("part {} is not a subgroup of A", i + 1)));
            }
            if p.r() * p.image.order() != beta.domain.order() {
                return Err(Error::input(format!("part {} has the wrong number of coset representatives", i + 1)));
            }
            if ring.trim(p.g.clone()).len() < 2 {
                return Err(Error::input(format!("part {} polynomial must have positive degree", i + 1)));
            }
        }
        Ok(ProblemSide { field, a: beta.domain.clone(), b, beta, psi, g, parts })
    }

    pub fn d(&self) -> usize {
        self.a.order()
    }

    pub fn e(&self) -> usize {
        self.g.len() - 1
    }

    /// Whether `E ≠ F`, i.e. the ψ-clauses are part of the problem.
    pub fn has_psi(&self) -> bool {
        self.e() > 1
    }

    pub fn check_dims(&self, w: &GaloisWitness<F>) -> Result<()> {
        let d = self.d();
        let bad = |what: &str| Err(Error::input(format!("witness dimension mismatch in {what}")));
        if w.c.len() != d || w.u.len() != d || w.x.len() != d || w.x.iter().any(|v| v.len() != d) {
            return bad("c, x or u");
        }
        if w.z.len() != self.e() || w.z.iter().any(|v| v.len() != d) {
            return bad("z");
        }
        if w.blocks.len() > self.parts.len() {
            return bad("blocks");
        }
        for (b, p) in w.blocks.iter().zip(&self.parts) {
            if b.y.len() != d || b.h.len() != p.r() || b.w.len() != p.r() {
                return bad("a part block");
            }
        }
        Ok(())
    }
}

fn vec_sexp<F: Field>(field: &F, v: &[F::Elem]) -> Sexp {
    Sexp::list(v.iter().map(|c| Sexp::atom(field.format_elem(c))).collect())
}

fn parse_vec<F: Field>(field: &F, s: &Sexp, what: &str) -> Result<Vec<F::Elem>> {
    s.expect_list(what)?
        .iter()
        .map(|a| field.parse_elem(a.expect_atom(what)?).map_err(|e| a.error(e.to_string())))
        .collect()
}

impl<F: Field> GaloisWitness<F> {
    pub fn to_sexp(&self, field: &F) -> Sexp {
        let mut items = vec![
            Sexp::tagged("c", vec![vec_sexp(field, &self.c)]),
            Sexp::tagged("x", self.x.iter().map(|v| vec_sexp(field, v)).collect()),
            Sexp::tagged("u", vec![vec_sexp(field, &self.u)]),
            Sexp::tagged("z", self.z.iter().map(|v| vec_sexp(field, v)).collect()),
        ];
        for b in &self.blocks {
            items.push(Sexp::tagged(
                "block",
                vec![
                    Sexp::tagged("y", vec![vec_sexp(field, &b.y)]),
                    Sexp::tagged("h", vec![vec_sexp(field, &b.h)]),
                    Sexp::tagged("w", vec![vec_sexp(field, &b.w)]),
                ],
            ));
        }
        Sexp::tagged("witness", items)
    }

    pub fn from_sexp(field: &F, s: &Sexp) -> Result<Self> {
        if s.head() != Some("witness") {
            return Err(s.error("expected (witness ...)"));
        }
        let one = |node: &Sexp, key: &str| -> Result<Vec<F::Elem>> {
            let f = node.expect_field(key)?;
            match f.tail() {
                [v] => parse_vec(field, v, key),
                _ => Err(f.error(format!("({key} ...) takes one vector"))),
            }
        };
        let many = |key: &str| -> Result<Vec<Vec<F::Elem>>> {
            s.expect_field(key)?.tail().iter().map(|v| parse_vec(field, v, key)).collect()
        };
        let blocks = s
            .tail()
            .iter()
            .filter(|n| n.head() == Some("block"))
            .map(|n| Ok(ThetaBlock { y: one(n, "y")?, h: one(n, "h")?, w: one(n, "w")? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(GaloisWitness { c: one(s, "c")?, x: many("x")?, u: one(s, "u")?, z: many("z")?, blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, FiniteField, Rationals};
    use crate::group::catalog::by_name;
    use crate::sexp::parse_one;
    use proptest::prelude::*;

    #[test]
    fn algebra_examples() {
        let q = |v: &[i64]| v.iter().map(|&n| rat_int(n)).collect::<Vec<_>>();
        let c = q(&[-2, 0]);
        assert_eq!(algebra_mul(&Rationals, &c, &q(&[3, 5]), &q(&[1, 0])), q(&[3, 5]));
        assert_eq!(algebra_mul(&Rationals, &c, &q(&[0, 1]), &q(&[0, 1])), q(&[2, 0]));
        let f2 = FiniteField::new(2).unwrap();
        assert_eq!(algebra_mul(&f2, &[1, 1], &[0, 1], &[1, 1]), vec![1, 0]);
    }

    proptest! {
        #[test]
        fn algebra_laws(c in prop::collection::vec(0u32..3, 3), a in prop::collection::vec(0u32..3, 3),
                        b in prop::collection::vec(0u32..3, 3), e in prop::collection::vec(0u32..3, 3)) {
            let alg = GaloisAlgebra::new(FiniteField::new(3).unwrap(), &c);
            prop_assert_eq!(alg.mul(&a, &b), alg.mul(&b, &a));
            prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &e), alg.mul(&a, &alg.mul(&b, &e)));
            prop_assert_eq!(alg.mul(&a, &alg.one()), a.clone());
            prop_assert_eq!(alg.mul(&a, &alg.add(&b, &e)), alg.add(&alg.mul(&a, &b), &alg.mul(&a, &e)));
        }
    }

    #[test]
    fn coset_reps_start_with_identity() {
        let s3 = by_name("S3").unwrap();
        let h = Subgroup::new(s3.clone(), vec![0, s3.find_label("(1 2)").unwrap()]).unwrap();
        let reps = left_coset_reps(&h);
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0], 0);
    }

    #[test]
    fn witness_text_round_trip() {
        let f = FiniteField::new(2).unwrap();
        let w: GaloisWitness<FiniteField> = GaloisWitness {
            c: vec![1, 1],
            x: vec![vec![0, 1], vec![1, 1]],
            u: vec![1, 0],
            z: vec![vec![1, 0]],
            blocks: vec![ThetaBlock { y: vec![1, 0], h: vec![1], w: vec![1] }],
        };
        let text = w.to_sexp(&f).to_pretty(60);
        assert_eq!(GaloisWitness::from_sexp(&f, &parse_one(&text).unwrap()).unwrap(), w);
    }
}
