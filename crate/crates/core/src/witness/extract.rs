//! From a witness back to a Galois extension `L = F[X]/(f)` for an
//! irreducible factor `f` of `f_c`, and the embedding `Gal(L/F) ↪ A`.

use super::{check_obs53, check_theta, GaloisAlgebra, GaloisWitness, ProblemSide};
use crate::error::{Error, Result};
use crate::extension::GaloisExtension;
use crate::field::Field;
use crate::group::{GroupHom, Subgroup};
use crate::poly::{Poly, PolyRing};
use crate::valuation::ValuedField;

#[derive(Debug, Clone)]
pub struct BlockReport<F: Field> {
    /// The unique irreducible factor of `h_i` reducing to `X^{s−1}(X − 1)`.
    pub factor: Poly<F>,
    /// Coset representative `a_k ∈ S_i` whose translate of `y_i` is a root of `factor` in `L`.
    pub translate: usize,
    /// `a_k · im β_i · a_k⁻¹ ≤ A`.
    pub conjugate: Subgroup,
}

#[derive(Debug, Clone)]
pub struct Extraction<F: Field> {
    pub f: Poly<F>,
    /// `L = F[X]/(f)`; automorphism `i` is `X ↦ π(x_a)` for `a = g_elems[i]`.
    pub ext: GaloisExtension<F>,
    /// `G = {a ∈ A : a(ker π) ⊆ ker π}`, ascending.
    pub g_elems: Vec<usize>,
    /// `Gal(L/F) ↪ A`.
    pub phi: GroupHom,
    /// `π(z_1), …, π(z_e)`.
    pub zetas: Vec<Poly<F>>,
    pub proper: bool,
    pub blocks: Vec<BlockReport<F>>,
}

fn m_shaped<F: ValuedField>(field: &F, h: &[F::Elem], p: u64) -> Result<bool> {
    let s = h.len() - 1;
    for (j, c) in h[..s].iter().enumerate() {
        let v = if j + 1 == s { field.add(&field.one(), c) } else { c.clone() };
        if !field.in_maximal_ideal(&v, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Requires Φ′ and Ψ (and Θ_i for each given prime) to hold on `w`.
pub fn extract_solution<F: ValuedField>(
    w: &GaloisWitness<F>,
    side: &ProblemSide<F>,
    primes: &[u64],
    seed: u64,
) -> Result<Extraction<F>> {
    let v = check_obs53(w, side, false)?;
    if let Some(atom) = v.failure {
        return Err(Error::input(format!("witness fails at {atom}")));
    }
    for (i, &p) in primes.iter().enumerate() {
        if let Some(atom) = check_theta(w, side, i, p)?.failure {
            return Err(Error::input(format!("witness fails at {atom}")));
        }
    }
    let field = side.field.clone();
    let alg = GaloisAlgebra::new(field.clone(), &w.c);
    let ring = PolyRing::new(field.clone());
    let factors = field.factor_poly(&alg.modulus, seed)?;
    let f = factors.into_iter().next().ok_or_else(|| Error::Internal("f_c has no factors".into()))?;
    let pi = |v: &[F::Elem]| ring.rem(&alg.poly(v), &f);
    let a = &side.a;
    let g_elems: Vec<usize> = a.elements().filter(|&k| ring.compose_mod(&f, &pi(&w.x[k]), &f).is_empty()).collect();
    let autos: Vec<Poly<F>> = g_elems.iter().map(|&k| pi(&w.x[k])).collect();
    let labels = a.labels().map(|_| g_elems.iter().map(|&k| a.label(k)).collect());
    let ext = GaloisExtension::new(field.clone(), f.clone(), autos, labels, "Gal(L/F)")?;
    let phi = GroupHom::new(ext.group.clone(), a.clone(), g_elems.clone())
        .map_err(|e| Error::Internal(format!("extracted action is not a homomorphism: {e}")))?;

    let zetas: Vec<Poly<F>> = w.z.iter().map(|z| pi(z)).collect();
    if (0..zetas.len()).any(|j| zetas[..j].contains(&zetas[j])) {
        return Err(Error::Internal("images of the z_j in L are not distinct".into()));
    }
    // β∘φ agrees with the action on the ζ_j
    for (i, &k) in g_elems.iter().enumerate() {
        let row = &side.psi[side.beta.apply(k)];
        for (j2, z) in zetas.iter().enumerate() {
            if ext.apply(i, z) != zetas[row[j2]] {
                return Err(Error::Internal(format!("σ_{} disagrees with ψ on ζ_{}", k + 1, j2 + 1)));
            }
        }
    }

    let mut blocks = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        let (block, part) = (&w.blocks[i], &side.parts[i]);
        let mut h = block.h.clone();
        h.push(field.one());
        let mut shaped = Vec::new();
        for q in field.factor_poly(&h, seed)? {
            if m_shaped(&field, &q, p)? {
                shaped.push(q);
            }
        }
        if shaped.len() != 1 {
            return Err(Error::input(format!(
                "block {}: {} factors of h have the reduction shape, expected 1",
                i + 1,
                shaped.len()
            )));
        }
        let factor = shaped.pop().unwrap();
        let translate = part
            .coset_reps
            .iter()
            .copied()
            .find(|&k| ring.compose_mod(&factor, &pi(&alg.subst(&block.y, &w.x[k])), &f).is_empty())
            .ok_or_else(|| {
                Error::input(format!("block {}: no translate of y is a root of the shaped factor", i + 1))
            })?;
        let conjugate = part.image.conjugate(a.inv(translate));
        blocks.push(BlockReport { factor, translate, conjugate });
    }
    Ok(Extraction { proper: g_elems.len() == a.order(), f, ext, g_elems, phi, zetas, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::group::catalog::cyclic;
    use crate::witness::{GaloisWitness, ProblemSide};

    fn gf4_side() -> ProblemSide<FiniteField> {
        let c2 = cyclic(2).into_ref();
        let f = FiniteField::new(2).unwrap();
        let beta = GroupHom::trivial(c2, cyclic(1).into_ref());
        ProblemSide::new(f, beta, vec![vec![0]], vec![0, 1], vec![]).unwrap()
    }

    #[test]
    fn gf4_over_gf2() {
        let side = gf4_side();
        let w: GaloisWitness<FiniteField> = GaloisWitness {
            c: vec![1, 1],
            x: vec![vec![0, 1], vec![1, 1]],
            u: vec![1, 0],
            z: vec![vec![0, 0]],
            blocks: vec![],
        };
        let ex = extract_solution(&w, &side, &[], 0).unwrap();
        assert_eq!(ex.f, vec![1, 1, 1]);
        assert!(ex.proper);
        assert_eq!(ex.phi.images(), &[0, 1]);
        // the non-identity element acts as X ↦ X²
        let sq = ex.ext.mul(&[0, 1], &[0, 1]);
        assert_eq!(ex.ext.autos[1], sq);
    }

    #[test]
    fn failing_witness_names_the_atom() {
        let side = gf4_side();
        let w: GaloisWitness<FiniteField> = GaloisWitness {
            c: vec![1, 1],
            x: vec![vec![0, 1], vec![1, 1]],
            u: vec![0, 1],
            z: vec![vec![0, 0]],
            blocks: vec![],
        };
        let e = extract_solution(&w, &side, &[], 0).unwrap_err();
        assert!(e.to_string().contains("phi.unit"), "{e}");
    }
}
