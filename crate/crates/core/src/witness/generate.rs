//! Witnesses built from an explicit Galois extension `L/F` and an embedding
//! `Gal(L/F) ↪ A`: the induced algebra `∏_{A/Gal} L`, generated by a tuple
//! of pairwise non-conjugate primitive elements.

use super::{left_coset_reps, GaloisAlgebra, GaloisWitness, PartSide, ProblemSide, ThetaBlock};
use crate::error::{Error, Result};
use crate::extension::GaloisExtension;
use crate::field::Field;
use crate::group::{GroupHom, Subgroup};
use crate::linalg::solve;
use crate::poly::Poly;
use crate::valuation::ValuedField;

/// Field-side data behind a [`ProblemSide`] derived from an extension.
#[derive(Debug, Clone)]
pub struct Scenario<F: Field> {
    /// `φ: Gal(L/F) ↪ A`.
    pub embed: GroupHom,
    /// `β ∘ φ`, the restriction `Gal(L/F) ↠ Gal(E/F) ≅ B`.
    pub rho: GroupHom,
    /// Conjugates `ζ_1 = ζ, …, ζ_e` of the generator of `E`.
    pub zetas: Vec<Poly<F>>,
    /// Per part, the generator of `E` ∩ (fixed field of the part) whose
    /// minimal polynomial is `g_i`.
    pub etas: Vec<Poly<F>>,
}

fn subgroup_where(parent: &crate::group::GroupRef, pred: impl Fn(usize) -> bool) -> Subgroup {
    Subgroup::new(parent.clone(), parent.elements().filter(|&x| pred(x)).collect()).expect("preimage of a subgroup")
}

/// Problem data for `β: A ↠ B` over `L/F` with `E = L^{ker(β∘φ)}`; `parts`
/// are subgroups of `A` used as part images.
pub fn derive_side<F: Field>(
    ext: &GaloisExtension<F>,
    embed: &GroupHom,
    beta: &GroupHom,
    parts: &[Subgroup],
) -> Result<(ProblemSide<F>, Scenario<F>)> {
    if *embed.domain != *ext.group {
        return Err(Error::input("embedding must start at the Galois group of the extension"));
    }
    if !embed.is_injective() {
        return Err(Error::input("embedding of the Galois group is not injective"));
    }
    let rho = embed.then(beta)?;
    if !rho.is_epi() {
        return Err(Error::input("β ∘ φ is not surjective"));
    }
    let gal = &ext.group;
    let kernel = subgroup_where(gal, |s| rho.apply(s) == 0);
    let zeta = ext
        .primitive_element(&kernel)
        .ok_or_else(|| Error::capability("no primitive element found for the fixed field of ker(β∘φ)"))?;
    let zetas = ext.conjugates(&zeta);
    let g = ext.min_poly(&zeta);
    let b = &beta.codomain;
    let psi = b
        .elements()
        .map(|x| {
            let s = gal.elements().find(|&s| rho.apply(s) == x).expect("ρ is onto");
            zetas
                .iter()
                .map(|z| zetas.iter().position(|w| *w == ext.apply(s, z)).expect("conjugates are closed"))
                .collect()
        })
        .collect();
    let mut part_sides = Vec::new();
    let mut etas = Vec::new();
    for h in parts {
        let targets: Vec<usize> = h.elements().iter().map(|&a| beta.apply(a)).collect();
        let pre = subgroup_where(gal, |s| targets.contains(&rho.apply(s)));
        let eta = ext
            .primitive_element(&pre)
            .ok_or_else(|| Error::capability("no primitive element found for a part fixed field"))?;
        part_sides.push(PartSide::new(h.clone(), ext.min_poly(&eta)));
        etas.push(eta);
    }
    let side = ProblemSide::new(ext.field().clone(), beta.clone(), psi, g, part_sides)?;
    Ok((side, Scenario { embed: embed.clone(), rho, zetas, etas }))
}

/// `r` pairwise non-conjugate primitive elements of `L`, first found first.
fn component_generators<F: Field>(ext: &GaloisExtension<F>, r: usize) -> Result<Vec<Poly<F>>> {
    let ring = &ext.ring;
    let field = ext.field();
    let trivial = Subgroup::trivial(ext.group.clone());
    let mut chosen: Vec<(Poly<F>, Poly<F>)> = Vec::new();
    let consider = |y: Poly<F>, chosen: &mut Vec<(Poly<F>, Poly<F>)>| {
        if chosen.len() < r && ext.stabilizer(&y) == trivial {
            let m = ext.min_poly(&y);
            if chosen.iter().all(|(_, n)| *n != m) {
                chosen.push((y, m));
            }
        }
    };
    match field.size() {
        None => {
            let theta = ext.reduce(&ring.x());
            for b in 0..4 {
                for s in 1..=12 {
                    let y = ring.add(&ring.scale(&theta, &field.from_i64(s)), &ring.constant(field.from_i64(b)));
                    consider(ext.reduce(&y), &mut chosen);
                }
            }
        }
        Some(_) => {
            let elems = field.elements();
            let k = ext.degree();
            let total = elems
                .len()
                .checked_pow(k as u32)
                .filter(|&t| t <= 1 << 16)
                .ok_or_else(|| Error::capability("extension too large to enumerate primitive elements"))?;
            for mut code in 0..total {
                let coeffs = (0..k)
                    .map(|_| {
                        let e = elems[code % elems.len()].clone();
                        code /= elems.len();
                        e
                    })
                    .collect();
                consider(ring.trim(coeffs), &mut chosen);
                if chosen.len() == r {
                    break;
                }
            }
        }
    }
    if chosen.len() < r {
        return Err(Error::capability(format!(
            "need {r} pairwise non-conjugate primitive elements, found {}",
            chosen.len()
        )));
    }
    Ok(chosen.into_iter().map(|(y, _)| y).collect())
}

/// `∏_m L` presented as `F[X]/(f_c)` with `X = (y_m)_m`.
struct Induced<'a, F: Field> {
    ext: &'a GaloisExtension<F>,
    gens: Vec<Poly<F>>,
    /// CRT idempotents `e_m ≡ δ_{m,m′} mod mins[m′]`.
    idem: Vec<Poly<F>>,
    alg: GaloisAlgebra<F>,
}

impl<'a, F: Field> Induced<'a, F> {
    fn new(ext: &'a GaloisExtension<F>, gens: Vec<Poly<F>>) -> Self {
        let ring = &ext.ring;
        let mins: Vec<Poly<F>> = gens.iter().map(|y| ext.min_poly(y)).collect();
        let fc = mins.iter().fold(ring.one(), |acc, m| ring.mul(&acc, m));
        let idem = (0..mins.len())
            .map(|m| {
                let others =
                    mins.iter().enumerate().filter(|&(n, _)| n != m).fold(ring.one(), |acc, (_, p)| ring.mul(&acc, p));
                let inv = ring.inv_mod(&others, &mins[m]).expect("distinct irreducible factors are coprime");
                ring.mulmod(&others, &inv, &fc)
            })
            .collect();
        let c = fc[..fc.len() - 1].to_vec();
        Induced { ext, gens, idem, alg: GaloisAlgebra::new(ext.field().clone(), &c) }
    }

    /// The algebra element with component `m` equal to `vals[m]`.
    fn encode(&self, vals: &[Poly<F>]) -> Vec<F::Elem> {
        let ring = &self.ext.ring;
        let k = self.ext.degree();
        let f = self.ext.field();
        let mut acc = Vec::new();
        for (m, v) in vals.iter().enumerate() {
            let powers: Vec<Poly<F>> =
                (0..k).scan(ring.one(), |p, _| Some(std::mem::replace(p, self.ext.mul(p, &self.gens[m])))).collect();
            let coord = |p: &Poly<F>, i: usize| p.get(i).cloned().unwrap_or_else(|| f.zero());
            let rows: Vec<Vec<F::Elem>> = (0..k).map(|i| powers.iter().map(|p| coord(p, i)).collect()).collect();
            let rhs: Vec<F::Elem> = (0..k).map(|i| coord(v, i)).collect();
            let q = solve(f, &rows, &rhs).expect("component generator is primitive");
            acc = ring.add(&acc, &ring.mul(&ring.trim(q), &self.idem[m]));
        }
        self.alg.to_vec(&acc)
    }
}

/// Builds the witness for `side`/`scen` over `ext`. Part blocks need the
/// embedding to be onto `A`; `primes[i]` is the prime of part `i`.
pub fn induced_algebra_witness<F: ValuedField>(
    ext: &GaloisExtension<F>,
    side: &ProblemSide<F>,
    scen: &Scenario<F>,
    primes: &[u64],
    seed: u64,
) -> Result<GaloisWitness<F>> {
    let embed = &scen.embed;
    let a = &side.a;
    if *embed.codomain != **a {
        return Err(Error::input("embedding target differs from A"));
    }
    if !side.parts.is_empty() && primes.len() != side.parts.len() {
        return Err(Error::input(format!("{} parts but {} primes", side.parts.len(), primes.len())));
    }
    let gal = &ext.group;
    let image = Subgroup::new(a.clone(), embed.image_set())?;
    let reps = left_coset_reps(&image);
    let r = reps.len();
    if !side.parts.is_empty() && r != 1 {
        return Err(Error::capability("part blocks are only generated when the embedding is onto A"));
    }
    let pre = |x: usize| gal.elements().find(|&s| embed.apply(s) == x).expect("element of the image");
    // a·t_m = t_{m'}·φ(g)
    let moves: Vec<Vec<(usize, usize)>> = a
        .elements()
        .map(|x| {
            (0..r)
                .map(|m| {
                    let xt = a.mul(x, reps[m]);
                    let m2 = (0..r).find(|&n| image.contains(a.mul(a.inv(reps[n]), xt))).expect("cosets cover A");
                    (m2, pre(a.mul(a.inv(reps[m2]), xt)))
                })
                .collect()
        })
        .collect();
    let ind = Induced::new(ext, component_generators(ext, r)?);
    let alg = &ind.alg;
    let mut x = Vec::with_capacity(a.order());
    for k in a.elements() {
        let mut vals = vec![Vec::new(); r];
        for (m, &(m2, g)) in moves[k].iter().enumerate() {
            vals[m2] = ext.apply(g, &ind.gens[m]);
        }
        x.push(ind.encode(&vals));
    }
    let mut disc = alg.one();
    for k in a.elements() {
        for l in a.elements().filter(|&l| l != k) {
            disc = alg.mul(&disc, &alg.sub(&x[k], &x[l]));
        }
    }
    let u = alg.to_vec(
        &alg.ring
            .inv_mod(&alg.poly(&disc), &alg.modulus)
            .ok_or_else(|| Error::Internal("discriminant product is not a unit".into()))?,
    );
    // σ_m with ρ(σ_m) = β(t_m); σ_0 = id
    let sigmas: Vec<usize> = reps
        .iter()
        .map(|&t| {
            let target = side.beta.apply(t);
            gal.elements().find(|&s| scen.rho.apply(s) == target).expect("ρ is onto")
        })
        .collect();
    let z = scen
        .zetas
        .iter()
        .map(|zeta| {
            let vals: Vec<Poly<F>> = sigmas.iter().map(|&s| ext.apply(gal.inv(s), zeta)).collect();
            ind.encode(&vals)
        })
        .collect();
    let mut blocks = Vec::new();
    for (i, part) in side.parts.iter().enumerate() {
        let d = subgroup_where(gal, |s| part.image.contains(embed.apply(s)));
        let yel = F::decomposition_element(ext, primes[i], &d, seed)?
            .ok_or_else(|| Error::capability(format!("no decomposition element found for part {}", i + 1)))?;
        let translates: Vec<Poly<F>> = part.coset_reps.iter().map(|&t| ext.apply(pre(t), &yel)).collect();
        let mut h = ext.product_over_base(&translates)?;
        h.pop();
        let f = ext.field();
        let powers: Vec<Poly<F>> =
            (0..part.r()).scan(ext.ring.one(), |p, _| Some(std::mem::replace(p, ext.mul(p, &yel)))).collect();
        let coord = |p: &Poly<F>, j: usize| p.get(j).cloned().unwrap_or_else(|| f.zero());
        let k = ext.degree();
        let rows: Vec<Vec<F::Elem>> = (0..k).map(|j| powers.iter().map(|p| coord(p, j)).collect()).collect();
        let rhs: Vec<F::Elem> = (0..k).map(|j| coord(&scen.etas[i], j)).collect();
        let w =
            solve(f, &rows, &rhs).ok_or_else(|| Error::Internal("part generator is not a polynomial in y".into()))?;
        blocks.push(ThetaBlock { y: ind.encode(&[yel]), h, w });
    }
    let wit = GaloisWitness { c: alg.modulus[..alg.dim()].to_vec(), x, u, z, blocks };
    let v = super::check_obs53(&wit, side, r == 1)?;
    if !v.holds() {
        return Err(Error::Internal(format!("generated witness {v}")));
    }
    for (i, &p) in primes.iter().enumerate().take(side.parts.len()) {
        let v = super::check_theta(&wit, side, i, p)?;
        if !v.holds() {
            return Err(Error::Internal(format!("generated witness {v}")));
        }
    }
    Ok(wit)
}
