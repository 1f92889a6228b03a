//! Direct checkers. Each returns the first failing atom in a fixed order;
//! the compiled formulas label their clauses with the same names.

use std::fmt;

use super::{GaloisAlgebra, GaloisWitness, ProblemSide};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::valuation::ValuedField;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub failure: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { failure: None }
    }

    pub fn fail(atom: impl Into<String>) -> Self {
        Verdict { failure: Some(atom.into()) }
    }

    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => f.write_str("holds"),
            Some(a) => write!(f, "fails at {a}"),
        }
    }
}

macro_rules! require {
    ($cond:expr, $($label:tt)*) => {
        if !$cond {
            return Ok(Verdict::fail(format!($($label)*)));
        }
    };
}

pub fn check_phi<F: ValuedField>(
    w: &GaloisWitness<F>,
    side: &ProblemSide<F>,
    require_irreducible: bool,
) -> Result<Verdict> {
    side.check_dims(w)?;
    let alg = GaloisAlgebra::new(side.field.clone(), &w.c);
    let a = &side.a;
    let d = side.d();
    for k in 0..d {
        require!(alg.is_zero(&alg.subst(&alg.modulus, &w.x[k])), "phi.root.{}", k + 1);
    }
    let mut prod = w.u.clone();
    for k in 0..d {
        for l in (0..d).filter(|&l| l != k) {
            prod = alg.mul(&prod, &alg.sub(&w.x[k], &w.x[l]));
        }
    }
    require!(prod == alg.one(), "phi.unit");
    for k in 0..d {
        for l in 0..d {
            require!(alg.subst(&w.x[l], &w.x[k]) == w.x[a.mul(k, l)], "phi.compat.{}.{}", k + 1, l + 1);
        }
    }
    if require_irreducible {
        require!(side.field.poly_is_irreducible(&alg.modulus)?, "phi.irreducible");
    }
    Ok(Verdict::pass())
}

pub fn check_psi<F: ValuedField>(w: &GaloisWitness<F>, side: &ProblemSide<F>) -> Result<Verdict> {
    side.check_dims(w)?;
    let alg = GaloisAlgebra::new(side.field.clone(), &w.c);
    let e = side.e();
    for j in 0..e {
        require!(alg.is_zero(&alg.subst(&side.g, &w.z[j])), "psi.root.{}", j + 1);
    }
    for j in 0..e {
        for j2 in j + 1..e {
            require!(w.z[j] != w.z[j2], "psi.distinct.{}.{}", j + 1, j2 + 1);
        }
    }
    for k in side.a.elements() {
        let row = &side.psi[side.beta.apply(k)];
        for j2 in 0..e {
            require!(alg.subst(&w.z[j2], &w.x[k]) == w.z[row[j2]], "psi.compat.{}.{}", k + 1, j2 + 1);
        }
    }
    Ok(Verdict::pass())
}

/// Block `i` (0-based) against the valuation of the prime `p`.
pub fn check_theta<F: ValuedField>(w: &GaloisWitness<F>, side: &ProblemSide<F>, i: usize, p: u64) -> Result<Verdict> {
    side.check_dims(w)?;
    let (Some(block), Some(part)) = (w.blocks.get(i), side.parts.get(i)) else {
        return Err(Error::input(format!("no block {} in witness or problem", i + 1)));
    };
    let alg = GaloisAlgebra::new(side.field.clone(), &w.c);
    let fld = &side.field;
    let t = i + 1;
    let y = &block.y;
    let act = |k: usize| alg.subst(y, &w.x[k]);
    for &k in part.image.elements() {
        require!(act(k) == *y, "theta{t}.fixed.{}", k + 1);
    }
    let mut prod = alg.one();
    for &k in &part.coset_reps {
        for &l in part.coset_reps.iter().filter(|&&l| l != k) {
            prod = alg.mul(&prod, &alg.sub(&act(k), &act(l)));
        }
    }
    require!(!fld.is_zero(&prod[0]) && prod[1..].iter().all(|c| fld.is_zero(c)), "theta{t}.distinct");
    // shape of h before its root, so a corrupted coefficient is reported as such
    let r = part.r();
    for j in 0..r {
        let v = if j + 1 == r { fld.add(&fld.one(), &block.h[j]) } else { block.h[j].clone() };
        require!(fld.in_maximal_ideal(&v, p)?, "theta{t}.m.{j}");
    }
    let mut h = block.h.clone();
    h.push(fld.one());
    require!(alg.is_zero(&alg.subst(&h, y)), "theta{t}.hpoly");
    require!(alg.is_zero(&alg.subst(&part.g, &alg.subst(&block.w, y))), "theta{t}.g");
    let d = side.d();
    // with E = F the z-coordinate carries no information
    let z_exps = if side.has_psi() { d } else { 1 };
    let zp: Vec<Vec<F::Elem>> = (0..z_exps).map(|a| alg.pow(&w.z[0], a)).collect();
    let yp: Vec<Vec<F::Elem>> = (0..d).map(|b| alg.pow(y, b)).collect();
    let monomials: Vec<Vec<F::Elem>> = zp.iter().flat_map(|za| yp.iter().map(|yb| alg.mul(za, yb))).collect();
    require!(rank(fld, &monomials) == d, "theta{t}.span");
    Ok(Verdict::pass())
}

/// `Φ ∧ Ψ`, the Ψ part only when `E ≠ F`.
pub fn check_obs53<F: ValuedField>(
    w: &GaloisWitness<F>,
    side: &ProblemSide<F>,
    require_irreducible: bool,
) -> Result<Verdict> {
    let v = check_phi(w, side, require_irreducible)?;
    if !v.holds() || !side.has_psi() {
        return Ok(v);
    }
    check_psi(w, side)
}

/// `Φ′ ∧ Ψ ∧ Θ_1 ∧ ⋯ ∧ Θ_n`, one prime per part.
pub fn check_prop54<F: ValuedField>(w: &GaloisWitness<F>, side: &ProblemSide<F>, primes: &[u64]) -> Result<Verdict> {
    if primes.len() != side.parts.len() {
        return Err(Error::input(format!("{} parts but {} primes", side.parts.len(), primes.len())));
    }
    let v = check_obs53(w, side, false)?;
    if !v.holds() {
        return Ok(v);
    }
    for (i, &p) in primes.iter().enumerate() {
        let v = check_theta(w, side, i, p)?;
        if !v.holds() {
            return Ok(v);
        }
    }
    Ok(Verdict::pass())
}
