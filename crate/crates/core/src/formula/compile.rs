//! The solvability formulas as macro-level ASTs over `F^d` variables.
//!
//! Variable names: `c`, `x1 … xd`, `u`, `z1 … ze` (only when `e > 1`), and
//! per part `t`: `y{t}`, `h{t}` (length `r_t`), `w{t}` (length `r_t`).
//! Clause labels match the direct checkers in [`crate::witness`].

use std::collections::HashMap;

use super::{Binder, Formula, FormulaAst, Term, VTerm};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::witness::{GaloisWitness, ProblemSide};

fn lit<F: Field>(field: &F, e: &F::Elem) -> Term {
    if field.is_zero(e) {
        Term::Zero
    } else if *e == field.one() {
        Term::One
    } else {
        Term::Lit(field.format_elem(e))
    }
}

fn v(name: impl Into<String>) -> VTerm {
    VTerm::Var(name.into())
}

fn s(name: impl Into<String>) -> Term {
    Term::Var(name.into())
}

fn zero() -> VTerm {
    VTerm::Scalar(Term::Zero)
}

fn one() -> VTerm {
    VTerm::Scalar(Term::One)
}

fn diff(a: VTerm, b: VTerm) -> VTerm {
    VTerm::Add(vec![a, VTerm::Neg(Box::new(b))])
}

fn subst(p: VTerm, x: VTerm) -> VTerm {
    VTerm::Subst(Box::new(p), Box::new(x))
}

fn coords(name: &str, n: usize) -> Vec<Term> {
    (0..n).map(|i| s(format!("{name}.{i}"))).collect()
}

/// `t ∈ ℳ_i`: `t = 0 ∨ (O_i(t) ∧ ¬O_i(t′) ∧ t·t′ = 1)` with `t′` solved linearly.
fn in_maximal_ideal(i: usize, t: Term, inv: &str) -> Formula {
    Formula::Or(vec![
        Formula::Eq(t.clone(), Term::Zero),
        Formula::And(vec![
            Formula::O(i, t.clone()),
            Formula::Not(Box::new(Formula::O(i, s(inv)))),
            Formula::Eq(Term::Mul(vec![t, s(inv)]), Term::One),
        ]),
    ])
}

fn phi_psi<F: Field>(side: &ProblemSide<F>, irreducible: bool, binders: &mut Vec<Binder>, clauses: &mut Vec<Formula>) {
    let d = side.d();
    let a = &side.a;
    let x = |k: usize| v(format!("x{}", k + 1));
    binders.push(Binder::vec("c", d));
    binders.extend((0..d).map(|k| Binder::vec(format!("x{}", k + 1), d)));
    binders.push(Binder::vec("u", d));
    let mut fc = coords("c", d);
    fc.push(Term::One);
    for k in 0..d {
        clauses.push(Formula::label(
            format!("phi.root.{}", k + 1),
            Formula::VEq(VTerm::Poly(fc.clone(), Box::new(x(k))), zero()),
        ));
    }
    let mut prod = vec![v("u")];
    for k in 0..d {
        prod.extend((0..d).filter(|&l| l != k).map(|l| diff(x(k), x(l))));
    }
    clauses.push(Formula::label("phi.unit", Formula::VEq(VTerm::Mul(prod), one())));
    for k in 0..d {
        for l in 0..d {
            clauses.push(Formula::label(
                format!("phi.compat.{}.{}", k + 1, l + 1),
                Formula::VEq(subst(x(l), x(k)), x(a.mul(k, l))),
            ));
        }
    }
    if irreducible {
        clauses.push(Formula::label("phi.irreducible", Formula::Irreducible(coords("c", d))));
    }
    if !side.has_psi() {
        return;
    }
    let e = side.e();
    let z = |j: usize| v(format!("z{}", j + 1));
    binders.extend((0..e).map(|j| Binder::vec(format!("z{}", j + 1), d)));
    let g: Vec<Term> = side.g.iter().map(|c| lit(&side.field, c)).collect();
    for j in 0..e {
        clauses.push(Formula::label(
            format!("psi.root.{}", j + 1),
            Formula::VEq(VTerm::Poly(g.clone(), Box::new(z(j))), zero()),
        ));
    }
    for j in 0..e {
        for j2 in j + 1..e {
            clauses.push(Formula::label(
                format!("psi.distinct.{}.{}", j + 1, j2 + 1),
                Formula::Not(Box::new(Formula::VEq(z(j), z(j2)))),
            ));
        }
    }
    for k in a.elements() {
        let row = &side.psi[side.beta.apply(k)];
        for j2 in 0..e {
            clauses.push(Formula::label(
                format!("psi.compat.{}.{}", k + 1, j2 + 1),
                Formula::VEq(subst(z(j2), x(k)), z(row[j2])),
            ));
        }
    }
}

/// `Φ` (with or without the irreducibility clause), conjoined with `Ψ` when `e > 1`.
pub fn compile_obs53<F: Field>(side: &ProblemSide<F>, include_irreducible: bool) -> FormulaAst {
    let mut binders = Vec::new();
    let mut clauses = Vec::new();
    phi_psi(side, include_irreducible, &mut binders, &mut clauses);
    FormulaAst { binders, body: Formula::And(clauses) }
}

/// `Φ′ ∧ Ψ ∧ Θ_1 ∧ ⋯ ∧ Θ_n`; part `t` is read against the valuation `O_t`.
pub fn compile_prop54<F: Field>(side: &ProblemSide<F>, n: usize) -> Result<FormulaAst> {
    if n != side.parts.len() {
        return Err(Error::input(format!("{n} valuations requested, the problem has {} parts", side.parts.len())));
    }
    let mut binders = Vec::new();
    let mut clauses = Vec::new();
    phi_psi(side, false, &mut binders, &mut clauses);
    let d = side.d();
    let x = |k: usize| v(format!("x{}", k + 1));
    for (i, part) in side.parts.iter().enumerate() {
        let t = i + 1;
        let r = part.r();
        let (yn, hn, wn) = (format!("y{t}"), format!("h{t}"), format!("w{t}"));
        binders.push(Binder::vec(&yn, d));
        binders.push(Binder::vec(&hn, r));
        binders.push(Binder::vec(&wn, r));
        let y = || v(&yn);
        let act = |k: usize| subst(y(), x(k));
        for &k in part.image.elements() {
            clauses.push(Formula::label(format!("theta{t}.fixed.{}", k + 1), Formula::VEq(act(k), y())));
        }
        let mu = format!("theta{t}.mu");
        binders.push(Binder::lin(&mu, &mu));
        let mut prod = Vec::new();
        for &k in &part.coset_reps {
            prod.extend(part.coset_reps.iter().filter(|&&l| l != k).map(|&l| diff(act(k), act(l))));
        }
        let prod = if prod.is_empty() { one() } else { VTerm::Mul(prod) };
        clauses.push(Formula::label(
            format!("theta{t}.distinct"),
            Formula::VEq(VTerm::Scale(s(&mu), Box::new(prod)), one()),
        ));
        let h = coords(&hn, r);
        for j in 0..r {
            let inv = format!("theta{t}.m{j}.inv");
            binders.push(Binder::lin(&inv, &inv));
            let term = if j + 1 == r { Term::Add(vec![Term::One, h[j].clone()]) } else { h[j].clone() };
            clauses.push(Formula::label(format!("theta{t}.m.{j}"), in_maximal_ideal(t, term, &inv)));
        }
        let mut hpoly = h.clone();
        hpoly.push(Term::One);
        clauses
            .push(Formula::label(format!("theta{t}.hpoly"), Formula::VEq(VTerm::Poly(hpoly, Box::new(y())), zero())));
        let gi: Vec<Term> = part.g.iter().map(|c| lit(&side.field, c)).collect();
        let wy = VTerm::Poly(coords(&wn, r), Box::new(y()));
        clauses.push(Formula::label(format!("theta{t}.g"), Formula::VEq(VTerm::Poly(gi, Box::new(wy)), zero())));
        // every X^j is a combination of the monomials z1^a y^b, a, b < d
        let z_exps = if side.has_psi() { d } else { 1 };
        let mut span = Vec::new();
        for j in 0..d {
            let group = format!("theta{t}.span.{j}");
            let mut sum = Vec::new();
            for ea in 0..z_exps {
                for eb in 0..d {
                    let lam = format!("{group}.{ea}.{eb}");
                    binders.push(Binder::lin(&lam, &group));
                    let mut factors: Vec<VTerm> = (0..ea).map(|_| v("z1")).collect();
                    factors.extend((0..eb).map(|_| y()));
                    let mono = if factors.is_empty() { one() } else { VTerm::Mul(factors) };
                    sum.push(VTerm::Scale(s(&lam), Box::new(mono)));
                }
            }
            span.push(Formula::VEq(VTerm::Add(sum), VTerm::Basis(j)));
        }
        clauses.push(Formula::label(format!("theta{t}.span"), Formula::And(span)));
    }
    Ok(FormulaAst { binders, body: Formula::And(clauses) })
}

/// Primary-variable values of a witness under the naming scheme above.
pub fn witness_assignment<F: Field>(w: &GaloisWitness<F>, side: &ProblemSide<F>) -> Result<HashMap<String, F::Elem>> {
    side.check_dims(w)?;
    let mut out = HashMap::new();
    let mut put = |name: &str, vals: &[F::Elem]| {
        for (i, x) in vals.iter().enumerate() {
            out.insert(format!("{name}.{i}"), x.clone());
        }
    };
    put("c", &w.c);
    for (k, xk) in w.x.iter().enumerate() {
        put(&format!("x{}", k + 1), xk);
    }
    put("u", &w.u);
    if side.has_psi() {
        for (j, zj) in w.z.iter().enumerate() {
            put(&format!("z{}", j + 1), zj);
        }
    }
    for (i, b) in w.blocks.iter().enumerate() {
        put(&format!("y{}", i + 1), &b.y);
        put(&format!("h{}", i + 1), &b.h);
        put(&format!("w{}", i + 1), &b.w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{cyclotomic, quadratic};
    use crate::field::{FiniteField, Rationals};
    use crate::formula::{eval_formula, expand_algebra, parse_formula, search_witness, serialize_formula};
    use crate::group::catalog::cyclic;
    use crate::group::{GroupHom, Subgroup};
    use crate::par::ExecMode;
    use crate::witness::{check_obs53, check_prop54, derive_side, extract_solution, induced_algebra_witness};

    fn count(ast: &FormulaAst, prefix: &str) -> usize {
        ast.clauses().iter().filter(|(l, _)| l.starts_with(prefix)).count()
    }

    fn c2_over_trivial() -> ProblemSide<FiniteField> {
        let beta = GroupHom::trivial(cyclic(2).into_ref(), cyclic(1).into_ref());
        ProblemSide::new(FiniteField::new(2).unwrap(), beta, vec![vec![0]], vec![0, 1], vec![]).unwrap()
    }

    #[test]
    fn clause_counts() {
        let triv = GroupHom::trivial(cyclic(1).into_ref(), cyclic(1).into_ref());
        let side =
            ProblemSide::new(Rationals, triv, vec![vec![0]], vec![Rationals.zero(), Rationals.one()], vec![]).unwrap();
        let ast = compile_obs53(&side, true);
        assert_eq!(count(&ast, "phi.root"), 1);
        let ast = compile_obs53(&c2_over_trivial(), false);
        assert_eq!((count(&ast, "phi.root"), count(&ast, "phi.unit"), count(&ast, "phi.compat")), (2, 1, 4));
        assert_eq!(count(&ast, "psi"), 0);
        let ext = quadratic(-1).unwrap();
        let id = GroupHom::identity(ext.group.clone());
        let (side, _) = derive_side(&ext, &id, &id, &[]).unwrap();
        let ast = compile_obs53(&side, true);
        assert_eq!((count(&ast, "psi.root"), count(&ast, "psi.distinct"), count(&ast, "psi.compat")), (2, 1, 4));
        assert_eq!(compile_prop54(&side, 0).unwrap(), compile_obs53(&side, false));
        assert!(compile_prop54(&side, 1).is_err());
    }

    #[test]
    fn canonical_text_round_trips() {
        let ast = compile_obs53(&c2_over_trivial(), true);
        let text = serialize_formula(&ast);
        let back = parse_formula(&text).unwrap();
        assert_eq!(back, ast);
        assert_eq!(serialize_formula(&back), text);
        let ex = expand_algebra(&ast).unwrap();
        assert_eq!(parse_formula(&serialize_formula(&ex)).unwrap(), ex);
    }

    #[test]
    fn search_finds_gf4() {
        let side = c2_over_trivial();
        let ast = compile_obs53(&side, true);
        let hit = search_witness(&ast, &FiniteField::new(2).unwrap(), 12, ExecMode::Parallel).unwrap().unwrap();
        let vals: HashMap<String, u32> = hit.into_iter().collect();
        let get = |n: &str| vec![vals[&format!("{n}.0")], vals[&format!("{n}.1")]];
        assert_eq!((get("c"), get("x1"), get("x2"), get("u")), (vec![1, 1], vec![0, 1], vec![1, 1], vec![1, 0]));
        let w = GaloisWitness {
            c: get("c"),
            x: vec![get("x1"), get("x2")],
            u: get("u"),
            z: vec![vec![0, 0]],
            blocks: vec![],
        };
        assert!(check_obs53(&w, &side, true).unwrap().holds());
        assert!(extract_solution(&w, &side, &[], 0).unwrap().proper);
    }

    #[test]
    fn trivial_part_collapses() {
        let c1 = cyclic(1).into_ref();
        let part =
            crate::witness::PartSide::new(Subgroup::whole(c1.clone()), vec![Rationals.from_i64(-1), Rationals.one()]);
        let side = ProblemSide::new(
            Rationals,
            GroupHom::identity(c1),
            vec![vec![0]],
            vec![Rationals.zero(), Rationals.one()],
            vec![part],
        )
        .unwrap();
        let ast = compile_prop54(&side, 1).unwrap();
        assert_eq!(count(&ast, "theta1.fixed"), 1);
        assert_eq!(count(&ast, "theta1.m"), 1);
        let f = parse_formula(&serialize_formula(&ast)).unwrap();
        let w = GaloisWitness {
            c: vec![Rationals.zero()],
            x: vec![vec![Rationals.zero()]],
            u: vec![Rationals.one()],
            z: vec![vec![Rationals.zero()]],
            blocks: vec![crate::witness::ThetaBlock {
                y: vec![Rationals.one()],
                h: vec![Rationals.from_i64(-1)],
                w: vec![Rationals.one()],
            }],
        };
        let asg = witness_assignment(&w, &side).unwrap();
        assert!(eval_formula(&f, &Rationals, &[5], &asg).unwrap().holds());
    }

    #[test]
    fn cyclotomic_eight_agrees_with_checkers() {
        let ext = cyclotomic(8).unwrap();
        let g = ext.group.clone();
        let id = GroupHom::identity(g.clone());
        let sub = |l: &str| Subgroup::new(g.clone(), vec![0, g.find_label(l).unwrap()]).unwrap();
        let q = crate::group::quotient_by_normal(&g, &sub("5")).unwrap();
        let parts = vec![sub("7"), sub("3")];
        let (side, scen) = derive_side(&ext, &id, &q.proj, &parts).unwrap();
        let w = induced_algebra_witness(&ext, &side, &scen, &[7, 3], 0).unwrap();
        let ast = compile_prop54(&side, 2).unwrap();
        let asg = witness_assignment(&w, &side).unwrap();
        assert!(eval_formula(&ast, &Rationals, &[7, 3], &asg).unwrap().holds());
        let mut bad = w.clone();
        bad.blocks[1].h[0] = Rationals.one();
        let direct = check_prop54(&bad, &side, &[7, 3]).unwrap();
        let via = eval_formula(&ast, &Rationals, &[7, 3], &witness_assignment(&bad, &side).unwrap()).unwrap();
        assert_eq!(direct, via);
        assert_eq!(via.failure.as_deref(), Some("theta2.m.0"));
    }
}
