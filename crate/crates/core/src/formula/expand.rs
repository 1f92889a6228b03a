//! Elimination of vector variables and algebra operations.
//!
//! Each product is computed by schoolbook multiplication followed by
//! division by the generic monic modulus; the top coefficients consumed by
//! the division and the resulting coordinates become `def` variables, so
//! term size stays linear in `d` however deep the product.

use std::collections::HashMap;

use super::{Binder, Formula, FormulaAst, Term, VTerm, VarKind};
use crate::error::{Error, Result};

struct Expander {
    d: usize,
    vec_lens: HashMap<String, usize>,
    defs: Vec<Binder>,
    cache: HashMap<(Vec<Term>, Vec<Term>), Vec<Term>>,
}

fn add(items: Vec<Term>) -> Term {
    let mut v: Vec<Term> = Vec::new();
    for t in items {
        match t {
            Term::Zero => {}
            Term::Add(inner) => v.extend(inner),
            t => v.push(t),
        }
    }
    match v.len() {
        0 => Term::Zero,
        1 => v.pop().unwrap(),
        _ => Term::Add(v),
    }
}

fn mul(items: Vec<Term>) -> Term {
    let mut v: Vec<Term> = Vec::new();
    for t in items {
        match t {
            Term::Zero => return Term::Zero,
            Term::One => {}
            Term::Mul(inner) => v.extend(inner),
            t => v.push(t),
        }
    }
    match v.len() {
        0 => Term::One,
        1 => v.pop().unwrap(),
        _ => Term::Mul(v),
    }
}

fn neg(t: Term) -> Term {
    match t {
        Term::Zero => Term::Zero,
        Term::Neg(inner) => *inner,
        t => Term::Neg(Box::new(t)),
    }
}

impl Expander {
    fn modulus(&self, i: usize) -> Term {
        Term::Var(format!("c.{i}"))
    }

    fn def(&mut self, t: Term) -> Term {
        if matches!(t, Term::Var(_) | Term::Zero | Term::One | Term::Lit(_)) {
            return t;
        }
        let name = format!("_t{}", self.defs.len());
        self.defs.push(Binder::Var { name: name.clone(), kind: VarKind::Def(t) });
        Term::Var(name)
    }

    fn unit(&self, j: usize) -> Vec<Term> {
        (0..self.d).map(|i| if i == j { Term::One } else { Term::Zero }).collect()
    }

    fn mul_vec(&mut self, a: &[Term], b: &[Term]) -> Vec<Term> {
        let key = (a.to_vec(), b.to_vec());
        if let Some(r) = self.cache.get(&key) {
            return r.clone();
        }
        let d = self.d;
        let mut p: Vec<Vec<Term>> = vec![Vec::new(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                p[i + j].push(mul(vec![x.clone(), y.clone()]));
            }
        }
        let mut p: Vec<Term> = p.into_iter().map(add).collect();
        for k in (d..2 * d - 1).rev() {
            let q = self.def(std::mem::replace(&mut p[k], Term::Zero));
            for i in 0..d {
                let t = std::mem::replace(&mut p[k - d + i], Term::Zero);
                p[k - d + i] = add(vec![t, neg(mul(vec![q.clone(), self.modulus(i)]))]);
            }
        }
        p.truncate(d);
        let r: Vec<Term> = p.into_iter().map(|t| self.def(t)).collect();
        self.cache.insert(key, r.clone());
        r
    }

    /// `Σ_j coeffs[j] · x^j`
    fn poly(&mut self, coeffs: &[Term], x: &[Term]) -> Vec<Term> {
        let mut acc: Vec<Vec<Term>> = vec![Vec::new(); self.d];
        let mut pow = self.unit(0);
        for (j, c) in coeffs.iter().enumerate() {
            if j > 0 {
                pow = self.mul_vec(&pow, x);
            }
            for (i, p) in pow.iter().enumerate() {
                acc[i].push(mul(vec![c.clone(), p.clone()]));
            }
        }
        acc.into_iter().map(add).collect()
    }

    fn coords(&mut self, t: &VTerm) -> Result<Vec<Term>> {
        let d = self.d;
        Ok(match t {
            VTerm::Var(n) => {
                match self.vec_lens.get(n) {
                    Some(&l) if l == d => {}
                    Some(&l) => {
                        return Err(Error::input(format!("vector {n} has length {l}, the algebra has dimension {d}")))
                    }
                    None => return Err(Error::input(format!("unbound vector variable {n}"))),
                }
                (0..d).map(|i| Term::Var(format!("{n}.{i}"))).collect()
            }
            VTerm::Scalar(s) => {
                let mut v = vec![Term::Zero; d];
                v[0] = s.clone();
                v
            }
            VTerm::Basis(j) => {
                if *j >= d {
                    return Err(Error::input(format!("basis index {j} out of range for dimension {d}")));
                }
                self.unit(*j)
            }
            VTerm::Add(items) => {
                let parts = items.iter().map(|x| self.coords(x)).collect::<Result<Vec<_>>>()?;
                (0..d).map(|i| add(parts.iter().map(|p| p[i].clone()).collect())).collect()
            }
            VTerm::Neg(x) => self.coords(x)?.into_iter().map(neg).collect(),
            VTerm::Scale(s, x) => self.coords(x)?.into_iter().map(|c| mul(vec![s.clone(), c])).collect(),
            VTerm::Mul(items) => {
                let mut acc = self.unit(0);
                for (n, x) in items.iter().enumerate() {
                    let v = self.coords(x)?;
                    acc = if n == 0 { v } else { self.mul_vec(&acc, &v) };
                }
                acc
            }
            VTerm::Subst(p, x) => {
                let coeffs = self.coords(p)?;
                let x = self.coords(x)?;
                self.poly(&coeffs, &x)
            }
            VTerm::Poly(coeffs, x) => {
                let x = self.coords(x)?;
                self.poly(coeffs, &x)
            }
        })
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::And(v) => Formula::And(v.iter().map(|x| self.formula(x)).collect::<Result<_>>()?),
            Formula::Or(v) => Formula::Or(v.iter().map(|x| self.formula(x)).collect::<Result<_>>()?),
            Formula::Not(x) => Formula::Not(Box::new(self.formula(x)?)),
            Formula::Label(l, x) => Formula::Label(l.clone(), Box::new(self.formula(x)?)),
            Formula::VEq(l, r) => {
                let l = self.coords(l)?;
                let r = self.coords(r)?;
                Formula::And(l.into_iter().zip(r).map(|(a, b)| Formula::Eq(a, b)).collect())
            }
            f => f.clone(),
        })
    }
}

/// Replaces every vector binder by its coordinates and every vector atom by
/// coordinate equations; product coordinates are appended as `def` binders.
pub fn expand_algebra(ast: &FormulaAst) -> Result<FormulaAst> {
    let vec_lens: HashMap<String, usize> = ast
        .binders
        .iter()
        .filter_map(|b| match b {
            Binder::Vec { name, len } => Some((name.clone(), *len)),
            _ => None,
        })
        .collect();
    let d = match vec_lens.get("c") {
        Some(&d) if d > 0 => d,
        _ if !ast.body.has_vectors() => 1,
        _ => return Err(Error::Internal("vector atoms need the modulus vector c".into())),
    };
    let mut ex = Expander { d, vec_lens, defs: Vec::new(), cache: HashMap::new() };
    let body = ex.formula(&ast.body)?;
    let mut binders = Vec::new();
    for b in &ast.binders {
        match b {
            Binder::Vec { name, len } => binders.extend((0..*len).map(|i| Binder::primary(format!("{name}.{i}")))),
            b => binders.push(b.clone()),
        }
    }
    binders.extend(ex.defs);
    Ok(FormulaAst { binders, body })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rationals};
    use crate::formula::eval::eval_formula;
    use crate::formula::parse_formula;
    use crate::witness::algebra_mul;
    use proptest::prelude::*;
    use std::collections::HashMap;

    #[test]
    fn degree_one_is_a_renaming() {
        let ast = parse_formula("(exists ((vec c 1) (vec x 1)) (veq (vvar x) (vscalar (var c.0))))").unwrap();
        let e = expand_algebra(&ast).unwrap();
        assert_eq!(e.binders, vec![Binder::primary("c.0"), Binder::primary("x.0")]);
        assert_eq!(e.body, Formula::And(vec![Formula::Eq(Term::Var("x.0".into()), Term::Var("c.0".into()))]));
    }

    #[test]
    fn no_defs_depend_on_later_names() {
        let ast =
            parse_formula("(exists ((vec c 3) (vec x 3)) (veq (v* (vvar x) (vvar x) (vvar x)) (vscalar 1)))").unwrap();
        let e = expand_algebra(&ast).unwrap();
        assert!(e.is_expanded());
        assert!(e.binders.len() > 6);
    }

    proptest! {
        // d = 2 product against the reduction oracle on random rationals
        #[test]
        fn product_matches_algebra(v in prop::collection::vec(-9i64..9, 6)) {
            let ast = parse_formula(
                "(exists ((vec c 2) (vec x 2) (vec y 2) (vec p 2)) (veq (v* (vvar x) (vvar y)) (vvar p)))").unwrap();
            let e = expand_algebra(&ast).unwrap();
            let q: Vec<_> = v.iter().map(|&n| rat_int(n)).collect();
            let p = algebra_mul(&Rationals, &q[0..2], &q[2..4], &q[4..6]);
            let mut asg = HashMap::new();
            for (name, vals) in [("c", &q[0..2]), ("x", &q[2..4]), ("y", &q[4..6]), ("p", &p[..])] {
                for (i, val) in vals.iter().enumerate() {
                    asg.insert(format!("{name}.{i}"), val.clone());
                }
            }
            prop_assert!(eval_formula(&e, &Rationals, &[], &asg).unwrap().holds());
            let mut bad = asg.clone();
            bad.insert("p.1".into(), &p[1] + rat_int(1));
            prop_assert!(!eval_formula(&e, &Rationals, &[], &bad).unwrap().holds());
        }
    }
}
