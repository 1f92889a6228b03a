//! Evaluation in a structure and brute-force search over a small finite field.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{expand_algebra, Binder, Formula, FormulaAst, Term, VarKind};
use crate::error::{Error, Result};
use crate::field::{is_prime, prime_power, Field, FiniteField};
use crate::par::{find_first, ExecMode};
use crate::valuation::ValuedField;
use crate::witness::Verdict;

pub const DEFAULT_VARIABLE_CAP: usize = 12;

/// `Q:p=2,3` (the rationals with `O_i` the valuation ring of `v_{p_i}`) or
/// `GF:q=3` (every `O_i` is the whole field).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Rationals { primes: Vec<u64> },
    Finite { q: u64 },
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::input(format!("structure {s:?}: expected Q:p=P1,P2,... or GF:q=Q"));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "Q" => {
                let primes: Vec<u64> = match rest {
                    "" => Vec::new(),
                    r => r
                        .strip_prefix("p=")
                        .ok_or_else(bad)?
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| bad()))
                        .collect::<Result<_>>()?,
                };
                for (i, &p) in primes.iter().enumerate() {
                    if !is_prime(p) {
                        return Err(Error::input(format!("structure {s:?}: {p} is not prime")));
                    }
                    if primes[..i].contains(&p) {
                        return Err(Error::input(format!("structure {s:?}: prime {p} repeated")));
                    }
                }
                Ok(Structure::Rationals { primes })
            }
            "GF" => {
                let q: u64 = rest.strip_prefix("q=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if prime_power(q).is_none() || q > 9 {
                    return Err(Error::input(format!("structure {s:?}: q must be a prime power at most 9")));
                }
                Ok(Structure::Finite { q })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Rationals { primes } if primes.is_empty() => f.write_str("Q"),
            Structure::Rationals { primes } => {
                let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
                write!(f, "Q:p={}", ps.join(","))
            }
            Structure::Finite { q } => write!(f, "GF:q={q}"),
        }
    }
}

#[derive(Debug, Clone)]
enum Ir<E> {
    Var(usize),
    Const(E),
    Add(Vec<Ir<E>>),
    Mul(Vec<Ir<E>>),
    Neg(Box<Ir<E>>),
}

#[derive(Debug, Clone)]
enum Cf<E> {
    And(Vec<Cf<E>>),
    Or(Vec<Cf<E>>),
    Not(Box<Cf<E>>),
    Eq(Ir<E>, Ir<E>),
    O(usize, Ir<E>),
    Irr(Vec<Ir<E>>),
}

#[derive(Debug, Clone)]
enum Slot<E> {
    Primary,
    Def(Ir<E>),
    Lin(usize),
}

#[derive(Debug, Clone)]
struct LinGroup<E> {
    vars: Vec<usize>,
    atoms: Vec<(Ir<E>, Ir<E>)>,
}

/// An expanded formula with variables resolved to slots.
struct Program<F: ValuedField> {
    field: F,
    primes: Vec<u64>,
    names: Vec<String>,
    slots: Vec<Slot<F::Elem>>,
    groups: Vec<LinGroup<F::Elem>>,
    clauses: Vec<(String, Cf<F::Elem>)>,
}

fn ir_vars<E>(t: &Ir<E>, out: &mut Vec<usize>) {
    match t {
        Ir::Var(i) => out.push(*i),
        Ir::Const(_) => {}
        Ir::Add(v) | Ir::Mul(v) => v.iter().for_each(|x| ir_vars(x, out)),
        Ir::Neg(x) => ir_vars(x, out),
    }
}

fn cf_vars<E>(f: &Cf<E>, out: &mut Vec<usize>) {
    match f {
        Cf::And(v) | Cf::Or(v) => v.iter().for_each(|x| cf_vars(x, out)),
        Cf::Not(x) => cf_vars(x, out),
        Cf::Eq(a, b) => {
            ir_vars(a, out);
            ir_vars(b, out);
        }
        Cf::O(_, t) => ir_vars(t, out),
        Cf::Irr(v) => v.iter().for_each(|x| ir_vars(x, out)),
    }
}

impl<F: ValuedField> Program<F> {
    fn new(ast: &FormulaAst, field: &F, primes: &[u64]) -> Result<Self> {
        let owned;
        let ast = if ast.is_expanded() {
            ast
        } else {
            owned = expand_algebra(ast)?;
            &owned
        };
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, b) in ast.binders.iter().enumerate() {
            if index.insert(b.name(), i).is_some() {
                return Err(Error::input(format!("variable {} bound twice", b.name())));
            }
        }
        let lower = |t: &Term| lower_term(t, field, &index);
        let mut slots = Vec::new();
        let mut group_ids: HashMap<&str, usize> = HashMap::new();
        let mut groups: Vec<LinGroup<F::Elem>> = Vec::new();
        for (i, b) in ast.binders.iter().enumerate() {
            let Binder::Var { kind, name } = b else { unreachable!("expanded formulas have scalar binders only") };
            slots.push(match kind {
                VarKind::Primary => Slot::Primary,
                VarKind::Def(t) => {
                    let ir = lower(t)?;
                    let mut deps = Vec::new();
                    ir_vars(&ir, &mut deps);
                    if let Some(&j) = deps
                        .iter()
                        .find(|&&j| j >= i || matches!(ast.binders[j], Binder::Var { kind: VarKind::Lin(_), .. }))
                    {
                        return Err(Error::input(format!(
                            "definition of {name} uses {}, which is later or a lin variable",
                            ast.binders[j].name()
                        )));
                    }
                    Slot::Def(ir)
                }
                VarKind::Lin(g) => {
                    let id = *group_ids.entry(g.as_str()).or_insert_with(|| {
                        groups.push(LinGroup { vars: Vec::new(), atoms: Vec::new() });
                        groups.len() - 1
                    });
                    groups[id].vars.push(i);
                    Slot::Lin(id)
                }
            });
        }
        let clauses = ast
            .clauses()
            .into_iter()
            .map(|(label, f)| Ok((label, lower_formula(f, field, &index)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut eqs = Vec::new();
        for (_, c) in &clauses {
            collect_eqs(c, &mut eqs);
        }
        for (a, b) in eqs {
            let mut vs = Vec::new();
            ir_vars(&a, &mut vs);
            ir_vars(&b, &mut vs);
            let mut gs: Vec<usize> =
                vs.iter().filter_map(|&v| if let Slot::Lin(g) = slots[v] { Some(g) } else { None }).collect();
            gs.sort_unstable();
            gs.dedup();
            if let Some(&g) = gs.last() {
                groups[g].atoms.push((a, b));
            }
        }
        let names = ast.binders.iter().map(|b| b.name().to_string()).collect();
        if field.size().is_none() {
            let mut max_o = 0;
            for (_, c) in &clauses {
                max_o = max_o.max(max_o_index(c));
            }
            if max_o > primes.len() {
                return Err(Error::input(format!(
                    "formula uses O_{max_o} but the structure has {} primes",
                    primes.len()
                )));
            }
        }
        Ok(Program { field: field.clone(), primes: primes.to_vec(), names, slots, groups, clauses })
    }

    fn eval_term(&self, t: &Ir<F::Elem>, vals: &[Option<F::Elem>]) -> F::Elem {
        let f = &self.field;
        match t {
            Ir::Var(i) => vals[*i].clone().expect("variable evaluated before use"),
            Ir::Const(c) => c.clone(),
            Ir::Add(v) => v.iter().fold(f.zero(), |acc, x| f.add(&acc, &self.eval_term(x, vals))),
            Ir::Mul(v) => v.iter().fold(f.one(), |acc, x| f.mul(&acc, &self.eval_term(x, vals))),
            Ir::Neg(x) => f.neg(&self.eval_term(x, vals)),
        }
    }

    /// `t` as `c + Σ a_j v_j` over the variables of `group`.
    fn affine(
        &self,
        t: &Ir<F::Elem>,
        pos: &HashMap<usize, usize>,
        vals: &[Option<F::Elem>],
    ) -> Result<(F::Elem, Vec<F::Elem>)> {
        let f = &self.field;
        let n = pos.len();
        Ok(match t {
            Ir::Var(i) => match pos.get(i) {
                Some(&j) => {
                    let mut v = vec![f.zero(); n];
                    v[j] = f.one();
                    (f.zero(), v)
                }
                None => (
                    vals[*i]
                        .clone()
                        .ok_or_else(|| Error::input(format!("{} is used before it is determined", self.names[*i])))?,
                    vec![f.zero(); n],
                ),
            },
            Ir::Const(c) => (c.clone(), vec![f.zero(); n]),
            Ir::Neg(x) => {
                let (c, v) = self.affine(x, pos, vals)?;
                (f.neg(&c), v.iter().map(|a| f.neg(a)).collect())
            }
            Ir::Add(xs) => {
                let mut acc = (f.zero(), vec![f.zero(); n]);
                for x in xs {
                    let (c, v) = self.affine(x, pos, vals)?;
                    acc.0 = f.add(&acc.0, &c);
                    acc.1.iter_mut().zip(&v).for_each(|(a, b)| *a = f.add(a, b));
                }
                acc
            }
            Ir::Mul(xs) => {
                let mut acc = (f.one(), vec![f.zero(); n]);
                for x in xs {
                    let (c, v) = self.affine(x, pos, vals)?;
                    let lin_a = acc.1.iter().any(|a| !f.is_zero(a));
                    let lin_b = v.iter().any(|a| !f.is_zero(a));
                    if lin_a && lin_b {
                        return Err(Error::input("equation is not affine in its lin variables"));
                    }
                    let coeffs = acc.1.iter().zip(&v).map(|(a, b)| f.add(&f.mul(a, &c), &f.mul(b, &acc.0))).collect();
                    acc = (f.mul(&acc.0, &c), coeffs);
                }
                acc
            }
        })
    }

    /// Values for each lin group from its equations; inconsistent systems get zeros.
    fn solve_groups(&self, vals: &mut [Option<F::Elem>]) -> Result<()> {
        let f = &self.field;
        for g in &self.groups {
            let pos: HashMap<usize, usize> = g.vars.iter().enumerate().map(|(j, &v)| (v, j)).collect();
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for (a, b) in &g.atoms {
                let (ca, va) = self.affine(a, &pos, vals)?;
                let (cb, vb) = self.affine(b, &pos, vals)?;
                rows.push(va.iter().zip(&vb).map(|(x, y)| f.sub(x, y)).collect::<Vec<_>>());
                rhs.push(f.sub(&cb, &ca));
            }
            let sol = if rows.is_empty() { None } else { crate::linalg::solve(f, &rows, &rhs) };
            let sol = sol.unwrap_or_else(|| vec![f.zero(); g.vars.len()]);
            for (&v, x) in g.vars.iter().zip(sol) {
                vals[v] = Some(x);
            }
        }
        Ok(())
    }

    fn holds(&self, c: &Cf<F::Elem>, vals: &[Option<F::Elem>]) -> Result<bool> {
        Ok(match c {
            Cf::And(v) => {
                for x in v {
                    if !self.holds(x, vals)? {
                        return Ok(false);
                    }
                }
                true
            }
            Cf::Or(v) => {
                for x in v {
                    if self.holds(x, vals)? {
                        return Ok(true);
                    }
                }
                false
            }
            Cf::Not(x) => !self.holds(x, vals)?,
            Cf::Eq(a, b) => self.eval_term(a, vals) == self.eval_term(b, vals),
            Cf::O(i, t) => {
                let x = self.eval_term(t, vals);
                match self.primes.get(i - 1) {
                    Some(&p) => self.field.in_valuation_ring(&x, p),
                    None => self.field.in_valuation_ring(&x, 0),
                }
            }
            Cf::Irr(v) => {
                let mut coeffs: Vec<F::Elem> = v.iter().map(|t| self.eval_term(t, vals)).collect();
                coeffs.push(self.field.one());
                self.field.poly_is_irreducible(&coeffs)?
            }
        })
    }

    fn fill_defs(&self, vals: &mut [Option<F::Elem>], which: impl Iterator<Item = usize>) {
        for i in which {
            if let Slot::Def(t) = &self.slots[i] {
                vals[i] = Some(self.eval_term(t, vals));
            }
        }
    }
}

fn lower_term<F: Field>(t: &Term, field: &F, index: &HashMap<&str, usize>) -> Result<Ir<F::Elem>> {
    let many = |v: &[Term]| v.iter().map(|x| lower_term(x, field, index)).collect::<Result<Vec<_>>>();
    Ok(match t {
        Term::Var(n) => Ir::Var(*index.get(n.as_str()).ok_or_else(|| Error::input(format!("unbound variable {n}")))?),
        Term::Zero => Ir::Const(field.zero()),
        Term::One => Ir::Const(field.one()),
        Term::Lit(l) => Ir::Const(field.parse_elem(l)?),
        Term::Add(v) => Ir::Add(many(v)?),
        Term::Mul(v) => Ir::Mul(many(v)?),
        Term::Neg(x) => Ir::Neg(Box::new(lower_term(x, field, index)?)),
    })
}

fn lower_formula<F: Field>(f: &Formula, field: &F, index: &HashMap<&str, usize>) -> Result<Cf<F::Elem>> {
    let term = |t: &Term| lower_term(t, field, index);
    let many = |v: &[Formula]| v.iter().map(|x| lower_formula(x, field, index)).collect::<Result<Vec<_>>>();
    Ok(match f {
        Formula::And(v) => Cf::And(many(v)?),
        Formula::Or(v) => Cf::Or(many(v)?),
        Formula::Not(x) => Cf::Not(Box::new(lower_formula(x, field, index)?)),
        Formula::Eq(a, b) => Cf::Eq(term(a)?, term(b)?),
        Formula::O(i, t) => Cf::O(*i, term(t)?),
        Formula::Irreducible(v) => Cf::Irr(v.iter().map(term).collect::<Result<_>>()?),
        Formula::Label(_, x) => lower_formula(x, field, index)?,
        Formula::VEq(..) => return Err(Error::Internal("vector atom survived expansion".into())),
    })
}

fn collect_eqs<E: Clone>(c: &Cf<E>, out: &mut Vec<(Ir<E>, Ir<E>)>) {
    match c {
        Cf::And(v) | Cf::Or(v) => v.iter().for_each(|x| collect_eqs(x, out)),
        Cf::Not(x) => collect_eqs(x, out),
        Cf::Eq(a, b) => out.push((a.clone(), b.clone())),
        _ => {}
    }
}

fn max_o_index<E>(c: &Cf<E>) -> usize {
    match c {
        Cf::And(v) | Cf::Or(v) => v.iter().map(max_o_index).max().unwrap_or(0),
        Cf::Not(x) => max_o_index(x),
        Cf::O(i, _) => *i,
        _ => 0,
    }
}

/// Truth of `ast` under `assignment` (values for the primary variables; `def`
/// and `lin` variables are computed). Reports the first false top-level clause.
pub fn eval_formula<F: ValuedField>(
    ast: &FormulaAst,
    field: &F,
    primes: &[u64],
    assignment: &HashMap<String, F::Elem>,
) -> Result<Verdict> {
    let prog = Program::new(ast, field, primes)?;
    let mut vals: Vec<Option<F::Elem>> = vec![None; prog.names.len()];
    for (i, s) in prog.slots.iter().enumerate() {
        if let Slot::Primary = s {
            let v = assignment
                .get(&prog.names[i])
                .ok_or_else(|| Error::input(format!("unbound variable {}", prog.names[i])))?;
            vals[i] = Some(v.clone());
        }
    }
    prog.fill_defs(&mut vals, 0..prog.names.len());
    prog.solve_groups(&mut vals)?;
    for (label, c) in &prog.clauses {
        if !prog.holds(c, &vals)? {
            return Ok(Verdict::fail(label.clone()));
        }
    }
    Ok(Verdict::pass())
}

/// Search order and pruning schedule over the primary variables.
struct Plan {
    primaries: Vec<usize>,
    /// Definitions that become computable once primary `k` is set (index 0:
    /// before any is set).
    def_buckets: Vec<Vec<usize>>,
    clause_buckets: Vec<Vec<usize>>,
    /// Clauses involving `lin` variables, checked at the leaves.
    leaf_clauses: Vec<usize>,
}

fn plan<F: ValuedField>(prog: &Program<F>) -> Plan {
    let n = prog.names.len();
    let primaries: Vec<usize> = (0..n).filter(|&i| matches!(prog.slots[i], Slot::Primary)).collect();
    let mut level = vec![0usize; n];
    let mut lin = vec![false; n];
    for (k, &p) in primaries.iter().enumerate() {
        level[p] = k + 1;
    }
    let mut def_buckets = vec![Vec::new(); primaries.len() + 1];
    for i in 0..n {
        match &prog.slots[i] {
            Slot::Def(t) => {
                let mut deps = Vec::new();
                ir_vars(t, &mut deps);
                level[i] = deps.iter().map(|&j| level[j]).max().unwrap_or(0);
                def_buckets[level[i]].push(i);
            }
            Slot::Lin(_) => lin[i] = true,
            Slot::Primary => {}
        }
    }
    let mut clause_buckets = vec![Vec::new(); primaries.len() + 1];
    let mut leaf_clauses = Vec::new();
    for (c, (_, f)) in prog.clauses.iter().enumerate() {
        let mut deps = Vec::new();
        cf_vars(f, &mut deps);
        if deps.iter().any(|&j| lin[j]) {
            leaf_clauses.push(c);
        } else {
            clause_buckets[deps.iter().map(|&j| level[j]).max().unwrap_or(0)].push(c);
        }
    }
    Plan { primaries, def_buckets, clause_buckets, leaf_clauses }
}

fn descend(
    prog: &Program<FiniteField>,
    plan: &Plan,
    elems: &[u32],
    k: usize,
    vals: &mut Vec<Option<u32>>,
) -> Result<bool> {
    if k == plan.primaries.len() {
        prog.solve_groups(vals)?;
        for &c in &plan.leaf_clauses {
            if !prog.holds(&prog.clauses[c].1, vals)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    'next: for &e in elems {
        vals[plan.primaries[k]] = Some(e);
        prog.fill_defs(vals, plan.def_buckets[k + 1].iter().copied());
        for &c in &plan.clause_buckets[k + 1] {
            if !prog.holds(&prog.clauses[c].1, vals)? {
                continue 'next;
            }
        }
        if descend(prog, plan, elems, k + 1, vals)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// First satisfying assignment of the primary variables over `GF(q)`, in
/// lexicographic order (earlier binders more significant, field elements in
/// their code order), or `None` when the space is exhausted.
pub fn search_witness(
    ast: &FormulaAst,
    field: &FiniteField,
    cap: usize,
    mode: ExecMode,
) -> Result<Option<Vec<(String, u32)>>> {
    let prog = Program::new(ast, field, &[])?;
    let plan = plan(&prog);
    if plan.primaries.len() > cap {
        return Err(Error::capability(format!("{} variables exceed the search cap of {cap}", plan.primaries.len())));
    }
    let mut vals: Vec<Option<u32>> = vec![None; prog.names.len()];
    prog.fill_defs(&mut vals, plan.def_buckets[0].iter().copied());
    for &c in &plan.clause_buckets[0] {
        if !prog.holds(&prog.clauses[c].1, &vals)? {
            return Ok(None);
        }
    }
    let elems = field.elements();
    let extract = |vals: &[Option<u32>]| {
        plan.primaries.iter().map(|&i| (prog.names[i].clone(), vals[i].unwrap())).collect::<Vec<_>>()
    };
    if plan.primaries.is_empty() {
        let found = descend(&prog, &plan, &elems, 0, &mut vals)?;
        return Ok(found.then(|| extract(&vals)));
    }
    let first = find_first(mode, elems.clone(), |e| {
        let mut vals = vals.clone();
        vals[plan.primaries[0]] = Some(e);
        prog.fill_defs(&mut vals, plan.def_buckets[1].iter().copied());
        for &c in &plan.clause_buckets[1] {
            match prog.holds(&prog.clauses[c].1, &vals) {
                Ok(true) => {}
                Ok(false) => return None,
                Err(err) => return Some(Err(err)),
            }
        }
        match descend(&prog, &plan, &elems, 1, &mut vals) {
            Ok(true) => Some(Ok(extract(&vals))),
            Ok(false) => None,
            Err(err) => Some(Err(err)),
        }
    });
    first.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rationals};
    use crate::formula::parse_formula;

    #[test]
    fn structures_parse() {
        assert_eq!("Q:p=2,3".parse::<Structure>().unwrap(), Structure::Rationals { primes: vec![2, 3] });
        assert_eq!("GF:q=9".parse::<Structure>().unwrap(), Structure::Finite { q: 9 });
        assert!("GF:q=6".parse::<Structure>().is_err());
        assert!("Q:p=2,2".parse::<Structure>().is_err());
        assert_eq!("Q:p=2,3".parse::<Structure>().unwrap().to_string(), "Q:p=2,3");
    }

    #[test]
    fn reflexive_equation_and_valuation_atom() {
        let ast = parse_formula("(exists ((v x)) (= (var x) (var x)))").unwrap();
        let asg = HashMap::from([("x".to_string(), rat(7, 3))]);
        assert!(eval_formula(&ast, &Rationals, &[], &asg).unwrap().holds());
        let ast = parse_formula("(exists ((v x)) (O 1 (var x)))").unwrap();
        let half = HashMap::from([("x".to_string(), rat(1, 2))]);
        assert!(!eval_formula(&ast, &Rationals, &[2], &half).unwrap().holds());
        assert!(eval_formula(&ast, &Rationals, &[3], &half).unwrap().holds());
        let e = eval_formula(&ast, &Rationals, &[3], &HashMap::new()).unwrap_err();
        assert!(e.to_string().contains("unbound variable x"));
    }

    #[test]
    fn lin_variables_are_solved() {
        // x ∈ ℳ_2 by the recipe with t′ solved from t·t′ = 1
        let text = "(exists ((v x) (v t (lin g))) (or (= (var x) 0) (and (O 1 (var x)) (not (O 1 (var t))) (= (* (var x) (var t)) 1))))";
        let ast = parse_formula(text).unwrap();
        for (v, m) in [(rat(4, 1), true), (rat(3, 1), false), (rat(0, 1), true), (rat(1, 2), false)] {
            let asg = HashMap::from([("x".to_string(), v)]);
            assert_eq!(eval_formula(&ast, &Rationals, &[2], &asg).unwrap().holds(), m);
        }
    }

    #[test]
    fn search_basics() {
        let f = FiniteField::new(3).unwrap();
        let ast = parse_formula("(exists ((v x)) (= (var x) 1))").unwrap();
        assert_eq!(search_witness(&ast, &f, 12, ExecMode::Sequential).unwrap(), Some(vec![("x".into(), 1)]));
        let ast = parse_formula("(exists ((v x) (v y)) (= 0 1))").unwrap();
        assert_eq!(search_witness(&ast, &f, 12, ExecMode::Parallel).unwrap(), None);
        let many = format!("(exists ({}) (and))", (0..13).map(|i| format!("(v x{i})")).collect::<Vec<_>>().join(" "));
        let e = search_witness(&parse_formula(&many).unwrap(), &f, 12, ExecMode::Sequential).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
