//! Prenex existential formulas over the language `{+, ·, 0, 1, O_1, …, O_n}`
//! and their S-expression text form.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! formula  := (exists (binder*) body)
//! binder   := (v NAME) | (v NAME (def TERM)) | (v NAME (lin GROUP)) | (vec NAME LEN)
//! body     := (and body*) | (or body*) | (not body) | (= TERM TERM) | (O I TERM)
//!           | (veq VTERM VTERM) | (irreducible TERM*) | (label "NAME" body)
//! TERM     := (var NAME) | 0 | 1 | (k LITERAL) | (+ TERM*) | (* TERM*) | (neg TERM)
//! VTERM    := (vvar NAME) | (vscalar TERM) | (basis J) | (v+ VTERM*) | (v* VTERM*)
//!           | (vneg VTERM) | (vscale TERM VTERM) | (vsubst VTERM VTERM)
//!           | (vpoly (TERM*) VTERM)
//! ```
//!
//! `(v x (def T))` abbreviates `∃x (x = T ∧ …)`. `(v x (lin G))` is an
//! ordinary existential variable; the hint says every equation mentioning the
//! variables of group `G` is affine in them, which the evaluator uses to
//! produce their values. `(vec x n)` stands for `x.0 … x.{n−1}`. Vector terms
//! live in `F[X]/(f_c)` where `f_c = X^d + c.{d−1}X^{d−1} + ⋯ + c.0` and `c`
//! is the vector variable of that name; they disappear under [`expand_algebra`].
//! `(irreducible t_0 … t_{d−1})` asserts that `X^d + t_{d−1}X^{d−1} + ⋯ + t_0`
//! is irreducible over the base field.

mod compile;
mod eval;
mod expand;

pub use compile::{compile_obs53, compile_prop54, witness_assignment};
pub use eval::{eval_formula, search_witness, Structure, DEFAULT_VARIABLE_CAP};
pub use expand::expand_algebra;

use crate::error::Result;
use crate::sexp::{parse_one, Sexp, SexpKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    /// A base-field literal in the field's own notation.
    Lit(String),
    Add(Vec<Term>),
    Mul(Vec<Term>),
    Neg(Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VTerm {
    Var(String),
    Scalar(Term),
    Basis(usize),
    Add(Vec<VTerm>),
    Mul(Vec<VTerm>),
    Neg(Box<VTerm>),
    Scale(Term, Box<VTerm>),
    /// `Σ_j p_j · x^j` for the coordinates `p_j` of the first operand.
    Subst(Box<VTerm>, Box<VTerm>),
    /// `Σ_j t_j · x^j`.
    Poly(Vec<Term>, Box<VTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Eq(Term, Term),
    /// `O_i(t)`, `i ≥ 1`.
    O(usize, Term),
    VEq(VTerm, VTerm),
    Irreducible(Vec<Term>),
    Label(String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    Primary,
    Def(Term),
    Lin(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binder {
    Var { name: String, kind: VarKind },
    Vec { name: String, len: usize },
}

impl Binder {
    pub fn primary(name: impl Into<String>) -> Self {
        Binder::Var { name: name.into(), kind: VarKind::Primary }
    }

    pub fn lin(name: impl Into<String>, group: impl Into<String>) -> Self {
        Binder::Var { name: name.into(), kind: VarKind::Lin(group.into()) }
    }

    pub fn vec(name: impl Into<String>, len: usize) -> Self {
        Binder::Vec { name: name.into(), len }
    }

    pub fn name(&self) -> &str {
        match self {
            Binder::Var { name, .. } | Binder::Vec { name, .. } => name,
        }
    }
}

/// `∃ binders : body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaAst {
    pub binders: Vec<Binder>,
    pub body: Formula,
}

impl FormulaAst {
    /// No vector binders or vector atoms left.
    pub fn is_expanded(&self) -> bool {
        self.binders.iter().all(|b| matches!(b, Binder::Var { .. })) && !self.body.has_vectors()
    }

    /// Top-level clauses with their labels (`clause.N` when unlabelled).
    pub fn clauses(&self) -> Vec<(String, &Formula)> {
        let items: Vec<&Formula> = match &self.body {
            Formula::And(items) => items.iter().collect(),
            f => vec![f],
        };
        items
            .into_iter()
            .enumerate()
            .map(|(n, f)| match f {
                Formula::Label(l, inner) => (l.clone(), &**inner),
                f => (format!("clause.{}", n + 1), f),
            })
            .collect()
    }
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn label(name: impl Into<String>, f: Formula) -> Formula {
        Formula::Label(name.into(), Box::new(f))
    }

    fn has_vectors(&self) -> bool {
        match self {
            Formula::VEq(..) => true,
            Formula::And(v) | Formula::Or(v) => v.iter().any(Formula::has_vectors),
            Formula::Not(f) | Formula::Label(_, f) => f.has_vectors(),
            _ => false,
        }
    }
}

// ---- printing ----

fn a(s: impl Into<String>) -> Sexp {
    Sexp::atom(s)
}

fn term_sexp(t: &Term) -> Sexp {
    match t {
        Term::Var(n) => Sexp::tagged("var", vec![a(n.as_str())]),
        Term::Zero => a("0"),
        Term::One => a("1"),
        Term::Lit(l) => Sexp::tagged("k", vec![a(l.as_str())]),
        Term::Add(v) => Sexp::tagged("+", v.iter().map(term_sexp).collect()),
        Term::Mul(v) => Sexp::tagged("*", v.iter().map(term_sexp).collect()),
        Term::Neg(t) => Sexp::tagged("neg", vec![term_sexp(t)]),
    }
}

fn vterm_sexp(t: &VTerm) -> Sexp {
    match t {
        VTerm::Var(n) => Sexp::tagged("vvar", vec![a(n.as_str())]),
        VTerm::Scalar(t) => Sexp::tagged("vscalar", vec![term_sexp(t)]),
        VTerm::Basis(j) => Sexp::tagged("basis", vec![a(j.to_string())]),
        VTerm::Add(v) => Sexp::tagged("v+", v.iter().map(vterm_sexp).collect()),
        VTerm::Mul(v) => Sexp::tagged("v*", v.iter().map(vterm_sexp).collect()),
        VTerm::Neg(t) => Sexp::tagged("vneg", vec![vterm_sexp(t)]),
        VTerm::Scale(s, t) => Sexp::tagged("vscale", vec![term_sexp(s), vterm_sexp(t)]),
        VTerm::Subst(p, x) => Sexp::tagged("vsubst", vec![vterm_sexp(p), vterm_sexp(x)]),
        VTerm::Poly(c, x) => Sexp::tagged("vpoly", vec![Sexp::list(c.iter().map(term_sexp).collect()), vterm_sexp(x)]),
    }
}

fn formula_sexp(f: &Formula) -> Sexp {
    match f {
        Formula::And(v) => Sexp::tagged("and", v.iter().map(formula_sexp).collect()),
        Formula::Or(v) => Sexp::tagged("or", v.iter().map(formula_sexp).collect()),
        Formula::Not(f) => Sexp::tagged("not", vec![formula_sexp(f)]),
        Formula::Eq(l, r) => Sexp::tagged("=", vec![term_sexp(l), term_sexp(r)]),
        Formula::O(i, t) => Sexp::tagged("O", vec![a(i.to_string()), term_sexp(t)]),
        Formula::VEq(l, r) => Sexp::tagged("veq", vec![vterm_sexp(l), vterm_sexp(r)]),
        Formula::Irreducible(v) => Sexp::tagged("irreducible", v.iter().map(term_sexp).collect()),
        Formula::Label(l, f) => Sexp::tagged("label", vec![Sexp::string(l.as_str()), formula_sexp(f)]),
    }
}

fn binder_sexp(b: &Binder) -> Sexp {
    match b {
        Binder::Vec { name, len } => Sexp::tagged("vec", vec![a(name.as_str()), a(len.to_string())]),
        Binder::Var { name, kind } => {
            let mut items = vec![a(name.as_str())];
            match kind {
                VarKind::Primary => {}
                VarKind::Def(t) => items.push(Sexp::tagged("def", vec![term_sexp(t)])),
                VarKind::Lin(g) => items.push(Sexp::tagged("lin", vec![a(g.as_str())])),
            }
            Sexp::tagged("v", items)
        }
    }
}

pub fn formula_to_sexp(ast: &FormulaAst) -> Sexp {
    Sexp::tagged("exists", vec![Sexp::list(ast.binders.iter().map(binder_sexp).collect()), formula_sexp(&ast.body)])
}

/// Canonical text: binders and clauses in construction order, 100 columns.
pub fn serialize_formula(ast: &FormulaAst) -> String {
    let mut s = formula_to_sexp(ast).to_pretty(100);
    s.push('\n');
    s
}

// ---- parsing ----

fn arity(s: &Sexp, n: usize) -> Result<&[Sexp]> {
    let t = s.tail();
    if t.len() != n {
        return Err(s.error(format!("({} ...) takes {n} argument(s), found {}", s.head().unwrap_or("?"), t.len())));
    }
    Ok(t)
}

fn name_of(s: &Sexp) -> Result<String> {
    Ok(s.expect_atom("a name")?.to_string())
}

fn parse_term(s: &Sexp) -> Result<Term> {
    if let SexpKind::Atom(x) = &s.kind {
        return match x.as_str() {
            "0" => Ok(Term::Zero),
            "1" => Ok(Term::One),
            _ => Err(s.error(format!("unexpected atom {x:?} in term position"))),
        };
    }
    let head = s.head().ok_or_else(|| s.error("term must start with a head symbol"))?;
    match head {
        "var" => Ok(Term::Var(name_of(&arity(s, 1)?[0])?)),
        "k" => Ok(Term::Lit(name_of(&arity(s, 1)?[0])?)),
        "+" => Ok(Term::Add(s.tail().iter().map(parse_term).collect::<Result<_>>()?)),
        "*" => Ok(Term::Mul(s.tail().iter().map(parse_term).collect::<Result<_>>()?)),
        "neg" => Ok(Term::Neg(Box::new(parse_term(&arity(s, 1)?[0])?))),
        h => Err(s.error(format!("unknown term head {h:?}"))),
    }
}

fn parse_vterm(s: &Sexp) -> Result<VTerm> {
    let head = s.head().ok_or_else(|| s.error("vector term must start with a head symbol"))?;
    let many = || s.tail().iter().map(parse_vterm).collect::<Result<Vec<_>>>();
    match head {
        "vvar" => Ok(VTerm::Var(name_of(&arity(s, 1)?[0])?)),
        "vscalar" => Ok(VTerm::Scalar(parse_term(&arity(s, 1)?[0])?)),
        "basis" => Ok(VTerm::Basis(arity(s, 1)?[0].expect_usize("basis index")?)),
        "v+" => Ok(VTerm::Add(many()?)),
        "v*" => Ok(VTerm::Mul(many()?)),
        "vneg" => Ok(VTerm::Neg(Box::new(parse_vterm(&arity(s, 1)?[0])?))),
        "vscale" => {
            let t = arity(s, 2)?;
            Ok(VTerm::Scale(parse_term(&t[0])?, Box::new(parse_vterm(&t[1])?)))
        }
        "vsubst" => {
            let t = arity(s, 2)?;
            Ok(VTerm::Subst(Box::new(parse_vterm(&t[0])?), Box::new(parse_vterm(&t[1])?)))
        }
        "vpoly" => {
            let t = arity(s, 2)?;
            let coeffs = t[0].expect_list("coefficient list")?.iter().map(parse_term).collect::<Result<_>>()?;
            Ok(VTerm::Poly(coeffs, Box::new(parse_vterm(&t[1])?)))
        }
        h => Err(s.error(format!("unknown vector term head {h:?}"))),
    }
}

fn parse_body(s: &Sexp) -> Result<Formula> {
    let head = s.head().ok_or_else(|| s.error("formula must start with a head symbol"))?;
    let many = || s.tail().iter().map(parse_body).collect::<Result<Vec<_>>>();
    match head {
        "and" => Ok(Formula::And(many()?)),
        "or" => Ok(Formula::Or(many()?)),
        "not" => Ok(Formula::Not(Box::new(parse_body(&arity(s, 1)?[0])?))),
        "=" => {
            let t = arity(s, 2)?;
            Ok(Formula::Eq(parse_term(&t[0])?, parse_term(&t[1])?))
        }
        "O" => {
            let t = arity(s, 2)?;
            let i = t[0].expect_usize("valuation index")?;
            if i == 0 {
                return Err(t[0].error("valuation indices start at 1"));
            }
            Ok(Formula::O(i, parse_term(&t[1])?))
        }
        "veq" => {
            let t = arity(s, 2)?;
            Ok(Formula::VEq(parse_vterm(&t[0])?, parse_vterm(&t[1])?))
        }
        "irreducible" => Ok(Formula::Irreducible(s.tail().iter().map(parse_term).collect::<Result<_>>()?)),
        "label" => {
            let t = arity(s, 2)?;
            Ok(Formula::Label(name_of(&t[0])?, Box::new(parse_body(&t[1])?)))
        }
        h => Err(s.error(format!("unknown formula head {h:?}"))),
    }
}

fn parse_binder(s: &Sexp) -> Result<Binder> {
    match s.head() {
        Some("vec") => {
            let t = arity(s, 2)?;
            Ok(Binder::Vec { name: name_of(&t[0])?, len: t[1].expect_usize("vector length")? })
        }
        Some("v") => {
            let t = s.tail();
            let kind = match t {
                [_] => VarKind::Primary,
                [_, hint] => match hint.head() {
                    Some("def") => VarKind::Def(parse_term(&arity(hint, 1)?[0])?),
                    Some("lin") => VarKind::Lin(name_of(&arity(hint, 1)?[0])?),
                    _ => return Err(hint.error("expected (def TERM) or (lin GROUP)")),
                },
                _ => return Err(s.error("(v NAME [hint]) expected")),
            };
            Ok(Binder::Var { name: name_of(&t[0])?, kind })
        }
        _ => Err(s.error("expected a binder (v ...) or (vec ...)")),
    }
}

pub fn formula_from_sexp(s: &Sexp) -> Result<FormulaAst> {
    if s.head() != Some("exists") {
        return Err(s.error("formula must be (exists (binders...) body)"));
    }
    let t = arity(s, 2)?;
    let binders: Vec<Binder> = t[0].expect_list("binder list")?.iter().map(parse_binder).collect::<Result<_>>()?;
    let mut seen = std::collections::HashSet::new();
    for (b, node) in binders.iter().zip(t[0].as_list().unwrap()) {
        if !seen.insert(b.name().to_string()) {
            return Err(node.error(format!("variable {} bound twice", b.name())));
        }
    }
    Ok(FormulaAst { binders, body: parse_body(&t[1])? })
}

pub fn parse_formula(text: &str) -> Result<FormulaAst> {
    formula_from_sexp(&parse_one(text)?)
}
