//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the exit code with the rendered report; `main` only
//! writes the bytes out.
//!
//! Exit codes: 0 when the command completed (an unsolvable problem or a
//! failing witness still completes), 1 for input errors, 2 for capability
//! limits.

pub mod problem;
pub mod report;

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::embed::{projectivity_scan, separated_check, solve_lsep};
use crate::error::{Error, Result};
use crate::extension::cyclotomic;
use crate::factor::DEFAULT_SEED;
use crate::field::{Field, FiniteField, Rationals};
use crate::formula::{
    compile_obs53, compile_prop54, eval_formula, expand_algebra, parse_formula, search_witness, serialize_formula,
    witness_assignment, FormulaAst, Structure, DEFAULT_VARIABLE_CAP,
};
use crate::freeprod::{separating_quotient_search, FreeProduct, Separation, Word, DEFAULT_WORD_CAP};
use crate::group::catalog::catalog;
use crate::group::{GroupRef, Subgroup};
use crate::par::ExecMode;
use crate::sexp::{parse_all, Sexp};
use crate::valuation::{count_prolongations, lemma210_search, ValuedField};
use crate::witness::{
    check_obs53, check_prop54, extract_solution, induced_algebra_witness, GaloisAlgebra, GaloisWitness, ProblemSide,
    ThetaBlock,
};

pub use problem::{parse_catalog, parse_problem, ProblemFile, SideData, SideEntry};
pub use report::{emit_report, Format, Report};

/// Environment variable naming an alternate group-catalog file.
pub const CATALOG_ENV: &str = "GALOIS_EMBED_CATALOG";

#[derive(Debug, Parser)]
#[command(
    name = "galois-embed",
    version,
    about = "Finite embedding problems, decomposition groups and solvability formulas"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the randomized splitting step of GF(p) factorization.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Run every enumeration on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Append wall-clock time to the report (makes reports run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Obs53,
    Prop54,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every locally split embedding problem in a problem file.
    SolveEp {
        file: PathBuf,
        /// Only the problem with this name.
        #[arg(long)]
        lsep: Option<String>,
        /// Maximum number of solutions listed per problem.
        #[arg(long, default_value_t = 16)]
        max_solutions: usize,
    },
    /// Search the catalog for locally split problems over G without a solution.
    ScanProjectivity {
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Group name, from the problem file or the catalog.
        #[arg(long)]
        group: String,
        /// Distinguished subgroups declared in the problem file.
        #[arg(long, value_delimiter = ',')]
        parts: Vec<String>,
        /// Require locally conjugate solutions.
        #[arg(long)]
        strong: bool,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        #[arg(long, default_value_t = 5)]
        max_counterexamples: usize,
    },
    /// Separate reduced words of a free product by finite quotients.
    Freeprod {
        /// Factor group names, e.g. C2,C3.
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Largest catalog group tried as a quotient.
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
        cap: usize,
    },
    /// Decomposition subfield of a prime in a cyclotomic field.
    Decomp {
        #[arg(long)]
        cyclotomic: usize,
        #[arg(long)]
        prime: u64,
    },
    /// Compile a problem side to a formula file.
    Compile {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        side: Option<String>,
        /// Defaults to prop54 when the side has parts, obs53 otherwise.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Include the irreducibility clause (obs53 only).
        #[arg(long)]
        irreducible: bool,
        /// Eliminate vector variables before writing.
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the induced-algebra witness of a side declared from an extension.
    GenWitness {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        side: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a formula on a witness; with --problem also run the direct checkers.
    CheckWitness {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        /// Defaults to the first (structure ...) of the problem file.
        #[arg(long)]
        structure: Option<String>,
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        side: Option<String>,
    },
    /// Exhaustive search for a satisfying assignment over a small finite field.
    SearchWitness {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        structure: String,
        #[arg(long, default_value_t = DEFAULT_VARIABLE_CAP)]
        cap: usize,
        /// With --problem, the witness found is converted and extracted.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        side: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

struct Ctx {
    report: Report,
    mode: ExecMode,
    seed: u64,
    /// Bytes to print instead of a report (formula or witness without --out).
    raw: Option<Vec<u8>>,
}

fn atom(x: impl ToString) -> Sexp {
    Sexp::atom(x.to_string())
}

fn entry(key: &str, vals: Vec<Sexp>) -> Sexp {
    Sexp::tagged(key, vals)
}

fn kv(key: &str, v: impl ToString) -> Sexp {
    entry(key, vec![atom(v)])
}

fn nums(key: &str, xs: &[usize]) -> Sexp {
    entry(key, xs.iter().map(atom).collect())
}

fn labels(key: &str, g: &GroupRef, xs: &[usize]) -> Sexp {
    entry(key, xs.iter().map(|&x| atom(g.label(x))).collect())
}

fn coeffs<F: Field>(key: &str, field: &F, p: &[F::Elem]) -> Sexp {
    entry(key, p.iter().map(|c| atom(field.format_elem(c))).collect())
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        self.report.inputs.push((path.display().to_string(), report::digest(&bytes)));
        String::from_utf8(bytes).map_err(|_| Error::input(format!("{}: not valid UTF-8", path.display())))
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        std::fs::write(path, bytes).map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
        self.report.push(entry("written", vec![Sexp::string(path.display().to_string()), atom(report::digest(bytes))]));
        Ok(())
    }

    fn load(&mut self, path: &Path) -> Result<ProblemFile> {
        let text = self.read(path)?;
        parse_problem(&text).map_err(|e| in_file(path, e))
    }

    fn catalog(&mut self) -> Result<Vec<GroupRef>> {
        match std::env::var_os(CATALOG_ENV) {
            None => Ok(catalog()),
            Some(p) => {
                let path = PathBuf::from(p);
                let text = self.read(&path)?;
                parse_catalog(&text).map_err(|e| in_file(&path, e))
            }
        }
    }
}

/// Prefixes positioned errors with the file they came from.
fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, col, msg } => Error::input(format!("{}:{line}:{col}: {msg}", path.display())),
        Error::Input(m) => Error::input(format!("{}: {m}", path.display())),
        e => e,
    }
}

fn pick_side<'a>(file: &'a ProblemFile, name: Option<&'a str>, path: &Path) -> Result<(&'a str, &'a SideData)> {
    match name {
        Some(n) => {
            let s = file.side(n).ok_or_else(|| Error::input(format!("{}: undeclared side '{n}'", path.display())))?;
            Ok((n, s))
        }
        None => file
            .sides
            .first()
            .map(|(n, s)| (n.as_str(), s))
            .ok_or_else(|| Error::input(format!("{}: no side declared", path.display()))),
    }
}

/// Parses arguments and runs the command. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text.into_bytes(), stderr: String::new() }
            } else {
                Outcome { code, stdout: Vec::new(), stderr: text }
            };
        }
    };
    let command = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ctx = Ctx {
        report: Report { command, ..Report::default() },
        mode: if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel },
        seed: cli.seed,
        raw: None,
    };
    let start = Instant::now();
    match dispatch(&mut ctx, &cli.command) {
        Ok(()) => {
            if cli.timing {
                ctx.report.timing = Some(start.elapsed());
            }
            let stdout = ctx.raw.take().unwrap_or_else(|| emit_report(&ctx.report, cli.format));
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: Vec::new(), stderr: format!("error: {e}\n") },
    }
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<()> {
    match cmd {
        Command::SolveEp { file, lsep, max_solutions } => solve_ep(ctx, file, lsep.as_deref(), *max_solutions),
        Command::ScanProjectivity { problem, group, parts, strong, max_order, max_counterexamples } => {
            scan(ctx, problem.as_deref(), group, parts, *strong, *max_order, *max_counterexamples)
        }
        Command::Freeprod { factors, max_len, max_order, cap } => freeprod(ctx, factors, *max_len, *max_order, *cap),
        Command::Decomp { cyclotomic, prime } => decomp(ctx, *cyclotomic, *prime),
        Command::Compile { problem, side, kind, irreducible, expand, out } => {
            compile(ctx, problem, side.as_deref(), *kind, *irreducible, *expand, out.as_deref())
        }
        Command::GenWitness { problem, side, out } => gen_witness(ctx, problem, side.as_deref(), out.as_deref()),
        Command::CheckWitness { formula, witness, structure, problem, side } => {
            check_witness(ctx, formula, witness, structure.as_deref(), problem.as_deref(), side.as_deref())
        }
        Command::SearchWitness { formula, structure, cap, problem, side, out } => {
            search(ctx, formula, structure, *cap, problem.as_deref(), side.as_deref(), out.as_deref())
        }
    }
}

fn solve_ep(ctx: &mut Ctx, path: &Path, only: Option<&str>, max_solutions: usize) -> Result<()> {
    let file = ctx.load(path)?;
    let chosen: Vec<_> = file.lseps.iter().filter(|(n, _)| only.is_none_or(|o| o == n)).collect();
    if chosen.is_empty() {
        return Err(Error::input(match only {
            Some(o) => format!("{}: undeclared lsep '{o}'", path.display()),
            None => format!("{}: no lsep declared", path.display()),
        }));
    }
    for (name, ep) in chosen {
        let sols = solve_lsep(ep, ctx.mode);
        let count = |f: fn(&crate::embed::SolutionReport) -> bool| sols.iter().filter(|s| f(s)).count();
        let mut items = vec![
            kv("name", name),
            kv("g-order", ep.g.order()),
            kv("a-order", ep.a.order()),
            kv("b-order", ep.b.order()),
            kv("parts", ep.parts.len()),
            kv("solutions", sols.len()),
            kv("proper", count(|s| s.proper)),
            kv("locally-exact", count(|s| s.locally_exact)),
            kv("locally-conjugate", count(|s| s.locally_conjugate)),
        ];
        for s in sols.iter().take(max_solutions) {
            items.push(entry(
                "solution",
                vec![
                    labels("gamma", &ep.a, s.gamma.images()),
                    kv("proper", s.proper),
                    kv("locally-exact", s.locally_exact),
                    kv("locally-conjugate", s.locally_conjugate),
                    entry(
                        "conjugators",
                        s.conjugators.iter().map(|c| c.map_or_else(|| atom("none"), |x| atom(ep.a.label(x)))).collect(),
                    ),
                ],
            ));
        }
        if sols.len() > max_solutions {
            items.push(kv("omitted", sols.len() - max_solutions));
        }
        ctx.report.push(entry("lsep", items));
    }
    Ok(())
}

fn scan(
    ctx: &mut Ctx,
    problem: Option<&Path>,
    group: &str,
    parts: &[String],
    strong: bool,
    max_order: usize,
    max_cex: usize,
) -> Result<()> {
    let file = match problem {
        Some(p) => ctx.load(p)?,
        None => ProblemFile::default(),
    };
    let all = ctx.catalog()?;
    let g =
        problem::resolve_group(&file, group, &all).ok_or_else(|| Error::input(format!("unknown group '{group}'")))?;
    let subs: Vec<Subgroup> = problem::named_subgroups(&file, parts, &g)?;
    let cat: Vec<GroupRef> = all.into_iter().filter(|a| a.order() <= max_order).collect();
    let (separated, pair) = separated_check(&subs);
    let rep = projectivity_scan(&g, &subs, &cat, strong, max_cex, ctx.mode)?;
    let r = &mut ctx.report;
    r.push(entry("group", vec![kv("name", group), kv("order", g.order())]));
    r.push(entry("parts", parts.iter().map(atom).collect()));
    let mut sep = vec![atom(separated)];
    if let Some((i, j)) = pair {
        sep.push(entry("overlap", vec![atom(&parts[i]), atom(&parts[j])]));
    }
    r.push(entry("separated", sep));
    r.push(kv("strong", strong));
    r.push(entry(
        "catalog",
        vec![
            kv("source", if std::env::var_os(CATALOG_ENV).is_some() { "file" } else { "builtin" }),
            kv("size", rep.catalog_size),
            kv("bound", rep.catalog_bound),
        ],
    ));
    r.push(kv("instances", rep.instances));
    r.push(kv("counterexamples", rep.counterexamples.len()));
    for c in &rep.counterexamples {
        r.push(entry(
            "counterexample",
            vec![
                kv("a", &c.a_name),
                kv("kernel-order", c.kernel_order),
                kv("b-order", c.b_order),
                nums("beta", &c.beta),
                entry("sections", c.sections.iter().map(|s| nums("section", s)).collect()),
            ],
        ));
    }
    let verdict = if rep.all_pass() {
        format!("no counterexample with |A| <= {}; not a proof of projectivity", rep.catalog_bound)
    } else {
        "counterexample found".to_string()
    };
    r.push(entry("verdict", vec![Sexp::string(verdict)]));
    Ok(())
}

fn word_text(pres: &FreeProduct, w: &Word) -> String {
    w.letters().iter().map(|&(i, g)| format!("{}:{}", i + 1, pres.factors[i].label(g))).collect::<Vec<_>>().join(" ")
}

fn freeprod(ctx: &mut Ctx, names: &[String], max_len: usize, max_order: usize, cap: usize) -> Result<()> {
    let all = ctx.catalog()?;
    let factors = names
        .iter()
        .map(|n| {
            all.iter()
                .find(|g| g.name() == *n)
                .cloned()
                .ok_or_else(|| Error::input(format!("unknown factor group '{n}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    let pres = FreeProduct::new(factors)?;
    let cat: Vec<GroupRef> = all.into_iter().filter(|a| a.order() <= max_order).collect();
    let words = pres.enumerate_words(max_len, cap);
    if let crate::freeprod::WordEnumeration::BoundReached { cap, .. } = &words {
        return Err(Error::capability(format!("word length {max_len} exceeds the cap {cap}")));
    }
    let (mut found, mut exhausted) = (0, 0);
    let mut items = Vec::new();
    for w in words.words().iter().filter(|w| !w.is_empty()) {
        let text = Sexp::string(word_text(&pres, w));
        match separating_quotient_search(&pres, w, &cat, ctx.mode)? {
            Separation::Found { catalog_index, evaluator, value } => {
                found += 1;
                let by = catalog_index.map_or_else(|| "factor".to_string(), |k| cat[k].name());
                items.push(entry("word", vec![text, kv("quotient", by), kv("value", evaluator.codomain.label(value))]));
            }
            Separation::Exhausted { .. } => {
                exhausted += 1;
                items.push(entry("word", vec![text, atom("unseparated")]));
            }
        }
    }
    let r = &mut ctx.report;
    r.push(entry("factors", names.iter().map(atom).collect()));
    r.push(kv("max-length", max_len));
    r.push(entry(
        "catalog",
        vec![kv("size", cat.len()), kv("bound", cat.iter().map(|g| g.order()).max().unwrap_or(0))],
    ));
    r.push(kv("words", found + exhausted));
    r.push(kv("separated", found));
    r.push(kv("unseparated", exhausted));
    r.results.extend(items);
    Ok(())
}

fn decomp(ctx: &mut Ctx, m: usize, p: u64) -> Result<()> {
    if m.is_multiple_of(p as usize) {
        return Err(Error::input(format!("{p} divides {m}: ramified primes are not supported")));
    }
    let ext = cyclotomic(m)?;
    let count = count_prolongations(&ext.modulus, p, ctx.seed)?;
    let cert = lemma210_search(&ext, p, count, ctx.seed)?;
    let r = &mut ctx.report;
    r.push(kv("cyclotomic", m));
    r.push(kv("prime", p));
    r.push(kv("degree", ext.degree()));
    r.push(kv("prolongations", count));
    let Some(c) = cert else {
        r.push(kv("certificate", "none"));
        return Ok(());
    };
    let q = Rationals;
    r.push(labels("decomposition-group", &ext.group, c.subgroup.elements()));
    r.push(kv("decomposition-field-degree", ext.degree() / c.subgroup.order()));
    r.push(coeffs("theta", &q, &c.theta));
    r.push(coeffs("min-poly", &q, &c.certificate.min_poly));
    r.push(coeffs("h", &q, &c.h));
    r.push(entry("valuations", c.report.inequalities.iter().map(|(n, v)| entry(n, vec![atom(v)])).collect()));
    r.push(kv("irreducible", c.report.irreducible));
    r.push(kv("root-verified", c.report.root_verified));
    r.push(kv("hensel", c.report.hensel_ok));
    r.push(kv("holds", c.report.holds));
    Ok(())
}

fn compile_side<F: Field>(side: &ProblemSide<F>, kind: Option<Kind>, irreducible: bool) -> Result<(Kind, FormulaAst)> {
    let kind = kind.unwrap_or(if side.parts.is_empty() { Kind::Obs53 } else { Kind::Prop54 });
    let ast = match kind {
        Kind::Obs53 => compile_obs53(side, irreducible),
        Kind::Prop54 => {
            if irreducible {
                return Err(Error::input("--irreducible applies to obs53 only"));
            }
            compile_prop54(side, side.parts.len())?
        }
    };
    Ok((kind, ast))
}

fn compile(
    ctx: &mut Ctx,
    path: &Path,
    side: Option<&str>,
    kind: Option<Kind>,
    irreducible: bool,
    expand: bool,
    out: Option<&Path>,
) -> Result<()> {
    let file = ctx.load(path)?;
    let (name, data) = pick_side(&file, side, path)?;
    let (kind, mut ast) = match data {
        SideData::Rational(s) => compile_side(&s.side, kind, irreducible)?,
        SideData::Finite(s) => compile_side(&s.side, kind, irreducible)?,
    };
    if expand {
        ast = expand_algebra(&ast)?;
    }
    let text = serialize_formula(&ast);
    let Some(out) = out else {
        ctx.raw = Some(text.into_bytes());
        return Ok(());
    };
    ctx.write(out, text.as_bytes())?;
    let r = &mut ctx.report;
    r.push(kv("side", name));
    r.push(kv("field", data.field_tag()));
    r.push(kv("kind", format!("{kind:?}").to_lowercase()));
    r.push(kv("expanded", expand));
    r.push(kv("binders", ast.binders.len()));
    r.push(kv("clauses", ast.clauses().len()));
    Ok(())
}

fn generate<F: ValuedField>(entry: &SideEntry<F>, name: &str, seed: u64) -> Result<GaloisWitness<F>> {
    let Some((ext, scen)) = &entry.derived else {
        return Err(Error::input(format!("side '{name}' is not declared from an extension")));
    };
    induced_algebra_witness(ext, &entry.side, scen, &entry.primes, seed)
}

fn gen_witness(ctx: &mut Ctx, path: &Path, side: Option<&str>, out: Option<&Path>) -> Result<()> {
    let file = ctx.load(path)?;
    let (name, data) = pick_side(&file, side, path)?;
    let sexp = match data {
        SideData::Rational(s) => generate(s, name, ctx.seed)?.to_sexp(&s.side.field),
        SideData::Finite(s) => generate(s, name, ctx.seed)?.to_sexp(&s.side.field),
    };
    let text = format!("{}\n", sexp.to_pretty(100));
    let Some(out) = out else {
        ctx.raw = Some(text.into_bytes());
        return Ok(());
    };
    ctx.write(out, text.as_bytes())?;
    ctx.report.push(kv("side", name));
    ctx.report.push(kv("field", data.field_tag()));
    Ok(())
}

/// Assignment for a witness without side data: every vector of the witness under the compiler's names.
fn all_values<F: Field>(w: &GaloisWitness<F>) -> HashMap<String, F::Elem> {
    let mut out = HashMap::new();
    let mut put = |name: String, vals: &[F::Elem]| {
        for (i, x) in vals.iter().enumerate() {
            out.insert(format!("{name}.{i}"), x.clone());
        }
    };
    put("c".into(), &w.c);
    for (k, v) in w.x.iter().enumerate() {
        put(format!("x{}", k + 1), v);
    }
    put("u".into(), &w.u);
    for (j, v) in w.z.iter().enumerate() {
        put(format!("z{}", j + 1), v);
    }
    for (t, b) in w.blocks.iter().enumerate() {
        put(format!("y{}", t + 1), &b.y);
        put(format!("h{}", t + 1), &b.h);
        put(format!("w{}", t + 1), &b.w);
    }
    out
}

fn witness_node(path: &Path, text: &str) -> Result<Sexp> {
    let nodes = parse_all(text).map_err(|e| in_file(path, e))?;
    nodes
        .into_iter()
        .find(|n| n.head() == Some("witness"))
        .ok_or_else(|| Error::input(format!("{}: no (witness ...) form", path.display())))
}

/// Formula verdict, and with a side the direct checkers' verdict.
fn check_in<F: ValuedField>(
    field: &F,
    primes: &[u64],
    ast: &FormulaAst,
    node: &Sexp,
    side: Option<&ProblemSide<F>>,
    path: &Path,
) -> Result<Vec<Sexp>> {
    let w = GaloisWitness::from_sexp(field, node).map_err(|e| in_file(path, e))?;
    let asg = match side {
        Some(s) => witness_assignment(&w, s)?,
        None => all_values(&w),
    };
    let fv = eval_formula(ast, field, primes, &asg)?;
    let mut items = vec![verdict_entry("formula", fv.failure.as_deref())];
    if let Some(side) = side {
        let theta = ast.clauses().iter().any(|(l, _)| l.starts_with("theta"));
        let dv = if theta {
            if primes.len() < side.parts.len() {
                return Err(Error::input(format!(
                    "{} parts but the structure has {} primes",
                    side.parts.len(),
                    primes.len()
                )));
            }
            check_prop54(&w, side, &primes[..side.parts.len()])?
        } else {
            let irr = ast.clauses().iter().any(|(l, _)| l == "phi.irreducible");
            check_obs53(&w, side, irr)?
        };
        items.push(verdict_entry("direct", dv.failure.as_deref()));
        items.push(kv("agree", fv == dv));
    }
    Ok(items)
}

fn verdict_entry(key: &str, failure: Option<&str>) -> Sexp {
    match failure {
        None => entry(key, vec![atom("holds")]),
        Some(a) => entry(key, vec![atom("fails"), atom(a)]),
    }
}

fn check_witness(
    ctx: &mut Ctx,
    fpath: &Path,
    wpath: &Path,
    structure: Option<&str>,
    problem: Option<&Path>,
    side: Option<&str>,
) -> Result<()> {
    let ast = parse_formula(&ctx.read(fpath)?).map_err(|e| in_file(fpath, e))?;
    let wtext = ctx.read(wpath)?;
    let node = witness_node(wpath, &wtext)?;
    let file = match problem {
        Some(p) => Some((p, ctx.load(p)?)),
        None => None,
    };
    let st: Structure = match (structure, &file) {
        (Some(s), _) => s.parse()?,
        (None, Some((_, f))) if !f.structures.is_empty() => f.structures[0].clone(),
        _ => return Err(Error::input("no --structure given and no (structure ...) in the problem file")),
    };
    let chosen = match &file {
        Some((p, f)) => Some(pick_side(f, side, p)?),
        None => None,
    };
    let items = match (&st, chosen.map(|(_, d)| d)) {
        (Structure::Rationals { primes }, None) => check_in(&Rationals, primes, &ast, &node, None, wpath)?,
        (Structure::Rationals { primes }, Some(SideData::Rational(s))) => {
            check_in(&Rationals, primes, &ast, &node, Some(&s.side), wpath)?
        }
        (Structure::Finite { q }, None) => check_in(&FiniteField::new(*q)?, &[], &ast, &node, None, wpath)?,
        (Structure::Finite { q }, Some(SideData::Finite(s))) if s.side.field.order() == *q => {
            check_in(&s.side.field, &[], &ast, &node, Some(&s.side), wpath)?
        }
        (_, Some(d)) => {
            return Err(Error::input(format!("structure {st} does not match the side's field {}", d.field_tag())))
        }
    };
    ctx.report.push(kv("structure", &st));
    if let Some((n, _)) = chosen {
        ctx.report.push(kv("side", n));
    }
    ctx.report.results.extend(items);
    Ok(())
}

/// Rebuilds a witness for `side` from named coordinates.
fn witness_from_values<F: Field>(side: &ProblemSide<F>, vals: &HashMap<String, F::Elem>) -> Result<GaloisWitness<F>> {
    let f = &side.field;
    let get = |name: String, len: usize| -> Result<Vec<F::Elem>> {
        (0..len)
            .map(|i| {
                vals.get(&format!("{name}.{i}"))
                    .cloned()
                    .ok_or_else(|| Error::input(format!("assignment lacks {name}.{i}")))
            })
            .collect()
    };
    let d = side.d();
    let c = get("c".into(), d)?;
    let x = (1..=d).map(|k| get(format!("x{k}"), d)).collect::<Result<Vec<_>>>()?;
    let u = get("u".into(), d)?;
    let z = if side.has_psi() {
        (1..=side.e()).map(|j| get(format!("z{j}"), d)).collect::<Result<Vec<_>>>()?
    } else {
        vec![GaloisAlgebra::new(f.clone(), &c).one()]
    };
    let blocks = side
        .parts
        .iter()
        .enumerate()
        .filter(|(t, _)| vals.contains_key(&format!("y{}.0", t + 1)))
        .map(|(t, p)| {
            let t = t + 1;
            Ok(ThetaBlock {
                y: get(format!("y{t}"), d)?,
                h: get(format!("h{t}"), p.r())?,
                w: get(format!("w{t}"), p.r())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GaloisWitness { c, x, u, z, blocks })
}

fn search(
    ctx: &mut Ctx,
    fpath: &Path,
    structure: &str,
    cap: usize,
    problem: Option<&Path>,
    side: Option<&str>,
    out: Option<&Path>,
) -> Result<()> {
    let ast = parse_formula(&ctx.read(fpath)?).map_err(|e| in_file(fpath, e))?;
    let Structure::Finite { q } = structure.parse()? else {
        return Err(Error::input("search-witness needs a finite structure GF:q=Q"));
    };
    let field = FiniteField::new(q)?;
    let ast = if ast.is_expanded() { ast } else { expand_algebra(&ast)? };
    let found = search_witness(&ast, &field, cap, ctx.mode)?;
    ctx.report.push(kv("structure", format!("GF:q={q}")));
    let Some(assignment) = found else {
        ctx.report.push(kv("witness", "none"));
        return Ok(());
    };
    ctx.report.push(kv("witness", "found"));
    ctx.report.push(entry(
        "assignment",
        assignment.iter().map(|(n, v)| entry(n, vec![atom(field.format_elem(v))])).collect(),
    ));
    let Some(ppath) = problem else {
        return Ok(());
    };
    let file = ctx.load(ppath)?;
    let (name, data) = pick_side(&file, side, ppath)?;
    let SideData::Finite(entry_f) = data else {
        return Err(Error::input(format!("side '{name}' is not over a finite field")));
    };
    if entry_f.side.field.order() != q {
        return Err(Error::input(format!(
            "side '{name}' is over {}, the search over GF({q})",
            entry_f.side.field.tag()
        )));
    }
    let vals: HashMap<String, u32> = assignment.into_iter().collect();
    let w = witness_from_values(&entry_f.side, &vals)?;
    let ex = extract_solution(&w, &entry_f.side, &[], ctx.seed)?;
    let r = &mut ctx.report;
    r.push(kv("side", name));
    r.push(coeffs("extension-modulus", &field, &ex.f));
    r.push(kv("extension-degree", ex.f.len() - 1));
    r.push(labels("galois-image", &entry_f.side.a, &ex.g_elems));
    r.push(kv("proper", ex.proper));
    if let Some(out) = out {
        let text = format!("{}\n", w.to_sexp(&field).to_pretty(100));
        ctx.write(out, text.as_bytes())?;
    }
    Ok(())
}
