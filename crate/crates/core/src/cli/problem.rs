//! Problem files: one S-expression document declaring named groups,
//! subgroups, homs, locally split problems, extensions, problem sides,
//! witnesses and structures. Declarations may only refer to names declared
//! earlier in the file.
//!
//! ```text
//! (group NAME (table (ROW) ...) [(labels L ...)])
//! (group NAME (catalog CATALOG-NAME))
//! (subgroup NAME GROUP (elements E ...))
//! (subgroup NAME GROUP (generated E ...))
//! (hom NAME DOMAIN CODOMAIN (images E ...) | identity | trivial)
//! (lsep NAME (alpha HOM) (beta HOM) (part SUBGROUP (section E ...)) ...)
//! (extension NAME (cyclotomic M) | (quadratic D) | (finite-field Q K))
//! (side NAME (extension EXT) (embed HOM) (beta HOM) [(parts SUBGROUP ...)] [(primes P ...)])
//! (side NAME (field Q | GF Q) (beta HOM) [(psi (ROW) ...)] (g C ...)
//!       [(part SUBGROUP (g C ...)) ...] [(primes P ...)])
//! (witness ...)
//! (structure "Q:p=2,3")
//! ```
//!
//! Elements are labels or, failing that, table indices. A section lists `βᵢ(b)` for the
//! elements `b` of `α(Gᵢ)` in ascending order. Polynomials list
//! coefficients from the constant term up. An extension also declares its
//! Galois group under the extension's name.

use crate::embed::{LocalMap, LocallySplitEP, Part};
use crate::error::{Error, Result};
use crate::extension::{cyclotomic, finite_field_extension, quadratic, GaloisExtension};
use crate::field::{Field, FiniteField, Rationals};
use crate::formula::Structure;
use crate::group::catalog::by_name;
use crate::group::{subgroup_generated, FiniteGroup, GroupHom, GroupRef, Subgroup};
use crate::sexp::{parse_all, Sexp};
use crate::witness::{derive_side, PartSide, ProblemSide, Scenario};

/// Message of an error without its category prefix.
pub fn bare_message(e: &Error) -> String {
    match e {
        Error::Input(m) | Error::Capability(m) | Error::Internal(m) => m.clone(),
        Error::Parse { msg, .. } => msg.clone(),
    }
}

/// Attaches the position of `node` unless `e` already has one or is a capability limit.
pub fn locate(node: &Sexp, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::Capability(_) => e,
        e => node.error(bare_message(&e)),
    }
}

#[derive(Debug, Clone)]
pub enum ExtensionData {
    Rational(GaloisExtension<Rationals>),
    Finite(GaloisExtension<FiniteField>),
}

/// A problem side with, when declared from an extension, the extension and scenario.
#[derive(Debug, Clone)]
pub struct SideEntry<F: Field> {
    pub side: ProblemSide<F>,
    pub derived: Option<(GaloisExtension<F>, Scenario<F>)>,
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone)]
pub enum SideData {
    Rational(SideEntry<Rationals>),
    Finite(SideEntry<FiniteField>),
}

impl SideData {
    pub fn field_tag(&self) -> String {
        match self {
            SideData::Rational(s) => s.side.field.tag(),
            SideData::Finite(s) => s.side.field.tag(),
        }
    }
}

/// Named declarations in file order.
#[derive(Debug, Clone, Default)]
pub struct ProblemFile {
    pub groups: Vec<(String, GroupRef)>,
    pub subgroups: Vec<(String, Subgroup)>,
    pub homs: Vec<(String, GroupHom)>,
    pub lseps: Vec<(String, LocallySplitEP)>,
    pub extensions: Vec<(String, ExtensionData)>,
    pub sides: Vec<(String, SideData)>,
    pub witnesses: Vec<Sexp>,
    pub structures: Vec<Structure>,
}

fn find<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, t)| t)
}

impl ProblemFile {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
            && self.subgroups.is_empty()
            && self.homs.is_empty()
            && self.lseps.is_empty()
            && self.extensions.is_empty()
            && self.sides.is_empty()
            && self.witnesses.is_empty()
            && self.structures.is_empty()
    }

    pub fn group(&self, name: &str) -> Option<&GroupRef> {
        find(&self.groups, name)
    }

    pub fn subgroup(&self, name: &str) -> Option<&Subgroup> {
        find(&self.subgroups, name)
    }

    pub fn side(&self, name: &str) -> Option<&SideData> {
        find(&self.sides, name)
    }

    fn taken(&self, name: &str) -> bool {
        let names = self
            .groups
            .iter()
            .map(|x| &x.0)
            .chain(self.subgroups.iter().map(|x| &x.0))
            .chain(self.homs.iter().map(|x| &x.0))
            .chain(self.lseps.iter().map(|x| &x.0))
            .chain(self.extensions.iter().map(|x| &x.0))
            .chain(self.sides.iter().map(|x| &x.0));
        names.into_iter().any(|n| n == name)
    }
}

fn lookup<'a, T>(items: &'a [(String, T)], node: &Sexp, kind: &str) -> Result<&'a T> {
    let name = node.expect_atom(&format!("{kind} name"))?;
    find(items, name).ok_or_else(|| node.error(format!("undeclared {kind} '{name}'")))
}

fn element(g: &FiniteGroup, node: &Sexp) -> Result<usize> {
    let s = node.expect_atom("group element")?;
    let x = match (g.find_label(s), s.parse::<usize>()) {
        (Some(x), _) | (None, Ok(x)) => x,
        (None, Err(_)) => return Err(node.error(format!("unknown element label '{s}'"))),
    };
    if x >= g.order() {
        return Err(node.error(format!("element {x} out of range for a group of order {}", g.order())));
    }
    Ok(x)
}

fn elements(g: &FiniteGroup, nodes: &[Sexp]) -> Result<Vec<usize>> {
    nodes.iter().map(|n| element(g, n)).collect()
}

fn clause<'a>(node: &'a Sexp, key: &str) -> Result<&'a [Sexp]> {
    Ok(node.expect_field(key)?.tail())
}

fn single<'a>(node: &'a Sexp, key: &str) -> Result<&'a Sexp> {
    let f = node.expect_field(key)?;
    match f.tail() {
        [x] => Ok(x),
        _ => Err(f.error(format!("({key} ...) takes exactly one argument"))),
    }
}

fn poly<F: Field>(field: &F, nodes: &[Sexp]) -> Result<Vec<F::Elem>> {
    nodes.iter().map(|n| field.parse_elem(n.expect_atom("coefficient")?).map_err(|e| locate(n, e))).collect()
}

fn primes(node: &Sexp) -> Result<Vec<u64>> {
    match node.field("primes") {
        None => Ok(Vec::new()),
        Some(f) => f.tail().iter().map(|p| Ok(p.expect_usize("prime")? as u64)).collect(),
    }
}

/// Group declarations of a catalog file, in file order.
pub fn parse_catalog(text: &str) -> Result<Vec<GroupRef>> {
    let file = parse_problem(text)?;
    if file.groups.is_empty() {
        return Err(Error::input("catalog file declares no groups"));
    }
    Ok(file.groups.into_iter().map(|(_, g)| g).collect())
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut file = ProblemFile::default();
    for node in parse_all(text)? {
        let head = node.head().ok_or_else(|| node.error("expected a declaration (HEAD ...)"))?;
        match head {
            "witness" => {
                file.witnesses.push(node.clone());
                continue;
            }
            "structure" => {
                let s = node.tail().first().ok_or_else(|| node.error("(structure ...) needs a descriptor"))?;
                let st = s.expect_atom("structure descriptor")?.parse().map_err(|e| locate(s, e))?;
                file.structures.push(st);
                continue;
            }
            _ => {}
        }
        let name_node = node.tail().first().ok_or_else(|| node.error(format!("({head} ...) needs a name")))?;
        let name = name_node.expect_atom("declaration name")?.to_string();
        if file.taken(&name) {
            return Err(name_node.error(format!("'{name}' is declared twice")));
        }
        match head {
            "group" => {
                let g = parse_group(&node)?;
                file.groups.push((name, g));
            }
            "subgroup" => {
                let s = parse_subgroup(&file, &node)?;
                file.subgroups.push((name, s));
            }
            "hom" => {
                let h = parse_hom(&file, &node)?;
                file.homs.push((name, h));
            }
            "lsep" => {
                let ep = parse_lsep(&file, &node)?;
                file.lseps.push((name, ep));
            }
            "extension" => {
                let e = parse_extension(&node)?;
                let group = match &e {
                    ExtensionData::Rational(x) => x.group.clone(),
                    ExtensionData::Finite(x) => x.group.clone(),
                };
                file.groups.push((name.clone(), group));
                file.extensions.push((name, e));
            }
            "side" => {
                let s = parse_side(&file, &node)?;
                file.sides.push((name, s));
            }
            other => return Err(node.error(format!("unknown declaration '{other}'"))),
        }
    }
    Ok(file)
}

fn parse_group(node: &Sexp) -> Result<GroupRef> {
    let name = node.tail()[0].expect_atom("group name")?;
    if let Some(c) = node.field("catalog") {
        let [n] = c.tail() else {
            return Err(c.error("(catalog NAME) takes one name"));
        };
        let cname = n.expect_atom("catalog name")?;
        return by_name(cname).ok_or_else(|| n.error(format!("no catalog group named '{cname}'")));
    }
    let table = node.expect_field("table")?;
    let rows = table
        .tail()
        .iter()
        .map(|r| r.expect_list("table row")?.iter().map(|x| x.expect_usize("table entry")).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let labels = match node.field("labels") {
        None => None,
        Some(l) => Some(l.tail().iter().map(|x| Ok(x.expect_atom("label")?.to_string())).collect::<Result<Vec<_>>>()?),
    };
    let g = FiniteGroup::from_table(rows, labels).map_err(|e| locate(table, e))?;
    Ok(g.with_name(name).into_ref())
}

fn parse_subgroup(file: &ProblemFile, node: &Sexp) -> Result<Subgroup> {
    let parent_node = node.tail().get(1).ok_or_else(|| node.error("(subgroup NAME GROUP ...) needs a group"))?;
    let parent = lookup(&file.groups, parent_node, "group")?.clone();
    if let Some(e) = node.field("elements") {
        let elems = elements(&parent, e.tail())?;
        return Subgroup::new(parent, elems).map_err(|err| locate(e, err));
    }
    let g = node.field("generated").ok_or_else(|| node.error("subgroup needs (elements ...) or (generated ...)"))?;
    let gens = elements(&parent, g.tail())?;
    subgroup_generated(&parent, &gens).map_err(|err| locate(g, err))
}

fn parse_hom(file: &ProblemFile, node: &Sexp) -> Result<GroupHom> {
    let t = node.tail();
    if t.len() != 4 {
        return Err(node.error("expected (hom NAME DOMAIN CODOMAIN IMAGES)"));
    }
    let dom = lookup(&file.groups, &t[1], "group")?.clone();
    let cod = lookup(&file.groups, &t[2], "group")?.clone();
    let spec = &t[3];
    match (spec.as_atom(), spec.head()) {
        (Some("identity"), _) => {
            if *dom != *cod {
                return Err(spec.error("identity hom needs equal domain and codomain"));
            }
            Ok(GroupHom::identity(dom))
        }
        (Some("trivial"), _) => Ok(GroupHom::trivial(dom, cod)),
        (_, Some("images")) => {
            let images = elements(&cod, spec.tail())?;
            GroupHom::new(dom, cod, images).map_err(|e| locate(spec, e))
        }
        _ => Err(spec.error("expected (images ...), identity or trivial")),
    }
}

fn parse_lsep(file: &ProblemFile, node: &Sexp) -> Result<LocallySplitEP> {
    let alpha = lookup(&file.homs, single(node, "alpha")?, "hom")?.clone();
    let beta = lookup(&file.homs, single(node, "beta")?, "hom")?.clone();
    if *alpha.codomain != *beta.codomain {
        return Err(node.error("alpha and beta have different codomains"));
    }
    let mut parts = Vec::new();
    for p in node.tail().iter().filter(|n| n.head() == Some("part")) {
        let sub_node = p.tail().first().ok_or_else(|| p.error("(part SUBGROUP (section ...)) needs a subgroup"))?;
        let sub = lookup(&file.subgroups, sub_node, "subgroup")?.clone();
        if *sub.parent != *alpha.domain {
            return Err(sub_node.error("part subgroup does not lie in the domain of alpha"));
        }
        let sec = p.expect_field("section")?;
        let values = elements(&beta.domain, sec.tail())?;
        let mut img: Vec<usize> = sub.elements().iter().map(|&x| alpha.apply(x)).collect();
        img.sort_unstable();
        img.dedup();
        if values.len() != img.len() {
            return Err(sec.error(format!(
                "section lists {} values, alpha of the part has {} elements",
                values.len(),
                img.len()
            )));
        }
        let img = Subgroup::new(alpha.codomain.clone(), img).map_err(|e| locate(sec, e))?;
        let section = LocalMap::new(img, beta.domain.clone(), values).map_err(|e| locate(sec, e))?;
        parts.push(Part { sub, section });
    }
    LocallySplitEP::new(alpha, beta, parts).map_err(|e| locate(node, e))
}

fn parse_extension(node: &Sexp) -> Result<ExtensionData> {
    let spec = node.tail().get(1).ok_or_else(|| node.error("(extension NAME SPEC) needs a spec"))?;
    let args = spec.tail();
    let r = match (spec.head(), args) {
        (Some("cyclotomic"), [m]) => cyclotomic(m.expect_usize("m")?).map(ExtensionData::Rational),
        (Some("quadratic"), [d]) => quadratic(d.expect_i64("d")?).map(ExtensionData::Rational),
        (Some("finite-field"), [q, k]) => {
            finite_field_extension(q.expect_usize("q")? as u64, k.expect_usize("k")?).map(ExtensionData::Finite)
        }
        _ => return Err(spec.error("expected (cyclotomic M), (quadratic D) or (finite-field Q K)")),
    };
    r.map_err(|e| locate(spec, e))
}

fn parse_side(file: &ProblemFile, node: &Sexp) -> Result<SideData> {
    let beta = lookup(&file.homs, single(node, "beta")?, "hom")?.clone();
    let primes = primes(node)?;
    if let Some(ext_node) = node.field("extension") {
        let [ext_name] = ext_node.tail() else {
            return Err(ext_node.error("(extension NAME) takes one name"));
        };
        let ext = lookup(&file.extensions, ext_name, "extension")?;
        let embed = lookup(&file.homs, single(node, "embed")?, "hom")?.clone();
        let parts = match node.field("parts") {
            None => Vec::new(),
            Some(p) => {
                p.tail().iter().map(|s| lookup(&file.subgroups, s, "subgroup").cloned()).collect::<Result<Vec<_>>>()?
            }
        };
        fn derived<F: Field>(
            ext: &GaloisExtension<F>,
            embed: &GroupHom,
            beta: &GroupHom,
            parts: &[Subgroup],
            primes: Vec<u64>,
        ) -> Result<SideEntry<F>> {
            let (side, scen) = derive_side(ext, embed, beta, parts)?;
            Ok(SideEntry { side, derived: Some((ext.clone(), scen)), primes })
        }
        let data = match ext {
            ExtensionData::Rational(x) => derived(x, &embed, &beta, &parts, primes).map(SideData::Rational),
            ExtensionData::Finite(x) => derived(x, &embed, &beta, &parts, primes).map(SideData::Finite),
        };
        return data.map_err(|e| locate(node, e));
    }
    let fnode = node.expect_field("field")?;
    match fnode.tail() {
        [q] if q.as_atom() == Some("Q") => explicit_side(file, node, Rationals, beta, primes).map(SideData::Rational),
        [gf, q] if gf.as_atom() == Some("GF") => {
            let field = FiniteField::new(q.expect_usize("field order")? as u64).map_err(|e| locate(q, e))?;
            explicit_side(file, node, field, beta, primes).map(SideData::Finite)
        }
        _ => Err(fnode.error("expected (field Q) or (field GF Q)")),
    }
}

fn explicit_side<F: Field>(
    file: &ProblemFile,
    node: &Sexp,
    field: F,
    beta: GroupHom,
    primes: Vec<u64>,
) -> Result<SideEntry<F>> {
    let g = poly(&field, clause(node, "g")?)?;
    let psi = match node.field("psi") {
        Some(p) => p
            .tail()
            .iter()
            .map(|row| row.expect_list("psi row")?.iter().map(|x| x.expect_usize("psi entry")).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?,
        None => vec![vec![0]; beta.codomain.order()],
    };
    let mut parts = Vec::new();
    for p in node.tail().iter().filter(|n| n.head() == Some("part")) {
        let sub_node = p.tail().first().ok_or_else(|| p.error("(part SUBGROUP (g ...)) needs a subgroup"))?;
        let image = lookup(&file.subgroups, sub_node, "subgroup")?.clone();
        parts.push(PartSide::new(image, poly(&field, clause(p, "g")?)?));
    }
    let side = ProblemSide::new(field, beta, psi, g, parts).map_err(|e| locate(node, e))?;
    Ok(SideEntry { side, derived: None, primes })
}

/// Looks up `name` among the declarations of `file`, then in the catalog.
pub fn resolve_group(file: &ProblemFile, name: &str, catalog: &[GroupRef]) -> Option<GroupRef> {
    file.group(name).cloned().or_else(|| catalog.iter().find(|g| g.name() == name).cloned())
}

/// Subgroups of `g` declared in `file` by name.
pub fn named_subgroups(file: &ProblemFile, names: &[String], g: &GroupRef) -> Result<Vec<Subgroup>> {
    names
        .iter()
        .map(|n| {
            let s = file.subgroup(n).ok_or_else(|| Error::input(format!("undeclared subgroup '{n}'")))?;
            if *s.parent != **g {
                return Err(Error::input(format!("subgroup '{n}' does not lie in the scanned group")));
            }
            Ok(s.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const C2_ID: &str = "
        (group C2 (table (0 1) (1 0)))
        (hom id C2 C2 identity)
        (lsep trivial (alpha id) (beta id))
    ";

    #[test]
    fn empty_document() {
        assert!(parse_problem("").unwrap().is_empty());
        assert!(parse_problem("  ; only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn non_associative_table_names_triple() {
        // a Latin square with identity 0 that is not a group
        let text = "(group L (table (0 1 2 3 4) (1 0 3 4 2) (2 4 0 1 3) (3 2 4 0 1) (4 3 1 2 0)))";
        let err = parse_problem(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not associative at ("), "{msg}");
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn undeclared_hom_is_named() {
        let text = "(group C2 (table (0 1) (1 0)))\n(hom id C2 C2 identity)\n(lsep p (alpha id) (beta missing))";
        let err = parse_problem(text).unwrap_err();
        assert!(err.to_string().contains("undeclared hom 'missing'"), "{err}");
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn lsep_and_duplicates() {
        let f = parse_problem(C2_ID).unwrap();
        assert_eq!(f.lseps.len(), 1);
        let dup = format!("{C2_ID}(group C2 (catalog C2))");
        assert!(parse_problem(&dup).unwrap_err().to_string().contains("declared twice"));
    }

    #[test]
    fn labels_and_catalog() {
        let f = parse_problem("(group S (catalog S3)) (subgroup T S (generated 1))").unwrap();
        assert_eq!(f.group("S").unwrap().order(), 6);
        assert!(f.subgroup("T").unwrap().order() > 1);
        let g = parse_problem("(group V (table (0 1) (1 0)) (labels e s)) (subgroup W V (elements e s))").unwrap();
        assert!(g.subgroup("W").unwrap().is_whole());
    }

    #[test]
    fn sides_both_forms() {
        let text = "
            (extension L (quadratic 2))
            (group T (catalog C1))
            (hom embed L L identity)
            (hom beta L T trivial)
            (side s (extension L) (embed embed) (beta beta))
            (side e (field GF 2) (beta beta) (g 0 1))
            (structure \"Q:p=2\")
        ";
        let f = parse_problem(text).unwrap();
        assert!(matches!(f.side("s"), Some(SideData::Rational(SideEntry { derived: Some(_), .. }))));
        assert_eq!(f.side("e").unwrap().field_tag(), "GF(2)");
        assert_eq!(f.structures.len(), 1);
    }

    #[test]
    fn bad_section_length() {
        let text = "
            (group C2 (catalog C2))
            (hom id C2 C2 identity)
            (subgroup W C2 (elements 0 1))
            (lsep p (alpha id) (beta id) (part W (section 0)))
        ";
        let err = parse_problem(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
    }
}
