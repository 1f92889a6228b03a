//! Locally split embedding problems: solving, classification, reduction,
//! fibre-product lifting, descent to a finite quotient and projectivity scans.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{
    are_conjugate_subgroups, enumerate_homs_filtered, fibre_product, normal_subgroups, quotient_by_normal,
    subgroup_generated, FibreProduct, GroupHom, GroupRef, Subgroup,
};
use crate::par::{self, ExecMode};

/// A homomorphism defined on a subgroup: `values[k]` is the image of `sub.elements()[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMap {
    pub sub: Subgroup,
    pub codomain: GroupRef,
    pub values: Vec<usize>,
}

impl LocalMap {
    pub fn new(sub: Subgroup, codomain: GroupRef, values: Vec<usize>) -> Result<Self> {
        if values.len() != sub.order() {
            return Err(Error::input(format!(
                "local map has {} values for a subgroup of order {}",
                values.len(),
                sub.order()
            )));
        }
        if let Some(&x) = values.iter().find(|&&x| x >= codomain.order()) {
            return Err(Error::input(format!("local map value {x} out of range")));
        }
        let m = LocalMap { sub, codomain, values };
        let p = m.sub.parent.clone();
        for &x in m.sub.elements() {
            for &y in m.sub.elements() {
                if m.at(p.mul(x, y)) != m.codomain.mul(m.at(x), m.at(y)) {
                    return Err(Error::input(format!("local map is not a homomorphism at ({x}, {y})")));
                }
            }
        }
        Ok(m)
    }

    /// Builds the map from a function on the subgroup's elements.
    pub fn from_fn(sub: Subgroup, codomain: GroupRef, f: impl Fn(usize) -> usize) -> Result<Self> {
        let values = sub.elements().iter().map(|&x| f(x)).collect();
        LocalMap::new(sub, codomain, values)
    }

    /// Restriction of a global hom.
    pub fn restrict(f: &GroupHom, sub: &Subgroup) -> Self {
        let values = sub.elements().iter().map(|&x| f.apply(x)).collect();
        LocalMap { sub: sub.clone(), codomain: f.codomain.clone(), values }
    }

    pub fn at(&self, x: usize) -> usize {
        self.values[self.sub.index_of(x).expect("argument lies in the subgroup")]
    }

    pub fn image(&self) -> Subgroup {
        let mut v = self.values.clone();
        v.sort_unstable();
        v.dedup();
        Subgroup::new(self.codomain.clone(), v).expect("image of a hom is a subgroup")
    }
}

/// One distinguished subgroup `Gᵢ ≤ G` with its section `βᵢ: α(Gᵢ) → A`.
#[derive(Clone, Debug)]
pub struct Part {
    pub sub: Subgroup,
    pub section: LocalMap,
}

impl Part {
    /// `values(b)` gives `βᵢ(b)` for every `b ∈ α(Gᵢ)`.
    pub fn new(alpha: &GroupHom, sub: Subgroup, a: &GroupRef, values: impl Fn(usize) -> usize) -> Result<Self> {
        let img = alpha_image(alpha, &sub);
        let section = LocalMap::from_fn(img, a.clone(), values)?;
        Ok(Part { sub, section })
    }

    pub fn alpha_image(&self) -> &Subgroup {
        &self.section.sub
    }
}

fn alpha_image(alpha: &GroupHom, sub: &Subgroup) -> Subgroup {
    let mut v: Vec<usize> = sub.elements().iter().map(|&x| alpha.apply(x)).collect();
    v.sort_unstable();
    v.dedup();
    Subgroup::new(alpha.codomain.clone(), v).expect("image of a hom is a subgroup")
}

#[derive(Clone, Debug)]
pub struct LocallySplitEP {
    pub g: GroupRef,
    pub a: GroupRef,
    pub b: GroupRef,
    pub alpha: GroupHom,
    pub beta: GroupHom,
    pub parts: Vec<Part>,
}

impl LocallySplitEP {
    pub fn new(alpha: GroupHom, beta: GroupHom, parts: Vec<Part>) -> Result<Self> {
        if *alpha.codomain != *beta.codomain {
            return Err(Error::input("α and β have different codomains"));
        }
        if !alpha.is_epi() {
            return Err(Error::input("α is not an epimorphism"));
        }
        if !beta.is_epi() {
            return Err(Error::input("β is not an epimorphism"));
        }
        for (i, p) in parts.iter().enumerate() {
            if *p.sub.parent != *alpha.domain {
                return Err(Error::input(format!("part {} is not a subgroup of G", i + 1)));
            }
            if p.section.sub != alpha_image(&alpha, &p.sub) {
                return Err(Error::input(format!("part {}: section is not defined on α(G{})", i + 1, i + 1)));
            }
            if *p.section.codomain != *beta.domain {
                return Err(Error::input(format!("part {}: section does not land in A", i + 1)));
            }
            for (k, &b) in p.section.sub.elements().iter().enumerate() {
                if beta.apply(p.section.values[k]) != b {
                    return Err(Error::input(format!("part {}: β∘β{} is not the identity at {b}", i + 1, i + 1)));
                }
            }
        }
        Ok(LocallySplitEP {
            g: alpha.domain.clone(),
            a: beta.domain.clone(),
            b: alpha.codomain.clone(),
            alpha,
            beta,
            parts,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolutionReport {
    pub gamma: GroupHom,
    pub proper: bool,
    pub locally_exact: bool,
    pub locally_conjugate: bool,
    /// Per part, the least `a ∈ A` with `a⁻¹ γ(Gᵢ) a = im βᵢ`.
    pub conjugators: Vec<Option<usize>>,
}

fn classify(ep: &LocallySplitEP, gamma: GroupHom) -> SolutionReport {
    let proper = gamma.is_epi();
    let locally_exact =
        ep.parts.iter().all(|p| p.sub.elements().iter().all(|&x| gamma.apply(x) == p.section.at(ep.alpha.apply(x))));
    let conjugators: Vec<Option<usize>> = ep
        .parts
        .iter()
        .map(|p| {
            let img = LocalMap::restrict(&gamma, &p.sub).image();
            are_conjugate_subgroups(&ep.a, &img, &p.section.image())
        })
        .collect();
    SolutionReport {
        proper,
        locally_exact,
        locally_conjugate: conjugators.iter().all(Option::is_some),
        conjugators,
        gamma,
    }
}

/// Every `γ: G → A` with `α = β∘γ`, classified, in lexicographic order of γ.
pub fn solve_lsep(ep: &LocallySplitEP, mode: ExecMode) -> Vec<SolutionReport> {
    let (alpha, beta) = (&ep.alpha, &ep.beta);
    let allowed = |x: usize, a: usize| beta.apply(a) == alpha.apply(x);
    enumerate_homs_filtered(&ep.g, &ep.a, &allowed, mode).into_iter().map(|g| classify(ep, g)).collect()
}

/// A reduced problem together with the inclusion `A′ → A`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub ep: LocallySplitEP,
    pub sub: Subgroup,
    pub inclusion: GroupHom,
}

/// Replaces `A` by `⟨im β₁, …, im βₙ⟩`.
pub fn reduce_lsep(ep: &LocallySplitEP) -> Result<Reduced> {
    let seeds: Vec<usize> = ep.parts.iter().flat_map(|p| p.section.values.iter().copied()).collect();
    let sub = subgroup_generated(&ep.a, &seeds)?;
    let mut covered: Vec<usize> = sub.elements().iter().map(|&x| ep.beta.apply(x)).collect();
    covered.sort_unstable();
    covered.dedup();
    if covered.len() != ep.b.order() {
        return Err(Error::input(format!(
            "not reducible: β(A′) has order {} but B has order {} (β(A′) = {:?})",
            covered.len(),
            ep.b.order(),
            covered
        )));
    }
    let a_red = if sub.is_whole() { ep.a.clone() } else { sub.to_group().into_ref() };
    let inclusion = sub.inclusion(a_red.clone());
    let beta = inclusion.then(&ep.beta)?;
    let parts = ep
        .parts
        .iter()
        .map(|p| {
            let values = p.section.values.iter().map(|&v| sub.index_of(v).unwrap()).collect();
            let section = LocalMap { sub: p.section.sub.clone(), codomain: a_red.clone(), values };
            Part { sub: p.sub.clone(), section }
        })
        .collect();
    Ok(Reduced { ep: LocallySplitEP::new(ep.alpha.clone(), beta, parts)?, sub, inclusion })
}

/// Fibre product `P = A ×_B G` with splittings `ρᵢ(g) = (γᵢ(g), g)`.
#[derive(Clone, Debug)]
pub struct Lift {
    pub fp: FibreProduct,
    pub splittings: Vec<LocalMap>,
}

pub fn fibreproduct_lift(alpha: &GroupHom, beta: &GroupHom, locals: &[LocalMap]) -> Result<Lift> {
    for (i, gi) in locals.iter().enumerate() {
        if *gi.codomain != *beta.domain {
            return Err(Error::input(format!("local map {} does not land in A", i + 1)));
        }
        if let Some(&x) = gi.sub.elements().iter().find(|&&x| beta.apply(gi.at(x)) != alpha.apply(x)) {
            return Err(Error::input(format!("local map {} is incompatible: α ≠ β∘γ{} at {x}", i + 1, i + 1)));
        }
    }
    let fp = fibre_product(alpha, beta)?;
    let splittings = locals
        .iter()
        .map(|gi| {
            let rho = LocalMap::from_fn(gi.sub.clone(), fp.group.clone(), |x| fp.index_of(gi.at(x), x).unwrap())
                .expect("graph map is a hom");
            debug_assert!(gi.sub.elements().iter().all(|&x| fp.pi_g.apply(rho.at(x)) == x));
            rho
        })
        .collect();
    Ok(Lift { fp, splittings })
}

#[derive(Clone, Debug)]
pub enum Descent {
    Solved {
        rho: GroupHom,
        /// The normal subgroup `N ⊴ H` used for the finite induced problem.
        n: Subgroup,
        /// With conjugacy requested: least `h` with `h⁻¹ ρ(Gᵢ) h = im ρᵢ`.
        conjugators: Vec<usize>,
    },
    Unsolvable {
        n: Subgroup,
        induced_solutions: usize,
    },
}

impl Descent {
    pub fn is_solved(&self) -> bool {
        matches!(self, Descent::Solved { .. })
    }
}

/// Looks for a section `ρ` of `π: H ↠ G` through a finite induced problem.
///
/// `N` is the largest normal subgroup of `H` with `ker π ∩ N·im ρᵢ = 1` for
/// all `i` (first in enumeration order among equals). Every solution of the
/// induced problem over `G/π(N)` lifts through `h ↦ (hN, π(h))`, which is an
/// isomorphism onto the fibre product; lifts are tried in order, so the
/// verdict is exact.
pub fn gruenberg_descent(
    pi: &GroupHom,
    splittings: &[LocalMap],
    want_conjugacy: bool,
    mode: ExecMode,
) -> Result<Descent> {
    let (h, g) = (&pi.domain, &pi.codomain);
    if !pi.is_epi() {
        return Err(Error::input("π is not an epimorphism"));
    }
    for (i, r) in splittings.iter().enumerate() {
        if *r.sub.parent != **g || *r.codomain != **h {
            return Err(Error::input(format!("splitting {} has the wrong domain or codomain", i + 1)));
        }
        if let Some(&x) = r.sub.elements().iter().find(|&&x| pi.apply(r.at(x)) != x) {
            return Err(Error::input(format!("splitting {}: π∘ρ{} is not the identity at {x}", i + 1, i + 1)));
        }
    }
    let images: Vec<Subgroup> = splittings.iter().map(LocalMap::image).collect();
    let kernel: Vec<usize> = h.elements().filter(|&x| pi.apply(x) == 0 && x != 0).collect();
    let admissible = |n: &Subgroup| {
        let meets =
            |im: &Subgroup| n.elements().iter().any(|&a| im.elements().iter().any(|&b| kernel.contains(&h.mul(a, b))));
        if images.is_empty() {
            n.elements().iter().all(|x| !kernel.contains(x))
        } else {
            !images.iter().any(meets)
        }
    };
    let normals = normal_subgroups(h);
    let max_ord = normals.iter().filter(|n| admissible(n)).map(Subgroup::order).max().unwrap();
    let n = normals.into_iter().find(|n| n.order() == max_ord && admissible(n)).unwrap();

    let pi_n = subgroup_generated(g, &n.elements().iter().map(|&x| pi.apply(x)).collect::<Vec<_>>())?;
    let qg = quotient_by_normal(g, &pi_n)?;
    let qh = quotient_by_normal(h, &n)?;
    let pi_bar = GroupHom::new(
        qh.group.clone(),
        qg.group.clone(),
        qh.reps.iter().map(|&r| qg.proj.apply(pi.apply(r))).collect(),
    )?;
    let parts = splittings
        .iter()
        .map(|r| {
            Part::new(&qg.proj, r.sub.clone(), &qh.group, |b| {
                let x = r.sub.elements().iter().copied().find(|&x| qg.proj.apply(x) == b).unwrap();
                qh.proj.apply(r.at(x))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let induced = LocallySplitEP::new(qg.proj.clone(), pi_bar, parts)?;

    // ε: h ↦ (hN, π(h)) is a bijection onto the fibre product
    let eps_inv: HashMap<(usize, usize), usize> = h.elements().map(|x| ((qh.proj.apply(x), pi.apply(x)), x)).collect();
    let solutions = solve_lsep(&induced, mode);
    let count = solutions.len();
    for sol in solutions {
        if want_conjugacy && !sol.locally_conjugate {
            continue;
        }
        let images_rho: Vec<usize> = g.elements().map(|x| eps_inv[&(sol.gamma.apply(x), x)]).collect();
        let rho = GroupHom::new(g.clone(), h.clone(), images_rho)?;
        let mut conjugators = Vec::new();
        if want_conjugacy {
            let found: Option<Vec<usize>> = splittings
                .iter()
                .zip(&images)
                .map(|(r, im)| are_conjugate_subgroups(h, &LocalMap::restrict(&rho, &r.sub).image(), im))
                .collect();
            match found {
                Some(c) => conjugators = c,
                None => continue,
            }
        }
        return Ok(Descent::Solved { rho, n, conjugators });
    }
    Ok(Descent::Unsolvable { n, induced_solutions: count })
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    /// Order of the normal subgroup `N` with `B = G/N`.
    pub kernel_order: usize,
    pub b_order: usize,
    pub a_name: String,
    pub beta: Vec<usize>,
    pub sections: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub instances: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Largest catalog order scanned; verdicts are relative to this bound.
    pub catalog_bound: usize,
    pub catalog_size: usize,
}

impl ScanReport {
    pub fn all_pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn cartesian(lists: &[Vec<LocalMap>]) -> Vec<Vec<LocalMap>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |item| {
                    let mut v = prefix.clone();
                    v.push(item.clone());
                    v
                })
            })
            .collect()
    })
}

/// Checks solvability of every locally split problem for `G` with the given
/// parts, `B` a quotient of `G` and `A` from `catalog`. A pass is evidence
/// relative to the catalog, not a proof of projectivity.
pub fn projectivity_scan(
    g: &GroupRef,
    parts: &[Subgroup],
    catalog: &[GroupRef],
    strong: bool,
    max_counterexamples: usize,
    mode: ExecMode,
) -> Result<ScanReport> {
    if let Some(i) = parts.iter().position(|p| *p.parent != **g) {
        return Err(Error::input(format!("part {} is not a subgroup of G", i + 1)));
    }
    let mut units = Vec::new();
    for n in normal_subgroups(g) {
        let q = quotient_by_normal(g, &n)?;
        for a in catalog {
            if a.order() % q.group.order() != 0 {
                continue;
            }
            let epis = enumerate_homs_filtered(a, &q.group, &|_, _| true, ExecMode::Sequential);
            for beta in epis.into_iter().filter(GroupHom::is_epi) {
                units.push((n.order(), q.proj.clone(), a.clone(), beta));
            }
        }
    }
    let results = par::map_collect(mode, units, |(n_order, alpha, a, beta)| {
        let section_lists: Vec<Vec<LocalMap>> = parts
            .iter()
            .map(|gi| {
                let img = alpha_image(&alpha, gi);
                let dom = img.to_group().into_ref();
                let allowed = |x: usize, y: usize| beta.apply(y) == img.elements()[x];
                enumerate_homs_filtered(&dom, &a, &allowed, ExecMode::Sequential)
                    .into_iter()
                    .map(|s| LocalMap { sub: img.clone(), codomain: a.clone(), values: s.images().to_vec() })
                    .collect()
            })
            .collect();
        let mut failures = Vec::new();
        let mut count = 0;
        for choice in cartesian(&section_lists) {
            count += 1;
            let parts: Vec<Part> =
                parts.iter().zip(&choice).map(|(gi, s)| Part { sub: gi.clone(), section: s.clone() }).collect();
            let ep = LocallySplitEP::new(alpha.clone(), beta.clone(), parts).expect("scan builds valid problems");
            let ok = solve_lsep(&ep, ExecMode::Sequential).iter().any(|s| !strong || s.locally_conjugate);
            if !ok {
                failures.push(Counterexample {
                    kernel_order: n_order,
                    b_order: ep.b.order(),
                    a_name: a.name(),
                    beta: beta.images().to_vec(),
                    sections: choice.iter().map(|s| s.values.clone()).collect(),
                });
            }
        }
        (count, failures)
    });
    let mut report = ScanReport {
        instances: 0,
        counterexamples: Vec::new(),
        catalog_bound: catalog.iter().map(|a| a.order()).max().unwrap_or(0),
        catalog_size: catalog.len(),
    };
    for (count, failures) in results {
        report.instances += count;
        for f in failures {
            if report.counterexamples.len() < max_counterexamples {
                report.counterexamples.push(f);
            }
        }
    }
    Ok(report)
}

/// First pair `(i, j)`, `i < j`, of parts with nontrivial intersection (0-based).
pub fn separated_check(parts: &[Subgroup]) -> (bool, Option<(usize, usize)>) {
    for j in 0..parts.len() {
        for i in 0..j {
            if !parts[i].intersection(&parts[j]).is_trivial() {
                return (false, Some((i, j)));
            }
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, enumerate_homs, GroupHom};

    fn s3_sign_problem() -> LocallySplitEP {
        let s3 = catalog::by_name("S3").unwrap();
        let c6 = catalog::by_name("C6").unwrap();
        let c2 = catalog::by_name("C2").unwrap();
        let alpha = enumerate_homs(&s3, &c2).into_iter().find(GroupHom::is_epi).unwrap();
        let beta = GroupHom::new(c6.clone(), c2, (0..6).map(|x| x % 2).collect()).unwrap();
        let t = subgroup_generated(&s3, &[s3.find_label("(1 2)").unwrap()]).unwrap();
        let c = subgroup_generated(&s3, &[s3.find_label("(1 2 3)").unwrap()]).unwrap();
        let p1 = Part::new(&alpha, t, &c6, |b| if b == 1 { 3 } else { 0 }).unwrap();
        let p2 = Part::new(&alpha, c, &c6, |_| 0).unwrap();
        LocallySplitEP::new(alpha, beta, vec![p1, p2]).unwrap()
    }

    // Oracle: every map G → A obeying the hom law and α = β∘γ, by full enumeration.
    fn brute_solutions(ep: &LocallySplitEP) -> Vec<Vec<usize>> {
        let (n, m) = (ep.g.order(), ep.a.order());
        let mut out = Vec::new();
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..n)
                .map(|_| {
                    let v = c % m;
                    c /= m;
                    v
                })
                .collect();
            let hom = (0..n).all(|x| (0..n).all(|y| map[ep.g.mul(x, y)] == ep.a.mul(map[x], map[y])));
            if hom && (0..n).all(|x| ep.beta.apply(map[x]) == ep.alpha.apply(x)) {
                out.push(map);
            }
        }
        out
    }

    #[test]
    fn identity_beta_has_unique_solution() {
        let s3 = catalog::by_name("S3").unwrap();
        let alpha = GroupHom::identity(s3.clone());
        let ep = LocallySplitEP::new(alpha.clone(), GroupHom::identity(s3), vec![]).unwrap();
        let sols = solve_lsep(&ep, ExecMode::Sequential);
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].gamma, alpha);
        assert!(sols[0].proper && sols[0].locally_exact);
    }

    #[test]
    fn c2_over_trivial_b() {
        let c2 = catalog::by_name("C2").unwrap();
        let one = catalog::by_name("C1").unwrap();
        let alpha = GroupHom::trivial(c2.clone(), one.clone());
        let beta = GroupHom::trivial(c2.clone(), one);
        let part = Part::new(&alpha, Subgroup::whole(c2.clone()), &c2, |_| 0).unwrap();
        let ep = LocallySplitEP::new(alpha, beta, vec![part]).unwrap();
        let sols = solve_lsep(&ep, ExecMode::Sequential);
        assert_eq!(sols.len(), 2);
        let exact: Vec<bool> = sols.iter().map(|s| s.locally_exact).collect();
        assert_eq!(exact, vec![true, false]);
        assert_eq!(sols[0].gamma.images(), &[0, 0]);
    }

    #[test]
    fn s3_example_matches_brute_force() {
        let ep = s3_sign_problem();
        let sols = solve_lsep(&ep, ExecMode::Parallel);
        let ours: Vec<Vec<usize>> = sols.iter().map(|s| s.gamma.images().to_vec()).collect();
        assert_eq!(ours, brute_solutions(&ep));
        assert!(sols.iter().any(|s| s.locally_exact));
        for s in &sols {
            assert_eq!(s.gamma.then(&ep.beta).unwrap(), ep.alpha);
            if s.locally_exact {
                assert!(s.locally_conjugate && s.conjugators.iter().all(|c| *c == Some(0)));
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let ep = s3_sign_problem();
        // im β₁ = {0, 3}: generated subgroup C2 ≤ C6 maps onto B = C2
        let red = reduce_lsep(&ep).unwrap();
        assert_eq!(red.ep.a.order(), 2);
        // solutions of the reduced problem are the original ones landing in A′
        let reduced: Vec<Vec<usize>> = solve_lsep(&red.ep, ExecMode::Sequential)
            .iter()
            .map(|s| s.gamma.then(&red.inclusion).unwrap().images().to_vec())
            .collect();
        let filtered: Vec<Vec<usize>> = solve_lsep(&ep, ExecMode::Sequential)
            .iter()
            .map(|s| s.gamma.images().to_vec())
            .filter(|img| img.iter().all(|&x| red.sub.contains(x)))
            .collect();
        assert_eq!(reduced, filtered);

        // A = C6 → B = C3, parts generating only C3 ≤ C6
        let c6 = catalog::by_name("C6").unwrap();
        let c3 = catalog::by_name("C3").unwrap();
        let beta = GroupHom::new(c6.clone(), c3.clone(), (0..6).map(|x| x % 3).collect()).unwrap();
        let alpha = GroupHom::identity(c3.clone());
        let part = Part::new(&alpha, Subgroup::whole(c3.clone()), &c6, |b| [0, 4, 2][b]).unwrap();
        let ep = LocallySplitEP::new(alpha.clone(), beta, vec![part]).unwrap();
        let red = reduce_lsep(&ep).unwrap();
        assert_eq!(red.ep.a.order(), 3);
        let again = reduce_lsep(&red.ep).unwrap();
        assert_eq!(again.ep.a.order(), 3);
        assert!(again.sub.is_whole());

        // B = C2 but the only part is trivial: A′ = 1 does not cover B
        let c2 = catalog::by_name("C2").unwrap();
        let beta = GroupHom::new(c6.clone(), c2.clone(), (0..6).map(|x| x % 2).collect()).unwrap();
        let part = Part::new(&GroupHom::identity(c2.clone()), Subgroup::trivial(c2.clone()), &c6, |_| 0).unwrap();
        let ep = LocallySplitEP::new(GroupHom::identity(c2), beta, vec![part]).unwrap();
        let e = reduce_lsep(&ep).unwrap_err();
        assert!(e.to_string().contains("not reducible"), "{e}");
    }

    #[test]
    fn lift_examples() {
        let ep = s3_sign_problem();
        let sol = solve_lsep(&ep, ExecMode::Sequential).into_iter().find(|s| s.locally_exact).unwrap();
        let locals: Vec<LocalMap> = ep.parts.iter().map(|p| LocalMap::restrict(&sol.gamma, &p.sub)).collect();
        let lift = fibreproduct_lift(&ep.alpha, &ep.beta, &locals).unwrap();
        assert_eq!(lift.fp.group.order(), 6 * 6 / 2);
        for (r, p) in lift.splittings.iter().zip(&ep.parts) {
            for &x in p.sub.elements() {
                assert_eq!(lift.fp.pi_g.apply(r.at(x)), x);
            }
        }
        // incompatible local map is named
        let bad = LocalMap::new(ep.parts[0].sub.clone(), ep.a.clone(), vec![0, 0]).unwrap();
        let e = fibreproduct_lift(&ep.alpha, &ep.beta, &[locals[1].clone(), bad]).unwrap_err();
        assert!(e.to_string().contains("local map 2"), "{e}");
    }

    #[test]
    fn descent_examples() {
        // ker π = 1
        let s3 = catalog::by_name("S3").unwrap();
        let d = gruenberg_descent(&GroupHom::identity(s3.clone()), &[], true, ExecMode::Sequential).unwrap();
        match d {
            Descent::Solved { rho, .. } => assert_eq!(rho, GroupHom::identity(s3.clone())),
            _ => panic!("identity must descend"),
        }
        // H = G × C2, first projection
        let c2 = catalog::by_name("C2").unwrap();
        let h = crate::group::direct_product(&s3, &c2).into_ref();
        let pi = GroupHom::new(h.clone(), s3.clone(), h.elements().map(|x| x / 2).collect()).unwrap();
        match gruenberg_descent(&pi, &[], false, ExecMode::Sequential).unwrap() {
            Descent::Solved { rho, .. } => {
                assert_eq!(rho.then(&pi).unwrap(), GroupHom::identity(s3.clone()));
                assert_eq!(rho.images(), &[0, 2, 4, 6, 8, 10]);
            }
            _ => panic!("direct product splits"),
        }
        // Q8 → C2 × C2 never splits
        let q8 = catalog::by_name("Q8").unwrap();
        let v4 = catalog::by_name("C2^2").unwrap();
        let pi = enumerate_homs(&q8, &v4).into_iter().find(GroupHom::is_epi).unwrap();
        // only ±1 have order at most 2, so no nontrivial cyclic part of V4 splits locally
        assert!(q8.elements().all(|h| q8.element_order(h) > 2 || pi.apply(h) == 0));
        let triv = LocalMap::new(Subgroup::trivial(v4.clone()), q8.clone(), vec![0]).unwrap();
        let d = gruenberg_descent(&pi, &[triv], false, ExecMode::Sequential).unwrap();
        assert!(!d.is_solved());
    }

    #[test]
    fn scan_examples() {
        let one = catalog::by_name("C1").unwrap();
        let cat = catalog::catalog_up_to(4);
        let r = projectivity_scan(&one, &[Subgroup::whole(one.clone())], &cat, true, 5, ExecMode::Sequential).unwrap();
        assert!(r.all_pass());
        let c2 = catalog::by_name("C2").unwrap();
        let cat = vec![c2.clone(), catalog::by_name("C4").unwrap()];
        let r = projectivity_scan(&c2, &[Subgroup::whole(c2.clone())], &cat, true, 5, ExecMode::Parallel).unwrap();
        assert!(r.all_pass());
        assert!(r.instances > 0);
        assert_eq!(r.catalog_bound, 4);
    }

    #[test]
    fn separated_examples() {
        let s3 = catalog::by_name("S3").unwrap();
        let t = subgroup_generated(&s3, &[s3.find_label("(1 2)").unwrap()]).unwrap();
        let c = subgroup_generated(&s3, &[s3.find_label("(1 2 3)").unwrap()]).unwrap();
        assert_eq!(separated_check(std::slice::from_ref(&t)), (true, None));
        assert_eq!(separated_check(&[t, c]), (true, None));
        let w = Subgroup::whole(s3);
        assert_eq!(separated_check(&[w.clone(), w]), (false, Some((0, 1))));
    }
}
