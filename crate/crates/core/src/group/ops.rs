use std::collections::BTreeSet;

use super::homs::close;
use super::{FiniteGroup, GroupHom, GroupRef, Subgroup};
use crate::error::{Error, Result};

/// Smallest subgroup containing `seeds`.
pub fn subgroup_generated(g: &GroupRef, seeds: &[usize]) -> Result<Subgroup> {
    if let Some(&x) = seeds.iter().find(|&&x| x >= g.order()) {
        return Err(Error::input(format!("seed {x} out of range for group of order {}", g.order())));
    }
    Ok(Subgroup::from_sorted_unchecked(g.clone(), close(g, seeds)))
}

/// Smallest normal subgroup containing `seeds`.
pub fn normal_closure(g: &GroupRef, seeds: &[usize]) -> Result<Subgroup> {
    let conjugates: Vec<usize> = seeds
        .iter()
        .flat_map(|&x| g.elements().map(move |h| (x, h)))
        .map(|(x, h)| if x < g.order() { g.conj(x, h) } else { x })
        .collect();
    subgroup_generated(g, &conjugates)
}

#[derive(Clone, Debug)]
pub struct HomAnalysis {
    pub kernel: Subgroup,
    pub image: Subgroup,
    pub is_epi: bool,
    pub is_injective: bool,
}

pub fn hom_analyze(f: &GroupHom) -> HomAnalysis {
    let kernel: Vec<usize> = f.domain.elements().filter(|&x| f.apply(x) == 0).collect();
    let image = f.image_set();
    HomAnalysis {
        is_epi: image.len() == f.codomain.order(),
        is_injective: kernel.len() == 1,
        kernel: Subgroup::from_sorted_unchecked(f.domain.clone(), kernel),
        image: Subgroup::from_sorted_unchecked(f.codomain.clone(), image),
    }
}

/// `A ×_B G` with its two projections.
#[derive(Clone, Debug)]
pub struct FibreProduct {
    pub group: GroupRef,
    /// Element `i` of `group` is the pair `pairs[i] = (a, g)`.
    pub pairs: Vec<(usize, usize)>,
    pub pi_a: GroupHom,
    pub pi_g: GroupHom,
}

impl FibreProduct {
    pub fn index_of(&self, a: usize, g: usize) -> Option<usize> {
        self.pairs.binary_search(&(a, g)).ok()
    }
}

/// Pairs `(a, g)` with `β(a) = α(g)`, ordered lexicographically.
pub fn fibre_product(alpha: &GroupHom, beta: &GroupHom) -> Result<FibreProduct> {
    if *alpha.codomain != *beta.codomain {
        return Err(Error::input("fibre product: α and β have different codomains"));
    }
    if !alpha.is_epi() || !beta.is_epi() {
        return Err(Error::input("fibre product: α and β must be epimorphisms"));
    }
    let (a_grp, g_grp) = (&beta.domain, &alpha.domain);
    let pairs: Vec<(usize, usize)> = a_grp
        .elements()
        .flat_map(|a| g_grp.elements().map(move |g| (a, g)))
        .filter(|&(a, g)| beta.apply(a) == alpha.apply(g))
        .collect();
    let label = |&(a, g): &(usize, usize)| format!("({},{})", a_grp.label(a), g_grp.label(g));
    let group =
        FiniteGroup::from_elements(&pairs, |&(a1, g1), &(a2, g2)| (a_grp.mul(a1, a2), g_grp.mul(g1, g2)), label)?
            .with_name(format!("{}x_{}{}", a_grp.name(), beta.codomain.name(), g_grp.name()))
            .into_ref();
    let pi_a = GroupHom::from_parts(group.clone(), a_grp.clone(), pairs.iter().map(|p| p.0).collect());
    let pi_g = GroupHom::from_parts(group.clone(), g_grp.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(FibreProduct { group, pairs, pi_a, pi_g })
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let pairs: Vec<(usize, usize)> = a.elements().flat_map(|x| b.elements().map(move |y| (x, y))).collect();
    FiniteGroup::from_elements(
        &pairs,
        |&(x1, y1), &(x2, y2)| (a.mul(x1, x2), b.mul(y1, y2)),
        |&(x, y)| format!("({},{})", a.label(x), b.label(y)),
    )
    .expect("direct product is a group")
    .with_name(format!("{}x{}", a.name(), b.name()))
}

/// Least `g` with `g⁻¹ H1 g = H2`.
pub fn are_conjugate_subgroups(g: &FiniteGroup, h1: &Subgroup, h2: &Subgroup) -> Option<usize> {
    if h1.order() != h2.order() {
        return None;
    }
    g.elements().find(|&x| h1.elements().iter().all(|&h| h2.contains(g.conj(h, x))))
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: GroupRef,
    pub proj: GroupHom,
    /// Least element of each coset, ascending; coset `i` has representative `reps[i]`.
    pub reps: Vec<usize>,
}

pub fn quotient_by_normal(g: &GroupRef, n: &Subgroup) -> Result<Quotient> {
    if !n.is_normal() {
        return Err(Error::input("quotient: subgroup is not normal"));
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &k in n.elements() {
            coset_of[g.mul(x, k)] = c;
        }
    }
    let rows = reps.iter().map(|&a| reps.iter().map(|&b| coset_of[g.mul(a, b)]).collect()).collect();
    let labels = g.labels().map(|_| reps.iter().map(|&r| format!("{}N", g.label(r))).collect());
    let group = FiniteGroup::from_table(rows, labels)?.with_name(format!("{}/N{}", g.name(), n.order())).into_ref();
    let proj = GroupHom::from_parts(g.clone(), group.clone(), coset_of);
    Ok(Quotient { group, proj, reps })
}

/// Every normal subgroup, ordered by (order, elements).
pub fn normal_subgroups(g: &GroupRef) -> Vec<Subgroup> {
    let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    found.insert((1, vec![0]));
    let closures: BTreeSet<Vec<usize>> =
        g.elements().map(|x| normal_closure(g, &[x]).unwrap().elements().to_vec()).collect();
    for c in &closures {
        found.insert((c.len(), c.clone()));
    }
    loop {
        let current: Vec<Vec<usize>> = found.iter().map(|(_, e)| e.clone()).collect();
        let mut added = false;
        for a in &current {
            for c in &closures {
                if c.iter().all(|x| a.binary_search(x).is_ok()) {
                    continue;
                }
                let seeds: Vec<usize> = a.iter().chain(c.iter()).copied().collect();
                let join = close(g, &seeds);
                added |= found.insert((join.len(), join));
            }
        }
        if !added {
            break;
        }
    }
    found.into_iter().map(|(_, e)| Subgroup::from_sorted_unchecked(g.clone(), e)).collect()
}

/// Every subgroup, ordered by (order, elements).
pub fn all_subgroups(g: &GroupRef) -> Vec<Subgroup> {
    let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
    found.insert((1, vec![0]));
    while let Some(h) = frontier.pop() {
        for x in g.elements() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut seeds = h.clone();
            seeds.push(x);
            let k = close(g, &seeds);
            if found.insert((k.len(), k.clone())) {
                frontier.push(k);
            }
        }
    }
    found.into_iter().map(|(_, e)| Subgroup::from_sorted_unchecked(g.clone(), e)).collect()
}
