//! Built-in groups: every group of order at most 16, plus S4.
//!
//! Everything is generated from a few families (cyclic semidirect products,
//! dicyclic groups, permutation closures, direct products), never typed in.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::ops::direct_product;
use super::{FiniteGroup, GroupRef};

fn power_label(k: usize, sym: &str) -> String {
    match k {
        0 => String::new(),
        1 => sym.to_string(),
        _ => format!("{sym}^{k}"),
    }
}

fn word_label(parts: &[String]) -> String {
    let s: Vec<&str> = parts.iter().map(String::as_str).filter(|p| !p.is_empty()).collect();
    if s.is_empty() {
        "e".into()
    } else {
        s.join("")
    }
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let elems: Vec<usize> = (0..n).collect();
    FiniteGroup::from_elements(&elems, |a, b| (a + b) % n, |&a| word_label(&[power_label(a, "g")]))
        .unwrap()
        .with_name(format!("C{n}"))
}

/// `C_m ⋊ C_n` where the generator of `C_n` acts by `x ↦ x^r`; needs `r^n ≡ 1 (mod m)`.
pub fn cyclic_semidirect(m: usize, n: usize, r: usize, name: &str) -> FiniteGroup {
    let rp = |b: usize| (0..b).fold(1usize, |acc, _| acc * r % m);
    assert_eq!(rp(n) % m, 1 % m, "r^n must be 1 mod m");
    let elems: Vec<(usize, usize)> = (0..n).flat_map(|b| (0..m).map(move |a| (a, b))).collect();
    FiniteGroup::from_elements(
        &elems,
        |&(a1, b1), &(a2, b2)| ((a1 + rp(b1) * a2) % m, (b1 + b2) % n),
        |&(a, b)| word_label(&[power_label(a, "x"), power_label(b, "y")]),
    )
    .unwrap()
    .with_name(name)
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    cyclic_semidirect(n, 2, n - 1, &format!("D{n}"))
}

/// Dicyclic group of order `4n` (`n = 2` gives Q8).
pub fn dicyclic(n: usize, name: &str) -> FiniteGroup {
    let m = 2 * n;
    let elems: Vec<(usize, usize)> = (0..2).flat_map(|b| (0..m).map(move |a| (a, b))).collect();
    FiniteGroup::from_elements(
        &elems,
        |&(a1, b1), &(a2, b2)| match (b1, b2) {
            (0, b) => ((a1 + a2) % m, b),
            (_, 0) => ((a1 + m - a2) % m, 1),
            _ => ((a1 + m - a2 + n) % m, 0),
        },
        |&(a, b)| word_label(&[power_label(a, "x"), power_label(b, "y")]),
    )
    .unwrap()
    .with_name(name)
}

type Perm = Vec<usize>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    // apply p, then q
    p.iter().map(|&i| q[i]).collect()
}

fn cycle_label(p: &Perm) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        let mut cyc = vec![s + 1];
        seen[s] = true;
        let mut x = p[s];
        while x != s {
            seen[x] = true;
            cyc.push(x + 1);
            x = p[x];
        }
        let body: Vec<String> = cyc.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Closure of permutation generators on `0..n`, sorted lexicographically.
pub fn permutation_group(n: usize, gens: &[Perm], name: &str) -> FiniteGroup {
    let id: Perm = (0..n).collect();
    let mut set: BTreeSet<Perm> = BTreeSet::new();
    set.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = compose(&p, g);
            if set.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    let elems: Vec<Perm> = set.into_iter().collect();
    FiniteGroup::from_elements(&elems, compose, cycle_label).unwrap().with_name(name)
}

/// Builds a permutation of `0..n` from 1-based cycles.
fn perm(n: usize, cycles: &[&[usize]]) -> Perm {
    let mut p: Perm = (0..n).collect();
    for c in cycles {
        for i in 0..c.len() {
            p[c[i] - 1] = c[(i + 1) % c.len()] - 1;
        }
    }
    p
}

pub fn symmetric(n: usize) -> FiniteGroup {
    let mut gens = vec![perm(n, &[&[1, 2]])];
    if n > 2 {
        let long: Vec<usize> = (1..=n).collect();
        gens.push(perm(n, &[&long]));
    }
    permutation_group(n, &gens, &format!("S{n}"))
}

pub fn alternating4() -> FiniteGroup {
    permutation_group(4, &[perm(4, &[&[1, 2, 3]]), perm(4, &[&[1, 2], &[3, 4]])], "A4")
}

fn product(a: FiniteGroup, b: FiniteGroup, name: &str) -> FiniteGroup {
    direct_product(&a, &b).with_name(name)
}

/// `(C2 × C2) ⋊ C4`, the generator of C4 swapping the two factors.
fn c2c2_by_c4() -> FiniteGroup {
    let elems: Vec<(usize, usize, usize)> =
        (0..4).flat_map(|b| (0..2).flat_map(move |u| (0..2).map(move |v| (u, v, b)))).collect();
    FiniteGroup::from_elements(
        &elems,
        |&(u1, v1, b1), &(u2, v2, b2)| {
            let (u2, v2) = if b1 % 2 == 1 { (v2, u2) } else { (u2, v2) };
            (u1 ^ u2, v1 ^ v2, (b1 + b2) % 4)
        },
        |&(u, v, b)| word_label(&[power_label(u, "s"), power_label(v, "t"), power_label(b, "y")]),
    )
    .unwrap()
    .with_name("C2^2:C4")
}

/// The Pauli group `{i^k X^a Z^b}`.
fn pauli() -> FiniteGroup {
    let elems: Vec<(usize, usize, usize)> =
        (0..4).flat_map(|k| (0..2).flat_map(move |a| (0..2).map(move |b| (k, a, b)))).collect();
    FiniteGroup::from_elements(
        &elems,
        |&(k1, a1, b1), &(k2, a2, b2)| ((k1 + k2 + 2 * b1 * a2) % 4, a1 ^ a2, b1 ^ b2),
        |&(k, a, b)| word_label(&[power_label(k, "i"), power_label(a, "X"), power_label(b, "Z")]),
    )
    .unwrap()
    .with_name("Pauli")
}

fn build() -> Vec<GroupRef> {
    let c = cyclic;
    let gs = vec![
        c(1),
        c(2),
        c(3),
        c(4),
        product(c(2), c(2), "C2^2"),
        c(5),
        c(6),
        symmetric(3),
        c(7),
        c(8),
        product(c(4), c(2), "C4xC2"),
        product(product(c(2), c(2), "C2^2"), c(2), "C2^3"),
        dihedral(4),
        dicyclic(2, "Q8"),
        c(9),
        product(c(3), c(3), "C3xC3"),
        c(10),
        dihedral(5),
        c(11),
        c(12),
        product(c(6), c(2), "C6xC2"),
        dicyclic(3, "Dic3"),
        alternating4(),
        dihedral(6),
        c(13),
        c(14),
        dihedral(7),
        c(15),
        c(16),
        product(c(4), c(4), "C4xC4"),
        c2c2_by_c4(),
        cyclic_semidirect(4, 4, 3, "C4:C4"),
        product(c(8), c(2), "C8xC2"),
        cyclic_semidirect(8, 2, 5, "M16"),
        dihedral(8),
        cyclic_semidirect(8, 2, 3, "SD16"),
        dicyclic(4, "Q16"),
        product(product(c(4), c(2), "C4xC2"), c(2), "C4xC2^2"),
        product(c(2), dihedral(4), "C2xD4"),
        product(c(2), dicyclic(2, "Q8"), "C2xQ8"),
        pauli(),
        product(product(product(c(2), c(2), "C2^2"), c(2), "C2^3"), c(2), "C2^4"),
        symmetric(4),
    ];
    gs.into_iter().map(FiniteGroup::into_ref).collect()
}

/// The built-in catalog, ordered by group order (43 groups).
pub fn catalog() -> Vec<GroupRef> {
    static CATALOG: OnceLock<Vec<GroupRef>> = OnceLock::new();
    CATALOG.get_or_init(build).clone()
}

/// Catalog groups of order at most `max_order`.
pub fn catalog_up_to(max_order: usize) -> Vec<GroupRef> {
    catalog().into_iter().filter(|g| g.order() <= max_order).collect()
}

pub fn by_name(name: &str) -> Option<GroupRef> {
    catalog().into_iter().find(|g| g.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{all_subgroups, normal_subgroups};
    use std::collections::BTreeMap;

    // Isomorphism-invariant fingerprint: sorted multiset of (element order, centraliser size).
    fn fingerprint(g: &FiniteGroup) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = g
            .elements()
            .map(|x| (g.element_order(x), g.elements().filter(|&y| g.mul(x, y) == g.mul(y, x)).count()))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn all_small_orders_present() {
        let mut by_order: BTreeMap<usize, usize> = BTreeMap::new();
        for g in catalog_up_to(16) {
            *by_order.entry(g.order()).or_default() += 1;
        }
        let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];
        for (n, &count) in expected.iter().enumerate() {
            assert_eq!(by_order.get(&(n + 1)).copied().unwrap_or(0), count, "order {}", n + 1);
        }
        assert_eq!(catalog_up_to(16).len(), 42);
    }

    #[test]
    fn same_order_groups_are_distinguishable() {
        let cat = catalog();
        let key = |g: &GroupRef| (fingerprint(g), all_subgroups(g).len(), normal_subgroups(g).len());
        for (i, a) in cat.iter().enumerate() {
            for b in &cat[..i] {
                if a.order() != b.order() {
                    continue;
                }
                assert!(key(a) != key(b), "{} and {} look isomorphic", a.name(), b.name());
            }
        }
    }

    #[test]
    fn named_groups() {
        assert_eq!(by_name("S3").unwrap().order(), 6);
        assert_eq!(by_name("S4").unwrap().order(), 24);
        assert_eq!(by_name("D6").unwrap().order(), 12);
        assert!(!by_name("Q8").unwrap().is_abelian());
        let s3 = by_name("S3").unwrap();
        assert_eq!(s3.label(0), "()");
        assert!(s3.find_label("(1 2 3)").is_some());
    }
}
