//! Finite groups as Cayley tables with the identity at index 0.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};

pub mod catalog;
mod homs;
mod ops;

pub use homs::{enumerate_homs, enumerate_homs_filtered, generating_set};
pub use ops::{
    all_subgroups, are_conjugate_subgroups, direct_product, fibre_product, hom_analyze, normal_closure,
    normal_subgroups, quotient_by_normal, subgroup_generated, FibreProduct, HomAnalysis, Quotient,
};

/// Shared handle; groups are immutable once built.
pub type GroupRef = Arc<FiniteGroup>;

#[derive(Clone)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
    name: Option<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name(), self.n)
    }
}

// Equality is on the multiplication table only.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a Cayley table. Identity must be row/column 0.
    pub fn from_table(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("group table is empty"));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::input(format!("{} labels for a table of order {n}", l.len())));
            }
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= n {
                    return Err(Error::input(format!("entry [{i}][{j}] = {x} is out of range 0..{n}")));
                }
                table.push(x as u32);
            }
        }
        for k in 0..n {
            if table[k] as usize != k || table[k * n] as usize != k {
                return Err(Error::input(format!("element 0 is not an identity (fails at {k})")));
            }
        }
        let mut seen = vec![0usize; n];
        for i in 0..n {
            for (tag, pick) in [("row", true), ("column", false)] {
                let stamp = 2 * i + usize::from(pick) + 1;
                for j in 0..n {
                    let x = if pick { table[i * n + j] } else { table[j * n + i] } as usize;
                    if seen[x] == stamp {
                        return Err(Error::input(format!("{tag} {i} repeats element {x}")));
                    }
                    seen[x] = stamp;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(Error::input(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == 0).unwrap() as u32).collect();
        Ok(FiniteGroup { n, table, inv, labels, name: None })
    }

    /// Builds the table of a closed set under `mul`; `elems[0]` must be the identity.
    pub fn from_elements<T, M, L>(elems: &[T], mul: M, label: L) -> Result<Self>
    where
        T: Eq + Hash + Clone,
        M: Fn(&T, &T) -> T,
        L: Fn(&T) -> String,
    {
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != elems.len() {
            return Err(Error::input("element list has duplicates"));
        }
        let rows = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| index.get(&mul(a, b)).copied().ok_or_else(|| Error::input("element set is not closed")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(rows, Some(elems.iter().map(label).collect()))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn into_ref(self) -> GroupRef {
        Arc::new(self)
    }

    pub fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("G{}", self.n))
    }

    pub fn has_name(&self) -> bool {
        self.name.is_some()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g⁻¹ x g`
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }
}

/// A subgroup, stored as a sorted element set of its parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub parent: GroupRef,
    elements: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && *self.parent == *other.parent
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Checks that `elems` is a subgroup of `parent`.
    pub fn new(parent: GroupRef, mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        if let Some(&x) = elems.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::input(format!("element {x} out of range for group of order {}", parent.order())));
        }
        if elems.first() != Some(&0) {
            return Err(Error::input("subgroup must contain the identity"));
        }
        for &a in &elems {
            for &b in &elems {
                if elems.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::input(format!("set is not closed: {a}·{b} missing")));
                }
            }
        }
        Ok(Subgroup { parent, elements: elems })
    }

    pub(crate) fn from_sorted_unchecked(parent: GroupRef, elements: Vec<usize>) -> Self {
        Subgroup { parent, elements }
    }

    pub fn trivial(parent: GroupRef) -> Self {
        Subgroup { parent, elements: vec![0] }
    }

    pub fn whole(parent: GroupRef) -> Self {
        let elements = parent.elements().collect();
        Subgroup { parent, elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of `x` in the sorted element list, i.e. its index in [`Subgroup::to_group`].
    pub fn index_of(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal(&self) -> bool {
        self.parent.elements().all(|g| self.elements.iter().all(|&x| self.contains(self.parent.conj(x, g))))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup { parent: self.parent.clone(), elements }
    }

    /// `g⁻¹ H g`
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = self.elements.iter().map(|&x| self.parent.conj(x, g)).collect();
        elements.sort_unstable();
        Subgroup { parent: self.parent.clone(), elements }
    }

    /// The subgroup as a group in its own right; element `i` is `elements()[i]`.
    pub fn to_group(&self) -> FiniteGroup {
        let p = &self.parent;
        let rows = self
            .elements
            .iter()
            .map(|&a| self.elements.iter().map(|&b| self.index_of(p.mul(a, b)).unwrap()).collect())
            .collect();
        let labels = p.labels.as_ref().map(|_| self.elements.iter().map(|&a| p.label(a)).collect());
        let mut g = FiniteGroup::from_table(rows, labels).expect("subgroup table is valid");
        g.name = Some(format!("{}<{}>", p.name(), self.order()));
        g
    }

    /// Inclusion of [`Subgroup::to_group`] into the parent, over the given domain handle.
    pub fn inclusion(&self, domain: GroupRef) -> GroupHom {
        GroupHom::from_parts(domain, self.parent.clone(), self.elements.clone())
    }
}

/// A homomorphism given by its image array.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub domain: GroupRef,
    pub codomain: GroupRef,
    images: Vec<usize>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && *self.domain == *other.domain && *self.codomain == *other.codomain
    }
}

impl Eq for GroupHom {}

impl GroupHom {
    /// Checks length, range and the hom law.
    pub fn new(domain: GroupRef, codomain: GroupRef, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.order() {
            return Err(Error::input(format!(
                "image array has length {}, domain has order {}",
                images.len(),
                domain.order()
            )));
        }
        if let Some(&x) = images.iter().find(|&&x| x >= codomain.order()) {
            return Err(Error::input(format!("image {x} out of range for codomain of order {}", codomain.order())));
        }
        for a in domain.elements() {
            for b in domain.elements() {
                if images[domain.mul(a, b)] != codomain.mul(images[a], images[b]) {
                    return Err(Error::input(format!("map is not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { domain, codomain, images })
    }

    pub(crate) fn from_parts(domain: GroupRef, codomain: GroupRef, images: Vec<usize>) -> Self {
        GroupHom { domain, codomain, images }
    }

    pub fn identity(g: GroupRef) -> Self {
        let images = g.elements().collect();
        GroupHom { domain: g.clone(), codomain: g, images }
    }

    pub fn trivial(domain: GroupRef, codomain: GroupRef) -> Self {
        let images = vec![0; domain.order()];
        GroupHom { domain, codomain, images }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if *self.codomain != *other.domain {
            return Err(Error::input("cannot compose: codomain and domain differ"));
        }
        let images = self.images.iter().map(|&x| other.apply(x)).collect();
        Ok(GroupHom { domain: self.domain.clone(), codomain: other.codomain.clone(), images })
    }

    pub fn image_set(&self) -> Vec<usize> {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_epi(&self) -> bool {
        self.image_set().len() == self.codomain.order()
    }

    pub fn is_injective(&self) -> bool {
        self.image_set().len() == self.domain.order()
    }

    /// Restriction to a subgroup of the domain, as a hom out of `domain` (which
    /// must be that subgroup's [`Subgroup::to_group`]).
    pub fn restrict(&self, sub: &Subgroup, domain: GroupRef) -> GroupHom {
        let images = sub.elements().iter().map(|&x| self.images[x]).collect();
        GroupHom { domain, codomain: self.codomain.clone(), images }
    }
}
