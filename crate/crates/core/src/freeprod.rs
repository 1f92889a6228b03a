//! The abstract free product of finitely many finite groups: reduced words,
//! multiplication, evaluation through the universal property, and a
//! catalog search for finite quotients separating a word from 1.

use crate::error::{Error, Result};
use crate::group::{enumerate_homs, subgroup_generated, GroupHom, GroupRef, Subgroup};
use crate::par::{self, ExecMode};

/// Default length cap for word enumeration.
pub const DEFAULT_WORD_CAP: usize = 12;

/// `(factor, element)` with a non-identity element.
pub type Letter = (usize, usize);

/// A reduced word: adjacent letters come from different factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct FreeProduct {
    pub factors: Vec<GroupRef>,
}

impl FreeProduct {
    pub fn new(factors: Vec<GroupRef>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::input("a free product needs at least one factor"));
        }
        Ok(FreeProduct { factors })
    }

    /// `εᵢ(g)`: the one-letter word, or the empty word for `g = 1`.
    pub fn letter(&self, i: usize, g: usize) -> Result<Word> {
        let f = self.factors.get(i).ok_or_else(|| Error::input(format!("no factor {i}")))?;
        if g >= f.order() {
            return Err(Error::input(format!("element {g} out of range for factor {i}")));
        }
        Ok(if g == 0 { Word::empty() } else { Word(vec![(i, g)]) })
    }

    /// Checks that `w` is a reduced word over this presentation.
    pub fn validate(&self, w: &Word) -> Result<()> {
        for (k, &(i, g)) in w.0.iter().enumerate() {
            let f = self.factors.get(i).ok_or_else(|| Error::input(format!("letter {k}: no factor {i}")))?;
            if g == 0 || g >= f.order() {
                return Err(Error::input(format!(
                    "letter {k}: element {g} is not a non-identity element of factor {i}"
                )));
            }
            if k > 0 && w.0[k - 1].0 == i {
                return Err(Error::input(format!("letters {} and {k} come from the same factor", k - 1)));
            }
        }
        Ok(())
    }

    /// Normal form of an arbitrary letter sequence (identity letters allowed).
    pub fn reduce(&self, letters: &[Letter]) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
        for &(i, g) in letters {
            if g == 0 {
                continue;
            }
            match stack.last().copied() {
                Some((j, h)) if j == i => {
                    stack.pop();
                    let m = self.factors[i].mul(h, g);
                    if m != 0 {
                        stack.push((i, m));
                    }
                }
                _ => stack.push((i, g)),
            }
        }
        Word(stack)
    }

    pub fn multiply(&self, a: &Word, b: &Word) -> Word {
        let mut letters = a.0.clone();
        letters.extend_from_slice(&b.0);
        self.reduce(&letters)
    }

    pub fn inverse(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&(i, g)| (i, self.factors[i].inv(g))).collect())
    }

    /// Reduced words of length exactly `len`, in lexicographic order.
    fn words_of_length(&self, len: usize) -> Vec<Word> {
        let mut layer = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                for (i, f) in self.factors.iter().enumerate() {
                    if w.0.last().is_some_and(|&(j, _)| j == i) {
                        continue;
                    }
                    for g in 1..f.order() {
                        let mut v = w.0.clone();
                        v.push((i, g));
                        next.push(Word(v));
                    }
                }
            }
            layer = next;
        }
        layer
    }

    /// All reduced words of length at most `max_len`, shortest first.
    pub fn enumerate_words(&self, max_len: usize, cap: usize) -> WordEnumeration {
        let reach = max_len.min(cap);
        let words = (0..=reach).flat_map(|l| self.words_of_length(l)).collect();
        if max_len > cap {
            WordEnumeration::BoundReached { cap, words }
        } else {
            WordEnumeration::Complete(words)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordEnumeration {
    Complete(Vec<Word>),
    /// The requested length exceeded the cap; `words` stops at the cap.
    BoundReached {
        cap: usize,
        words: Vec<Word>,
    },
}

impl WordEnumeration {
    pub fn words(&self) -> &[Word] {
        match self {
            WordEnumeration::Complete(w) => w,
            WordEnumeration::BoundReached { words, .. } => words,
        }
    }
}

/// The hom out of the free product determined by one hom per factor.
#[derive(Clone, Debug)]
pub struct WordEvaluator {
    pub codomain: GroupRef,
    pub targets: Vec<GroupHom>,
}

impl WordEvaluator {
    pub fn eval(&self, w: &Word) -> usize {
        w.0.iter().fold(0, |acc, &(i, g)| self.codomain.mul(acc, self.targets[i].apply(g)))
    }

    /// The value on `εᵢ(g)`.
    pub fn eval_letter(&self, i: usize, g: usize) -> usize {
        self.targets[i].apply(g)
    }
}

pub fn universal_hom(pres: &FreeProduct, targets: &[GroupHom]) -> Result<WordEvaluator> {
    if targets.len() != pres.factors.len() {
        return Err(Error::input(format!("{} homs for {} factors", targets.len(), pres.factors.len())));
    }
    let h = targets[0].codomain.clone();
    for (i, (t, f)) in targets.iter().zip(&pres.factors).enumerate() {
        if *t.domain != **f {
            return Err(Error::input(format!("hom {i} is not defined on factor {i}")));
        }
        if *t.codomain != *h {
            return Err(Error::input(format!("hom {i} has a different codomain")));
        }
    }
    let ev = WordEvaluator { codomain: h, targets: targets.to_vec() };
    for (i, f) in pres.factors.iter().enumerate() {
        debug_assert!(f.elements().all(|g| ev.eval(&pres.letter(i, g).unwrap()) == ev.targets[i].apply(g)));
    }
    Ok(ev)
}

/// The image `⟨∪ im γᵢ⟩ ≤ H` together with the evaluator.
pub fn finite_quotient(pres: &FreeProduct, targets: &[GroupHom]) -> Result<(Subgroup, WordEvaluator)> {
    let ev = universal_hom(pres, targets)?;
    let seeds: Vec<usize> = targets.iter().flat_map(|t| t.images().iter().copied()).collect();
    Ok((subgroup_generated(&ev.codomain, &seeds)?, ev))
}

#[derive(Clone, Debug)]
pub enum Separation {
    Found {
        /// Catalog position of `H`; `None` for the direct one-letter case.
        catalog_index: Option<usize>,
        evaluator: WordEvaluator,
        value: usize,
    },
    Exhausted {
        catalog_size: usize,
        max_order: usize,
    },
}

fn hom_tuples(lists: &[Vec<GroupHom>]) -> Vec<Vec<GroupHom>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |h| {
                    let mut v = prefix.clone();
                    v.push(h.clone());
                    v
                })
            })
            .collect()
    })
}

/// Finds a catalog group and factor homs under which `w` is not the identity.
/// The lowest catalog index wins; within a group, hom tuples are tried in
/// lexicographic order.
pub fn separating_quotient_search(
    pres: &FreeProduct,
    w: &Word,
    catalog: &[GroupRef],
    mode: ExecMode,
) -> Result<Separation> {
    pres.validate(w)?;
    if w.is_empty() {
        return Err(Error::input("the empty word cannot be separated from the identity"));
    }
    if let [(i, g)] = w.0[..] {
        let h = pres.factors[i].clone();
        let targets: Vec<GroupHom> = pres
            .factors
            .iter()
            .enumerate()
            .map(|(j, f)| if j == i { GroupHom::identity(h.clone()) } else { GroupHom::trivial(f.clone(), h.clone()) })
            .collect();
        let evaluator = universal_hom(pres, &targets)?;
        return Ok(Separation::Found { catalog_index: None, value: g, evaluator });
    }
    let indexed: Vec<(usize, GroupRef)> = catalog.iter().cloned().enumerate().collect();
    let hit = par::find_first(mode, indexed, |(k, h)| {
        let lists: Vec<Vec<GroupHom>> = pres.factors.iter().map(|f| enumerate_homs(f, &h)).collect();
        hom_tuples(&lists).into_iter().find_map(|targets| {
            let ev = WordEvaluator { codomain: h.clone(), targets };
            let v = ev.eval(w);
            (v != 0).then_some((k, ev, v))
        })
    });
    Ok(match hit {
        Some((k, evaluator, value)) => Separation::Found { catalog_index: Some(k), evaluator, value },
        None => Separation::Exhausted {
            catalog_size: catalog.len(),
            max_order: catalog.iter().map(|g| g.order()).max().unwrap_or(0),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    fn c2c3() -> FreeProduct {
        FreeProduct::new(vec![catalog::by_name("C2").unwrap(), catalog::by_name("C3").unwrap()]).unwrap()
    }

    #[test]
    fn counts_short_words() {
        let one = FreeProduct::new(vec![catalog::by_name("S3").unwrap()]).unwrap();
        assert_eq!(one.enumerate_words(3, DEFAULT_WORD_CAP).words().len(), 6);
        // 1 + (1 + 2) + (1·2 + 2·1) = 8 reduced words of length ≤ 2 in C2 ⋆ C3
        assert_eq!(c2c3().enumerate_words(2, DEFAULT_WORD_CAP).words().len(), 8);
        let e = c2c3().enumerate_words(13, DEFAULT_WORD_CAP);
        assert!(matches!(e, WordEnumeration::BoundReached { cap: 12, .. }));
    }

    #[test]
    fn multiplication_examples() {
        let p = c2c3();
        let a = Word(vec![(0, 1)]);
        let ab = Word(vec![(0, 1), (1, 1)]);
        let b2 = Word(vec![(1, 2)]);
        assert_eq!(p.multiply(&ab, &Word::empty()), ab);
        assert_eq!(p.multiply(&a, &a), Word::empty());
        assert_eq!(p.multiply(&ab, &b2), a);
        // cancellation cascades
        let w = Word(vec![(0, 1), (1, 1), (0, 1)]);
        assert_eq!(p.multiply(&w, &p.inverse(&w)), Word::empty());
    }

    #[test]
    fn multiplication_is_associative_on_short_words() {
        let p = FreeProduct::new(vec![catalog::by_name("C2").unwrap(), catalog::by_name("C2^2").unwrap()]).unwrap();
        let words = p.enumerate_words(3, DEFAULT_WORD_CAP).words().to_vec();
        for x in words.iter().step_by(3) {
            assert_eq!(p.multiply(x, &p.inverse(x)), Word::empty());
            assert_eq!(p.multiply(&p.inverse(x), x), Word::empty());
            for y in words.iter().step_by(5) {
                for z in words.iter().step_by(7) {
                    assert_eq!(p.multiply(&p.multiply(x, y), z), p.multiply(x, &p.multiply(y, z)));
                }
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let c2 = catalog::by_name("C2").unwrap();
        let d4 = catalog::by_name("D4").unwrap();
        let s3 = catalog::by_name("S3").unwrap();
        let p = FreeProduct::new(vec![c2.clone(), c2.clone()]).unwrap();
        let triv = vec![GroupHom::trivial(c2.clone(), d4.clone()); 2];
        let (img, ev) = finite_quotient(&p, &triv).unwrap();
        assert_eq!(img.order(), 1);
        assert_eq!(ev.eval(&Word(vec![(0, 1), (1, 1)])), 0);
        // two reflections of D4 = C4 ⋊ C2: y and xy
        let y = d4.find_label("y").unwrap();
        let xy = d4.find_label("xy").unwrap();
        let t = |r: usize| GroupHom::new(c2.clone(), d4.clone(), vec![0, r]).unwrap();
        let (img, ev) = finite_quotient(&p, &[t(y), t(xy)]).unwrap();
        assert_eq!(img.order(), 8);
        assert_ne!(ev.eval(&Word(vec![(0, 1), (1, 1), (0, 1)])), 0);
        let q = c2c3();
        let tr = s3.find_label("(1 2)").unwrap();
        let cy = s3.find_label("(1 2 3)").unwrap();
        let targets = vec![
            GroupHom::new(c2.clone(), s3.clone(), vec![0, tr]).unwrap(),
            GroupHom::new(catalog::by_name("C3").unwrap(), s3.clone(), vec![0, cy, s3.mul(cy, cy)]).unwrap(),
        ];
        let (img, ev) = finite_quotient(&q, &targets).unwrap();
        assert_eq!(img.order(), 6);
        assert_ne!(ev.eval(&Word(vec![(0, 1), (1, 1)])), 0);
        assert!(universal_hom(&q, &[targets[0].clone(), GroupHom::identity(catalog::by_name("C3").unwrap())]).is_err());
    }

    #[test]
    fn separation_examples() {
        let p = c2c3();
        let cat = catalog::catalog_up_to(12);
        match separating_quotient_search(&p, &Word(vec![(1, 2)]), &cat, ExecMode::Sequential).unwrap() {
            Separation::Found { catalog_index: None, value, .. } => assert_eq!(value, 2),
            other => panic!("{other:?}"),
        }
        match separating_quotient_search(&p, &Word(vec![(0, 1), (1, 1)]), &cat, ExecMode::Parallel).unwrap() {
            Separation::Found { catalog_index: Some(k), evaluator, value } => {
                // a ↦ 1, b ↦ 0 already separates in C2
                assert_eq!(cat[k].name(), "C2");
                assert_eq!(evaluator.eval(&Word(vec![(0, 1), (1, 1)])), value);
            }
            other => panic!("{other:?}"),
        }
        assert!(separating_quotient_search(&p, &Word(vec![(0, 1), (0, 1)]), &cat, ExecMode::Sequential).is_err());
        let tiny = catalog::catalog_up_to(1);
        assert!(matches!(
            separating_quotient_search(&p, &Word(vec![(0, 1), (1, 1)]), &tiny, ExecMode::Sequential).unwrap(),
            Separation::Exhausted { catalog_size: 1, .. }
        ));
    }
}
