use super::{FiniteGroup, GroupHom, GroupRef};
use crate::par::{self, ExecMode};

/// Greedy generating set: repeatedly add the element whose adjunction
/// generates the largest subgroup (lowest index on ties).
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = vec![0usize];
    while current.len() < g.order() {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for x in g.elements() {
            if current.binary_search(&x).is_ok() {
                continue;
            }
            let mut seeds = gens.clone();
            seeds.push(x);
            let closure = close(g, &seeds);
            if best.as_ref().is_none_or(|(_, b)| closure.len() > b.len()) {
                best = Some((x, closure));
            }
        }
        let (x, closure) = best.unwrap();
        gens.push(x);
        current = closure;
    }
    gens
}

/// Sorted closure of `seeds` under multiplication.
pub(super) fn close(g: &FiniteGroup, seeds: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for &s in seeds {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    queue
}

/// Propagates a partial image assignment along right multiplication by the
/// first `k` generators. Returns `false` on any inconsistency.
fn propagate(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    gen_images: &[usize],
    img: &mut [usize],
    allowed: &(dyn Fn(usize, usize) -> bool + Sync),
) -> bool {
    const UNSET: usize = usize::MAX;
    img.fill(UNSET);
    img[0] = 0;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&s, &t) in gens.iter().zip(gen_images) {
            let y = g.mul(x, s);
            let v = h.mul(img[x], t);
            if img[y] == UNSET {
                if !allowed(y, v) {
                    return false;
                }
                img[y] = v;
                queue.push(y);
            } else if img[y] != v {
                return false;
            }
        }
    }
    true
}

fn search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    img: &mut Vec<usize>,
    allowed: &(dyn Fn(usize, usize) -> bool + Sync),
    out: &mut Vec<Vec<usize>>,
) {
    let k = chosen.len();
    if k == gens.len() {
        out.push(img.clone());
        return;
    }
    for &t in &candidates[k] {
        chosen.push(t);
        if propagate(g, h, &gens[..=k], chosen, img, allowed) {
            search(g, h, gens, candidates, chosen, img, allowed, out);
        }
        chosen.pop();
    }
}

/// All homomorphisms `g → h`, sorted lexicographically by image array.
pub fn enumerate_homs(g: &GroupRef, h: &GroupRef) -> Vec<GroupHom> {
    enumerate_homs_filtered(g, h, &|_, _| true, ExecMode::default())
}

/// Homomorphisms whose every value satisfies `allowed(x, image)`.
///
/// The predicate prunes the backtracking search; it is evaluated on every
/// element, so constraints like `β(γ(x)) = α(x)` cut the tree early.
pub fn enumerate_homs_filtered(
    g: &GroupRef,
    h: &GroupRef,
    allowed: &(dyn Fn(usize, usize) -> bool + Sync),
    mode: ExecMode,
) -> Vec<GroupHom> {
    if g.order() == 1 {
        return vec![GroupHom::from_parts(g.clone(), h.clone(), vec![0])];
    }
    let gens = generating_set(g);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            h.elements().filter(|&t| o.is_multiple_of(h.element_order(t)) && allowed(s, t)).collect()
        })
        .collect();
    let first = candidates[0].clone();
    let chunks = par::map_collect(mode, first, |t| {
        let mut out = Vec::new();
        let mut chosen = vec![t];
        let mut img = vec![0; g.order()];
        if propagate(g, h, &gens[..1], &chosen, &mut img, allowed) {
            search(g, h, &gens, &candidates, &mut chosen, &mut img, allowed, &mut out);
        }
        out
    });
    let mut all: Vec<Vec<usize>> = chunks.into_iter().flatten().collect();
    all.sort();
    all.into_iter().map(|images| GroupHom::from_parts(g.clone(), h.clone(), images)).collect()
}
