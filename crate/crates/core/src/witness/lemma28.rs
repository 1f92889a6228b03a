//! Finite shadow of the left-multiplication construction: `A` permutes the
//! places indexed by its own elements, and the places indexed by `im φ` are
//! permuted among themselves exactly by `im φ`.

use crate::error::{Error, Result};
use crate::group::{GroupHom, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma28Certificate {
    /// `action[a][i]` is the index of `a·a_i`.
    pub action: Vec<Vec<usize>>,
    /// `Some(φ⁻¹(a_i))` for `a_i ∈ im φ`, `None` otherwise.
    pub place_map: Vec<Option<usize>>,
    /// `{a ∈ A : a·im φ = im φ}`.
    pub stabilizer: Subgroup,
    pub stabilizer_is_image: bool,
}

pub fn lemma28_certificate(phi: &GroupHom) -> Result<Lemma28Certificate> {
    if !phi.is_injective() {
        return Err(Error::input("φ is not injective"));
    }
    let a = &phi.codomain;
    let image = phi.image_set();
    let action = a.elements().map(|x| a.elements().map(|i| a.mul(x, i)).collect()).collect();
    let place_map = a.elements().map(|i| phi.domain.elements().find(|&s| phi.apply(s) == i)).collect();
    let stab = a.elements().filter(|&x| image.iter().all(|&i| image.binary_search(&a.mul(x, i)).is_ok())).collect();
    let stabilizer = Subgroup::new(a.clone(), stab)?;
    let stabilizer_is_image = stabilizer.elements() == image.as_slice();
    Ok(Lemma28Certificate { action, place_map, stabilizer, stabilizer_is_image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::{by_name, cyclic};

    #[test]
    fn identity_embedding() {
        let a = by_name("S3").unwrap();
        let c = lemma28_certificate(&GroupHom::identity(a.clone())).unwrap();
        assert!(c.stabilizer.is_whole());
        assert!(c.place_map.iter().all(Option::is_some));
        assert!(c.stabilizer_is_image);
    }

    #[test]
    fn c2_in_c4() {
        let c4 = by_name("C4").unwrap();
        let two = (0..4).find(|&x| c4.element_order(x) == 2).unwrap();
        let phi = GroupHom::new(cyclic(2).into_ref(), c4, vec![0, two]).unwrap();
        let c = lemma28_certificate(&phi).unwrap();
        assert_eq!(c.stabilizer.elements(), &[0, two]);
        assert_eq!(c.place_map.iter().filter(|p| p.is_some()).count(), 2);
    }

    #[test]
    fn trivial_in_s3_and_non_injective() {
        let s3 = by_name("S3").unwrap();
        let c = lemma28_certificate(&GroupHom::trivial(cyclic(1).into_ref(), s3.clone())).unwrap();
        assert!(c.stabilizer.is_trivial());
        assert_eq!(c.action[1][0], 1);
        assert!(lemma28_certificate(&GroupHom::trivial(cyclic(2).into_ref(), s3)).is_err());
    }
}
