//! Gaussian elimination over an exact field.

use crate::field::Field;

/// Row echelon form in place; returns the pivot columns.
fn echelon<F: Field>(f: &F, rows: &mut [Vec<F::Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !f.is_zero(&rows[i][col]) {
                let factor = rows[i][col].clone();
                for j in 0..rows[i].len() {
                    let t = f.mul(&factor, &rows[r][j]);
                    rows[i][j] = f.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    echelon(f, &mut rows.to_vec(), cols).len()
}

/// Some solution of `M·v = b` (free variables set to zero), or `None`.
pub fn solve<F: Field>(f: &F, m: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = m.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<F::Elem>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(f, &mut rows, n);
    if rows[pivots.len()..].iter().any(|r| !f.is_zero(&r[n])) {
        return None;
    }
    let mut v = vec![f.zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = rows[i][n].clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, FiniteField, Rationals};

    #[test]
    fn solves_and_ranks() {
        let m = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]];
        assert_eq!(rank(&Rationals, &m), 1);
        assert!(solve(&Rationals, &m, &[rat_int(1), rat_int(3)]).is_none());
        let v = solve(&Rationals, &m, &[rat_int(3), rat_int(6)]).unwrap();
        assert_eq!(&v[0] + &v[1] * rat_int(2), rat_int(3));
        let f = FiniteField::new(2).unwrap();
        let m = vec![vec![1, 1], vec![0, 1], vec![1, 0]];
        assert_eq!(rank(&f, &m), 2);
        assert_eq!(solve(&f, &m, &[0, 1, 1]), Some(vec![1, 1]));
    }
}
