//! Small exact linear algebra over the rationals.
//!
//! Everything here runs on catalog-sized systems (a handful of exceptional
//! curves), so plain Gaussian elimination with exact pivoting is all we need.

use crate::rat::Rat;
use num_traits::Zero;

/// Solve `M x = rhs` exactly. Returns `None` when `M` is singular.
pub fn solve(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n) && rhs.len() == n);
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for entry in a[col].iter_mut() {
            *entry = &*entry / &p;
        }
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let f = a[row][col].clone();
                for k in col..=n {
                    let v = &a[row][k] - &(&f * &a[col][k]);
                    a[row][k] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[row.len() - 1].clone()).collect())
}

/// Leading-principal-minor test for negative definiteness of a symmetric
/// integer matrix: `(-1)^k det_k > 0` for all k.
pub fn is_negative_definite(m: &[Vec<Rat>]) -> bool {
    let n = m.len();
    for k in 1..=n {
        let sub: Vec<Vec<Rat>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        let d = det(&sub);
        let sign_ok = if k % 2 == 0 {
            d > Rat::zero()
        } else {
            d < Rat::zero()
        };
        if !sign_ok {
            return false;
        }
    }
    true
}

fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut d = crate::rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(col, pivot);
            d = -d;
        }
        let p = a[col][col].clone();
        d = &d * &p;
        for row in col + 1..n {
            if !a[row][col].is_zero() {
                let f = &a[row][col] / &p;
                for k in col..n {
                    let v = &a[row][k] - &(&f * &a[col][k]);
                    a[row][k] = v;
                }
            }
        }
    }
    d
}
