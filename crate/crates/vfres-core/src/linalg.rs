//! Small dense linear algebra over Q.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::rat::Q;

pub fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Solves `a·x = b`. Free variables are set to zero; `None` when inconsistent.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, bi)| {
        let mut r = r.clone();
        r.push(bi.clone());
        r
    }).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(piv, row);
        let p = m[row][col].clone();
        for c in col..=cols {
            m[row][c] = &m[row][c] / &p;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let t = &f * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// 3×3 integer cross product.
pub fn cross(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn mat(r: &[&[i64]]) -> Vec<Vec<Q>> {
        r.iter().map(|row| row.iter().map(|&a| q(a)).collect()).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(determinant(mat(&[&[2, 1], &[4, 3]])), q(2));
        assert_eq!(determinant(mat(&[&[0, 1], &[1, 0]])), q(-1));
        assert_eq!(determinant(mat(&[&[1, 2], &[2, 4]])), q(0));
    }

    #[test]
    fn solve_overdetermined() {
        let a = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[q(1), q(2), q(3)]), Some(vec![q(1), q(2)]));
        assert_eq!(solve(&a, &[q(1), q(2), q(4)]), None);
    }

    #[test]
    fn solve_free_variable_zero() {
        let a = mat(&[&[1, 1]]);
        assert_eq!(solve(&a, &[q(3)]), Some(vec![q(3), q(0)]));
    }
}
