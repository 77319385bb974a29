//! Exact linear algebra: rational rank and affine solving for the sampling
//! oracles, and fraction-free (Bareiss) elimination over polynomial entries.

use num_traits::Zero;

use crate::symexpr::{Poly, Rational};

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &pivot;
            for j in c..ncols {
                let t = &f * &rows[r][j];
                rows[i][j] -= t;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Solves `a · x = b`. Free unknowns take values from `free`. Returns `None`
/// when the system is inconsistent.
pub fn solve_affine(
    a: &[Vec<Rational>],
    b: &[Rational],
    mut free: impl FnMut(usize) -> Rational,
) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..=ncols {
            m[r][j] *= &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=ncols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (c, slot) in x.iter_mut().enumerate() {
        if !pivots.contains(&c) {
            *slot = free(c);
        }
    }
    for (row, &c) in pivots.iter().enumerate() {
        let mut v = m[row][ncols].clone();
        for j in c + 1..ncols {
            if !pivots.contains(&j) {
                v -= &m[row][j] * &x[j];
            }
        }
        x[c] = v;
    }
    Some(x)
}

/// Row echelon form of a polynomial matrix produced by fraction-free
/// elimination restricted to the first `pivot_cols` columns; the remaining
/// columns are carried along as an augmented block.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<Poly>>,
    /// `(row, column)` of every pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination. Pivot columns are scanned left to right; within a
/// column the first row (in current order) with a nonzero entry is chosen.
pub fn bareiss(mut rows: Vec<Vec<Poly>>, pivot_cols: usize) -> Echelon {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = Poly::one();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..rows.len() {
            let lead = rows[i][c].clone();
            for j in c..width {
                if j == c {
                    rows[i][j] = Poly::zero();
                    continue;
                }
                let num = pivot.mul(&rows[i][j]).sub(&lead.mul(&rows[r][j]));
                rows[i][j] = num.div_exact(&prev).expect("Bareiss quotient is exact");
            }
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    Echelon { rows, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{rat, VarRef};

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(q(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]])), 3);
        assert_eq!(rank(q(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn affine_solve_with_free_unknowns() {
        // x + y = 3 with y free
        let x = solve_affine(&q(&[&[1, 1]]), &[rat(3)], |_| rat(5)).unwrap();
        assert_eq!(x, vec![rat(-2), rat(5)]);
        assert!(solve_affine(&q(&[&[1, 1], &[2, 2]]), &[rat(1), rat(3)], |_| rat(0)).is_none());
    }

    #[test]
    fn bareiss_on_symbolic_matrix() {
        let x = Poly::var(VarRef::coordinate("x", &[]));
        let one = Poly::one();
        // [[x, 1], [x^2, x]] has rank 1
        let m = vec![vec![x.clone(), one.clone()], vec![x.mul(&x), x.clone()]];
        let e = bareiss(m, 2);
        assert_eq!(e.rank(), 1);
        assert!(e.rows[1].iter().all(Poly::is_zero));
        let full = vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]];
        assert_eq!(bareiss(full, 2).rank(), 2);
    }
}
