//! Exact rational linear algebra: just enough Gaussian elimination for rank
//! computations, solving small systems, and polynomial interpolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub type Rat = BigRational;

pub fn rat(i: impl Into<BigInt>) -> Rat {
    BigRational::from_integer(i.into())
}

/// Row-reduce in place; returns the pivot columns. Rows are `width + extra`
/// long so augmented systems can be reduced with the same routine (pivots are
/// only chosen among the first `width` columns).
fn row_reduce(rows: &mut [Vec<Rat>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (head, tail) = rows.split_at_mut(i.max(r));
                let (src, dst) = if i > r {
                    (&head[r], &mut tail[0])
                } else {
                    (&tail[0], &mut head[i])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = &*d - &(&f * s);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of the matrix given by rows.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let width = rows[0].len();
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    row_reduce(&mut m, width).len()
}

/// Solve `A x = b` for column vectors of `A`; returns `None` when the system
/// is inconsistent, otherwise one solution (the unique one when the columns
/// are independent, which is how the callers use it).
pub fn solve(columns: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = columns.len();
    let m = b.len();
    // augmented rows: one per equation
    let mut rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut rows, n);
    // inconsistent: a zero row with nonzero rhs
    for row in &rows {
        if row[..n].iter().all(|x| x.is_zero()) && !row[n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![rat(1), rat(2)],
            vec![rat(2), rat(4)],
            vec![rat(0), rat(1)],
        ];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn solve_unique() {
        // columns (1,1), (0,2); b = (3, 7) => x = (3, 2)
        let cols = vec![vec![rat(1), rat(1)], vec![rat(0), rat(2)]];
        let x = solve(&cols, &[rat(3), rat(7)]).unwrap();
        assert_eq!(x, vec![rat(3), rat(2)]);
    }

    #[test]
    fn solve_inconsistent() {
        let cols = vec![vec![rat(1), rat(2)]];
        assert!(solve(&cols, &[rat(1), rat(3)]).is_none());
    }
}
