//! Exact dense linear algebra over Q.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    /// Builds a matrix from integer rows. All rows must have length `cols`.
    pub fn from_integer_rows<T>(cols: usize, rows: &[Vec<T>]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
    {
        let entries: Vec<BigRational> = rows
            .iter()
            .flat_map(|r| {
                if r.len() != cols {
                    None
                } else {
                    Some(
                        r.iter()
                            .map(|x| BigRational::from_integer(x.clone().into())),
                    )
                }
                .into_iter()
                .flatten()
            })
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        RationalMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, which: &[usize]) -> Self {
        let entries = which
            .iter()
            .flat_map(|&r| self.row(r).iter().cloned())
            .collect();
        RationalMatrix {
            rows: which.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Appends the rows of `other` below `self`. Column counts must agree.
    pub fn stack(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Shape {
                rows: self.rows + other.rows,
                cols: self.cols,
                len: self.entries.len() + other.entries.len(),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Rows scaled by the lcm of their denominators, so each row is an
    /// integer multiple of the original.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }
}

/// Rank over Q by fraction-free (Bareiss) elimination with
/// largest-magnitude pivoting.
pub fn rank(m: &RationalMatrix) -> usize {
    let mut a = m.integer_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .max_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let num = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// `dim(rowspan(m) ∩ span{e_j : j ∈ cols})`.
pub fn intersect_rowspan_coords(m: &RationalMatrix, cols: &BTreeSet<usize>) -> Result<usize> {
    if let Some(&bad) = cols.iter().find(|&&j| j >= m.cols) {
        return Err(Error::ColumnOutOfRange {
            index: bad,
            cols: m.cols,
        });
    }
    let mut basis = RationalMatrix::zeros(cols.len(), m.cols);
    for (r, &j) in cols.iter().enumerate() {
        basis.entries[r * m.cols + j] = BigRational::one();
    }
    let stacked = m.stack(&basis)?;
    Ok(rank(m) + cols.len() - rank(&stacked))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_integer_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&mat(&[vec![2, -1], vec![-1, 2]])), 2);
        assert_eq!(rank(&RationalMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&mat(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn rank_with_fractions() {
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());
        let m = RationalMatrix::new(
            2,
            2,
            vec![
                half.clone(),
                third.clone(),
                half * BigRational::from_integer(2.into()),
                third * BigRational::from_integer(2.into()),
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn rank_skips_zero_columns() {
        let m = mat(&[vec![0, 1, 2], vec![0, 2, 4], vec![0, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&RationalMatrix::zeros(0, 4)), 0);
    }

    #[test]
    fn intersection_examples() {
        let full = mat(&[vec![2, -1], vec![-1, 2]]);
        let all: BTreeSet<usize> = [0, 1].into();
        assert_eq!(intersect_rowspan_coords(&full, &all).unwrap(), 2);

        let axis = mat(&[vec![1, 0, 0]]);
        assert_eq!(intersect_rowspan_coords(&axis, &[1, 2].into()).unwrap(), 0);

        let two = mat(&[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(intersect_rowspan_coords(&two, &[0].into()).unwrap(), 0);
        assert_eq!(intersect_rowspan_coords(&two, &[0, 2].into()).unwrap(), 1);
    }

    #[test]
    fn intersection_rejects_out_of_range() {
        let m = mat(&[vec![1, 0]]);
        assert!(matches!(
            intersect_rowspan_coords(&m, &[2].into()),
            Err(Error::ColumnOutOfRange { index: 2, cols: 2 })
        ));
    }

    #[test]
    fn shape_mismatch() {
        assert!(RationalMatrix::new(2, 2, vec![BigRational::zero(); 3]).is_err());
        assert!(RationalMatrix::from_integer_rows(2, &[vec![1, 2], vec![3]]).is_err());
    }
}
