//! Small dense-matrix helpers for the rank/congruence certificates used across the
//! crate. All matrices here are tiny (at most ~20x20) and mostly signed permutations,
//! so a hand-rolled row-major buffer beats pulling in a linear algebra crate.

use crate::error::{GeomError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != c {
                return Err(GeomError::DimensionMismatch {
                    context: "Mat::from_rows",
                    expected: c,
                    found: row.len(),
                });
            }
        }
        Ok(Mat { rows: r, cols: c, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "Mat::mul shape");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.get(i, j) + a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "Mat::matvec shape");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, t: f64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * t).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "Mat::max_abs_diff shape");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `t^T * self * t` — pullback of a bilinear form along the linear map `t`.
    pub fn congruence(&self, t: &Mat) -> Mat {
        t.transpose().mul(&self.mul(t))
    }

    /// `t * self * t^T` — pushforward of a bivector along the linear map `t`.
    pub fn pushforward(&self, t: &Mat) -> Mat {
        t.mul(&self.mul(&t.transpose()))
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (i..self.cols).all(|j| (self.get(i, j) + self.get(j, i)).abs() <= tol))
    }

    /// Rank by Gaussian elimination with partial pivoting; pivots with absolute
    /// value at or below `threshold` count as zero.
    pub fn rank(&self, threshold: f64) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot_row = (rank..m.rows)
                .max_by(|&a, &b| m.get(a, col).abs().total_cmp(&m.get(b, col).abs()))
                .unwrap();
            let pivot = m.get(pivot_row, col);
            if pivot.abs() <= threshold {
                continue;
            }
            for j in 0..m.cols {
                let tmp = m.get(rank, j);
                m.set(rank, j, m.get(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
            for i in (rank + 1)..m.rows {
                let factor = m.get(i, col) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in col..m.cols {
                    m.set(i, j, m.get(i, j) - factor * m.get(rank, j));
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss-Jordan inverse with partial pivoting. The matrices inverted here are
    /// signed permutations of symplectic type, so conditioning is never an issue.
    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(GeomError::InvalidShape(format!(
                "inverse of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| a.get(i, col).abs().total_cmp(&a.get(j, col).abs()))
                .unwrap();
            let pivot = a.get(pivot_row, col);
            if pivot.abs() <= 1e-14 {
                return Err(GeomError::InvalidInput("singular matrix".into()));
            }
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(pivot_row, j));
                a.set(pivot_row, j, tmp);
                let tmp = inv.get(col, j);
                inv.set(col, j, inv.get(pivot_row, j));
                inv.set(pivot_row, j, tmp);
            }
            let inv_pivot = 1.0 / pivot;
            for j in 0..n {
                a.set(col, j, a.get(col, j) * inv_pivot);
                inv.set(col, j, inv.get(col, j) * inv_pivot);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a.get(i, col);
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - factor * a.get(col, j));
                    inv.set(i, j, inv.get(i, j) - factor * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot length");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "vec_add length");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "vec_sub length");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(t: f64, a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| t * x).collect()
}

pub fn vec_max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn vec_max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "vec_max_abs_diff length");
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_counts_independent_rows() {
        let m = Mat::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(m.rank(1e-9), 2);
        assert_eq!(Mat::identity(4).rank(1e-9), 4);
        assert_eq!(Mat::zeros(3, 5).rank(1e-9), 0);
    }

    #[test]
    fn rank_threshold_kills_noise() {
        let mut m = Mat::identity(3);
        m.set(2, 2, 1e-12);
        assert_eq!(m.rank(1e-9), 2);
    }

    #[test]
    fn inverse_round_trips() {
        let m = Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(Mat::zeros(2, 2).inverse().is_err());
    }

    #[test]
    fn congruence_and_pushforward_shapes() {
        let omega = Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let t = Mat::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        // rotation by 90 degrees preserves the area form
        assert_eq!(omega.congruence(&t), omega);
        assert_eq!(omega.pushforward(&t), omega);
    }
}
