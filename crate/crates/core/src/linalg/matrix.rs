use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_q, Int, Q};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` is needed for the empty case.
    pub fn from_rows(rows: &[Vec<Q>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| super::qvec(r)).collect();
        Self::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| super::dot(self.row(i), v)).collect()
    }

    /// `v M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![Q::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += c * self.get(i, j);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r.get(i, f).clone();
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Coefficients `x` with `x M = b`, if `b` lies in the row space.
    /// Unique when the rows are independent.
    pub fn solve_left(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.cols);
        // Solve M^T x = b.
        let t = self.transpose();
        let mut aug = Self::zeros(t.rows, t.cols + 1);
        for i in 0..t.rows {
            for j in 0..t.cols {
                aug.set(i, j, t.get(i, j).clone());
            }
            aug.set(i, t.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&t.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); t.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, t.cols).clone();
        }
        Some(x)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(fmt_q).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Int>> =
            rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn to_rat(&self) -> RatMatrix {
        let rows: Vec<Vec<Q>> = (0..self.rows).map(|i| super::int_to_q(self.row(i))).collect();
        RatMatrix::from_rows(&rows, self.cols)
    }

    pub fn det(&self) -> Int {
        self.to_rat().det().to_integer()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qr, qvec};

    #[test]
    fn inverse_and_det() {
        let m = RatMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(m.det(), q(3));
        let inv = m.inverse().unwrap();
        assert_eq!(inv.get(0, 0), &qr(2, 3));
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        assert!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = RatMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_left_in_row_space() {
        let m = RatMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(m.solve_left(&qvec(&[2, 3, 5])), Some(qvec(&[2, 3])));
        assert_eq!(m.solve_left(&qvec(&[1, 0, 0])), None);
    }
}
