//! Dense row-major matrices over a [`Scalar`] and Gaussian elimination.

use std::fmt;

use super::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:?}", self[(r, c)])).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<S>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut m = Self::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let v = m[(r, c)].clone() + a.clone() * o[(k, c)].clone();
                    m[(r, c)] = v;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() - o[(r, c)].clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let mut cols = Vec::new();
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            cols.extend(b.columns());
        }
        Self::from_columns(rows, &cols)
    }

    /// Block-diagonal sum.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let mut m = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for r in 0..a.rows {
            for c in 0..a.cols {
                m[(r, c)] = a[(r, c)].clone();
            }
        }
        for r in 0..b.rows {
            for c in 0..b.cols {
                m[(a.rows + r, a.cols + c)] = b[(r, c)].clone();
            }
        }
        m
    }

    /// Submatrix of the listed columns.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |r, c| self[(r, idx[c])].clone())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(S::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// Determinant by elimination with largest-magnitude pivots.
    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for k in 0..n {
            let p = (k..n)
                .filter(|&r| !a[(r, k)].is_zero())
                .max_by(|&x, &y| a[(x, k)].magnitude().total_cmp(&a[(y, k)].magnitude()));
            let Some(p) = p else { return S::zero() };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let piv = a[(k, k)].clone();
            det = det * piv.clone();
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let f = a[(r, k)].clone() / piv.clone();
                for c in k..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                    a[(r, c)] = v;
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form and pivot columns. Entries below
    /// `tol · max|entry|` count as zero in inexact domains.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let thr = tol * self.max_magnitude();
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..a.cols {
            if top == a.rows {
                break;
            }
            let p = (top..a.rows)
                .filter(|&r| !a[(r, c)].negligible(thr))
                .max_by(|&x, &y| a[(x, c)].magnitude().total_cmp(&a[(y, c)].magnitude()));
            let Some(p) = p else { continue };
            a.swap_rows(p, top);
            let piv = a[(top, c)].clone();
            for k in 0..a.cols {
                let v = a[(top, k)].clone() / piv.clone();
                a[(top, k)] = v;
            }
            for r in 0..a.rows {
                if r == top || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for k in 0..a.cols {
                    let v = a[(r, k)].clone() - f.clone() * a[(top, k)].clone();
                    a[(r, k)] = v;
                }
            }
            pivots.push(c);
            top += 1;
        }
        (a, pivots)
    }

    /// Pivot columns of column-pivoted elimination, largest remaining entry first.
    pub fn pivot_columns(&self, count: usize) -> Vec<usize> {
        let mut a = self.clone();
        let mut free: Vec<usize> = (0..a.cols).collect();
        let mut chosen = Vec::new();
        let mut used_rows = vec![false; a.rows];
        for _ in 0..count {
            let mut best: Option<(usize, usize, f64)> = None;
            for (fi, &c) in free.iter().enumerate() {
                for r in (0..a.rows).filter(|&r| !used_rows[r]) {
                    let m = if a[(r, c)].is_zero() { 0.0 } else { a[(r, c)].magnitude().max(f64::MIN_POSITIVE) };
                    if m > best.map_or(0.0, |b| b.2) {
                        best = Some((fi, r, m));
                    }
                }
            }
            let Some((fi, pr, _)) = best else { break };
            let c = free.remove(fi);
            used_rows[pr] = true;
            let piv = a[(pr, c)].clone();
            for r in (0..a.rows).filter(|&r| !used_rows[r]) {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone() / piv.clone();
                for k in 0..a.cols {
                    let v = a[(r, k)].clone() - f.clone() * a[(pr, k)].clone();
                    a[(r, k)] = v;
                }
                a[(r, c)] = S::zero();
            }
            chosen.push(c);
        }
        chosen
    }

    /// Null space basis read off the reduced row echelon form.
    pub fn nullspace_rref(&self, tol: f64) -> Vec<Vec<S>> {
        let (r, piv) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &p) in piv.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self · x = b` when the system is consistent.
    pub fn solve_rref(&self, b: &[S], tol: f64) -> Option<Vec<S>> {
        let aug = Self::from_fn(self.rows, self.cols + 1, |r, c| if c < self.cols { self[(r, c)].clone() } else { b[r].clone() });
        let (r, piv) = aug.rref(tol);
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &p) in piv.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Mat<BigRational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect())
    }

    #[test]
    fn determinant_of_small_matrices() {
        assert_eq!(q(&[&[2, 1], &[1, 1]]).det(), BigRational::from_integer(1.into()));
        assert_eq!(q(&[&[0, 1], &[1, 0]]).det(), BigRational::from_integer((-1).into()));
        assert!(q(&[&[1, 2], &[2, 4]]).det().is_zero());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace_rref(0.0);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let m = q(&[&[1, 1], &[1, 1]]);
        let one = BigRational::from_integer(1.into());
        assert!(m.solve_rref(&[one.clone(), one.clone() + one], 0.0).is_none());
    }
}
