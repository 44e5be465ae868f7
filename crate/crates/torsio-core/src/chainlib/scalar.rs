//! Coefficient fields for based complexes.
//!
//! Exact domains (ℚ and ℚ(t)) run every rank decision by exact elimination.
//! Doubles use singular value decompositions with a relative rank threshold
//! and refuse to decide when a singular value sits within a factor of ten of
//! it.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::Mat;
use super::ratfunc::{Poly, RatFunc};
use super::ChainError;

/// Field operations plus the linear-algebra hooks the torsion engine needs.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic is free of rounding.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// A size used for pivot selection and residuals.
    fn magnitude(&self) -> f64;
    /// Text for debug dumps.
    fn render(&self) -> String;

    /// Treats values below `thr` as zero in inexact domains.
    fn negligible(&self, thr: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= thr
        }
    }

    fn rank(m: &Mat<Self>, tol: f64) -> Result<usize, ChainError> {
        Ok(m.rref(tol).1.len())
    }

    fn nullspace(m: &Mat<Self>, tol: f64) -> Result<Vec<Vec<Self>>, ChainError> {
        Ok(m.nullspace_rref(tol))
    }

    /// `count` kernel vectors independent modulo the column span of `image`.
    fn complement(kernel: &[Vec<Self>], image: &Mat<Self>, count: usize, tol: f64) -> Vec<Vec<Self>> {
        let mut cols = image.columns();
        let rows = image.rows();
        let mut rank = Self::rank(image, tol).unwrap_or(0);
        let mut out = Vec::new();
        for v in kernel {
            if out.len() == count {
                break;
            }
            cols.push(v.clone());
            let r = Self::rank(&Mat::from_columns(rows, &cols), tol).unwrap_or(0);
            if r > rank {
                rank = r;
                out.push(v.clone());
            } else {
                cols.pop();
            }
        }
        out
    }

    /// Whether a square matrix fails to be invertible.
    fn degenerate(m: &Mat<Self>) -> bool {
        m.det().is_zero()
    }

    /// Some `x` with `a x = b`, or `None` when the system is inconsistent.
    fn solve(a: &Mat<Self>, b: &[Self], tol: f64) -> Option<Vec<Self>> {
        a.solve_rref(b, tol)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for RatFunc {
    const EXACT: bool = true;

    fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(Poly::from_ints(&[1]))
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::from_poly(Poly::from_ints(&[n]))
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn render(&self) -> String {
        format!("{}{:+}i", g17(self.re), g17(self.im))
    }
}

/// Seventeen significant digits, the float format of debug dumps.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

/// Minimum-norm least-squares solution of `a x ≈ b`.
pub fn least_squares(a: &Mat<f64>, b: &[f64]) -> Vec<f64> {
    if a.cols() == 0 {
        return Vec::new();
    }
    let am = to_dmatrix(a);
    let svd = am.svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd
        .solve(&nalgebra::DVector::from_column_slice(b), 1e-12 * smax.max(f64::MIN_POSITIVE))
        .expect("both factors computed");
    x.iter().copied().collect()
}

/// Singular values, rank and the threshold used, with the ambiguity check.
fn svd_rank(m: &DMatrix<f64>, tol: f64) -> Result<(usize, f64), ChainError> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok((0, 0.0));
    }
    let sv = m.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return Ok((0, 0.0));
    }
    let thr = tol * smax;
    if let Some(&s) = sv.iter().find(|&&s| s > thr / 10.0 && s < thr * 10.0) {
        return Err(ChainError::IllConditioned { singular_value: s, threshold: thr });
    }
    Ok((sv.iter().filter(|&&s| s > thr).count(), thr))
}

/// Full right singular basis, padding short matrices with zero rows.
fn right_singular(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.ncols();
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested");
    (svd.singular_values.iter().copied().collect(), vt.transpose())
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn render(&self) -> String {
        g17(*self)
    }

    fn rank(m: &Mat<f64>, tol: f64) -> Result<usize, ChainError> {
        svd_rank(&to_dmatrix(m), tol).map(|r| r.0)
    }

    fn nullspace(m: &Mat<f64>, tol: f64) -> Result<Vec<Vec<f64>>, ChainError> {
        let n = m.cols();
        if m.rows() == 0 {
            return Ok((0..n).map(|k| (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect()).collect());
        }
        let dm = to_dmatrix(m);
        let (rank, _) = svd_rank(&dm, tol)?;
        let (sv, v) = right_singular(&dm);
        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
        Ok(order[rank..].iter().map(|&k| v.column(k).iter().copied().collect()).collect())
    }

    fn complement(kernel: &[Vec<f64>], image: &Mat<f64>, count: usize, tol: f64) -> Vec<Vec<f64>> {
        if kernel.is_empty() || count == 0 {
            return Vec::new();
        }
        let rows = kernel[0].len();
        let mut z = DMatrix::from_fn(rows, kernel.len(), |r, c| kernel[c][r]);
        if image.cols() > 0 && !image.is_zero() {
            let im = to_dmatrix(image);
            let svd = im.clone().svd(true, false);
            let u = svd.u.expect("requested");
            let smax = svd.singular_values.max();
            let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > tol * smax).collect();
            for &k in &keep {
                let uk = u.column(k).into_owned();
                let proj = uk.transpose() * &z;
                z -= &uk * proj;
            }
        }
        let svd = z.svd(true, false);
        let u = svd.u.expect("requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        order.iter().take(count).map(|&k| u.column(k).iter().copied().collect()).collect()
    }

    fn degenerate(m: &Mat<f64>) -> bool {
        let sv = to_dmatrix(m).singular_values();
        sv.min() <= 1e-14 * sv.max()
    }

    fn solve(a: &Mat<f64>, b: &[f64], _tol: f64) -> Option<Vec<f64>> {
        if a.cols() == 0 {
            return b.iter().all(|x| x.abs() < 1e-9).then(Vec::new);
        }
        let am = to_dmatrix(a);
        let bv = nalgebra::DVector::from_column_slice(b);
        let svd = am.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let x = svd.solve(&bv, 1e-12 * smax.max(f64::MIN_POSITIVE)).ok()?;
        let res = (&am * &x - &bv).norm();
        let scale = bv.norm().max(am.norm() * x.norm()).max(1.0);
        (res <= 1e-7 * scale).then(|| x.iter().copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_rank_flags_ambiguity() {
        let m = Mat::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1e-9]]);
        assert!(matches!(f64::rank(&m, 1e-9), Err(ChainError::IllConditioned { .. })));
        let m = Mat::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1e-14]]);
        assert_eq!(f64::rank(&m, 1e-9).unwrap(), 1);
    }

    #[test]
    fn float_nullspace_of_wide_matrix() {
        let m = Mat::from_rows(vec![vec![1.0, 1.0, 0.0]]);
        let ns = f64::nullspace(&m, 1e-9).unwrap();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v)[0].abs() < 1e-14);
        }
    }

    #[test]
    fn float_complement_is_orthogonal_to_image() {
        let image = Mat::from_rows(vec![vec![1.0], vec![1.0], vec![0.0]]);
        let kernel = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let h = f64::complement(&kernel, &image, 2, 1e-9);
        for v in h {
            assert!((v[0] + v[1]).abs() < 1e-12);
        }
    }
}
