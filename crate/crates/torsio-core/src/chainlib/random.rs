//! Random exact-rational complexes and splittings for oracle tests.

use num_rational::BigRational;
use rand::Rng;

use super::{unit, BasedComplex, Mat, Scalar, ShortExactSequence};

type Q = BigRational;

fn int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat<Q> {
    let data: Vec<Vec<Q>> = (0..rows).map(|_| (0..cols).map(|_| Q::from_i64(rng.random_range(-3..=3))).collect()).collect();
    Mat::from_fn(rows, cols, |r, c| data[r][c].clone())
}

/// A random map `cols → rows` of rank at most a random bound.
fn low_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat<Q> {
    let k = rng.random_range(0..=rows.min(cols));
    int_matrix(rng, rows, k).mul(&int_matrix(rng, k, cols))
}

/// A complex with `top ≤ max_top` and every `dim C_i ≤ max_dim`.
pub fn random_complex<R: Rng>(rng: &mut R, max_dim: usize, max_top: usize) -> BasedComplex<Q> {
    let top = rng.random_range(1..=max_top);
    let dims: Vec<usize> = (0..=top).map(|_| rng.random_range(1..=max_dim)).collect();
    let mut bd: Vec<Mat<Q>> = Vec::new();
    for i in 1..=top {
        let d = if i == 1 {
            low_rank(rng, dims[0], dims[1])
        } else {
            let prev = &bd[i - 2];
            let kernel = prev.nullspace_rref(0.0);
            if kernel.is_empty() {
                Mat::zeros(dims[i - 1], dims[i])
            } else {
                let k = Mat::from_columns(dims[i - 1], &kernel);
                k.mul(&low_rank(rng, kernel.len(), dims[i]))
            }
        };
        bd.push(d);
    }
    BasedComplex::new(dims, bd).expect("d∘d = 0 by construction")
}

/// Splits `c` along the subcomplex generated by random integer vectors.
pub fn random_splitting<R: Rng>(rng: &mut R, c: &BasedComplex<Q>) -> ShortExactSequence<Q> {
    let top = c.top_degree();
    let mut sub_basis: Vec<Vec<Vec<Q>>> = vec![Vec::new(); top + 1];
    for i in (0..=top).rev() {
        let n = c.dim(i);
        let mut cand: Vec<Vec<Q>> = Vec::new();
        if i < top {
            let up = c.d(i + 1);
            cand.extend(sub_basis[i + 1].iter().map(|v| up.mul_vec(v)));
        }
        let extra = rng.random_range(0..=n);
        for _ in 0..extra {
            cand.push((0..n).map(|_| Q::from_i64(rng.random_range(-2..=2))).collect());
        }
        if cand.is_empty() {
            continue;
        }
        let (_, piv) = Mat::from_columns(n, &cand).rref(0.0);
        sub_basis[i] = piv.into_iter().map(|k| cand[k].clone()).collect();
    }
    let inc: Vec<Mat<Q>> = (0..=top).map(|i| Mat::from_columns(c.dim(i), &sub_basis[i])).collect();
    let mut lifts: Vec<Mat<Q>> = Vec::new();
    let mut proj: Vec<Mat<Q>> = Vec::new();
    for i in 0..=top {
        let n = c.dim(i);
        let mut cols = sub_basis[i].clone();
        let mut chosen = Vec::new();
        for k in 0..n {
            cols.push(unit(n, k));
            if Q::rank(&Mat::from_columns(n, &cols), 0.0).unwrap() == cols.len() {
                chosen.push(unit(n, k));
            } else {
                cols.pop();
            }
        }
        let full = Mat::from_columns(n, &cols);
        let inv_cols: Vec<Vec<Q>> = (0..n).map(|k| full.solve_rref(&unit(n, k), 0.0).expect("invertible")).collect();
        let inv = Mat::from_columns(n, &inv_cols);
        let s = sub_basis[i].len();
        proj.push(Mat::from_fn(n - s, n, |r, col| inv[(s + r, col)].clone()));
        lifts.push(Mat::from_columns(n, &chosen));
    }
    let sub_d: Vec<Mat<Q>> = (1..=top)
        .map(|i| {
            let target = c.d(i).mul(&inc[i]);
            let cols: Vec<Vec<Q>> =
                target.columns().iter().map(|v| inc[i - 1].solve_rref(v, 0.0).expect("subcomplex")).collect();
            Mat::from_columns(inc[i - 1].cols(), &cols)
        })
        .collect();
    let quo_d: Vec<Mat<Q>> = (1..=top).map(|i| proj[i - 1].mul(&c.d(i)).mul(&lifts[i])).collect();
    let sub = BasedComplex::new(inc.iter().map(Mat::cols).collect(), sub_d).expect("subcomplex");
    let quo = BasedComplex::new(proj.iter().map(Mat::rows).collect(), quo_d).expect("quotient");
    ShortExactSequence::new(sub, c.clone(), quo, inc, proj).expect("exact by construction")
}
