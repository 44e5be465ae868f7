//! Based chain complexes and sign-determined torsion.
//!
//! A complex `C_n → … → C_0` stores `d_i: C_i → C_{i−1}` as a matrix in the
//! standard bases `c^i`. Torsion is
//!
//! `(−1)^{|C|} · Π_i [d_{i+1}(b^{i+1}) h̃^i b^i / c^i]^{(−1)^{i+1}}`
//!
//! with `|C| = Σ_i α_i β_i`, where `α_i = Σ_{k≤i} dim C_k` and
//! `β_i = Σ_{k≤i} dim H_k`. Cochain complexes are stored reversed: cochain
//! degree `k` becomes chain degree `top − k`.

mod matrix;
mod mv;
pub mod random;
mod ratfunc;
mod scalar;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use matrix::Mat;
pub use mv::{
    direct_sum_sign, long_exact_sequence, multiplicativity_sign, mv_multiplicativity, MvCheck, ShortExactSequence,
};
pub use ratfunc::{Poly, RatFunc};
pub use scalar::{g17, least_squares, Scalar};

/// Default relative rank threshold for floating-point complexes.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("d∘d ≠ 0 at degree {degree} (residual {residual:e})")]
    NotAComplex { degree: usize, residual: f64 },
    #[error("boundary map of degree {degree} has the wrong shape")]
    Shape { degree: usize },
    #[error("rank is ambiguous: singular value {singular_value:e} near threshold {threshold:e}")]
    IllConditioned { singular_value: f64, threshold: f64 },
    #[error("homology basis in degree {degree} is inconsistent with the complex")]
    HomologyMismatch { degree: usize },
    #[error("the assembled basis in degree {degree} is degenerate")]
    DegenerateBasis { degree: usize },
    #[error("the sequence is not exact in degree {degree}")]
    NotExact { degree: usize },
}

/// How a complex's degrees relate to the cohomological degrees it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Chain,
    /// Chain degree `i` holds cochain degree `top − i`.
    Cochain { top: usize },
}

/// A finite chain complex with distinguished (standard) bases.
#[derive(Debug, Clone, PartialEq)]
pub struct BasedComplex<S> {
    dims: Vec<usize>,
    /// `boundaries[i]` is `d_{i+1}: C_{i+1} → C_i`.
    boundaries: Vec<Mat<S>>,
    grading: Grading,
}

impl<S: Scalar> BasedComplex<S> {
    /// Checks shapes and `d ∘ d = 0` (exactly, or to `1e−9` relative in floats).
    pub fn new(dims: Vec<usize>, boundaries: Vec<Mat<S>>) -> Result<Self, ChainError> {
        assert!(!dims.is_empty(), "a complex needs at least one degree");
        assert_eq!(boundaries.len() + 1, dims.len(), "one boundary map per positive degree");
        for (k, d) in boundaries.iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(ChainError::Shape { degree: k + 1 });
            }
        }
        for k in 1..boundaries.len() {
            let dd = boundaries[k - 1].mul(&boundaries[k]);
            if S::EXACT {
                if !dd.is_zero() {
                    return Err(ChainError::NotAComplex { degree: k + 1, residual: f64::NAN });
                }
            } else {
                let scale = boundaries[k - 1].max_magnitude() * boundaries[k].max_magnitude();
                let res = dd.max_magnitude();
                if res > 1e-9 * scale.max(1.0) {
                    return Err(ChainError::NotAComplex { degree: k + 1, residual: res });
                }
            }
        }
        Ok(Self { dims, boundaries, grading: Grading::Chain })
    }

    /// Builds from a cochain complex `C^0 → … → C^top` given `δ^k: C^k → C^{k+1}`.
    pub fn from_cochain(dims: Vec<usize>, deltas: Vec<Mat<S>>) -> Result<Self, ChainError> {
        let top = dims.len() - 1;
        let mut c = Self::new(dims.into_iter().rev().collect(), deltas.into_iter().rev().collect())?;
        c.grading = Grading::Cochain { top };
        Ok(c)
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    /// `d_i: C_i → C_{i−1}`, a zero map outside `1..=top`.
    pub fn d(&self, i: usize) -> Mat<S> {
        if i >= 1 && i <= self.top_degree() {
            self.boundaries[i - 1].clone()
        } else {
            Mat::zeros(if i == 0 { 0 } else { self.dim(i - 1) }, self.dim(i))
        }
    }

    /// Chain degree holding cochain degree `k` (or chain degree `k`).
    pub fn chain_degree(&self, k: usize) -> usize {
        match self.grading {
            Grading::Chain => k,
            Grading::Cochain { top } => top - k,
        }
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self, ChainError> {
        let top = self.top_degree().max(o.top_degree());
        let dims = (0..=top).map(|i| self.dim(i) + o.dim(i)).collect();
        let bd = (1..=top).map(|i| Mat::block_diag(&self.d(i), &o.d(i))).collect();
        let mut c = Self::new(dims, bd)?;
        c.grading = self.grading;
        Ok(c)
    }

    /// Applies a permutation and sign flips to the basis of degree `i`:
    /// new basis vector `k` is `signs[k] · c_{perm[k]}`.
    pub fn rebased(&self, i: usize, perm: &[usize], signs: &[i64]) -> Self {
        let n = self.dim(i);
        let p = Mat::from_fn(n, n, |r, c| if r == perm[c] { S::from_i64(signs[c]) } else { S::zero() });
        let pinv = p.transpose();
        let mut out = self.clone();
        if i >= 1 && i <= self.top_degree() {
            out.boundaries[i - 1] = self.boundaries[i - 1].mul(&p);
        }
        if i < self.top_degree() {
            out.boundaries[i] = pinv.mul(&self.boundaries[i]);
        }
        out
    }

    /// Plain-text listing of every boundary matrix, one row per line.
    pub fn dump(&self) -> String {
        let mut s = format!("dims {:?} grading {:?}\n", self.dims, self.grading);
        for i in 1..=self.top_degree() {
            let d = self.d(i);
            s.push_str(&format!("d{i} {}x{}\n", d.rows(), d.cols()));
            for r in 0..d.rows() {
                let row: Vec<String> = d.row(r).iter().map(Scalar::render).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
        }
        s
    }
}

/// Representative cycles per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyBasisSet<S> {
    pub bases: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> HomologyBasisSet<S> {
    pub fn empty(degrees: usize) -> Self {
        Self { bases: vec![Vec::new(); degrees] }
    }

    pub fn betti(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }
}

/// A homology basis and the ranks of the boundary maps.
pub fn homology_basis<S: Scalar>(c: &BasedComplex<S>, tol: f64) -> Result<HomologyBasisSet<S>, ChainError> {
    let mut bases = Vec::new();
    for i in 0..=c.top_degree() {
        let di = c.d(i);
        let kernel = if i == 0 {
            (0..c.dim(0)).map(|k| unit::<S>(c.dim(0), k)).collect()
        } else {
            S::nullspace(&di, tol)?
        };
        let up = c.d(i + 1);
        let rank_up = S::rank(&up, tol)?;
        let count = kernel.len().checked_sub(rank_up).ok_or(ChainError::HomologyMismatch { degree: i })?;
        let h = S::complement(&kernel, &up, count, tol);
        if h.len() != count {
            return Err(ChainError::HomologyMismatch { degree: i });
        }
        bases.push(h);
    }
    Ok(HomologyBasisSet { bases })
}

pub(crate) fn unit<S: Scalar>(n: usize, k: usize) -> Vec<S> {
    (0..n).map(|j| if j == k { S::one() } else { S::zero() }).collect()
}

/// How the auxiliary bases `b^i` and lifts `h̃^i` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChoice {
    /// Standard vectors at the pivot columns of `d_i`; lifts are the given cycles.
    Pivoted,
    /// Random integer combinations for `b^i` and random boundaries added to lifts.
    Seeded(u64),
}

/// The auxiliary data used by one torsion evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionAudit<S> {
    /// `rank d_i` per degree.
    pub ranks: Vec<usize>,
    pub b: Vec<Vec<Vec<S>>>,
    pub lifts: Vec<Vec<Vec<S>>>,
    /// `[d_{i+1}(b^{i+1}) h̃^i b^i / c^i]` per degree.
    pub brackets: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionResult<S> {
    pub value: S,
    /// `|C| = Σ α_i β_i`.
    pub sign_exponent: u64,
    pub audit: TorsionAudit<S>,
}

/// `|C| = Σ_i α_i β_i` with partial sums of dimensions and Betti numbers.
pub fn sign_exponent(dims: &[usize], betti: &[usize]) -> u64 {
    let (mut a, mut b, mut n) = (0u64, 0u64, 0u64);
    for i in 0..dims.len() {
        a += dims[i] as u64;
        b += betti.get(i).copied().unwrap_or(0) as u64;
        n += a * b;
    }
    n
}

/// Ranks `r_i = rank d_i` forced by the Betti numbers.
pub fn ranks_from_betti(dims: &[usize], betti: &[usize]) -> Option<Vec<usize>> {
    let mut r = vec![0usize; dims.len() + 1];
    for i in 0..dims.len() {
        r[i + 1] = dims[i].checked_sub(r[i] + betti[i])?;
    }
    (r[dims.len()] == 0).then(|| r[..dims.len()].to_vec())
}

/// Sign-determined torsion of a based complex with a homology basis.
pub fn torsion<S: Scalar>(
    c: &BasedComplex<S>,
    h: &HomologyBasisSet<S>,
    choice: BasisChoice,
) -> Result<TorsionResult<S>, ChainError> {
    let top = c.top_degree();
    if h.bases.len() != top + 1 {
        return Err(ChainError::HomologyMismatch { degree: h.bases.len() });
    }
    for i in 0..=top {
        let di = c.d(i);
        for v in &h.bases[i] {
            if v.len() != c.dim(i) || !is_cycle(&di, v) {
                return Err(ChainError::HomologyMismatch { degree: i });
            }
        }
    }
    let betti = h.betti();
    let ranks = ranks_from_betti(c.dims(), &betti).ok_or(ChainError::HomologyMismatch { degree: top })?;
    let mut rng = match choice {
        BasisChoice::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        BasisChoice::Pivoted => None,
    };

    let mut b: Vec<Vec<Vec<S>>> = Vec::new();
    for i in 0..=top {
        b.push(choose_b(&c.d(i), c.dim(i), ranks[i], rng.as_mut(), i)?);
    }
    let mut lifts = Vec::new();
    for i in 0..=top {
        let up = c.d(i + 1);
        let l: Vec<Vec<S>> = h.bases[i]
            .iter()
            .map(|v| match rng.as_mut() {
                Some(r) if up.cols() > 0 => {
                    let w: Vec<S> = (0..up.cols()).map(|_| S::from_i64(r.random_range(-2..=2))).collect();
                    v.iter().zip(up.mul_vec(&w)).map(|(a, b)| a.clone() + b).collect()
                }
                _ => v.clone(),
            })
            .collect();
        lifts.push(l);
    }

    let mut value = S::one();
    let mut brackets = Vec::new();
    for i in 0..=top {
        let n = c.dim(i);
        let mut cols: Vec<Vec<S>> = Vec::with_capacity(n);
        if i < top {
            let up = c.d(i + 1);
            cols.extend(b[i + 1].iter().map(|v| up.mul_vec(v)));
        }
        cols.extend(lifts[i].iter().cloned());
        cols.extend(b[i].iter().cloned());
        debug_assert_eq!(cols.len(), n);
        let m = Mat::from_columns(n, &cols);
        if n > 0 && S::degenerate(&m) {
            return Err(ChainError::DegenerateBasis { degree: i });
        }
        let det = if n == 0 { S::one() } else { m.det() };
        if det.is_zero() {
            return Err(ChainError::DegenerateBasis { degree: i });
        }
        value = if i % 2 == 1 { value * det.clone() } else { value / det.clone() };
        brackets.push(det);
    }
    let sign = sign_exponent(c.dims(), &betti);
    if sign % 2 == 1 {
        value = -value;
    }
    Ok(TorsionResult { value, sign_exponent: sign, audit: TorsionAudit { ranks, b, lifts, brackets } })
}

fn is_cycle<S: Scalar>(d: &Mat<S>, v: &[S]) -> bool {
    if d.rows() == 0 {
        return true;
    }
    let img = d.mul_vec(v);
    if S::EXACT {
        img.iter().all(Scalar::is_zero)
    } else {
        let scale = d.max_magnitude() * v.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        img.iter().all(|x| x.magnitude() <= 1e-8 * scale.max(1.0))
    }
}

fn choose_b<S: Scalar>(
    d: &Mat<S>,
    n: usize,
    rank: usize,
    rng: Option<&mut ChaCha8Rng>,
    degree: usize,
) -> Result<Vec<Vec<S>>, ChainError> {
    if rank == 0 {
        return Ok(Vec::new());
    }
    match rng {
        None => {
            let piv = d.pivot_columns(rank);
            if piv.len() < rank {
                return Err(ChainError::DegenerateBasis { degree });
            }
            Ok(piv.into_iter().map(|k| unit(n, k)).collect())
        }
        Some(r) => {
            for _ in 0..64 {
                let cand: Vec<Vec<S>> =
                    (0..rank).map(|_| (0..n).map(|_| S::from_i64(r.random_range(-3..=3))).collect()).collect();
                let img = d.mul(&Mat::from_columns(n, &cand));
                if S::rank(&img, RANK_TOL)? == rank {
                    return Ok(cand);
                }
            }
            Err(ChainError::DegenerateBasis { degree })
        }
    }
}
