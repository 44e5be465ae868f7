//! Twisted cochain complexes of 2-complexes and the derivation dictionary.
//!
//! A cochain is stored per cell, then per basis vector of the coefficient
//! module. For a 0-cochain `a` the coboundary on an edge `e: u → v` with label
//! `g_e` is `a_u − ψ(g_e) a_v`; on a presentation complex this is the inner
//! derivation `g ↦ a − ψ(g) a`. The coboundary of a 1-cochain evaluates the
//! cocycle rule along each face boundary, which on a presentation complex is
//! the Fox Jacobian pushed through `ψ`.

use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

use crate::chainlib::{BasedComplex, ChainError, Mat, RatFunc, Scalar};
use crate::fgroup::{presentation_complex, CellComplex2, GroupPresentation, Word};
use crate::su2::{Su2Element, Su2Vector};

/// Relator tolerance for representations feeding a coefficient system.
pub const RELATOR_TOL: f64 = 1e-6;
/// Tolerance for the cocycle condition of a derivation.
pub const COCYCLE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwistedError {
    #[error("representation violates relator {relator} by {residual:e}")]
    RelatorViolation { relator: usize, residual: f64 },
    #[error("derivation does not vanish on relator {relator} (residual {residual:e})")]
    NotACocycle { relator: usize, residual: f64 },
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("abelianization is not infinite cyclic with the given meridian")]
    Abelianization,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Which module the fundamental group acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientKind {
    /// `su(2)` through `Ad∘ρ`.
    AdjointReal,
    /// `su(2)` through `Ad∘ρ ⊗ α`, evaluated at a complex `t`.
    AdjointAlexander,
    /// One-dimensional through `α` over rational functions in `t`.
    Abelian,
}

/// A left action of a free group on `S^k`, given on generators.
pub trait CoefficientSystem {
    type Scalar: Scalar;

    fn kind(&self) -> CoefficientKind;
    /// Dimension `k` of the coefficient module.
    fn rank(&self) -> usize;
    /// `ψ(x_j)` as a `k × k` matrix.
    fn action(&self, generator: usize) -> Mat<Self::Scalar>;
    /// `ψ(x_j)⁻¹`.
    fn inverse_action(&self, generator: usize) -> Mat<Self::Scalar>;
    /// Checks that the action is defined on `p` and kills its relators.
    fn validate(&self, p: &GroupPresentation) -> Result<(), TwistedError>;

    /// `ψ(w)`.
    fn word_action(&self, w: &Word) -> Mat<Self::Scalar> {
        w.letters().iter().fold(Mat::identity(self.rank()), |acc, l| {
            let m = if l.inverse { self.inverse_action(l.generator) } else { self.action(l.generator) };
            acc.mul(&m)
        })
    }
}

fn ad_mat(g: Su2Element) -> Mat<f64> {
    let a = g.adjoint().0;
    Mat::from_fn(3, 3, |r, c| a[(r, c)])
}

/// Evaluates a word in SU(2).
pub fn evaluate_word(w: &Word, images: &[Su2Element]) -> Su2Element {
    w.evaluate(images, Su2Element::IDENTITY, |g| g.inverse(), |a, b| *a * *b)
}

/// Largest distance of a relator image from the identity, and its index.
pub fn relator_residual(p: &GroupPresentation, images: &[Su2Element]) -> (usize, f64) {
    p.relators
        .iter()
        .enumerate()
        .map(|(k, r)| (k, evaluate_word(r, images).distance(Su2Element::IDENTITY)))
        .fold((0, 0.0), |best, x| if x.1 > best.1 { x } else { best })
}

fn check_images(p: &GroupPresentation, images: &[Su2Element]) -> Result<(), TwistedError> {
    if images.len() != p.num_generators() {
        return Err(TwistedError::ImageCount { expected: p.num_generators(), got: images.len() });
    }
    let (relator, residual) = relator_residual(p, images);
    if residual > RELATOR_TOL {
        return Err(TwistedError::RelatorViolation { relator, residual });
    }
    Ok(())
}

fn check_alpha(p: &GroupPresentation, alpha: &[i64]) -> Result<(), TwistedError> {
    if alpha.len() != p.num_generators() {
        return Err(TwistedError::ImageCount { expected: p.num_generators(), got: alpha.len() });
    }
    for (k, r) in p.abelianized_relators().iter().enumerate() {
        let s: i64 = r.iter().zip(alpha).map(|(e, a)| e * a).sum();
        if s != 0 {
            return Err(TwistedError::RelatorViolation { relator: k, residual: s.abs() as f64 });
        }
    }
    Ok(())
}

/// `Ad∘ρ` on `su(2)`.
#[derive(Debug, Clone, Copy)]
pub struct AdjointReal<'a> {
    pub images: &'a [Su2Element],
}

impl CoefficientSystem for AdjointReal<'_> {
    type Scalar = f64;

    fn kind(&self) -> CoefficientKind {
        CoefficientKind::AdjointReal
    }
    fn rank(&self) -> usize {
        3
    }
    fn action(&self, generator: usize) -> Mat<f64> {
        ad_mat(self.images[generator])
    }
    fn inverse_action(&self, generator: usize) -> Mat<f64> {
        ad_mat(self.images[generator].inverse())
    }
    fn validate(&self, p: &GroupPresentation) -> Result<(), TwistedError> {
        check_images(p, self.images)
    }
    fn word_action(&self, w: &Word) -> Mat<f64> {
        ad_mat(evaluate_word(w, self.images))
    }
}

/// `Ad∘ρ ⊗ α` on `su(2)`, evaluated at `t`.
#[derive(Debug, Clone, Copy)]
pub struct AdjointAlexander<'a> {
    pub images: &'a [Su2Element],
    pub alpha: &'a [i64],
    pub t: Complex64,
}

impl CoefficientSystem for AdjointAlexander<'_> {
    type Scalar = Complex64;

    fn kind(&self) -> CoefficientKind {
        CoefficientKind::AdjointAlexander
    }
    fn rank(&self) -> usize {
        3
    }
    fn action(&self, generator: usize) -> Mat<Complex64> {
        let s = self.t.powi(self.alpha[generator] as i32);
        ad_mat(self.images[generator]).map(|x| s * *x)
    }
    fn inverse_action(&self, generator: usize) -> Mat<Complex64> {
        let s = self.t.powi(-self.alpha[generator] as i32);
        ad_mat(self.images[generator].inverse()).map(|x| s * *x)
    }
    fn validate(&self, p: &GroupPresentation) -> Result<(), TwistedError> {
        check_images(p, self.images)?;
        check_alpha(p, self.alpha)
    }
}

/// `α` on rational functions in `t`.
#[derive(Debug, Clone, Copy)]
pub struct Abelian<'a> {
    pub alpha: &'a [i64],
}

impl CoefficientSystem for Abelian<'_> {
    type Scalar = RatFunc;

    fn kind(&self) -> CoefficientKind {
        CoefficientKind::Abelian
    }
    fn rank(&self) -> usize {
        1
    }
    fn action(&self, generator: usize) -> Mat<RatFunc> {
        Mat::from_rows(vec![vec![RatFunc::t_pow(self.alpha[generator])]])
    }
    fn inverse_action(&self, generator: usize) -> Mat<RatFunc> {
        Mat::from_rows(vec![vec![RatFunc::t_pow(-self.alpha[generator])]])
    }
    fn validate(&self, p: &GroupPresentation) -> Result<(), TwistedError> {
        check_alpha(p, self.alpha)
    }
}

fn put_block<S: Scalar>(m: &mut Mat<S>, r0: usize, c0: usize, b: &Mat<S>, sign: i64) {
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            let v = b[(r, c)].clone();
            let v = if sign < 0 { -v } else { v };
            m[(r0 + r, c0 + c)] = m[(r0 + r, c0 + c)].clone() + v;
        }
    }
}

/// The cochain complex `C⁰ → C¹ → C²` of a labelled 2-complex.
pub fn cell_cochain_complex<C: CoefficientSystem>(
    cells: &CellComplex2,
    coeffs: &C,
) -> Result<BasedComplex<C::Scalar>, TwistedError> {
    let k = coeffs.rank();
    let [nv, ne, nf] = cells.ranks();
    let mut d0 = Mat::zeros(k * ne, k * nv);
    for (e, edge) in cells.edges.iter().enumerate() {
        put_block(&mut d0, k * e, k * edge.tail, &Mat::identity(k), 1);
        put_block(&mut d0, k * e, k * edge.head, &coeffs.word_action(&edge.label), -1);
    }
    let mut d1 = Mat::zeros(k * nf, k * ne);
    for (f, face) in cells.faces.iter().enumerate() {
        let mut prefix = Mat::identity(k);
        for &(e, s) in &face.boundary {
            let label = coeffs.word_action(&cells.edges[e].label);
            if s > 0 {
                put_block(&mut d1, k * f, k * e, &prefix, 1);
                prefix = prefix.mul(&label);
            } else {
                let inv = coeffs.word_action(&cells.edges[e].label.inverse());
                prefix = prefix.mul(&inv);
                put_block(&mut d1, k * f, k * e, &prefix, -1);
            }
        }
    }
    Ok(BasedComplex::from_cochain(vec![k * nv, k * ne, k * nf], vec![d0, d1])?)
}

/// The twisted cochain complex of the presentation 2-complex of `p`.
pub fn twisted_complex<C: CoefficientSystem>(
    p: &GroupPresentation,
    coeffs: &C,
) -> Result<BasedComplex<C::Scalar>, TwistedError> {
    coeffs.validate(p)?;
    cell_cochain_complex(&presentation_complex(p), coeffs)
}

/// The untwisted chain complex `C₂ → C₁ → C₀` over ℚ: the vertex map is zero
/// and `∂₂` holds the exponent sums of the relators.
pub fn untwisted_real_complex(p: &GroupPresentation) -> BasedComplex<BigRational> {
    let n = p.num_generators();
    let rels = p.abelianized_relators();
    let d2 = Mat::from_fn(n, rels.len(), |j, r| BigRational::from_i64(rels[r][j]));
    BasedComplex::new(vec![1, n, rels.len()], vec![Mat::zeros(1, n), d2]).expect("abelian boundaries compose to zero")
}

/// The homomorphism `α: G → ℤ` with `α(meridian) = 1`, on generators.
pub fn abelianization(p: &GroupPresentation, meridian: &Word) -> Result<Vec<i64>, TwistedError> {
    let n = p.num_generators();
    let rels = p.abelianized_relators();
    let m = Mat::from_fn(rels.len(), n, |r, j| BigRational::from_i64(rels[r][j]));
    let kernel = if rels.is_empty() { (0..n).map(|k| crate::chainlib::unit(n, k)).collect() } else { m.nullspace_rref(0.0) };
    if kernel.len() != 1 {
        return Err(TwistedError::Abelianization);
    }
    let mu = meridian.exponent_sums(n);
    let at_mu = kernel[0].iter().zip(&mu).fold(BigRational::from_i64(0), |acc, (v, &e)| acc + v.clone() * BigRational::from_i64(e));
    if at_mu.is_zero() {
        return Err(TwistedError::Abelianization);
    }
    kernel[0]
        .iter()
        .map(|v| {
            let x = v.clone() / at_mu.clone();
            if x.is_integer() {
                i64::try_from(x.to_integer()).map_err(|_| TwistedError::Abelianization)
            } else {
                Err(TwistedError::Abelianization)
            }
        })
        .collect()
}

/// A crossed homomorphism `G → su(2)_ρ`, given on generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub values: Vec<Su2Vector>,
}

impl Derivation {
    pub fn zero(n: usize) -> Self {
        Self { values: vec![Su2Vector::ZERO; n] }
    }

    /// The inner derivation `g ↦ a − Ad_{ρ(g)} a`.
    pub fn inner(a: Su2Vector, images: &[Su2Element]) -> Self {
        Self { values: images.iter().map(|g| a - g.act(a)).collect() }
    }

    /// Reads a degree-1 cochain vector.
    pub fn from_cochain(v: &[f64]) -> Self {
        Self { values: v.chunks(3).map(|c| Su2Vector::new(c[0], c[1], c[2])).collect() }
    }

    /// The degree-1 cochain vector, three entries per generator.
    pub fn to_cochain(&self) -> Vec<f64> {
        self.values.iter().flat_map(|v| v.to_array()).collect()
    }

    /// Extends by `d(gh) = d(g) + Ad_{ρ(g)} d(h)` and evaluates on `w`.
    pub fn evaluate(&self, w: &Word, images: &[Su2Element]) -> Su2Vector {
        let mut g = Su2Element::IDENTITY;
        let mut d = Su2Vector::ZERO;
        for l in w.letters() {
            let x = images[l.generator];
            if l.inverse {
                g = g * x.inverse();
                d = d - g.act(self.values[l.generator]);
            } else {
                d = d + g.act(self.values[l.generator]);
                g = g * x;
            }
        }
        d
    }
}

/// The cochain of a derivation after checking that it kills every relator.
pub fn derivation_to_cocycle(
    d: &Derivation,
    p: &GroupPresentation,
    images: &[Su2Element],
) -> Result<Vec<f64>, TwistedError> {
    if d.values.len() != p.num_generators() {
        return Err(TwistedError::ImageCount { expected: p.num_generators(), got: d.values.len() });
    }
    let scale = d.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    for (k, r) in p.relators.iter().enumerate() {
        let residual = d.evaluate(r, images).norm();
        if residual > COCYCLE_TOL * scale {
            return Err(TwistedError::NotACocycle { relator: k, residual });
        }
    }
    Ok(d.to_cochain())
}
