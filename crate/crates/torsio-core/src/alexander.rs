//! Abelian torsion of knot exteriors and the adjoint twisted Alexander
//! invariant.
//!
//! The abelian torsion is computed exactly over `ℚ(t)` and equals
//! `Δ_K(t)/(t − 1)` up to `±tᵐ`. The twisted invariant is the torsion of the
//! acyclic `Ad∘ρ ⊗ α` complex. Its denominator is `D(t) = det(1 − t Ad_{ρ(μ)})`;
//! the numerator `D(t)/Tor*(t)`, with `Tor*` the cochain torsion, is recovered from values on a rotated circle of
//! roots of unity by an inverse discrete Fourier transform.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chainlib::{torsion, BasisChoice, ChainError, HomologyBasisSet, Mat, Poly, RatFunc, Scalar};
use crate::fgroup::{GroupPresentation, Word};
use crate::su2::Su2Element;
use crate::twisted::{abelianization, twisted_complex, Abelian, AdjointAlexander, TwistedError};

/// Coefficients below this, relative to the largest, are set to zero.
pub const CLEANUP_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlexanderError {
    #[error("the complex is not acyclic")]
    NotAcyclic,
    #[error("the meridian must be a single generator")]
    UnsupportedMeridian,
    #[error("numerator has imaginary part {0:e}")]
    NotReal(f64),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// The chain-level torsion `Δ_K(t)/(t − 1)` in the class modulo `±tᵐ`; it is
/// the inverse of the torsion of the cochain complex.
pub fn abelian_torsion(p: &GroupPresentation, meridian: &Word) -> Result<RatFunc, AlexanderError> {
    let alpha = abelianization(p, meridian)?;
    let c = twisted_complex(p, &Abelian { alpha: &alpha })?;
    let h = HomologyBasisSet::empty(c.top_degree() + 1);
    match torsion(&c, &h, BasisChoice::Pivoted) {
        Ok(t) => Ok((RatFunc::one() / t.value).canonical()),
        Err(ChainError::HomologyMismatch { .. }) => Err(AlexanderError::NotAcyclic),
        Err(e) => Err(e.into()),
    }
}

/// `Δ_K(t)` from the abelian torsion: the canonical numerator of `tors·(t − 1)`.
pub fn alexander_polynomial(p: &GroupPresentation, meridian: &Word) -> Result<Poly, AlexanderError> {
    let t = abelian_torsion(p, meridian)?;
    Ok((t * RatFunc::from_poly(Poly::from_ints(&[-1, 1]))).canonical().num().clone())
}

/// `det(V − t Vᵀ)` for an integer Seifert matrix `V`, canonicalized.
pub fn seifert_alexander(v: &[Vec<i64>]) -> Poly {
    let n = v.len();
    let m = Mat::from_fn(n, n, |r, c| RatFunc::from_poly(Poly::from_ints(&[v[r][c], -v[c][r]])));
    m.det().canonical().num().clone()
}

/// A rational function with floating coefficients, lowest degree first,
/// normalized so that neither side is divisible by `t` and the lowest
/// numerator coefficient is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatRatFunc {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
}

impl FloatRatFunc {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>) -> Self {
        Self { numerator: normalize(numerator), denominator: normalize(denominator) }
    }

    /// Largest coefficient difference, `∞` when the shapes differ.
    pub fn distance(&self, o: &Self) -> f64 {
        if self.numerator.len() != o.numerator.len() || self.denominator.len() != o.denominator.len() {
            return f64::INFINITY;
        }
        self.numerator
            .iter()
            .zip(&o.numerator)
            .chain(self.denominator.iter().zip(&o.denominator))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        horner(&self.numerator, t) / horner(&self.denominator, t)
    }
}

fn horner(c: &[f64], t: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * t + x)
}

fn normalize(mut c: Vec<f64>) -> Vec<f64> {
    let scale = c.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for x in c.iter_mut() {
        if x.abs() <= CLEANUP_TOL * scale.max(1.0) {
            *x = 0.0;
        }
    }
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let low = c.iter().position(|&x| x != 0.0).unwrap_or(0);
    c.drain(..low);
    if c.first().is_some_and(|&x| x < 0.0) {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    c
}

/// `det(1 − t A)` for a real 3 × 3 matrix `A`, lowest degree first.
fn char_poly_reversed(a: &Mat<f64>) -> Vec<f64> {
    let tr = a[(0, 0)] + a[(1, 1)] + a[(2, 2)];
    let minors = (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            a[(j, j)] * a[(k, k)] - a[(j, k)] * a[(k, j)]
        })
        .sum::<f64>();
    vec![1.0, -tr, minors, -a.det()]
}

/// The twisted Alexander invariant `Δ^{Ad∘ρ}_K(t)` at a representation.
pub fn twisted_alexander(
    p: &GroupPresentation,
    meridian: &Word,
    images: &[Su2Element],
) -> Result<FloatRatFunc, AlexanderError> {
    let [l] = meridian.letters() else { return Err(AlexanderError::UnsupportedMeridian) };
    let alpha = abelianization(p, meridian)?;
    let a = l.generator;
    let ad = images[a].adjoint().0;
    let ad = Mat::from_fn(3, 3, |r, c| ad[(r, c)]);
    let ad = if l.inverse { ad.transpose() } else { ad };
    let den = char_poly_reversed(&ad);

    let len: usize = p.relators.iter().map(Word::len).sum();
    let n = (2 * 3 * len + 16).next_power_of_two();
    let offset = std::f64::consts::PI / n as f64 * 0.618_033_988_75;
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let t = Complex64::from_polar(1.0, offset + 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let c = twisted_complex(p, &AdjointAlexander { images, alpha: &alpha, t })?;
        let h = HomologyBasisSet::empty(c.top_degree() + 1);
        let tor = match torsion(&c, &h, BasisChoice::Pivoted) {
            Ok(r) => r.value,
            Err(ChainError::HomologyMismatch { .. }) => return Err(AlexanderError::NotAcyclic),
            Err(e) => return Err(e.into()),
        };
        let d = den.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * t + x);
        values.push(d / tor);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut values);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (j, v) in values.iter().enumerate() {
        // index j holds n·c_j·e^{i·offset·j} for the Laurent exponent j mod n
        let signed = if j >= n / 2 { j as i64 - n as i64 } else { j as i64 };
        coeffs[(signed + n as i64 / 2) as usize] = v / n as f64 * Complex64::from_polar(1.0, -offset * signed as f64);
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let imag = coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if imag > 1e-6 * scale.max(1.0) {
        return Err(AlexanderError::NotReal(imag));
    }
    Ok(FloatRatFunc::new(coeffs.iter().map(|c| c.re).collect(), den))
}

/// Rounds a float polynomial to nearby integers when all coefficients are
/// within `tol` of one.
pub fn integer_coefficients(c: &[f64], tol: f64) -> Option<Vec<i64>> {
    c.iter().map(|&x| ((x - x.round()).abs() <= tol).then(|| x.round() as i64)).collect()
}

/// The coefficient list of an exact polynomial, as floats.
pub fn poly_to_f64(p: &Poly) -> Vec<f64> {
    use num_traits::ToPrimitive;
    p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

/// `|Δ(−1)|`, the knot determinant.
pub fn determinant(delta: &Poly) -> BigRational {
    delta.eval(&<BigRational as Scalar>::from_i64(-1)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgroup::load_knot;
    use crate::repspace::solve_representations;

    fn knot(stem: &str) -> (GroupPresentation, Word) {
        let k = load_knot(stem).unwrap();
        (k.presentation, k.peripheral.meridian)
    }

    fn tietze(p: &GroupPresentation) -> GroupPresentation {
        p.tietze_add("g", &Word::from_pairs(&[(0, 1), (1, -1), (0, 1)]))
    }

    #[test]
    fn unknot_torsion() {
        let p = GroupPresentation::free(1);
        let t = abelian_torsion(&p, &Word::letter(0, 1)).unwrap();
        assert_eq!(t, RatFunc::new(Poly::from_ints(&[1]), Poly::from_ints(&[-1, 1])));
    }

    #[test]
    fn milnor_formula_against_seifert_matrices() {
        for (stem, v) in [("trefoil", vec![vec![-1, 1], vec![0, -1]]), ("figure_eight", vec![vec![1, 1], vec![0, -1]])] {
            let (p, mu) = knot(stem);
            let delta = seifert_alexander(&v);
            let expected = RatFunc::new(delta, Poly::from_ints(&[-1, 1])).canonical();
            assert_eq!(abelian_torsion(&p, &mu).unwrap(), expected, "{stem}");
        }
    }

    #[test]
    fn seifert_oracle_values() {
        assert_eq!(seifert_alexander(&[vec![-1, 1], vec![0, -1]]), Poly::from_ints(&[1, -1, 1]));
        assert_eq!(seifert_alexander(&[vec![1, 1], vec![0, -1]]), Poly::from_ints(&[1, -3, 1]));
    }

    #[test]
    fn knot_determinants() {
        for (stem, d) in [("trefoil", 3), ("figure_eight", 5)] {
            let (p, mu) = knot(stem);
            assert_eq!(determinant(&alexander_polynomial(&p, &mu).unwrap()), <BigRational as Scalar>::from_i64(d));
        }
    }

    #[test]
    fn alexander_polynomials_are_symmetric() {
        for stem in crate::fgroup::knot_names() {
            let (p, mu) = knot(stem);
            let d = poly_to_f64(&alexander_polynomial(&p, &mu).unwrap());
            let r: Vec<f64> = d.iter().rev().copied().collect();
            assert!(d == r || d.iter().zip(&r).all(|(a, b)| *a == -b), "{stem}");
        }
    }

    #[test]
    fn mutant_pairs_share_the_alexander_polynomial() {
        for (a, b) in [("kinoshita_terasaka", "conway"), ("pretzel_3_3_3_m2", "pretzel_3_3_3_m2_mutant")] {
            let (p, mu) = knot(a);
            let (q, nu) = knot(b);
            assert_eq!(abelian_torsion(&p, &mu).unwrap(), abelian_torsion(&q, &nu).unwrap());
        }
    }

    #[test]
    fn abelian_torsion_is_tietze_invariant() {
        let (p, mu) = knot("figure_eight");
        assert_eq!(abelian_torsion(&p, &mu).unwrap(), abelian_torsion(&tietze(&p), &mu).unwrap());
    }

    #[test]
    fn twisted_invariant_at_an_abelian_rep_factors() {
        // Ad of a diagonal rep splits as 1 ⊕ e^{±2iθ}, so the invariant is
        // Δ(t)Δ(e^{2iθ}t)Δ(e^{−2iθ}t) over the three vertex factors.
        let (p, mu) = knot("trefoil");
        let theta = 0.7;
        let rep = crate::repspace::abelian_representation("trefoil", &p, theta);
        let tw = twisted_alexander(&p, &mu, &rep.images).unwrap();
        let delta = poly_to_f64(&alexander_polynomial(&p, &mu).unwrap());
        for k in 0..5 {
            let t = Complex64::from_polar(0.9, 0.3 + k as f64);
            let w = Complex64::from_polar(1.0, 2.0 * theta);
            let d = |s: Complex64| horner(&delta, s) / (s - 1.0);
            let expected = d(t) * d(t * w) * d(t / w);
            let got = tw.eval(t);
            // equal up to ±tᵐ
            let ratio = got / expected;
            let m = (ratio.norm().ln() / t.norm().ln()).round() as i32;
            let unit = ratio / t.powi(m);
            assert!((unit.norm() - 1.0).abs() < 1e-8 && unit.im.abs() < 1e-8, "{ratio}");
        }
    }

    #[test]
    fn twisted_invariant_is_conjugation_and_tietze_invariant() {
        let (p, mu) = knot("trefoil");
        let rep = solve_representations("trefoil", &p, &mu, 1.2, 40, 3).unwrap().remove(0);
        let a = twisted_alexander(&p, &mu, &rep.images).unwrap();
        let b = twisted_alexander(&p, &mu, &rep.conjugated(Su2Element::new(0.3, 0.5, -0.2, 0.7).normalized()).images).unwrap();
        assert!(a.distance(&b) < 1e-8, "{a:?} {b:?}");
        let q = tietze(&p);
        let mut imgs = rep.images.clone();
        imgs.push(crate::twisted::evaluate_word(&Word::from_pairs(&[(0, 1), (1, -1), (0, 1)]), &rep.images));
        let c = twisted_alexander(&q, &mu, &imgs).unwrap();
        assert!(a.distance(&c) < 1e-8, "{a:?} {c:?}");
    }

    #[test]
    fn normalization_strips_units() {
        let f = FloatRatFunc::new(vec![0.0, -2.0, 1e-14, 3.0], vec![0.0, 1.0, -1.0]);
        assert_eq!(f.numerator, vec![2.0, 0.0, -3.0]);
        assert_eq!(f.denominator, vec![1.0, -1.0]);
    }
}
