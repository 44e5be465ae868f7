//! Short exact sequences of based complexes, their long exact homology
//! sequence, and the multiplicativity of torsion.
//!
//! For `0 → C′ → C → C″ → 0` the homology sequence is graded as the acyclic
//! complex `𝓗` with `𝓗_{3i} = H_i(C″)`, `𝓗_{3i+1} = H_i(C)` and
//! `𝓗_{3i+2} = H_i(C′)`, based by the chosen homology bases.

use super::{sign_exponent, torsion, unit, BasedComplex, BasisChoice, ChainError, HomologyBasisSet, Mat, Scalar, RANK_TOL};

/// `0 → sub → mid → quo → 0` with the degree-wise maps.
#[derive(Debug, Clone)]
pub struct ShortExactSequence<S> {
    pub sub: BasedComplex<S>,
    pub mid: BasedComplex<S>,
    pub quo: BasedComplex<S>,
    /// `inc[i]: sub_i → mid_i`.
    pub inc: Vec<Mat<S>>,
    /// `proj[i]: mid_i → quo_i`.
    pub proj: Vec<Mat<S>>,
}

fn small<S: Scalar>(m: &Mat<S>, scale: f64) -> bool {
    if S::EXACT {
        m.is_zero()
    } else {
        m.max_magnitude() <= 1e-8 * scale.max(1.0)
    }
}

impl<S: Scalar> ShortExactSequence<S> {
    /// Checks shapes, chain-map identities and degree-wise exactness.
    pub fn new(
        sub: BasedComplex<S>,
        mid: BasedComplex<S>,
        quo: BasedComplex<S>,
        inc: Vec<Mat<S>>,
        proj: Vec<Mat<S>>,
    ) -> Result<Self, ChainError> {
        let top = mid.top_degree();
        if sub.top_degree() != top || quo.top_degree() != top || inc.len() != top + 1 || proj.len() != top + 1 {
            return Err(ChainError::NotExact { degree: 0 });
        }
        for i in 0..=top {
            let bad = ChainError::NotExact { degree: i };
            if inc[i].rows() != mid.dim(i) || inc[i].cols() != sub.dim(i) {
                return Err(bad);
            }
            if proj[i].rows() != quo.dim(i) || proj[i].cols() != mid.dim(i) {
                return Err(bad);
            }
            if mid.dim(i) != sub.dim(i) + quo.dim(i) {
                return Err(bad);
            }
            let scale = inc[i].max_magnitude() * proj[i].max_magnitude();
            if !small(&proj[i].mul(&inc[i]), scale) {
                return Err(bad);
            }
            if S::rank(&inc[i], RANK_TOL)? != sub.dim(i) || S::rank(&proj[i], RANK_TOL)? != quo.dim(i) {
                return Err(bad);
            }
            if i >= 1 {
                let a = inc[i - 1].mul(&sub.d(i));
                let b = mid.d(i).mul(&inc[i]);
                if !small(&a.sub(&b), a.max_magnitude().max(b.max_magnitude())) {
                    return Err(bad);
                }
                let a = proj[i - 1].mul(&mid.d(i));
                let b = quo.d(i).mul(&proj[i]);
                if !small(&a.sub(&b), a.max_magnitude().max(b.max_magnitude())) {
                    return Err(bad);
                }
            }
        }
        Ok(Self { sub, mid, quo, inc, proj })
    }

    pub fn top_degree(&self) -> usize {
        self.mid.top_degree()
    }
}

/// Coordinates of cycles in a homology basis, modulo boundaries.
fn classes<S: Scalar>(vecs: &[Vec<S>], h: &[Vec<S>], up: &Mat<S>, degree: usize) -> Result<Mat<S>, ChainError> {
    let n = up.rows();
    let mut cols = h.to_vec();
    cols.extend(up.columns());
    let a = Mat::from_columns(n, &cols);
    let mut out = Mat::zeros(h.len(), vecs.len());
    for (k, v) in vecs.iter().enumerate() {
        let x = S::solve(&a, v, RANK_TOL).ok_or(ChainError::NotExact { degree })?;
        for j in 0..h.len() {
            out[(j, k)] = x[j].clone();
        }
    }
    Ok(out)
}

/// The long exact homology sequence as an acyclic based complex.
pub fn long_exact_sequence<S: Scalar>(
    ses: &ShortExactSequence<S>,
    h_sub: &HomologyBasisSet<S>,
    h_mid: &HomologyBasisSet<S>,
    h_quo: &HomologyBasisSet<S>,
) -> Result<BasedComplex<S>, ChainError> {
    let top = ses.top_degree();
    let dims: Vec<usize> = (0..3 * top + 3)
        .map(|k| match k % 3 {
            0 => h_quo.bases[k / 3].len(),
            1 => h_mid.bases[k / 3].len(),
            _ => h_sub.bases[k / 3].len(),
        })
        .collect();
    let mut bd = Vec::new();
    for k in 1..dims.len() {
        let i = k / 3;
        let m = match k % 3 {
            2 => {
                let v: Vec<Vec<S>> = h_sub.bases[i].iter().map(|h| ses.inc[i].mul_vec(h)).collect();
                classes(&v, &h_mid.bases[i], &ses.mid.d(i + 1), k)?
            }
            1 => {
                let v: Vec<Vec<S>> = h_mid.bases[i].iter().map(|h| ses.proj[i].mul_vec(h)).collect();
                classes(&v, &h_quo.bases[i], &ses.quo.d(i + 1), k)?
            }
            _ => {
                let mut v = Vec::new();
                for h in &h_quo.bases[i] {
                    let y = S::solve(&ses.proj[i], h, RANK_TOL).ok_or(ChainError::NotExact { degree: i })?;
                    let z = ses.mid.d(i).mul_vec(&y);
                    let x = S::solve(&ses.inc[i - 1], &z, RANK_TOL).ok_or(ChainError::NotExact { degree: i })?;
                    v.push(x);
                }
                classes(&v, &h_sub.bases[i - 1], &ses.sub.d(i), k)?
            }
        };
        bd.push(m);
    }
    BasedComplex::new(dims, bd)
}

/// Both sides of the multiplicativity formula.
#[derive(Debug, Clone)]
pub struct MvCheck<S> {
    pub lhs: S,
    pub rhs: S,
    /// `|lhs − rhs| / |lhs|`.
    pub residual: f64,
    pub sign_exponent: u64,
    pub tor_sub: S,
    pub tor_mid: S,
    pub tor_quo: S,
    pub tor_les: S,
    /// `Π_i [inc(c′) ĉ″ / c]_i^{(−1)^{i+1}}`.
    pub compatibility: S,
    pub les: BasedComplex<S>,
}

fn partial(v: &[usize]) -> Vec<u64> {
    v.iter()
        .scan(0u64, |acc, &x| {
            *acc += x as u64;
            Some(*acc)
        })
        .collect()
}

/// The exponent `α + ε` of the sign in the multiplicativity formula, with
/// `α = Σ α_{i−1}(C′) α_i(C″)` and
/// `ε = Σ (β_i(C) + 1)(β_i(C′) + β_i(C″)) + β_{i−1}(C′) β_i(C″)`
/// over partial sums of dimensions and Betti numbers.
pub fn multiplicativity_sign(
    dims_sub: &[usize],
    dims_quo: &[usize],
    b_sub: &[usize],
    b_mid: &[usize],
    b_quo: &[usize],
) -> u64 {
    let (a1, a2) = (partial(dims_sub), partial(dims_quo));
    let (s1, s, s2) = (partial(b_sub), partial(b_mid), partial(b_quo));
    let prev = |v: &[u64], i: usize| if i == 0 { 0 } else { v[i - 1] };
    let mut alpha = 0;
    let mut eps = 0;
    for i in 0..dims_sub.len() {
        alpha += prev(&a1, i) * a2[i];
        eps += (s[i] + 1) * (s1[i] + s2[i]) + prev(&s1, i) * s2[i];
    }
    alpha + eps
}

/// Exponent `N` with `Tor(C₁ ⊕ C₂) = (−1)^N Tor(C₁) Tor(C₂)` for the
/// concatenated basis, given dimensions, Betti numbers and boundary ranks.
pub fn direct_sum_sign(
    dims1: &[usize],
    betti1: &[usize],
    ranks1: &[usize],
    dims2: &[usize],
    betti2: &[usize],
    ranks2: &[usize],
) -> u64 {
    let dims: Vec<usize> = dims1.iter().zip(dims2).map(|(a, b)| a + b).collect();
    let betti: Vec<usize> = betti1.iter().zip(betti2).map(|(a, b)| a + b).collect();
    let mut n = sign_exponent(&dims, &betti) + sign_exponent(dims1, betti1) + sign_exponent(dims2, betti2);
    let r = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0) as u64;
    for i in 0..dims.len() {
        let (q1, s1) = (r(betti1, i), r(ranks1, i));
        let (p2, q2) = (r(ranks2, i + 1), r(betti2, i));
        n += p2 * (q1 + s1) + q2 * s1;
    }
    n
}

/// Compares `Tor(mid)` with the product formula built from `sub`, `quo` and
/// the homology sequence.
pub fn mv_multiplicativity<S: Scalar>(
    ses: &ShortExactSequence<S>,
    h_sub: &HomologyBasisSet<S>,
    h_mid: &HomologyBasisSet<S>,
    h_quo: &HomologyBasisSet<S>,
    choice: BasisChoice,
) -> Result<MvCheck<S>, ChainError> {
    let top = ses.top_degree();
    let tor_sub = torsion(&ses.sub, h_sub, choice)?.value;
    let tor_mid = torsion(&ses.mid, h_mid, choice)?.value;
    let tor_quo = torsion(&ses.quo, h_quo, choice)?.value;
    let les = long_exact_sequence(ses, h_sub, h_mid, h_quo)?;
    let tor_les = torsion(&les, &HomologyBasisSet::empty(les.top_degree() + 1), choice)?.value;

    let mut compatibility = S::one();
    for i in 0..=top {
        let n = ses.mid.dim(i);
        let mut cols = ses.inc[i].columns();
        for k in 0..ses.quo.dim(i) {
            let e = unit::<S>(ses.quo.dim(i), k);
            cols.push(S::solve(&ses.proj[i], &e, RANK_TOL).ok_or(ChainError::NotExact { degree: i })?);
        }
        let det = if n == 0 { S::one() } else { Mat::from_columns(n, &cols).det() };
        if det.is_zero() {
            return Err(ChainError::NotExact { degree: i });
        }
        compatibility = if i % 2 == 1 { compatibility * det } else { compatibility / det };
    }

    let exp = multiplicativity_sign(
        ses.sub.dims(),
        ses.quo.dims(),
        &h_sub.betti(),
        &h_mid.betti(),
        &h_quo.betti(),
    );
    let mut rhs = tor_sub.clone() * tor_quo.clone() * tor_les.clone() * compatibility.clone();
    if exp % 2 == 1 {
        rhs = -rhs;
    }
    let diff = tor_mid.clone() - rhs.clone();
    let residual = if diff.is_zero() { 0.0 } else { diff.magnitude() / tor_mid.magnitude() };
    Ok(MvCheck {
        lhs: tor_mid.clone(),
        rhs,
        residual,
        sign_exponent: exp,
        tor_sub,
        tor_mid,
        tor_quo,
        tor_les,
        compatibility,
        les,
    })
}
