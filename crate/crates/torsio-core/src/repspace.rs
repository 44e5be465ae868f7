//! SU(2) representations of knot and tangle groups.
//!
//! Every generator of a knot-group presentation handled here is a meridian,
//! so a representation with meridian angle `θ` sends generator `j` to
//! `cos θ + sin θ · P_j` for a unit axis `P_j`. Solving happens on the axes.
//! The gauge is fixed afterwards by conjugation: the meridian axis becomes
//! `i` and the first generator with a different axis is rotated into the
//! `i`–`j` half plane with positive `j` component.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chainlib::{homology_basis, ChainError, Mat, Scalar, RANK_TOL};
use crate::fgroup::{GroupPresentation, MutationMove, TangleDecomposition, Word};
use crate::su2::{Su2Element, Su2Vector};
use crate::twisted::{evaluate_word, relator_residual, twisted_complex, AdjointReal, Derivation, TwistedError};

/// Relator residual required of a solved representation.
pub const SOLVE_TOL: f64 = 1e-10;
/// Residual allowed for the intertwiner equation and mutant relators.
pub const MUTATION_TOL: f64 = 1e-8;
/// Trace agreement under which two characters are identified.
pub const CHARACTER_TOL: f64 = 1e-6;
/// Number of words in a character fingerprint.
pub const CHARACTER_WORDS: usize = 20;
/// Distance of a commutator from `1` above which two images do not commute.
pub const COMMUTE_TOL: f64 = 1e-6;
/// Step of the θ-continuation used for tangent vectors.
pub const CONTINUATION_STEP: f64 = 1e-3;
/// Finite-difference step for tangent vectors.
pub const TANGENT_STEP: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("no start converged to a representation")]
    NoSolution,
    #[error("only reducible representations were found")]
    ReducibleOnly,
    #[error("the meridian must be a single generator")]
    UnsupportedMeridian,
    #[error("the representation is reducible")]
    NotIrreducible,
    #[error("dim H¹ = {h1}, dim H² = {h2}: the representation is not regular")]
    NotRegular { h1: usize, h2: usize },
    #[error("the path does not stay on the representation variety (residual {residual:e})")]
    NotAPath { residual: f64 },
    #[error("no intertwiner solves the conjugation system (residual {residual:e})")]
    NoIntertwiner { residual: f64 },
    #[error("the sphere restriction is reducible")]
    Reducible,
    #[error("mutant relators fail by {residual:e}")]
    GluingMismatch { residual: f64 },
    #[error("τ♯ has no cocycle representative (residual {residual:e})")]
    NoTransport { residual: f64 },
    #[error("malformed representation file: {0}")]
    Json(String),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A homomorphism to SU(2) given on generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    /// Name of the presentation the images belong to.
    pub presentation: String,
    /// Meridian angle.
    pub theta: f64,
    pub images: Vec<Su2Element>,
    /// Largest relator deviation from the identity.
    pub residual: f64,
    pub gauge_fixed: bool,
    /// The generator rotated into the `i`–`j` half plane.
    pub gauge_generator: Option<usize>,
}

impl Representation {
    /// Builds a representation and records its relator residual.
    pub fn new(presentation: &str, p: &GroupPresentation, theta: f64, images: Vec<Su2Element>) -> Self {
        let residual = relator_residual(p, &images).1;
        Self { presentation: presentation.to_string(), theta, images, residual, gauge_fixed: false, gauge_generator: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self, RepError> {
        serde_json::from_str(s).map_err(|e| RepError::Json(e.to_string()))
    }

    /// Conjugates every image by `g`.
    pub fn conjugated(&self, g: Su2Element) -> Self {
        let images = self.images.iter().map(|&x| g * x * g.inverse()).collect();
        Self { images, gauge_fixed: false, gauge_generator: None, ..self.clone() }
    }
}

/// Whether `g` and `h` commute.
pub fn commute(g: Su2Element, h: Su2Element) -> bool {
    (g * h * g.inverse() * h.inverse()).distance(Su2Element::IDENTITY) <= COMMUTE_TOL
}

/// Whether the images generate a non-abelian subgroup.
pub fn is_irreducible_images(images: &[Su2Element]) -> bool {
    images.iter().enumerate().any(|(k, &g)| images[k + 1..].iter().any(|&h| !commute(g, h)))
}

pub fn is_irreducible(rep: &Representation) -> bool {
    is_irreducible_images(&rep.images)
}

/// Images of the sphere curves `a, b, c, d` under a representation of the amalgam.
pub fn sphere_restriction(rep: &Representation, dec: &TangleDecomposition) -> [Su2Element; 4] {
    dec.sphere_words2().map(|w| evaluate_word(&w, &rep.images))
}

/// Whether the restriction to the sphere group is irreducible.
pub fn is_f_irreducible(rep: &Representation, dec: &TangleDecomposition) -> bool {
    is_irreducible_images(&sphere_restriction(rep, dec))
}

/// Deterministic words used to fingerprint characters.
pub fn character_words(n: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
    (0..CHARACTER_WORDS)
        .map(|k| {
            let len = 1 + k % 5;
            let pairs: Vec<(usize, i32)> =
                (0..len).map(|_| (rng.random_range(0..n), if rng.random_bool(0.5) { 1 } else { -1 })).collect();
            Word::from_pairs(&pairs)
        })
        .collect()
}

/// Traces of the fingerprint words.
pub fn character(images: &[Su2Element]) -> Vec<f64> {
    character_words(images.len()).iter().map(|w| evaluate_word(w, images).trace()).collect()
}

/// Largest trace deviation between two characters.
pub fn character_distance(a: &[Su2Element], b: &[Su2Element]) -> f64 {
    character(a).iter().zip(character(b)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// The rotation `g` with `g P g⁻¹ = i`.
fn rotate_to_i(p: Su2Vector) -> Su2Element {
    let i = Su2Vector::new(1.0, 0.0, 0.0);
    let n = p.cross(i);
    let s = n.norm();
    let c = p.i;
    if s < 1e-15 {
        return if c > 0.0 { Su2Element::IDENTITY } else { Su2Element::j() };
    }
    let angle = s.atan2(c);
    Su2Element::from_axis_angle(angle / 2.0, n.scale(1.0 / s))
}

/// Conjugates into the normal form; returns the images and the generator
/// that fixes the residual rotation about `i`.
pub fn gauge_fix(images: &[Su2Element], meridian: usize, second: Option<usize>) -> (Vec<Su2Element>, Option<usize>) {
    let (g, second) = gauge_element(images, meridian, second);
    (images.iter().map(|&x| g * x * g.inverse()).collect(), second)
}

/// The conjugating element used by [`gauge_fix`].
pub fn gauge_element(images: &[Su2Element], meridian: usize, second: Option<usize>) -> (Su2Element, Option<usize>) {
    let axis = images[meridian].vector_part();
    let g = rotate_to_i(axis.scale(1.0 / axis.norm()));
    let out: Vec<Su2Element> = images.iter().map(|&x| g * x * g.inverse()).collect();
    let off_axis = |x: &Su2Element| {
        let v = x.vector_part();
        (v.j * v.j + v.k * v.k).sqrt() > 1e-8
    };
    let second = second.filter(|&s| off_axis(&out[s])).or_else(|| out.iter().position(off_axis));
    match second {
        Some(s) => {
            let v = out[s].vector_part();
            let phi = v.k.atan2(v.j);
            let h = Su2Element::from_axis_angle(-phi / 2.0, Su2Vector::new(1.0, 0.0, 0.0));
            (h * g, second)
        }
        None => (g, None),
    }
}

fn quat(q: [f64; 4]) -> Su2Element {
    Su2Element { w: q[0], x: q[1], y: q[2], z: q[3] }
}

/// Relator residuals and their Jacobian in the axis coordinates, followed by
/// the unit-length constraints.
fn system(p: &GroupPresentation, theta: f64, axes: &[Su2Vector]) -> (DVector<f64>, DMatrix<f64>) {
    let n = axes.len();
    let m = p.num_relators();
    let (s, c) = theta.sin_cos();
    let elem = |j: usize, inv: bool| {
        let v = if inv { -axes[j] } else { axes[j] };
        quat([c, s * v.i, s * v.j, s * v.k])
    };
    let mut f = DVector::zeros(4 * m + n);
    let mut jac = DMatrix::zeros(4 * m + n, 3 * n);
    for (r, rel) in p.relators.iter().enumerate() {
        let letters = rel.letters();
        let qs: Vec<Su2Element> = letters.iter().map(|l| elem(l.generator, l.inverse)).collect();
        let mut prefix = vec![Su2Element::IDENTITY; qs.len() + 1];
        for k in 0..qs.len() {
            prefix[k + 1] = prefix[k].raw_mul(qs[k]);
        }
        let mut suffix = vec![Su2Element::IDENTITY; qs.len() + 1];
        for k in (0..qs.len()).rev() {
            suffix[k] = qs[k].raw_mul(suffix[k + 1]);
        }
        let total = prefix[qs.len()].to_array();
        for a in 0..4 {
            f[4 * r + a] = total[a] - if a == 0 { 1.0 } else { 0.0 };
        }
        for (k, l) in letters.iter().enumerate() {
            let sign = if l.inverse { -s } else { s };
            for b in 0..3 {
                let mut dq = [0.0; 4];
                dq[b + 1] = sign;
                let d = prefix[k].raw_mul(quat(dq)).raw_mul(suffix[k + 1]).to_array();
                for a in 0..4 {
                    jac[(4 * r + a, 3 * l.generator + b)] += d[a];
                }
            }
        }
    }
    for (j, v) in axes.iter().enumerate() {
        f[4 * m + j] = v.norm() * v.norm() - 1.0;
        for (b, x) in v.to_array().iter().enumerate() {
            jac[(4 * m + j, 3 * j + b)] = 2.0 * x;
        }
    }
    (f, jac)
}

fn unit_axes(axes: &[Su2Vector]) -> Vec<Su2Vector> {
    axes.iter().map(|v| v.scale(1.0 / v.norm())).collect()
}

/// Levenberg–Marquardt on the axis coordinates.
fn refine(p: &GroupPresentation, theta: f64, start: &[Su2Vector]) -> Option<Vec<Su2Vector>> {
    let mut axes = unit_axes(start);
    let (mut f, mut jac) = system(p, theta, &axes);
    let mut lambda = 1e-3;
    for _ in 0..400 {
        if f.amax() < 1e-14 {
            break;
        }
        let jt = jac.transpose();
        let mut a = &jt * &jac;
        for k in 0..a.nrows() {
            a[(k, k)] += lambda * (1.0 + a[(k, k)]);
        }
        let rhs = -(&jt * &f);
        let step = a.cholesky()?.solve(&rhs);
        let trial: Vec<Su2Vector> =
            axes.iter().enumerate().map(|(j, v)| *v + Su2Vector::new(step[3 * j], step[3 * j + 1], step[3 * j + 2])).collect();
        let (ft, jt2) = system(p, theta, &trial);
        if ft.norm() < f.norm() {
            axes = trial;
            f = ft;
            jac = jt2;
            lambda = (lambda / 5.0).max(1e-15);
        } else {
            lambda *= 4.0;
            if lambda > 1e10 {
                break;
            }
        }
    }
    let axes = unit_axes(&axes);
    let images = images_from_axes(theta, &axes);
    (relator_residual(p, &images).1 < SOLVE_TOL).then_some(axes)
}

fn images_from_axes(theta: f64, axes: &[Su2Vector]) -> Vec<Su2Element> {
    axes.iter().map(|&v| Su2Element::from_axis_angle(theta, v)).collect()
}

fn axes_from_images(images: &[Su2Element]) -> Vec<Su2Vector> {
    images.iter().map(|g| { let v = g.vector_part(); v.scale(1.0 / v.norm()) }).collect()
}

fn meridian_generator(meridian: &Word) -> Result<usize, RepError> {
    match meridian.letters() {
        [l] => Ok(l.generator),
        _ => Err(RepError::UnsupportedMeridian),
    }
}

/// The abelian representation sending every generator to `cos θ + sin θ · i`.
pub fn abelian_representation(name: &str, p: &GroupPresentation, theta: f64) -> Representation {
    let images = vec![Su2Element::from_axis_angle(theta, Su2Vector::new(1.0, 0.0, 0.0)); p.num_generators()];
    let mut rep = Representation::new(name, p, theta, images);
    rep.gauge_fixed = true;
    rep
}

fn random_axis<R: Rng>(rng: &mut R) -> Su2Vector {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    Su2Vector::new(r * phi.cos(), r * phi.sin(), z)
}

/// Irreducible representations with meridian angle `θ`, gauge-fixed and
/// merged by character.
pub fn solve_representations(
    name: &str,
    p: &GroupPresentation,
    meridian: &Word,
    theta: f64,
    num_starts: usize,
    seed: u64,
) -> Result<Vec<Representation>, RepError> {
    let mu = meridian_generator(meridian)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<Representation> = Vec::new();
    let mut converged = false;
    for _ in 0..num_starts {
        let start: Vec<Su2Vector> = (0..p.num_generators()).map(|_| random_axis(&mut rng)).collect();
        let Some(axes) = refine(p, theta, &start) else { continue };
        converged = true;
        let images = images_from_axes(theta, &axes);
        if !is_irreducible_images(&images) {
            continue;
        }
        let (images, second) = gauge_fix(&images, mu, None);
        let mut rep = Representation::new(name, p, theta, images);
        rep.gauge_fixed = true;
        rep.gauge_generator = second;
        if found.iter().all(|f| character_distance(&f.images, &rep.images) >= CHARACTER_TOL) {
            found.push(rep);
        }
    }
    match (found.is_empty(), converged) {
        (false, _) => Ok(found),
        (true, true) => Err(RepError::ReducibleOnly),
        (true, false) => Err(RepError::NoSolution),
    }
}

/// Re-solves at a nearby meridian angle from `base` and fixes the same gauge.
pub fn continue_to(
    p: &GroupPresentation,
    meridian: &Word,
    base: &Representation,
    theta: f64,
) -> Result<Representation, RepError> {
    let mu = meridian_generator(meridian)?;
    let axes = refine(p, theta, &axes_from_images(&base.images)).ok_or(RepError::NoSolution)?;
    let (images, second) = gauge_fix(&images_from_axes(theta, &axes), mu, base.gauge_generator);
    let mut rep = Representation::new(&base.presentation, p, theta, images);
    rep.gauge_fixed = true;
    rep.gauge_generator = second;
    Ok(rep)
}

/// Follows the branch through `base` to `theta` in steps of [`CONTINUATION_STEP`].
pub fn continue_along(
    p: &GroupPresentation,
    meridian: &Word,
    base: &Representation,
    theta: f64,
) -> Result<Representation, RepError> {
    let steps = ((theta - base.theta).abs() / CONTINUATION_STEP).ceil().max(1.0) as usize;
    let mut rep = base.clone();
    for k in 1..=steps {
        let t = base.theta + (theta - base.theta) * k as f64 / steps as f64;
        rep = continue_to(p, meridian, &rep, t)?;
    }
    Ok(rep)
}

/// Cohomology dimensions of `su(2)_ρ` on the presentation complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regularity {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        self.h1 == 1
    }
}

/// Twisted cohomology dimensions in degrees 0, 1, 2.
pub fn cohomology_dims(p: &GroupPresentation, images: &[Su2Element]) -> Result<[usize; 3], RepError> {
    let c = twisted_complex(p, &AdjointReal { images })?;
    let b = homology_basis(&c, RANK_TOL)?.betti();
    Ok([b[2], b[1], b[0]])
}

/// Regularity test; regular representations also have `dim H² = 1`.
pub fn regularity(p: &GroupPresentation, rep: &Representation) -> Result<Regularity, RepError> {
    if !is_irreducible(rep) {
        return Err(RepError::NotIrreducible);
    }
    let [h0, h1, h2] = cohomology_dims(p, &rep.images)?;
    let r = Regularity { h0, h1, h2 };
    if r.is_regular() && h2 != 1 {
        return Err(RepError::NotRegular { h1, h2 });
    }
    Ok(r)
}

pub fn is_regular(p: &GroupPresentation, rep: &Representation) -> Result<bool, RepError> {
    Ok(regularity(p, rep)?.is_regular())
}

/// A cocycle representing a tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub derivation: Derivation,
    /// The degree-1 cochain, three entries per generator.
    pub cochain: Vec<f64>,
}

impl TangentVector {
    pub fn from_cochain(cochain: Vec<f64>) -> Self {
        Self { derivation: Derivation::from_cochain(&cochain), cochain }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_cochain(self.cochain.iter().map(|x| s * x).collect())
    }

    pub fn norm(&self) -> f64 {
        self.cochain.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Orthogonal projection onto the degree-1 cocycles.
pub fn project_to_cocycles(p: &GroupPresentation, images: &[Su2Element], z: &[f64]) -> Result<Vec<f64>, RepError> {
    let c = twisted_complex(p, &AdjointReal { images })?;
    let kernel = f64::nullspace(&c.d(1), RANK_TOL)?;
    let mut out = vec![0.0; z.len()];
    for v in &kernel {
        let dot: f64 = v.iter().zip(z).map(|(a, b)| a * b).sum();
        for (o, x) in out.iter_mut().zip(v) {
            *o += dot * x;
        }
    }
    Ok(out)
}

/// Cocycle `g ↦ (d/dt) ρ_t(g) ρ(g)⁻¹` at `t = 0`, by Richardson-extrapolated
/// central differences with step `h`.
pub fn tangent_to_cocycle(
    p: &GroupPresentation,
    path: impl Fn(f64) -> Result<Vec<Su2Element>, RepError>,
    h: f64,
) -> Result<TangentVector, RepError> {
    let rho = path(0.0)?;
    let diff = |step: f64| -> Result<Vec<[f64; 4]>, RepError> {
        let (plus, minus) = (path(step)?, path(-step)?);
        for imgs in [&plus, &minus] {
            let residual = relator_residual(p, imgs).1;
            if residual > 1e-8 {
                return Err(RepError::NotAPath { residual });
            }
        }
        Ok(plus
            .iter()
            .zip(&minus)
            .map(|(a, b)| {
                let (a, b) = (a.to_array(), b.to_array());
                [0, 1, 2, 3].map(|k| (a[k] - b[k]) / (2.0 * step))
            })
            .collect())
    };
    let (d1, d2) = (diff(h)?, diff(h / 2.0)?);
    let mut cochain = Vec::with_capacity(3 * rho.len());
    for j in 0..rho.len() {
        let d = quat([0, 1, 2, 3].map(|k| (4.0 * d2[j][k] - d1[j][k]) / 3.0));
        cochain.extend(d.raw_mul(rho[j].inverse()).vector_part().to_array());
    }
    let scale = cochain.iter().map(|x: &f64| x.abs()).fold(1.0, f64::max);
    let z = Derivation::from_cochain(&cochain);
    let residual = p.relators.iter().map(|r| z.evaluate(r, &rho).norm()).fold(0.0, f64::max);
    if residual > 1e-6 * scale {
        return Err(RepError::NotAPath { residual });
    }
    Ok(TangentVector::from_cochain(project_to_cocycles(p, &rho, &cochain)?))
}

/// The tangent cocycle of the branch through `rep`, parametrized by the meridian angle.
pub fn theta_tangent(p: &GroupPresentation, meridian: &Word, rep: &Representation) -> Result<TangentVector, RepError> {
    let mu = meridian_generator(meridian)?;
    let (g, second) =
        if rep.gauge_fixed { (Su2Element::IDENTITY, rep.gauge_generator) } else { gauge_element(&rep.images, mu, None) };
    let mut fixed = rep.conjugated(g);
    fixed.gauge_fixed = true;
    fixed.gauge_generator = second;
    let v = tangent_to_cocycle(
        p,
        |dt| {
            if dt == 0.0 {
                Ok(fixed.images.clone())
            } else {
                continue_to(p, meridian, &fixed, fixed.theta + dt).map(|r| r.images)
            }
        },
        TANGENT_STEP,
    )?;
    let gi = g.inverse();
    Ok(TangentVector::from_cochain(v.derivation.values.iter().flat_map(|z| gi.act(*z).to_array()).collect()))
}

/// `x` with `ψ(τ_*(g)) = x ψ(g) x⁻¹` on the free generators of the sphere group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intertwiner {
    pub x: Su2Element,
    pub residual: f64,
}

impl Intertwiner {
    /// The other solution `−x`.
    pub fn negated(&self) -> Self {
        Self { x: -self.x, residual: self.residual }
    }
}

/// Columns of `q ↦ a q − q b` in the basis `1, i, j, k`.
fn sylvester(a: Su2Element, b: Su2Element) -> [[f64; 4]; 4] {
    let basis = [Su2Element::IDENTITY, Su2Element::i(), Su2Element::j(), Su2Element::k()];
    basis.map(|e| {
        let l = a.raw_mul(e).to_array();
        let r = e.raw_mul(b).to_array();
        [0, 1, 2, 3].map(|k| l[k] - r[k])
    })
}

fn intertwiner_residual(psi: &[Su2Element; 4], m: MutationMove, x: Su2Element) -> f64 {
    let images = m.images();
    (0..3)
        .map(|g| evaluate_word(&images[g], psi).distance(x * psi[g] * x.inverse()))
        .fold(0.0, f64::max)
}

/// Solves the intertwiner equation for the sphere restriction `psi`.
pub fn intertwiner(psi: &[Su2Element; 4], m: MutationMove) -> Result<Intertwiner, RepError> {
    if !is_irreducible_images(psi) {
        return Err(RepError::Reducible);
    }
    let images = m.images();
    let mut a = DMatrix::zeros(12, 4);
    for g in 0..3 {
        let cols = sylvester(evaluate_word(&images[g], psi), psi[g]);
        for (c, col) in cols.iter().enumerate() {
            for r in 0..4 {
                a[(4 * g + r, c)] = col[r];
            }
        }
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let k = (0..4).min_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y])).expect("four values");
    let mut q = [0, 1, 2, 3].map(|c| vt[(k, c)]);
    if q.iter().find(|c| c.abs() > 1e-12).is_some_and(|&c| c < 0.0) {
        q = q.map(|c| -c);
    }
    let x = Su2Element::new(q[0], q[1], q[2], q[3]);
    let residual = intertwiner_residual(psi, m, x);
    if residual > MUTATION_TOL {
        return Err(RepError::NoIntertwiner { residual });
    }
    Ok(Intertwiner { x, residual })
}

/// `ρ^τ`: piece-1 images conjugated by `x⁻¹`, piece-2 images unchanged,
/// checked against the reglued amalgam.
pub fn mutant_rep(
    rep: &Representation,
    dec: &TangleDecomposition,
    m: MutationMove,
    x: &Intertwiner,
    name: &str,
) -> Result<Representation, RepError> {
    let n1 = dec.n1();
    let xi = x.x.inverse();
    let images: Vec<Su2Element> =
        rep.images.iter().enumerate().map(|(j, &g)| if j < n1 { xi * g * x.x } else { g }).collect();
    let target = dec.amalgam(m);
    let out = Representation::new(name, &target, rep.theta, images);
    if out.residual > MUTATION_TOL {
        return Err(RepError::GluingMismatch { residual: out.residual });
    }
    Ok(out)
}

/// `δ⁰` restricted to a block of generators, as a map from `su(2)`.
fn coboundary_block(images: &[Su2Element], range: std::ops::Range<usize>, n: usize) -> Mat<f64> {
    let mut m = Mat::zeros(3 * n, 3);
    for j in range {
        for b in 0..3 {
            let v = Derivation::inner(Su2Vector::basis(b), &images[j..j + 1]).values[0].to_array();
            for a in 0..3 {
                m[(3 * j + a, b)] = v[a];
            }
        }
    }
    m
}

/// `τ♯` on cocycles: `Ad_{x⁻¹}` on the piece-1 part, identity on the piece-2
/// part, corrected by piecewise coboundaries into a cocycle for `ρ^τ`.
pub fn tau_sharp(
    v: &TangentVector,
    rep_tau: &Representation,
    dec: &TangleDecomposition,
    m: MutationMove,
    x: &Intertwiner,
) -> Result<TangentVector, RepError> {
    let n1 = dec.n1();
    let n = dec.num_generators();
    let xi = x.x.inverse();
    let mut w: Vec<f64> = Vec::with_capacity(3 * n);
    for (j, z) in v.derivation.values.iter().enumerate() {
        let z = if j < n1 { xi.act(*z) } else { *z };
        w.extend(z.to_array());
    }
    let target = dec.amalgam(m);
    let c = twisted_complex(&target, &AdjointReal { images: &rep_tau.images })?;
    let d1 = c.d(1);
    let corr = Mat::hstack(&[
        &coboundary_block(&rep_tau.images, 0..n1, n),
        &coboundary_block(&rep_tau.images, n1..n, n),
    ]);
    let rhs: Vec<f64> = d1.mul_vec(&w).iter().map(|x| -x).collect();
    let a = d1.mul(&corr);
    let scale = w.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let u = crate::chainlib::least_squares(&a, &rhs);
    let out: Vec<f64> = w.iter().zip(corr.mul_vec(&u)).map(|(a, b)| a + b).collect();
    let residual = d1.mul_vec(&out).iter().map(|x| x.abs()).fold(0.0, f64::max);
    if residual > MUTATION_TOL * scale {
        return Err(RepError::NoTransport { residual });
    }
    Ok(TangentVector::from_cochain(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgroup::load_knot;

    fn trefoil() -> (GroupPresentation, Word) {
        let k = load_knot("trefoil").unwrap();
        (k.presentation, k.peripheral.meridian)
    }

    #[test]
    fn abelian_representation_always_solves() {
        let (p, _) = trefoil();
        let rep = abelian_representation("trefoil", &p, 0.7);
        assert!(rep.residual < 1e-15);
        assert!(!is_irreducible(&rep));
    }

    #[test]
    fn trefoil_has_an_irreducible_solution() {
        let (p, mu) = trefoil();
        let reps = solve_representations("trefoil", &p, &mu, std::f64::consts::FRAC_PI_2, 40, 1).unwrap();
        assert!(!reps.is_empty());
        for r in &reps {
            assert!(r.residual < SOLVE_TOL);
            assert!(is_irreducible(r));
            let m = mu.letters()[0].generator;
            let v = r.images[m].vector_part();
            assert!((v.i - 1.0).abs() < 1e-12 && v.j.abs() < 1e-12 && v.k.abs() < 1e-12);
            let s = r.images[r.gauge_generator.unwrap()].vector_part();
            assert!(s.k.abs() < 1e-12 && s.j > 0.0);
        }
    }

    #[test]
    fn brute_force_grid_finds_the_same_trefoil_character() {
        let (p, mu) = trefoil();
        let theta = std::f64::consts::FRAC_PI_2;
        let reps = solve_representations("trefoil", &p, &mu, theta, 40, 3).unwrap();
        // scan the angle between the first two axes, then propagate along the relators
        let x = Su2Element::from_axis_angle(theta, Su2Vector::new(1.0, 0.0, 0.0));
        let mut best = (f64::INFINITY, 0.0);
        for k in 1..20000 {
            let phi = std::f64::consts::PI * k as f64 / 20000.0;
            let y = Su2Element::from_axis_angle(theta, Su2Vector::new(phi.cos(), phi.sin(), 0.0));
            let d = (x * y * x).distance(y * x * y);
            if d < best.0 {
                best = (d, phi);
            }
        }
        let grid_trace = (Su2Element::from_axis_angle(theta, Su2Vector::new(1.0, 0.0, 0.0))
            * Su2Element::from_axis_angle(theta, Su2Vector::new(best.1.cos(), best.1.sin(), 0.0)))
        .trace();
        let solved: Vec<f64> = reps.iter().map(|r| (r.images[0] * r.images[1]).trace()).collect();
        assert!(solved.iter().any(|t| (t - grid_trace).abs() < 1e-3), "{solved:?} vs {grid_trace}");
    }

    #[test]
    fn one_generator_group_has_only_abelian_solutions() {
        let p = GroupPresentation::with_prefix("x", 1, vec![]);
        let e = solve_representations("unknot", &p, &Word::letter(0, 1), 1.0, 5, 0).unwrap_err();
        assert_eq!(e, RepError::ReducibleOnly);
    }

    #[test]
    fn irreducibility_of_basic_pairs() {
        assert!(is_irreducible_images(&[Su2Element::i(), Su2Element::j()]));
        let a = Su2Element::from_axis_angle(0.3, Su2Vector::new(1.0, 0.0, 0.0));
        assert!(!is_irreducible_images(&[a, a * a, Su2Element::i()]));
    }

    #[test]
    fn trefoil_solution_is_regular_with_dim_h2_one() {
        let (p, mu) = trefoil();
        let reps = solve_representations("trefoil", &p, &mu, 1.2, 40, 5).unwrap();
        let r = regularity(&p, &reps[0]).unwrap();
        assert_eq!((r.h0, r.h1, r.h2), (0, 1, 1));
    }

    #[test]
    fn constant_path_gives_zero_cocycle() {
        let (p, mu) = trefoil();
        let rep = &solve_representations("trefoil", &p, &mu, 1.0, 40, 2).unwrap()[0];
        let v = tangent_to_cocycle(&p, |_| Ok(rep.images.clone()), 1e-4).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn conjugation_path_is_inner() {
        let (p, mu) = trefoil();
        let rep = &solve_representations("trefoil", &p, &mu, 1.0, 40, 2).unwrap()[0];
        let a = Su2Vector::new(0.2, -0.4, 0.9);
        let path = |t: f64| {
            let g = Su2Element::from_axis_angle(t * a.norm(), a.scale(1.0 / a.norm()));
            Ok(rep.images.iter().map(|&x| g * x * g.inverse()).collect())
        };
        let v = tangent_to_cocycle(&p, path, 1e-4).unwrap();
        // d/dt exp(ta) ρ exp(−ta) ρ⁻¹ = a − Ad_ρ a, with exp(ta) = cos(t|a|) + sin(t|a|) a/|a|
        let inner = Derivation::inner(a, &rep.images).to_cochain();
        for (x, y) in v.cochain.iter().zip(&inner) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn theta_tangent_is_a_cocycle_and_not_a_coboundary() {
        let (p, mu) = trefoil();
        let rep = &solve_representations("trefoil", &p, &mu, 1.0, 40, 2).unwrap()[0];
        let v = theta_tangent(&p, &mu, rep).unwrap();
        let rule = p.relators.iter().map(|r| v.derivation.evaluate(r, &rep.images).norm()).fold(0.0, f64::max);
        assert!(rule < 1e-6);
        let c = twisted_complex(&p, &AdjointReal { images: &rep.images }).unwrap();
        let mut cols = c.d(2).columns();
        let base = f64::rank(&Mat::from_columns(v.cochain.len(), &cols), RANK_TOL).unwrap();
        cols.push(v.cochain.clone());
        assert_eq!(f64::rank(&Mat::from_columns(v.cochain.len(), &cols), RANK_TOL).unwrap(), base + 1);
    }

    #[test]
    fn identity_move_gives_trivial_intertwiner() {
        let psi = [Su2Element::i(), Su2Element::j(), Su2Element::k(), Su2Element::IDENTITY];
        let x = intertwiner(&psi, MutationMove::Identity).unwrap();
        assert!(x.x.distance(Su2Element::IDENTITY) < 1e-12);
    }

    #[test]
    fn reducible_restriction_is_rejected() {
        let a = Su2Element::from_axis_angle(0.4, Su2Vector::new(0.0, 0.0, 1.0));
        assert_eq!(intertwiner(&[a; 4], MutationMove::AbCd).unwrap_err(), RepError::Reducible);
    }

    #[test]
    fn representation_json_round_trip() {
        let (p, _) = trefoil();
        let rep = abelian_representation("trefoil", &p, 0.3);
        assert_eq!(Representation::from_json(&rep.to_json()).unwrap(), rep);
        assert!(matches!(Representation::from_json("{"), Err(RepError::Json(_))));
    }

    #[test]
    fn gauge_fix_normalizes_axes() {
        let g = Su2Element::new(0.3, -0.2, 0.8, 0.1);
        let images = vec![
            g * Su2Element::from_axis_angle(0.5, Su2Vector::new(0.0, 0.0, 1.0)) * g.inverse(),
            g * Su2Element::from_axis_angle(0.5, Su2Vector::new(0.6, 0.0, -0.8)) * g.inverse(),
        ];
        let (out, second) = gauge_fix(&images, 0, None);
        assert_eq!(second, Some(1));
        let (a, b) = (out[0].vector_part(), out[1].vector_part());
        assert!(a.j.abs() < 1e-12 && a.k.abs() < 1e-12 && a.i > 0.0);
        assert!(b.k.abs() < 1e-12 && b.j > 0.0);
        assert!(character_distance(&images, &out) < 1e-12);
    }
}
