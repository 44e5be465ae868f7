//! Mayer–Vietoris bookkeeping for a knot cut along a Conway sphere, the
//! twisted and sign parts of the torsion under mutation, and the end-to-end
//! comparison of torsion forms.
//!
//! The splitting is realized by a cylinder model `W = W₁′ ∪_V W₂′`. It has
//! vertices `v₁, p, v₂`, the piece loops at `v₁` and `v₂`, tree edges
//! `t₁: v₁ → p` and `t₂: p → v₂`, three loops `γ′` at `p` labelled `w₂(γ)`,
//! and the piece relator cells. For each `γ ∈ {a, b, c}` it also has cells
//! `Q₁ = t₁ γ′ t₁⁻¹ T₁(γ)⁻¹` and `Q₂ = t₂ w₂(γ) t₂⁻¹ γ′⁻¹`. Then
//! `W₁′ = W₁ ∪ {p, t₁, γ′, Q₁}`, `W₂′ = W₂ ∪ {p, t₂, γ′, Q₂}` and
//! `V = {p, γ′}` is a wedge of three circles carrying `π₁(F)`. Collapsing
//! `t₁, t₂` and the `Q₂` cells recovers the amalgamated presentation complex.

pub mod report;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chainlib::{
    homology_basis, least_squares, mv_multiplicativity, BasedComplex, BasisChoice, ChainError, HomologyBasisSet, Mat,
    Scalar, ShortExactSequence, RANK_TOL,
};
use crate::fgroup::{
    classify_mutation, CellComplex2, DecompositionError, Edge, Face, GroupPresentation, MutationMove, MutationSign,
    TangleDecomposition, Word,
};
use crate::repspace::{
    character_distance, intertwiner, is_f_irreducible, mutant_rep, regularity, sphere_restriction, tau_sharp,
    theta_tangent, Intertwiner, RepError, Representation,
};
use crate::su2::{Su2Element, Su2Vector};
use crate::torsionform::{KnotExterior, TorsionFormError};
use crate::twisted::{abelianization, cell_cochain_complex, twisted_complex, AdjointReal, Derivation, TwistedError};

/// Residual allowed in a Mayer–Vietoris identity and in exactness checks.
pub const MV_TOL: f64 = 1e-8;
/// Relative deviation allowed in torsion ratios.
pub const RATIO_TOL: f64 = 1e-6;
/// Allowed trace deviation after mutating twice.
pub const DOUBLE_MUTATION_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MutError {
    #[error("{what} has dimensions {got:?}, expected {expected:?}")]
    DimensionMismatch { what: &'static str, got: Vec<usize>, expected: Vec<usize> },
    #[error("found {found} usable representations, {requested} requested")]
    InsufficientSamples { requested: usize, found: usize },
    #[error("`{partner}` is not the mutant of `{knot}` along {mv}")]
    PartnerMismatch { knot: String, partner: String, mv: MutationMove },
    #[error("{0} is not a positive mutation")]
    NotPositive(MutationMove),
    #[error("the representation is not F-irreducible")]
    NotFIrreducible,
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    TorsionForm(#[from] TorsionFormError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("{0}")]
    Knot(String),
}

/// The cylinder model of a decomposition reglued by a move.
#[derive(Debug, Clone)]
pub struct CylinderModel {
    pub whole: CellComplex2,
    /// `W₁′` and `W₂′`.
    pub pieces: [CellComplex2; 2],
    /// `V`, a wedge of three circles.
    pub sphere: CellComplex2,
    /// Cells of `W₁′` and `W₂′` inside `W`, indexed by dimension.
    pub piece_cells: [[Vec<usize>; 3]; 2],
    /// Cells of `V` inside `W₁′` and inside `W₂′`, indexed by dimension.
    pub sphere_in_piece: [[Vec<usize>; 3]; 2],
    /// `T₁(γ)` in piece-1 indices.
    pub t1: [Word; 3],
    /// `w₂(γ)` in amalgam indices.
    pub w2: [Word; 3],
    n1: usize,
    m1: usize,
    m2: usize,
}

fn subcomplex(c: &CellComplex2, cells: &[Vec<usize>; 3]) -> CellComplex2 {
    let pos = |v: &[usize], x: usize| v.iter().position(|&y| y == x).expect("cell belongs to the subcomplex");
    let edges = cells[1]
        .iter()
        .map(|&e| {
            let edge = &c.edges[e];
            Edge { tail: pos(&cells[0], edge.tail), head: pos(&cells[0], edge.head), label: edge.label.clone() }
        })
        .collect();
    let faces = cells[2]
        .iter()
        .map(|&f| {
            let face = &c.faces[f];
            Face { base: pos(&cells[0], face.base), boundary: face.boundary.iter().map(|&(e, s)| (pos(&cells[1], e), s)).collect() }
        })
        .collect();
    CellComplex2 { num_vertices: cells[0].len(), edges, faces }
}

/// Builds the cylinder model of `dec` reglued by `m`.
pub fn cylinder_model(dec: &TangleDecomposition, m: MutationMove) -> CylinderModel {
    let (n1, n) = (dec.n1(), dec.num_generators());
    let (m1, m2) = (dec.piece1.num_relators(), dec.piece2.num_relators());
    let t1full = dec.sphere_images1(m);
    let w2full = dec.sphere_words2();
    let t1: [Word; 3] = std::array::from_fn(|g| t1full[g].clone());
    let w2: [Word; 3] = std::array::from_fn(|g| w2full[g].clone());
    let (v1, p, v2) = (0, 1, 2);
    let (e_t1, e_t2, e_g) = (n, n + 1, n + 2);

    let mut edges: Vec<Edge> = (0..n)
        .map(|j| {
            let at = if j < n1 { v1 } else { v2 };
            Edge { tail: at, head: at, label: Word::letter(j, 1) }
        })
        .collect();
    edges.push(Edge { tail: v1, head: p, label: Word::identity() });
    edges.push(Edge { tail: p, head: v2, label: Word::identity() });
    edges.extend(w2.iter().map(|w| Edge { tail: p, head: p, label: w.clone() }));

    let letters = |w: &Word| w.letters().iter().map(|l| (l.generator, l.exponent())).collect::<Vec<_>>();
    let mut faces: Vec<Face> = dec.piece1.relators.iter().map(|r| Face { base: v1, boundary: letters(r) }).collect();
    faces.extend(dec.piece2.relators.iter().map(|r| Face { base: v2, boundary: letters(&r.shift(n1)) }));
    for g in 0..3 {
        let mut b = vec![(e_t1, 1), (e_g + g, 1), (e_t1, -1)];
        b.extend(letters(&t1[g].inverse()));
        faces.push(Face { base: v1, boundary: b });
    }
    for g in 0..3 {
        let mut b = vec![(e_t2, 1)];
        b.extend(letters(&w2[g]));
        b.extend([(e_t2, -1), (e_g + g, -1)]);
        faces.push(Face { base: p, boundary: b });
    }
    let whole = CellComplex2 { num_vertices: 3, edges, faces };

    let q1 = m1 + m2;
    let piece_cells = [
        [
            vec![v1, p],
            (0..n1).chain([e_t1, e_g, e_g + 1, e_g + 2]).collect(),
            (0..m1).chain(q1..q1 + 3).collect(),
        ],
        [
            vec![p, v2],
            (n1..n).chain([e_t2, e_g, e_g + 1, e_g + 2]).collect(),
            (m1..m1 + m2).chain(q1 + 3..q1 + 6).collect(),
        ],
    ];
    let sphere_cells = [vec![p], vec![e_g, e_g + 1, e_g + 2], vec![]];
    let pieces = [subcomplex(&whole, &piece_cells[0]), subcomplex(&whole, &piece_cells[1])];
    let sphere = subcomplex(&whole, &sphere_cells);
    let locate = |outer: &[Vec<usize>; 3]| -> [Vec<usize>; 3] {
        std::array::from_fn(|d| sphere_cells[d].iter().map(|x| outer[d].iter().position(|y| y == x).unwrap()).collect())
    };
    let sphere_in_piece = [locate(&piece_cells[0]), locate(&piece_cells[1])];
    CylinderModel { whole, pieces, sphere, piece_cells, sphere_in_piece, t1, w2, n1, m1, m2 }
}

/// Rows selecting the `su(2)` blocks of `cells` out of `total` cells.
fn selection(cells: &[usize], total: usize) -> Mat<f64> {
    let mut s = Mat::zeros(3 * cells.len(), 3 * total);
    for (k, &c) in cells.iter().enumerate() {
        for a in 0..3 {
            s[(3 * k + a, 3 * c + a)] = 1.0;
        }
    }
    s
}

fn stack(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
    Mat::from_fn(a.rows() + b.rows(), a.cols(), |r, c| if r < a.rows() { a[(r, c)] } else { b[(r - a.rows(), c)] })
}

fn side_by_side(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
    Mat::from_fn(a.rows(), a.cols() + b.cols(), |r, c| if c < a.cols() { a[(r, c)] } else { b[(r, c - a.cols())] })
}

impl CylinderModel {
    /// The cochain sequence `0 → C*(W) → C*(W₁′) ⊕ C*(W₂′) → C*(V) → 0`
    /// with restriction followed by `(φ₁, φ₂) ↦ φ₁|V − φ₂|V`.
    pub fn cochain_sequence(&self, images: &[Su2Element]) -> Result<ShortExactSequence<f64>, MutError> {
        let coeffs = AdjointReal { images };
        let sub = cell_cochain_complex(&self.whole, &coeffs)?;
        let p0 = cell_cochain_complex(&self.pieces[0], &coeffs)?;
        let p1 = cell_cochain_complex(&self.pieces[1], &coeffs)?;
        let mid = p0.direct_sum(&p1)?;
        let quo = cell_cochain_complex(&self.sphere, &coeffs)?;
        let whole_ranks = self.whole.ranks();
        let piece_ranks = [self.pieces[0].ranks(), self.pieces[1].ranks()];
        let mut inc = Vec::new();
        let mut proj = Vec::new();
        for i in 0..3 {
            let d = 2 - i;
            inc.push(stack(
                &selection(&self.piece_cells[0][d], whole_ranks[d]),
                &selection(&self.piece_cells[1][d], whole_ranks[d]),
            ));
            let a = selection(&self.sphere_in_piece[0][d], piece_ranks[0][d]);
            let b = selection(&self.sphere_in_piece[1][d], piece_ranks[1][d]).map(|x| -*x);
            proj.push(side_by_side(&a, &b));
        }
        Ok(ShortExactSequence::new(sub, mid, quo, inc, proj)?)
    }

    /// An amalgam 1-cochain on `W`: zero on the tree edges, `z(w₂(γ))` on `γ′`.
    pub fn amalgam_1cochain(&self, z: &[f64], images: &[Su2Element]) -> Vec<f64> {
        let d = Derivation::from_cochain(z);
        let mut out = z.to_vec();
        out.extend([0.0; 6]);
        for w in &self.w2 {
            out.extend(d.evaluate(w, images).to_array());
        }
        out
    }

    /// An amalgam 2-cochain on `W`: the identification values move to `Q₁`.
    pub fn amalgam_2cochain(&self, phi: &[f64]) -> Vec<f64> {
        let k = self.m1 + self.m2;
        let mut out = phi[..3 * k].to_vec();
        out.extend_from_slice(&phi[3 * k..3 * k + 9]);
        out.extend([0.0; 9]);
        out
    }

    /// A piece 1-cochain on `W₁′` or `W₂′`, given in piece-local indices.
    pub fn piece_1cochain(&self, piece: usize, z: &[f64], piece_images: &[Su2Element]) -> Vec<f64> {
        let d = Derivation::from_cochain(z);
        let mut out = z.to_vec();
        out.extend([0.0; 3]);
        for g in 0..3 {
            let w = if piece == 0 { self.t1[g].clone() } else { unshift(&self.w2[g], self.n1) };
            out.extend(d.evaluate(&w, piece_images).to_array());
        }
        out
    }
}

fn unshift(w: &Word, offset: usize) -> Word {
    Word::from_pairs(&w.letters().iter().map(|l| (l.generator - offset, l.exponent())).collect::<Vec<_>>())
}

/// `Ad_g` applied to every `su(2)` block of a cochain.
pub fn act_on_blocks(z: &[f64], g: Su2Element) -> Vec<f64> {
    z.chunks(3).flat_map(|c| g.act(Su2Vector::new(c[0], c[1], c[2])).to_array()).collect()
}

/// Images of the generators of the sphere group `⟨a, b, c⟩` under `ρ`.
pub fn sphere_images(dec: &TangleDecomposition, images: &[Su2Element]) -> [Su2Element; 3] {
    let psi = crate::twisted::evaluate_word;
    let w2 = dec.sphere_words2();
    std::array::from_fn(|g| psi(&w2[g], images))
}

/// Cohomology bases `h_{M₁}`, `h_{M₂}` of the two pieces, in local indices.
pub fn piece_bases(dec: &TangleDecomposition, images: &[Su2Element]) -> Result<[Vec<Vec<f64>>; 2], MutError> {
    let n1 = dec.n1();
    let mut out: [Vec<Vec<f64>>; 2] = [Vec::new(), Vec::new()];
    for (i, (piece, imgs)) in [(&dec.piece1, &images[..n1]), (&dec.piece2, &images[n1..])].into_iter().enumerate() {
        let h = homology_basis(&twisted_complex(piece, &AdjointReal { images: imgs })?, RANK_TOL)?;
        let dims = vec![h.bases[2].len(), h.bases[1].len(), h.bases[0].len()];
        if dims != [0, 3, 0] {
            return Err(MutError::DimensionMismatch { what: "H*(M_i)", got: dims, expected: vec![0, 3, 0] });
        }
        out[i] = h.bases[1].clone();
    }
    Ok(out)
}

/// A basis `h_F` of `H¹(F)`.
pub fn sphere_basis(dec: &TangleDecomposition, images: &[Su2Element]) -> Result<Vec<Vec<f64>>, MutError> {
    let psi = sphere_images(dec, images);
    let h = homology_basis(&twisted_complex(&GroupPresentation::free(3), &AdjointReal { images: &psi })?, RANK_TOL)?;
    let dims: Vec<usize> = h.bases.iter().rev().map(|b| b.len()).collect();
    if dims != [0, 6, 0] {
        return Err(MutError::DimensionMismatch { what: "H*(F)", got: dims, expected: vec![0, 6, 0] });
    }
    Ok(h.bases[1].clone())
}

/// The cohomology classes entering one Mayer–Vietoris sequence.
#[derive(Debug, Clone)]
pub struct MvBases {
    /// `v`, a 1-cocycle of the amalgam.
    pub v: Vec<f64>,
    /// `h⁽²⁾`, a 2-cocycle of the amalgam.
    pub h2: Vec<f64>,
    /// `h_{M₁}`, `h_{M₂}` in piece-local indices.
    pub pieces: [Vec<Vec<f64>>; 2],
    pub sphere: Vec<Vec<f64>>,
}

/// The Mayer–Vietoris sequence of the cylinder splitting with its torsion data.
#[derive(Debug, Clone)]
pub struct MvSequence {
    /// The long exact sequence as an acyclic based complex.
    pub les: BasedComplex<f64>,
    pub tor_les: f64,
    /// `Tor(W)`, `Tor(W₁′ ⊕ W₂′)`, `Tor(V)`.
    pub tor_whole: f64,
    pub tor_pieces: f64,
    pub tor_sphere: f64,
    /// Relative residual of the multiplicativity identity.
    pub residual: f64,
    /// Largest entry of a composition of consecutive maps.
    pub exactness_defect: f64,
    /// The connecting map `H¹(F) → H²` in the chosen bases.
    pub boundary: Vec<f64>,
    /// `H¹(M₁) ⊕ H¹(M₂) → H¹(F)` in the chosen bases.
    pub sphere_map: Mat<f64>,
}

/// Builds and checks the Mayer–Vietoris sequence of `dec` reglued by `m`.
pub fn mv_sequence(
    dec: &TangleDecomposition,
    m: MutationMove,
    images: &[Su2Element],
    bases: &MvBases,
) -> Result<MvSequence, MutError> {
    let model = cylinder_model(dec, m);
    let ses = model.cochain_sequence(images)?;
    let n1 = dec.n1();
    let h_sub = HomologyBasisSet {
        bases: vec![vec![model.amalgam_2cochain(&bases.h2)], vec![model.amalgam_1cochain(&bases.v, images)], vec![]],
    };
    let d1 = ses.mid.dim(1);
    let first = 3 * model.pieces[0].edges.len();
    let mut mid1 = Vec::new();
    for (i, imgs) in [(0, &images[..n1]), (1, &images[n1..])] {
        for h in &bases.pieces[i] {
            let w = model.piece_1cochain(i, h, imgs);
            let mut full = vec![0.0; d1];
            let at = if i == 0 { 0 } else { first };
            full[at..at + w.len()].copy_from_slice(&w);
            mid1.push(full);
        }
    }
    let h_mid = HomologyBasisSet { bases: vec![vec![], mid1, vec![]] };
    let h_quo = HomologyBasisSet { bases: vec![vec![], bases.sphere.clone(), vec![]] };
    let check = mv_multiplicativity(&ses, &h_sub, &h_mid, &h_quo, BasisChoice::Pivoted)?;
    let les = check.les.clone();
    let dims: Vec<usize> = les.dims().iter().copied().filter(|&d| d > 0).collect();
    if dims != [1, 6, 6, 1] {
        return Err(MutError::DimensionMismatch { what: "Mayer–Vietoris sequence", got: dims, expected: vec![1, 6, 6, 1] });
    }
    let mut defect: f64 = 0.0;
    for i in 1..les.top_degree() {
        defect = defect.max(les.d(i).mul(&les.d(i + 1)).max_magnitude());
    }
    if defect > MV_TOL {
        return Err(MutError::DimensionMismatch { what: "exactness of the sequence", got: dims, expected: vec![1, 6, 6, 1] });
    }
    let boundary = les.d(3).row(0).to_vec();
    let sphere_map = les.d(4);
    Ok(MvSequence {
        tor_les: check.tor_les,
        tor_whole: check.tor_sub,
        tor_pieces: check.tor_mid,
        tor_sphere: check.tor_quo,
        residual: check.residual,
        exactness_defect: defect,
        boundary,
        sphere_map,
        les,
    })
}

/// Matrix of `y ↦ Ad_{x⁻¹}(y ∘ τ)` on `H¹(F)` in the basis `h_F`.
pub fn tau_star_matrix(
    psi: &[Su2Element; 3],
    m: MutationMove,
    x: &Intertwiner,
    h_f: &[Vec<f64>],
) -> Result<Mat<f64>, MutError> {
    let d = Word::from_pairs(&[(2, -1), (1, -1), (0, -1)]);
    let abc = [Word::letter(0, 1), Word::letter(1, 1), Word::letter(2, 1), d];
    let moved: Vec<Word> = m.images()[..3].iter().map(|w| w.substitute(&abc)).collect();
    let xi = x.x.inverse();
    let inner: Vec<Vec<f64>> = (0..3)
        .map(|b| Derivation::inner(Su2Vector::basis(b), psi).to_cochain())
        .collect();
    let mut cols: Vec<Vec<f64>> = h_f.to_vec();
    cols.extend(inner);
    let a = Mat::from_columns(9, &cols);
    let mut out = Mat::zeros(h_f.len(), h_f.len());
    for (k, y) in h_f.iter().enumerate() {
        let dy = Derivation::from_cochain(y);
        let z: Vec<f64> = moved.iter().flat_map(|w| xi.act(dy.evaluate(w, psi)).to_array()).collect();
        let c = least_squares(&a, &z);
        let back = a.mul_vec(&c);
        let res = back.iter().zip(&z).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        if res > MV_TOL * z.iter().map(|v| v.abs()).fold(1.0, f64::max) {
            return Err(MutError::DimensionMismatch { what: "τ* on H¹(F)", got: vec![k], expected: vec![] });
        }
        for j in 0..h_f.len() {
            out[(j, k)] = c[j];
        }
    }
    Ok(out)
}

/// The exteriors of `K` and `K^τ` on their amalgamated presentations.
#[derive(Debug, Clone)]
pub struct MutationPair {
    pub knot: String,
    pub partner: String,
    pub decomposition: TangleDecomposition,
    pub mv: MutationMove,
    pub sign: MutationSign,
    pub exterior: KnotExterior,
    /// `None` for negative moves, where no peripheral data is bundled.
    pub mutant_exterior: Option<KnotExterior>,
}

impl MutationPair {
    /// Loads `knot`, checks that `partner` is its mutant along the positive
    /// rotation and attaches both exteriors.
    pub fn load(knot: &str, partner: &str) -> Result<Self, MutError> {
        let k = crate::fgroup::load_knot(knot).map_err(|e| MutError::Knot(e.to_string()))?;
        let q = crate::fgroup::load_knot(partner).map_err(|e| MutError::Knot(e.to_string()))?;
        let dec = k.decomposition().map_err(|e| MutError::Knot(e.to_string()))?.clone();
        let qdec = q.decomposition().map_err(|e| MutError::Knot(e.to_string()))?;
        let mv = MutationMove::ROTATIONS
            .into_iter()
            .find(|&m| classify_mutation(&dec, m) == Ok(MutationSign::Positive))
            .ok_or(MutError::NotPositive(MutationMove::Identity))?;
        if dec.amalgam(mv).relators != qdec.amalgam(MutationMove::Identity).relators {
            return Err(MutError::PartnerMismatch { knot: knot.into(), partner: partner.into(), mv });
        }
        let cert = |key: String| crate::torsionform::PeripheralCertificate::bundled(&key);
        let exterior = KnotExterior::new(
            dec.amalgam(MutationMove::Identity),
            dec.amalgam_meridian(),
            dec.longitude.clone(),
            cert(format!("{knot}.amalgam"))?,
        )?;
        let mutant_exterior = Some(KnotExterior::new(
            dec.amalgam(mv),
            dec.amalgam_meridian(),
            qdec.longitude.clone(),
            cert(format!("{knot}.mutant"))?,
        )?);
        Ok(Self {
            knot: knot.into(),
            partner: partner.into(),
            decomposition: dec,
            mv,
            sign: MutationSign::Positive,
            exterior,
            mutant_exterior,
        })
    }

    /// `knot` with an arbitrary rotation; the mutant exterior is attached only
    /// for the identity move.
    pub fn with_move(knot: &str, mv: MutationMove) -> Result<Self, MutError> {
        let k = crate::fgroup::load_knot(knot).map_err(|e| MutError::Knot(e.to_string()))?;
        let dec = k.decomposition().map_err(|e| MutError::Knot(e.to_string()))?.clone();
        let sign = if mv == MutationMove::Identity { MutationSign::Positive } else { classify_mutation(&dec, mv)? };
        let exterior = KnotExterior::new(
            dec.amalgam(MutationMove::Identity),
            dec.amalgam_meridian(),
            dec.longitude.clone(),
            crate::torsionform::PeripheralCertificate::bundled(&format!("{knot}.amalgam"))?,
        )?;
        let mutant_exterior = (mv == MutationMove::Identity).then(|| exterior.clone());
        Ok(Self { knot: knot.into(), partner: knot.into(), decomposition: dec, mv, sign, exterior, mutant_exterior })
    }
}

/// Everything computed at one representation of `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub theta: f64,
    pub intertwiner_residual: f64,
    pub mutant_residual: f64,
    pub regular: bool,
    pub mutant_regular: bool,
    /// `Tor(𝓗)/Tor(𝓗_τ)`.
    pub ratio_twisted: f64,
    /// `T^{K^τ}(τ♯v)/T^K(v)`.
    pub ratio_twisted_forms: f64,
    /// `ε^{K^τ}/ε^K` on the two presentations.
    pub ratio_orientation: f64,
    /// `τ^{K^τ}(τ♯v)/τ^K(v)`.
    pub ratio_total: f64,
    pub form: f64,
    pub mutant_form: f64,
    pub mv_residual: f64,
    pub mv_residual_mutant: f64,
    /// `max |τ* − 1|` on `H¹(F)` in the basis `h_F`.
    pub tau_star_deviation: f64,
    pub tau_star_det: f64,
    /// Dimension of the subspace of `H¹(F)` fixed by `τ*`.
    pub tau_star_fixed_dim: usize,
    /// `max |∂ − ∂^τ|` on `H¹(F)`.
    pub boundary_deviation: f64,
    pub double_mutation_deviation: f64,
}

impl SampleReport {
    /// `|τ^{K^τ}(τ♯v) − τ^K(v)| / |τ^K(v)|`.
    pub fn relative_deviation(&self) -> f64 {
        (self.mutant_form - self.form).abs() / self.form.abs()
    }
}

/// Runs the twisted-part comparison and the end-to-end form comparison at `rep`.
pub fn compare_at(pair: &MutationPair, rep: &Representation) -> Result<SampleReport, MutError> {
    let dec = &pair.decomposition;
    let ext = &pair.exterior;
    let mext = pair.mutant_exterior.as_ref().ok_or(MutError::NotPositive(pair.mv))?;
    let p = &ext.presentation;
    let reg = regularity(p, rep)?;
    if !is_f_irreducible(rep, dec) {
        return Err(MutError::NotFIrreducible);
    }
    let psi4 = sphere_restriction(rep, dec);
    let x = intertwiner(&psi4, pair.mv)?;
    let rep_tau = mutant_rep(rep, dec, pair.mv, &x, &pair.partner)?;
    let reg_tau = regularity(&mext.presentation, &rep_tau)?;
    let v = theta_tangent(p, &ext.meridian, rep)?;
    let v_tau = tau_sharp(&v, &rep_tau, dec, pair.mv, &x)?;
    let h2 = ext.distinguished_generator(&rep.images)?;
    let h2_tau = mext.distinguished_generator(&rep_tau.images)?;

    let pieces = piece_bases(dec, &rep.images)?;
    let sphere = sphere_basis(dec, &rep.images)?;
    let xi = x.x.inverse();
    let pieces_tau = [pieces[0].iter().map(|h| act_on_blocks(h, xi)).collect(), pieces[1].clone()];
    let mv_k = mv_sequence(
        dec,
        MutationMove::Identity,
        &rep.images,
        &MvBases { v: v.cochain.clone(), h2: h2.clone(), pieces, sphere: sphere.clone() },
    )?;
    let mv_t = mv_sequence(
        dec,
        pair.mv,
        &rep_tau.images,
        &MvBases { v: v_tau.cochain.clone(), h2: h2_tau.clone(), pieces: pieces_tau, sphere: sphere.clone() },
    )?;

    let t = ext.torsion_form_with(&rep.images, &v.cochain, Some(&h2))?;
    let t_tau = mext.torsion_form_with(&rep_tau.images, &v_tau.cochain, Some(&h2_tau))?;
    let psi = sphere_images(dec, &rep.images);
    let ts = tau_star_matrix(&psi, pair.mv, &x, &sphere)?;
    let mut tau_star_deviation: f64 = 0.0;
    for r in 0..ts.rows() {
        for c in 0..ts.cols() {
            let id = if r == c { 1.0 } else { 0.0 };
            tau_star_deviation = tau_star_deviation.max((ts[(r, c)] - id).abs());
        }
    }
    let shifted = Mat::from_fn(ts.rows(), ts.cols(), |r, c| ts[(r, c)] - if r == c { 1.0 } else { 0.0 });
    let tau_star_fixed_dim = ts.rows() - <f64 as Scalar>::rank(&shifted, RANK_TOL)?;
    let boundary_deviation = mv_k.boundary.iter().zip(&mv_t.boundary).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let ratio_orientation = (mext.tau0 * ext.tau0) as f64;
    Ok(SampleReport {
        theta: rep.theta,
        intertwiner_residual: x.residual,
        mutant_residual: rep_tau.residual,
        regular: reg.is_regular(),
        mutant_regular: reg_tau.is_regular(),
        ratio_twisted: mv_k.tor_les / mv_t.tor_les,
        ratio_twisted_forms: (t_tau * mext.tau0 as f64) / (t * ext.tau0 as f64),
        ratio_orientation,
        ratio_total: t_tau / t,
        form: t,
        mutant_form: t_tau,
        mv_residual: mv_k.residual,
        mv_residual_mutant: mv_t.residual,
        tau_star_deviation,
        tau_star_det: ts.det(),
        tau_star_fixed_dim,
        boundary_deviation,
        double_mutation_deviation: double_mutation_deviation(rep, dec, pair.mv)?,
    })
}

/// The mutant decomposition: piece 1 glued through `m`.
pub fn mutated_decomposition(dec: &TangleDecomposition, m: MutationMove) -> TangleDecomposition {
    let mut out = dec.clone();
    out.sphere_words[0] = dec.sphere_images1(m);
    out
}

/// Largest character deviation of `(ρ^τ)^τ` from `ρ`.
pub fn double_mutation_deviation(rep: &Representation, dec: &TangleDecomposition, m: MutationMove) -> Result<f64, MutError> {
    let x = intertwiner(&sphere_restriction(rep, dec), m)?;
    let once = mutant_rep(rep, dec, m, &x, "once")?;
    let dec_tau = mutated_decomposition(dec, m);
    let y = intertwiner(&sphere_restriction(&once, &dec_tau), m)?;
    let twice = mutant_rep(&once, &dec_tau, m, &y, "twice")?;
    Ok(character_distance(&rep.images, &twice.images))
}

/// Determinants of the maps induced by a rotation on untwisted homology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignPart {
    /// `det τ₍₀₎` on `H₀(F)`.
    pub det_tau0: i64,
    /// `det([μ]/[μ^τ])` through the piece-2 arc meridian.
    pub det_mu: i64,
    /// `det τ₍₁₎` on `ℝ⁴/(a+b+c+d = 0)`.
    pub det_tau1: i64,
    /// `α_K(ξ₁) · α_{K^τ}(ξ₁)` for the piece-1 arc meridian: `−1` exposes a
    /// negative mutation.
    pub piece1_arc_sign: i64,
}

impl SignPart {
    pub fn sign(&self) -> i64 {
        self.det_tau0 * self.det_mu * self.det_tau1
    }
}

/// The map `τ₍₁₎` on `H₁(F; ℚ)` in the basis `a, b, c` (with `d = −a−b−c`).
pub fn tau1_matrix(m: MutationMove) -> Mat<BigRational> {
    let im = m.images();
    Mat::from_fn(3, 3, |r, c| {
        let e = im[c].exponent_sums(4);
        <BigRational as Scalar>::from_i64(e[r] - e[3])
    })
}

/// The sign part of the comparison for `dec` reglued by `m`.
pub fn sign_part(dec: &TangleDecomposition, m: MutationMove) -> Result<SignPart, MutError> {
    // a rotation fixes the basepoint class
    let det_tau0 = 1;
    let d = tau1_matrix(m).det();
    let det_tau1 = if d == <BigRational as Scalar>::from_i64(1) {
        1
    } else if d == <BigRational as Scalar>::from_i64(-1) {
        -1
    } else {
        0
    };
    let mu = dec.amalgam_meridian();
    let a = abelianization(&dec.amalgam(MutationMove::Identity), &mu)?;
    let b = abelianization(&dec.amalgam(m), &mu)?;
    let n = dec.num_generators();
    let alpha = |al: &[i64], w: &Word| -> i64 { w.exponent_sums(n).iter().zip(al).map(|(e, x)| e * x).sum() };
    let xi2 = dec.arc_meridians[1][0].shift(dec.n1());
    let xi1 = &dec.arc_meridians[0][0];
    Ok(SignPart {
        det_tau0,
        det_mu: alpha(&a, &xi2) * alpha(&b, &xi2),
        det_tau1,
        piece1_arc_sign: alpha(&a, xi1) * alpha(&b, xi1),
    })
}

/// Betti numbers of the untwisted pieces and of `F` over `ℚ`, in degrees 0, 1, 2.
pub fn untwisted_betti(dec: &TangleDecomposition) -> Result<[Vec<usize>; 3], MutError> {
    let b = |p: &GroupPresentation| -> Result<Vec<usize>, MutError> {
        Ok(homology_basis(&crate::twisted::untwisted_real_complex(p), 0.0)?.betti())
    };
    Ok([b(&dec.piece1)?, b(&dec.piece2)?, b(&GroupPresentation::free(3))?])
}
