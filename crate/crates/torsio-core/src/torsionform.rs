//! The peripheral torus, the distinguished degree-2 class, the homology
//! orientation sign and the torsion form.
//!
//! A peripheral certificate writes the torus relator `μ λ μ⁻¹ λ⁻¹` as a
//! product of conjugated relators `g_k r_{i_k}^{s_k} g_k⁻¹`. It realizes the
//! boundary inclusion on 2-cells: the torus 2-cell goes to `Σ s_k g_k r̃_{i_k}`.
//! On 2-cochains this is `L(φ) = Σ_k s_k Ad_{ρ(g_k)} φ(r_{i_k})`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chainlib::{homology_basis, torsion, BasisChoice, ChainError, HomologyBasisSet, Mat, Scalar, RANK_TOL};
use crate::fgroup::{certificate_json, GroupPresentation, Knot, Word};
use crate::repspace::{abelian_representation, Representation, TangentVector};
use crate::su2::{pairing, Su2Element, Su2Vector};
use crate::twisted::{evaluate_word, twisted_complex, untwisted_real_complex, AdjointReal, Derivation, TwistedError};

/// Commutation tolerance for the peripheral images.
pub const PERIPHERAL_TOL: f64 = 1e-8;
/// Residual allowed in the certificate chain-map identity.
pub const CERTIFICATE_TOL: f64 = 1e-10;
/// Residual allowed in the defining identity of the distinguished class.
pub const DISTINGUISHED_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorsionFormError {
    #[error("meridian and longitude images do not commute (defect {0:e})")]
    NonCommutingPeripheral(f64),
    #[error("the meridian image is central")]
    CentralMeridian,
    #[error("dim H¹ = {h1}, dim H² = {h2}: not regular")]
    NotRegular { h1: usize, h2: usize },
    #[error("certificate is invalid: {0}")]
    BadCertificate(String),
    #[error("untwisted homology has Betti numbers {0:?}, expected [1, 1, 0]")]
    WrongHomology(Vec<usize>),
    #[error("no bundled certificate named {0}")]
    UnknownCertificate(String),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// One factor `g r_i^s g⁻¹` of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub relator_index: usize,
    pub conjugator_word: Word,
    pub sign: i32,
}

/// The torus relator as a product of conjugated relators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PeripheralCertificate {
    pub entries: Vec<CertificateEntry>,
}

impl PeripheralCertificate {
    pub fn from_json(s: &str) -> Result<Self, TorsionFormError> {
        serde_json::from_str(s).map_err(|e| TorsionFormError::BadCertificate(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// A bundled certificate, keyed `stem`, `stem.amalgam` or `stem.mutant`.
    pub fn bundled(key: &str) -> Result<Self, TorsionFormError> {
        let s = certificate_json(key).ok_or_else(|| TorsionFormError::UnknownCertificate(key.to_string()))?;
        Self::from_json(s)
    }

    /// The freely reduced product of the conjugated relators.
    pub fn expand(&self, p: &GroupPresentation) -> Result<Word, TorsionFormError> {
        let mut out = Word::identity();
        for (k, e) in self.entries.iter().enumerate() {
            let r = p
                .relators
                .get(e.relator_index)
                .ok_or_else(|| TorsionFormError::BadCertificate(format!("entry {k} names a missing relator")))?;
            if e.sign.abs() != 1 {
                return Err(TorsionFormError::BadCertificate(format!("entry {k} has sign {}", e.sign)));
            }
            out = out.mul(&r.pow(e.sign).conjugate_by(&e.conjugator_word));
        }
        Ok(out)
    }

    /// The 3 × 3m matrix of `L` on 2-cochains.
    pub fn cochain_map(&self, num_relators: usize, images: &[Su2Element]) -> Mat<f64> {
        let mut l = Mat::zeros(3, 3 * num_relators);
        for e in &self.entries {
            let a = evaluate_word(&e.conjugator_word, images).adjoint().0;
            for r in 0..3 {
                for c in 0..3 {
                    l[(r, 3 * e.relator_index + c)] += e.sign as f64 * a[(r, c)];
                }
            }
        }
        l
    }

    /// Checks the free-group identity and the chain-map identity
    /// `L ∘ δ¹ = δ¹_T ∘ i¹` through `ρ` and five abelian representations.
    pub fn validate(
        &self,
        p: &GroupPresentation,
        meridian: &Word,
        longitude: &Word,
        images: Option<&[Su2Element]>,
    ) -> Result<(), TorsionFormError> {
        let target = commutator(meridian, longitude);
        if self.expand(p)? != target {
            return Err(TorsionFormError::BadCertificate("product does not reduce to μλμ⁻¹λ⁻¹".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut reps: Vec<Vec<Su2Element>> =
            (0..5).map(|_| abelian_representation("", p, rng.random_range(0.1..3.0)).images).collect();
        if let Some(imgs) = images {
            reps.push(imgs.to_vec());
        }
        let n = p.num_generators();
        for imgs in &reps {
            let l = self.cochain_map(p.num_relators(), imgs);
            let d1 = twisted_complex(p, &AdjointReal { images: imgs })?.d(1);
            let ld = l.mul(&d1);
            for col in 0..3 * n {
                let mut z = vec![0.0; 3 * n];
                z[col] = 1.0;
                let t = Derivation::from_cochain(&z).evaluate(&target, imgs).to_array();
                for r in 0..3 {
                    if (ld[(r, col)] - t[r]).abs() > CERTIFICATE_TOL {
                        return Err(TorsionFormError::BadCertificate("chain map does not commute with δ".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `μ λ μ⁻¹ λ⁻¹`.
pub fn commutator(meridian: &Word, longitude: &Word) -> Word {
    Word::product([meridian, longitude, &meridian.inverse(), &longitude.inverse()])
}

/// The twisted cochain complex of the one-vertex torus.
#[derive(Debug, Clone)]
pub struct TorusComplex {
    pub complex: crate::chainlib::BasedComplex<f64>,
    /// Cohomology dimensions in degrees 0, 1, 2.
    pub dims: [usize; 3],
    /// A generator of `H⁰` when it is one-dimensional.
    pub h0: Option<Su2Vector>,
}

/// The torus complex at the peripheral images `ρ(μ)`, `ρ(λ)`.
pub fn torus_complex(mu: Su2Element, lambda: Su2Element) -> Result<TorusComplex, TorsionFormError> {
    let defect = (mu * lambda).distance(lambda * mu);
    if defect > PERIPHERAL_TOL {
        return Err(TorsionFormError::NonCommutingPeripheral(defect));
    }
    let p = GroupPresentation::with_prefix("t", 2, vec![commutator(&Word::letter(0, 1), &Word::letter(1, 1))]);
    let images = [mu, lambda];
    let complex = twisted_complex(&p, &AdjointReal { images: &images })?;
    let h = homology_basis(&complex, RANK_TOL)?;
    let dims = [h.bases[2].len(), h.bases[1].len(), h.bases[0].len()];
    let h0 = (dims[0] == 1).then(|| {
        let v = &h.bases[2][0];
        Su2Vector::new(v[0], v[1], v[2])
    });
    Ok(TorusComplex { complex, dims, h0 })
}

/// `P ⌣ z` on the torus as a multiple of the fundamental class.
pub fn cup_with_p(z: Su2Vector, p: Su2Vector) -> f64 {
    pairing(p, z)
}

/// The axis `P_ρ` of `ρ(μ) = cos θ + sin θ · P_ρ`.
pub fn meridian_axis(mu: Su2Element) -> Result<Su2Vector, TorsionFormError> {
    mu.axis_angle().map(|(_, p)| p).map_err(|_| TorsionFormError::CentralMeridian)
}

/// The reference homology orientation `{[pt], [μ]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyOrientation {
    pub meridian: Word,
    /// `+1` for `[μ]`, `−1` for the reversed class.
    pub sign: i64,
}

/// `τ₀`, the sign of the untwisted torsion in the reference homology basis.
pub fn orientation_sign(p: &GroupPresentation, o: &HomologyOrientation) -> Result<i32, TorsionFormError> {
    let c = untwisted_real_complex(p);
    let betti = homology_basis(&c, 0.0)?.betti();
    if betti != [1, 1, 0] {
        return Err(TorsionFormError::WrongHomology(betti));
    }
    let mu: Vec<BigRational> =
        o.meridian.exponent_sums(p.num_generators()).iter().map(|&e| <BigRational as Scalar>::from_i64(e * o.sign)).collect();
    let h = HomologyBasisSet { bases: vec![vec![vec![<BigRational as Scalar>::from_i64(1)]], vec![mu], vec![]] };
    let t = torsion(&c, &h, BasisChoice::Pivoted)?.value;
    Ok(if t > <BigRational as Scalar>::from_i64(0) { 1 } else { -1 })
}

/// A knot exterior presented by a deficiency-one presentation, with its
/// peripheral data; evaluates the torsion form.
#[derive(Debug, Clone)]
pub struct KnotExterior {
    pub presentation: GroupPresentation,
    pub meridian: Word,
    pub longitude: Word,
    pub certificate: PeripheralCertificate,
    /// `τ₀` for `{[pt], [μ]}`.
    pub tau0: i32,
}

impl KnotExterior {
    /// Checks the certificate and computes `τ₀`.
    pub fn new(
        presentation: GroupPresentation,
        meridian: Word,
        longitude: Word,
        certificate: PeripheralCertificate,
    ) -> Result<Self, TorsionFormError> {
        certificate.validate(&presentation, &meridian, &longitude, None)?;
        let tau0 = orientation_sign(&presentation, &HomologyOrientation { meridian: meridian.clone(), sign: 1 })?;
        Ok(Self { presentation, meridian, longitude, certificate, tau0 })
    }

    /// The Wirtinger exterior of a bundled knot with its bundled certificate.
    pub fn for_knot(knot: &Knot) -> Result<Self, TorsionFormError> {
        Self::new(
            knot.presentation.clone(),
            knot.peripheral.meridian.clone(),
            knot.peripheral.longitude.clone(),
            PeripheralCertificate::bundled(&knot.stem)?,
        )
    }

    /// `P_ρ`, the axis of the meridian image.
    pub fn axis(&self, images: &[Su2Element]) -> Result<Su2Vector, TorsionFormError> {
        meridian_axis(evaluate_word(&self.meridian, images))
    }

    /// The 3 × 3m row `Pᵀ L` whose value on a 2-cochain is its `H²` coordinate.
    pub fn h2_functional(&self, images: &[Su2Element], axis: Su2Vector) -> Vec<f64> {
        let l = self.certificate.cochain_map(self.presentation.num_relators(), images);
        let p = axis.to_array();
        (0..l.cols()).map(|c| (0..3).map(|r| p[r] * l[(r, c)]).sum()).collect()
    }

    /// A 2-cochain representing `h⁽²⁾_ρ`: the class sent to the fundamental
    /// class by restriction to the torus followed by `P_ρ ⌣ ·`.
    pub fn distinguished_generator(&self, images: &[Su2Element]) -> Result<Vec<f64>, TorsionFormError> {
        self.distinguished_generator_for(images, self.axis(images)?)
    }

    /// As [`Self::distinguished_generator`] with an explicit axis.
    pub fn distinguished_generator_for(&self, images: &[Su2Element], axis: Su2Vector) -> Result<Vec<f64>, TorsionFormError> {
        let lam = evaluate_word(&self.longitude, images);
        let mu = evaluate_word(&self.meridian, images);
        let defect = (mu * lam).distance(lam * mu);
        if defect > PERIPHERAL_TOL {
            return Err(TorsionFormError::NonCommutingPeripheral(defect));
        }
        let f = self.h2_functional(images, axis);
        let nn: f64 = f.iter().map(|x| x * x).sum();
        if nn == 0.0 {
            return Err(TorsionFormError::NotRegular { h1: 0, h2: 0 });
        }
        let h: Vec<f64> = f.iter().map(|x| x / nn).collect();
        let check: f64 = f.iter().zip(&h).map(|(a, b)| a * b).sum();
        if (check - 1.0).abs() > DISTINGUISHED_TOL {
            return Err(TorsionFormError::BadCertificate("defining identity of h⁽²⁾ fails".into()));
        }
        Ok(h)
    }

    /// `τ_ρ(v) = τ₀ · Tor(C*(W; su(2)_ρ), {v, h⁽²⁾_ρ})`, and `0` for `v = 0`.
    pub fn torsion_form(&self, rep: &Representation, v: &TangentVector) -> Result<f64, TorsionFormError> {
        self.torsion_form_with(&rep.images, &v.cochain, None)
    }

    /// As [`Self::torsion_form`] on raw cochains, optionally with a given `h⁽²⁾`.
    pub fn torsion_form_with(
        &self,
        images: &[Su2Element],
        v: &[f64],
        h2: Option<&[f64]>,
    ) -> Result<f64, TorsionFormError> {
        if v.iter().all(|&x| x == 0.0) {
            return Ok(0.0);
        }
        let c = twisted_complex(&self.presentation, &AdjointReal { images })?;
        let h = homology_basis(&c, RANK_TOL)?;
        let (h1, h2dim) = (h.bases[1].len(), h.bases[0].len());
        if h1 != 1 || h2dim != 1 || !h.bases[2].is_empty() {
            return Err(TorsionFormError::NotRegular { h1, h2: h2dim });
        }
        let h2v = match h2 {
            Some(x) => x.to_vec(),
            None => self.distinguished_generator(images)?,
        };
        let bases = HomologyBasisSet { bases: vec![vec![h2v], vec![v.to_vec()], vec![]] };
        let t = torsion(&c, &bases, BasisChoice::Pivoted)?.value;
        Ok(self.tau0 as f64 * t)
    }

    /// The same exterior with generators and relators renumbered and
    /// reoriented: generator `j` becomes `gen_perm[j]`, inverted when
    /// `gen_flip[j]`; relator `k` becomes `rel_perm[k]`, inverted when `rel_flip[k]`.
    pub fn relabelled(&self, gen_perm: &[usize], gen_flip: &[bool], rel_perm: &[usize], rel_flip: &[bool]) -> Self {
        let n = gen_perm.len();
        let subst: Vec<Word> =
            (0..n).map(|j| Word::letter(gen_perm[j], if gen_flip[j] { -1 } else { 1 })).collect();
        let mut relators = vec![Word::identity(); rel_perm.len()];
        for (k, r) in self.presentation.relators.iter().enumerate() {
            let w = r.substitute(&subst);
            relators[rel_perm[k]] = if rel_flip[k] { w.inverse() } else { w };
        }
        let mut generators = vec![String::new(); n];
        for j in 0..n {
            generators[gen_perm[j]] = self.presentation.generators[j].clone();
        }
        let entries = self
            .certificate
            .entries
            .iter()
            .map(|e| {
                let g = e.conjugator_word.substitute(&subst);
                if rel_flip[e.relator_index] {
                    // r = (r⁻¹)⁻¹, and g r^s g⁻¹ = g (r⁻¹)^{−s} g⁻¹
                    CertificateEntry { relator_index: rel_perm[e.relator_index], conjugator_word: g, sign: -e.sign }
                } else {
                    CertificateEntry { relator_index: rel_perm[e.relator_index], conjugator_word: g, sign: e.sign }
                }
            })
            .collect();
        Self {
            presentation: GroupPresentation { generators, relators },
            meridian: self.meridian.substitute(&subst),
            longitude: self.longitude.substitute(&subst),
            certificate: PeripheralCertificate { entries },
            tau0: 0,
        }
        .with_orientation()
    }

    /// The exterior of the reversed knot: `μ⁻¹`, `λ⁻¹`, with each certificate
    /// conjugator premultiplied by `(λμ)⁻¹`.
    pub fn reversed(&self) -> Self {
        let c = self.longitude.mul(&self.meridian).inverse();
        let entries = self
            .certificate
            .entries
            .iter()
            .map(|e| CertificateEntry { conjugator_word: c.mul(&e.conjugator_word), ..e.clone() })
            .collect();
        Self {
            presentation: self.presentation.clone(),
            meridian: self.meridian.inverse(),
            longitude: self.longitude.inverse(),
            certificate: PeripheralCertificate { entries },
            tau0: 0,
        }
        .with_orientation()
    }

    fn with_orientation(mut self) -> Self {
        self.tau0 = orientation_sign(&self.presentation, &HomologyOrientation { meridian: self.meridian.clone(), sign: 1 })
            .expect("relabelling preserves homology");
        self
    }
}

/// Transports images and a 1-cochain along [`KnotExterior::relabelled`].
pub fn relabel_data(images: &[Su2Element], v: &[f64], gen_perm: &[usize], gen_flip: &[bool]) -> (Vec<Su2Element>, Vec<f64>) {
    let n = images.len();
    let mut out = vec![Su2Element::IDENTITY; n];
    let mut w = vec![0.0; 3 * n];
    for j in 0..n {
        let (g, z) = (images[j], Su2Vector::new(v[3 * j], v[3 * j + 1], v[3 * j + 2]));
        let (g, z) = if gen_flip[j] { (g.inverse(), -g.inverse().act(z)) } else { (g, z) };
        out[gen_perm[j]] = g;
        w[3 * gen_perm[j]..3 * gen_perm[j] + 3].copy_from_slice(&z.to_array());
    }
    (out, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgroup::{knot_names, load_knot, MutationMove};
    use crate::repspace::{solve_representations, theta_tangent};

    fn exterior(stem: &str) -> KnotExterior {
        let k = load_knot(stem).unwrap();
        KnotExterior::new(
            k.presentation.clone(),
            k.peripheral.meridian.clone(),
            k.peripheral.longitude.clone(),
            PeripheralCertificate::bundled(stem).unwrap(),
        )
        .unwrap()
    }

    fn trefoil_sample() -> (KnotExterior, Representation, TangentVector) {
        let ext = exterior("trefoil");
        let rep = solve_representations("trefoil", &ext.presentation, &ext.meridian, 1.1, 40, 3).unwrap().remove(0);
        let v = theta_tangent(&ext.presentation, &ext.meridian, &rep).unwrap();
        (ext, rep, v)
    }

    #[test]
    fn bundled_certificates_are_valid() {
        for stem in knot_names() {
            let k = load_knot(stem).unwrap();
            let c = PeripheralCertificate::bundled(stem).unwrap();
            c.validate(&k.presentation, &k.peripheral.meridian, &k.peripheral.longitude, None).unwrap();
            if let Ok(dec) = k.decomposition() {
                let c = PeripheralCertificate::bundled(&format!("{stem}.amalgam")).unwrap();
                let am = dec.amalgam(MutationMove::Identity);
                c.validate(&am, &dec.amalgam_meridian(), &dec.longitude, None).unwrap();
            }
        }
    }

    #[test]
    fn mutant_certificate_matches_the_partner_longitude() {
        let kt = load_knot("kinoshita_terasaka").unwrap();
        let conway = load_knot("conway").unwrap();
        let dec = kt.decomposition().unwrap();
        let c = PeripheralCertificate::bundled("kinoshita_terasaka.mutant").unwrap();
        let lon = &conway.decomposition().unwrap().longitude;
        c.validate(&dec.amalgam(MutationMove::AbCd), &dec.amalgam_meridian(), lon, None).unwrap();
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let k = load_knot("trefoil").unwrap();
        let mut c = PeripheralCertificate::bundled("trefoil").unwrap();
        c.entries[0].sign = -c.entries[0].sign;
        assert!(c.validate(&k.presentation, &k.peripheral.meridian, &k.peripheral.longitude, None).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = PeripheralCertificate::bundled("figure_eight").unwrap();
        assert_eq!(PeripheralCertificate::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn torus_complex_dimensions() {
        let mu = Su2Element::from_axis_angle(0.8, Su2Vector::new(1.0, 0.0, 0.0));
        let lam = Su2Element::from_axis_angle(2.1, Su2Vector::new(1.0, 0.0, 0.0));
        let t = torus_complex(mu, lam).unwrap();
        assert_eq!(t.complex.dims(), &[3, 6, 3]);
        assert_eq!(t.dims, [1, 2, 1]);
        let h0 = t.h0.unwrap();
        assert!((h0.j.abs() + h0.k.abs()) < 1e-12 && h0.i.abs() > 0.5);
        let t = torus_complex(Su2Element::IDENTITY, Su2Element::IDENTITY).unwrap();
        assert_eq!(t.dims, [3, 6, 3]);
        assert!(matches!(torus_complex(Su2Element::i(), Su2Element::j()), Err(TorsionFormError::NonCommutingPeripheral(_))));
    }

    #[test]
    fn cup_product_normalization() {
        let p = Su2Vector::new(0.0, 0.6, 0.8);
        assert_eq!(cup_with_p(p, p), 1.0);
        assert_eq!(cup_with_p(Su2Vector::new(1.0, 0.0, 0.0), p), 0.0);
        assert_eq!(cup_with_p(p, -p), -1.0);
    }

    #[test]
    fn orthogonal_torus_cocycles_are_exact() {
        let mu = Su2Element::from_axis_angle(0.8, Su2Vector::new(1.0, 0.0, 0.0));
        let lam = Su2Element::from_axis_angle(-0.3, Su2Vector::new(1.0, 0.0, 0.0));
        let t = torus_complex(mu, lam).unwrap();
        let d1 = t.complex.d(1);
        for z in [vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]] {
            assert!(f64::solve(&d1, &z, RANK_TOL).is_some());
        }
        assert!(f64::solve(&d1, &[1.0, 0.0, 0.0], RANK_TOL).is_none());
    }

    #[test]
    fn orientation_sign_flips_with_the_meridian_class() {
        let k = load_knot("trefoil").unwrap();
        let plus = orientation_sign(&k.presentation, &HomologyOrientation { meridian: k.peripheral.meridian.clone(), sign: 1 }).unwrap();
        let minus = orientation_sign(&k.presentation, &HomologyOrientation { meridian: k.peripheral.meridian.clone(), sign: -1 }).unwrap();
        assert_eq!(plus, -minus);
        let twice = orientation_sign(&k.presentation, &HomologyOrientation { meridian: k.peripheral.meridian.pow(2), sign: 1 }).unwrap();
        assert_eq!(plus, twice);
    }

    #[test]
    fn distinguished_generator_defining_identity() {
        let (ext, rep, _) = trefoil_sample();
        let h = ext.distinguished_generator(&rep.images).unwrap();
        let p = ext.axis(&rep.images).unwrap();
        let f = ext.h2_functional(&rep.images, p);
        let val: f64 = f.iter().zip(&h).map(|(a, b)| a * b).sum();
        assert!((val - 1.0).abs() < 1e-12);
        let hm = ext.distinguished_generator_for(&rep.images, -p).unwrap();
        for (a, b) in h.iter().zip(&hm) {
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn padded_certificate_gives_the_same_class() {
        let (ext, rep, v) = trefoil_sample();
        let mut padded = ext.clone();
        let g = Word::from_pairs(&[(1, 1), (0, -1)]);
        let mut entries = vec![
            CertificateEntry { relator_index: 0, conjugator_word: g.clone(), sign: 1 },
            CertificateEntry { relator_index: 0, conjugator_word: g, sign: -1 },
        ];
        entries.extend(ext.certificate.entries.clone());
        padded.certificate = PeripheralCertificate { entries };
        padded.certificate.validate(&ext.presentation, &ext.meridian, &ext.longitude, Some(&rep.images)).unwrap();
        let a = ext.torsion_form(&rep, &v).unwrap();
        let b = padded.torsion_form(&rep, &v).unwrap();
        assert!((a - b).abs() < 1e-10 * a.abs());
    }

    #[test]
    fn flipping_p_negates_the_form() {
        let (ext, rep, v) = trefoil_sample();
        let p = ext.axis(&rep.images).unwrap();
        let h = ext.distinguished_generator_for(&rep.images, -p).unwrap();
        let a = ext.torsion_form(&rep, &v).unwrap();
        let b = ext.torsion_form_with(&rep.images, &v.cochain, Some(&h)).unwrap();
        assert!((a + b).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn form_is_linear_and_vanishes_at_zero() {
        let (ext, rep, v) = trefoil_sample();
        let a = ext.torsion_form(&rep, &v).unwrap();
        assert!(a != 0.0);
        let b = ext.torsion_form(&rep, &v.scaled(2.0)).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-9 * a.abs());
        assert_eq!(ext.torsion_form(&rep, &v.scaled(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn form_is_invariant_under_conjugation() {
        let (ext, rep, v) = trefoil_sample();
        let g = Su2Element::new(0.4, -0.3, 0.7, 0.2);
        let rep2 = rep.conjugated(g);
        let w: Vec<f64> = v.derivation.values.iter().flat_map(|z| g.act(*z).to_array()).collect();
        let a = ext.torsion_form(&rep, &v).unwrap();
        let b = ext.torsion_form(&rep2, &TangentVector::from_cochain(w)).unwrap();
        assert!((a - b).abs() < 1e-8 * a.abs());
    }

    #[test]
    fn form_is_invariant_under_cell_relabelling() {
        let (ext, rep, v) = trefoil_sample();
        let a = ext.torsion_form(&rep, &v).unwrap();
        let (gp, gf, rp, rf) = ([2, 0, 1], [true, false, true], [1, 0], [false, true]);
        let ext2 = ext.relabelled(&gp, &gf, &rp, &rf);
        let (imgs, w) = relabel_data(&rep.images, &v.cochain, &gp, &gf);
        let b = ext2.torsion_form_with(&imgs, &w, None).unwrap();
        assert!((a - b).abs() < 1e-8 * a.abs(), "{a} vs {b}");
    }

    #[test]
    fn form_is_independent_of_knot_orientation() {
        let (ext, rep, v) = trefoil_sample();
        let rev = ext.reversed();
        rev.certificate.validate(&rev.presentation, &rev.meridian, &rev.longitude, Some(&rep.images)).unwrap();
        assert_eq!(rev.tau0, -ext.tau0);
        let a = ext.torsion_form(&rep, &v).unwrap();
        let b = rev.torsion_form(&rep, &v).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs());
    }
}
