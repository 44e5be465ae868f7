//! Conway spheres, the three half-turn rotations and the amalgamated
//! presentations they induce.
//!
//! A decomposition splits the knot group along a four-punctured sphere `F`
//! with `π₁(F) = ⟨a, b, c⟩` and `d = (abc)⁻¹`. Piece 1 contributes generators
//! first, then piece 2; the amalgam adds one identification relator
//! `w₂(γ) T₁(γ)⁻¹` for each `γ ∈ {a, b, c}`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{GroupPresentation, Word};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("malformed tangle decomposition: {0}")]
    Malformed(String),
    #[error("the identity is not a mutation")]
    IdentityMove,
    #[error("knot `{0}` has no tangle decomposition")]
    Missing(String),
    #[error("unknown mutation move `{0}`")]
    UnknownMove(String),
}

/// Orientation of a puncture relative to the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Whether a rotation preserves the puncture signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationSign {
    Positive,
    Negative,
}

/// A half-turn of the Conway sphere, named by the punctures it swaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationMove {
    Identity,
    AbCd,
    AdBc,
    AcBd,
}

fn l(x: usize) -> Word {
    Word::letter(x, 1)
}

fn abc_inverse() -> Word {
    Word::from_pairs(&[(C, -1), (B, -1), (A, -1)])
}

impl MutationMove {
    /// The three rotations.
    pub const ROTATIONS: [MutationMove; 3] = [MutationMove::AbCd, MutationMove::AdBc, MutationMove::AcBd];

    /// Images of `a, b, c, d` as words in `a, b, c, d` (generators 0 to 3).
    pub fn images(self) -> [Word; 4] {
        match self {
            MutationMove::Identity => [l(A), l(B), l(C), l(D)],
            MutationMove::AbCd => [l(B), l(A), Word::from_pairs(&[(A, -1), (C, -1), (B, -1)]), l(C).conjugate_by(&l(B))],
            MutationMove::AdBc => [abc_inverse(), l(C).conjugate_by(&l(A).mul(&l(B))), l(B).conjugate_by(&l(A)), l(A)],
            MutationMove::AcBd => [l(C), abc_inverse(), l(A), l(B)],
        }
    }

    /// The induced permutation of the punctures.
    pub fn perm(self) -> [usize; 4] {
        match self {
            MutationMove::Identity => [0, 1, 2, 3],
            MutationMove::AbCd => [1, 0, 3, 2],
            MutationMove::AdBc => [3, 2, 1, 0],
            MutationMove::AcBd => [2, 3, 0, 1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MutationMove::Identity => "identity",
            MutationMove::AbCd => "ab_cd",
            MutationMove::AdBc => "ad_bc",
            MutationMove::AcBd => "ac_bd",
        }
    }

    /// Applies the move to words in the sphere generators `a, b, c`.
    pub fn apply(self, w: &Word) -> Word {
        let im = self.images();
        w.substitute(&im)
    }
}

impl fmt::Display for MutationMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MutationMove {
    type Err = DecompositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [MutationMove::Identity, MutationMove::AbCd, MutationMove::AdBc, MutationMove::AcBd]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| DecompositionError::UnknownMove(s.to_string()))
    }
}

/// A knot group split along a Conway sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleDecomposition {
    pub piece1: GroupPresentation,
    pub piece2: GroupPresentation,
    /// Images of `a, b, c, d` in each piece, in local generator indices.
    pub sphere_words: [[Word; 4]; 2],
    pub arc_meridians: [[Word; 2]; 2],
    pub sphere_signs: [Sign; 4],
    /// The knot meridian, a single generator of piece 2 in local indices.
    pub meridian: Word,
    /// The longitude in amalgam indices.
    pub longitude: Word,
}

impl TangleDecomposition {
    pub fn n1(&self) -> usize {
        self.piece1.num_generators()
    }

    pub fn n2(&self) -> usize {
        self.piece2.num_generators()
    }

    pub fn num_generators(&self) -> usize {
        self.n1() + self.n2()
    }

    pub fn validate(&self) -> Result<(), DecompositionError> {
        let bad = |m: &str| Err(DecompositionError::Malformed(m.to_string()));
        let in_range = |w: &Word, n: usize| w.max_generator().is_none_or(|g| g < n);
        for (p, n) in [(0, self.n1()), (1, self.n2())] {
            if !self.sphere_words[p].iter().chain(&self.arc_meridians[p]).all(|w| in_range(w, n)) {
                return bad("sphere word out of range");
            }
        }
        if self.sphere_signs.iter().filter(|&&s| s == Sign::Plus).count() != 2 {
            return bad("a Conway sphere has two punctures of each sign");
        }
        if self.meridian.len() != 1 || self.meridian.letters()[0].inverse || !in_range(&self.meridian, self.n2()) {
            return bad("the meridian must be one positive generator of piece 2");
        }
        if !in_range(&self.longitude, self.num_generators()) {
            return bad("longitude out of range");
        }
        Ok(())
    }

    /// `T₁(γ)` for `γ = a, b, c, d`: the move followed by the piece-1 sphere words.
    pub fn sphere_images1(&self, m: MutationMove) -> [Word; 4] {
        m.images().map(|w| w.substitute(&self.sphere_words[0]))
    }

    /// Piece-2 sphere words in amalgam indices.
    pub fn sphere_words2(&self) -> [Word; 4] {
        self.sphere_words[1].clone().map(|w| w.shift(self.n1()))
    }

    /// The meridian in amalgam indices.
    pub fn amalgam_meridian(&self) -> Word {
        self.meridian.shift(self.n1())
    }

    /// Index of the first identification relator in the amalgam.
    pub fn identification_offset(&self) -> usize {
        self.piece1.num_relators() + self.piece2.num_relators()
    }

    /// The amalgamated presentation reglued by `m`.
    pub fn amalgam(&self, m: MutationMove) -> GroupPresentation {
        let n1 = self.n1();
        let generators = self.piece1.generators.iter().chain(&self.piece2.generators).cloned().collect();
        let t1 = self.sphere_images1(m);
        let w2 = self.sphere_words2();
        let relators = self
            .piece1
            .relators
            .iter()
            .cloned()
            .chain(self.piece2.relators.iter().map(|r| r.shift(n1)))
            .chain((0..3).map(|x| w2[x].mul(&t1[x].inverse())))
            .collect();
        GroupPresentation { generators, relators }
    }
}

/// Sign of a rotation on a decomposition.
pub fn classify_mutation(dec: &TangleDecomposition, m: MutationMove) -> Result<MutationSign, DecompositionError> {
    if m == MutationMove::Identity {
        return Err(DecompositionError::IdentityMove);
    }
    let s = &dec.sphere_signs;
    let p = m.perm();
    Ok(if (0..4).all(|x| s[x] == s[p[x]]) { MutationSign::Positive } else { MutationSign::Negative })
}

/// The amalgam of the mutant obtained by regluing piece 1 through `m`.
pub fn mutant_presentation(dec: &TangleDecomposition, m: MutationMove) -> GroupPresentation {
    dec.amalgam(m)
}

#[cfg(test)]
mod tests {
    use super::super::load_knot;
    use super::*;

    const DECOMPOSED: [&str; 4] = ["kinoshita_terasaka", "conway", "pretzel_3_3_3_m2", "pretzel_3_3_3_m2_mutant"];

    fn positives(dec: &TangleDecomposition) -> Vec<MutationMove> {
        MutationMove::ROTATIONS
            .into_iter()
            .filter(|&m| classify_mutation(dec, m).unwrap() == MutationSign::Positive)
            .collect()
    }

    #[test]
    fn exactly_one_rotation_is_positive() {
        for s in DECOMPOSED {
            let k = load_knot(s).unwrap();
            assert_eq!(positives(k.decomposition().unwrap()).len(), 1, "{s}");
        }
    }

    #[test]
    fn bundled_pairs_use_positive_moves() {
        let kt = load_knot("kinoshita_terasaka").unwrap();
        assert_eq!(positives(kt.decomposition().unwrap()), vec![MutationMove::AbCd]);
        let pz = load_knot("pretzel_3_3_3_m2").unwrap();
        assert_eq!(positives(pz.decomposition().unwrap()), vec![MutationMove::AcBd]);
    }

    #[test]
    fn flipping_all_signs_keeps_the_classification() {
        for s in DECOMPOSED {
            let mut dec = load_knot(s).unwrap().decomposition.unwrap();
            let before = positives(&dec);
            dec.sphere_signs = dec.sphere_signs.map(Sign::flip);
            assert_eq!(positives(&dec), before, "{s}");
        }
    }

    #[test]
    fn identity_is_rejected() {
        let dec = load_knot("conway").unwrap().decomposition.unwrap();
        assert_eq!(classify_mutation(&dec, MutationMove::Identity), Err(DecompositionError::IdentityMove));
    }

    #[test]
    fn rotations_are_involutions() {
        for m in MutationMove::ROTATIONS {
            let im = m.images();
            for (x, w) in im.iter().enumerate().take(3) {
                assert_eq!(m.apply(w), l(x), "{m} on generator {x}");
            }
        }
    }

    #[test]
    fn images_respect_the_sphere_relation() {
        for m in MutationMove::ROTATIONS {
            let im = m.images();
            assert!(Word::product(&im).is_empty(), "{m}");
        }
    }

    #[test]
    fn names_parse_back() {
        for m in MutationMove::ROTATIONS {
            assert_eq!(m.name().parse::<MutationMove>().unwrap(), m);
        }
        assert!("ab".parse::<MutationMove>().is_err());
    }

    #[test]
    fn regluing_the_first_knot_gives_the_second_amalgam() {
        for (a, b, m) in [
            ("kinoshita_terasaka", "conway", MutationMove::AbCd),
            ("pretzel_3_3_3_m2", "pretzel_3_3_3_m2_mutant", MutationMove::AcBd),
        ] {
            let da = load_knot(a).unwrap().decomposition.unwrap();
            let db = load_knot(b).unwrap().decomposition.unwrap();
            assert_eq!(mutant_presentation(&da, m), db.amalgam(MutationMove::Identity), "{a}");
            assert_eq!(mutant_presentation(&db, m), da.amalgam(MutationMove::Identity), "{b}");
        }
    }

    /// Row-reduces an integer matrix and returns its pivots.
    fn hermite_pivots(mut rows: Vec<Vec<i64>>, n: usize) -> Vec<i64> {
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..n {
            loop {
                let nz: Vec<usize> = (top..rows.len()).filter(|&r| rows[r][col] != 0).collect();
                if nz.is_empty() {
                    break;
                }
                let best = *nz.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
                rows.swap(top, best);
                let mut done = true;
                for r in top + 1..rows.len() {
                    let q = rows[r][col] / rows[top][col];
                    if q != 0 {
                        for c in 0..n {
                            rows[r][c] -= q * rows[top][c];
                        }
                    }
                    done &= rows[r][col] == 0;
                }
                if done {
                    pivots.push(rows[top][col]);
                    top += 1;
                    break;
                }
            }
        }
        pivots
    }

    #[test]
    fn amalgams_abelianize_to_the_integers() {
        for s in DECOMPOSED {
            let dec = load_knot(s).unwrap().decomposition.unwrap();
            for m in [MutationMove::Identity, positives(&dec)[0]] {
                let p = dec.amalgam(m);
                assert_eq!(p.num_generators(), p.num_relators() + 1, "{s}");
                let pivots = hermite_pivots(p.abelianized_relators(), p.num_generators());
                assert_eq!(pivots.len(), p.num_generators() - 1, "{s} {m}");
                assert!(pivots.iter().all(|v| v.abs() == 1), "{s} {m}: {pivots:?}");
            }
        }
    }
}
