//! The bundled knot table and its JSON format.
//!
//! Each knot is one UTF-8 JSON document with fields `name`, `generators`,
//! `relators`, `meridian`, `longitude` and an optional `tangle_decomposition`.
//! Words are arrays of `[generator, ±1]` pairs. Serializing a parsed record
//! with two-space pretty printing and a trailing newline reproduces the file
//! byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::mutation::{DecompositionError, Sign, TangleDecomposition};
use super::{GroupPresentation, Word};

const KNOTS: &[(&str, &str)] = &[
    ("trefoil", include_str!("../../data/knots/trefoil.json")),
    ("figure_eight", include_str!("../../data/knots/figure_eight.json")),
    ("kinoshita_terasaka", include_str!("../../data/knots/kinoshita_terasaka.json")),
    ("conway", include_str!("../../data/knots/conway.json")),
    ("pretzel_3_3_3_m2", include_str!("../../data/knots/pretzel_3_3_3_m2.json")),
    ("pretzel_3_3_3_m2_mutant", include_str!("../../data/knots/pretzel_3_3_3_m2_mutant.json")),
];

const CERTIFICATES: &[(&str, &str)] = &[
    ("trefoil", include_str!("../../data/certificates/trefoil.json")),
    ("figure_eight", include_str!("../../data/certificates/figure_eight.json")),
    ("kinoshita_terasaka", include_str!("../../data/certificates/kinoshita_terasaka.json")),
    ("kinoshita_terasaka.amalgam", include_str!("../../data/certificates/kinoshita_terasaka.amalgam.json")),
    ("kinoshita_terasaka.mutant", include_str!("../../data/certificates/kinoshita_terasaka.mutant.json")),
    ("conway", include_str!("../../data/certificates/conway.json")),
    ("conway.amalgam", include_str!("../../data/certificates/conway.amalgam.json")),
    ("conway.mutant", include_str!("../../data/certificates/conway.mutant.json")),
    ("pretzel_3_3_3_m2", include_str!("../../data/certificates/pretzel_3_3_3_m2.json")),
    ("pretzel_3_3_3_m2.amalgam", include_str!("../../data/certificates/pretzel_3_3_3_m2.amalgam.json")),
    ("pretzel_3_3_3_m2.mutant", include_str!("../../data/certificates/pretzel_3_3_3_m2.mutant.json")),
    ("pretzel_3_3_3_m2_mutant", include_str!("../../data/certificates/pretzel_3_3_3_m2_mutant.json")),
    (
        "pretzel_3_3_3_m2_mutant.amalgam",
        include_str!("../../data/certificates/pretzel_3_3_3_m2_mutant.amalgam.json"),
    ),
    (
        "pretzel_3_3_3_m2_mutant.mutant",
        include_str!("../../data/certificates/pretzel_3_3_3_m2_mutant.mutant.json"),
    ),
];

#[derive(Debug, Error)]
pub enum KnotError {
    #[error("unknown knot `{0}`")]
    Unknown(String),
    #[error("malformed knot document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed presentation: {0}")]
    Presentation(String),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

/// Stems of the bundled knots.
pub fn knot_names() -> Vec<&'static str> {
    KNOTS.iter().map(|(s, _)| *s).collect()
}

/// Raw JSON of a bundled knot.
pub fn knot_json(stem: &str) -> Option<&'static str> {
    KNOTS.iter().find(|(s, _)| *s == stem).map(|(_, j)| *j)
}

/// Raw JSON of a bundled certificate, keyed `stem`, `stem.amalgam` or `stem.mutant`.
pub fn certificate_json(key: &str) -> Option<&'static str> {
    CERTIFICATES.iter().find(|(s, _)| *s == key).map(|(_, j)| *j)
}

/// Loads a bundled knot by stem.
pub fn load_knot(stem: &str) -> Result<Knot, KnotError> {
    let json = knot_json(stem).ok_or_else(|| KnotError::Unknown(stem.to_string()))?;
    Knot::from_json(stem, json)
}

/// On-disk layout of one piece of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

/// A per-piece pair of values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerPiece<T> {
    pub piece1: T,
    pub piece2: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub piece1: PieceRecord,
    pub piece2: PieceRecord,
    pub sphere_words: PerPiece<Vec<Word>>,
    pub signs: Vec<String>,
    pub arc_meridians: PerPiece<Vec<Word>>,
    pub meridian: Word,
    pub longitude: Word,
}

/// On-disk layout of a knot document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub meridian: Word,
    pub longitude: Word,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangle_decomposition: Option<DecompositionRecord>,
}

impl KnotRecord {
    /// Pretty JSON with a trailing newline, the canonical file form.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }
}

/// Meridian and longitude with the fixed orientation conventions
/// `lk(μ, K) = +1` and `int(μ, λ) = +1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeripheralPair {
    pub meridian: Word,
    pub longitude: Word,
    pub meridian_linking: i32,
    pub intersection: i32,
}

impl PeripheralPair {
    pub fn new(meridian: Word, longitude: Word) -> Self {
        Self { meridian, longitude, meridian_linking: 1, intersection: 1 }
    }

    /// The torus relation `μ λ μ⁻¹ λ⁻¹`.
    pub fn commutator(&self) -> Word {
        Word::product([&self.meridian, &self.longitude, &self.meridian.inverse(), &self.longitude.inverse()])
    }
}

/// A knot of the table in domain form.
#[derive(Debug, Clone, PartialEq)]
pub struct Knot {
    pub stem: String,
    pub name: String,
    pub presentation: GroupPresentation,
    pub peripheral: PeripheralPair,
    pub decomposition: Option<TangleDecomposition>,
}

impl Knot {
    pub fn from_json(stem: &str, json: &str) -> Result<Self, KnotError> {
        let rec: KnotRecord = serde_json::from_str(json)?;
        Self::from_record(stem, rec)
    }

    pub fn from_record(stem: &str, rec: KnotRecord) -> Result<Self, KnotError> {
        let presentation = GroupPresentation::new(rec.generators, rec.relators).map_err(KnotError::Presentation)?;
        let n = presentation.num_generators();
        for w in [&rec.meridian, &rec.longitude] {
            if w.max_generator().is_some_and(|g| g >= n) {
                return Err(KnotError::Presentation("peripheral word out of range".into()));
            }
        }
        let decomposition = rec.tangle_decomposition.map(decomposition_from_record).transpose()?;
        Ok(Self {
            stem: stem.to_string(),
            name: rec.name,
            presentation,
            peripheral: PeripheralPair::new(rec.meridian, rec.longitude),
            decomposition,
        })
    }

    pub fn to_record(&self) -> KnotRecord {
        KnotRecord {
            name: self.name.clone(),
            generators: self.presentation.generators.clone(),
            relators: self.presentation.relators.clone(),
            meridian: self.peripheral.meridian.clone(),
            longitude: self.peripheral.longitude.clone(),
            tangle_decomposition: self.decomposition.as_ref().map(decomposition_to_record),
        }
    }

    pub fn decomposition(&self) -> Result<&TangleDecomposition, KnotError> {
        self.decomposition
            .as_ref()
            .ok_or(KnotError::Decomposition(DecompositionError::Missing(self.stem.clone())))
    }
}

fn four(v: Vec<Word>, what: &str) -> Result<[Word; 4], DecompositionError> {
    v.try_into().map_err(|_| DecompositionError::Malformed(format!("{what} must list four words")))
}

fn two(v: Vec<Word>, what: &str) -> Result<[Word; 2], DecompositionError> {
    v.try_into().map_err(|_| DecompositionError::Malformed(format!("{what} must list two words")))
}

fn piece(rec: PieceRecord) -> Result<GroupPresentation, DecompositionError> {
    GroupPresentation::new(rec.generators, rec.relators).map_err(DecompositionError::Malformed)
}

fn decomposition_from_record(rec: DecompositionRecord) -> Result<TangleDecomposition, DecompositionError> {
    let signs: Vec<Sign> = rec
        .signs
        .iter()
        .map(|s| match s.as_str() {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(DecompositionError::Malformed(format!("bad sign `{s}`"))),
        })
        .collect::<Result<_, _>>()?;
    let sphere_signs: [Sign; 4] =
        signs.try_into().map_err(|_| DecompositionError::Malformed("four signs expected".into()))?;
    let d = TangleDecomposition {
        piece1: piece(rec.piece1)?,
        piece2: piece(rec.piece2)?,
        sphere_words: [four(rec.sphere_words.piece1, "sphere_words")?, four(rec.sphere_words.piece2, "sphere_words")?],
        arc_meridians: [two(rec.arc_meridians.piece1, "arc_meridians")?, two(rec.arc_meridians.piece2, "arc_meridians")?],
        sphere_signs,
        meridian: rec.meridian,
        longitude: rec.longitude,
    };
    d.validate()?;
    Ok(d)
}

fn decomposition_to_record(d: &TangleDecomposition) -> DecompositionRecord {
    let piece = |p: &GroupPresentation| PieceRecord { generators: p.generators.clone(), relators: p.relators.clone() };
    DecompositionRecord {
        piece1: piece(&d.piece1),
        piece2: piece(&d.piece2),
        sphere_words: PerPiece { piece1: d.sphere_words[0].to_vec(), piece2: d.sphere_words[1].to_vec() },
        signs: d.sphere_signs.iter().map(|s| s.symbol().to_string()).collect(),
        arc_meridians: PerPiece { piece1: d.arc_meridians[0].to_vec(), piece2: d.arc_meridians[1].to_vec() },
        meridian: d.meridian.clone(),
        longitude: d.longitude.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_document_round_trips_bit_exactly() {
        for (stem, json) in KNOTS {
            let rec: KnotRecord = serde_json::from_str(json).unwrap();
            assert_eq!(&rec.to_json(), json, "{stem}");
            let knot = Knot::from_record(stem, rec).unwrap();
            assert_eq!(&knot.to_record().to_json(), json, "{stem} via domain form");
        }
    }

    #[test]
    fn table_sizes() {
        let sizes: Vec<_> = knot_names()
            .into_iter()
            .map(|s| {
                let k = load_knot(s).unwrap();
                (k.presentation.num_generators(), k.presentation.num_relators())
            })
            .collect();
        assert_eq!(sizes, vec![(3, 2), (4, 3), (11, 10), (11, 10), (11, 10), (11, 10)]);
    }

    #[test]
    fn decompositions_ship_where_expected() {
        for s in knot_names() {
            let k = load_knot(s).unwrap();
            assert_eq!(k.decomposition.is_some(), !matches!(s, "trefoil" | "figure_eight"), "{s}");
        }
    }

    #[test]
    fn unknown_knot_is_reported() {
        assert!(matches!(load_knot("unknot"), Err(KnotError::Unknown(_))));
    }

    #[test]
    fn every_stem_has_a_certificate() {
        for s in knot_names() {
            assert!(certificate_json(s).is_some(), "{s}");
        }
    }
}
