//! Free-group words, finite presentations and Fox calculus.
//!
//! Words are kept freely reduced at all times. A letter is a generator index
//! with exponent `±1`; higher powers are spelled out letter by letter.

mod cells;
mod mutation;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use cells::{presentation_complex, CellComplex2, Edge, Face};
pub use mutation::{
    classify_mutation, mutant_presentation, DecompositionError, MutationMove, MutationSign, Sign,
    TangleDecomposition,
};
pub use table::{certificate_json, knot_json, knot_names, load_knot, Knot, KnotError, KnotRecord, PeripheralPair};

/// One letter `x_g^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, i32)", into = "(usize, i32)")]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, exponent: i32) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        Self { generator, inverse: exponent < 0 }
    }

    pub fn exponent(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }
}

impl From<(usize, i32)> for Letter {
    fn from((g, e): (usize, i32)) -> Self {
        Self::new(g, e)
    }
}

impl From<Letter> for (usize, i32) {
    fn from(l: Letter) -> Self {
        (l.generator, l.exponent())
    }
}

/// A freely reduced word in the generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, i32)>", into = "Vec<(usize, i32)>")]
pub struct Word(Vec<Letter>);

impl TryFrom<Vec<(usize, i32)>> for Word {
    type Error = String;

    fn try_from(v: Vec<(usize, i32)>) -> Result<Self, String> {
        if let Some(&(g, e)) = v.iter().find(|(_, e)| e.abs() != 1) {
            return Err(format!("letter ({g}, {e}) must have exponent ±1"));
        }
        Ok(Self::from_letters(v.into_iter().map(Letter::from)))
    }
}

impl From<Word> for Vec<(usize, i32)> {
    fn from(w: Word) -> Self {
        w.0.into_iter().map(Into::into).collect()
    }
}

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn letter(generator: usize, exponent: i32) -> Self {
        let l = Letter::new(generator, exponent.signum());
        Self(vec![l; exponent.unsigned_abs() as usize])
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    /// Builds a word from `(generator, exponent)` pairs of any exponent.
    pub fn from_pairs(pairs: &[(usize, i32)]) -> Self {
        Self::from_letters(pairs.iter().flat_map(|&(g, e)| {
            std::iter::repeat_n(Letter::new(g, e.signum()), e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_letters(self.0.iter().chain(o.0.iter()).copied())
    }

    pub fn product<'a>(words: impl IntoIterator<Item = &'a Word>) -> Self {
        Self::from_letters(words.into_iter().flat_map(|w| w.0.iter().copied()))
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        Self::product(std::iter::repeat_n(&base, e.unsigned_abs() as usize))
    }

    /// `g w g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        Self::product([g, self, &g.inverse()])
    }

    /// Replaces generator `j` by `images[j]`.
    pub fn substitute(&self, images: &[Word]) -> Self {
        Self::from_letters(self.0.iter().flat_map(|l| {
            let img = &images[l.generator];
            let w = if l.inverse { img.inverse() } else { img.clone() };
            w.0
        }))
    }

    /// Adds `offset` to every generator index.
    pub fn shift(&self, offset: usize) -> Self {
        Self(self.0.iter().map(|l| Letter { generator: l.generator + offset, ..*l }).collect())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Exponent sum of each generator, a vector of length `n`.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for l in &self.0 {
            v[l.generator] += l.exponent() as i64;
        }
        v
    }

    /// Evaluates the word in a group given images of the generators.
    pub fn evaluate<T: Clone>(
        &self,
        images: &[T],
        one: T,
        inv: impl Fn(&T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        self.0.iter().fold(one, |acc, l| {
            let g = &images[l.generator];
            if l.inverse {
                mul(&acc, &inv(g))
            } else {
                mul(&acc, g)
            }
        })
    }

    /// Prefixes `w[..m]` for `m = 0..=len`.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(|m| Word(self.0[..m].to_vec()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "x{}", l.generator)?;
            if l.inverse {
                write!(f, "⁻¹")?;
            }
        }
        Ok(())
    }
}

/// A formal ℤ-combination of words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupRingElement(pub BTreeMap<Word, i64>);

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, 1);
        Self(m)
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        let e = self.0.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &o.0 {
            out.add_term(w.clone(), c);
        }
        out
    }

    /// Left multiplication by a group element.
    pub fn left_mul(&self, g: &Word) -> Self {
        let mut out = Self::zero();
        for (w, &c) in &self.0 {
            out.add_term(g.mul(w), c);
        }
        out
    }

    /// Image under the augmentation-free abelianization `x_j ↦ t^{α_j}` at `t = 1`.
    pub fn augmentation(&self) -> i64 {
        self.0.values().sum()
    }

    /// Evaluation through a linear representation of the free group.
    pub fn evaluate<T>(&self, eval: impl Fn(&Word) -> T, zero: T, add: impl Fn(T, T, i64) -> T) -> T {
        self.0.iter().fold(zero, |acc, (w, &c)| add(acc, eval(w), c))
    }
}

/// Fox derivative `∂w/∂x_g`.
///
/// A positive occurrence contributes its prefix, a negative one contributes
/// minus the prefix that includes the inverted letter.
pub fn fox_derivative(w: &Word, g: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let letters = w.letters();
    for (m, l) in letters.iter().enumerate() {
        if l.generator != g {
            continue;
        }
        if l.inverse {
            out.add_term(Word(letters[..=m].to_vec()), -1);
        } else {
            out.add_term(Word(letters[..m].to_vec()), 1);
        }
    }
    out
}

/// A finite presentation `⟨x_1, …, x_n | r_1, …, r_m⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    /// Checks that every relator only uses existing generators.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, String> {
        if generators.is_empty() {
            return Err("a presentation needs at least one generator".into());
        }
        let n = generators.len();
        for (k, r) in relators.iter().enumerate() {
            if r.max_generator().is_some_and(|g| g >= n) {
                return Err(format!("relator {k} uses a generator index ≥ {n}"));
            }
        }
        Ok(Self { generators, relators })
    }

    /// Generators named `prefix1 … prefixn` and the given relators.
    pub fn with_prefix(prefix: &str, n: usize, relators: Vec<Word>) -> Self {
        let gens = (1..=n).map(|j| format!("{prefix}{j}")).collect();
        Self::new(gens, relators).expect("relators in range")
    }

    /// The free group of rank `n`.
    pub fn free(n: usize) -> Self {
        Self::with_prefix("f", n, Vec::new())
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    /// Integer matrix of exponent sums, one row per relator.
    pub fn abelianized_relators(&self) -> Vec<Vec<i64>> {
        let n = self.num_generators();
        self.relators.iter().map(|r| r.exponent_sums(n)).collect()
    }

    /// Fox Jacobian `∂r_k/∂x_j`, indexed `[k][j]`.
    pub fn fox_jacobian(&self) -> Vec<Vec<GroupRingElement>> {
        self.relators
            .iter()
            .map(|r| (0..self.num_generators()).map(|j| fox_derivative(r, j)).collect())
            .collect()
    }

    /// Adds a generator `g` with defining relator `g w⁻¹`.
    pub fn tietze_add(&self, name: &str, w: &Word) -> Self {
        let n = self.num_generators();
        let mut gens = self.generators.clone();
        gens.push(name.to_string());
        let mut rels = self.relators.clone();
        rels.push(Word::letter(n, 1).mul(&w.inverse()));
        Self { generators: gens, relators: rels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(max_gen: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..max_gen, prop::bool::ANY), 0..max_len).prop_map(|v| {
            Word::from_letters(v.into_iter().map(|(g, s)| Letter::new(g, if s { 1 } else { -1 })))
        })
    }

    #[test]
    fn reduction_is_eager() {
        let w = Word::from_pairs(&[(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
        assert_eq!(w, Word::letter(2, 1));
        assert!(Word::letter(0, 3).mul(&Word::letter(0, -3)).is_empty());
    }

    #[test]
    fn fox_base_cases() {
        let x = Word::letter(0, 1);
        let y = Word::letter(1, 1);
        assert_eq!(fox_derivative(&x, 0), GroupRingElement::from_word(Word::identity()));
        assert_eq!(fox_derivative(&x.mul(&y), 1), GroupRingElement::from_word(x.clone()));
        let mut minus_xinv = GroupRingElement::zero();
        minus_xinv.add_term(x.inverse(), -1);
        assert_eq!(fox_derivative(&x.inverse(), 0), minus_xinv);
    }

    #[test]
    fn deserialization_rejects_powers() {
        assert!(serde_json::from_str::<Word>("[[0, 2]]").is_err());
        let w: Word = serde_json::from_str("[[3, -1], [1, 1]]").unwrap();
        assert_eq!(serde_json::to_string(&w).unwrap(), "[[3,-1],[1,1]]");
    }

    #[test]
    fn tietze_extension_keeps_old_relators() {
        let p = GroupPresentation::with_prefix("x", 2, vec![Word::from_pairs(&[(0, 1), (1, -1)])]);
        let q = p.tietze_add("g", &Word::from_pairs(&[(0, 1), (1, 1)]));
        assert_eq!(q.num_generators(), 3);
        assert_eq!(q.relators[1], Word::from_pairs(&[(2, 1), (1, -1), (0, -1)]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn fox_product_rule(u in word(3, 12), v in word(3, 12), g in 0usize..3) {
            let lhs = fox_derivative(&u.mul(&v), g);
            let rhs = fox_derivative(&u, g).add(&fox_derivative(&v, g).left_mul(&u));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fundamental_formula(w in word(3, 16)) {
            // Σ_j (∂w/∂x_j)(x_j − 1) = w − 1
            let mut lhs = GroupRingElement::zero();
            for j in 0..3 {
                for (p, &c) in &fox_derivative(&w, j).0 {
                    lhs.add_term(p.mul(&Word::letter(j, 1)), c);
                    lhs.add_term(p.clone(), -c);
                }
            }
            let mut rhs = GroupRingElement::from_word(w.clone());
            rhs.add_term(Word::identity(), -1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_is_involutive(w in word(4, 20)) {
            prop_assert_eq!(w.inverse().inverse(), w.clone());
            prop_assert!(w.mul(&w.inverse()).is_empty());
        }
    }
}
