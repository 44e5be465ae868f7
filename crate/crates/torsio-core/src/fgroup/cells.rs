//! Two-dimensional CW complexes labelled by group elements.
//!
//! Each edge carries a word: the element of the ambient group obtained by
//! running along it in the universal cover, relative to a maximal tree whose
//! edges carry the empty word. A presentation complex is the one-vertex case.

use super::{GroupPresentation, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub label: Word,
}

/// A 2-cell attached along a closed edge path starting at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub base: usize,
    /// `(edge index, ±1)` in order of traversal.
    pub boundary: Vec<(usize, i32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex2 {
    pub num_vertices: usize,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
}

impl CellComplex2 {
    /// Cell counts in degrees 0, 1, 2.
    pub fn ranks(&self) -> [usize; 3] {
        [self.num_vertices, self.edges.len(), self.faces.len()]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// The group element read along the boundary of face `f`.
    pub fn attaching_word(&self, f: usize) -> Word {
        let face = &self.faces[f];
        Word::product(
            face.boundary
                .iter()
                .map(|&(e, s)| if s > 0 { self.edges[e].label.clone() } else { self.edges[e].label.inverse() })
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    /// Checks that every face boundary is a closed path from its base vertex.
    pub fn validate(&self) -> Result<(), String> {
        for (k, e) in self.edges.iter().enumerate() {
            if e.tail >= self.num_vertices || e.head >= self.num_vertices {
                return Err(format!("edge {k} has an endpoint out of range"));
            }
        }
        for (k, f) in self.faces.iter().enumerate() {
            let mut at = f.base;
            for &(e, s) in &f.boundary {
                let edge = self.edges.get(e).ok_or_else(|| format!("face {k} uses missing edge {e}"))?;
                let (from, to) = if s > 0 { (edge.tail, edge.head) } else { (edge.head, edge.tail) };
                if from != at {
                    return Err(format!("face {k} is not a connected edge path"));
                }
                at = to;
            }
            if at != f.base {
                return Err(format!("face {k} is not closed"));
            }
        }
        Ok(())
    }
}

/// The presentation 2-complex: one vertex, one loop per generator, one 2-cell
/// per relator attached along that relator.
pub fn presentation_complex(p: &GroupPresentation) -> CellComplex2 {
    let edges = (0..p.num_generators())
        .map(|j| Edge { tail: 0, head: 0, label: Word::letter(j, 1) })
        .collect();
    let faces = p
        .relators
        .iter()
        .map(|r| Face { base: 0, boundary: r.letters().iter().map(|l| (l.generator, l.exponent())).collect() })
        .collect();
    CellComplex2 { num_vertices: 1, edges, faces }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_ranks() {
        let r = Word::from_pairs(&[(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)]);
        let p = GroupPresentation::with_prefix("x", 2, vec![r.clone()]);
        let c = presentation_complex(&p);
        assert_eq!(c.ranks(), [1, 2, 1]);
        assert_eq!(c.attaching_word(0), r);
        c.validate().unwrap();
    }

    #[test]
    fn free_group_ranks() {
        assert_eq!(presentation_complex(&GroupPresentation::free(3)).ranks(), [1, 3, 0]);
    }

    #[test]
    fn open_paths_are_rejected() {
        let c = CellComplex2 {
            num_vertices: 2,
            edges: vec![Edge { tail: 0, head: 1, label: Word::identity() }],
            faces: vec![Face { base: 0, boundary: vec![(0, 1)] }],
        };
        assert!(c.validate().is_err());
    }
}
