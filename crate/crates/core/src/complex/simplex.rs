use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sign of the permutation that sorts `values` (which must be pairwise distinct).
pub fn sorting_sign<T: Ord>(values: &[T]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A geometric simplex, stored as its strictly increasing list of vertex ids.
///
/// Ordering is lexicographic on the vertex list, so sorting the simplices of
/// one dimension gives the canonical chain basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Canonical simplex on the given vertex set (in any order).
    pub fn new(vertices: impl Into<Vec<usize>>) -> Result<Self> {
        Self::oriented(&vertices.into()).map(|(s, _)| s)
    }

    /// Canonical simplex together with the orientation sign of the given
    /// vertex order relative to the sorted order.
    pub fn oriented(vertices: &[usize]) -> Result<(Self, i64)> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex(Vec::new()));
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(vertices.to_vec()));
        }
        Ok((Simplex(sorted), sorting_sign(vertices)))
    }

    /// Wraps an already strictly increasing vertex list.
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The face opposite the `i`-th vertex. Panics on a 0-simplex.
    pub fn face(&self, i: usize) -> Simplex {
        assert!(self.0.len() > 1, "a vertex has no proper faces");
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    /// Boundary terms `(sign, face)` of the alternating-sum face rule.
    pub fn boundary(&self) -> Vec<(i64, Simplex)> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len()).map(|i| (if i % 2 == 0 { 1 } else { -1 }, self.face(i))).collect()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn all_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |mask| {
            Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
        })
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
