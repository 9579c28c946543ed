use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use super::simplex::Simplex;
use crate::error::{Error, Result};
use crate::linalg::{homology_pair, HomologyGroup, IntegerMatrix};

/// A finite abstract simplicial complex on vertices `0..num_vertices`.
///
/// Vertex order is the index order; simplices of each dimension are kept
/// sorted lexicographically and that order is the chain basis.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels.len() == other.labels.len() && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

/// Face closure of `maximal`, with vertex count inferred from the largest id.
pub fn build_complex<S: AsRef<[usize]>>(maximal: &[S]) -> Result<SimplicialComplex> {
    let n = maximal.iter().flat_map(|s| s.as_ref().iter().copied()).max().map_or(0, |m| m + 1);
    SimplicialComplex::new(n, maximal)
}

impl SimplicialComplex {
    /// Face closure of `maximal` on `num_vertices` vertices; every vertex is a
    /// 0-simplex even when no listed simplex uses it.
    pub fn new<S: AsRef<[usize]>>(num_vertices: usize, maximal: &[S]) -> Result<Self> {
        let labels = (0..num_vertices).map(|i| i.to_string()).collect();
        Self::with_labels(labels, maximal)
    }

    pub fn with_labels<S: AsRef<[usize]>>(labels: Vec<String>, maximal: &[S]) -> Result<Self> {
        let n = labels.len();
        let mut all: BTreeSet<Simplex> = (0..n).map(|v| Simplex::from_sorted(vec![v])).collect();
        for s in maximal {
            let s = s.as_ref();
            if s.iter().any(|&v| v >= n) {
                return Err(Error::InvalidSimplex(s.to_vec()));
            }
            let simplex = Simplex::new(s.to_vec())?;
            if all.contains(&simplex) {
                continue;
            }
            all.extend(simplex.all_faces());
        }
        Ok(Self::from_closed_set(labels, all))
    }

    /// Builds from a set already known to be face-closed.
    pub(crate) fn from_closed_set(labels: Vec<String>, all: BTreeSet<Simplex>) -> Self {
        let mut simplices: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.dim();
            if simplices.len() <= d {
                simplices.resize_with(d + 1, Vec::new);
            }
            simplices[d].push(s);
        }
        // Lexicographic iteration order restricted to one dimension is still
        // lexicographic, so each level comes out sorted.
        let mut index = HashMap::new();
        for level in &simplices {
            for (i, s) in level.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        Self { labels, simplices, index }
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Top dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    /// Simplices of dimension `n` in basis order (empty beyond the top dimension).
    pub fn simplices(&self, n: usize) -> &[Simplex] {
        self.simplices.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, n: usize) -> usize {
        self.simplices(n).len()
    }

    /// Number of simplices per dimension, `f_0, f_1, …`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` in the basis of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Maximal simplices (not a proper face of any other simplex).
    pub fn facets(&self) -> Vec<Simplex> {
        let covered: BTreeSet<Simplex> = self
            .simplices
            .iter()
            .skip(1)
            .flatten()
            .flat_map(|s| (0..s.vertices().len()).map(move |i| s.face(i)))
            .collect();
        self.all_simplices().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    /// Matrix of `∂_n` for any `n ≥ 0`; zero-sized beyond the top dimension and
    /// a `0 × f_0` matrix in degree 0.
    pub(crate) fn boundary_unchecked(&self, n: usize) -> IntegerMatrix {
        if n == 0 {
            return IntegerMatrix::zeros(0, self.count(0));
        }
        let mut m = IntegerMatrix::zeros(self.count(n - 1), self.count(n));
        for (j, s) in self.simplices(n).iter().enumerate() {
            for (sign, face) in s.boundary() {
                m.set(self.index[&face], j, BigInt::from(sign));
            }
        }
        m
    }

    fn check_degree(&self, n: i64) -> Result<usize> {
        if n < 0 || n > self.dim() {
            return Err(Error::DegreeOutOfRange { degree: n, dim: self.dim() });
        }
        Ok(n as usize)
    }

    /// Homology in every degree from 0 to the top dimension.
    pub fn homology(&self) -> Vec<HomologyGroup> {
        (0..=self.dim()).map(|n| homology_of_complex(self, n).expect("degree in range")).collect()
    }
}

/// Matrix of `∂_n: C_n → C_{n−1}` in the canonical simplex bases.
pub fn boundary_matrix(x: &SimplicialComplex, n: i64) -> Result<IntegerMatrix> {
    let n = x.check_degree(n)?;
    Ok(x.boundary_unchecked(n))
}

/// `H_n(X; Z)` in invariant-factor form.
pub fn homology_of_complex(x: &SimplicialComplex, n: i64) -> Result<HomologyGroup> {
    let n = x.check_degree(n)?;
    homology_pair(&x.boundary_unchecked(n), &x.boundary_unchecked(n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_boundary_closure() {
        let x = build_complex(&[[0, 1], [1, 2], [0, 2]]).unwrap();
        assert_eq!(x.f_vector(), vec![3, 3]);
        assert_eq!(x.dim(), 1);
        let d1 = boundary_matrix(&x, 1).unwrap();
        for j in 0..3 {
            let s: BigInt = d1.column(j).iter().sum();
            assert_eq!(s, BigInt::from(0));
        }
        assert!(boundary_matrix(&x, 0).unwrap().mul(&d1).is_zero());
    }

    #[test]
    fn full_triangle() {
        let x = build_complex(&[[0, 1, 2]]).unwrap();
        assert_eq!(x.f_vector(), vec![3, 3, 1]);
        assert_eq!(boundary_matrix(&x, 2).unwrap(), IntegerMatrix::from_rows(&[[1], [-1], [1]]));
        assert_eq!(x.facets(), vec![Simplex::new(vec![0, 1, 2]).unwrap()]);
    }

    #[test]
    fn single_edge_and_point() {
        let e = build_complex(&[[0, 1]]).unwrap();
        assert_eq!(boundary_matrix(&e, 1).unwrap(), IntegerMatrix::from_rows(&[[-1], [1]]));
        let p = build_complex(&[[0]]).unwrap();
        assert_eq!(p.f_vector(), vec![1]);
        assert_eq!(homology_of_complex(&p, 0).unwrap(), HomologyGroup::free(1));
    }

    #[test]
    fn degree_out_of_range() {
        let x = build_complex(&[[0, 1]]).unwrap();
        assert_eq!(boundary_matrix(&x, 2).unwrap_err(), Error::DegreeOutOfRange { degree: 2, dim: 1 });
        assert!(homology_of_complex(&x, -1).is_err());
    }

    #[test]
    fn duplicate_vertex_rejected() {
        assert_eq!(build_complex(&[[0, 0]]).unwrap_err(), Error::InvalidSimplex(vec![0, 0]));
    }
}
