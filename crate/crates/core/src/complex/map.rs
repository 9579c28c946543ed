use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::chain::Chain;
use super::simplex::Simplex;
use super::simplicial::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

/// Outcome of [`validate_map`]. Failures are collected, not thrown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapReport {
    /// Every simplex image is a simplex of the target.
    pub simplicial: bool,
    /// No simplex collapses: the vertex map is injective on every simplex.
    pub finite_to_one: bool,
    /// Every target simplex is the image of some source simplex.
    pub surjective: bool,
    pub problems: Vec<String>,
}

impl MapReport {
    pub fn is_valid(&self) -> bool {
        self.simplicial && self.finite_to_one && self.surjective
    }
}

/// Checks a vertex assignment `X → Y` for the three properties needed
/// downstream. The assignment must be total on the vertices of `x`.
pub fn validate_map(vertex_map: &[usize], x: &SimplicialComplex, y: &SimplicialComplex) -> MapReport {
    let mut report = MapReport { simplicial: true, finite_to_one: true, surjective: true, problems: Vec::new() };
    if vertex_map.len() != x.num_vertices() || vertex_map.iter().any(|&w| w >= y.num_vertices()) {
        report.simplicial = false;
        report.problems.push("vertex map is not a total map into the target vertices".into());
        report.surjective = false;
        return report;
    }
    let mut hit: BTreeSet<Simplex> = BTreeSet::new();
    for s in x.all_simplices() {
        let image: BTreeSet<usize> = s.vertices().iter().map(|&v| vertex_map[v]).collect();
        if image.len() != s.vertices().len() && report.finite_to_one {
            report.finite_to_one = false;
            report.problems.push(format!("simplex {s} collapses under the vertex map"));
        }
        let image = Simplex::from_sorted(image.into_iter().collect());
        if !y.contains(&image) {
            if report.simplicial {
                report.problems.push(format!("image of simplex {s} is not a simplex of the target"));
            }
            report.simplicial = false;
        } else if image.dim() == s.dim() {
            hit.insert(image);
        }
    }
    if let Some(missed) = y.all_simplices().find(|s| !hit.contains(*s)) {
        report.surjective = false;
        report.problems.push(format!("target simplex {missed} is not the image of a source simplex"));
    }
    report
}

/// A simplicial map given by its vertex assignment.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    /// Requires a total vertex assignment under which every simplex image is a
    /// target simplex. Finite-to-one and surjectivity are reported by
    /// [`SimplicialMap::report`], not enforced here.
    pub fn new(source: Arc<SimplicialComplex>, target: Arc<SimplicialComplex>, vertex_map: Vec<usize>) -> Result<Self> {
        let report = validate_map(&vertex_map, &source, &target);
        if !report.simplicial {
            return Err(Error::InvalidMap(report.problems.join("; ")));
        }
        Ok(Self { source, target, vertex_map })
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn report(&self) -> MapReport {
        validate_map(&self.vertex_map, &self.source, &self.target)
    }

    pub fn is_valid(&self) -> bool {
        self.report().is_valid()
    }

    /// Canonical image simplex and orientation sign, or `None` if `s` collapses.
    pub fn image_simplex(&self, s: &Simplex) -> Option<(Simplex, i64)> {
        let image: Vec<usize> = s.vertices().iter().map(|&v| self.vertex_map[v]).collect();
        Simplex::oriented(&image).ok()
    }

    /// `f_#(c)`: each simplex goes to the sign of the permutation sorting its
    /// image vertices times the sorted image; collapsed simplices go to 0.
    pub fn pushforward(&self, c: &Chain) -> Result<Chain> {
        c.check_on(&self.source)?;
        let mut out = Chain::zero(c.degree());
        for (s, m) in c.terms() {
            if let Some((image, sign)) = self.image_simplex(s) {
                out.add_term(image, sign * m);
            }
        }
        Ok(out)
    }

    /// Matrix of `f_#: C_n(source) → C_n(target)`.
    pub fn matrix(&self, n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.target.count(n), self.source.count(n));
        for (j, s) in self.source.simplices(n).iter().enumerate() {
            if let Some((image, sign)) = self.image_simplex(s) {
                let i = self.target.index_of(&image).expect("map is simplicial");
                m.set(i, j, BigInt::from(sign));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    fn fold() -> SimplicialMap {
        // vertices m=0, z=1, p=2; Y: 0, 1
        let x = Arc::new(build_complex(&[[0, 1], [1, 2]]).unwrap());
        let y = Arc::new(build_complex(&[[0, 1]]).unwrap());
        SimplicialMap::new(x, y, vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn fold_is_valid() {
        assert!(fold().is_valid());
    }

    #[test]
    fn fold_pushforward_sign() {
        let f = fold();
        let c = Chain::oriented(&[0, 1], 1).unwrap();
        let image = f.pushforward(&c).unwrap();
        assert_eq!(image, Chain::oriented(&[0, 1], -1).unwrap());
    }

    #[test]
    fn collapse_and_non_surjective_reported() {
        let edge = build_complex(&[[0, 1]]).unwrap();
        let point = build_complex(&[[0]]).unwrap();
        let r = validate_map(&[0, 0], &edge, &point);
        assert!(r.simplicial && !r.finite_to_one);
        let tri = build_complex(&[[0, 1, 2]]).unwrap();
        let r = validate_map(&[0, 1], &edge, &tri);
        assert!(r.simplicial && r.finite_to_one && !r.surjective);
    }

    #[test]
    fn chain_off_source_rejected() {
        let f = fold();
        let c = Chain::oriented(&[0, 2], 1).unwrap();
        assert!(matches!(f.pushforward(&c), Err(Error::ComplexMismatch(_))));
    }
}
