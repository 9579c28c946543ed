//! Named example maps, plus a seeded random generator.

use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialMap;
use crate::error::{Error, Result};
use crate::io::{ComplexDocument, ExpectedGroup, MapDocument, Metadata};
use crate::linalg::HomologyGroup;

/// Names accepted by [`generate_fixture`] besides `random:SEED`.
pub const FIXTURE_NAMES: [&str; 5] = ["identity", "fold", "double_cover", "figure_eight", "disc_to_rp2"];

fn side(vertices: &[&str], simplices: &[&[&str]]) -> ComplexDocument {
    ComplexDocument {
        vertices: vertices.iter().map(|v| v.to_string()).collect(),
        simplices: simplices.iter().map(|s| s.iter().map(|v| v.to_string()).collect()).collect(),
    }
}

fn document(name: &str, x: ComplexDocument, y: ComplexDocument, map: &[(&str, &str)], expected: &[(usize, &[i64])]) -> MapDocument {
    let expected_homology =
        expected.iter().map(|&(r, t)| ExpectedGroup::from(&HomologyGroup::from_parts(r, t))).collect();
    MapDocument {
        x,
        y,
        map: map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        metadata: Some(Metadata { fixture: Some(name.to_string()), expected_homology: Some(expected_homology) }),
    }
}

/// Identity of the boundary of a triangle.
pub fn identity() -> MapDocument {
    let c = side(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["a", "c"]]);
    document("identity", c.clone(), c, &[("a", "a"), ("b", "b"), ("c", "c")], &[(1, &[]), (1, &[])])
}

/// A path `m – z – p` folded at `z` onto an edge.
pub fn fold() -> MapDocument {
    document(
        "fold",
        side(&["m", "z", "p"], &[&["m", "z"], &["z", "p"]]),
        side(&["y0", "y1"], &[&["y0", "y1"]]),
        &[("m", "y1"), ("z", "y0"), ("p", "y1")],
        &[(1, &[])],
    )
}

/// Two points onto one.
pub fn double_cover() -> MapDocument {
    document(
        "double_cover",
        side(&["a", "b"], &[&["a"], &["b"]]),
        side(&["y"], &[&["y"]]),
        &[("a", "y"), ("b", "y")],
        &[(1, &[])],
    )
}

/// A hexagon immersed as a figure eight by gluing two opposite vertices.
pub fn figure_eight() -> MapDocument {
    document(
        "figure_eight",
        side(
            &["c0", "c1", "c2", "c3", "c4", "c5"],
            &[&["c0", "c1"], &["c1", "c2"], &["c2", "c3"], &["c3", "c4"], &["c4", "c5"], &["c5", "c0"]],
        ),
        side(
            &["y0", "y1", "y2", "y4", "y5"],
            &[&["y0", "y1"], &["y1", "y2"], &["y2", "y0"], &["y0", "y4"], &["y4", "y5"], &["y5", "y0"]],
        ),
        &[("c0", "y0"), ("c1", "y1"), ("c2", "y2"), ("c3", "y0"), ("c4", "y4"), ("c5", "y5")],
        &[(1, &[]), (2, &[])],
    )
}

/// A triangulated disc with hexagonal boundary onto the six-vertex `RP²`,
/// antipodal boundary vertices identified.
pub fn disc_to_rp2() -> MapDocument {
    let x = side(
        &["A1", "A2", "A3", "A4", "A5", "A6", "I4", "I5", "I6"],
        &[
            &["A1", "A2", "I4"],
            &["A2", "I4", "I5"],
            &["A2", "A3", "I5"],
            &["A3", "A4", "I5"],
            &["A4", "I5", "I6"],
            &["A4", "A5", "I6"],
            &["A5", "A6", "I6"],
            &["A6", "I4", "I6"],
            &["A6", "A1", "I4"],
            &["I4", "I5", "I6"],
        ],
    );
    let y = side(
        &["1", "2", "3", "4", "5", "6"],
        &[
            &["1", "2", "4"],
            &["1", "2", "6"],
            &["1", "3", "4"],
            &["1", "3", "5"],
            &["1", "5", "6"],
            &["2", "3", "5"],
            &["2", "3", "6"],
            &["2", "4", "5"],
            &["3", "4", "6"],
            &["4", "5", "6"],
        ],
    );
    let map = [
        ("A1", "1"),
        ("A2", "2"),
        ("A3", "3"),
        ("A4", "1"),
        ("A5", "2"),
        ("A6", "3"),
        ("I4", "4"),
        ("I5", "5"),
        ("I6", "6"),
    ];
    document("disc_to_rp2", x, y, &map, &[(1, &[]), (0, &[2]), (0, &[])])
}

/// Size parameters for [`random`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub vertices: usize,
    pub facets: usize,
    /// Largest facet dimension.
    pub max_dim: usize,
    /// Largest fibre over a vertex of `Y`.
    pub max_fibre: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self { vertices: 8, facets: 6, max_dim: 2, max_fibre: 3 }
    }
}

/// A random finite simplicial surjection: a random complex `X`, a random
/// proper colouring of its 1-skeleton with classes of size at most
/// `max_fibre`, and `Y` the image complex. Properness makes the quotient
/// finite-to-one, and `Y` is surjected onto by definition.
pub fn random(seed: u64, params: RandomParams) -> MapDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.vertices.max(2);
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for _ in 0..params.facets.max(1) {
        let d = rng.gen_range(1..=params.max_dim.max(1)).min(n - 1);
        let mut s: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, d + 1).copied().collect();
        s.sort_unstable();
        facets.push(s);
    }
    let mut adjacent = vec![vec![false; n]; n];
    for s in &facets {
        for (a, b) in s.iter().tuple_combinations() {
            adjacent[*a][*b] = true;
            adjacent[*b][*a] = true;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut colour = vec![usize::MAX; n];
    let mut class_sizes: Vec<usize> = Vec::new();
    for &v in &order {
        let allowed: Vec<usize> = (0..class_sizes.len())
            .filter(|&c| class_sizes[c] < params.max_fibre.max(1) && (0..n).all(|u| !(adjacent[v][u] && colour[u] == c)))
            .collect();
        let c = match allowed.choose(&mut rng) {
            Some(&c) if rng.gen_bool(0.75) => c,
            _ => {
                class_sizes.push(0);
                class_sizes.len() - 1
            }
        };
        colour[v] = c;
        class_sizes[c] += 1;
    }
    let x_names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let y_names: Vec<String> = (0..class_sizes.len()).map(|i| format!("y{i}")).collect();
    let name_all = |s: &[usize], names: &[String]| s.iter().map(|&v| names[v].clone()).collect::<Vec<_>>();
    let y_facets: Vec<Vec<usize>> = facets.iter().map(|s| s.iter().map(|&v| colour[v]).sorted().collect()).collect();
    MapDocument {
        x: ComplexDocument { vertices: x_names.clone(), simplices: facets.iter().map(|s| name_all(s, &x_names)).collect() },
        y: ComplexDocument {
            vertices: y_names.clone(),
            simplices: y_facets.iter().map(|s| name_all(s, &y_names)).collect(),
        },
        map: (0..n).map(|v| (x_names[v].clone(), y_names[colour[v]].clone())).collect(),
        metadata: Some(Metadata { fixture: Some(format!("random:{seed}")), expected_homology: None }),
    }
}

/// Looks up a fixture by name; `random:SEED` gives [`random`] with default
/// parameters.
pub fn generate_fixture(name: &str) -> Result<MapDocument> {
    match name {
        "identity" => Ok(identity()),
        "fold" => Ok(fold()),
        "double_cover" => Ok(double_cover()),
        "figure_eight" => Ok(figure_eight()),
        "disc_to_rp2" => Ok(disc_to_rp2()),
        _ => match name.strip_prefix("random:").map(str::parse::<u64>) {
            Some(Ok(seed)) => Ok(random(seed, RandomParams::default())),
            _ => Err(Error::UnknownFixture(name.to_string())),
        },
    }
}

/// The map of a named fixture.
pub fn fixture_map(name: &str) -> Result<Arc<SimplicialMap>> {
    generate_fixture(name)?.to_map()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology_of_complex;

    #[test]
    fn named_fixtures_are_valid_and_match_expected_homology() {
        for name in FIXTURE_NAMES {
            let doc = generate_fixture(name).unwrap();
            assert!(doc.validate().unwrap().is_valid(), "{name}");
            let f = doc.to_map().unwrap();
            let expected = doc.metadata.unwrap().expected_homology.unwrap();
            for (n, g) in expected.iter().enumerate() {
                assert_eq!(homology_of_complex(f.target(), n as i64).unwrap(), g.to_group(), "{name} H_{n}");
            }
        }
    }

    #[test]
    fn random_fixtures_are_valid() {
        for seed in 0..50 {
            let doc = random(seed, RandomParams::default());
            let report = doc.validate().unwrap();
            assert!(report.is_valid(), "seed {seed}: {:?}", report.problems);
            assert_eq!(doc, random(seed, RandomParams::default()));
        }
    }

    #[test]
    fn unknown_name() {
        assert_eq!(generate_fixture("torus"), Err(Error::UnknownFixture("torus".into())));
    }
}
