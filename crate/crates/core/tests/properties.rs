use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use multipoint::complex::{boundary_matrix, validate_map, Chain, SimplicialComplex, SimplicialMap};
use multipoint::fixtures::{random, RandomParams};
use multipoint::linalg::{smith_normal_form, IntegerMatrix, Subgroup};
use multipoint::multiplicity::SkElement;

fn matrix_strategy(max: usize) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntegerMatrix::from_rows(&rows))
    })
}

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0usize..6, 1..=3), 1..6).prop_map(|facets| {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|s| s.into_iter().collect()).collect();
        SimplicialComplex::new(6, &facets).expect("valid facets")
    })
}

fn is_unimodular(m: &IntegerMatrix) -> bool {
    m.determinant().abs().is_one()
}

/// Brute force over all vertex subsets of the target.
fn brute_force_valid(vertex_map: &[usize], x: &SimplicialComplex, y: &SimplicialComplex) -> bool {
    let mut images = BTreeSet::new();
    for s in x.all_simplices() {
        let image: BTreeSet<usize> = s.vertices().iter().map(|&v| vertex_map[v]).collect();
        if image.len() != s.vertices().len() {
            return false;
        }
        let image: Vec<usize> = image.into_iter().collect();
        if !y.all_simplices().any(|t| t.vertices() == image.as_slice()) {
            return false;
        }
        images.insert(image);
    }
    y.all_simplices().all(|t| images.contains(t.vertices()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_postconditions(m in matrix_strategy(12)) {
        let s = smith_normal_form(&m);
        prop_assert!(is_unimodular(&s.left) && is_unimodular(&s.right));
        prop_assert!(s.left.mul(&s.left_inverse).is_identity());
        prop_assert!(s.right.mul(&s.right_inverse).is_identity());
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal.clone());
        prop_assert_eq!(s.left_inverse.mul(&s.diagonal).mul(&s.right_inverse), m.clone());
        let d = s.invariant_factors();
        prop_assert!(d.iter().all(|x| x.is_positive()));
        prop_assert!(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        for i in 0..s.diagonal.nrows() {
            for j in 0..s.diagonal.ncols() {
                prop_assert!(i == j || s.diagonal.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn boundary_squares_to_zero(x in complex_strategy()) {
        for n in 2..=x.dim() {
            let product = boundary_matrix(&x, n - 1).unwrap().mul(&boundary_matrix(&x, n).unwrap());
            prop_assert!(product.is_zero());
        }
        for s in x.all_simplices() {
            prop_assert!(Chain::from_simplex(s.clone(), 1).boundary().boundary().is_zero());
        }
    }

    #[test]
    fn pushforward_is_a_chain_map(seed in any::<u64>()) {
        let f = random(seed, RandomParams::default()).to_map().unwrap();
        for s in f.source().all_simplices().filter(|s| s.dim() > 0) {
            let c = Chain::from_simplex(s.clone(), 1);
            prop_assert_eq!(f.pushforward(&c.boundary()).unwrap(), f.pushforward(&c).unwrap().boundary());
        }
    }

    #[test]
    fn validate_map_agrees_with_brute_force(
        x in complex_strategy(),
        y in complex_strategy(),
        assignment in prop::collection::vec(0usize..6, 6),
    ) {
        let report = validate_map(&assignment, &x, &y);
        prop_assert_eq!(report.is_valid(), brute_force_valid(&assignment, &x, &y));
        if report.is_valid() {
            let f = SimplicialMap::new(Arc::new(x), Arc::new(y), assignment).unwrap();
            prop_assert!(f.is_valid());
        }
    }

    #[test]
    fn random_fixtures_are_valid(seed in any::<u64>()) {
        prop_assert!(random(seed, RandomParams::default()).validate().unwrap().is_valid());
    }

    #[test]
    fn symmetric_group_laws(
        a in 0usize..24,
        b in 0usize..24,
        c in 0usize..24,
    ) {
        let all = SkElement::all(4);
        let (a, b, c) = (&all[a], &all[b], &all[c]);
        let id = SkElement::identity(4);
        prop_assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
        prop_assert_eq!(&a.compose(&id), a);
        prop_assert_eq!(a.compose(&a.inverse()), id);
        prop_assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
        let tuple = ['p', 'q', 'r', 's'];
        prop_assert_eq!(a.permute_tuple(&b.permute_tuple(&tuple)), a.compose(b).permute_tuple(&tuple));
    }

    #[test]
    fn subgroup_ignores_choice_of_generators(m in matrix_strategy(6), k in -5i64..=5, i in 0usize..6, j in 0usize..6) {
        // Adding a multiple of one generator to another and appending a
        // combination of generators span the same subgroup.
        let n = m.ncols();
        let (i, j) = (i % n, j % n);
        let mut moved = m.clone();
        if i != j {
            for r in 0..m.nrows() {
                let v = m.get(r, i) + BigInt::from(k) * m.get(r, j);
                moved.set(r, i, v);
            }
        }
        let combo: Vec<BigInt> = (0..n).map(|c| BigInt::from((c as i64 + k) % 3)).collect();
        let extra = m.mul(&IntegerMatrix::from_columns(&[combo], n));
        let widened = moved.hstack(&extra);
        prop_assert_eq!(Subgroup::from_generators(&m), Subgroup::from_generators(&widened));
        prop_assert_eq!(Subgroup::from_generators(&m).rank(), multipoint::linalg::rank(&m));
    }
}
