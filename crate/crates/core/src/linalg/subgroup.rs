//! Subgroups of free abelian groups `Z^n` and their quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::homology::HomologyGroup;
use super::matrix::IntegerMatrix;
use super::normal_form::{kernel_basis, row_hermite, smith_normal_form};
use crate::error::{Error, Result};

/// A subgroup of `Z^ambient`, stored as a canonical basis: the nonzero rows of
/// the reduced row Hermite form of its generators (as columns here).
/// Two subgroups are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: usize,
    basis: IntegerMatrix,
    pivots: Vec<usize>,
}

impl Subgroup {
    /// Subgroup generated by the columns of `generators` (an `ambient × g` matrix).
    pub fn from_generators(generators: &IntegerMatrix) -> Self {
        let ambient = generators.nrows();
        let h = row_hermite(&generators.transpose(), false);
        let rank = h.rank();
        let rows: Vec<usize> = (0..rank).collect();
        let basis = h.form.select_rows(&rows).transpose();
        let pivots = h.pivots.iter().map(|&(_, c)| c).collect();
        Self { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: IntegerMatrix::zeros(ambient, 0), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: IntegerMatrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the listed standard basis vectors.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        let mut sorted = coords.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut basis = IntegerMatrix::zeros(ambient, sorted.len());
        for (j, &c) in sorted.iter().enumerate() {
            basis.set(c, j, BigInt::one());
        }
        Self { ambient, basis, pivots: sorted }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Canonical basis, one column per generator.
    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not a member.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient, "vector length must match ambient rank");
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (j, &c) in self.pivots.iter().enumerate() {
            let p = self.basis.get(c, j);
            let (q, r) = rest[c].div_rem(p);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for i in c..self.ambient {
                    let b = self.basis.get(i, j);
                    if !b.is_zero() {
                        rest[i] -= &q * b;
                    }
                }
            }
            coeffs.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates_of(v).is_some()
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in sum");
        Subgroup::from_generators(&self.basis.hstack(&other.basis))
    }

    /// Image under `map` (whose column count must equal the ambient rank).
    pub fn image(&self, map: &IntegerMatrix) -> Subgroup {
        assert_eq!(map.ncols(), self.ambient, "map does not act on this ambient group");
        Subgroup::from_generators(&map.mul(&self.basis))
    }

    /// `{x : map x ∈ target}`.
    pub fn preimage(map: &IntegerMatrix, target: &Subgroup) -> Subgroup {
        assert_eq!(map.nrows(), target.ambient, "map does not land in the target ambient group");
        let n = map.ncols();
        let stacked = map.hstack(&target.basis.neg());
        let k = kernel_basis(&stacked);
        let rows: Vec<usize> = (0..n).collect();
        Subgroup::from_generators(&k.select_rows(&rows))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        // x = A a with A a in other
        let pre = Subgroup::preimage(&self.basis, other);
        pre.image(&self.basis)
    }
}

/// The quotient `A / B` for `B ⊆ A ⊆ Z^n`, with a presentation that can
/// assign coordinates to elements of `A`.
#[derive(Clone, Debug)]
pub struct Quotient {
    numerator: Subgroup,
    change: IntegerMatrix,
    /// For every kept basis direction: its cyclic order (`0` = infinite).
    orders: Vec<BigInt>,
    kept: Vec<usize>,
    generators: IntegerMatrix,
}

impl Quotient {
    pub fn new(numerator: &Subgroup, denominator: &Subgroup) -> Result<Self> {
        if numerator.ambient != denominator.ambient {
            return Err(Error::DimensionMismatch("subgroups live in different ambient groups".into()));
        }
        let a = numerator.rank();
        let mut coords = IntegerMatrix::zeros(a, denominator.rank());
        for (j, col) in denominator.basis.columns().iter().enumerate() {
            let c = numerator.coordinates_of(col).ok_or(Error::NotASubgroup)?;
            for (i, v) in c.into_iter().enumerate() {
                coords.set(i, j, v);
            }
        }
        let snf = smith_normal_form(&coords);
        let factors = snf.invariant_factors();
        let mut orders = Vec::new();
        let mut kept = Vec::new();
        for i in 0..a {
            let d = factors.get(i).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                kept.push(i);
                orders.push(d);
            }
        }
        let gens_all = numerator.basis.mul(&snf.left_inverse);
        let generators = gens_all.select_cols(&kept);
        Ok(Self { numerator: numerator.clone(), change: snf.left, orders, kept, generators })
    }

    pub fn group(&self) -> HomologyGroup {
        HomologyGroup::from_cyclic_orders(self.orders.iter().cloned())
    }

    /// Orders of the chosen generators (`0` = free), in generator order.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Representatives in the ambient group, one column per generator.
    pub fn generators(&self) -> &IntegerMatrix {
        &self.generators
    }

    /// Coordinates of `v ∈ A` against [`Quotient::generators`], torsion parts reduced
    /// into `[0, order)`.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self.numerator.coordinates_of(v).ok_or(Error::NotASubgroup)?;
        let z = self.change.mul_vec(&y);
        Ok(self
            .kept
            .iter()
            .zip(&self.orders)
            .map(|(&i, d)| if d.is_zero() { z[i].clone() } else { z[i].mod_floor(d) })
            .collect())
    }
}

/// Invariant factors of `A / B`.
pub fn subgroup_quotient(numerator: &Subgroup, denominator: &Subgroup) -> Result<HomologyGroup> {
    Ok(Quotient::new(numerator, denominator)?.group())
}

/// A finitely presented abelian group `Z^g / diag(orders)` used to take
/// homology of complexes whose terms already carry torsion.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    pub orders: Vec<BigInt>,
}

impl PresentedGroup {
    pub fn from_quotient(q: &Quotient) -> Self {
        Self { orders: q.orders().to_vec() }
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    fn relations(&self) -> Subgroup {
        let g = self.orders.len();
        let mut m = IntegerMatrix::zeros(g, g);
        for (i, d) in self.orders.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        Subgroup::from_generators(&m)
    }
}

/// Homology at the middle of `incoming: prev -> mid`, `outgoing: mid -> next`,
/// where maps are integer matrices on generator coordinates.
pub fn presented_homology(
    incoming: &IntegerMatrix,
    mid: &PresentedGroup,
    outgoing: &IntegerMatrix,
    next: &PresentedGroup,
) -> Result<HomologyGroup> {
    let cycles = Subgroup::preimage(outgoing, &next.relations());
    let boundaries = mid.relations().sum(&Subgroup::from_generators(incoming));
    subgroup_quotient(&cycles, &boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diagonal_quotient() {
        let a = Subgroup::full(2);
        let b = Subgroup::from_generators(&IntegerMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(subgroup_quotient(&a, &b).unwrap(), HomologyGroup::from_parts(0, &[6]));
        assert_eq!(subgroup_quotient(&a, &a).unwrap(), HomologyGroup::trivial());
        assert_eq!(subgroup_quotient(&a, &Subgroup::zero(2)).unwrap(), HomologyGroup::free(2));
    }

    #[test]
    fn not_a_subgroup() {
        let a = Subgroup::coordinate(2, &[0]);
        let b = Subgroup::coordinate(2, &[1]);
        assert_eq!(subgroup_quotient(&a, &b).unwrap_err(), Error::NotASubgroup);
    }

    #[test]
    fn canonical_basis_is_generator_independent() {
        let g1 = IntegerMatrix::from_rows(&[[1, 0], [1, 2], [0, 4]]);
        let g2 = IntegerMatrix::from_rows(&[[1, 1], [1, 3], [0, 4]]);
        assert_eq!(Subgroup::from_generators(&g1), Subgroup::from_generators(&g2));
    }

    #[test]
    fn preimage_and_intersection() {
        let m = IntegerMatrix::from_rows(&[[2]]);
        let target = Subgroup::from_generators(&IntegerMatrix::from_rows(&[[4]]));
        let pre = Subgroup::preimage(&m, &target);
        assert_eq!(pre, Subgroup::from_generators(&IntegerMatrix::from_rows(&[[2]])));
        let a = Subgroup::from_generators(&IntegerMatrix::from_rows(&[[2]]));
        let b = Subgroup::from_generators(&IntegerMatrix::from_rows(&[[3]]));
        assert_eq!(a.intersection(&b), Subgroup::from_generators(&IntegerMatrix::from_rows(&[[6]])));
    }

    #[test]
    fn quotient_coordinates() {
        let a = Subgroup::full(2);
        let b = Subgroup::from_generators(&IntegerMatrix::from_rows(&[[2], [0]]));
        let q = Quotient::new(&a, &b).unwrap();
        assert_eq!(q.group(), HomologyGroup::from_parts(1, &[2]));
        let c = q.coordinates(&big(&[2, 0])).unwrap();
        assert!(c.iter().all(Zero::is_zero));
        let c1 = q.coordinates(&big(&[1, 0])).unwrap();
        assert!(!c1.iter().all(Zero::is_zero));
    }

    #[test]
    fn presented_homology_of_torsion_map() {
        // Z/2 --0--> Z : homology at Z/2 is Z/2
        let mid = PresentedGroup { orders: big(&[2]) };
        let next = PresentedGroup { orders: big(&[0]) };
        let h = presented_homology(&IntegerMatrix::zeros(1, 0), &mid, &IntegerMatrix::zeros(1, 1), &next).unwrap();
        assert_eq!(h, HomologyGroup::from_parts(0, &[2]));
    }
}
