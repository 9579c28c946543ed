use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::matrix::IntegerMatrix;
use super::normal_form::{invariant_factors, rank};
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_s` in
/// invariant-factor form: every `d_i ≥ 2` and `d_i | d_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    /// Canonicalizes an arbitrary list of cyclic orders (`0` meaning `Z`,
    /// `1` meaning trivial) into invariant-factor form.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        let mut rank = 0;
        let mut finite = Vec::new();
        for d in orders {
            let d = if d < BigInt::zero() { -d } else { d };
            if d.is_zero() {
                rank += 1;
            } else if !d.is_one() {
                finite.push(d);
            }
        }
        if finite.len() <= 1 {
            return Self { rank, torsion: finite };
        }
        let n = finite.len();
        let mut diag = IntegerMatrix::zeros(n, n);
        for (i, d) in finite.into_iter().enumerate() {
            diag.set(i, i, d);
        }
        let torsion = invariant_factors(&diag).into_iter().filter(|d| !d.is_one()).collect();
        Self { rank, torsion }
    }

    pub fn from_parts(rank: usize, torsion: &[i64]) -> Self {
        Self::from_cyclic_orders(
            std::iter::repeat_n(BigInt::zero(), rank).chain(torsion.iter().map(|&d| BigInt::from(d))),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum<'a, I: IntoIterator<Item = &'a HomologyGroup>>(groups: I) -> Self {
        let mut orders = Vec::new();
        for g in groups {
            orders.extend(std::iter::repeat_n(BigInt::zero(), g.rank));
            orders.extend(g.torsion.iter().cloned());
        }
        Self::from_cyclic_orders(orders)
    }

    /// Torsion orders as `u64`, when they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(|d| d.to_u64()).collect()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomologyGroup({self})")
    }
}

pub(crate) fn bigint_json(values: &[BigInt]) -> Vec<serde_json::Value> {
    values
        .iter()
        .map(|d| match d.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(d.to_string()),
        })
        .collect()
}

impl Serialize for HomologyGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("HomologyGroup", 2)?;
        s.serialize_field("rank", &self.rank)?;
        s.serialize_field("torsion", &bigint_json(&self.torsion))?;
        s.end()
    }
}

/// Homology `ker(d_n) / im(d_next)` of `C_{n+1} --d_next--> C_n --d_n--> C_{n-1}`.
///
/// The kernel of `d_n` is a direct summand of `C_n`, so the torsion of the
/// quotient is exactly the torsion of `C_n / im(d_next)`.
pub fn homology_pair(d_n: &IntegerMatrix, d_next: &IntegerMatrix) -> Result<HomologyGroup> {
    if d_n.ncols() != d_next.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "d_n has {} columns but d_next has {} rows",
            d_n.ncols(),
            d_next.nrows()
        )));
    }
    if !d_n.mul(d_next).is_zero() {
        return Err(Error::NotAComplex("d_n * d_next != 0".into()));
    }
    let dim_kernel = d_n.ncols() - rank(d_n);
    let factors = invariant_factors(d_next);
    let torsion = factors.iter().filter(|d| !d.is_one()).cloned().collect();
    Ok(HomologyGroup { rank: dim_kernel - factors.len(), torsion })
}

/// Homology of every position of a chain complex given by its differentials.
///
/// `differentials[i]` maps degree `i` to degree `i - 1`; the first is usually a
/// zero-row matrix. Missing differentials past the end are zero.
pub fn chain_complex_homology(differentials: &[IntegerMatrix]) -> Result<Vec<HomologyGroup>> {
    let mut out = Vec::with_capacity(differentials.len());
    for (n, d) in differentials.iter().enumerate() {
        let next = match differentials.get(n + 1) {
            Some(m) => m.clone(),
            None => IntegerMatrix::zeros(d.ncols(), 0),
        };
        out.push(homology_pair(d, &next)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_h1() {
        // vertices a<b<c, edges ab, ac, bc
        let d1 = IntegerMatrix::from_rows(&[[-1, -1, 0], [1, 0, -1], [0, 1, 1]]);
        let d2 = IntegerMatrix::zeros(3, 0);
        assert_eq!(homology_pair(&d1, &d2).unwrap(), HomologyGroup::free(1));
    }

    #[test]
    fn zero_maps_give_free_group() {
        let d = IntegerMatrix::zeros(0, 4);
        let next = IntegerMatrix::zeros(4, 0);
        assert_eq!(homology_pair(&d, &next).unwrap(), HomologyGroup::free(4));
    }

    #[test]
    fn non_complex_rejected() {
        let a = IntegerMatrix::from_rows(&[[1]]);
        assert!(matches!(homology_pair(&a, &a), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn canonical_orders() {
        let g = HomologyGroup::from_parts(1, &[2, 3, 1]);
        assert_eq!(g.torsion(), &[BigInt::from(6)]);
        assert_eq!(g.to_string(), "Z + Z/6");
        let h = HomologyGroup::from_parts(0, &[2, 4, 6]);
        assert_eq!(h.torsion(), &[BigInt::from(2), BigInt::from(2), BigInt::from(12)]);
    }
}
