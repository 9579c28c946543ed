use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::simplex::Simplex;
use super::simplicial::SimplicialComplex;
use crate::error::{Error, Result};

/// A sparse integer combination of canonically oriented simplices of one degree.
///
/// Coefficients are `i64`; every update is overflow-checked and panics rather
/// than wrapping (chains in this crate stay tiny, matrices carry big integers).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Simplex, i64>,
}

fn checked(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("chain coefficient overflow")
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn from_simplex(s: Simplex, coeff: i64) -> Self {
        let mut c = Self::zero(s.dim());
        c.add_term(s, coeff);
        c
    }

    /// The chain `coeff · [v_0, …, v_n]` for an ordered vertex list, rewritten
    /// on the canonical representative with the sorting sign.
    pub fn oriented(vertices: &[usize], coeff: i64) -> Result<Self> {
        let (s, sign) = Simplex::oriented(vertices)?;
        Ok(Self::from_simplex(s, sign * coeff))
    }

    pub fn from_terms<I: IntoIterator<Item = (Simplex, i64)>>(degree: usize, terms: I) -> Result<Self> {
        let mut c = Self::zero(degree);
        for (s, m) in terms {
            if s.dim() != degree {
                return Err(Error::ComplexMismatch(format!("simplex {s} has dimension {} not {degree}", s.dim())));
            }
            c.add_term(s, m);
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &Simplex) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, i64)> {
        self.terms.iter().map(|(s, &m)| (s, m))
    }

    /// `‖c‖ = Σ |m_i|`.
    pub fn l1_norm(&self) -> u64 {
        self.terms.values().map(|m| m.unsigned_abs()).sum()
    }

    pub fn add_term(&mut self, s: Simplex, coeff: i64) {
        debug_assert_eq!(s.dim(), self.degree);
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let m = checked(*o.get(), coeff);
                if m == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = m;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Chain, factor: i64) {
        assert_eq!(self.degree, other.degree, "adding chains of different degrees");
        for (s, &m) in &other.terms {
            self.add_term(s.clone(), m.checked_mul(factor).expect("chain coefficient overflow"));
        }
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        let mut c = self.clone();
        c.add_scaled(other, 1);
        c
    }

    pub fn minus(&self, other: &Chain) -> Chain {
        let mut c = self.clone();
        c.add_scaled(other, -1);
        c
    }

    pub fn scaled(&self, factor: i64) -> Chain {
        let mut c = Chain::zero(self.degree);
        c.add_scaled(self, factor);
        c
    }

    /// `∂c`. The boundary of a 0-chain is the zero 0-chain (no augmentation).
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, &m) in &self.terms {
            for (sign, face) in s.boundary() {
                out.add_term(face, sign * m);
            }
        }
        out
    }

    /// Errors unless every simplex is a member of `x`.
    pub fn check_on(&self, x: &SimplicialComplex) -> Result<()> {
        match self.terms.keys().find(|s| !x.contains(s)) {
            Some(s) => Err(Error::ComplexMismatch(format!("simplex {s} is not in the complex"))),
            None => Ok(()),
        }
    }

    /// Coordinate vector in the basis of `C_degree(x)`.
    pub fn to_vector(&self, x: &SimplicialComplex) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); x.count(self.degree)];
        for (s, &m) in &self.terms {
            let i = x.index_of(s).ok_or_else(|| Error::ComplexMismatch(format!("simplex {s} is not in the complex")))?;
            v[i] = BigInt::from(m);
        }
        Ok(v)
    }

    /// Chain with the given coordinates in the basis of `C_degree(x)`.
    pub fn from_vector(x: &SimplicialComplex, degree: usize, v: &[BigInt]) -> Chain {
        assert_eq!(v.len(), x.count(degree), "coordinate vector has the wrong length");
        let mut c = Chain::zero(degree);
        for (s, m) in x.simplices(degree).iter().zip(v) {
            let m = m.to_i64().expect("coefficient exceeds i64");
            c.add_term(s.clone(), m);
        }
        c
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(s, m)| format!("{m}{s}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn boundary_of_boundary_is_zero() {
        let c = Chain::oriented(&[0, 1, 2], 1).unwrap();
        assert!(c.boundary().boundary().is_zero());
        assert_eq!(c.boundary().len(), 3);
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut c = Chain::oriented(&[0, 1], 2).unwrap();
        c.add_scaled(&Chain::oriented(&[1, 0], 2).unwrap(), 1);
        assert!(c.is_zero());
    }

    #[test]
    fn vector_round_trip() {
        let x = build_complex(&[[0, 1, 2]]).unwrap();
        let c = Chain::oriented(&[2, 0], 3).unwrap();
        let v = c.to_vector(&x).unwrap();
        assert_eq!(Chain::from_vector(&x, 1, &v), c);
        let y = build_complex(&[[0, 1]]).unwrap();
        assert!(matches!(c.to_vector(&y), Err(Error::ComplexMismatch(_))));
    }
}
