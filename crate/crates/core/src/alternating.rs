//! Alternating chains on multiple-point spaces.
//!
//! On `D^k` the alternating chains have a free basis indexed by a target
//! simplex `Δ` with lifts `Δ_1, …, Δ_N` and an increasing `k`-subset
//! `I = (i_1 < … < i_k)`: the generator is `Alt_Z((Δ_{i_1} × … × Δ_{i_k})/Y)`,
//! in which the product itself appears with coefficient exactly `1`.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::complex::{Chain, Simplex};
use crate::error::{Error, Result};
use crate::linalg::{homology_pair, kernel_basis, HomologyGroup, IntegerMatrix, Subgroup};
use crate::multiplicity::{MultiplePointComplex, MultiplePointTower, ProductSimplex, SkElement};

/// A chain with `σ_#(c) = sign(σ)·c` for every slot permutation `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltChain {
    chain: Chain,
    k: usize,
}

impl AltChain {
    /// Checks the invariant on the adjacent transpositions.
    pub fn new(z: &MultiplePointComplex, chain: Chain) -> Result<Self> {
        if !is_alternating(z, &chain)? {
            return Err(Error::NotAlternating(format!("{chain:?}")));
        }
        Ok(Self { chain, k: z.k() })
    }

    pub fn underlying(&self) -> &Chain {
        &self.chain
    }

    pub fn into_chain(self) -> Chain {
        self.chain
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

pub fn is_alternating(z: &MultiplePointComplex, c: &Chain) -> Result<bool> {
    c.check_on(z.complex())?;
    for t in SkElement::adjacent_transpositions(z.k()) {
        let moved = crate::multiplicity::sk_act(&t, z, c)?;
        if moved != c.scaled(-1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Alt_Z(c) = Σ_σ sign(σ)·σ_#(c)`.
pub fn alt_z(z: &MultiplePointComplex, c: &Chain) -> Result<AltChain> {
    c.check_on(z.complex())?;
    let mut out = Chain::zero(c.degree());
    for sigma in SkElement::all(z.k()) {
        out.add_scaled(&crate::multiplicity::sk_act(&sigma, z, c)?, sigma.sign());
    }
    Ok(AltChain { chain: out, k: z.k() })
}

/// Free basis of the alternating `n`-chains of a multiplicity-`k` complex.
#[derive(Clone, Debug)]
pub struct AltBasis {
    degree: usize,
    k: usize,
    generators: Vec<ProductSimplex>,
    index: HashMap<ProductSimplex, usize>,
}

/// One generator per target `n`-simplex and increasing `k`-subset of its lifts.
pub fn alt_basis(z: &MultiplePointComplex, n: usize) -> AltBasis {
    let y = z.map().target();
    let mut generators = Vec::new();
    for base in y.simplices(n) {
        let count = z.lift_table().count(base);
        for subset in (0..count).combinations(z.k()) {
            generators.push(ProductSimplex { base: base.clone(), lifts: subset });
        }
    }
    let index = generators.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    AltBasis { degree: n, k: z.k(), generators, index }
}

impl AltBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ProductSimplex] {
        &self.generators
    }

    pub fn position(&self, g: &ProductSimplex) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// The raw chain `Alt_Z(Δ_I)` of generator `i`.
    pub fn generator_chain(&self, z: &MultiplePointComplex, i: usize) -> Chain {
        let g = &self.generators[i];
        let mut out = Chain::zero(self.degree);
        for sigma in SkElement::all(self.k) {
            let lifts = sigma.permute_tuple(&g.lifts);
            let term = z.product_chain(&g.base, &lifts, sigma.sign()).expect("distinct-lift products exist");
            out.add_scaled(&term, 1);
        }
        out
    }

    /// Canonical simplex of the product `Δ_I` and its orientation sign.
    pub fn generator_simplex(&self, z: &MultiplePointComplex, i: usize) -> (Simplex, i64) {
        let g = &self.generators[i];
        z.product_simplex(&g.base, &g.lifts).expect("distinct-lift products exist")
    }

    /// Coordinates of an alternating chain against this basis.
    pub fn coordinates(&self, z: &MultiplePointComplex, c: &Chain) -> Result<Vec<BigInt>> {
        if c.degree() != self.degree && !c.is_zero() {
            return Err(Error::DimensionMismatch(format!("chain of degree {} against basis of degree {}", c.degree(), self.degree)));
        }
        let coords: Vec<i64> = (0..self.len())
            .map(|i| {
                let (s, sign) = self.generator_simplex(z, i);
                c.coefficient(&s) * sign
            })
            .collect();
        let rebuilt = self.chain_from_i64(z, &coords);
        if rebuilt != *c {
            return Err(Error::NotAlternating(format!("{c:?}")));
        }
        Ok(coords.into_iter().map(BigInt::from).collect())
    }

    fn chain_from_i64(&self, z: &MultiplePointComplex, coords: &[i64]) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (i, &m) in coords.iter().enumerate() {
            if m != 0 {
                out.add_scaled(&self.generator_chain(z, i), m);
            }
        }
        out
    }

    /// The raw chain with the given coordinates.
    pub fn chain(&self, z: &MultiplePointComplex, coords: &[BigInt]) -> Chain {
        assert_eq!(coords.len(), self.len(), "coordinate vector has the wrong length");
        let small: Vec<i64> = coords.iter().map(|v| v.to_i64().expect("coefficient exceeds i64")).collect();
        self.chain_from_i64(z, &small)
    }

    /// Matrix (columns = generators) of a chain-valued linear map, expressed
    /// in the basis `target`.
    pub fn matrix_of<F>(&self, z: &MultiplePointComplex, rows: usize, mut image: F) -> Result<IntegerMatrix>
    where
        F: FnMut(&Chain) -> Result<Vec<BigInt>>,
    {
        let mut m = IntegerMatrix::zeros(rows, self.len());
        for j in 0..self.len() {
            let v = image(&self.generator_chain(z, j))?;
            for (i, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x);
                }
            }
        }
        Ok(m)
    }
}

/// The alternating chain complex of one multiplicity-`k` complex in basis
/// coordinates, degrees `0..=top`.
#[derive(Clone, Debug)]
pub struct AltComplex {
    bases: Vec<AltBasis>,
    boundaries: Vec<IntegerMatrix>,
}

impl AltComplex {
    pub fn new(z: &MultiplePointComplex, top: usize) -> Result<Self> {
        let bases: Vec<AltBasis> = (0..=top + 1).map(|n| alt_basis(z, n)).collect();
        let mut boundaries = Vec::with_capacity(top + 2);
        for n in 0..=top + 1 {
            if n == 0 {
                boundaries.push(IntegerMatrix::zeros(0, bases[0].len()));
                continue;
            }
            let below = &bases[n - 1];
            boundaries.push(bases[n].matrix_of(z, below.len(), |c| below.coordinates(z, &c.boundary()))?);
        }
        Ok(Self { bases, boundaries })
    }

    pub fn basis(&self, n: usize) -> &AltBasis {
        &self.bases[n]
    }

    /// `∂_n` in alternating coordinates.
    pub fn boundary(&self, n: usize) -> &IntegerMatrix {
        &self.boundaries[n]
    }

    /// `AH_n`.
    pub fn homology(&self, n: usize) -> Result<HomologyGroup> {
        homology_pair(&self.boundaries[n], &self.boundaries[n + 1])
    }
}

/// `ρ^k(c) = Σ_i (−1)^{i−1} ε^{i,k}_#(c)` on `W^k`; lands in `C(X)` for `k = 2`.
pub fn rho(tower: &MultiplePointTower, k: usize, c: &Chain) -> Result<Chain> {
    if k < 2 || k > tower.top() {
        return Err(Error::InvalidMultiplicity(k));
    }
    let mut out = Chain::zero(c.degree());
    for i in 1..=k {
        let term = tower.eps(k, i).pushforward(c)?;
        out.add_scaled(&term, if i % 2 == 1 { 1 } else { -1 });
    }
    Ok(out)
}

/// `ε^k_#` (drop the last slot) on alternating chains of `D^k`.
pub fn eps_sharp(tower: &MultiplePointTower, k: usize, c: &Chain) -> Result<Chain> {
    if k < 2 || k > tower.top() {
        return Err(Error::InvalidMultiplicity(k));
    }
    if !is_alternating(tower.level(k), c)? {
        return Err(Error::NotAlternating(format!("{c:?}")));
    }
    tower.eps(k, k).pushforward(c)
}

/// Which vertical differential to apply in [`signed_differential`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vertical {
    /// `ϱ^k_n = (−1)^n ρ^k_n`.
    Rho,
    /// `ϵ^k_n = (−1)^n ε^k_{#,n}`.
    Eps,
}

/// Sign-twisted vertical differential, anticommuting with `∂`.
pub fn signed_differential(tower: &MultiplePointTower, which: Vertical, k: usize, c: &Chain) -> Result<Chain> {
    let raw = match which {
        Vertical::Rho => rho(tower, k, c)?,
        Vertical::Eps => eps_sharp(tower, k, c)?,
    };
    Ok(if c.degree() % 2 == 0 { raw } else { raw.scaled(-1) })
}

/// The part of `c` lying over the target simplex `delta`.
pub fn restrict_to_delta(z: &MultiplePointComplex, c: &Chain, delta: &Simplex) -> Chain {
    let mut out = Chain::zero(c.degree());
    for (s, m) in c.terms() {
        if z.image_simplex(s).0 == *delta {
            out.add_term(s.clone(), m);
        }
    }
    out
}

/// Matrix of `σ_#` on `C_n(Z^k)` in the canonical basis.
pub fn sk_matrix(z: &MultiplePointComplex, sigma: &SkElement, n: usize) -> IntegerMatrix {
    let x = z.complex();
    let mut m = IntegerMatrix::zeros(x.count(n), x.count(n));
    for (j, s) in x.simplices(n).iter().enumerate() {
        let (t, sign) = z.act_on_simplex(sigma, s).expect("S_k-invariant complex");
        m.set(x.index_of(&t).expect("member"), j, BigInt::from(sign));
    }
    m
}

/// Basis (as columns in canonical coordinates) of the alternating `n`-chains
/// of any multiplicity-`k` complex, computed as the joint kernel of
/// `σ_# + 1` over the adjacent transpositions.
pub fn raw_alternating_basis(z: &MultiplePointComplex, n: usize) -> IntegerMatrix {
    let size = z.complex().count(n);
    let mut stacked = IntegerMatrix::zeros(0, size);
    for t in SkElement::adjacent_transpositions(z.k()) {
        stacked = stacked.vstack(&sk_matrix(z, &t, n).add(&IntegerMatrix::identity(size)));
    }
    kernel_basis(&stacked)
}

/// `AH_n(Z^k)` from the raw alternating subcomplex, with no use of the
/// product basis.
pub fn raw_alternating_homology(z: &MultiplePointComplex, n: usize) -> Result<HomologyGroup> {
    let x = z.complex();
    let coords = |deg: usize, basis: &IntegerMatrix| -> Result<IntegerMatrix> {
        // ∂ of the degree-`deg` basis, expressed in the degree-(deg−1) basis.
        let below = raw_alternating_basis(z, deg - 1);
        let sub = Subgroup::from_generators(&below);
        let images = x.boundary_unchecked(deg).mul(basis);
        let mut m = IntegerMatrix::zeros(sub.rank(), basis.ncols());
        for (j, col) in images.columns().iter().enumerate() {
            let c = sub.coordinates_of(col).ok_or_else(|| Error::NotAlternating("boundary left the subcomplex".into()))?;
            for (i, v) in c.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    };
    let basis_n = raw_alternating_basis(z, n);
    let basis_next = raw_alternating_basis(z, n + 1);
    // Coordinates are taken against the canonical (Hermite) basis of the
    // subgroup so that both maps use the same basis in degree n.
    let canon_n = Subgroup::from_generators(&basis_n);
    let d_n = if n == 0 {
        IntegerMatrix::zeros(0, canon_n.rank())
    } else {
        coords(n, canon_n.basis())?
    };
    let d_next = coords(n + 1, Subgroup::from_generators(&basis_next).basis())?;
    homology_pair(&d_n, &d_next)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::{build_complex, SimplicialComplex, SimplicialMap};
    use crate::multiplicity::{build_D, Kind};

    fn fold() -> Arc<SimplicialMap> {
        let x = Arc::new(build_complex(&[[0, 1], [1, 2]]).unwrap());
        let y = Arc::new(build_complex(&[[0, 1]]).unwrap());
        Arc::new(SimplicialMap::new(x, y, vec![1, 0, 1]).unwrap())
    }

    fn double_cover() -> Arc<SimplicialMap> {
        let x = Arc::new(SimplicialComplex::new(2, &[[0], [1]]).unwrap());
        let y = Arc::new(build_complex(&[[0]]).unwrap());
        Arc::new(SimplicialMap::new(x, y, vec![0, 0]).unwrap())
    }

    #[test]
    fn double_cover_generator() {
        let f = double_cover();
        let d = build_D(&f, 2).unwrap();
        let b = alt_basis(&d, 0);
        assert_eq!(b.len(), 1);
        // (a,b) − (b,a), vertex ids 0 and 1
        let expected = Chain::oriented(&[0], 1).unwrap().minus(&Chain::oriented(&[1], 1).unwrap());
        assert_eq!(b.generator_chain(&d, 0), expected);
        let tower = MultiplePointTower::new(&f, Kind::D, 2).unwrap();
        let down = eps_sharp(&tower, 2, &expected).unwrap();
        assert_eq!(down, Chain::oriented(&[0], 1).unwrap().minus(&Chain::oriented(&[1], 1).unwrap()));
        assert!(matches!(eps_sharp(&tower, 2, &Chain::oriented(&[0], 1).unwrap()), Err(Error::NotAlternating(_))));
    }

    #[test]
    fn diagonal_vertex_alternates_to_zero() {
        let f = fold();
        let d = build_D(&f, 2).unwrap();
        let zz = d.vertex_of(&[1, 1]).unwrap();
        assert!(alt_z(&d, &Chain::oriented(&[zz], 1).unwrap()).unwrap().underlying().is_zero());
    }

    #[test]
    fn fold_alternating_homology_vanishes() {
        let f = fold();
        let d = build_D(&f, 2).unwrap();
        let ac = AltComplex::new(&d, 1).unwrap();
        assert_eq!(ac.basis(1).len(), 1);
        assert_eq!(ac.basis(0).len(), 1);
        assert_eq!(ac.homology(0).unwrap(), HomologyGroup::trivial());
        assert_eq!(ac.homology(1).unwrap(), HomologyGroup::trivial());
    }

    #[test]
    fn coordinates_reject_non_alternating() {
        let f = double_cover();
        let d = build_D(&f, 2).unwrap();
        let b = alt_basis(&d, 0);
        assert!(matches!(b.coordinates(&d, &Chain::oriented(&[0], 1).unwrap()), Err(Error::NotAlternating(_))));
    }
}
