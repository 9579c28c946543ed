//! Cochains, alternating cochains, and the duality between
//! `Hom(C^Alt_•(D^k), Z)` and the alternating cochains of `D^k`.
//!
//! Cochains are coordinate vectors against the canonical simplex basis, so
//! every map here is an integer matrix.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::alternating::{alt_basis, alt_z, sk_matrix, AltComplex};
use crate::complex::{Chain, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::linalg::{homology_pair, kernel_basis, preimage_solve, HomologyGroup, IntegerMatrix, Subgroup};
use crate::multiplicity::{k_max, Kind, MultiplePointComplex, SkElement};
use crate::spectral::{build_double, DegreeVerdict, FilteredTotalComplex, Filtration, PageEntry};

/// A cochain complex `C^0 → C^1 → …` of free groups.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    coboundaries: Vec<IntegerMatrix>,
}

impl CochainComplex {
    /// `δ^n: C^n → C^{n+1}`.
    pub fn coboundary(&self, n: usize) -> &IntegerMatrix {
        &self.coboundaries[n]
    }

    pub fn top(&self) -> usize {
        self.coboundaries.len().saturating_sub(1)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.coboundaries[n].ncols()
    }

    /// `H^n = ker δ^n / im δ^{n−1}`.
    pub fn cohomology(&self, n: usize) -> Result<HomologyGroup> {
        let previous = if n == 0 { IntegerMatrix::zeros(self.rank(0), 0) } else { self.coboundaries[n - 1].clone() };
        homology_pair(&self.coboundaries[n], &previous)
    }
}

/// `Hom(−, Z)` of a chain complex given by `boundaries[n]: C_n → C_{n−1}`
/// (`boundaries[0]` has no rows). The top coboundary is zero.
pub fn dualize(boundaries: &[IntegerMatrix]) -> Result<CochainComplex> {
    for n in 1..boundaries.len() {
        if boundaries[n - 1].ncols() != boundaries[n].nrows() {
            return Err(Error::DimensionMismatch(format!("boundary {n} does not compose with boundary {}", n - 1)));
        }
        if !boundaries[n - 1].mul(&boundaries[n]).is_zero() {
            return Err(Error::NotAComplex(format!("∂∂ != 0 at degree {n}")));
        }
    }
    let top = boundaries.len();
    let coboundaries = (0..top)
        .map(|n| match boundaries.get(n + 1) {
            Some(d) => d.transpose(),
            None => IntegerMatrix::zeros(0, boundaries[n].ncols()),
        })
        .collect();
    Ok(CochainComplex { coboundaries })
}

/// An integer functional on the `n`-chains of a complex, by its values on
/// the canonical simplex basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    values: Vec<BigInt>,
}

impl Cochain {
    pub fn new(degree: usize, values: Vec<BigInt>) -> Self {
        Self { degree, values }
    }

    pub fn zero(x: &SimplicialComplex, degree: usize) -> Self {
        Self { degree, values: vec![BigInt::zero(); x.count(degree)] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn evaluate(&self, x: &SimplicialComplex, c: &Chain) -> Result<BigInt> {
        if c.degree() != self.degree || self.values.len() != x.count(self.degree) {
            return Err(Error::DimensionMismatch(format!("{}-cochain on a {}-chain", self.degree, c.degree())));
        }
        c.check_on(x)?;
        Ok(c.terms().map(|(s, m)| &self.values[x.index_of(s).expect("checked")] * m).sum())
    }
}

/// Matrix of `Alt_Z: C_n(D^k) → C^Alt_n(D^k)` into product-basis coordinates.
pub fn alternation_matrix(z: &MultiplePointComplex, n: usize) -> Result<IntegerMatrix> {
    let basis = alt_basis(z, n);
    let x = z.complex();
    let mut m = IntegerMatrix::zeros(basis.len(), x.count(n));
    for (j, s) in x.simplices(n).iter().enumerate() {
        let image = alt_z(z, &Chain::from_simplex(s.clone(), 1))?;
        for (i, v) in basis.coordinates(z, image.underlying())?.into_iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v);
            }
        }
    }
    Ok(m)
}

/// Matrix of `Alt*_Z`: a functional `ψ` on `C^Alt_n(D^k)` (in product-basis
/// coordinates) goes to the cochain `c ↦ ψ(Alt_Z c)`.
pub fn alt_star_matrix(z: &MultiplePointComplex, n: usize) -> Result<IntegerMatrix> {
    Ok(alternation_matrix(z, n)?.transpose())
}

pub fn alt_star(z: &MultiplePointComplex, n: usize, psi: &[BigInt]) -> Result<Cochain> {
    let m = alt_star_matrix(z, n)?;
    if psi.len() != m.ncols() {
        return Err(Error::DimensionMismatch(format!("functional of length {} on {} generators", psi.len(), m.ncols())));
    }
    Ok(Cochain::new(n, m.mul_vec(psi)))
}

/// `φ ∘ σ_# = sign(σ) φ` for every adjacent transposition `σ`.
pub fn is_alternating_cochain(z: &MultiplePointComplex, phi: &Cochain) -> bool {
    SkElement::adjacent_transpositions(z.k()).iter().all(|t| {
        let moved = sk_matrix(z, t, phi.degree).transpose().mul_vec(&phi.values);
        moved.iter().zip(&phi.values).all(|(a, b)| *a == -b)
    })
}

/// Matrix of `θ` on raw cochains: generator `Alt_Z(Δ_I)` is sent to `φ(Δ_I)`.
pub fn theta_matrix(z: &MultiplePointComplex, n: usize) -> IntegerMatrix {
    let basis = alt_basis(z, n);
    let x = z.complex();
    let mut m = IntegerMatrix::zeros(basis.len(), x.count(n));
    for i in 0..basis.len() {
        let (s, sign) = basis.generator_simplex(z, i);
        m.set(i, x.index_of(&s).expect("generator simplex is in the complex"), BigInt::from(sign));
    }
    m
}

/// `θ(φ)`, the functional on `C^Alt_n(D^k)` with `θ(φ)(Alt_Z c) = φ(c)`.
pub fn theta(z: &MultiplePointComplex, phi: &Cochain) -> Result<Vec<BigInt>> {
    if phi.values.len() != z.complex().count(phi.degree) {
        return Err(Error::DimensionMismatch("cochain does not live on this complex".into()));
    }
    if !is_alternating_cochain(z, phi) {
        return Err(Error::NotAlternating(format!("{}-cochain", phi.degree)));
    }
    Ok(theta_matrix(z, phi.degree).mul_vec(&phi.values))
}

/// Basis (columns, canonical form) of the alternating `n`-cochains.
pub fn alternating_cochain_basis(z: &MultiplePointComplex, n: usize) -> IntegerMatrix {
    let size = z.complex().count(n);
    let mut stacked = IntegerMatrix::zeros(0, size);
    for t in SkElement::adjacent_transpositions(z.k()) {
        stacked = stacked.vstack(&sk_matrix(z, &t, n).transpose().add(&IntegerMatrix::identity(size)));
    }
    Subgroup::from_generators(&kernel_basis(&stacked)).basis().clone()
}

/// Solves `basis · X = targets` column by column.
fn solve_columns(basis: &IntegerMatrix, targets: &IntegerMatrix) -> Option<IntegerMatrix> {
    let mut columns = Vec::with_capacity(targets.ncols());
    for col in targets.columns() {
        columns.push(preimage_solve(basis, &col)?);
    }
    Some(IntegerMatrix::from_columns(&columns, basis.ncols()))
}

/// The complex of alternating cochains of `z` in degrees `0..=top`, in the
/// bases of [`alternating_cochain_basis`].
pub fn alternating_cochain_complex(z: &MultiplePointComplex, top: usize) -> Result<CochainComplex> {
    let x = z.complex();
    let bases: Vec<IntegerMatrix> = (0..=top + 1).map(|n| alternating_cochain_basis(z, n)).collect();
    let mut coboundaries = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let image = x.boundary_unchecked(n + 1).transpose().mul(&bases[n]);
        let m = solve_columns(&bases[n + 1], &image)
            .ok_or_else(|| Error::NotAlternating(format!("coboundary of an alternating {n}-cochain")))?;
        coboundaries.push(m);
    }
    Ok(CochainComplex { coboundaries })
}

/// Duality checks for one multiplicity and degree.
#[derive(Clone, Debug, Serialize)]
pub struct DualityCheck {
    pub k: usize,
    pub n: usize,
    /// `θ ∘ Alt*_Z = id` on functionals.
    pub theta_after_alt_star: bool,
    /// `Alt*_Z ∘ θ = id` on alternating cochains (in their basis).
    pub alt_star_after_theta: bool,
    /// Every `Alt*_Z ψ` is alternating.
    pub alt_star_alternating: bool,
    /// `Alt_Z` commutes with `∂`, so `Alt*_Z` is a cochain map.
    pub cochain_map: bool,
    /// `H^n(Hom(C^Alt_•(D^k), Z))`.
    pub hom_dual: HomologyGroup,
    /// `H^n(C^•_Alt(D^k))`.
    pub alternating: HomologyGroup,
}

impl DualityCheck {
    pub fn passed(&self) -> bool {
        self.theta_after_alt_star
            && self.alt_star_after_theta
            && self.alt_star_alternating
            && self.cochain_map
            && self.hom_dual == self.alternating
    }
}

/// Runs [`DualityCheck`] in every degree `0..=dim` of `z`.
pub fn check_duality(z: &MultiplePointComplex) -> Result<Vec<DualityCheck>> {
    let top = z.complex().dim().max(0) as usize;
    let alt = AltComplex::new(z, top)?;
    let hom = dualize(&(0..=top + 1).map(|n| alt.boundary(n).clone()).collect::<Vec<_>>())?;
    let cochains = alternating_cochain_complex(z, top)?;
    let mut out = Vec::new();
    for n in 0..=top {
        let a = alternation_matrix(z, n)?;
        let a_next = alternation_matrix(z, n + 1)?;
        let star = a.transpose();
        let th = theta_matrix(z, n);
        let basis = alternating_cochain_basis(z, n);
        let theta_after_alt_star = th.mul(&star).is_identity();
        let (alt_star_after_theta, alt_star_alternating) = match solve_columns(&basis, &star) {
            Some(star_coords) => {
                let theta_coords = th.mul(&basis);
                (star_coords.mul(&theta_coords).is_identity() && theta_coords.mul(&star_coords).is_identity(), true)
            }
            None => (false, false),
        };
        let cochain_map = a.mul(&z.complex().boundary_unchecked(n + 1)) == alt.boundary(n + 1).mul(&a_next);
        out.push(DualityCheck {
            k: z.k(),
            n,
            theta_after_alt_star,
            alt_star_after_theta,
            alt_star_alternating,
            cochain_map,
            hom_dual: hom.cohomology(n)?,
            alternating: cochains.cohomology(n)?,
        });
    }
    Ok(out)
}

/// One dualized row of the alternating double complex:
/// `C^n(X) → (C^Alt_n(D²))^* → (C^Alt_n(D³))^* → …`.
#[derive(Clone, Debug, Serialize)]
pub struct DualRowCheck {
    pub n: usize,
    /// Rank of `C^n(Y)`.
    pub y_rank: usize,
    /// Cohomology of the row, indexed by column.
    pub cohomology: Vec<HomologyGroup>,
    /// `f^#: C^n(Y) → C^n(X)` maps isomorphically onto the row's `H^0`.
    pub augmentation_iso: bool,
}

impl DualRowCheck {
    pub fn passed(&self) -> bool {
        self.augmentation_iso
            && self.cohomology.first() == Some(&HomologyGroup::free(self.y_rank))
            && self.cohomology.iter().skip(1).all(HomologyGroup::is_trivial)
    }
}

/// Dualizes every row of the alternating double complex of `f` and checks
/// that it is a resolution of `C^n(Y)`.
pub fn check_dual_rows(f: &Arc<SimplicialMap>) -> Result<Vec<DualRowCheck>> {
    let p_max = k_max(f).max(1) - 1;
    let y = f.target();
    let dim = y.dim().max(0) as usize;
    let dc = build_double(f, Kind::D, p_max, dim)?;
    let mut out = Vec::new();
    for n in 0..=dim {
        let q = n as i64;
        let mut boundaries = vec![IntegerMatrix::zeros(0, dc.rank(0, q))];
        boundaries.extend((1..=p_max as i64).map(|c| dc.vertical(c, q)));
        let row = dualize(&boundaries)?;
        let cohomology = (0..=p_max).map(|c| row.cohomology(c)).collect::<Result<Vec<_>>>()?;
        // Column 0 is in product-basis order, so use the attached `f_#` block.
        let cmp = dc.comparison.as_ref().expect("build_double attaches f_#");
        let f_dual = cmp.blocks.get(&(0, q)).cloned().unwrap_or_else(|| f.matrix(n)).transpose();
        let kernel = Subgroup::from_generators(&kernel_basis(row.coboundary(0)));
        let image = Subgroup::from_generators(&f_dual);
        let augmentation_iso = image == kernel && image.rank() == y.count(n);
        out.push(DualRowCheck { n, y_rank: y.count(n), cohomology, augmentation_iso });
    }
    Ok(out)
}

/// The cohomological image-computing spectral sequence
/// `E_1^{p,q} = H^q(Hom(C^Alt_•(D^{p+1}), Z)) ⇒ H^{p+q}(Y)`.
///
/// Computed by dualizing the alternating double complex and regrading with
/// negated indices; page entries and verdicts are reported back in
/// cohomological indexing (`p`, `q`, `n` all non-negative).
#[derive(Clone, Debug, Serialize)]
pub struct CohomologicalIcss {
    pub pages: Vec<PageEntry>,
    /// `(p, q, E_1^{p,q}, H^q of the dualized column)`.
    pub column_checks: Vec<(i64, i64, HomologyGroup, HomologyGroup)>,
    pub verdicts: Vec<DegreeVerdict>,
}

impl CohomologicalIcss {
    pub fn converges(&self) -> bool {
        self.verdicts.iter().all(DegreeVerdict::matches) && self.column_checks.iter().all(|c| c.2 == c.3)
    }
}

pub fn cohomological_icss(f: &Arc<SimplicialMap>, q_max: usize) -> Result<CohomologicalIcss> {
    let p_max = k_max(f).max(1) - 1;
    let rows = q_max.max(f.target().dim().max(0) as usize);
    let dc = build_double(f, Kind::D, p_max, rows)?;
    let dual = dc.dual()?;
    let tot = FilteredTotalComplex::new(dual, Filtration::Second)?;
    let tower = crate::multiplicity::MultiplePointTower::new(f, Kind::D, p_max + 1)?;
    let mut pages = Vec::new();
    let mut column_checks = Vec::new();
    let mut verdicts = Vec::new();
    for p in 0..=p_max {
        let alt = AltComplex::new(tower.level(p + 1), rows)?;
        let column = dualize(&(0..=rows + 1).map(|n| alt.boundary(n).clone()).collect::<Vec<_>>())?;
        for q in 0..=q_max.saturating_sub(p) {
            for r in [1, 2] {
                let mut e = tot.page(r, -(p as i64), -(q as i64))?;
                e.p = p as i64;
                e.q = q as i64;
                e.d_matrix = None;
                if r == 1 {
                    column_checks.push((p as i64, q as i64, e.group.clone(), column.cohomology(q)?));
                }
                pages.push(e);
            }
        }
    }
    for m in 0..=q_max as i64 {
        let mut v = tot.verdict(-m)?;
        v.n = m;
        for (p, _) in v.e_infinity.iter_mut().chain(v.graded_target.iter_mut()) {
            *p = -*p;
        }
        v.e_infinity.reverse();
        v.graded_target.reverse();
        verdicts.push(v);
    }
    Ok(CohomologicalIcss { pages, column_checks, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_map, FIXTURE_NAMES};
    use crate::multiplicity::build_D;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn dualize_small_cases() {
        let d = dualize(&[IntegerMatrix::zeros(0, 1), IntegerMatrix::identity(1)]).unwrap();
        assert_eq!(d.coboundary(0), &IntegerMatrix::identity(1));
        assert!(d.cohomology(0).unwrap().is_trivial() && d.cohomology(1).unwrap().is_trivial());
        let zero = dualize(&[IntegerMatrix::zeros(0, 0)]).unwrap();
        assert!(zero.cohomology(0).unwrap().is_trivial());
    }

    #[test]
    fn double_cover_alt_star_values() {
        let f = fixture_map("double_cover").unwrap();
        let z = build_D(&f, 2).unwrap();
        let phi = alt_star(&z, 0, &big(&[1])).unwrap();
        let ab = z.vertex_of(&[0, 1]).unwrap();
        let ba = z.vertex_of(&[1, 0]).unwrap();
        let x = z.complex();
        assert_eq!(phi.evaluate(x, &Chain::oriented(&[ab], 1).unwrap()).unwrap(), BigInt::from(1));
        assert_eq!(phi.evaluate(x, &Chain::oriented(&[ba], 1).unwrap()).unwrap(), BigInt::from(-1));
        assert_eq!(theta(&z, &phi).unwrap(), big(&[1]));
        assert!(alt_star(&z, 0, &big(&[0])).unwrap().values().iter().all(Zero::is_zero));
    }

    #[test]
    fn non_alternating_cochain_rejected() {
        let f = fixture_map("double_cover").unwrap();
        let z = build_D(&f, 2).unwrap();
        let phi = Cochain::new(0, big(&[1, 0]));
        assert!(matches!(theta(&z, &phi), Err(Error::NotAlternating(_))));
    }

    #[test]
    fn diagonal_simplex_evaluates_to_zero() {
        // The vertex (z, z) of the fold's D² is fixed by the swap, so Alt_Z
        // kills it and every Alt*_Z ψ vanishes there.
        let f = fixture_map("fold").unwrap();
        let z = build_D(&f, 2).unwrap();
        let zz = z.vertex_of(&[1, 1]).unwrap();
        let a = alternation_matrix(&z, 0).unwrap();
        let j = z.complex().index_of(&crate::complex::Simplex::new(vec![zz]).unwrap()).unwrap();
        assert!(a.column(j).iter().all(Zero::is_zero));
    }

    #[test]
    fn duality_on_all_fixtures() {
        for name in FIXTURE_NAMES {
            let f = fixture_map(name).unwrap();
            for k in 2..=k_max(&f).max(2) {
                let z = build_D(&f, k).unwrap();
                for c in check_duality(&z).unwrap() {
                    assert!(c.passed(), "{name} k={k}: {c:?}");
                }
            }
            for row in check_dual_rows(&f).unwrap() {
                assert!(row.passed(), "{name}: {row:?}");
            }
        }
    }

    #[test]
    fn cohomological_icss_of_rp2() {
        let f = fixture_map("disc_to_rp2").unwrap();
        let r = cohomological_icss(&f, 2).unwrap();
        assert!(r.converges(), "{r:#?}");
        let totals: Vec<_> = r.verdicts.iter().map(|v| v.target.clone()).collect();
        assert_eq!(totals, vec![HomologyGroup::free(1), HomologyGroup::trivial(), HomologyGroup::from_parts(0, &[2])]);
    }
}
