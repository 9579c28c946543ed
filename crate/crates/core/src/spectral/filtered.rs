use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::double::{block_or_zero, Direction, DoubleComplex, Truncation};
use crate::error::{Error, Result};
use crate::linalg::{
    homology_pair, kernel_basis, presented_homology, HomologyGroup, IntegerMatrix, PresentedGroup, Quotient, Subgroup,
};

/// The two standard filtrations of a total complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Filtration {
    /// By row (chain degree): `p` is the row, `q` the column.
    First,
    /// By column (multiplicity): `p` is the column, `q` the row.
    Second,
}

/// One basis block of `Tot_n`: a double-complex cell and its offset.
#[derive(Clone, Debug)]
struct Block {
    col: i64,
    row: i64,
    offset: usize,
    rank: usize,
}

/// `Tot(C)` with `D = d′ + d″` and a chosen filtration, all as integer
/// matrices on the concatenated cell bases (cells ordered by column).
#[derive(Clone, Debug)]
pub struct FilteredTotalComplex {
    dc: DoubleComplex,
    filtration: Filtration,
    blocks: BTreeMap<i64, Vec<Block>>,
    differentials: BTreeMap<i64, IntegerMatrix>,
}

/// One `E^r_{p,q}` together with `d^r` when `r ∈ {0, 1}`.
#[derive(Clone, Debug, Serialize)]
pub struct PageEntry {
    pub r: i64,
    pub p: i64,
    pub q: i64,
    pub group: HomologyGroup,
    /// Matrix of `d^r: E^r_{p,q} → E^r_{p−r,q+r−1}` against the generators of
    /// both presentations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_matrix: Option<IntegerMatrix>,
}

/// Comparison of `E^∞` with the oracle in one total degree.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeVerdict {
    pub n: i64,
    /// `(p, E^∞_{p,n−p})`.
    pub e_infinity: Vec<(i64, HomologyGroup)>,
    /// `(p, F_p/F_{p−1})` of the oracle homology under the induced filtration.
    pub graded_target: Vec<(i64, HomologyGroup)>,
    pub total_homology: HomologyGroup,
    pub target: HomologyGroup,
    /// The comparison map induces an isomorphism `H_n(Tot) ≅ H_n(oracle)`.
    pub comparison_is_iso: bool,
    pub pieces_match: bool,
    /// Direct-sum comparison, made only when every group involved is free.
    pub direct_sum_match: Option<bool>,
}

impl DegreeVerdict {
    pub fn matches(&self) -> bool {
        self.comparison_is_iso && self.pieces_match && self.direct_sum_match != Some(false)
    }
}

fn subgroup_eq(a: &Subgroup, b: &Subgroup) -> bool {
    a == b
}

/// Builds `Tot(C)` and verifies `D∘D = 0`.
pub fn total_complex(dc: &DoubleComplex, filtration: Filtration) -> Result<FilteredTotalComplex> {
    FilteredTotalComplex::new(dc.clone(), filtration)
}

impl FilteredTotalComplex {
    pub fn new(dc: DoubleComplex, filtration: Filtration) -> Result<Self> {
        let mut blocks: BTreeMap<i64, Vec<Block>> = BTreeMap::new();
        for ((col, row), rank) in dc.cells() {
            blocks.entry(col + row).or_default().push(Block { col, row, offset: 0, rank });
        }
        for list in blocks.values_mut() {
            list.sort_by_key(|b| b.col);
            let mut offset = 0;
            for b in list.iter_mut() {
                b.offset = offset;
                offset += b.rank;
            }
        }
        let mut tot = Self { dc, filtration, blocks, differentials: BTreeMap::new() };
        let degrees: Vec<i64> = tot.blocks.keys().copied().collect();
        for &n in &degrees {
            let m = tot.assemble(n);
            tot.differentials.insert(n, m);
        }
        for &n in &degrees {
            if !tot.differential(n - 1).mul(&tot.differential(n)).is_zero() {
                return Err(Error::NotAComplex(format!("D∘D != 0 in total degree {n}")));
            }
        }
        tot.check_comparison()?;
        Ok(tot)
    }

    pub fn double_complex(&self) -> &DoubleComplex {
        &self.dc
    }

    pub fn filtration(&self) -> Filtration {
        self.filtration
    }

    /// Total degrees with a nonzero cell.
    pub fn degrees(&self) -> Vec<i64> {
        self.blocks.iter().filter(|(_, b)| b.iter().any(|x| x.rank > 0)).map(|(&n, _)| n).collect()
    }

    pub fn rank(&self, n: i64) -> usize {
        self.blocks.get(&n).map_or(0, |b| b.iter().map(|x| x.rank).sum())
    }

    fn block(&self, n: i64, col: i64) -> Option<&Block> {
        self.blocks.get(&n)?.iter().find(|b| b.col == col)
    }

    fn assemble(&self, n: i64) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rank(n - 1), self.rank(n));
        for b in self.blocks.get(&n).into_iter().flatten() {
            if let Some(t) = self.block(n - 1, b.col) {
                m.set_block(t.offset, b.offset, &self.dc.horizontal(b.col, b.row));
            }
            if let Some(t) = self.block(n - 1, b.col - 1) {
                m.set_block(t.offset, b.offset, &self.dc.vertical(b.col, b.row));
            }
        }
        m
    }

    /// `D_n: Tot_n → Tot_{n−1}`.
    pub fn differential(&self, n: i64) -> IntegerMatrix {
        self.differentials.get(&n).cloned().unwrap_or_else(|| IntegerMatrix::zeros(self.rank(n - 1), self.rank(n)))
    }

    /// Filtration degree of every basis element of `Tot_n`.
    pub fn filtration_degrees(&self, n: i64) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.rank(n));
        for b in self.blocks.get(&n).into_iter().flatten() {
            let p = match self.filtration {
                Filtration::First => b.row,
                Filtration::Second => b.col,
            };
            out.extend(std::iter::repeat_n(p, b.rank));
        }
        out
    }

    /// `H_n(Tot)`.
    pub fn homology(&self, n: i64) -> Result<HomologyGroup> {
        homology_pair(&self.differential(n), &self.differential(n + 1))
    }

    fn filt_range(&self, n: i64) -> Option<(i64, i64)> {
        let f = self.filtration_degrees(n);
        Some((*f.iter().min()?, *f.iter().max()?))
    }

    /// Smallest `r` from which every `E^r_{p,n−p}` equals `E^∞`.
    pub fn stable_r(&self, n: i64) -> i64 {
        let ranges: Vec<(i64, i64)> = (n - 1..=n + 1).filter_map(|m| self.filt_range(m)).collect();
        let lo = ranges.iter().map(|r| r.0).min().unwrap_or(0);
        let hi = ranges.iter().map(|r| r.1).max().unwrap_or(0);
        (hi - lo + 2).max(2)
    }

    /// Errors when `E^r_{p,q}` could change if the double complex were extended
    /// beyond its truncation.
    pub fn check_truncation(&self, r: i64, p: i64, q: i64) -> Result<()> {
        let t: Truncation = self.dc.truncation;
        let n = p + q;
        let err = || Err(Error::TruncationInsufficient { r, p, q, p_max: t.p_max });
        if !t.rows_complete && n + 1 > t.q_max {
            return err();
        }
        if t.cols_complete {
            return Ok(());
        }
        let needed = match self.filtration {
            Filtration::Second => {
                if r <= 0 {
                    p
                } else {
                    p.max((p + r - 1).min(n + 1))
                }
            }
            Filtration::First => match r {
                i64::MIN..=0 => q,
                1 => q + 1,
                _ => n + 1,
            },
        };
        if needed > t.p_max {
            return err();
        }
        Ok(())
    }

    /// `Z^r_p = {x ∈ F^p Tot_n : Dx ∈ F^{p−r}}`.
    pub fn z_subgroup(&self, n: i64, p: i64, r: i64) -> Subgroup {
        self.restricted_kernel(n, Some(p), Some(p - r))
    }

    /// Cycles of `Tot_n` lying in `F^p` (all cycles when `p` is `None`).
    pub fn cycles(&self, n: i64, p: Option<i64>) -> Subgroup {
        self.restricted_kernel(n, p, None)
    }

    /// `{x ∈ F^upper Tot_n : Dx ∈ F^lower}`; `None` means no constraint on
    /// `x`, respectively `Dx = 0`.
    fn restricted_kernel(&self, n: i64, upper: Option<i64>, lower: Option<i64>) -> Subgroup {
        let fd = self.filtration_degrees(n);
        let cols: Vec<usize> = (0..fd.len()).filter(|&j| upper.is_none_or(|p| fd[j] <= p)).collect();
        let below = self.filtration_degrees(n - 1);
        let rows: Vec<usize> = (0..below.len()).filter(|&i| lower.is_none_or(|l| below[i] > l)).collect();
        let d = self.differential(n).submatrix(&rows, &cols);
        let k = kernel_basis(&d);
        let mut gens = IntegerMatrix::zeros(fd.len(), k.ncols());
        for (local, &global) in cols.iter().enumerate() {
            for j in 0..k.ncols() {
                gens.set(global, j, k.get(local, j).clone());
            }
        }
        Subgroup::from_generators(&gens)
    }

    fn boundaries(&self, n: i64) -> Subgroup {
        Subgroup::from_generators(&self.differential(n + 1))
    }

    /// `E^r_{p,q}` as a quotient presentation inside `Tot_{p+q}`.
    pub fn page_quotient(&self, r: i64, p: i64, q: i64) -> Result<Quotient> {
        self.check_truncation(r, p, q)?;
        let n = p + q;
        let numerator = self.z_subgroup(n, p, r);
        let lower = self.z_subgroup(n, p - 1, r - 1);
        let incoming = self.z_subgroup(n + 1, p + r - 1, r - 1).image(&self.differential(n + 1));
        Quotient::new(&numerator, &lower.sum(&incoming))
    }

    /// `E^r_{p,q} = Z^r_p / (Z^{r−1}_{p−1} + D Z^{r−1}_{p+r−1})`, with the
    /// `d^r` matrix for `r ∈ {0, 1}`.
    pub fn page(&self, r: i64, p: i64, q: i64) -> Result<PageEntry> {
        let quotient = self.page_quotient(r, p, q)?;
        let d_matrix = if r == 0 || r == 1 { Some(self.d_matrix(r, p, q, &quotient)?) } else { None };
        Ok(PageEntry { r, p, q, group: quotient.group(), d_matrix })
    }

    fn d_matrix(&self, r: i64, p: i64, q: i64, source: &Quotient) -> Result<IntegerMatrix> {
        let n = p + q;
        let target = self.page_quotient(r, p - r, q + r - 1)?;
        let images = self.differential(n).mul(source.generators());
        let mut m = IntegerMatrix::zeros(target.orders().len(), images.ncols());
        for (j, col) in images.columns().iter().enumerate() {
            for (i, v) in target.coordinates(col)?.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    /// Checks that `E^{r+1}_{p,q}` is the homology of `(E^r, d^r)` at `(p, q)`
    /// for `r ∈ {0, 1}`; returns both sides.
    pub fn page_recursion(&self, r: i64, p: i64, q: i64) -> Result<(HomologyGroup, HomologyGroup)> {
        assert!(r == 0 || r == 1, "d^r matrices exist only for r = 0, 1");
        let mid = self.page_quotient(r, p, q)?;
        let prev = self.page_quotient(r, p + r, q - r + 1)?;
        let next = self.page_quotient(r, p - r, q + r - 1)?;
        let incoming = self.d_matrix(r, p + r, q - r + 1, &prev)?;
        let outgoing = self.d_matrix(r, p, q, &mid)?;
        let computed = presented_homology(
            &incoming,
            &PresentedGroup::from_quotient(&mid),
            &outgoing,
            &PresentedGroup::from_quotient(&next),
        )?;
        let formula = self.page_quotient(r + 1, p, q)?.group();
        Ok((computed, formula))
    }

    /// Graded pieces `F_pH_n / F_{p−1}H_n` of `H_n(Tot)`, computed directly from
    /// cycles and boundaries (no page index involved).
    pub fn e_infinity(&self, n: i64) -> Result<Vec<(i64, HomologyGroup)>> {
        let Some((lo, hi)) = self.filt_range(n) else { return Ok(Vec::new()) };
        for p in lo..=hi {
            self.check_truncation(self.stable_r(n), p, n - p)?;
        }
        let b = self.boundaries(n);
        let mut out = Vec::new();
        for p in lo..=hi {
            let upper = self.cycles(n, Some(p)).sum(&b);
            let lower = self.cycles(n, Some(p - 1)).sum(&b);
            out.push((p, Quotient::new(&upper, &lower)?.group()));
        }
        Ok(out)
    }

    fn check_comparison(&self) -> Result<()> {
        let Some(cmp) = &self.dc.comparison else { return Ok(()) };
        for n in self.blocks.keys().copied().chain(cmp.oracle_ranks.keys().copied()) {
            let ok = match cmp.direction {
                Direction::ToOracle => cmp
                    .oracle_boundary(n)
                    .mul(&self.comparison_matrix(n))
                    .sub(&self.comparison_matrix(n - 1).mul(&self.differential(n)))
                    .is_zero(),
                Direction::FromOracle => self
                    .differential(n)
                    .mul(&self.comparison_matrix(n))
                    .sub(&self.comparison_matrix(n - 1).mul(&cmp.oracle_boundary(n)))
                    .is_zero(),
            };
            if !ok {
                return Err(Error::NotAComplex(format!("comparison map is not a chain map in degree {n}")));
            }
        }
        Ok(())
    }

    /// Matrix of the comparison map in total degree `n`
    /// (`Tot_n → O_n` or `O_n → Tot_n`).
    pub fn comparison_matrix(&self, n: i64) -> IntegerMatrix {
        let cmp = self.dc.comparison.as_ref().expect("no comparison map attached");
        let o = cmp.oracle_rank(n);
        let t = self.rank(n);
        let mut m = match cmp.direction {
            Direction::ToOracle => IntegerMatrix::zeros(o, t),
            Direction::FromOracle => IntegerMatrix::zeros(t, o),
        };
        for b in self.blocks.get(&n).into_iter().flatten() {
            if !cmp.blocks.contains_key(&(b.col, b.row)) {
                continue;
            }
            match cmp.direction {
                Direction::ToOracle => m.set_block(0, b.offset, &block_or_zero(cmp, (b.col, b.row), o, b.rank)),
                Direction::FromOracle => m.set_block(b.offset, 0, &block_or_zero(cmp, (b.col, b.row), b.rank, o)),
            }
        }
        m
    }

    /// Convergence verdict in degree `n` against the attached oracle.
    pub fn verdict(&self, n: i64) -> Result<DegreeVerdict> {
        let cmp = self.dc.comparison.as_ref().ok_or_else(|| Error::DimensionMismatch("no comparison map attached".into()))?;
        let e_infinity = self.e_infinity(n)?;
        let g = self.comparison_matrix(n);
        let z_tot = self.cycles(n, None);
        let b_tot = self.boundaries(n);
        let d_o = cmp.oracle_boundary(n);
        let z_o = Subgroup::from_generators(&kernel_basis(&d_o));
        let b_o = Subgroup::from_generators(&cmp.oracle_boundary(n + 1));
        let target = homology_pair(&d_o, &cmp.oracle_boundary(n + 1))?;
        let total_homology = self.homology(n)?;
        let mut graded_target = Vec::new();
        let comparison_is_iso;
        match cmp.direction {
            Direction::ToOracle => {
                let surjective = subgroup_eq(&z_tot.image(&g).sum(&b_o), &z_o);
                let injective = subgroup_eq(&Subgroup::preimage(&g, &b_o).intersection(&z_tot), &b_tot);
                comparison_is_iso = surjective && injective;
                for &(p, _) in &e_infinity {
                    let upper = self.cycles(n, Some(p)).image(&g).sum(&b_o);
                    let lower = self.cycles(n, Some(p - 1)).image(&g).sum(&b_o);
                    graded_target.push((p, Quotient::new(&upper, &lower)?.group()));
                }
            }
            Direction::FromOracle => {
                let surjective = subgroup_eq(&z_o.image(&g).sum(&b_tot), &z_tot);
                let injective = subgroup_eq(&Subgroup::preimage(&g, &b_tot).intersection(&z_o), &b_o);
                comparison_is_iso = surjective && injective;
                for &(p, _) in &e_infinity {
                    let piece = |p: i64| {
                        Subgroup::preimage(&g, &self.cycles(n, Some(p)).sum(&b_tot)).intersection(&z_o)
                    };
                    graded_target.push((p, Quotient::new(&piece(p), &piece(p - 1))?.group()));
                }
            }
        }
        let pieces_match = e_infinity.len() == graded_target.len()
            && e_infinity.iter().zip(&graded_target).all(|(a, b)| a == b);
        let all_free = e_infinity.iter().all(|(_, g)| g.is_free()) && target.is_free();
        let direct_sum_match = all_free
            .then(|| HomologyGroup::direct_sum(e_infinity.iter().map(|(_, g)| g)) == target);
        Ok(DegreeVerdict {
            n,
            e_infinity,
            graded_target,
            total_homology,
            target,
            comparison_is_iso,
            pieces_match,
            direct_sum_match,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_map, FIXTURE_NAMES};
    use crate::multiplicity::Kind;
    use crate::spectral::build_double;

    #[test]
    fn double_complex_shapes() {
        let dc = build_double(&fixture_map("double_cover").unwrap(), Kind::D, 2, 1).unwrap();
        assert_eq!(dc.column_ranks(0), vec![2, 0]);
        assert_eq!(dc.column_ranks(1), vec![1, 0]);
        assert_eq!(dc.column_ranks(2), vec![0, 0]);
        let tot = total_complex(&dc, Filtration::Second).unwrap();
        assert_eq!((tot.rank(0), tot.rank(1)), (2, 1));

        let dc = build_double(&fixture_map("fold").unwrap(), Kind::W, 1, 1).unwrap();
        assert_eq!(dc.column_ranks(0), vec![3, 2]);
        assert_eq!(dc.column_ranks(1), vec![5, 4]);
    }

    #[test]
    fn identity_total_complex_is_the_chain_complex() {
        let f = fixture_map("identity").unwrap();
        let dc = build_double(&f, Kind::D, 0, 1).unwrap();
        let tot = total_complex(&dc, Filtration::Second).unwrap();
        assert_eq!(tot.differential(1), f.source().boundary_unchecked(1));
        assert_eq!(tot.e_infinity(1).unwrap(), vec![(0, HomologyGroup::free(1))]);
    }

    #[test]
    fn page_recursion_and_stabilization() {
        let mut checked = 0;
        for name in FIXTURE_NAMES {
            let f = fixture_map(name).unwrap();
            for (kind, filtration) in
                [(Kind::D, Filtration::Second), (Kind::D, Filtration::First), (Kind::W, Filtration::Second)]
            {
                let p_max = if kind == Kind::D { crate::multiplicity::k_max(&f).max(1) - 1 } else { 4 };
                let dc = build_double(&f, kind, p_max, 2).unwrap();
                let tot = total_complex(&dc, filtration).unwrap();
                for n in 0..=2i64 {
                    for p in -1..=n + 1 {
                        let q = n - p;
                        for r in [0, 1] {
                            if let Ok((computed, formula)) = tot.page_recursion(r, p, q) {
                                assert_eq!(computed, formula, "{name} {kind} {filtration:?} r={r} ({p},{q})");
                                checked += 1;
                            }
                        }
                        let stable = p.max(q + 1) + 1;
                        if let (Ok(a), Ok(b)) = (tot.page(stable, p, q), tot.page(stable + 3, p, q)) {
                            assert_eq!(a.group, b.group, "{name} stabilization at ({p},{q})");
                        }
                    }
                }
            }
        }
        assert!(checked > 100, "only {checked} recursion checks ran");
    }

    #[test]
    fn truncation_is_reported() {
        let f = fixture_map("fold").unwrap();
        let dc = build_double(&f, Kind::W, 1, 1).unwrap();
        let tot = total_complex(&dc, Filtration::Second).unwrap();
        assert!(matches!(tot.page(2, 1, 1), Err(Error::TruncationInsufficient { .. })));
        assert!(tot.page(1, 1, 0).is_ok());
    }

    #[test]
    fn gvzss_widening_is_stable() {
        for name in FIXTURE_NAMES {
            let f = fixture_map(name).unwrap();
            for n in 0..=2i64 {
                let narrow = build_double(&f, Kind::W, (n + 2) as usize, 3).unwrap();
                let wide = build_double(&f, Kind::W, (n + 3) as usize, 3).unwrap();
                let a = total_complex(&narrow, Filtration::Second).unwrap().homology(n).unwrap();
                let b = total_complex(&wide, Filtration::Second).unwrap().homology(n).unwrap();
                assert_eq!(a, b, "{name} n={n}");
            }
        }
    }
}
