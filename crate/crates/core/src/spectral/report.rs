use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::double::{build_double, DoubleComplex};
use super::filtered::{DegreeVerdict, FilteredTotalComplex, Filtration, PageEntry};
use crate::alternating::AltComplex;
use crate::complex::{homology_of_complex, SimplicialMap};
use crate::error::{Error, Result};
use crate::linalg::HomologyGroup;
use crate::multiplicity::{k_max, Kind, MultiplePointTower};

/// Which of the two multiple-point spectral sequences a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SequenceKind {
    /// Columns `H_q(W^{p+1}(f))`.
    Gvzss,
    /// Columns `AH_q(D^{p+1}(f))`.
    Icss,
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceKind::Gvzss => "GVZSS",
            SequenceKind::Icss => "ICSS",
        })
    }
}

/// `E^1_{p,q}` next to the homology of column `p` computed on its own.
#[derive(Clone, Debug, Serialize)]
pub struct ColumnCheck {
    pub p: i64,
    pub q: i64,
    pub page: HomologyGroup,
    pub column: HomologyGroup,
}

impl ColumnCheck {
    pub fn matches(&self) -> bool {
        self.page == self.column
    }
}

/// Everything computed for one spectral sequence of a map.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequenceReport {
    pub kind: SequenceKind,
    pub p_max: i64,
    pub q_max: i64,
    /// `E^1`, `E^2` and the stable page for every computable `(p, q)`.
    pub pages: Vec<PageEntry>,
    /// `(r, p, q)` cells skipped because the truncation could affect them.
    pub skipped: Vec<(i64, i64, i64)>,
    pub column_checks: Vec<ColumnCheck>,
    /// `H_n(Y)`, `n = 0..=q_max`.
    pub target: Vec<HomologyGroup>,
    pub verdicts: Vec<DegreeVerdict>,
    /// Stable pages that disagree with the directly computed `E^∞` piece.
    pub stable_mismatches: Vec<(i64, i64)>,
}

impl SpectralSequenceReport {
    pub fn converges(&self) -> bool {
        self.verdicts.iter().all(DegreeVerdict::matches)
            && self.column_checks.iter().all(ColumnCheck::matches)
            && self.stable_mismatches.is_empty()
    }

    /// The stored page entry `E^r_{p,q}`, if it was computed.
    pub fn entry(&self, r: i64, p: i64, q: i64) -> Option<&PageEntry> {
        self.pages.iter().find(|e| e.r == r && e.p == p && e.q == q)
    }

    /// Largest page index stored.
    pub fn stable_page(&self) -> i64 {
        self.pages.iter().map(|e| e.r).max().unwrap_or(1)
    }
}

fn oracle(f: &SimplicialMap, q_max: i64) -> Result<Vec<HomologyGroup>> {
    let y = f.target();
    (0..=q_max).map(|n| if n <= y.dim() { homology_of_complex(y, n) } else { Ok(HomologyGroup::trivial()) }).collect()
}

fn row_top(f: &SimplicialMap, q_max: usize) -> usize {
    q_max.max(f.target().dim().max(0) as usize)
}

fn assemble(
    kind: SequenceKind,
    f: &SimplicialMap,
    dc: DoubleComplex,
    column_homology: impl Fn(i64, i64) -> Result<HomologyGroup>,
    q_max: i64,
) -> Result<SpectralSequenceReport> {
    let p_max = dc.truncation.p_max;
    let tot = FilteredTotalComplex::new(dc, Filtration::Second)?;
    let mut pages = Vec::new();
    let mut skipped = Vec::new();
    let mut column_checks = Vec::new();
    let mut stable_mismatches = Vec::new();
    let mut verdicts = Vec::new();
    for n in 0..=q_max {
        let stable = tot.stable_r(n).max(3);
        let e_inf = match tot.e_infinity(n) {
            Ok(v) => Some(v),
            Err(Error::TruncationInsufficient { .. }) => None,
            Err(e) => return Err(e),
        };
        for p in 0..=p_max.min(n) {
            let q = n - p;
            for r in [1, 2, stable] {
                match tot.page(r, p, q) {
                    Ok(mut entry) => {
                        entry.d_matrix = None;
                        if r == 1 {
                            column_checks.push(ColumnCheck { p, q, page: entry.group.clone(), column: column_homology(p, q)? });
                        }
                        if r == stable {
                            let piece = e_inf
                                .as_ref()
                                .and_then(|v| v.iter().find(|(pp, _)| *pp == p))
                                .map(|(_, g)| g.clone())
                                .unwrap_or_else(HomologyGroup::trivial);
                            if e_inf.is_some() && piece != entry.group {
                                stable_mismatches.push((p, q));
                            }
                        }
                        pages.push(entry);
                    }
                    Err(Error::TruncationInsufficient { .. }) => skipped.push((r, p, q)),
                    Err(e) => return Err(e),
                }
            }
        }
        if e_inf.is_some() {
            verdicts.push(tot.verdict(n)?);
        }
    }
    Ok(SpectralSequenceReport {
        kind,
        p_max,
        q_max,
        pages,
        skipped,
        column_checks,
        target: oracle(f, q_max)?,
        verdicts,
        stable_mismatches,
    })
}

/// The image-computing spectral sequence `AH_q(D^{p+1}) ⇒ H_{p+q}(Y)` in
/// total degrees `0..=q_max`. All nonzero columns are included.
pub fn icss(f: &Arc<SimplicialMap>, q_max: usize) -> Result<SpectralSequenceReport> {
    let p_max = k_max(f).max(1) - 1;
    let rows = row_top(f, q_max);
    let dc = build_double(f, Kind::D, p_max, rows)?;
    let tower = MultiplePointTower::new(f, Kind::D, p_max + 1)?;
    let columns: Vec<AltComplex> =
        (1..=p_max + 1).map(|k| AltComplex::new(tower.level(k), rows)).collect::<Result<_>>()?;
    assemble(SequenceKind::Icss, f, dc, |p, q| columns[p as usize].homology(q as usize), q_max as i64)
}

/// The spectral sequence `H_q(W^{p+1}) ⇒ H_{p+q}(Y)` in total degrees
/// `0..=q_max`, with columns up to `p = q_max + 2`.
pub fn gvzss(f: &Arc<SimplicialMap>, q_max: usize) -> Result<SpectralSequenceReport> {
    let p_max = q_max + 2;
    let rows = row_top(f, q_max);
    let dc = build_double(f, Kind::W, p_max, rows)?;
    let tower = MultiplePointTower::new(f, Kind::W, p_max + 1)?;
    assemble(
        SequenceKind::Gvzss,
        f,
        dc,
        |p, q| {
            let z = tower.level(p as usize + 1).complex();
            if q > z.dim() {
                Ok(HomologyGroup::trivial())
            } else {
                homology_of_complex(z, q)
            }
        },
        q_max as i64,
    )
}

/// A cell where the first-filtration sequence fails to collapse as expected.
#[derive(Clone, Debug, Serialize)]
pub struct CollapseViolation {
    pub r: i64,
    pub p: i64,
    pub q: i64,
    pub found: HomologyGroup,
    pub expected: HomologyGroup,
}

/// First-filtration check: `E^1_{p,0} ≅ C_p(Y)`, `E^1_{p,q} = 0` for `q > 0`
/// and `E^2_{p,0} ≅ H_p(Y)`.
#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub label: String,
    pub checked: usize,
    pub skipped: Vec<(i64, i64, i64)>,
    pub violations: Vec<CollapseViolation>,
}

impl CollapseReport {
    pub fn collapsed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds the double complex of `kind` and checks that its first-filtration
/// sequence collapses onto `H_•(Y)` in chain degrees `0..=q_max`.
pub fn check_collapse_first(f: &Arc<SimplicialMap>, kind: Kind, q_max: usize) -> Result<CollapseReport> {
    let p_max = match kind {
        Kind::D => k_max(f).max(1) - 1,
        Kind::W => q_max + 2,
    };
    let dc = build_double(f, kind, p_max, row_top(f, q_max))?;
    check_collapse_first_on(&dc, f, q_max)
}

/// The collapse check on an arbitrary double complex augmented over `f`'s
/// target, in chain degrees `0..=q_max`.
pub fn check_collapse_first_on(dc: &DoubleComplex, f: &SimplicialMap, q_max: usize) -> Result<CollapseReport> {
    let tot = FilteredTotalComplex::new(dc.clone(), Filtration::First)?;
    let target = oracle(f, q_max as i64)?;
    let mut report =
        CollapseReport { label: dc.label.clone(), checked: 0, skipped: Vec::new(), violations: Vec::new() };
    let cols = dc.truncation.p_max;
    for (p, expected_row) in target.iter().enumerate() {
        let chains = HomologyGroup::free(f.target().count(p));
        let p = p as i64;
        let mut cells = vec![(1, 0, chains), (2, 0, expected_row.clone())];
        cells.extend((1..=cols).map(|q| (1, q, HomologyGroup::trivial())));
        for (r, q, expected) in cells {
            match tot.page(r, p, q) {
                Ok(entry) => {
                    report.checked += 1;
                    if entry.group != expected {
                        report.violations.push(CollapseViolation { r, p, q, found: entry.group, expected });
                    }
                }
                Err(Error::TruncationInsufficient { .. }) => report.skipped.push((r, p, q)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_map, FIXTURE_NAMES};

    #[test]
    fn double_cover_icss_pages() {
        let r = icss(&fixture_map("double_cover").unwrap(), 2).unwrap();
        assert_eq!(r.entry(1, 0, 0).unwrap().group, HomologyGroup::free(2));
        assert_eq!(r.entry(1, 1, 0).unwrap().group, HomologyGroup::free(1));
        assert_eq!(r.entry(2, 0, 0).unwrap().group, HomologyGroup::free(1));
        assert_eq!(r.entry(2, 1, 0).unwrap().group, HomologyGroup::trivial());
        assert!(r.converges());
    }

    #[test]
    fn all_fixtures_converge() {
        for name in FIXTURE_NAMES {
            let f = fixture_map(name).unwrap();
            let i = icss(&f, 2).unwrap();
            assert!(i.converges(), "{name} ICSS: {i:#?}");
            assert_eq!(i.verdicts.len(), 3, "{name}");
            let g = gvzss(&f, 2).unwrap();
            assert!(g.converges(), "{name} GVZSS: {g:#?}");
            assert_eq!(g.verdicts.len(), 3, "{name}");
        }
    }

    #[test]
    fn rp2_torsion() {
        let r = icss(&fixture_map("disc_to_rp2").unwrap(), 2).unwrap();
        assert_eq!(r.entry(1, 1, 0).unwrap().group, HomologyGroup::from_parts(0, &[2]));
        let totals: Vec<HomologyGroup> = r.verdicts.iter().map(|v| v.total_homology.clone()).collect();
        assert_eq!(totals, vec![HomologyGroup::free(1), HomologyGroup::from_parts(0, &[2]), HomologyGroup::trivial()]);
    }

    #[test]
    fn first_filtration_collapses() {
        for name in FIXTURE_NAMES {
            let f = fixture_map(name).unwrap();
            for kind in [Kind::D, Kind::W] {
                let c = check_collapse_first(&f, kind, 2).unwrap();
                assert!(c.collapsed(), "{name} {kind}: {c:?}");
                assert!(c.checked > 0);
            }
        }
    }

    #[test]
    fn corrupted_differential_is_caught() {
        let f = fixture_map("fold").unwrap();
        let dc = build_double(&f, Kind::D, 1, 1).unwrap().with_scaled_vertical(1, 2);
        let c = check_collapse_first_on(&dc, &f, 1).unwrap();
        assert!(!c.collapsed());
        assert!(c.violations.iter().any(|v| (v.r, v.p, v.q) == (1, 0, 0)), "{c:?}");
    }
}
