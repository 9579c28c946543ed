//! Double complexes built from the multiple-point towers, their total
//! complexes, and the spectral sequences of the two filtrations.
//!
//! Notation and where each symbol lives:
//!
//! | symbol | meaning | here |
//! |---|---|---|
//! | `C_{p,q}` | cell in column `p = k − 1`, row `q` = chain degree | [`DoubleComplex::rank`] |
//! | `d′` | the boundary `∂`, `(p, q) → (p, q − 1)` | [`DoubleComplex::horizontal`] |
//! | `d″` | `(−1)^q ρ^k` or `(−1)^q ε^{k,k}_#`, `(p, q) → (p − 1, q)` | [`DoubleComplex::vertical`] |
//! | `Tot(C)_n` | `⊕_{p+q=n} C_{p,q}`, cells ordered by column | [`FilteredTotalComplex::rank`] |
//! | `D_n` | `d′ + d″` on `Tot_n` | [`FilteredTotalComplex::differential`] |
//! | `ᴵF^p`, `ᴵᴵF^p` | sum of cells with row ≤ `p`, resp. column ≤ `p` | [`Filtration::First`], [`Filtration::Second`], [`FilteredTotalComplex::filtration_degrees`] |
//! | `Z^r_p` | `{x ∈ F^p Tot_n : Dx ∈ F^{p−r}}` | [`FilteredTotalComplex::z_subgroup`] |
//! | `E^r_{p,q}` | `Z^r_p / (Z^{r−1}_{p−1} + D Z^{r−1}_{p+r−1})` | [`PageEntry::group`] via [`FilteredTotalComplex::page`] |
//! | `d^r_{p,q}` | `E^r_{p,q} → E^r_{p−r,q+r−1}`, stored for `r ≤ 1` | [`PageEntry::d_matrix`] |
//! | `E^∞_{p,q}` | `F_pH_n / F_{p−1}H_n` | [`FilteredTotalComplex::e_infinity`] |
//! | `H_•(Y)` | the limit, computed independently | [`SpectralSequenceReport::target`] |
//!
//! The diagrams one usually draws put the chain degree horizontally; the
//! `(p, q)` convention above is that picture transposed.
//!
//! Pages with `r ≥ 2` are computed directly from the subquotient formula;
//! their differentials are not materialised.

mod double;
mod filtered;
mod report;

pub use double::{build_double, Comparison, Direction, DoubleComplex, Truncation};
pub use filtered::{total_complex, DegreeVerdict, FilteredTotalComplex, Filtration, PageEntry};
pub use report::{
    check_collapse_first, check_collapse_first_on, gvzss, icss, CollapseReport, CollapseViolation, ColumnCheck,
    SequenceKind, SpectralSequenceReport,
};
