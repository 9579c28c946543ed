//! Exact integer linear algebra: normal forms, homology of integer chain
//! complexes, and subgroup arithmetic in free abelian groups.

mod homology;
mod matrix;
mod normal_form;
mod subgroup;

pub use homology::{chain_complex_homology, homology_pair, HomologyGroup};
pub(crate) use homology::bigint_json;
pub use matrix::IntegerMatrix;
pub use normal_form::{
    invariant_factors, kernel_basis, preimage_solve, rank, row_hermite, smith_normal_form, RowHermite, SmithForm,
};
pub use subgroup::{presented_homology, subgroup_quotient, PresentedGroup, Quotient, Subgroup};
