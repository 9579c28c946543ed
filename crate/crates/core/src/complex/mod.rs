//! Abstract simplicial complexes, oriented chains, and simplicial maps.

mod chain;
mod map;
mod simplex;
mod simplicial;

pub use chain::Chain;
pub use map::{validate_map, MapReport, SimplicialMap};
pub use simplex::{sorting_sign, Simplex};
pub use simplicial::{boundary_matrix, build_complex, homology_of_complex, SimplicialComplex};
