//! The `(G,M)`-family calculus: orthogonal sets, hull volumes and lattice counts, the
//! limit formula for volumes of families, facets, projections and descent.

pub mod family;
pub mod laurent;
pub mod orthogonal;

pub use family::{
    descent_parabolic, descent_rhs, generic_directions, is_generic, lattice_count_formula, Kind,
    SymbolicFamily, View,
};
pub use laurent::LaurentSeries;
pub use orthogonal::{OrthogonalSet, Verdict, Volume};
