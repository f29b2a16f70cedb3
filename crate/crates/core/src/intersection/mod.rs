//! Normalized ψ-class intersection numbers
//!
//! [τ_{d₁}⋯τ_{dₙ}]_{g,n} = 2^{2|d|} ∏(2dᵢ+1)!! / m! · ∫ ψ^d ω^m,  m = 3g−3+n−|d|,
//!
//! computed through Mirzakhani's recursion. Every value is c·π^{2m} with c
//! rational, so the recursion works on the rational coefficient alone and the
//! π-power is reattached at the boundary.

mod engine;
mod index;
mod recursions;
mod smooth;
mod store;

pub use engine::{base_table, intersection_number};
pub(crate) use engine::coefficient;
pub(crate) use index::is_stable;
pub use index::TauIndex;
pub use recursions::{recursion_i_residual, recursion_ii_residual, recursion_iii_residual};
pub use store::{MemoStore, StoreStats, STORE_VERSION};
