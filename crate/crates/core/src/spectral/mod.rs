//! Locally finite fields: invariant subspaces, Jordan parts, exponentials
//! and logarithms, minimal tori.

mod explog;
mod invariant;
mod jordan;
mod torus;

pub use explog::{exp_lnd, exp_scaled, log_unipotent, log_unipotent_map};
pub use invariant::{find_common_invariant_subspace, find_invariant_subspace, InvariantSubspace};
pub use jordan::{jordan_chevalley, jordan_decompose, JordanPair};
pub(crate) use jordan::jordan_on;
pub use torus::{diagonal_coefficients, hermite_normal_form, minimal_torus, TorusData};

/// Default degree cap for invariant-subspace searches.
pub const DEFAULT_DEGREE_CAP: usize = 6;
