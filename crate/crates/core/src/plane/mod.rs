//! Plane automorphisms: amalgam factorization, the S-invariant subgroup
//! and the degenerations of `φ^k`.

mod jvk;
mod phi;
mod sgroup;

pub use jvk::{invert, jvk_factorize, word_automorphism, AffineMap, AmalgamWord, Factor, JonqFactor};
pub use phi::{
    check_y_term, degenerate_phi_power, has_nonnegative_integer_coeffs, phi, phi_power, phi_power_truncated,
    Degeneration, YTermReport,
};
pub use sgroup::{
    format_word, free_word_eval, is_member_f_closure, j_map, jminus_map, parse_word, reduce_word, s_generators,
    s_normal_form, s_weight_violation, syllable_length, torus_act, torus_conjugation_limit, word_to_sword, Letter,
    Membership, SFactor, SGenerators, SKind, SWord,
};
