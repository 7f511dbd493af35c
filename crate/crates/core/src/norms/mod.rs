//! Mixed Tsirelson norms `T^(p)[(S_n, theta_n)]`, evaluated in p-th power form.
//!
//! The p-convexification satisfies `||x||^p = N(|x|^p)` where `N` is the `p = 1`
//! norm with the same parameters, so every routine works on the stored
//! magnitudes `|a_i|^p` and stays exact.

mod brute;
mod certificate;
mod engine;
mod restriction;
mod space;

pub use brute::{brute_norm_p, BRUTE_WIDTH};
pub use certificate::{verify_certificate, NormCertificate};
pub use engine::{norm_certificate, norm_p, norm_p_with_limit, NormTable, ENGINE_LIMIT};
pub use restriction::{norm_upper_bound, restriction_max};
pub use space::{decay_pairs, regularize, theta_sup_bounds, SpaceSpec};

#[cfg(test)]
mod tests;
