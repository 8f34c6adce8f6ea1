//! Cyclotomic arithmetic: exact `Z[ζ_p]`, truncated `Z_p[ζ_p]`, the group
//! ring of `Δ = Gal(Q(ζ_p)/Q)`, and the p-adic logarithm.

mod cycint;
mod group_ring;
mod log;
mod padic;
mod ring;
mod teich;

pub use cycint::CycInt;
pub use group_ring::{GroupRingElt, RationalGroupRingElt};
pub use log::{padic_log, padic_log_exact, phi_map, phi_of_log};
pub use padic::{PadicCyc, PiValuation};
pub use ring::Zpm;
pub use teich::{bernoulli_b1, idempotent_apply, tau_character, teichmuller, teichmuller_table, Character, PadicScalar};
