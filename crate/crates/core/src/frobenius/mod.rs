//! η-conflations and the Frobenius structure on complexes.

mod axioms;
mod conflation;
mod homotopy;
mod lifts;
mod power;
mod triangle;

pub use axioms::{check_ex0, check_ex1, check_ex1_op, check_ex2, check_ex2_op, column, diagonal, row};
pub use conflation::{factor_through_eta, is_eta_conflation, standard_conflation, EtaConflation};
pub use homotopy::{
    check_eta_homotopy, eta_homotopic, eta_homotopy_system, factor_through_envelope, homotopic_after_eta, stable_equal,
};
pub use lifts::{cone_eta, cover_deflation, env_inflation, injective_extend, projective_lift};
pub use power::{conflation_tower, conflation_tower_check, recast_complex, recast_map};
pub use triangle::{standard_triangle, suspend_map, suspend_map_via, suspension, Triangle};
