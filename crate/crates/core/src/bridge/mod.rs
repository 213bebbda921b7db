//! Systems of bigraded modules, their column presentations, and the passage
//! between the two.

mod delta;
mod eta_null;
mod gsystem;
mod theta;
mod totalize;

pub use delta::{plain, DeltaComplex, DeltaMap, Family};
pub use eta_null::{
    check_null_certificate, discrete, engineered_obstruction, eta_null_complete, is_column_null_homotopy,
    seeds_from_column_homotopy, to_eta_certificate, NullCertificate,
};
pub use gsystem::{psi, psi_inv, psi_inv_mor, psi_mor, Bidegree, Convention, GMorphism, GSystem};
pub use theta::{
    is_theta_extension, phi, phi_mor, theta_base, theta_extend, theta_extend_mor, theta_extend_with,
    theta_triangle_check, D1Sign, TriangleCheck,
};
pub use totalize::{cone_eta_reordering, totalize, totalize_complex, totalize_map, totalize_mor, xi_mor, xi_obj};
