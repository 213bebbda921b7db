//! Exact matrices and linear solving over `Z`, `Z/m`, `F_p` and `Q`.

#![allow(clippy::needless_range_loop)]

mod matrix;
mod ring;
mod snf;
mod solve;

pub use matrix::RingMatrix;
pub use ring::{CoeffRing, Scalar, MAX_MODULUS};
pub use snf::{smith_normal_form, SmithForm};
pub use solve::{sample_solution, solve_linear_system};
