pub mod base;
pub mod bridge;
pub mod complex;
pub mod equations;
pub mod error;
pub mod fault;
pub mod frobenius;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod obstruction;
pub mod suite;

pub use base::{BaseCategory, EtaPower, Graded, GradedMorphism, GradedObject, ScalarEta};
pub use complex::{ChainMap, Complex, Cone, ExactPair, HomotopyCertificate};
pub use error::{Error, Result};
pub use frobenius::EtaConflation;
pub use linalg::{CoeffRing, RingMatrix, Scalar};
pub use obstruction::Obstruction;
