pub mod algebra;
pub mod error;
pub mod index;
pub mod linalg;
pub mod scalar;
pub mod sets;
pub mod multiplier;
pub mod coproduct;
pub mod gallery;
pub mod dual;
pub mod report;
pub mod cli;
