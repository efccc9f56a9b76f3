//! Substitutions, their fixed points and abelianizations, Perron data and
//! Rauzy fractal clouds.

mod fractal;
mod matrix;
mod morphism;
mod perron;

pub use fractal::{
    broken_line, complement_basis, fractal_cloud, read_binary_cloud, BrokenLine, CloudRecords,
    FractalCloud, Projection,
};
pub use matrix::AbelianizationMatrix;
pub use morphism::{Substitution, SubstitutionSpec};
pub use perron::{perron, PerronData};
