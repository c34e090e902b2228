//! Line-bundle complexes on `P^n` and their hypercohomology.

pub mod bott;
pub mod cech;
pub mod character;
pub mod complex;
pub mod examples;
pub mod predicates;
pub mod spectral;
pub mod table;

pub use character::PnCharacter;
pub use complex::LineBundleComplex;
pub use spectral::Hyper;
pub use table::{cohomology_table, CohomologyTable};

use crate::error::Result;

/// `dim H^i(C(t))`: the spectral shortcut for `n >= 2`, the Čech complex
/// otherwise or when the complex is too long for the shortcut.
pub fn hypercohomology(c: &LineBundleComplex, t: i64) -> Result<Hyper> {
    if c.n() >= 2 && spectral::check_shape(c).is_ok() {
        spectral::hypercohomology_spectral(c, t)
    } else {
        cech::hypercohomology_cech(c, t)
    }
}
