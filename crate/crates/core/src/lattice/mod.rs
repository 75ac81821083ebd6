//! Exact integer lattice algebra and rational polyhedral cones.

pub mod cone;
pub mod hilbert;
pub mod matrix;

pub use cone::{cone_fiber_product, unimodular_equivalent, Cone, Face};
pub use hilbert::{decompose, hilbert_basis, parallelepiped_points, triangulate};
pub use matrix::{
    adjugate, determinant, dot, hermite_normal_form, left_kernel, primitive, right_inverse, smith_normal_form,
    unimodular_inverse, HermiteForm, IntegerMatrix, LatticeSplit, SmithForm,
};

use alloc::vec::Vec;
use num_bigint::BigInt;

/// Converts a slice of `i64` rows, for tests and literals.
pub fn vectors(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}
