//! Homological algebra over Z, F2 and Q.

pub mod field;
pub mod group;
pub mod laurent;
pub mod matrix;
pub mod reduce;
pub mod ring;
pub mod snf;

pub use field::{DenseMatrix, EchelonSpan, HomologyBasis};
pub use group::{AbelianGroup, BigradedGroup, Coeff, GroupEntry};
pub use laurent::LaurentPoly;
pub use matrix::SparseIntMatrix;
pub use reduce::{CochainSlice, Eliminator};
pub use ring::{Coefficient, Field, F2};
pub use snf::{invariant_factors, smith_normal_form, SmithForm};
