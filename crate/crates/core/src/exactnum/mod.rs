//! Exact arithmetic: integer polynomials, factorization, real algebraic
//! numbers, the number field they generate, and linear algebra over it.

pub mod algebraic;
pub mod error;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod sturm;

pub use algebraic::{perron_root, perron_root_of_matrix, AlgebraicReal};
pub use error::ExactError;
pub use factor::factor;
pub use field::{Field, FieldPoly, FieldScalar, NumberField};
pub use linalg::{char_poly, determinant, eigenvector, Side};
pub use poly::{IntPolynomial, QPolynomial};
pub use roots::{is_bi_perron, is_perron};
