//! Algebraic building blocks: scalar domains (rationals, cyclotomic fields,
//! floating complex), dense and sparse polynomials, exact linear algebra,
//! resultants, implicit derivatives and certified polynomial roots.

pub mod cyclo;
pub mod dual;
pub mod error;
pub mod implicit;
pub mod matrix;
pub mod mpoly;
pub mod poly;
pub mod resultant;
pub mod roots;
pub mod scalar;

pub use cyclo::{cyclotomic_polynomial, euler_phi, CycloScalar};
pub use dual::Dual;
pub use error::AlgebraError;
pub use implicit::implicit_derivative;
pub use matrix::ExactMatrix;
pub use mpoly::MPoly;
pub use poly::{BiPoly, Poly};
pub use resultant::{resultant, resultant_with_degrees, sylvester_matrix};
pub use roots::{roots, RootEstimate, RootReport, RootTarget};
pub use scalar::{rat, rational_to_f64, recognize_rational, Field, Rational, Ring};

pub use num_complex::Complex64;
