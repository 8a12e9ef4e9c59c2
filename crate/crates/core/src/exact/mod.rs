//! Exact integer/rational polynomial algebra and certified real root isolation.

mod factor;
mod interval;
mod minpoly;
mod parse;
mod poly;
mod resultant;
mod roots;

pub use factor::{is_irreducible, is_squarefree, is_totally_real, IRREDUCIBILITY_DEGREE_CAP};
pub use interval::{FloatInterval, RationalInterval};
pub use minpoly::{char_poly_of_element, minpoly_of_element};
pub use parse::parse_polynomial;
pub use poly::IntPolynomial;
pub use resultant::{discriminant, resultant};
pub use roots::{
    count_real_roots, count_roots_in, isolate_roots, refine_root, sign_at_root, RootIsolation,
    SturmSequence,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("empty polynomial text")]
    EmptyInput,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("degree too small: need at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },
    #[error("degree {degree} exceeds the irreducibility cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root index {index} out of range ({count} roots)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("refinement width must be positive")]
    NonPositiveEps,
    #[error("degree violation: deg g = {g_degree} must be below deg f = {f_degree}")]
    DegreeViolation { f_degree: usize, g_degree: usize },
}
