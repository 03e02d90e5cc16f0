//! Exact representation of homogeneous and generalized polynomials and Gram forms.

pub mod gram;
pub mod index;
pub mod io;
pub mod norms;
pub mod polynomial;

pub use gram::{expand_gram, monomial_count, GramForm};
pub use index::{binomial, enumerate_indices, multinomial_coefficient, Degree, ExponentVector};
pub use io::{
    gram_from_json, gram_to_json, parse_document, polynomial_from_json, polynomial_to_json,
    Document, GramDoc, PolynomialDoc,
};
pub use norms::{gram_norms, norms, weighted_l2_sq, NormReport};
pub use polynomial::{Convention, Evaluator, GeneralizedPolynomial};
