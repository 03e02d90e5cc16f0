//! Canonical JSON documents for polynomials and Gram forms.
//!
//! Polynomial: `{"n", "d": [num, den], "q", "convention", "terms": [{"alpha_times_q", "coeff"}]}`
//! Gram form:  `{"n", "d", "Q"}` with rows in canonical degree-d/2 monomial order.

use serde::{Deserialize, Serialize};

use super::gram::GramForm;
use super::index::{Degree, ExponentVector};
use super::polynomial::{Convention, GeneralizedPolynomial};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub alpha_times_q: Vec<u32>,
    pub coeff: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialDoc {
    pub n: usize,
    pub d: [u32; 2],
    pub q: u32,
    pub convention: Convention,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramDoc {
    pub n: usize,
    pub d: u32,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
}

impl From<&GeneralizedPolynomial> for PolynomialDoc {
    fn from(g: &GeneralizedPolynomial) -> Self {
        PolynomialDoc {
            n: g.n(),
            d: [g.degree().num(), g.degree().den()],
            q: g.q(),
            convention: g.convention(),
            terms: g
                .terms()
                .iter()
                .map(|(a, &c)| TermDoc {
                    alpha_times_q: a.numerators().to_vec(),
                    coeff: c,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialDoc> for GeneralizedPolynomial {
    type Error = Error;

    fn try_from(doc: PolynomialDoc) -> Result<Self> {
        let degree = Degree::new(doc.d[0], doc.d[1])?;
        if doc.q == 0 {
            return Err(Error::parse("q", "lattice denominator must be at least 1"));
        }
        let mut terms = Vec::with_capacity(doc.terms.len());
        let mut seen = std::collections::BTreeSet::new();
        for (i, t) in doc.terms.into_iter().enumerate() {
            let alpha = ExponentVector::new(t.alpha_times_q, doc.q)
                .map_err(|e| Error::parse(format!("terms[{i}].alpha_times_q"), e.to_string()))?;
            if !seen.insert(alpha.clone()) {
                return Err(Error::parse(
                    format!("terms[{i}].alpha_times_q"),
                    format!("duplicate exponent {alpha}"),
                ));
            }
            terms.push((alpha, t.coeff));
        }
        GeneralizedPolynomial::new(doc.n, degree, doc.q, doc.convention, terms)
    }
}

impl From<&GramForm> for GramDoc {
    fn from(f: &GramForm) -> Self {
        GramDoc {
            n: f.n(),
            d: f.d(),
            q: f.matrix().rows(),
        }
    }
}

impl TryFrom<GramDoc> for GramForm {
    type Error = Error;

    fn try_from(doc: GramDoc) -> Result<Self> {
        let q = SymMatrix::from_rows(&doc.q, super::gram::SYMMETRY_TOL)?;
        GramForm::new(doc.n, doc.d, q)
    }
}

/// Either kind of input document.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Polynomial(GeneralizedPolynomial),
    Gram(GramForm),
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse("document", e.to_string())
}

pub fn polynomial_to_json(g: &GeneralizedPolynomial) -> String {
    serde_json::to_string(&PolynomialDoc::from(g)).expect("polynomial documents serialize")
}

pub fn polynomial_from_json(text: &str) -> Result<GeneralizedPolynomial> {
    let doc: PolynomialDoc = serde_json::from_str(text).map_err(json_error)?;
    doc.try_into()
}

pub fn gram_to_json(f: &GramForm) -> String {
    serde_json::to_string(&GramDoc::from(f)).expect("gram documents serialize")
}

pub fn gram_from_json(text: &str) -> Result<GramForm> {
    let doc: GramDoc = serde_json::from_str(text).map_err(json_error)?;
    doc.try_into()
}

/// Parses either schema; documents carrying a `"Q"` field are Gram forms.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let is_gram = value.get("Q").is_some();
    if is_gram {
        let doc: GramDoc = serde_json::from_value(value).map_err(json_error)?;
        Ok(Document::Gram(doc.try_into()?))
    } else {
        let doc: PolynomialDoc = serde_json::from_value(value).map_err(json_error)?;
        Ok(Document::Polynomial(doc.try_into()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn serializes_in_schema_order() {
        let g = GeneralizedPolynomial::lp_ball(2, Degree::integer(4).unwrap(), 1).unwrap();
        let s = polynomial_to_json(&g);
        assert_eq!(
            s,
            r#"{"n":2,"d":[4,1],"q":1,"convention":"monomial","terms":[{"alpha_times_q":[4,0],"coeff":1.0},{"alpha_times_q":[0,4],"coeff":1.0}]}"#
        );
    }

    #[test]
    fn degree_mismatch_names_field() {
        let text = r#"{"n":2,"d":[4,1],"q":1,"convention":"monomial","terms":[{"alpha_times_q":[2,1],"coeff":1.0}]}"#;
        match polynomial_from_json(text).unwrap_err() {
            Error::Parse { field, message } => {
                assert_eq!(field, "terms[0].alpha_times_q");
                assert!(message.contains("degree mismatch"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(polynomial_from_json("{"), Err(Error::Parse { .. })));
        let missing_q = r#"{"n":2,"d":[4,1],"convention":"monomial","terms":[]}"#;
        let err = polynomial_from_json(missing_q).unwrap_err().to_string();
        assert!(err.contains("`q`"), "{err}");
        let dup = r#"{"n":1,"d":[2,1],"q":1,"convention":"monomial","terms":[{"alpha_times_q":[2],"coeff":1.0},{"alpha_times_q":[2],"coeff":1.0}]}"#;
        assert!(polynomial_from_json(dup).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn non_symmetric_gram_rejected() {
        let text = r#"{"n":2,"d":2,"Q":[[1.0,0.5],[0.0,1.0]]}"#;
        match parse_document(text).unwrap_err() {
            Error::Parse { field, .. } => assert_eq!(field, "Q[0][1]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn generalized_round_trip_keeps_lattice() {
        let g = GeneralizedPolynomial::lp_ball(2, Degree::new(1, 2).unwrap(), 2).unwrap();
        let back = polynomial_from_json(&polynomial_to_json(&g)).unwrap();
        assert_eq!(back.q(), 2);
        assert_eq!(back, g);
        assert_eq!(
            back.terms().keys().map(|a| a.numerators().to_vec()).collect::<Vec<_>>(),
            vec![vec![1, 0], vec![0, 1]]
        );
    }

    #[test]
    fn document_dispatch() {
        let f = GramForm::diagonal_lp(2, 4).unwrap();
        assert_eq!(parse_document(&gram_to_json(&f)).unwrap(), Document::Gram(f));
    }

    proptest! {
        #[test]
        fn polynomial_round_trip_is_bit_exact(coeffs in proptest::collection::vec(-1e6f64..1e6, 5)) {
            let g = GeneralizedPolynomial::from_dense(
                2, Degree::integer(4).unwrap(), 1, Convention::Monomial, &coeffs).unwrap();
            let back = polynomial_from_json(&polynomial_to_json(&g)).unwrap();
            for (a, b) in back.dense().iter().zip(g.dense()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }

        #[test]
        fn gram_round_trip_is_bit_exact(e in proptest::collection::vec(-10.0f64..10.0, 6)) {
            let mut q = SymMatrix::zeros(3);
            q.set(0, 0, e[0]); q.set(1, 1, e[1]); q.set(2, 2, e[2]);
            q.set_sym(0, 1, e[3]); q.set_sym(0, 2, e[4]); q.set_sym(1, 2, e[5]);
            let f = GramForm::new(2, 4, q).unwrap();
            prop_assert_eq!(gram_from_json(&gram_to_json(&f)).unwrap(), f);
        }
    }
}
