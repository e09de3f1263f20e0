//! JSON documents for matrices and helpers shared by the report types.
//!
//! A matrix document looks like
//!
//! ```json
//! {"n": 1, "context": "sp_n1_hat", "entries": [[[1,0,0,0],[0,0,0,0]], [[0,1,0,0],[1,0,0,0]]]}
//! ```
//!
//! `n` is the `n` of `Sp(n)` / `Sp(n,1)`, so hyperbolic contexts carry
//! `(n+1) x (n+1)` entries. Numbers are written with full double precision.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::qmat::{FormContext, GroupElement, QMatrix};
use crate::quat::Quaternion;
use crate::{Error, Result};

/// `{"n", "context", "entries"}` with row-major quaternion entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub context: FormContext,
    pub entries: Vec<Vec<Quaternion>>,
}

impl MatrixDocument {
    pub fn from_matrix(mat: &QMatrix, context: FormContext) -> Self {
        MatrixDocument {
            n: context.n_for(mat.rows()),
            context,
            entries: mat.to_rows(),
        }
    }

    pub fn from_element(g: &GroupElement) -> Self {
        Self::from_matrix(&g.mat, g.ctx)
    }

    /// The matrix, after checking the shape against `n` and `context`.
    pub fn to_matrix(&self) -> Result<QMatrix> {
        let dim = self.context.dim_for(self.n);
        if self.n == 0 {
            return Err(Error::Malformed("n must be positive".into()));
        }
        if self.entries.len() != dim || self.entries.iter().any(|r| r.len() != dim) {
            return Err(Error::Malformed(format!(
                "context {} with n = {} needs {dim}x{dim} entries",
                self.context.json_name(),
                self.n
            )));
        }
        let m = QMatrix::from_rows(&self.entries)?;
        if !m.is_finite() {
            return Err(Error::Malformed("entries must be finite".into()));
        }
        Ok(m)
    }

    /// The group element, checking membership at `tol`.
    pub fn to_element(&self, tol: f64) -> Result<GroupElement> {
        GroupElement::new(self.to_matrix()?, self.context, tol)
    }

    /// Unchecked element, for documents that are verified elsewhere.
    pub fn to_element_unchecked(&self) -> Result<GroupElement> {
        Ok(GroupElement::new_unchecked(self.to_matrix()?, self.context))
    }
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

/// Reads a matrix document, either bare or wrapped in an object with an
/// `"element"` field (the output of the generator and of reports).
pub fn parse_matrix_document(text: &str) -> Result<MatrixDocument> {
    let value = parse_value(text)?;
    matrix_document_from_value(value)
}

pub fn matrix_document_from_value(value: Value) -> Result<MatrixDocument> {
    let inner = match value {
        Value::Object(mut map) if map.contains_key("element") => map.remove("element").unwrap_or(Value::Null),
        other => other,
    };
    serde_json::from_value(inner).map_err(|e| Error::Malformed(e.to_string()))
}

/// Serializes with `indent` spaces, or compactly for `indent == 0`.
pub fn to_json_string<T: Serialize>(value: &T, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(value).expect("serializable");
    }
    let pad = vec![b' '; indent];
    let formatter = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value.serialize(&mut ser).expect("serializable");
    String::from_utf8(buf).expect("utf8 json")
}

/// Complex numbers as `[re, im]`.
pub mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Vectors of complex numbers as `[[re, im], ...]`.
pub mod complex_vec_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// Optional complex numbers.
pub mod complex_opt_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        c.map(|c| [c.re, c.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        let pair = Option::<[f64; 2]>::deserialize(d)?;
        Ok(pair.map(|[re, im]| Complex64::new(re, im)))
    }
}

/// Matrices inside reports: a [`MatrixDocument`].
pub mod element_serde {
    use super::MatrixDocument;
    use crate::qmat::GroupElement;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(g: &GroupElement, s: S) -> Result<S::Ok, S::Error> {
        MatrixDocument::from_element(g).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GroupElement, D::Error> {
        let doc = MatrixDocument::deserialize(d)?;
        doc.to_element_unchecked().map_err(D::Error::custom)
    }
}

pub mod element_opt_serde {
    use super::MatrixDocument;
    use crate::qmat::GroupElement;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(g: &Option<GroupElement>, s: S) -> Result<S::Ok, S::Error> {
        g.as_ref().map(MatrixDocument::from_element).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<GroupElement>, D::Error> {
        match Option::<MatrixDocument>::deserialize(d)? {
            Some(doc) => doc.to_element_unchecked().map(Some).map_err(D::Error::custom),
            None => Ok(None),
        }
    }
}

pub mod element_vec_opt_serde {
    use super::MatrixDocument;
    use crate::qmat::GroupElement;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(g: &Option<Vec<GroupElement>>, s: S) -> Result<S::Ok, S::Error> {
        g.as_ref()
            .map(|v| v.iter().map(MatrixDocument::from_element).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<GroupElement>>, D::Error> {
        match Option::<Vec<MatrixDocument>>::deserialize(d)? {
            Some(docs) => docs
                .iter()
                .map(|doc| doc.to_element_unchecked().map_err(D::Error::custom))
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            None => Ok(None),
        }
    }
}

/// Bare quaternionic matrices (no context) as nested arrays.
pub mod qmatrix_serde {
    use crate::qmat::QMatrix;
    use crate::quat::Quaternion;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
        m.to_rows().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QMatrix, D::Error> {
        let rows = Vec::<Vec<Quaternion>>::deserialize(d)?;
        QMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UV: &str = r#"{"n":1,"context":"sp_n1_hat","entries":[[[1,0,0,0],[0,0,0,0]],[[0,1,0,0],[1,0,0,0]]]}"#;

    #[test]
    fn parses_matrix_document() {
        let doc = parse_matrix_document(UV).unwrap();
        assert_eq!(doc.context, FormContext::Siegel);
        let g = doc.to_element(1e-12).unwrap();
        assert_eq!(g.mat[(1, 0)], Quaternion::I);
    }

    #[test]
    fn parses_wrapped_document() {
        let wrapped = format!(r#"{{"element": {UV}, "other": 3}}"#);
        assert_eq!(parse_matrix_document(&wrapped).unwrap(), parse_matrix_document(UV).unwrap());
    }

    #[test]
    fn full_precision_round_trip() {
        let third = Quaternion::new(1.0 / 3.0, std::f64::consts::PI, -1e-300, 2.0f64.sqrt());
        let m = QMatrix::diag(&[third, Quaternion::ONE]);
        let doc = MatrixDocument::from_matrix(&m, FormContext::Positive);
        let text = to_json_string(&doc, 2);
        let back: MatrixDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrix_document("{not json"), Err(Error::Malformed(_))));
        assert!(matches!(parse_matrix_document(r#"{"n":1}"#), Err(Error::Malformed(_))));
        let bad_shape = r#"{"n":2,"context":"sp_n1","entries":[[[1,0,0,0]]]}"#;
        let doc = parse_matrix_document(bad_shape).unwrap();
        assert!(matches!(doc.to_matrix(), Err(Error::Malformed(_))));
        let bad_ctx = r#"{"n":1,"context":"sp_2","entries":[[[1,0,0,0]]]}"#;
        assert!(parse_matrix_document(bad_ctx).is_err());
    }
}
