//! JSON file formats for MACs, inequalities and polytopes. Rationals are
//! written as `"p/q"` strings.

use crate::mac::{Alphabets, LinearInequality, Mac, MacError};
use crate::polytope::{Facet, PolytopeError, RationalPolytope};
use crate::scalar::parse_rational;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field `{field}`: cannot parse {value:?} as a rational")]
    Rational { field: String, value: String },
    #[error(transparent)]
    Mac(#[from] MacError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

fn rational(field: &str, s: &str) -> Result<BigRational, FormatError> {
    parse_rational(s).ok_or_else(|| FormatError::Rational { field: field.to_string(), value: s.to_string() })
}

fn rationals(field: &str, v: &[String]) -> Result<Vec<BigRational>, FormatError> {
    v.iter().enumerate().map(|(i, s)| rational(&format!("{field}[{i}]"), s)).collect()
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacJson {
    pub inputs: Vec<usize>,
    pub output: usize,
    /// `p(b|a)`, `b` outermost, then inputs with party 0 most significant.
    pub probs: Vec<f64>,
}

impl From<&Mac<f64>> for MacJson {
    fn from(mac: &Mac<f64>) -> Self {
        let al = mac.alphabets();
        Self { inputs: al.input_sizes().to_vec(), output: al.output_size(), probs: mac.probs().to_vec() }
    }
}

impl MacJson {
    pub fn to_mac(&self, tol: f64) -> Result<Mac<f64>, FormatError> {
        let al = Alphabets::new(self.inputs.clone(), self.output)?;
        Ok(Mac::with_tolerance(al, self.probs.clone(), tol)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityJson {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub coeffs: Vec<String>,
    pub bound: String,
}

impl From<&LinearInequality<BigRational>> for InequalityJson {
    fn from(ineq: &LinearInequality<BigRational>) -> Self {
        let al = ineq.alphabets();
        Self {
            inputs: al.input_sizes().to_vec(),
            output: al.output_size(),
            coeffs: strings(ineq.coeffs()),
            bound: ineq.bound().to_string(),
        }
    }
}

impl InequalityJson {
    pub fn to_inequality(&self) -> Result<LinearInequality<BigRational>, FormatError> {
        let al = Alphabets::new(self.inputs.clone(), self.output)?;
        Ok(LinearInequality::new(al, rationals("coeffs", &self.coeffs)?, rational("bound", &self.bound)?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub offset: String,
}

impl From<&Facet> for FacetJson {
    fn from(f: &Facet) -> Self {
        Self { normal: strings(&f.normal), offset: f.offset.to_string() }
    }
}

impl FacetJson {
    pub fn to_facet(&self) -> Result<Facet, FormatError> {
        Ok(Facet { normal: rationals("normal", &self.normal)?, offset: rational("offset", &self.offset)? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub facets: Vec<FacetJson>,
}

impl PolytopeJson {
    pub fn from_polytope(p: &RationalPolytope) -> Result<Self, FormatError> {
        Ok(Self {
            dim: p.dim()?,
            vertices: p.vertices.iter().map(|v| strings(v)).collect(),
            facets: p.facets.iter().flatten().map(FacetJson::from).collect(),
        })
    }

    pub fn to_polytope(&self) -> Result<RationalPolytope, FormatError> {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| rationals(&format!("vertices[{i}]"), v))
            .collect::<Result<Vec<_>, _>>()?;
        let facets = self.facets.iter().map(FacetJson::to_facet).collect::<Result<Vec<_>, _>>()?;
        Ok(RationalPolytope { vertices, facets: Some(facets) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mac::{fingerprint_inequality, FingerprintLabeling};
    use crate::polytope::v_to_h;

    #[test]
    fn mac_round_trip() {
        let mac = Mac::<f64>::deterministic(Alphabets::binary(2), |a| a[0] ^ a[1]);
        let json = serde_json::to_string(&MacJson::from(&mac)).unwrap();
        let back: MacJson = from_json_str(&json).unwrap();
        assert_eq!(back.to_mac(1e-12).unwrap(), mac);
        let bad = r#"{"inputs": [2], "output": 2, "probs": [0.5, 0.2, 0.5, 0.5]}"#;
        assert!(matches!(from_json_str::<MacJson>(bad).unwrap().to_mac(1e-12), Err(FormatError::Mac(_))));
        let broken = "{\n \"inputs\": [2],\n \"output\": }";
        match from_json_str::<MacJson>(broken) {
            Err(FormatError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inequality_round_trip() {
        let al = Alphabets::binary(3);
        let ineq =
            fingerprint_inequality::<BigRational>(&al, 2, &[0, 1, 2], &FingerprintLabeling::standard(3)).unwrap();
        let json = serde_json::to_string(&InequalityJson::from(&ineq)).unwrap();
        assert!(json.contains("\"bound\":\"3\""));
        let back: InequalityJson = from_json_str(&json).unwrap();
        assert_eq!(back.to_inequality().unwrap(), ineq);
        let mut broken = back.clone();
        broken.bound = "three".into();
        assert!(matches!(broken.to_inequality(), Err(FormatError::Rational { .. })));
    }

    #[test]
    fn polytope_round_trip() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let verts = vec![vec![q(0, 1), q(0, 1)], vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 3)]];
        let p = v_to_h(&RationalPolytope::from_vertices(verts)).unwrap();
        let json = PolytopeJson::from_polytope(&p).unwrap();
        assert_eq!(json.dim, 2);
        assert_eq!(json.vertices[1][0], "1/2");
        let text = serde_json::to_string(&json).unwrap();
        let back = from_json_str::<PolytopeJson>(&text).unwrap().to_polytope().unwrap();
        assert_eq!(back, p);
    }
}
