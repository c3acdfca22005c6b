//! The JSON tensor-spec language and its one-line shorthands.
//!
//! ```json
//! {"signature": [4, 4], "tensor": {"kind": "phi-a", "a": 2}}
//! ```
//!
//! Rationals are strings (`"3"`, `"-1/2"`) so no floating-point value ever
//! enters the input path. Dense component indices are 1-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::{
    linear_combination, r_id, r_phi, r_phi_a, standard_phi, validate_symmetries,
    AlgebraicCurvatureTensor, CurvatureError, Signature, SkewAdjointMap,
};
use crate::linalg::{parse_rational, Matrix, Rational};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed tensor spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognised shorthand {0:?}; expected e.g. phi-a(4,4,a=1), constant-sectional(0,3) or skew(0,4,square=-1)")]
    Shorthand(String),
    #[error("bad rational {text:?}: {reason}")]
    Rational { text: String, reason: String },
    #[error("component index {index} out of range 1..={n}")]
    ComponentIndex { index: usize, n: usize },
    #[error("phi square must be \"+1\" or \"-1\", got {0:?}")]
    Square(String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorSpec {
    pub signature: [usize; 2],
    pub tensor: TensorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TensorKind {
    ConstantSectional,
    Skew { phi: PhiSpec },
    PhiA { a: usize },
    Dense { components: Vec<DenseComponent> },
    LinearCombination { terms: Vec<Term> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhiSpec {
    Standard {
        square: String,
    },
    /// Row-major; column `j` is the image of the `j`-th basis vector.
    Matrix {
        entries: Vec<Vec<String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseComponent {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coef: String,
    pub base: TensorKind,
}

fn rational(text: &str) -> Result<Rational, SpecError> {
    parse_rational(text).map_err(|reason| SpecError::Rational {
        text: text.to_string(),
        reason,
    })
}

impl TensorSpec {
    /// Builds and symmetry-validates the tensor.
    pub fn build(&self) -> Result<AlgebraicCurvatureTensor, SpecError> {
        let sig = Signature::new(self.signature[0], self.signature[1])?;
        build_kind(sig, &self.tensor)
    }

    /// The single-line JSON form.
    pub fn render(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }
}

fn build_kind(sig: Signature, kind: &TensorKind) -> Result<AlgebraicCurvatureTensor, SpecError> {
    match kind {
        TensorKind::ConstantSectional => Ok(r_id(sig)),
        TensorKind::PhiA { a } => Ok(r_phi_a(sig, *a)?),
        TensorKind::Skew { phi } => Ok(r_phi(&build_phi(sig, phi)?)),
        TensorKind::Dense { components } => {
            let n = sig.dim();
            let mut comps = vec![Rational::from_integer(0.into()); n * n * n * n];
            for c in components {
                for index in [c.i, c.j, c.k, c.l] {
                    if index == 0 || index > n {
                        return Err(SpecError::ComponentIndex { index, n });
                    }
                }
                let idx = (((c.i - 1) * n + c.j - 1) * n + c.k - 1) * n + c.l - 1;
                comps[idx] = rational(&c.value)?;
            }
            Ok(validate_symmetries(sig, comps)?)
        }
        TensorKind::LinearCombination { terms } => {
            let built = terms
                .iter()
                .map(|t| Ok((rational(&t.coef)?, build_kind(sig, &t.base)?)))
                .collect::<Result<Vec<_>, SpecError>>()?;
            let refs: Vec<(Rational, &AlgebraicCurvatureTensor)> =
                built.iter().map(|(c, t)| (c.clone(), t)).collect();
            Ok(linear_combination(&refs)?)
        }
    }
}

fn build_phi(sig: Signature, phi: &PhiSpec) -> Result<SkewAdjointMap, SpecError> {
    match phi {
        PhiSpec::Standard { square } => {
            let sign = match square.trim() {
                "+1" | "1" => 1,
                "-1" => -1,
                other => return Err(SpecError::Square(other.to_string())),
            };
            Ok(standard_phi(sig, sign)?)
        }
        PhiSpec::Matrix { entries } => {
            let rows = entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| rational(e))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let m = Matrix::from_rows(rows).map_err(|e| SpecError::Rational {
                text: "phi matrix".to_string(),
                reason: e.to_string(),
            })?;
            Ok(SkewAdjointMap::new(sig, m)?)
        }
    }
}

/// Parses JSON (text starting with `{`) or a shorthand:
/// `phi-a(p,q,a=N)`, `constant-sectional(p,q)`, `skew(p,q,square=±1)`.
pub fn parse_tensor_spec(text: &str) -> Result<TensorSpec, SpecError> {
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    parse_shorthand(text).ok_or_else(|| SpecError::Shorthand(text.to_string()))
}

fn parse_shorthand(text: &str) -> Option<TensorSpec> {
    let (name, rest) = text.split_once('(')?;
    let args: Vec<&str> = rest.strip_suffix(')')?.split(',').map(str::trim).collect();
    let p = args.first()?.parse().ok()?;
    let q = args.get(1)?.parse().ok()?;
    let keyed = |key: &str| -> Option<&str> {
        let arg = args.get(2)?;
        match arg.split_once('=') {
            Some((k, v)) if k.trim() == key => Some(v.trim()),
            None => Some(arg),
            _ => None,
        }
    };
    let tensor = match (name.trim(), args.len()) {
        ("phi-a", 3) => TensorKind::PhiA {
            a: keyed("a")?.parse().ok()?,
        },
        ("constant-sectional" | "r-id", 2) => TensorKind::ConstantSectional,
        ("skew", 3) => TensorKind::Skew {
            phi: PhiSpec::Standard {
                square: keyed("square")?.to_string(),
            },
        },
        _ => return None,
    };
    Some(TensorSpec {
        signature: [p, q],
        tensor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::TensorOrigin;
    use crate::linalg::rat;

    #[test]
    fn json_examples() {
        let spec =
            parse_tensor_spec(r#"{"signature":[0,3],"tensor":{"kind":"constant-sectional"}}"#)
                .unwrap();
        let r = spec.build().unwrap();
        assert_eq!(
            r.components(),
            r_id(Signature::new(0, 3).unwrap()).components()
        );
        let spec =
            parse_tensor_spec(r#"{"signature":[4,4],"tensor":{"kind":"phi-a","a":2}}"#).unwrap();
        assert_eq!(spec.build().unwrap().origin(), &TensorOrigin::PhiA { a: 2 });
        assert!(
            parse_tensor_spec(r#"{"signature":[4,4],"tensor":{"kind":"phi-a","a":3}}"#)
                .unwrap()
                .build()
                .is_err()
        );
    }

    #[test]
    fn dense_violation_reports_quadruple() {
        let spec = parse_tensor_spec(
            r#"{"signature":[0,4],"tensor":{"kind":"dense","components":[{"i":1,"j":2,"k":3,"l":4,"value":"1"}]}}"#,
        )
        .unwrap();
        let err = spec.build().unwrap_err().to_string();
        assert!(err.contains("R[1][2][3][4]"), "{err}");
    }

    #[test]
    fn shorthands() {
        assert_eq!(
            parse_tensor_spec("phi-a(4,4,a=1)").unwrap(),
            TensorSpec {
                signature: [4, 4],
                tensor: TensorKind::PhiA { a: 1 }
            }
        );
        assert_eq!(
            parse_tensor_spec("constant-sectional(0,3)").unwrap().tensor,
            TensorKind::ConstantSectional
        );
        let skew = parse_tensor_spec("skew(0,4,square=-1)")
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(*skew.get(4 - 4, 1, 1, 0), rat(3, 1));
        assert!(parse_tensor_spec("phi-a(4,4)").is_err());
        assert!(parse_tensor_spec("nonsense").is_err());
    }

    #[test]
    fn combination_and_rationals() {
        let spec = parse_tensor_spec(
            r#"{"signature":[0,4],"tensor":{"kind":"linear-combination","terms":[
                {"coef":"1","base":{"kind":"constant-sectional"}},
                {"coef":"1/2","base":{"kind":"skew","phi":{"kind":"standard","square":"-1"}}}]}}"#,
        )
        .unwrap();
        let r = spec.build().unwrap();
        // 1 + (1/2)*3
        assert_eq!(*r.get(0, 1, 1, 0), rat(5, 2));
        let again = parse_tensor_spec(&spec.render()).unwrap();
        assert_eq!(again, spec);
    }
}
