//! JSON documents for Floer complexes:
//! `{"generators": [{"id", "degree", "fL", "fLp", "kind"}], "differential": [["p", "q"]]}`.
//!
//! `fL`/`fLp` are optional but must come together; `kind` is one of `interior`
//! (default), `infty0` or `inftyPhi`. Each differential pair contributes one strip;
//! repeated pairs add mod 2.

use serde::{Deserialize, Serialize};

use slag_core::floer::{build_complex, FloerComplexZ2, Generator, GeneratorKind};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub id: String,
    pub degree: i64,
    #[serde(rename = "fL", default, skip_serializing_if = "Option::is_none")]
    pub f_l: Option<f64>,
    #[serde(rename = "fLp", default, skip_serializing_if = "Option::is_none")]
    pub f_lp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub differential: Vec<[String; 2]>,
}

fn parse_kind(kind: Option<&str>) -> Result<GeneratorKind, CliError> {
    match kind {
        None | Some("interior") => Ok(GeneratorKind::Interior),
        Some("infty0") => Ok(GeneratorKind::InfinityZero),
        Some("inftyPhi") => Ok(GeneratorKind::InfinityPhi),
        Some(other) => Err(CliError::Usage(format!(
            "unknown generator kind {other:?} (expected interior, infty0 or inftyPhi)"
        ))),
    }
}

fn kind_name(kind: GeneratorKind) -> Option<String> {
    match kind {
        GeneratorKind::Interior => None,
        GeneratorKind::InfinityZero => Some("infty0".into()),
        GeneratorKind::InfinityPhi => Some("inftyPhi".into()),
    }
}

impl ComplexDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the complex; degree and `d^2` failures surface as domain errors.
    pub fn build(&self) -> Result<FloerComplexZ2, CliError> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut gen =
                Generator::new(g.id.clone(), g.degree).with_kind(parse_kind(g.kind.as_deref())?);
            match (g.f_l, g.f_lp) {
                (Some(a), Some(b)) => gen = gen.with_potentials(a, b),
                (None, None) => {}
                _ => {
                    return Err(CliError::Usage(format!(
                        "generator {:?} needs both fL and fLp or neither",
                        g.id
                    )))
                }
            }
            gens.push(gen);
        }
        Ok(build_complex(
            gens,
            self.differential
                .iter()
                .map(|[p, q]| (p.as_str(), q.as_str(), 1)),
        )?)
    }

    pub fn from_complex(cx: &FloerComplexZ2) -> Self {
        Self {
            generators: cx
                .generators()
                .iter()
                .map(|g| GeneratorDoc {
                    id: g.id.clone(),
                    degree: g.degree,
                    f_l: g.potentials.map(|p| p.0),
                    f_lp: g.potentials.map(|p| p.1),
                    kind: kind_name(g.kind),
                })
                .collect(),
            differential: cx
                .differential_ids()
                .into_iter()
                .map(|(p, q)| [p.to_string(), q.to_string()])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use slag_core::floer::cohomology_dims;

    #[test]
    fn round_trip() {
        let text = r#"{"generators":[{"id":"a","degree":0,"fL":0.0,"fLp":1.0},{"id":"b","degree":1,"fL":0.5,"fLp":0.2},
            {"id":"inf","degree":3,"kind":"infty0"}],"differential":[["a","b"]]}"#;
        let doc = ComplexDoc::parse(text).unwrap();
        let cx = doc.build().unwrap();
        assert_eq!(cohomology_dims(&cx).get(&3), Some(&1));
        assert!(!cohomology_dims(&cx).contains_key(&0));
        let again = ComplexDoc::from_complex(&cx);
        assert_eq!(again, doc);
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(
            ComplexDoc::parse(r#"{"generators":[{"id":"a"}]}"#),
            Err(CliError::Json(_))
        ));
        let half = ComplexDoc::parse(r#"{"generators":[{"id":"a","degree":0,"fL":1.0}]}"#).unwrap();
        assert!(matches!(half.build(), Err(CliError::Usage(_))));
        let kind =
            ComplexDoc::parse(r#"{"generators":[{"id":"a","degree":0,"kind":"elsewhere"}]}"#)
                .unwrap();
        assert!(matches!(kind.build(), Err(CliError::Usage(_))));
        let bad = ComplexDoc::parse(
            r#"{"generators":[{"id":"a","degree":0},{"id":"b","degree":1},{"id":"c","degree":2}],
               "differential":[["a","b"],["b","c"]]}"#,
        )
        .unwrap();
        assert!(matches!(
            bad.build(),
            Err(CliError::Domain(slag_core::Error::NotACochainComplex))
        ));
    }
}
