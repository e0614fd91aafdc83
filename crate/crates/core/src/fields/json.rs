//! JSON form of polynomial field systems:
//! `{"dim": n, "fields": [{"components": [[{"c": "p/q", "e": [..]}, ..], ..]}], "Q": q}`.

use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, FieldError, FieldSystem, Polynomial, VectorField};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FieldJson {
    pub components: Vec<Vec<TermJson>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct FieldSystemJson {
    pub dim: usize,
    pub fields: Vec<FieldJson>,
    #[serde(rename = "Q")]
    pub q: usize,
}

pub fn polynomial_from_json(dim: usize, terms: &[TermJson]) -> Result<Polynomial, FieldError> {
    let parsed = terms
        .iter()
        .map(|t| Ok((parse_rational(&t.c)?, t.e.clone())))
        .collect::<Result<Vec<_>, FieldError>>()?;
    Polynomial::from_terms(dim, parsed)
}

pub fn polynomial_to_json(p: &Polynomial) -> Vec<TermJson> {
    p.terms()
        .map(|(e, c)| TermJson {
            c: format_rational(c),
            e: e.clone(),
        })
        .collect()
}

impl FieldSystemJson {
    pub fn into_system(self) -> Result<FieldSystem, FieldError> {
        let mut fields = Vec::with_capacity(self.fields.len());
        for f in &self.fields {
            if f.components.len() != self.dim {
                return Err(FieldError::DimensionMismatch {
                    expected: self.dim,
                    found: f.components.len(),
                });
            }
            let comps = f
                .components
                .iter()
                .map(|c| polynomial_from_json(self.dim, c))
                .collect::<Result<Vec<_>, _>>()?;
            fields.push(VectorField::from_polys(comps));
        }
        FieldSystem::new(self.dim, fields, self.q)
    }

    pub fn from_system(sys: &FieldSystem) -> Result<Self, FieldError> {
        let fields = sys
            .fields()
            .iter()
            .map(|f| {
                let components = f
                    .components()
                    .iter()
                    .map(|c| c.as_poly().map(polynomial_to_json).ok_or(FieldError::NotPolynomial))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(FieldJson { components })
            })
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(Self {
            dim: sys.dim(),
            fields,
            q: sys.hormander_bound(),
        })
    }
}

pub fn field_system_from_json(text: &str) -> Result<FieldSystem, FieldError> {
    let raw: FieldSystemJson = serde_json::from_str(text).map_err(|e| FieldError::Parse(e.to_string()))?;
    raw.into_system()
}

pub fn field_system_to_json(sys: &FieldSystem) -> Result<String, FieldError> {
    let raw = FieldSystemJson::from_system(sys)?;
    serde_json::to_string_pretty(&raw).map_err(|e| FieldError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grushin_round_trip() {
        let text = r#"{"dim": 2, "fields": [
            {"components": [[{"c": "1", "e": [0, 0]}], []]},
            {"components": [[], [{"c": "1/1", "e": [1, 0]}]]}
        ], "Q": 2}"#;
        let sys = field_system_from_json(text).unwrap();
        assert_eq!(sys.len(), 2);
        let back = field_system_from_json(&field_system_to_json(&sys).unwrap()).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn rejects_wrong_component_count() {
        let text = r#"{"dim": 2, "fields": [{"components": [[]]}], "Q": 1}"#;
        assert!(matches!(field_system_from_json(text), Err(FieldError::DimensionMismatch { .. })));
    }
}
