//! Versioned JSON documents for presentations and elements.

use serde::{Deserialize, Serialize};

use super::presentation::{Generator, Parity, RingPresentation, RuleSpec};
use super::{GradedElement, RingError};
use crate::rational;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: String,
    pub monomial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub lhs: [String; 2],
    pub rhs: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub parity: Parity,
    pub generators: Vec<Generator>,
    pub rules: Vec<RuleDoc>,
}

impl RingPresentation {
    pub fn element_doc(&self, e: &GradedElement) -> Vec<TermDoc> {
        e.terms()
            .rev()
            .map(|(m, c)| TermDoc { coeff: rational::to_string(c), monomial: self.monomial_ids(m) })
            .collect()
    }

    pub fn element_from_doc(&self, terms: &[TermDoc]) -> Result<GradedElement, RingError> {
        let mut e = self.zero();
        for t in terms {
            let c = rational::parse(&t.coeff).ok_or_else(|| RingError::Parse(format!("bad coefficient `{}`", t.coeff)))?;
            let m = self.monomial(&t.monomial)?;
            e = e.add(&m.scale(&c))?;
        }
        Ok(e)
    }

    pub fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            version: FORMAT_VERSION,
            name: self.name().map(str::to_string),
            parity: self.parity(),
            generators: self.generators().to_vec(),
            rules: self
                .rules()
                .iter()
                .map(|r| RuleDoc {
                    lhs: [self.gen_id(r.lhs.0).to_string(), self.gen_id(r.lhs.1).to_string()],
                    rhs: self.element_doc(&r.rhs),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &PresentationDoc) -> Result<Self, RingError> {
        if doc.version != FORMAT_VERSION {
            return Err(RingError::Format(format!("unsupported version {}", doc.version)));
        }
        let mut rules = Vec::with_capacity(doc.rules.len());
        for r in &doc.rules {
            let mut spec = RuleSpec::new(r.lhs[0].clone(), r.lhs[1].clone());
            for t in &r.rhs {
                let c = rational::parse(&t.coeff).ok_or_else(|| RingError::Parse(format!("bad coefficient `{}`", t.coeff)))?;
                spec = spec.term(c, &t.monomial);
            }
            rules.push(spec);
        }
        let mut p = RingPresentation::new(doc.generators.clone(), rules)?;
        if p.parity() != doc.parity {
            return Err(RingError::Format(format!(
                "declared parity {:?} does not match generator degrees ({:?})",
                doc.parity,
                p.parity()
            )));
        }
        if let Some(n) = &doc.name {
            p = p.with_name(n.clone());
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("presentation documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, RingError> {
        let doc: PresentationDoc = serde_json::from_str(s).map_err(|e| RingError::Format(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn json_round_trip() {
        let p = RingPresentation::new(
            vec![Generator::truncated("a", 2, 4), Generator::new("u", 2)],
            vec![RuleSpec::new("u", "u").term(int(1), &["a", "u"])],
        )
        .unwrap()
        .with_name("demo");
        let json = p.to_json();
        assert!(json.contains("\"coeff\": \"1/1\""));
        let q = RingPresentation::from_json(&json).unwrap();
        assert_eq!(q.to_doc(), p.to_doc());
        assert_eq!(q.fingerprint(), p.fingerprint());
    }

    #[test]
    fn parity_must_match() {
        let json = r#"{"version":1,"parity":"even","generators":[{"id":"x","degree":1}],"rules":[]}"#;
        assert!(matches!(RingPresentation::from_json(json), Err(RingError::Format(_))));
        let json = r#"{"version":2,"parity":"odd","generators":[{"id":"x","degree":1}],"rules":[]}"#;
        assert!(matches!(RingPresentation::from_json(json), Err(RingError::Format(_))));
    }
}
