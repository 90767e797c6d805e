//! Versioned JSON documents: fans, perversities, and subdivision cone maps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::fan::{Fan, Perversity, Subdivision};

/// Version tag carried by every document this crate writes.
pub const FORMAT: &str = "fanic/1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported format {0:?} (expected \"fanic/1\")")]
    Format(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl DocumentError {
    /// True for syntax and version errors, false for semantic ones.
    pub fn is_parse(&self) -> bool {
        !matches!(self, DocumentError::Invalid(_))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocumentError> {
    serde_json::from_str(text).map_err(|e| DocumentError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn check_format(format: &Option<String>) -> Result<(), DocumentError> {
    match format {
        Some(f) if f != FORMAT => Err(DocumentError::Format(f.clone())),
        _ => Ok(()),
    }
}

/// A fan as rank, rays and maximal cones; faces are never listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl FanDocument {
    pub fn from_fan(fan: &Fan) -> FanDocument {
        let cones = if fan.len() == 1 { Vec::new() } else { fan.maximal_ray_sets() };
        FanDocument { format: Some(FORMAT.into()), name: fan.name.clone(), rank: fan.rank, rays: fan.rays.clone(), cones }
    }

    pub fn parse(text: &str) -> Result<FanDocument, DocumentError> {
        let doc: FanDocument = parse(text)?;
        check_format(&doc.format)?;
        Ok(doc)
    }

    pub fn to_fan(&self) -> Result<Fan, DocumentError> {
        let cones = if self.cones.is_empty() { vec![Vec::new()] } else { self.cones.clone() };
        let fan = Fan::new(self.rank, self.rays.clone(), &cones)?;
        Ok(match &self.name {
            Some(n) => fan.with_name(n),
            None => fan,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fan documents serialize")
    }
}

/// Parses and validates a fan document.
pub fn read_fan(text: &str) -> Result<Fan, DocumentError> {
    FanDocument::parse(text)?.to_fan()
}

/// One per-cone perversity value, keyed by the cone's sorted ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeValue {
    pub rays: Vec<usize>,
    pub value: i64,
}

/// A perversity given by name, by dimension, or per cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerversityDocument {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub by_dim: Option<BTreeMap<usize, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub by_cone: Option<Vec<ConeValue>>,
}

impl PerversityDocument {
    pub fn parse(text: &str) -> Result<PerversityDocument, DocumentError> {
        let doc: PerversityDocument = parse(text)?;
        check_format(&doc.format)?;
        Ok(doc)
    }

    /// Exactly one of `name`, `by_dim`, `by_cone` must be present.
    pub fn to_perversity(&self, fan: &Fan) -> Result<Perversity, DocumentError> {
        let given = [self.name.is_some(), self.by_dim.is_some(), self.by_cone.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(Error::PerversityDomainMismatch("give exactly one of name, by_dim, by_cone".into()).into());
        }
        if let Some(n) = &self.name {
            return Perversity::by_name(fan, n)
                .ok_or_else(|| Error::PerversityDomainMismatch(format!("unknown perversity {n:?}")).into());
        }
        if let Some(m) = &self.by_dim {
            return Ok(Perversity::by_dim(fan, m)?);
        }
        let mut map = BTreeMap::new();
        for cv in self.by_cone.as_deref().unwrap_or_default() {
            let mut k = cv.rays.clone();
            k.sort_unstable();
            if map.insert(k.clone(), cv.value).is_some() {
                return Err(Error::PerversityDomainMismatch(format!("cone {k:?} given twice")).into());
            }
        }
        Ok(Perversity::by_cone(fan, &map)?)
    }
}

/// Resolves a named perversity or parses a perversity document.
pub fn read_perversity(fan: &Fan, name_or_text: &str) -> Result<Perversity, DocumentError> {
    if let Some(p) = Perversity::by_name(fan, name_or_text) {
        return Ok(p);
    }
    PerversityDocument::parse(name_or_text)?.to_perversity(fan)
}

/// The cone map of a subdivision as pairs of ray-index lists
/// `(cone of the source, minimal cone of the target containing it)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeMapDocument {
    #[serde(default)]
    pub format: Option<String>,
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

impl ConeMapDocument {
    pub fn from_subdivision(sub: &Subdivision) -> ConeMapDocument {
        let pairs = (0..sub.source.len())
            .map(|s| (sub.source.ray_ids(s).to_vec(), sub.target.ray_ids(sub.cone_map[s]).to_vec()))
            .collect();
        ConeMapDocument { format: Some(FORMAT.into()), pairs }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cone maps serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn fan_documents_round_trip() {
        for fan in [corpus::p2(), corpus::cube_faces(), corpus::square_boundary()] {
            let doc = FanDocument::from_fan(&fan);
            let back = read_fan(&doc.to_json()).unwrap();
            assert_eq!(back.rays, fan.rays);
            assert_eq!(back.maximal_ray_sets(), fan.maximal_ray_sets());
            assert_eq!(back.name, fan.name);
        }
    }

    #[test]
    fn empty_fan_parses() {
        let f = read_fan(r#"{"rank":1,"rays":[],"cones":[]}"#).unwrap();
        assert_eq!(f.f_vector(), vec![1, 0]);
        assert!(!f.is_complete());
    }

    #[test]
    fn errors_are_classified() {
        let e = read_fan("{\"rank\": 1,\n \"rays\": [[1],").unwrap_err();
        assert!(e.is_parse());
        assert!(matches!(e, DocumentError::Parse { line: 2, .. }));
        let e = read_fan(r#"{"format":"fanic/9","rank":1,"rays":[],"cones":[]}"#).unwrap_err();
        assert!(e.is_parse());
        let e = read_fan(r#"{"rank":2,"rays":[[1,0],[-1,0]],"cones":[[0,1]]}"#).unwrap_err();
        assert!(!e.is_parse());
    }

    #[test]
    fn perversity_documents() {
        let fan = corpus::p2();
        let p = read_perversity(&fan, r#"{"by_dim":{"1":0,"2":1}}"#).unwrap();
        assert_eq!(p, Perversity::top(&fan));
        let cones: Vec<String> =
            (1..fan.len()).map(|c| format!(r#"{{"rays":{:?},"value":0}}"#, fan.ray_ids(c))).collect();
        let p = read_perversity(&fan, &format!(r#"{{"by_cone":[{}]}}"#, cones.join(","))).unwrap();
        assert_eq!(p, Perversity::middle(&fan));
        assert!(read_perversity(&fan, r#"{"by_dim":{"1":0}}"#).is_err());
        assert_eq!(read_perversity(&fan, "bottom").unwrap(), Perversity::bottom(&fan));
    }
}
