//! JSON documents for fans, cobordisms and factorization transcripts.
//!
//! A fan document is `{"dim", "rays", "max_cones"}` with 0-based ray
//! indices. A cobordism document is `{"base_dim", "rays", "max_cones"}` with
//! rays of length `base_dim + 1` and optional expected `"bottom"` and `"top"`
//! fan documents. Coordinates are stored as 64-bit integers.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cobordism::Cobordism;
use crate::collapse::{CircuitKey, FactorStep, StepKind};
use crate::error::{Error, Result};
use crate::fan::{Fan, Ray, SimplicialCone};
use crate::linalg::IntVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDoc {
    pub dim: usize,
    pub rays: Vec<IntVector>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismDoc {
    pub base_dim: usize,
    pub rays: Vec<IntVector>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<FanDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<FanDoc>,
}

/// A loaded value with the warnings raised while normalizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

/// A cobordism fan as read from disk, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismInput {
    pub fan: Fan,
    pub bottom: Option<Fan>,
    pub top: Option<Fan>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn index_cones(fan: &Fan) -> (Vec<IntVector>, Vec<Vec<usize>>) {
    let rays: Vec<Ray> = fan.rays().into_iter().collect();
    let cones = fan
        .max_cones()
        .iter()
        .map(|c| c.rays().iter().map(|r| rays.binary_search(r).expect("ray of the fan")).collect())
        .collect();
    (rays.into_iter().map(IntVector::from).collect(), cones)
}

fn build_fan(dim: usize, rays: &[IntVector], cones: &[Vec<usize>], warnings: &mut Vec<String>) -> Result<Fan> {
    let mut prim = Vec::with_capacity(rays.len());
    for (i, v) in rays.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::Parse(format!("ray {i} has {} coordinates, expected {dim}", v.dim())));
        }
        let r = Ray::new(v).map_err(|e| Error::Parse(format!("ray {i}: {e}")))?;
        if r.gen() != v {
            warnings.push(format!("ray {i} {v} is not primitive; using {r}"));
        }
        prim.push(r);
    }
    let mut out = Vec::with_capacity(cones.len());
    for (j, idx) in cones.iter().enumerate() {
        let rs = idx
            .iter()
            .map(|&i| prim.get(i).cloned().ok_or_else(|| Error::Parse(format!("cone {j}: ray index {i} out of range"))))
            .collect::<Result<Vec<_>>>()?;
        out.push(SimplicialCone::new(rs).map_err(|e| Error::Parse(format!("cone {j}: {e}")))?);
    }
    Fan::new(dim, out).map_err(parse_err)
}

impl FanDoc {
    pub fn from_fan(fan: &Fan) -> FanDoc {
        let (rays, max_cones) = index_cones(fan);
        FanDoc { dim: fan.dim(), rays, max_cones }
    }

    pub fn to_fan(&self) -> Result<Loaded<Fan>> {
        let mut warnings = Vec::new();
        let value = build_fan(self.dim, &self.rays, &self.max_cones, &mut warnings)?;
        Ok(Loaded { value, warnings })
    }
}

impl CobordismDoc {
    pub fn from_fan(fan: &Fan, bottom: Option<&Fan>, top: Option<&Fan>) -> CobordismDoc {
        let (rays, max_cones) = index_cones(fan);
        CobordismDoc {
            base_dim: fan.dim() - 1,
            rays,
            max_cones,
            bottom: bottom.map(FanDoc::from_fan),
            top: top.map(FanDoc::from_fan),
        }
    }

    /// Document of a cobordism with its boundary fans recorded.
    pub fn from_cobordism(cob: &Cobordism) -> CobordismDoc {
        Self::from_fan(cob.fan(), Some(cob.bottom()), Some(cob.top()))
    }

    pub fn to_input(&self) -> Result<Loaded<CobordismInput>> {
        let mut warnings = Vec::new();
        let fan = build_fan(self.base_dim + 1, &self.rays, &self.max_cones, &mut warnings)?;
        let mut side = |d: &Option<FanDoc>, name: &str| -> Result<Option<Fan>> {
            let Some(d) = d else { return Ok(None) };
            if d.dim != self.base_dim {
                return Err(Error::Parse(format!("{name} fan has dimension {}, expected {}", d.dim, self.base_dim)));
            }
            let loaded = d.to_fan()?;
            warnings.extend(loaded.warnings.into_iter().map(|w| format!("{name}: {w}")));
            Ok(Some(loaded.value))
        };
        let bottom = side(&self.bottom, "bottom")?;
        let top = side(&self.top, "top")?;
        Ok(Loaded { value: CobordismInput { fan, bottom, top }, warnings })
    }
}

pub fn parse_fan(text: &str) -> Result<Loaded<Fan>> {
    serde_json::from_str::<FanDoc>(text).map_err(parse_err)?.to_fan()
}

pub fn parse_cobordism(text: &str) -> Result<Loaded<CobordismInput>> {
    serde_json::from_str::<CobordismDoc>(text).map_err(parse_err)?.to_input()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_fan(path: &Path) -> Result<Loaded<Fan>> {
    parse_fan(&read(path)?)
}

pub fn read_cobordism(path: &Path) -> Result<Loaded<CobordismInput>> {
    parse_cobordism(&read(path)?)
}

/// Indented JSON with arrays of scalars kept on one line, plus a trailing
/// newline. Object keys come out sorted.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub kind: String,
    pub circuit: Vec<IntVector>,
    /// Blowup or blowdown center in the base lattice.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<IntVector>,
    pub fan: FanDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptDoc {
    pub bottom: FanDoc,
    pub steps: Vec<StepDoc>,
}

fn key_doc(k: &CircuitKey) -> Vec<IntVector> {
    k.rays().iter().map(|r| r.gen().clone()).collect()
}

pub fn transcript(bottom: &Fan, steps: &[FactorStep]) -> TranscriptDoc {
    TranscriptDoc {
        bottom: FanDoc::from_fan(bottom),
        steps: steps
            .iter()
            .map(|s| {
                let (kind, center) = match &s.kind {
                    StepKind::Blowup(r) => ("blowup", Some(r.gen().clone())),
                    StepKind::Blowdown(r) => ("blowdown", Some(r.gen().clone())),
                    StepKind::Flip => ("flip", None),
                    StepKind::Identity => ("identity", None),
                };
                StepDoc { kind: kind.into(), circuit: key_doc(&s.circuit), center, fan: FanDoc::from_fan(&s.result) }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::build_cobordism;
    use crate::collapse::extract_factorization;
    use crate::fan::orthant;

    const P2: &str = r#"{"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]}"#;

    #[test]
    fn fan_round_trip() {
        let loaded = parse_fan(P2).unwrap();
        assert!(loaded.warnings.is_empty());
        assert_eq!(loaded.value.len(), 3);
        let doc = FanDoc::from_fan(&loaded.value);
        let again = serde_json::from_str::<FanDoc>(&to_json(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_fan().unwrap().value, loaded.value);
    }

    #[test]
    fn non_primitive_rays_warn() {
        let loaded = parse_fan(r#"{"dim": 2, "rays": [[2,0],[0,1]], "max_cones": [[0,1]]}"#).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        assert_eq!(loaded.value, Fan::new(2, [orthant(2)]).unwrap());
    }

    #[test]
    fn malformed_documents() {
        for text in [
            "not json",
            r#"{"dim": 2, "rays": [[1,0,0]], "max_cones": [[0]]}"#,
            r#"{"dim": 2, "rays": [[1,0]], "max_cones": [[3]]}"#,
            r#"{"dim": 2, "rays": [[1,0],[2,0]], "max_cones": [[0,1]]}"#,
            r#"{"dim": 2, "rays": [[0,0]], "max_cones": [[0]]}"#,
            r#"{"dim": 2, "rays": [], "max_cones": [], "extra": 1}"#,
        ] {
            assert!(matches!(parse_fan(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn cobordism_round_trip() {
        let delta = Fan::new(3, [orthant(3)]).unwrap();
        let cob = build_cobordism(&delta, &[IntVector::from([1, 1, 0]), IntVector::from([0, 1, 1])]).unwrap();
        let doc = CobordismDoc::from_cobordism(&cob);
        let text = to_json(&doc).unwrap();
        let input = parse_cobordism(&text).unwrap().value;
        assert_eq!(&input.fan, cob.fan());
        assert_eq!(input.bottom.as_ref(), Some(cob.bottom()));
        assert_eq!(input.top.as_ref(), Some(cob.top()));
        assert_eq!(CobordismDoc::from_fan(&input.fan, input.bottom.as_ref(), input.top.as_ref()), doc);

        let steps = extract_factorization(&cob, false).unwrap();
        let t = transcript(cob.bottom(), &steps);
        assert_eq!(t.steps.len(), 2);
        assert_eq!(t.steps[0].center, Some(IntVector::from([1, 1, 0])));
        let back: TranscriptDoc = serde_json::from_str(&to_json(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
