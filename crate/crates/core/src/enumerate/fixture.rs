//! Transcribed classification tables and comparison against enumeration
//! output.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{canonical_shape, Classification, CoxeterType, ShapeKey};
use crate::error::{Error, Result};
use crate::spectral::{parse_spectral_type, Shape};

const TAME: &str = include_str!("../../fixtures/tame.json");
const CLASS: &str = include_str!("../../fixtures/class.json");

#[derive(Clone, Debug)]
pub struct FixtureEntry {
    pub name: String,
    pub shape: Shape,
    /// Spectral types listed for the shape; star shapes carry the types
    /// produced by the arm-length recipe.
    pub spectral_types: Vec<String>,
    pub winv: Option<CoxeterType>,
    /// Nodes drawn as moved by their reflection.
    pub dotted: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct FixtureTable {
    pub idx: i64,
    pub entries: Vec<FixtureEntry>,
}

impl FixtureTable {
    /// Index 0 table.
    pub fn tame() -> Self {
        Self::from_json(&serde_json::from_str(TAME).expect("bundled fixture is JSON")).expect("bundled fixture parses")
    }

    /// Index -2 table.
    pub fn class() -> Self {
        Self::from_json(&serde_json::from_str(CLASS).expect("bundled fixture is JSON")).expect("bundled fixture parses")
    }

    /// The bundled table for `idx`, if there is one.
    pub fn bundled(idx: i64) -> Option<Self> {
        match idx {
            0 => Some(Self::tame()),
            -2 => Some(Self::class()),
            _ => None,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::invalid(format!("fixture: {m}"));
        let idx = v["idx"].as_i64().ok_or_else(|| bad("missing idx"))?;
        let mut entries = Vec::new();
        for e in v["entries"].as_array().ok_or_else(|| bad("missing entries"))? {
            let strings = |field: &str| -> Result<Vec<String>> {
                match &e[field] {
                    Value::Null => Ok(vec![]),
                    Value::Array(xs) => {
                        xs.iter().map(|x| x.as_str().map(String::from).ok_or_else(|| bad(field))).collect()
                    }
                    _ => Err(bad(field)),
                }
            };
            let winv = match &e["winv"] {
                Value::Null => None,
                Value::String(s) => Some(s.parse()?),
                _ => return Err(bad("winv")),
            };
            entries.push(FixtureEntry {
                name: e["name"].as_str().ok_or_else(|| bad("entry name"))?.to_string(),
                shape: Shape::from_json(&e["shape"])?,
                spectral_types: strings("spectral_types")?,
                winv,
                dotted: strings("dotted")?,
            });
        }
        Ok(FixtureTable { idx, entries })
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = json!({
                    "name": e.name,
                    "shape": e.shape.to_json(),
                    "spectral_types": e.spectral_types,
                    "dotted": e.dotted,
                });
                if let Some(w) = &e.winv {
                    v["winv"] = json!(w.to_string());
                }
                v
            })
            .collect();
        json!({ "idx": self.idx, "entries": entries })
    }

    /// Every listed spectral type parses and has the table's index.
    pub fn validate(&self) -> Result<()> {
        for e in &self.entries {
            for s in &e.spectral_types {
                let idx = parse_spectral_type(s)?.rigidity_index()?;
                if idx != self.idx {
                    return Err(Error::invalid(format!("fixture {:?}: {s} has index {idx}, not {}", e.name, self.idx)));
                }
            }
        }
        Ok(())
    }

    pub fn keys(&self) -> Result<BTreeMap<ShapeKey, String>> {
        self.entries.iter().map(|e| Ok((canonical_shape(&e.shape)?, e.name.clone()))).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixtureDiff {
    /// Fixture entries with no enumerated shape.
    pub missing: Vec<String>,
    /// Enumerated shapes absent from the fixture, named by their first
    /// spectral type.
    pub extra: Vec<String>,
}

impl FixtureDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.missing.iter().map(|m| format!("missing from enumeration: {m}")).collect();
        out.extend(self.extra.iter().map(|x| format!("not in fixture: {x}")));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "missing": self.missing, "extra": self.extra, "match": self.is_empty() })
    }
}

pub fn compare_with_fixture(result: &Classification, f: &FixtureTable) -> Result<FixtureDiff> {
    if result.idx != f.idx {
        return Err(Error::invalid(format!("fixture is for index {}, result for {}", f.idx, result.idx)));
    }
    let want = f.keys()?;
    let have = result.keys();
    let missing = want.iter().filter(|(k, _)| !have.contains(*k)).map(|(_, name)| name.clone()).collect();
    let extra = result
        .classes
        .iter()
        .filter(|c| !want.contains_key(&c.key))
        .map(|c| c.spectral_types.first().cloned().unwrap_or_else(|| c.key.to_string()))
        .collect();
    Ok(FixtureDiff { missing, extra })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_parse_and_have_their_index() {
        for t in [FixtureTable::tame(), FixtureTable::class()] {
            t.validate().unwrap();
            let keys = t.keys().unwrap();
            assert_eq!(keys.len(), t.entries.len(), "duplicate shapes in the idx {} table", t.idx);
        }
        assert_eq!(FixtureTable::tame().entries.len(), 8);
        assert_eq!(FixtureTable::class().entries.len(), 31);
    }

    /// Dots mark nodes whose reflection moves the fibre element, so they are
    /// exactly the nodes with nonzero pairing, and the plain nodes span the
    /// printed group.
    #[test]
    fn dots_and_labels_are_consistent() {
        for t in [FixtureTable::tame(), FixtureTable::class()] {
            for e in &t.entries {
                let sh = &e.shape;
                let plain: Vec<usize> = (0..sh.len()).filter(|&a| sh.node_pairing(a) == 0).collect();
                for a in 0..sh.len() {
                    assert_eq!(
                        e.dotted.contains(&sh.nodes[a].id),
                        !plain.contains(&a),
                        "{} node {}",
                        e.name,
                        sh.nodes[a].id
                    );
                }
                let g: Vec<Vec<i64>> = plain.iter().map(|&a| plain.iter().map(|&b| sh.gram[a][b]).collect()).collect();
                assert_eq!(Some(super::super::coxeter_type(&g).unwrap()), e.winv, "{}", e.name);
            }
        }
    }

    #[test]
    fn listed_types_have_the_listed_shape() {
        for t in [FixtureTable::tame(), FixtureTable::class()] {
            for e in &t.entries {
                let want = canonical_shape(&e.shape).unwrap();
                for s in &e.spectral_types {
                    let got = canonical_shape(&parse_spectral_type(s).unwrap().shape().unwrap()).unwrap();
                    assert_eq!(got, want, "{}: {s}", e.name);
                }
            }
        }
    }
}
