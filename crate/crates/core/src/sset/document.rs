//! JSON documents for simplicial sets and maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{SSet, SSetMap, Simplex};
use crate::error::{Error, Result};

/// `{"truncation", "levels", "faces": {"n:i": {id: id}}, "degeneracies": {"n:j": {id: id}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSetDocument {
    pub truncation: usize,
    pub levels: Vec<Vec<String>>,
    pub faces: BTreeMap<String, BTreeMap<String, String>>,
    pub degeneracies: BTreeMap<String, BTreeMap<String, String>>,
}

/// `{"source", "target", "components": [{id: id}, ...]}` with named endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub source: String,
    pub target: String,
    pub components: Vec<BTreeMap<String, String>>,
}

fn table_key(n: usize, i: usize) -> String {
    format!("{n}:{i}")
}

impl SSetDocument {
    pub fn from_sset(x: &SSet) -> Self {
        let m = x.truncation();
        let levels: Vec<Vec<String>> = (0..=m).map(|n| x.names_at(n)).collect();
        let mut faces = BTreeMap::new();
        let mut degeneracies = BTreeMap::new();
        for n in 0..=m {
            if n > 0 {
                for i in 0..=n {
                    let table = (0..x.level_size(n) as Simplex)
                        .map(|s| (levels[n][s as usize].clone(), levels[n - 1][x.face(n, i, s) as usize].clone()))
                        .collect();
                    faces.insert(table_key(n, i), table);
                }
            }
            if n < m {
                for j in 0..=n {
                    let table = (0..x.level_size(n) as Simplex)
                        .map(|s| {
                            (levels[n][s as usize].clone(), levels[n + 1][x.degeneracy(n, j, s) as usize].clone())
                        })
                        .collect();
                    degeneracies.insert(table_key(n, j), table);
                }
            }
        }
        Self { truncation: m, levels, faces, degeneracies }
    }

    /// Builds the simplicial set, checking shapes and every simplicial identity.
    pub fn to_sset(&self) -> Result<SSet> {
        let m = self.truncation;
        if self.levels.len() != m + 1 {
            return Err(Error::Malformed(format!("expected {} levels, found {}", m + 1, self.levels.len())));
        }
        let index: Vec<BTreeMap<&str, Simplex>> = self
            .levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(x, s)| (s.as_str(), x as Simplex)).collect())
            .collect();
        for (n, l) in self.levels.iter().enumerate() {
            if index[n].len() != l.len() {
                return Err(Error::Malformed(format!("duplicate identifier at level {n}")));
            }
        }
        let table = |tables: &BTreeMap<String, BTreeMap<String, String>>, what: &str, n: usize, i: usize, to: usize| {
            let key = table_key(n, i);
            let t = tables.get(&key).ok_or_else(|| Error::Malformed(format!("missing {what} table {key}")))?;
            if t.len() != self.levels[n].len() {
                return Err(Error::Malformed(format!("{what} table {key} is not total")));
            }
            self.levels[n]
                .iter()
                .map(|s| {
                    let image = t.get(s).ok_or_else(|| Error::Malformed(format!("{what} table {key} misses {s}")))?;
                    index[to]
                        .get(image.as_str())
                        .copied()
                        .ok_or_else(|| Error::Malformed(format!("{what} table {key} names unknown {image}")))
                })
                .collect::<Result<Vec<Simplex>>>()
        };
        let expected_faces: usize = (1..=m).map(|n| n + 1).sum();
        let expected_degens: usize = (0..m).map(|n| n + 1).sum();
        if self.faces.len() != expected_faces || self.degeneracies.len() != expected_degens {
            return Err(Error::Malformed("unexpected face or degeneracy tables".into()));
        }
        let mut faces = vec![Vec::new()];
        let mut degeneracies = Vec::new();
        for n in 0..=m {
            if n > 0 {
                faces.push((0..=n).map(|i| table(&self.faces, "face", n, i, n - 1)).collect::<Result<Vec<_>>>()?);
            }
            degeneracies.push(if n < m {
                (0..=n).map(|j| table(&self.degeneracies, "degeneracy", n, j, n + 1)).collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            });
        }
        let x = SSet::from_parts(m, self.levels.clone(), faces, degeneracies)?;
        if let Some(v) = x.validate().into_iter().next() {
            return Err(Error::Malformed(v.to_string()));
        }
        Ok(x)
    }
}

impl MapDocument {
    pub fn from_map(source: &str, target: &str, f: &SSetMap) -> Self {
        let (s, t) = (f.source(), f.target());
        let components = (0..=s.truncation())
            .map(|n| {
                (0..s.level_size(n) as Simplex)
                    .map(|x| (s.name(n, x).into_owned(), t.name(n, f.apply(n, x)).into_owned()))
                    .collect()
            })
            .collect();
        Self { source: source.into(), target: target.into(), components }
    }

    pub fn to_map(&self, source: &Arc<SSet>, target: &Arc<SSet>) -> Result<SSetMap> {
        let m = source.truncation();
        if self.components.len() != m + 1 {
            return Err(Error::Malformed(format!("map needs {} components", m + 1)));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if c.len() != source.level_size(n) {
                    return Err(Error::Malformed(format!("component {n} is not total")));
                }
                (0..source.level_size(n) as Simplex)
                    .map(|x| {
                        let name = source.name(n, x);
                        let image = c
                            .get(name.as_ref())
                            .ok_or_else(|| Error::Malformed(format!("component {n} misses {name}")))?;
                        target
                            .lookup(n, image)
                            .ok_or_else(|| Error::Malformed(format!("component {n} names unknown {image}")))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        SSetMap::new(source.clone(), target.clone(), components)
    }
}
