//! The workspace document: named simplicial sets, maps, categories and diagrams
//! sharing one truncation.

use std::collections::BTreeMap;
use std::sync::Arc;

use reedy_core::reedy::{CategorySpec, Diagram, ReedyCategory};
use reedy_core::sset::document::{MapDocument, SSetDocument};
use reedy_core::sset::{discrete, indiscrete_nerve, point, standard_simplex, HomSearch, SSet, SSetMap};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// A standard object by name and size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Builtin {
    /// `point`, `simplex`, `indiscrete_nerve` or `discrete`.
    pub builtin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SSetEntry {
    Builtin(Builtin),
    Explicit(SSetDocument),
}

/// A map fixed by where it sends each vertex; it must be the only such map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexMap {
    pub source: String,
    pub target: String,
    pub vertices: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapEntry {
    Vertices(VertexMap),
    Explicit(MapDocument),
}

impl MapEntry {
    fn endpoints(&self) -> (&str, &str) {
        match self {
            MapEntry::Vertices(v) => (&v.source, &v.target),
            MapEntry::Explicit(d) => (&d.source, &d.target),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub category: String,
    /// Object name to simplicial-set name.
    pub values: BTreeMap<String, String>,
    /// Generator name to map name.
    pub maps: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceDocument {
    pub format_version: u32,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_dim: Option<usize>,
    #[serde(default)]
    pub simplicial_sets: BTreeMap<String, SSetEntry>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapEntry>,
    #[serde(default)]
    pub categories: BTreeMap<String, CategorySpec>,
    #[serde(default)]
    pub diagrams: BTreeMap<String, DiagramDocument>,
}

impl WorkspaceDocument {
    pub fn empty(truncation: usize) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            truncation,
            check_dim: None,
            simplicial_sets: BTreeMap::new(),
            maps: BTreeMap::new(),
            categories: BTreeMap::new(),
            diagrams: BTreeMap::new(),
        }
    }

    /// Pretty JSON with a trailing newline; the canonical form.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// A parsed and fully resolved workspace.
pub struct Workspace {
    pub document: WorkspaceDocument,
    pub sets: BTreeMap<String, Arc<SSet>>,
    pub maps: BTreeMap<String, SSetMap>,
    pub categories: BTreeMap<String, Arc<ReedyCategory>>,
    pub diagrams: BTreeMap<String, Diagram>,
}

fn build_builtin(b: &Builtin, m: usize, name: &str) -> CliResult<SSet> {
    let size = || b.size.ok_or_else(|| CliError::Invalid(format!("simplicial set {name}: {} needs a size", b.builtin)));
    Ok(match b.builtin.as_str() {
        "point" => point(m),
        "simplex" => standard_simplex(size()?, m),
        "indiscrete_nerve" => indiscrete_nerve(size()?, m)?,
        "discrete" => discrete(size()?, m),
        other => return Err(CliError::Invalid(format!("simplicial set {name}: unknown builtin {other}"))),
    })
}

fn build_vertex_map(v: &VertexMap, source: &Arc<SSet>, target: &Arc<SSet>, name: &str) -> CliResult<SSetMap> {
    let mut search = HomSearch::new(source, target)?;
    for (from, to) in &v.vertices {
        let x = source.lookup(0, from).ok_or_else(|| CliError::Dangling(format!("map {name}: vertex {from}")))?;
        let y = target.lookup(0, to).ok_or_else(|| CliError::Dangling(format!("map {name}: vertex {to}")))?;
        search = search.pin(0, x, y);
    }
    let mut found = 0;
    let _ = search.for_each(|_| {
        found += 1;
        if found > 1 {
            std::ops::ControlFlow::Break(())
        } else {
            std::ops::ControlFlow::Continue(())
        }
    });
    match found {
        1 => Ok(search.first().expect("one map")),
        0 => Err(CliError::Invalid(format!("map {name}: no simplicial map extends the vertex assignment"))),
        _ => Err(CliError::Invalid(format!("map {name}: the vertex assignment does not determine a unique map"))),
    }
}

pub fn parse(text: &str) -> CliResult<Workspace> {
    let document: WorkspaceDocument = serde_json::from_str(text)
        .map_err(|e| CliError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    resolve(document)
}

pub fn resolve(document: WorkspaceDocument) -> CliResult<Workspace> {
    if document.format_version != FORMAT_VERSION {
        return Err(CliError::Invalid(format!("unsupported format_version {}", document.format_version)));
    }
    let m = document.truncation;
    let mut sets = BTreeMap::new();
    for (name, entry) in &document.simplicial_sets {
        let x = match entry {
            SSetEntry::Builtin(b) => build_builtin(b, m, name)?,
            SSetEntry::Explicit(d) => {
                if d.truncation != m {
                    return Err(CliError::Truncation { name: name.clone(), found: d.truncation, expected: m });
                }
                d.to_sset().map_err(|e| CliError::Invalid(format!("simplicial set {name}: {e}")))?
            }
        };
        sets.insert(name.clone(), Arc::new(x));
    }
    let set = |owner: &str, name: &str| -> CliResult<Arc<SSet>> {
        sets.get(name).cloned().ok_or_else(|| CliError::Dangling(format!("{owner} refers to simplicial set {name}")))
    };
    let mut maps = BTreeMap::new();
    for (name, entry) in &document.maps {
        let (s, t) = entry.endpoints();
        let (source, target) = (set(&format!("map {name}"), s)?, set(&format!("map {name}"), t)?);
        let f = match entry {
            MapEntry::Vertices(v) => build_vertex_map(v, &source, &target, name)?,
            MapEntry::Explicit(d) => d.to_map(&source, &target).map_err(|e| CliError::Invalid(format!("map {name}: {e}")))?,
        };
        maps.insert(name.clone(), f);
    }
    let mut categories = BTreeMap::new();
    for (name, spec) in &document.categories {
        let c = ReedyCategory::new(spec.clone()).map_err(|e| CliError::Invalid(format!("category {name}: {e}")))?;
        categories.insert(name.clone(), Arc::new(c));
    }
    let mut diagrams = BTreeMap::new();
    for (name, d) in &document.diagrams {
        let owner = format!("diagram {name}");
        let cat = categories
            .get(&d.category)
            .cloned()
            .ok_or_else(|| CliError::Dangling(format!("{owner} refers to category {}", d.category)))?;
        let values = (0..cat.object_count())
            .map(|o| {
                let obj = cat.object_name(o);
                let v = d.values.get(obj).ok_or_else(|| CliError::Dangling(format!("{owner} has no value at {obj}")))?;
                set(&owner, v)
            })
            .collect::<CliResult<Vec<_>>>()?;
        for key in d.values.keys() {
            if cat.object_index(key).is_none() {
                return Err(CliError::Dangling(format!("{owner} assigns unknown object {key}")));
            }
        }
        for key in d.maps.keys() {
            if cat.generator_index(key).is_none() {
                return Err(CliError::Dangling(format!("{owner} assigns unknown generator {key}")));
            }
        }
        let gens = (0..cat.generator_count())
            .map(|g| {
                let gen = cat.generator_name(g);
                let f = d.maps.get(gen).ok_or_else(|| CliError::Dangling(format!("{owner} has no map for {gen}")))?;
                maps.get(f).cloned().ok_or_else(|| CliError::Dangling(format!("{owner} refers to map {f}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let diagram = Diagram::new(cat, values, gens).map_err(|e| CliError::Invalid(format!("{owner}: {e}")))?;
        diagrams.insert(name.clone(), diagram);
    }
    Ok(Workspace { document, sets, maps, categories, diagrams })
}

impl Workspace {
    pub fn truncation(&self) -> usize {
        self.document.truncation
    }

    /// The named diagram, or the only one.
    pub fn diagram(&self, name: Option<&str>) -> CliResult<(&str, &Diagram)> {
        match name {
            Some(n) => self
                .diagrams
                .get_key_value(n)
                .map(|(k, d)| (k.as_str(), d))
                .ok_or_else(|| CliError::Dangling(format!("no diagram named {n}"))),
            None if self.diagrams.len() == 1 => {
                let (k, d) = self.diagrams.iter().next().expect("one diagram");
                Ok((k.as_str(), d))
            }
            None => Err(CliError::Usage(format!(
                "the workspace has {} diagrams; choose one with --name",
                self.diagrams.len()
            ))),
        }
    }
}

/// Registers a simplicial set in explicit form under `name`.
pub fn add_set(doc: &mut WorkspaceDocument, name: &str, x: &SSet) {
    doc.simplicial_sets.insert(name.to_string(), SSetEntry::Explicit(SSetDocument::from_sset(x)));
}

/// Registers a map in explicit form; its endpoints must already be registered.
pub fn add_map(doc: &mut WorkspaceDocument, name: &str, source: &str, target: &str, f: &SSetMap) {
    doc.maps.insert(name.to_string(), MapEntry::Explicit(MapDocument::from_map(source, target, f)));
}
