//! JSON graph files:
//!
//! ```json
//! {
//!   "vertices": [{"id": "e0", "genus": 1, "self_int": -6}, ...],
//!   "edges": [["e0", "e1_1", 1], ...],
//!   "cycles": {"Z": {"e0": 1, "e1_1": 2}}
//! }
//! ```
//!
//! Key order inside `cycles` is preserved, so writing a file that was read back reproduces it
//! byte for byte.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::cycle::{Cycle, DualGraph, StarGraph, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub genus: u32,
    pub self_int: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<(String, String, u32)>,
    #[serde(default)]
    pub cycles: IndexMap<String, IndexMap<String, i64>>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::GraphFile(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        GraphFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph files serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn from_graph(g: &DualGraph, cycles: &[(&str, &Cycle)]) -> Self {
        let ids: Vec<&str> = g.vertices().iter().map(|v| v.id.as_str()).collect();
        GraphFile {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexRecord {
                    id: v.id.clone(),
                    genus: v.genus,
                    self_int: v.self_int,
                })
                .collect(),
            edges: g
                .edges()
                .into_iter()
                .map(|(i, j, m)| (ids[i].to_string(), ids[j].to_string(), m))
                .collect(),
            cycles: cycles
                .iter()
                .map(|(name, c)| {
                    let coeffs = c
                        .coeffs()
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(|(i, &v)| (ids[i].to_string(), v))
                        .collect();
                    (name.to_string(), coeffs)
                })
                .collect(),
        }
    }

    pub fn from_star(s: &StarGraph) -> Self {
        GraphFile::from_graph(&s.graph, &[("Z_r", &s.z_r), ("C_r", &s.c_r)])
    }

    /// The graph and its named cycles, in file order.
    pub fn to_graph(&self) -> Result<(DualGraph, Vec<(String, Cycle)>)> {
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                genus: v.genus,
                self_int: v.self_int,
            })
            .collect();
        let index = |id: &str| {
            self.vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| Error::GraphFile(format!("unknown vertex id {id:?}")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (a, b, m) in &self.edges {
            edges.push((index(a)?, index(b)?, *m));
        }
        let g = DualGraph::new(vertices, &edges).map_err(|e| Error::GraphFile(e.to_string()))?;
        let mut cycles = Vec::new();
        for (name, coeffs) in &self.cycles {
            let mut c = vec![0i64; g.len()];
            for (id, v) in coeffs {
                c[index(id)?] = *v;
            }
            cycles.push((name.clone(), g.cycle(c)?));
        }
        Ok((g, cycles))
    }
}
