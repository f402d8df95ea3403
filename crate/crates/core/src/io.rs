//! JSON documents for graphs and packings.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::disks::{Disk, Packing, DEFAULT_CONTACT_TOL};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Parses `{"n": .., "edges": [[i, j], ..]}`, validating ids and simplicity.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let raw: RawGraph = serde_json::from_str(text)?;
    Graph::new(raw.n, raw.edges.into_iter().map(|[a, b]| (a, b)))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(g).expect("graph serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskRecord {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Meta {
    /// Tolerance used to read off `contacts`.
    pub contact_tol: f64,
    /// SHA-256 of the canonical input graph JSON.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// On-disk packing. Doubles are written in shortest round-trip form, so reading a
/// document back reproduces every coordinate bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingDocument {
    pub schema_version: String,
    pub disks: Vec<DiskRecord>,
    pub contacts: Vec<[usize; 2]>,
    pub meta: Meta,
}

impl PackingDocument {
    /// Document for `p`; contacts are the pairs with `|invdist - 1| <= contact_tol`.
    pub fn new(p: &Packing, contact_tol: f64) -> Self {
        let disks = p
            .disks()
            .iter()
            .enumerate()
            .map(|(id, d)| DiskRecord { id, x: d.center.x, y: d.center.y, r: d.radius })
            .collect();
        let mut contacts = Vec::new();
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if (p.invdist(i, j) - 1.0).abs() <= contact_tol {
                    contacts.push([i, j]);
                }
            }
        }
        PackingDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            disks,
            contacts,
            meta: Meta { contact_tol, ..Meta::default() },
        }
    }

    pub fn with_provenance(mut self, g: &Graph, flip_count: usize, seed: Option<u64>) -> Self {
        self.meta.graph_sha256 = Some(graph_digest(g));
        self.meta.flip_count = Some(flip_count);
        self.meta.seed = seed;
        self
    }

    /// Disks in id order; ids must be exactly `0..len`.
    pub fn to_disks(&self) -> Result<Vec<Disk>> {
        let mut out: Vec<Option<Disk>> = vec![None; self.disks.len()];
        for rec in &self.disks {
            let slot = out.get_mut(rec.id).ok_or_else(|| Error::Domain(format!("disk id {} out of range", rec.id)))?;
            if slot.is_some() {
                return Err(Error::Domain(format!("duplicate disk id {}", rec.id)));
            }
            *slot = Some(Disk::new(rec.x, rec.y, rec.r)?);
        }
        Ok(out.into_iter().map(|d| d.expect("ids are dense")).collect())
    }

    pub fn to_packing(&self) -> Result<Packing> {
        Packing::new(self.to_disks()?, DEFAULT_CONTACT_TOL)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PackingDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Domain(format!("unsupported schema_version {:?}", doc.schema_version)));
        }
        doc.to_disks()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }
}

pub fn graph_digest(g: &Graph) -> String {
    let digest = Sha256::digest(graph_to_json(g).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// A pair of disks that disagrees with the expected contact graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub edge: Edge,
    pub invdist: f64,
    /// Whether `edge` is an edge of the expected graph.
    pub expected_contact: bool,
}

/// Pairs that are edges of `g` but not tangent within `tol`, or non-edges that touch
/// or overlap.
pub fn contact_violations(disks: &[Disk], g: &Graph, tol: f64) -> Result<Vec<Violation>> {
    if disks.len() != g.n {
        return Err(Error::Precondition(format!("{} disks for a graph on {} vertices", disks.len(), g.n)));
    }
    let mut out = Vec::new();
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let d = crate::disks::inversive_distance(&disks[i], &disks[j])?;
            let expected = g.has_edge(i, j);
            let bad = if expected { (d - 1.0).abs() > tol } else { d <= 1.0 + tol };
            if bad {
                out.push(Violation { edge: Edge(i, j), invdist: d, expected_contact: expected });
            }
        }
    }
    Ok(out)
}
