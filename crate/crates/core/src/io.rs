//! JSON input and output: polytope files, `info` summaries and the
//! representation and report artifacts.

use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, LinealityDecomposition, Polytope};
use crate::linalg::{dist, normalized};
use crate::poly::Polynomial;

/// `{"dim": d, "halfspaces": [{"a": [...], "b": ...}], "vertices": [...]}`
/// meaning `<a, x> <= b`; `vertices` is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
}

impl PolytopeFile {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        Self {
            dim,
            halfspaces,
            vertices: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("polytope file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidArgument(format!("dim: {} is not 1, 2 or 3", self.dim)));
        }
        if self.halfspaces.is_empty() {
            return Err(Error::InvalidArgument("halfspaces: empty list".into()));
        }
        for (i, h) in self.halfspaces.iter().enumerate() {
            if h.a.len() != self.dim {
                return Err(Error::InvalidArgument(format!(
                    "halfspaces[{i}].a: length {} but dim is {}",
                    h.a.len(),
                    self.dim
                )));
            }
            if !h.b.is_finite() || h.a.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidArgument(format!("halfspaces[{i}]: non-finite entry")));
            }
        }
        if let Some(vs) = &self.vertices {
            if let Some(i) = vs.iter().position(|v| v.len() != self.dim) {
                return Err(Error::InvalidArgument(format!("vertices[{i}]: wrong length")));
            }
        }
        Ok(())
    }

    /// Builds the polytope and compares it with the listed vertices, if any.
    /// Fails with [`Error::Unbounded`] for unbounded input.
    pub fn polytope(&self) -> Result<Polytope> {
        let p = Polytope::from_halfspaces(self.dim, &self.halfspaces)?;
        if let Some(given) = &self.vertices {
            cross_validate(&p, given)?;
        }
        Ok(p)
    }
}

fn cross_validate(p: &Polytope, given: &[Vec<f64>]) -> Result<()> {
    let tol = 1e-7 * p.diameter().max(1.0);
    if given.len() != p.num_vertices() {
        return Err(Error::InvalidArgument(format!(
            "vertices: {} listed but the halfspaces have {}",
            given.len(),
            p.num_vertices()
        )));
    }
    for (i, v) in given.iter().enumerate() {
        if !p.vertices().iter().any(|w| dist(v, w) <= tol) {
            return Err(Error::InvalidArgument(format!(
                "vertices[{i}]: {v:?} is not a vertex of the halfspace system"
            )));
        }
    }
    Ok(())
}

/// Summary printed by `info`: the input shape plus the computed data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeInfo {
    pub dim: usize,
    /// Irredundant facets with unit outer normals.
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<Vec<f64>>,
    pub edges: Vec<[usize; 2]>,
    /// Vertex indices of each facet.
    pub facet_incidence: Vec<Vec<usize>>,
    pub diameter: f64,
    pub counts: Counts,
    /// `q_F` for every facet, in facet order.
    pub q_f: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub vertices: usize,
    pub edges: usize,
    pub facets: usize,
    /// `V - E + F`, reported for three-dimensional input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
}

impl PolytopeInfo {
    pub fn new(p: &Polytope) -> Self {
        let (v, e, f) = (p.num_vertices(), p.edges().len(), p.num_facets());
        Self {
            dim: p.dim(),
            halfspaces: p.facets().to_vec(),
            vertices: p.vertices().to_vec(),
            edges: p.edges().to_vec(),
            facet_incidence: (0..f).map(|i| p.facet_vertices(i).to_vec()).collect(),
            diameter: p.diameter(),
            counts: Counts {
                vertices: v,
                edges: e,
                facets: f,
                euler: (p.dim() == 3).then(|| v as i64 - e as i64 + f as i64),
            },
            q_f: (0..f).map(|i| p.q_f(i)).collect(),
        }
    }
}

/// Summary of an unbounded input: `P = Q + L` with `Q` line-free.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnboundedInfo {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    pub lineality_basis: Vec<Vec<f64>>,
    /// Vertices of `Q` in input coordinates.
    pub vertices: Vec<Vec<f64>>,
    /// Extreme rays of the recession cone of `Q`, unit length.
    pub recession_rays: Vec<Vec<f64>>,
}

impl UnboundedInfo {
    pub fn new(dec: &LinealityDecomposition) -> Self {
        Self {
            dim: dec.dim,
            halfspaces: dec.halfspaces.clone(),
            lineality_basis: dec.lineality_basis.clone(),
            vertices: dec.vertices.iter().map(|z| dec.from_chart(z)).collect(),
            recession_rays: dec
                .recession_rays
                .iter()
                .filter_map(|r| normalized(&dec.from_chart(r)))
                .collect(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline. Field order follows the struct
/// definitions and maps are ordered, so equal values give equal bytes.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}
