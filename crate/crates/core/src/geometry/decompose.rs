use serde::{Deserialize, Serialize};

use super::polytope::{cone_rays, enumerate_vertices};
use super::{Chart, ConeKind, ConeRep, Halfspace, Polytope};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{complement, dot, hyperplane_basis, norm, normalized, null_space, rank, sub};

/// `P = Q + L` with `L` the lineality space and `Q = P ∩ L^⊥` line-free.
///
/// `Q` is expressed in the chart `z = W x`, where the rows of `W`
/// (`chart_basis`) are an orthonormal basis of `L^⊥`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinealityDecomposition {
    pub dim: usize,
    pub lineality_basis: Vec<Vec<f64>>,
    pub chart_basis: Vec<Vec<f64>>,
    /// Defining halfspaces of `P` with unit normals.
    pub halfspaces: Vec<Halfspace>,
    /// The same halfspaces written in chart coordinates.
    pub chart_halfspaces: Vec<Halfspace>,
    pub vertices: Vec<Vec<f64>>,
    pub recession_rays: Vec<Vec<f64>>,
}

impl LinealityDecomposition {
    pub fn new(dim: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        if halfspaces.is_empty() {
            return Err(Error::Degenerate("no halfspaces".into()));
        }
        let mut hs = Vec::with_capacity(halfspaces.len());
        for (i, h) in halfspaces.iter().enumerate() {
            check_dim(dim, h.dim())?;
            hs.push(
                h.normalized()
                    .ok_or_else(|| Error::InvalidArgument(format!("halfspace {i} has a zero normal")))?,
            );
        }
        let normals: Vec<Vec<f64>> = hs.iter().map(|h| h.a.clone()).collect();
        let lineality_basis = null_space(&normals, dim, 1e-10);
        let chart_basis = complement(&lineality_basis, dim);
        let r = chart_basis.len();
        let chart_halfspaces: Vec<Halfspace> = hs
            .iter()
            .map(|h| Halfspace::new(chart_basis.iter().map(|w| dot(w, &h.a)).collect(), h.b))
            .collect();
        let bmax = hs.iter().map(|h| h.b.abs()).fold(0.0, f64::max);
        let vertices = enumerate_vertices(&chart_halfspaces, r, 1e-9 * (1.0 + bmax), 1e-8 * (1.0 + bmax));
        if vertices.is_empty() {
            return Err(Error::Degenerate("empty polyhedron".into()));
        }
        let chart_normals: Vec<Vec<f64>> = chart_halfspaces.iter().map(|h| h.a.clone()).collect();
        let recession_rays = cone_rays(&chart_normals, r, 1e-12);
        let mut span: Vec<Vec<f64>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
        span.extend(recession_rays.iter().cloned());
        if span.is_empty() || rank(&span, r, 1e-9) < r {
            return Err(Error::Degenerate("polyhedron is not full-dimensional".into()));
        }
        Ok(Self {
            dim,
            lineality_basis,
            chart_basis,
            halfspaces: hs,
            chart_halfspaces,
            vertices,
            recession_rays,
        })
    }

    pub fn reduced_dim(&self) -> usize {
        self.chart_basis.len()
    }

    pub fn is_bounded(&self) -> bool {
        self.lineality_basis.is_empty() && self.recession_rays.is_empty()
    }

    pub fn to_chart(&self, x: &[f64]) -> Vec<f64> {
        self.chart_basis.iter().map(|w| dot(w, x)).collect()
    }

    pub fn from_chart(&self, z: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for (zi, w) in z.iter().zip(&self.chart_basis) {
            for (xj, wj) in x.iter_mut().zip(w) {
                *xj += zi * wj;
            }
        }
        x
    }

    pub fn max_excess(&self, x: &[f64]) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.excess(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Q` cut down to the cube `[-half, half]^r` of the chart, a polytope
    /// whose distance function agrees with that of `Q` near the origin.
    pub fn truncated(&self, half: f64) -> Result<Polytope> {
        let r = self.reduced_dim();
        let mut hs = self.chart_halfspaces.clone();
        for i in 0..r {
            for s in [1.0, -1.0] {
                let mut a = vec![0.0; r];
                a[i] = s;
                hs.push(Halfspace::new(a, half));
            }
        }
        Polytope::from_halfspaces(r, &hs)
    }
}

/// `hom(Q)` for `Q` embedded at height one in `R^{r+1}`:
/// `{(z, t) : <a, z> - b t <= 0, -t <= 0}`.
pub fn homogenization_cone(dec: &LinealityDecomposition) -> ConeRep {
    let r = dec.reduced_dim();
    let mut halfspaces: Vec<Halfspace> = dec
        .chart_halfspaces
        .iter()
        .map(|h| {
            let mut a = h.a.clone();
            a.push(-h.b);
            Halfspace::new(a, 0.0).normalized().expect("nonzero row")
        })
        .collect();
    let mut t = vec![0.0; r + 1];
    t[r] = -1.0;
    halfspaces.push(Halfspace::new(t, 0.0));
    ConeRep {
        apex: vec![0.0; r + 1],
        halfspaces,
        kind: ConeKind::Hom,
    }
}

/// A bounded section `P' = C ∩ {<x, u> = 1}` of a pointed cone, with `P'`
/// expressed in the chart of that hyperplane with origin `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossSection {
    pub u: Vec<f64>,
    pub chart: Chart,
    pub polytope: Polytope,
}

fn section(cone: &ConeRep, u: &[f64]) -> Result<CrossSection> {
    let chart = Chart {
        origin: u.to_vec(),
        basis: hyperplane_basis(u),
    };
    let hs: Vec<Halfspace> = cone
        .halfspaces
        .iter()
        .map(|h| chart.pull_halfspace(h))
        .filter(|h| norm(&h.a) > 1e-12)
        .collect();
    let polytope = Polytope::from_halfspaces(chart.dim(), &hs)?;
    Ok(CrossSection {
        u: u.to_vec(),
        chart,
        polytope,
    })
}

/// Cuts a pointed cone by `{<x, u'> = 1}` with `u'` the normalized sum of
/// the inner facet normals, trying a fixed sequence of perturbations of
/// `u'` if that section is not a bounded polytope.
pub fn cross_section(cone: &ConeRep) -> Result<CrossSection> {
    let n = cone.apex.len();
    let mut s = vec![0.0; n];
    for h in &cone.halfspaces {
        let a = normalized(&h.a).ok_or_else(|| Error::Degenerate("zero cone normal".into()))?;
        for (si, ai) in s.iter_mut().zip(&a) {
            *si -= ai;
        }
    }
    let base = normalized(&s).ok_or_else(|| Error::Heuristic("inner normals sum to zero".into()))?;
    let mut candidates = vec![base.clone()];
    for step in [0.05, 0.1, 0.2] {
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut u = base.clone();
                u[i] += sign * step;
                if let Some(u) = normalized(&u) {
                    candidates.push(u);
                }
            }
        }
    }
    let mut last = None;
    for u in candidates {
        match section(cone, &u) {
            Ok(cs) => return Ok(cs),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::Heuristic(format!(
        "no bounded cross-section found ({})",
        last.map_or_else(String::new, |e| e.to_string())
    )))
}
