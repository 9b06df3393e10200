use serde::{Deserialize, Serialize};

use super::{Chart, Halfspace, Polytope};
use crate::error::Result;
use crate::linalg::{dot, hyperplane_basis, norm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    Supporting,
    RhoApprox,
    Hom,
}

/// A polyhedral cone `{x : <a_i, x - apex> <= 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeRep {
    pub apex: Vec<f64>,
    pub halfspaces: Vec<Halfspace>,
    pub kind: ConeKind,
}

impl ConeRep {
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let y: Vec<f64> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        self.halfspaces.iter().all(|h| dot(&h.a, &y) <= tol)
    }
}

/// The section `P_v = S(P, v) ∩ H_v` of the supporting cone at a vertex,
/// with `H_v = {y : <y, u_v> = -1}` in coordinates centred at `v`.
///
/// `polytope` lives in the chart with origin `-u_v` and an orthonormal
/// basis of `u_v^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFigure {
    pub vertex: usize,
    pub apex: Vec<f64>,
    pub u_v: Vec<f64>,
    pub chart: Chart,
    pub polytope: Polytope,
}

impl Polytope {
    /// `S(P, v) = {y : <u_F, y> <= 0 for F ∋ v}`, apex at the origin.
    pub fn supporting_cone(&self, v: usize) -> ConeRep {
        ConeRep {
            apex: vec![0.0; self.dim()],
            halfspaces: self
                .vertex_facets(v)
                .iter()
                .map(|&f| Halfspace::new(self.facets()[f].a.clone(), 0.0))
                .collect(),
            kind: ConeKind::Supporting,
        }
    }

    pub fn vertex_figure(&self, v: usize) -> Result<VertexFigure> {
        let u_v = self.vertex_normal(v);
        let chart = Chart {
            origin: u_v.iter().map(|c| -c).collect(),
            basis: hyperplane_basis(&u_v),
        };
        let hs: Vec<Halfspace> = self
            .supporting_cone(v)
            .halfspaces
            .iter()
            .map(|h| chart.pull_halfspace(h))
            .collect();
        let polytope = Polytope::from_halfspaces(self.dim() - 1, &hs)?;
        Ok(VertexFigure {
            vertex: v,
            apex: self.vertices()[v].clone(),
            u_v,
            chart,
            polytope,
        })
    }

    pub fn vertex_figures(&self) -> Result<Vec<VertexFigure>> {
        (0..self.num_vertices()).map(|v| self.vertex_figure(v)).collect()
    }
}

impl VertexFigure {
    /// Central projection of `x - v` onto `H_v` followed by the chart
    /// distance to `P_v`; infinite when the ray misses `H_v`.
    fn projected_distance(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        let s = dot(&y, &self.u_v);
        if s >= 0.0 {
            return f64::INFINITY;
        }
        let proj: Vec<f64> = y.iter().map(|c| c / -s).collect();
        self.polytope.distance(&self.chart.to_local(&proj))
    }

    fn is_apex(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.apex).all(|(a, b)| a == b)
    }

    /// `x - v ∈ S_ρ(P, v)`.
    pub fn in_s_rho(&self, rho: f64, x: &[f64]) -> bool {
        self.is_apex(x) || self.projected_distance(x) <= rho
    }

    /// `x - v ∈ int S_ρ(P, v)`; the apex is not interior.
    pub fn in_s_rho_interior(&self, rho: f64, x: &[f64]) -> bool {
        !self.is_apex(x) && self.projected_distance(x) < rho
    }

    /// `x - v ∈ S(P, v)` up to an absolute tolerance.
    pub fn in_supporting_cone(&self, x: &[f64], tol: f64) -> bool {
        self.is_apex(x) || self.projected_distance(x) <= tol
    }

    /// Direction from `v` through a chart point of `P_v` (unit length).
    pub fn ray_direction(&self, z: &[f64]) -> Vec<f64> {
        let p = self.chart.to_global(z);
        let n = norm(&p);
        p.iter().map(|c| c / n).collect()
    }
}
