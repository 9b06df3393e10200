//! Polyhedra in dimension at most three: H/V conversion, face incidence,
//! facet functionals, supporting and approximation cones, neighbourhood
//! regions and the lineality/homogenization machinery for unbounded input.

mod cone;
mod decompose;
mod polytope;
mod regions;

pub use cone::{ConeKind, ConeRep, VertexFigure};
pub use decompose::{cross_section, homogenization_cone, CrossSection, LinealityDecomposition};
pub use polytope::{Polytope, Tolerances};
pub use regions::RegionTag;

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, norm};

/// `{x : <a, x> <= b}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub a: Vec<f64>,
    pub b: f64,
}

impl Halfspace {
    pub fn new(a: Vec<f64>, b: f64) -> Self {
        Self { a, b }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `<a, x> - b`; positive means violated.
    pub fn excess(&self, x: &[f64]) -> f64 {
        dot(&self.a, x) - self.b
    }

    /// Rescaled to a unit normal, or `None` for a zero normal.
    pub fn normalized(&self) -> Option<Self> {
        let n = norm(&self.a);
        (n > 0.0 && n.is_finite()).then(|| Self {
            a: self.a.iter().map(|v| v / n).collect(),
            b: self.b / n,
        })
    }
}

/// An affine coordinate system `x = origin + sum_i z_i basis[i]` with an
/// orthonormal basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub origin: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl Chart {
    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_local(&self, x: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .map(|b| {
                b.iter()
                    .zip(x.iter().zip(&self.origin))
                    .map(|(bi, (xi, oi))| bi * (xi - oi))
                    .sum()
            })
            .collect()
    }

    pub fn to_global(&self, z: &[f64]) -> Vec<f64> {
        let mut x = self.origin.clone();
        for (zi, b) in z.iter().zip(&self.basis) {
            for (xj, bj) in x.iter_mut().zip(b) {
                *xj += zi * bj;
            }
        }
        x
    }

    /// Restriction of an ambient halfspace to chart coordinates.
    pub fn pull_halfspace(&self, h: &Halfspace) -> Halfspace {
        Halfspace {
            a: self.basis.iter().map(|b| dot(b, &h.a)).collect(),
            b: h.b - dot(&h.a, &self.origin),
        }
    }

    /// Rows and offset of the map `z -> x`, in the layout used by
    /// `substitute_affine` (one row per ambient coordinate).
    pub fn to_global_affine(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let rows = (0..self.ambient_dim())
            .map(|i| self.basis.iter().map(|b| b[i]).collect())
            .collect();
        (rows, self.origin.clone())
    }

    /// Rows and offset of the map `x -> z`.
    pub fn to_local_affine(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let rows = self.basis.clone();
        let offset = self.basis.iter().map(|b| -dot(b, &self.origin)).collect();
        (rows, offset)
    }
}
