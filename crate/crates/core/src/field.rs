//! Scalar fields sampled on regular grids, written as legacy VTK or CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::EvalForm;

/// Which function of the representation to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Poly(usize),
    /// `min_j p_j`, nonnegative exactly on the represented set.
    Min,
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "min" {
            return Ok(Selection::Min);
        }
        s.parse()
            .map(Selection::Poly)
            .map_err(|_| Error::InvalidArgument(format!("poly: expected an index or 'min', got '{s}'")))
    }
}

/// Values on the nodes `origin + i * spacing`, x index fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub counts: Vec<usize>,
    pub values: Vec<f64>,
}

impl FieldGrid {
    /// Samples `sel` on `res` nodes per axis spanning the box `[lo, hi]`.
    pub fn sample(polys: &[EvalForm], sel: Selection, lo: &[f64], hi: &[f64], res: usize) -> Result<Self> {
        let dim = lo.len();
        if res < 2 {
            return Err(Error::InvalidArgument("res: need at least 2 nodes per axis".into()));
        }
        if polys.is_empty() {
            return Err(Error::InvalidArgument("no polynomials to sample".into()));
        }
        if let Some(p) = polys.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if let Selection::Poly(j) = sel {
            if j >= polys.len() {
                return Err(Error::InvalidArgument(format!(
                    "poly: index {j} but the representation has {} polynomials",
                    polys.len()
                )));
            }
        }
        let spacing: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a) / (res - 1) as f64).collect();
        let counts = vec![res; dim];
        let total = res.pow(dim as u32);
        let values = (0..total)
            .into_par_iter()
            .map(|idx| {
                let x = node(lo, &spacing, &counts, idx);
                match sel {
                    Selection::Poly(j) => polys[j].eval_unchecked(&x),
                    Selection::Min => polys
                        .iter()
                        .map(|p| p.eval_unchecked(&x))
                        .fold(f64::INFINITY, f64::min),
                }
            })
            .collect();
        Ok(Self {
            origin: lo.to_vec(),
            spacing,
            counts,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        node(&self.origin, &self.spacing, &self.counts, idx)
    }

    /// Legacy ASCII VTK, `STRUCTURED_POINTS`; lower-dimensional grids are
    /// padded with a single layer.
    pub fn to_vtk(&self, title: &str) -> String {
        let pad = |v: &[f64], fill: f64| -> Vec<f64> {
            let mut out = v.to_vec();
            out.resize(3, fill);
            out
        };
        let mut counts: Vec<usize> = self.counts.clone();
        counts.resize(3, 1);
        let origin = pad(&self.origin, 0.0);
        let spacing = pad(&self.spacing, 1.0);
        let mut s = String::new();
        s.push_str("# vtk DataFile Version 3.0\n");
        s.push_str(title.lines().next().unwrap_or(""));
        s.push('\n');
        s.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
        let _ = writeln!(s, "DIMENSIONS {} {} {}", counts[0], counts[1], counts[2]);
        let _ = writeln!(s, "ORIGIN {} {} {}", origin[0], origin[1], origin[2]);
        let _ = writeln!(s, "SPACING {} {} {}", spacing[0], spacing[1], spacing[2]);
        let _ = writeln!(s, "POINT_DATA {}", self.values.len());
        s.push_str("SCALARS field double 1\nLOOKUP_TABLE default\n");
        for v in &self.values {
            let _ = writeln!(s, "{v}");
        }
        s
    }

    /// One row per node: coordinates then value.
    pub fn to_csv(&self) -> String {
        let names = ["x", "y", "z"];
        let mut s = names[..self.dim()].join(",");
        s.push_str(",value\n");
        for (i, v) in self.values.iter().enumerate() {
            for c in self.point(i) {
                let _ = write!(s, "{c},");
            }
            let _ = writeln!(s, "{v}");
        }
        s
    }
}

fn node(origin: &[f64], spacing: &[f64], counts: &[usize], mut idx: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(counts.len());
    for ((o, h), n) in origin.iter().zip(spacing).zip(counts) {
        x.push(o + (idx % n) as f64 * h);
        idx /= n;
    }
    x
}
