use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, LinealityDecomposition, Polytope};
use crate::linalg::{dot, norm};
use crate::sampling::Rng;

/// Half-width of the sampling box used for unbounded polyhedra.
pub const UNBOUNDED_BOX: f64 = 10.0;

/// The set a representation is certified against.
#[derive(Clone, Debug)]
pub enum Domain {
    Bounded(Polytope),
    Unbounded(UnboundedDomain),
}

#[derive(Clone, Debug)]
pub struct UnboundedDomain {
    pub decomposition: LinealityDecomposition,
    /// `Q` truncated far enough out that distances from points of the
    /// sampling box are exact.
    pub truncated: Polytope,
}

/// Which points to draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Interior,
    /// `(P + B(o, width)) \ P`, by rejection from the inflated box.
    BoundaryShell { width: f64 },
    /// `(P + B(o, width)) \ P`, by offsetting facet points.
    FacetOffset { width: f64 },
    /// `P + B(o, width)`, by rejection.
    Inflated { width: f64 },
    /// The sphere of the given radius about the centroid.
    FarField { radius: f64 },
    /// Points of the given facet.
    Face { facet: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub region: Region,
    pub count: usize,
    pub seed: u64,
}

const MIN_ACCEPTANCE: f64 = 1e-4;

impl Domain {
    pub fn from_halfspaces(dim: usize, hs: &[Halfspace]) -> Result<Self> {
        match Polytope::from_halfspaces(dim, hs) {
            Ok(p) => Ok(Domain::Bounded(p)),
            Err(Error::Unbounded) => {
                let decomposition = LinealityDecomposition::new(dim, hs)?;
                let qmax = decomposition
                    .vertices
                    .iter()
                    .map(|v| norm(v))
                    .fold(0.0, f64::max);
                let reach = UNBOUNDED_BOX * (dim as f64).sqrt();
                let truncated = decomposition.truncated(3.0 * (reach + qmax) + 1.0)?;
                Ok(Domain::Unbounded(UnboundedDomain {
                    decomposition,
                    truncated,
                }))
            }
            Err(e) => Err(e),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Bounded(p) => p.dim(),
            Domain::Unbounded(u) => u.decomposition.dim,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Domain::Bounded(_))
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match self {
            Domain::Bounded(p) => Some(p),
            Domain::Unbounded(_) => None,
        }
    }

    /// Length scale for relative tolerances: the diameter, or the edge of
    /// the sampling box.
    pub fn scale(&self) -> f64 {
        match self {
            Domain::Bounded(p) => p.diameter(),
            Domain::Unbounded(_) => 2.0 * UNBOUNDED_BOX,
        }
    }

    pub fn max_excess(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Bounded(p) => p.max_excess(x),
            Domain::Unbounded(u) => u.decomposition.max_excess(x),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.max_excess(x) <= 0.0
    }

    /// Euclidean distance to the set (zero inside).
    pub fn distance(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Bounded(p) => p.distance(x),
            Domain::Unbounded(u) => {
                if u.decomposition.max_excess(x) <= 0.0 {
                    0.0
                } else {
                    u.truncated.distance(&u.decomposition.to_chart(x))
                }
            }
        }
    }

    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        let m = self.max_excess(x);
        if m <= 0.0 {
            -m
        } else {
            self.distance(x)
        }
    }

    pub fn sample_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Domain::Bounded(p) => p.bounding_box(),
            Domain::Unbounded(u) => (
                vec![-UNBOUNDED_BOX; u.decomposition.dim],
                vec![UNBOUNDED_BOX; u.decomposition.dim],
            ),
        }
    }

    pub fn centre(&self) -> Vec<f64> {
        match self {
            Domain::Bounded(p) => p.centroid(),
            Domain::Unbounded(u) => vec![0.0; u.decomposition.dim],
        }
    }

    pub fn num_facets(&self) -> usize {
        match self {
            Domain::Bounded(p) => p.num_facets(),
            Domain::Unbounded(u) => self.unbounded_facets(u).len(),
        }
    }

    /// Facets of the truncated chart polytope that come from the input.
    fn unbounded_facets(&self, u: &UnboundedDomain) -> Vec<usize> {
        (0..u.truncated.num_facets())
            .filter(|&f| {
                let h = &u.truncated.facets()[f];
                u.decomposition.chart_halfspaces.iter().any(|g| {
                    let n = norm(&g.a);
                    n > 0.0
                        && (dot(&g.a, &h.a) / n - 1.0).abs() < 1e-9
                        && (g.b / n - h.b).abs() < 1e-9 * (1.0 + h.b.abs())
                })
            })
            .collect()
    }

    fn in_sample_box(&self, x: &[f64]) -> bool {
        match self {
            Domain::Bounded(_) => true,
            Domain::Unbounded(_) => x.iter().all(|c| c.abs() <= UNBOUNDED_BOX),
        }
    }

    fn face_point(&self, facet: usize, rng: &mut Rng) -> Option<Vec<f64>> {
        match self {
            Domain::Bounded(p) => {
                let pts: Vec<&[f64]> = p
                    .facet_vertices(facet)
                    .iter()
                    .map(|&v| p.vertices()[v].as_slice())
                    .collect();
                Some(rng.convex_combination(&pts))
            }
            Domain::Unbounded(u) => {
                let f = *self.unbounded_facets(u).get(facet)?;
                let t = &u.truncated;
                let pts: Vec<&[f64]> = t
                    .facet_vertices(f)
                    .iter()
                    .map(|&v| t.vertices()[v].as_slice())
                    .collect();
                let z = rng.convex_combination(&pts);
                let mut x = u.decomposition.from_chart(&z);
                for l in &u.decomposition.lineality_basis {
                    let s = rng.uniform(-UNBOUNDED_BOX, UNBOUNDED_BOX) * (x.len() as f64).sqrt();
                    for (xi, li) in x.iter_mut().zip(l) {
                        *xi += s * li;
                    }
                }
                Some(x)
            }
        }
    }

    /// Deterministic samples for the given specification.
    pub fn sample(&self, spec: &SampleSpec) -> Result<Vec<Vec<f64>>> {
        let stream = match spec.region {
            Region::Interior => 1,
            Region::BoundaryShell { .. } => 2,
            Region::FacetOffset { .. } => 3,
            Region::Inflated { .. } => 4,
            Region::FarField { .. } => 5,
            Region::Face { facet } => 16 + facet as u64,
        };
        let mut rng = Rng::new(spec.seed, stream);
        let (lo, hi) = self.sample_box();
        let inflate = |w: f64| -> (Vec<f64>, Vec<f64>) {
            if self.is_bounded() {
                (lo.iter().map(|a| a - w).collect(), hi.iter().map(|b| b + w).collect())
            } else {
                (lo.clone(), hi.clone())
            }
        };
        let mut out = Vec::with_capacity(spec.count);
        let mut attempts: usize = 0;
        let mut push_or_check = |accepted: Option<Vec<f64>>, out: &mut Vec<Vec<f64>>| -> Result<()> {
            attempts += 1;
            if let Some(x) = accepted {
                out.push(x);
            }
            if attempts >= 10_000 && (out.len() as f64) < MIN_ACCEPTANCE * attempts as f64 {
                return Err(Error::SamplingDegenerate {
                    rate: out.len() as f64 / attempts as f64,
                });
            }
            Ok(())
        };
        match &spec.region {
            Region::Interior => {
                while out.len() < spec.count {
                    let x = rng.in_box(&lo, &hi);
                    let ok = self.contains(&x).then_some(x);
                    push_or_check(ok, &mut out)?;
                }
            }
            Region::BoundaryShell { width } | Region::Inflated { width } => {
                let keep_inside = matches!(spec.region, Region::Inflated { .. });
                let (blo, bhi) = inflate(*width);
                while out.len() < spec.count {
                    let x = rng.in_box(&blo, &bhi);
                    let ok = if self.contains(&x) {
                        keep_inside
                    } else {
                        self.distance(&x) <= *width
                    };
                    push_or_check(ok.then_some(x), &mut out)?;
                }
            }
            Region::FacetOffset { width } => {
                let nf = self.num_facets();
                if nf == 0 {
                    return Err(Error::Degenerate("no facets to sample".into()));
                }
                while out.len() < spec.count {
                    let f = ((rng.unit() * nf as f64) as usize).min(nf - 1);
                    let ok = self.face_point(f, &mut rng).and_then(|y| {
                        let x = rng.in_ball(&y, *width);
                        (!self.contains(&x) && self.in_sample_box(&x) && self.distance(&x) <= *width)
                            .then_some(x)
                    });
                    push_or_check(ok, &mut out)?;
                }
            }
            Region::FarField { radius } => {
                let c = self.centre();
                for _ in 0..spec.count {
                    let d = rng.direction(c.len());
                    out.push(c.iter().zip(&d).map(|(a, b)| a + radius * b).collect());
                }
            }
            Region::Face { facet } => {
                if *facet >= self.num_facets() {
                    return Err(Error::InvalidArgument(format!("facet {facet} out of range")));
                }
                while out.len() < spec.count {
                    let ok = self.face_point(*facet, &mut rng).filter(|x| self.in_sample_box(x));
                    push_or_check(ok, &mut out)?;
                }
            }
        }
        Ok(out)
    }
}
