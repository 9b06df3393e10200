use serde::{Deserialize, Serialize};

use super::Halfspace;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, dist, dot, norm, null_space, rank, solve, sub};
use crate::poly::Polynomial;

/// Geometric tolerances, relative to the scale noted on each field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Vertex feasibility, relative to `1 + max |b|`.
    pub feasibility: f64,
    /// Vertex merge distance, relative to the diameter.
    pub merge: f64,
    /// Incidence of a vertex with a facet hyperplane, relative to the diameter.
    pub on_hyperplane: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feasibility: 1e-9,
            merge: 1e-8,
            on_hyperplane: 1e-9,
        }
    }
}

/// A bounded, full-dimensional polytope in dimension 1, 2 or 3 with its
/// vertex/edge/facet incidence.
///
/// Facet halfspaces are stored with unit normals, so `b` is the support
/// value in the normal direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    dim: usize,
    facets: Vec<Halfspace>,
    vertices: Vec<Vec<f64>>,
    edges: Vec<[usize; 2]>,
    facet_vertices: Vec<Vec<usize>>,
    vertex_facets: Vec<Vec<usize>>,
    diameter: f64,
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Extreme rays of the pointed cone `{d : <a_i, d> <= 0}` (normals assumed
/// to span), found by intersecting `dim - 1` hyperplanes at a time.
pub(crate) fn cone_rays(normals: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut rays: Vec<Vec<f64>> = Vec::new();
    for subset in combinations(normals.len(), dim - 1) {
        let rows: Vec<Vec<f64>> = subset.iter().map(|&i| normals[i].clone()).collect();
        let ns = null_space(&rows, dim, 1e-10);
        if ns.len() != 1 {
            continue;
        }
        for sign in [1.0, -1.0] {
            let r: Vec<f64> = ns[0].iter().map(|v| sign * v).collect();
            if normals.iter().all(|a| dot(a, &r) <= tol)
                && !rays.iter().any(|q| dist(q, &r) <= 1e-8)
            {
                rays.push(r);
            }
        }
    }
    rays
}

/// Feasible intersection points of `dim`-subsets of the hyperplanes,
/// merged at the given distance.
pub(crate) fn enumerate_vertices(hs: &[Halfspace], dim: usize, feas: f64, merge: f64) -> Vec<Vec<f64>> {
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for subset in combinations(hs.len(), dim) {
        let rows: Vec<Vec<f64>> = subset.iter().map(|&i| hs[i].a.clone()).collect();
        if rank(&rows, dim, 1e-10) < dim {
            continue;
        }
        let rhs: Vec<f64> = subset.iter().map(|&i| hs[i].b).collect();
        let Some(x) = solve(&rows, &rhs) else { continue };
        if x.iter().any(|v| !v.is_finite()) {
            continue;
        }
        if hs.iter().all(|h| h.excess(&x) <= feas) && !verts.iter().any(|v| dist(v, &x) <= merge) {
            verts.push(x);
        }
    }
    verts
}

fn affine_rank(points: &[&[f64]], dim: usize) -> usize {
    let Some(first) = points.first() else { return 0 };
    let rows: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, first)).collect();
    if rows.is_empty() {
        return 0;
    }
    rank(&rows, dim, 1e-9)
}

impl Polytope {
    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        Self::with_tolerances(dim, halfspaces, Tolerances::default())
    }

    pub fn with_tolerances(dim: usize, halfspaces: &[Halfspace], tol: Tolerances) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidArgument(format!("dimension {dim} not in 1..=3")));
        }
        let mut hs = Vec::with_capacity(halfspaces.len());
        for (i, h) in halfspaces.iter().enumerate() {
            check_dim(dim, h.dim())?;
            if h.a.iter().chain(std::iter::once(&h.b)).any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("halfspace {i} has a non-finite entry")));
            }
            hs.push(
                h.normalized()
                    .ok_or_else(|| Error::InvalidArgument(format!("halfspace {i} has a zero normal")))?,
            );
        }
        let normals: Vec<Vec<f64>> = hs.iter().map(|h| h.a.clone()).collect();
        if rank(&normals, dim, 1e-10) < dim {
            return Err(Error::Unbounded);
        }
        let bmax = hs.iter().map(|h| h.b.abs()).fold(0.0, f64::max);
        let feas = tol.feasibility * (1.0 + bmax);
        let verts = enumerate_vertices(&hs, dim, feas, tol.merge * (1.0 + bmax));
        if verts.is_empty() {
            return Err(Error::Degenerate("empty intersection".into()));
        }
        if !cone_rays(&normals, dim, 1e-12).is_empty() {
            return Err(Error::Unbounded);
        }
        let refs: Vec<&[f64]> = verts.iter().map(Vec::as_slice).collect();
        if affine_rank(&refs, dim) < dim {
            return Err(Error::Degenerate("intersection is not full-dimensional".into()));
        }
        let mut vertices = verts;
        vertices.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut diameter: f64 = 0.0;
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                diameter = diameter.max(dist(&vertices[i], &vertices[j]));
            }
        }
        let on = tol.on_hyperplane * diameter;

        let mut facets = Vec::new();
        let mut facet_vertices: Vec<Vec<usize>> = Vec::new();
        for h in &hs {
            let active: Vec<usize> = (0..vertices.len())
                .filter(|&i| h.excess(&vertices[i]).abs() <= on)
                .collect();
            let pts: Vec<&[f64]> = active.iter().map(|&i| vertices[i].as_slice()).collect();
            if active.len() < dim || affine_rank(&pts, dim) < dim - 1 {
                continue;
            }
            if facet_vertices.contains(&active) {
                continue;
            }
            facets.push(h.clone());
            facet_vertices.push(active);
        }
        let mut vertex_facets = vec![Vec::new(); vertices.len()];
        for (f, vs) in facet_vertices.iter().enumerate() {
            for &v in vs {
                vertex_facets[v].push(f);
            }
        }
        let mut edges = Vec::new();
        match dim {
            2 => {
                for vs in &facet_vertices {
                    edges.push([vs[0], vs[1]]);
                }
            }
            3 => {
                for i in 0..vertices.len() {
                    for j in i + 1..vertices.len() {
                        let shared = vertex_facets[i]
                            .iter()
                            .filter(|f| vertex_facets[j].contains(f))
                            .count();
                        if shared >= 2 {
                            edges.push([i, j]);
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(Self {
            dim,
            facets,
            vertices,
            edges,
            facet_vertices,
            vertex_facets,
            diameter,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Irredundant facet halfspaces with unit normals.
    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex index pairs of the edges (for polygons these are the facets).
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn facet_vertices(&self, f: usize) -> &[usize] {
        &self.facet_vertices[f]
    }

    pub fn vertex_facets(&self, v: usize) -> &[usize] {
        &self.vertex_facets[v]
    }

    /// Facets containing both endpoints of an edge.
    pub fn edge_facets(&self, e: usize) -> Vec<usize> {
        let [i, j] = self.edges[e];
        self.vertex_facets[i]
            .iter()
            .copied()
            .filter(|f| self.vertex_facets[j].contains(f))
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn centroid(&self) -> Vec<f64> {
        linalg::centroid(&self.vertices)
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for i in 0..self.dim {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    /// Facet functional `q_F(x) = (h(P, u_F) - <u_F, x>) / diam(P)`.
    pub fn q_f(&self, f: usize) -> Polynomial {
        let h = &self.facets[f];
        let lin: Vec<f64> = h.a.iter().map(|a| -a / self.diameter).collect();
        Polynomial::affine(&lin, h.b / self.diameter)
    }

    pub fn q_f_value(&self, f: usize, x: &[f64]) -> f64 {
        let h = &self.facets[f];
        (h.b - dot(&h.a, x)) / self.diameter
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Vertices attaining the support value, within `1e-9 * |u| * diam`.
    pub fn exposed_face(&self, u: &[f64]) -> Vec<usize> {
        let h = self.support(u);
        let tol = 1e-9 * norm(u) * self.diameter;
        (0..self.vertices.len())
            .filter(|&i| dot(&self.vertices[i], u) >= h - tol)
            .collect()
    }

    /// Facets containing every vertex of `face`.
    pub fn facets_containing(&self, face: &[usize]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| face.iter().all(|v| self.facet_vertices[f].contains(v)))
            .collect()
    }

    /// Normalized sum of the unit normals of the facets containing `face`.
    pub fn face_normal(&self, face: &[usize]) -> Result<Vec<f64>> {
        if face.is_empty() || face.len() == self.vertices.len() {
            return Err(Error::InvalidArgument("face must be proper and nonempty".into()));
        }
        let fs = self.facets_containing(face);
        let mut s = vec![0.0; self.dim];
        for f in fs {
            for (si, ai) in s.iter_mut().zip(&self.facets[f].a) {
                *si += ai;
            }
        }
        linalg::normalized(&s)
            .filter(|u| norm(u) > 0.5)
            .ok_or_else(|| Error::Degenerate("face normals sum to zero".into()))
    }

    pub fn vertex_normal(&self, v: usize) -> Vec<f64> {
        self.face_normal(&[v]).expect("vertex of a full-dimensional polytope")
    }

    /// Facets with `q_F(x) <= 1e-12` (visible from `x`).
    pub fn visible_facets(&self, x: &[f64]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| self.q_f_value(f, x) <= 1e-12)
            .collect()
    }

    /// Largest facet excess `<a, x> - b` (unit normals); `<= 0` inside.
    pub fn max_excess(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|h| h.excess(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.max_excess(x) <= tol
    }

    /// Euclidean distance from `x` to the polytope (zero inside).
    ///
    /// The nearest point lies in the relative interior of some face, where it
    /// is the orthogonal projection onto that face's affine hull; taking the
    /// minimum over the feasible projections is therefore exact.
    pub fn distance(&self, x: &[f64]) -> f64 {
        if self.max_excess(x) <= 0.0 {
            return 0.0;
        }
        let mut best = self
            .vertices
            .iter()
            .map(|v| dist(v, x))
            .fold(f64::INFINITY, f64::min);
        let seg = |a: &[f64], b: &[f64]| {
            let d = sub(b, a);
            let t = (dot(&sub(x, a), &d) / dot(&d, &d)).clamp(0.0, 1.0);
            let p: Vec<f64> = a.iter().zip(&d).map(|(ai, di)| ai + t * di).collect();
            dist(&p, x)
        };
        for e in &self.edges {
            best = best.min(seg(&self.vertices[e[0]], &self.vertices[e[1]]));
        }
        if self.dim == 3 {
            let slack = 1e-12 * self.diameter;
            for (f, h) in self.facets.iter().enumerate() {
                let e = h.excess(x);
                if e <= 0.0 {
                    continue;
                }
                let p: Vec<f64> = x.iter().zip(&h.a).map(|(xi, ai)| xi - e * ai).collect();
                if self
                    .facets
                    .iter()
                    .enumerate()
                    .all(|(g, hg)| g == f || hg.excess(&p) <= slack)
                {
                    best = best.min(e);
                }
            }
        }
        best
    }

    /// Distance from `x` to the boundary of the polytope.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        let m = self.max_excess(x);
        if m <= 0.0 {
            -m
        } else {
            self.distance(x)
        }
    }
}
