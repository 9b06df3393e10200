use serde::{Deserialize, Serialize};

use super::{Polytope, VertexFigure};
use crate::linalg::{dist, dot, sub};

/// Membership tags for the neighbourhood family `U(P, ε, ρ)` of a 3-polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "region", content = "index", rename_all = "snake_case")]
pub enum RegionTag {
    Interior,
    Facet(usize),
    Edge(usize),
    Vertex(usize),
    VertexPrime(usize),
}

fn segment_distance(a: &[f64], b: &[f64], x: &[f64]) -> f64 {
    let d = sub(b, a);
    let t = (dot(&sub(x, a), &d) / dot(&d, &d)).clamp(0.0, 1.0);
    let p: Vec<f64> = a.iter().zip(&d).map(|(ai, di)| ai + t * di).collect();
    dist(&p, x)
}

impl Polytope {
    /// Every region `U_G(P, ε, ρ)` (and `U'_v`) containing `x`. Boundary
    /// ties are resolved inclusively. `figures` must come from
    /// [`Polytope::vertex_figures`].
    ///
    /// The edge regions intersect with the translated cones `v + S_ρ(P, v)`.
    pub fn region_membership(
        &self,
        figures: &[VertexFigure],
        eps: f64,
        rho: f64,
        x: &[f64],
    ) -> Vec<RegionTag> {
        let mut tags = Vec::new();
        if self.max_excess(x) <= 0.0 {
            tags.push(RegionTag::Interior);
        }
        let visible = self.visible_facets(x);
        if visible.len() == 1 {
            tags.push(RegionTag::Facet(visible[0]));
        }
        if self.dim() == 3 && visible.len() >= 2 {
            let mut in_all_cones = None;
            for (e, [i, j]) in self.edges().iter().enumerate() {
                if segment_distance(&self.vertices()[*i], &self.vertices()[*j], x) > eps {
                    continue;
                }
                if !self.edge_facets(e).iter().all(|f| visible.contains(f)) {
                    continue;
                }
                let ok = *in_all_cones
                    .get_or_insert_with(|| figures.iter().all(|vf| vf.in_s_rho(rho, x)));
                if ok {
                    tags.push(RegionTag::Edge(e));
                }
            }
        }
        for vf in figures {
            let v = &vf.apex;
            if dist(v, x) > eps {
                continue;
            }
            if !vf.in_s_rho_interior(rho, x) {
                tags.push(RegionTag::Vertex(vf.vertex));
                let mirrored: Vec<f64> = v.iter().zip(x).map(|(a, b)| 2.0 * a - b).collect();
                if !vf.in_s_rho_interior(rho, &mirrored) {
                    tags.push(RegionTag::VertexPrime(vf.vertex));
                }
            }
        }
        tags
    }
}
