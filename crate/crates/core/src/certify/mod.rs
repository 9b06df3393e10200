//! Seeded sampling certification of representations and of the
//! conditions on the interpolants.

mod domain;
mod report;

pub use domain::{Domain, Region, SampleSpec, UnboundedDomain, UNBOUNDED_BOX};
pub use report::{CertReport, CheckResult, Verdict, Witness};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::build::interp::{check_conditions_aic, Interpolant};
use crate::error::{check_dim, Result};
use crate::expr::EvalForm;
use crate::geometry::{Chart, Polytope, RegionTag, VertexFigure};
use crate::linalg::dot;
use crate::sampling::Rng;
use report::finite;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub interior: usize,
    pub shell: usize,
    pub far: usize,
    /// Samples per facet.
    pub facet: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            interior: 100_000,
            shell: 100_000,
            far: 1_000,
            facet: 1_000,
        }
    }
}

impl Budgets {
    /// A cheap first pass used to discard hopeless parameter choices.
    pub fn screening() -> Self {
        Self {
            interior: 2_000,
            shell: 5_000,
            far: 300,
            facet: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertTolerances {
    /// Containment tolerance on interior and facet samples.
    pub tol: f64,
    /// Shell samples must have some polynomial below `-tol_strict`.
    pub tol_strict: f64,
    /// Guard band around the boundary, relative to the domain scale.
    pub guard: f64,
    /// Shell width, relative to the domain scale.
    pub shell_width: f64,
}

impl Default for CertTolerances {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            tol_strict: 1e-12,
            guard: 1e-6,
            shell_width: 0.5,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Status {
    Ok,
    Fail,
    Guard,
}

#[derive(Clone, Copy)]
enum Worst {
    Min,
    Max,
}

fn run_check<F>(points: &[Vec<f64>], worst: Worst, f: F) -> CheckResult
where
    F: Fn(&[f64]) -> (Status, f64, Vec<f64>) + Sync,
{
    let results: Vec<(Status, f64, Vec<f64>)> = points.par_iter().map(|x| f(x)).collect();
    let mut failures = 0;
    let mut guard_failures = 0;
    let mut worst_value: Option<f64> = None;
    let mut witness = None;
    for (i, (status, score, values)) in results.into_iter().enumerate() {
        if score.is_finite() {
            worst_value = Some(match (worst_value, worst) {
                (None, _) => score,
                (Some(w), Worst::Min) => w.min(score),
                (Some(w), Worst::Max) => w.max(score),
            });
        }
        match status {
            Status::Ok => {}
            Status::Guard => guard_failures += 1,
            Status::Fail => {
                failures += 1;
                if witness.is_none() {
                    witness = Some(Witness {
                        index: i,
                        point: points[i].clone(),
                        values: values.into_iter().map(finite).collect(),
                    });
                }
            }
        }
    }
    CheckResult {
        passed: failures == 0,
        samples: points.len(),
        failures,
        guard_failures,
        worst_value,
        witness,
        note: None,
    }
}

fn eval_all(polys: &[EvalForm], x: &[f64]) -> Vec<f64> {
    polys.iter().map(|p| p.eval_unchecked(x)).collect()
}

fn min_value(vals: &[f64]) -> f64 {
    vals.iter().copied().fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) })
}

/// Checks `domain = {x : p_j(x) >= 0 for all j}` on seeded samples:
/// interior containment, shell rejection outside a guard band, far-field
/// rejection (bounded domains only) and boundary consistency on facets.
pub fn certify_representation(
    domain: &Domain,
    polys: &[EvalForm],
    budgets: &Budgets,
    tols: &CertTolerances,
    seed: u64,
) -> Result<CertReport> {
    for p in polys {
        check_dim(domain.dim(), p.dim())?;
    }
    let scale = domain.scale();
    let guard = tols.guard * scale;
    let mut checks = BTreeMap::new();

    let interior = domain.sample(&SampleSpec {
        region: Region::Interior,
        count: budgets.interior,
        seed,
    })?;
    checks.insert(
        "interior".to_string(),
        run_check(&interior, Worst::Min, |x| {
            let v = eval_all(polys, x);
            let ok = v.iter().all(|&p| p >= -tols.tol);
            (if ok { Status::Ok } else { Status::Fail }, min_value(&v), v)
        }),
    );

    let shell_width = if domain.is_bounded() {
        tols.shell_width * scale
    } else {
        f64::INFINITY
    };
    let shell = domain.sample(&SampleSpec {
        region: Region::BoundaryShell { width: shell_width },
        count: budgets.shell,
        seed,
    })?;
    checks.insert(
        "shell".to_string(),
        run_check(&shell, Worst::Max, |x| {
            let v = eval_all(polys, x);
            let rejected = v.iter().any(|&p| p < -tols.tol_strict);
            let status = if rejected {
                Status::Ok
            } else if domain.distance(x) <= guard {
                Status::Guard
            } else {
                Status::Fail
            };
            (status, min_value(&v), v)
        }),
    );

    if domain.is_bounded() {
        let mut far = Vec::new();
        let radii = [2.0, 10.0, 100.0];
        for (i, r) in radii.iter().enumerate() {
            let count = budgets.far / radii.len() + usize::from(i < budgets.far % radii.len());
            far.extend(domain.sample(&SampleSpec {
                region: Region::FarField { radius: r * scale },
                count,
                seed: seed.wrapping_add(i as u64),
            })?);
        }
        checks.insert(
            "far_field".to_string(),
            run_check(&far, Worst::Max, |x| {
                let v = eval_all(polys, x);
                let rejected = v.iter().any(|&p| p < 0.0);
                (if rejected { Status::Ok } else { Status::Fail }, min_value(&v), v)
            }),
        );
    } else {
        checks.insert(
            "far_field".to_string(),
            CheckResult::skipped("unbounded domain: far field lies in the set's recession directions"),
        );
    }

    let mut facet_pts = Vec::new();
    for f in 0..domain.num_facets() {
        facet_pts.extend(domain.sample(&SampleSpec {
            region: Region::Face { facet: f },
            count: budgets.facet,
            seed,
        })?);
    }
    checks.insert(
        "facets".to_string(),
        run_check(&facet_pts, Worst::Max, |x| {
            let v = eval_all(polys, x);
            let nonneg = v.iter().all(|&p| p >= -tols.tol);
            let closest = v.iter().map(|p| p.abs()).fold(f64::INFINITY, f64::min);
            let ok = nonneg && closest <= tols.tol;
            (if ok { Status::Ok } else { Status::Fail }, closest, v)
        }),
    );

    let budgets_map = BTreeMap::from([
        ("interior".to_string(), budgets.interior),
        ("shell".to_string(), budgets.shell),
        ("far".to_string(), if domain.is_bounded() { budgets.far } else { 0 }),
        ("facet".to_string(), budgets.facet),
    ]);
    let mut tol_map = BTreeMap::from([
        ("tol".to_string(), tols.tol),
        ("tol_strict".to_string(), tols.tol_strict),
        ("guard".to_string(), guard),
        ("scale".to_string(), scale),
    ]);
    if shell_width.is_finite() {
        tol_map.insert("shell_width".to_string(), shell_width);
    }
    Ok(CertReport::assemble(seed, budgets_map, tol_map, checks))
}

/// Conditions A, I, C on `g_l` over `P`, and, when the chart of the
/// hyperplane `{<x, u> = 1}` carrying `P` is supplied together with the
/// homogeneous continuation, condition H.
pub fn certify_aich(
    p: &Polytope,
    g: &Interpolant,
    homogeneous: Option<(&Chart, &EvalForm)>,
    samples: usize,
    seed: u64,
) -> CertReport {
    let aic = check_conditions_aic(p, g, samples, seed);
    let mut checks = BTreeMap::new();
    checks.insert(
        "A_hausdorff".to_string(),
        CheckResult::scalar(aic.hausdorff.is_finite(), aic.hausdorff),
    );
    checks.insert("I_residual".to_string(), CheckResult::scalar(aic.residual <= 1e-8, aic.residual));
    checks.insert(
        "C_hessian".to_string(),
        CheckResult::scalar(aic.concave, aic.max_eigenvalue),
    );
    checks.insert("C_weights".to_string(), CheckResult::scalar(aic.min_y > 0.0, aic.min_y));
    if let Some((chart, gt)) = homogeneous {
        let u = &chart.origin;
        let n = u.len();
        let mut rng = Rng::new(seed, 0x48);
        let radii: Vec<f64> = (0..=6).map(|i| 10f64.powi(i - 3)).collect();
        let mut slice = Vec::new();
        for _ in 0..samples.max(1) / radii.len() + 1 {
            let mut d = vec![0.0; n];
            for b in &chart.basis {
                let c = rng.normal();
                for (di, bi) in d.iter_mut().zip(b) {
                    *di += c * bi;
                }
            }
            let len = crate::linalg::norm(&d);
            for r in &radii {
                slice.push(d.iter().map(|c| c * r / len).collect::<Vec<f64>>());
            }
        }
        checks.insert(
            "H_slice".to_string(),
            run_check(&slice, Worst::Max, |x| {
                let v = gt.eval_unchecked(x);
                let r = crate::linalg::norm(x);
                let ok = v < 0.0 || (v == 0.0 && r < 1.0);
                (if ok { Status::Ok } else { Status::Fail }, v, vec![v])
            }),
        );
        let mut rays = Vec::new();
        while rays.len() < samples.max(1) {
            let d = rng.direction(n);
            if dot(&d, u) > 1e-3 {
                rays.push(d);
            }
        }
        checks.insert(
            "H_cone".to_string(),
            run_check(&rays, Worst::Min, |d| {
                let s = dot(d, u);
                let local = chart.to_local(&d.iter().map(|c| c / s).collect::<Vec<f64>>());
                let base = g.form.eval_unchecked(&local);
                let vals: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
                    .iter()
                    .map(|t| gt.eval_unchecked(&d.iter().map(|c| c * t).collect::<Vec<f64>>()))
                    .collect();
                let agree = vals.iter().all(|&v| {
                    (v >= 0.0) == (base >= 0.0) || v.abs() <= 1e-12 * (1.0 + base.abs()) || base.abs() <= 1e-12
                });
                (if agree { Status::Ok } else { Status::Fail }, base, vals)
            }),
        );
    }
    let tol_map = BTreeMap::from([
        ("residual".to_string(), 1e-8),
        ("eigenvalue".to_string(), -1e-10),
    ]);
    CertReport::assemble(seed, BTreeMap::from([("samples".to_string(), samples)]), tol_map, checks)
}

/// The default grid `{2^-1, ..., 2^-10} * diam`, largest first.
pub fn rho_grid(p: &Polytope) -> Vec<f64> {
    (1..=10).map(|i| p.diameter() * 0.5f64.powi(i)).collect()
}

/// Points of `v - S_ρ(P, v)` at distances in `[1e-6, 2] * diam` from `v`.
fn antipodal_cone_samples(p: &Polytope, fig: &VertexFigure, rho: f64, n: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    let pv = &fig.polytope;
    let verts: Vec<&[f64]> = pv.vertices().iter().map(Vec::as_slice).collect();
    (0..n)
        .map(|_| {
            let base = rng.convex_combination(&verts);
            let z = rng.in_ball(&base, rho);
            let dir = fig.ray_direction(&z);
            let t = p.diameter() * 10f64.powf(rng.uniform(-6.0, 2f64.log10()));
            fig.apex.iter().zip(&dir).map(|(a, b)| a - t * b).collect()
        })
        .collect()
}

/// Does `g < 0` hold on samples of every `v - S_ρ(P, v)`?
pub fn rho_passes(p: &Polytope, figures: &[VertexFigure], g: &EvalForm, rho: f64, n: usize, seed: u64) -> bool {
    let mut rng = Rng::new(seed, 0x52);
    figures.iter().all(|fig| {
        let pts = antipodal_cone_samples(p, fig, rho, n, &mut rng);
        pts.par_iter().all(|x| g.eval_unchecked(x) < 0.0)
    })
}

/// Largest grid value of `ρ` for which `g < 0` on the sampled cones
/// `v - S_ρ(P, v)`. The cones grow with `ρ`, so every smaller grid value
/// passes as well.
pub fn find_rho(
    p: &Polytope,
    figures: &[VertexFigure],
    g: &EvalForm,
    grid: &[f64],
    n: usize,
    seed: u64,
) -> Option<f64> {
    let mut sorted = grid.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.into_iter().find(|&rho| rho_passes(p, figures, g, rho, n, seed))
}

/// Samples `P` and neighbourhoods `P + B(o, δ)` and checks that every
/// point lies in some region of the family `U(P, ε, ρ)`.
pub fn check_u_cover(
    p: &Polytope,
    eps: f64,
    rho: f64,
    n: usize,
    deltas: &[f64],
    seed: u64,
) -> Result<CertReport> {
    let figures = p.vertex_figures()?;
    let domain = Domain::Bounded(p.clone());
    let tagged = |x: &[f64]| -> (Status, f64, Vec<f64>) {
        let tags: Vec<RegionTag> = p.region_membership(&figures, eps, rho, x);
        let status = if tags.is_empty() { Status::Fail } else { Status::Ok };
        (status, tags.len() as f64, vec![p.distance(x)])
    };
    let mut checks = BTreeMap::new();
    let interior = domain.sample(&SampleSpec {
        region: Region::Interior,
        count: n,
        seed,
    })?;
    checks.insert("P".to_string(), run_check(&interior, Worst::Min, tagged));
    for (i, &delta) in deltas.iter().enumerate() {
        let width = delta * p.diameter();
        let s = seed.wrapping_add(i as u64 + 1);
        let inflated = domain.sample(&SampleSpec {
            region: Region::Inflated { width },
            count: n,
            seed: s,
        })?;
        checks.insert(format!("inflated_{delta:e}"), run_check(&inflated, Worst::Min, tagged));
        let shell = domain.sample(&SampleSpec {
            region: Region::FacetOffset { width },
            count: n,
            seed: s,
        })?;
        checks.insert(format!("shell_{delta:e}"), run_check(&shell, Worst::Min, tagged));
    }
    let tol_map = BTreeMap::from([("eps".to_string(), eps), ("rho".to_string(), rho)]);
    Ok(CertReport::assemble(seed, BTreeMap::from([("samples".to_string(), n)]), tol_map, checks))
}
