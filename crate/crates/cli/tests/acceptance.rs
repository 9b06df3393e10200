//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use polyrep::build::{build_bvl, build_gl_escalating, concavity_sweep, hausdorff_estimate};
use polyrep::certify::{check_u_cover, find_rho, rho_grid};
use polyrep::geometry::VertexFigure;
use polyrep::sampling::Rng;
use polyrep::{CertReport, EvalForm, Polytope, PolytopeFile, Representation, Verdict};

const SEED: u64 = 42;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(format!("{name}.json"))
}

fn polyrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyrep")).args(args).output().unwrap()
}

fn polytope(name: &str) -> Polytope {
    PolytopeFile::read(&data(name)).unwrap().polytope().unwrap()
}

struct Run {
    name: &'static str,
    dir: PathBuf,
    exit: Option<i32>,
    elapsed: Duration,
    rep: Option<Representation>,
    report: Option<CertReport>,
    attempts: usize,
}

fn run_build(name: &'static str, root: &Path, tag: &str) -> Run {
    let dir = root.join(format!("{name}-{tag}"));
    let input = data(name);
    let seed = SEED.to_string();
    let start = Instant::now();
    let out = polyrep(&["build", input.to_str().unwrap(), "--seed", &seed, "--out", dir.to_str().unwrap()]);
    let elapsed = start.elapsed();
    let read = |f: &str| fs::read_to_string(dir.join(f)).ok();
    let attempts = read("attempts.json")
        .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok())
        .and_then(|v| v.as_array().map(|a| a.iter().filter(|x| x["stage"] != "full").count()))
        .unwrap_or(0);
    Run {
        name,
        exit: out.status.code(),
        elapsed,
        rep: read("representation.json").and_then(|t| serde_json::from_str(&t).ok()),
        report: read("report.json").and_then(|t| serde_json::from_str(&t).ok()),
        attempts,
        dir,
    }
}

/// Certification at the default budgets and tolerances.
fn certified(run: &Run) -> Result<(), String> {
    if run.exit != Some(0) {
        return Err(format!("exit {:?}", run.exit));
    }
    let report = run.report.as_ref().ok_or("no report")?;
    let scale = report.tolerances["scale"];
    let checks = [
        report.verdict == Verdict::Pass,
        report.total_failures() == 0,
        report.checks["interior"].samples == 100_000,
        report.budgets["shell"] == 100_000,
        report.tolerances["tol"] == 1e-9,
        report.tolerances["tol_strict"] == 1e-12,
        (report.tolerances["guard"] - 1e-6 * scale).abs() <= 1e-15 * scale,
    ];
    if checks.iter().all(|&c| c) {
        Ok(())
    } else {
        Err(format!("report {} does not meet the budgets: {checks:?}", report.id))
    }
}

struct Line {
    passed: bool,
    detail: String,
}

fn line(results: Vec<Result<String, String>>) -> Line {
    let passed = results.iter().all(Result::is_ok);
    let detail = results
        .into_iter()
        .map(|r| r.unwrap_or_else(|e| format!("FAILED {e}")))
        .collect::<Vec<_>>()
        .join("; ");
    Line { passed, detail }
}

fn criterion_builds(runs: &[&Run], limit: Duration, max_attempts: Option<usize>) -> Line {
    line(
        runs.iter()
            .map(|r| {
                certified(r).map_err(|e| format!("{}: {e}", r.name))?;
                if r.elapsed > limit {
                    return Err(format!("{}: {:.1?} over {limit:?}", r.name, r.elapsed));
                }
                if let Some(m) = max_attempts {
                    if r.attempts > m {
                        return Err(format!("{}: {} parameter choices", r.name, r.attempts));
                    }
                }
                let p = r.rep.as_ref().unwrap().params;
                Ok(format!(
                    "{} (l={} m={} k={}, {} tried, {:.2?})",
                    r.name, p.l, p.m, p.k, r.attempts, r.elapsed
                ))
            })
            .collect(),
    )
}

fn criterion_residual(runs: &[&Run]) -> Line {
    line(
        runs.iter()
            .map(|r| {
                let p0 = &r.rep.as_ref().ok_or(r.name)?.polys[0];
                let worst = polytope(r.name)
                    .vertices()
                    .iter()
                    .map(|v| p0.eval(v).unwrap().abs())
                    .fold(0.0, f64::max);
                if worst <= 1e-8 {
                    Ok(format!("{} {worst:.1e}", r.name))
                } else {
                    Err(format!("{} residual {worst:e}", r.name))
                }
            })
            .collect(),
    )
}

fn criterion_concavity(runs: &[&Run]) -> Line {
    line(
        runs.iter()
            .map(|r| {
                let p0 = &r.rep.as_ref().ok_or(r.name)?.polys[0];
                let e = concavity_sweep(&polytope(r.name), p0, 1000, SEED);
                if e < -1e-10 {
                    Ok(format!("{} {e:.2e}", r.name))
                } else {
                    Err(format!("{} max eigenvalue {e:e}", r.name))
                }
            })
            .collect(),
    )
}

fn criterion_hausdorff() -> Line {
    let p = polytope("octahedron");
    let estimates: Vec<f64> = [1, 6, 11, 16]
        .iter()
        .map(|&l| hausdorff_estimate(&p, &build_gl_escalating(&p, l, 1, 4).unwrap().form, 1000))
        .collect();
    let ok = estimates.windows(2).all(|w| w[1] < w[0] && (w[0] - w[1]) >= 0.01 * w[0]);
    let text = format!("octahedron l=1,6,11,16: {estimates:.4?}");
    line(vec![if ok { Ok(text) } else { Err(text) }])
}

fn mirror(fig: &VertexFigure, x: &[f64]) -> Vec<f64> {
    fig.apex.iter().zip(x).map(|(a, c)| 2.0 * a - c).collect()
}

fn criterion_vertex_polynomials(runs: &[&Run]) -> Line {
    line(
        runs.iter()
            .map(|r| {
                let rep = r.rep.as_ref().ok_or(r.name)?;
                let p = polytope(r.name);
                let figs = p.vertex_figures().map_err(|e| e.to_string())?;
                let rho = find_rho(&p, &figs, &rep.polys[0], &rho_grid(&p), 1000, SEED)
                    .ok_or(format!("{}: no rho", r.name))?;
                let mut rng = Rng::new(SEED, 6);
                let mut worst_sym: f64 = 0.0;
                for fig in &figs {
                    let b = build_bvl(&p, fig, rep.params.l, rep.params.l0).map_err(|e| e.to_string())?;
                    if !(b.centered.is_homogeneous() && b.form.is_even_degree()) {
                        return Err(format!("{}: vertex {} not even and homogeneous", r.name, fig.vertex));
                    }
                    let verts: Vec<&[f64]> = fig.polytope.vertices().iter().map(Vec::as_slice).collect();
                    for i in 0..1000 {
                        let d = fig.chart.to_global(&rng.convex_combination(&verts));
                        let t = p.diameter() * 10f64.powf(rng.uniform(-3.0, 0.5)) * if i % 2 == 0 { 1.0 } else { -1.0 };
                        let x: Vec<f64> = fig.apex.iter().zip(&d).map(|(a, c)| a + t * c).collect();
                        let v = b.form.eval(&x).unwrap();
                        if v < 0.0 {
                            return Err(format!("{}: b = {v:e} < 0 on the cone at {x:?}", r.name));
                        }
                    }
                    let mut outside = 0;
                    while outside < 1000 {
                        let x = rng.in_ball(&fig.apex, p.diameter());
                        let m = mirror(fig, &x);
                        let (b1, b2) = (b.form.eval(&x).unwrap(), b.form.eval(&m).unwrap());
                        let big = b1.abs().max(b2.abs());
                        if big > 0.0 {
                            worst_sym = worst_sym.max((b1 - b2).abs() / big);
                        }
                        if fig.in_s_rho(rho, &x) || fig.in_s_rho(rho, &m) {
                            continue;
                        }
                        outside += 1;
                        if !(b1 < 0.0) {
                            return Err(format!("{}: b = {b1:e} outside the cones at {x:?}", r.name));
                        }
                    }
                }
                if worst_sym > 1e-9 {
                    return Err(format!("{}: symmetry error {worst_sym:e}", r.name));
                }
                Ok(format!("{} rho={rho:.3} symmetry {worst_sym:.1e}", r.name))
            })
            .collect(),
    )
}

fn criterion_cover() -> Line {
    let p = polytope("octahedron");
    let start = Instant::now();
    let report = check_u_cover(&p, 0.25, 0.05, 100_000, &[1e-3], SEED);
    let elapsed = start.elapsed();
    let result = match report {
        Ok(r) if r.passed() && elapsed < Duration::from_secs(60) => {
            Ok(format!("octahedron eps=0.25 rho=0.05 delta=1e-3: 0 uncovered, {elapsed:.2?}"))
        }
        Ok(r) => Err(format!("{} uncovered, {elapsed:.2?}", r.total_failures())),
        Err(e) => Err(e.to_string()),
    };
    line(vec![result])
}

fn criterion_unbounded(runs: &[&Run]) -> Line {
    line(
        runs.iter()
            .map(|r| {
                certified(r).map_err(|e| format!("{}: {e}", r.name))?;
                if r.elapsed > Duration::from_secs(600) {
                    return Err(format!("{}: {:.1?}", r.name, r.elapsed));
                }
                let rep = r.rep.as_ref().unwrap();
                let lifted = rep.lifted.as_ref().ok_or("no lifted data")?;
                let ok = rep.polys.len() == rep.dim
                    && lifted.polys.iter().all(|q| q.is_homogeneous() && q.is_even_degree());
                let degrees: Vec<i64> = lifted.polys.iter().map(EvalForm::degree).collect();
                if ok {
                    Ok(format!("{} degrees {degrees:?}, {:.2?}", r.name, r.elapsed))
                } else {
                    Err(format!("{} degrees {degrees:?}", r.name))
                }
            })
            .collect(),
    )
}

fn criterion_determinism(runs: &[&Run], root: &Path) -> Line {
    line(
        runs.iter()
            .map(|r| {
                let again = run_build(r.name, root, "repeat");
                for f in ["representation.json", "report.json"] {
                    let (a, b) = (fs::read(r.dir.join(f)), fs::read(again.dir.join(f)));
                    match (a, b) {
                        (Ok(a), Ok(b)) if a == b => {}
                        _ => return Err(format!("{} {f} differs", r.name)),
                    }
                }
                Ok(r.name.to_string())
            })
            .collect(),
    )
}

fn criterion_sabotage(run: &Run) -> Line {
    let Some(rep) = &run.rep else {
        return line(vec![Err("no octahedron representation".into())]);
    };
    line(
        (0..rep.polys.len())
            .map(|j| {
                let mut broken = rep.clone();
                broken.polys[j] = broken.polys[j].negated();
                let dir = run.dir.join(format!("sabotage-{j}"));
                fs::create_dir_all(&dir).unwrap();
                let path = dir.join("representation.json");
                fs::write(&path, serde_json::to_string(&broken).unwrap()).unwrap();
                let out = polyrep(&[
                    "verify",
                    data(run.name).to_str().unwrap(),
                    path.to_str().unwrap(),
                    "--out",
                    dir.to_str().unwrap(),
                ]);
                let report: CertReport =
                    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
                let witnesses = report.witnesses().count();
                if out.status.code() == Some(4) && witnesses > 0 {
                    Ok(format!("p{j}: {witnesses} witnesses"))
                } else {
                    Err(format!("p{j}: exit {:?}, {witnesses} witnesses", out.status.code()))
                }
            })
            .collect(),
    )
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let polygons: Vec<Run> = ["square", "triangle", "pentagon"].into_iter().map(|n| run_build(n, root, "a")).collect();
    let solids: Vec<Run> = ["tetrahedron", "cube", "octahedron"].into_iter().map(|n| run_build(n, root, "a")).collect();
    let unbounded: Vec<Run> = ["quadrant2d", "slab3d"].into_iter().map(|n| run_build(n, root, "a")).collect();
    let bounded: Vec<&Run> = polygons.iter().chain(&solids).collect();
    let solid_refs: Vec<&Run> = solids.iter().collect();
    let all: Vec<&Run> = bounded.iter().copied().chain(&unbounded).collect();

    let lines = [
        criterion_builds(&polygons.iter().collect::<Vec<_>>(), Duration::from_secs(60), None),
        criterion_builds(&solid_refs, Duration::from_secs(1800), Some(200)),
        criterion_residual(&bounded),
        criterion_concavity(&bounded),
        criterion_hausdorff(),
        criterion_vertex_polynomials(&solid_refs),
        criterion_cover(),
        criterion_unbounded(&unbounded.iter().collect::<Vec<_>>()),
        criterion_determinism(&all, root),
        criterion_sabotage(&solids[2]),
    ];
    let mut failed = 0;
    for (i, l) in lines.iter().enumerate() {
        println!("criterion {}: {} {}", i + 1, if l.passed { "PASS" } else { "FAIL" }, l.detail);
        failed += usize::from(!l.passed);
    }
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
