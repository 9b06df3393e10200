use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use polyrep::build::{build, SearchConfig};
use polyrep::certify::{certify_representation, Domain, UNBOUNDED_BOX};
use polyrep::io::{self, PolytopeFile, PolytopeInfo, UnboundedInfo};
use polyrep::geometry::LinealityDecomposition;
use polyrep::{Budgets, CertReport, Error, FieldGrid, Representation, Selection, Verdict};

const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_FAIL: u8 = 4;

/// Polynomial inequality descriptions of polygons and polyhedra.
#[derive(Parser)]
#[command(name = "polyrep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print vertices, edges, facet incidence and facet functionals.
    Info {
        input: PathBuf,
    },
    /// Build and certify a representation; writes representation.json,
    /// report.json and attempts.json.
    Build {
        input: PathBuf,
        #[command(flatten)]
        cert: CertArgs,
        /// Parameter choices tried before giving up.
        #[arg(long, default_value_t = 200)]
        max_triples: usize,
        /// Starting value of l0.
        #[arg(long, default_value_t = 1)]
        l0: u32,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Re-run the certification of a representation.
    Verify {
        polytope: PathBuf,
        representation: PathBuf,
        #[command(flatten)]
        cert: CertArgs,
        /// Directory for report.json; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a polynomial (or the minimum of all) on a regular grid and
    /// write field.vtk and field.csv.
    Field {
        polytope: PathBuf,
        representation: PathBuf,
        /// Polynomial index or `min`.
        #[arg(long, default_value = "min")]
        poly: String,
        /// Nodes per axis.
        #[arg(long, default_value_t = 32)]
        res: usize,
        /// Padding added to the bounding box on every side.
        #[arg(long, default_value_t = 0.5)]
        margin: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CertArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    budget_interior: Option<usize>,
    #[arg(long)]
    budget_shell: Option<usize>,
    #[arg(long)]
    budget_far: Option<usize>,
}

impl CertArgs {
    fn budgets(&self) -> Budgets {
        let d = Budgets::default();
        Budgets {
            interior: self.budget_interior.unwrap_or(d.interior),
            shell: self.budget_shell.unwrap_or(d.shell),
            far: self.budget_far.unwrap_or(d.far),
            facet: d.facet,
        }
    }
}

/// Failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(
                Error::InvalidArgument(_)
                | Error::Degenerate(_)
                | Error::DimensionMismatch { .. }
                | Error::Json(_),
            ) => EXIT_INPUT,
            _ => 1,
        };
        Self { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { input } => info(&input),
        Command::Build {
            input,
            cert,
            max_triples,
            l0,
            out,
        } => cmd_build(&input, &cert, max_triples, l0, &out),
        Command::Verify {
            polytope,
            representation,
            cert,
            out,
        } => verify(&polytope, &representation, &cert, out.as_deref()),
        Command::Field {
            polytope,
            representation,
            poly,
            res,
            margin,
            out,
        } => field(&polytope, &representation, &poly, res, margin, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn info(input: &Path) -> Result<u8, Failure> {
    let file = PolytopeFile::read(input)?;
    let text = match file.polytope() {
        Ok(p) => io::to_json(&PolytopeInfo::new(&p))?,
        Err(Error::Unbounded) => {
            let dec = LinealityDecomposition::new(file.dim, &file.halfspaces)?;
            io::to_json(&UnboundedInfo::new(&dec))?
        }
        Err(e) => return Err(e.into()),
    };
    print!("{text}");
    Ok(0)
}

fn cmd_build(input: &Path, cert: &CertArgs, max_triples: usize, l0: u32, out: &Path) -> Result<u8, Failure> {
    let file = PolytopeFile::read(input)?;
    if let Err(e) = file.polytope() {
        if !matches!(e, Error::Unbounded) {
            return Err(e.into());
        }
    }
    if l0 == 0 {
        return Err(Error::InvalidArgument("l0: must be positive".into()).into());
    }
    let cfg = SearchConfig {
        seed: cert.seed,
        l0,
        max_triples,
        budgets: cert.budgets(),
        ..SearchConfig::default()
    };
    let outcome = build(file.dim, &file.halfspaces, &cfg)?;
    ensure_dir(out)?;
    io::write_json(&out.join("attempts.json"), &outcome.attempts)?;
    if let Some(rep) = &outcome.representation {
        io::write_json(&out.join("representation.json"), rep)?;
    }
    if let Some(report) = &outcome.report {
        io::write_json(&out.join("report.json"), report)?;
    }
    let tried = outcome.attempts.iter().filter(|a| a.stage != "full").count();
    match (&outcome.representation, &outcome.report) {
        (Some(rep), Some(report)) if outcome.certified => {
            let p = rep.params;
            println!(
                "pass: mode {:?}, l={} l0={} m={} k={}, attempt {}, report {}",
                rep.mode, p.l, p.l0, p.m, p.k, rep.provenance.attempt, report.id
            );
            Ok(0)
        }
        (_, Some(report)) => {
            println!("no certified representation after {tried} parameter choices; best attempt written");
            print_failures(report);
            Ok(EXIT_BUDGET)
        }
        _ => {
            println!("no candidate could be built in {tried} parameter choices");
            Ok(EXIT_BUDGET)
        }
    }
}

fn verify(polytope: &Path, representation: &Path, cert: &CertArgs, out: Option<&Path>) -> Result<u8, Failure> {
    let file = PolytopeFile::read(polytope)?;
    let rep: Representation = io::read_json(representation)?;
    check_pair(&file, &rep)?;
    let domain = Domain::from_halfspaces(file.dim, &file.halfspaces)?;
    let report = certify_representation(
        &domain,
        &rep.polys,
        &cert.budgets(),
        &Default::default(),
        cert.seed,
    )?;
    match out {
        Some(dir) => {
            ensure_dir(dir)?;
            io::write_json(&dir.join("report.json"), &report)?;
        }
        None => print!("{}", io::to_json(&report)?),
    }
    let verdict = match report.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    };
    eprintln!("{verdict}: report {}", report.id);
    print_failures(&report);
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn field(
    polytope: &Path,
    representation: &Path,
    poly: &str,
    res: usize,
    margin: f64,
    out: &Path,
) -> Result<u8, Failure> {
    let file = PolytopeFile::read(polytope)?;
    let rep: Representation = io::read_json(representation)?;
    check_pair(&file, &rep)?;
    let sel: Selection = poly.parse()?;
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(Error::InvalidArgument("margin: must be a nonnegative number".into()).into());
    }
    let (lo, hi) = match file.polytope() {
        Ok(p) => p.bounding_box(),
        Err(Error::Unbounded) => (vec![-UNBOUNDED_BOX; file.dim], vec![UNBOUNDED_BOX; file.dim]),
        Err(e) => return Err(e.into()),
    };
    let lo: Vec<f64> = lo.iter().map(|a| a - margin).collect();
    let hi: Vec<f64> = hi.iter().map(|b| b + margin).collect();
    let grid = FieldGrid::sample(&rep.polys, sel, &lo, &hi, res)?;
    ensure_dir(out)?;
    let title = format!("polyrep field {poly}");
    write(&out.join("field.vtk"), &grid.to_vtk(&title))?;
    write(&out.join("field.csv"), &grid.to_csv())?;
    println!("{} values written to {}", grid.values.len(), out.display());
    Ok(0)
}

fn check_pair(file: &PolytopeFile, rep: &Representation) -> Result<(), Error> {
    if rep.dim != file.dim {
        return Err(Error::DimensionMismatch {
            expected: file.dim,
            found: rep.dim,
        });
    }
    if let Some(p) = rep.polys.iter().find(|p| p.dim() != file.dim) {
        return Err(Error::DimensionMismatch {
            expected: file.dim,
            found: p.dim(),
        });
    }
    Ok(())
}

fn print_failures(report: &CertReport) {
    for (name, check) in &report.checks {
        if check.failures == 0 && check.guard_failures == 0 {
            continue;
        }
        eprintln!(
            "  {name}: {} failures, {} in guard band, of {} samples",
            check.failures, check.guard_failures, check.samples
        );
        if let Some(w) = &check.witness {
            let values: Vec<String> = w
                .values
                .iter()
                .map(|v| v.map_or_else(|| "non-finite".to_string(), |v| format!("{v:e}")))
                .collect();
            eprintln!("    witness #{} at {:?}: values [{}]", w.index, w.point, values.join(", "));
        }
    }
}

fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
