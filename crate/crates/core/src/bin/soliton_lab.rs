//! Experiment driver: every report line names the statement it exercises.
//!
//! Exit codes: 0 success, 2 mathematical check failed, 3 usage error,
//! 4 I/O failure.

use clap::{Args, Parser, Subcommand};
use soliton_lab::catalog::{self, Family};
use soliton_lab::flow::{self, BoundaryMotion};
use soliton_lab::geom::{circle_directions, GraphDirection, GridSpec, Point, SurfaceSample};
use soliton_lab::hull::{classify_hull, SamplingProtocol};
use soliton_lab::io::{
    fmt_real, seeded_directions, write_csv, write_obj_graph, write_obj_revolution,
    ExperimentConfig, IoError,
};
use soliton_lab::pde;
use soliton_lab::verify;
use soliton_lab::wedge::{self, Halfspace, NoneRule, WedgeVerdict, WitnessFamily};
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "soliton-lab", about = "Translating-soliton numerical laboratory")]
struct Cli {
    /// Flat key=value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized direction sets.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for CSV/OBJ artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Args)]
struct WedgeArgs {
    /// Inward normal of the first halfspace, comma separated.
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    w2: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    rho0: Option<f64>,
    #[arg(long)]
    levels: Option<usize>,
    /// `default` or `seeded` direction set.
    #[arg(long)]
    directions: Option<String>,
}

#[derive(Args)]
struct DirichletArgs {
    /// `vertical` or `side`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    w2: Option<String>,
    #[arg(long)]
    r: Option<f64>,
    /// Offset of the clipped vertical plane in normalized coordinates.
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a catalog surface; write its profile/patch CSV and OBJ.
    Generate(GenerateArgs),
    /// Check the translator identity H = <e_{n+1}, nu> on a catalog family.
    Verify(VerifyArgs),
    /// Decide wedge existence (Thm 1.1 / Cor 4.2 truth table).
    Wedge(WedgeArgs),
    /// Classify conv(pi(Sigma)) into the five cases of Thm 1.3.
    Classify(ClassifyArgs),
    /// Dirichlet solves, including the Prop 6.2 nonexistence experiment.
    Dirichlet(DirichletArgs),
    /// Graph mean curvature flow self-translation test (Lemma 3.1 context).
    Flow(FlowArgs),
    /// Omori-Yau probe of the master identity on wedge-clipped data.
    Probe(ProbeArgs),
}

enum Failure {
    /// A mathematical check exceeded its tolerance.
    Check(String),
    Usage(String),
    Io(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

macro_rules! usage_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure::Usage(e.to_string())
            }
        }
    )*};
}
usage_from!(
    catalog::CatalogError,
    soliton_lab::geom::GeomError,
    soliton_lab::hull::HullError,
    pde::PdeError,
    flow::FlowError,
    wedge::WedgeError,
    verify::VerifyError
);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output is a success path
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(3);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = cli.config.as_deref();
    match &cli.cmd {
        Cmd::Generate(a) => {
            let cfg = ExperimentConfig::new(
                "generate",
                config,
                &[
                    ("family", a.family.clone()),
                    ("n", a.n.map(|v| v.to_string())),
                    ("rmax", a.rmax.map(fmt_real)),
                    ("h", a.h.map(fmt_real)),
                ],
                cli.seed,
                cli.out.clone(),
            )?;
            cmd_generate(&cfg)
        }
        Cmd::Verify(a) => {
            let cfg = ExperimentConfig::new(
                "verify",
                config,
                &[
                    ("family", a.family.clone()),
                    ("h", a.h.map(fmt_real)),
                ],
                cli.seed,
                cli.out.clone(),
            )?;
            cmd_verify(&cfg)
        }
        Cmd::Wedge(a) => {
            let cfg = ExperimentConfig::new(
                "wedge",
                config,
                &[("w1", a.w1.clone()), ("w2", a.w2.clone())],
                cli.seed,
                cli.out.clone(),
            )?;
            cmd_wedge(&cfg)
        }
        Cmd::Classify(a) => {
            let cfg = ExperimentConfig::new(
                "classify",
                config,
                &[
                    ("family", a.family.clone()),
                    ("rho0", a.rho0.map(fmt_real)),
                    ("levels", a.levels.map(|v| v.to_string())),
                    ("directions", a.directions.clone()),
                ],
                cli.seed,
                cli.out.clone(),
            )?;
            cmd_classify(&cfg)
        }
        Cmd::Dirichlet(a) => {
            let cfg = ExperimentConfig::new(
                "dirichlet",
                config,
                &[
                    ("mode", a.mode.clone()),
                    ("theta", a.theta.map(fmt_real)),
                    ("c", a.c.map(fmt_real)),
                    ("h", a.h.map(fmt_real)),
                    ("radius", a.radius.map(fmt_real)),
                ],
                cli.seed,
                cli.out.clone(),
            )?;
            cmd_dirichlet(&cfg)
        }
        Cmd::Flow(a) => {
            let cfg = ExperimentConfig::new(
                "flow",
                config,
                &[
                    ("family", a.family.clone()),
                    ("h", a.h.map(fmt_real)),
                    ("t", a.t.map(fmt_real)),
                    ("tol", a.tol.map(fmt_real)),
                ],
                cli.seed,
                cli.out.clone(),
            )?;
            cmd_flow(&cfg)
        }
        Cmd::Probe(a) => {
            let cfg = ExperimentConfig::new(
                "probe",
                config,
                &[
                    ("w1", a.w1.clone()),
                    ("w2", a.w2.clone()),
                    ("r", a.r.map(fmt_real)),
                    ("a", a.a.map(fmt_real)),
                ],
                cli.seed,
                cli.out.clone(),
            )?;
            cmd_probe(&cfg)
        }
    }
}

fn family_of(cfg: &ExperimentConfig) -> Result<Family, Failure> {
    let name = cfg
        .get("family")
        .ok_or_else(|| Failure::Usage("--family is required".into()))?;
    Family::parse(name).ok_or_else(|| Failure::Usage(format!("unknown family {name:?}")))
}

fn out_file(cfg: &ExperimentConfig, name: &str) -> Result<BufWriter<File>, Failure> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    Ok(BufWriter::new(File::create(cfg.output_dir.join(name))?))
}

/// Catalog family as a geometry sample at spacing `h` (graphs) or profile
/// step `h` (rotational surfaces).
fn family_sample(family: Family, h: f64) -> Result<SurfaceSample<f64>, Failure> {
    let cells = |span: f64| (span / h).floor() as usize + 1;
    match family {
        Family::Plane => {
            // vertical plane x_1 = 0 as a sideways graph
            let grid = GridSpec::new(vec![-1.0, -1.0], h, vec![cells(2.0), cells(2.0)]);
            let patch =
                soliton_lab::geom::GraphPatch::from_fn(GraphDirection::Sideways, grid, |_| 0.0);
            Ok(patch.graph_geometry()?)
        }
        Family::GrimReaper => {
            let half = std::f64::consts::FRAC_PI_2 - 0.3;
            let grid = GridSpec::new(vec![-half, -1.0], h, vec![cells(2.0 * half), cells(2.0)]);
            Ok(catalog::grim_reaper(2, grid)?.graph_geometry()?)
        }
        Family::TiltedGrimReaper => {
            let theta = 0.5f64;
            let half = (std::f64::consts::FRAC_PI_2 - 0.3) / theta.cos();
            let grid = GridSpec::new(vec![-half, -1.0], h, vec![cells(2.0 * half), cells(2.0)]);
            Ok(catalog::tilted_grim_reaper(2, theta, grid)?.graph_geometry()?)
        }
        Family::Bowl => {
            let profile = catalog::bowl::<f64>(2, 3.0, h)?;
            Ok(profile.revolve(&circle_directions(64), "bowl"))
        }
        Family::Winglike => {
            let wings = catalog::winglike::<f64>(2, 1.0, 3.0, h)?;
            Ok(wings.upper.revolve(&circle_directions(64), "winglike-upper"))
        }
        Family::MinimalCylinder => {
            let base = Point::new(vec![0.0, 0.0, 0.0]);
            Ok(catalog::minimal_cylinder(&[1.0, 0.0, 0.0], &base, 2.0, h)?)
        }
    }
}

fn cmd_generate(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let family = family_of(cfg)?;
    let n = cfg.get_usize("n", 2)?;
    let rmax = cfg.get_f64("rmax", 20.0)?;
    let h = cfg.get_f64("h", 0.05)?;
    match family {
        Family::Bowl | Family::Winglike => {
            let profile = if family == Family::Bowl {
                catalog::bowl::<f64>(n, rmax, h)?
            } else {
                catalog::winglike::<f64>(n, 1.0, rmax, h)?.upper
            };
            let csv_name = format!("{}_profile.csv", family.name());
            let mut w = out_file(cfg, &csv_name)?;
            write_csv(
                &mut w,
                &["r", "z"],
                profile
                    .samples
                    .iter()
                    .map(|s| vec![fmt_real(s.r), fmt_real(s.z)]),
            )?;
            println!(
                "generate family={} n={n} samples={} file={csv_name} ref=Sec.2-examples",
                family.name(),
                profile.samples.len()
            );
            if n == 2 {
                let obj_name = format!("{}.obj", family.name());
                let mut w = out_file(cfg, &obj_name)?;
                write_obj_revolution(&mut w, &profile, 64)?;
                println!("generate obj={obj_name}");
            }
        }
        Family::Plane | Family::GrimReaper | Family::TiltedGrimReaper => {
            let patch = match family {
                Family::GrimReaper => {
                    let half = std::f64::consts::FRAC_PI_2 - 0.05;
                    let m = (2.0 * half / h).floor() as usize + 1;
                    let rows = (2.0f64 / h).floor() as usize + 1;
                    catalog::grim_reaper(n.max(2), GridSpec::new(
                        vec![-half, -1.0],
                        h,
                        vec![m, rows],
                    ))?
                }
                Family::TiltedGrimReaper => {
                    let theta = 0.5f64;
                    let half = (std::f64::consts::FRAC_PI_2 - 0.05) / theta.cos();
                    let m = (2.0 * half / h).floor() as usize + 1;
                    let rows = (2.0f64 / h).floor() as usize + 1;
                    catalog::tilted_grim_reaper(2, theta, GridSpec::new(
                        vec![-half, -1.0],
                        h,
                        vec![m, rows],
                    ))?
                }
                // vertical plane x_1 = 0 as a sideways graph
                _ => soliton_lab::geom::GraphPatch::from_fn(
                    GraphDirection::Sideways,
                    GridSpec::new(vec![-1.0, -1.0], h, vec![
                        (2.0f64 / h).floor() as usize + 1,
                        (2.0f64 / h).floor() as usize + 1,
                    ]),
                    |_| 0.0,
                ),
            };
            let csv_name = format!("{}_patch.csv", family.name());
            let mut w = out_file(cfg, &csv_name)?;
            write_csv(
                &mut w,
                &["x1", "x2", "u"],
                (0..patch.len()).map(|node| {
                    let y = patch.coords(node);
                    vec![fmt_real(y[0]), fmt_real(y[1]), fmt_real(patch.values[node])]
                }),
            )?;
            println!(
                "generate family={} nodes={} file={csv_name} ref=Sec.2-examples",
                family.name(),
                patch.len()
            );
            if patch.direction == GraphDirection::Vertical {
                let obj_name = format!("{}.obj", family.name());
                let mut w = out_file(cfg, &obj_name)?;
                write_obj_graph(&mut w, &patch)?;
                println!("generate obj={obj_name}");
            }
        }
        Family::MinimalCylinder => {
            let s = family_sample(family, h)?;
            let csv_name = "minimal_cylinder_points.csv";
            let mut w = out_file(cfg, csv_name)?;
            write_csv(
                &mut w,
                &["x1", "x2", "x3"],
                s.points
                    .iter()
                    .map(|p| p.coords.iter().map(|&c| fmt_real(c)).collect()),
            )?;
            println!(
                "generate family=minimal_cylinder points={} file={csv_name} ref=Sec.2-examples",
                s.len()
            );
        }
    }
    Ok(())
}

fn cmd_verify(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let family = family_of(cfg)?;
    let h = cfg.get_f64("h", 0.02)?;
    let sample = family_sample(family, h)?;
    let report = verify::translator_residual(&sample)?;
    let tol = 10.0 * h * h;
    let ok = report.max_abs <= tol;
    println!(
        "verify family={} h={h} max_residual={} tol={} status={} ref=translator-eq H=<e,nu>",
        family.name(),
        fmt_real(report.max_abs),
        fmt_real(tol),
        if ok { "PASS" } else { "FAIL" }
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "translator residual {} exceeds {tol}",
            report.max_abs
        )))
    }
}

fn cmd_wedge(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let w1 = cfg.get_vector("w1")?;
    let w2 = cfg.get_vector("w2")?;
    if w1.len() != w2.len() {
        return Err(Failure::Usage("w1 and w2 must have equal dimension".into()));
    }
    let unit = |w: &[f64]| -> Result<Vec<f64>, Failure> {
        soliton_lab::vec::normalized(w)
            .ok_or_else(|| Failure::Usage("wedge normal must be nonzero".into()))
    };
    let (u1, u2) = (unit(&w1)?, unit(&w2)?);
    let verdict = wedge::wedge_existence(&u1, &u2);
    let line = match verdict {
        WedgeVerdict::None(NoneRule::BiHalfspace) => "verdict=None rule=Thm1.1".to_string(),
        WedgeVerdict::None(NoneRule::NegativeSlope) => {
            "verdict=None rule=Cor4.2-negative-slope".to_string()
        }
        WedgeVerdict::Exists(witness) => {
            let name = match witness {
                WitnessFamily::Bowl => "bowl",
                WitnessFamily::TiltedGrimReaper => "tilted_grim_reaper",
                WitnessFamily::VerticalPlane => "vertical_plane",
            };
            format!("verdict=Exists witness={name} rule=Cor4.2")
        }
    };
    println!("{line}");
    Ok(())
}

fn cmd_classify(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let family = family_of(cfg)?;
    let rho0 = cfg.get_f64("rho0", 0.5)?;
    let levels = cfg.get_usize("levels", 6)?;
    let dirs_kind = cfg.get("directions").unwrap_or("default");
    let protocol = match dirs_kind {
        "default" => SamplingProtocol::new(
            rho0,
            levels,
            soliton_lab::hull::default_directions(2, 32),
        )?,
        "seeded" => SamplingProtocol::new(rho0, levels, seeded_directions(2, 32, cfg.seed))?,
        other => {
            return Err(Failure::Usage(format!(
                "directions must be `default` or `seeded`, got {other:?}"
            )))
        }
    };
    let case = match family {
        Family::Bowl => classify_hull(&|rho: f64| bowl_sample(rho), &protocol)?,
        Family::GrimReaper => classify_hull(&|rho: f64| grim_sample(rho), &protocol)?,
        Family::Plane | Family::MinimalCylinder => {
            classify_hull(&|rho: f64| cylinder_sample(rho), &protocol)?
        }
        other => {
            return Err(Failure::Usage(format!(
                "classify does not support family {:?}",
                other.name()
            )))
        }
    };
    println!("classify family={} {} ref=Thm1.3", family.name(), case.report());
    Ok(())
}

fn bowl_sample(rho: f64) -> SurfaceSample<f64> {
    let r = rho.max(2.0);
    let profile = catalog::bowl::<f64>(2, r, r / 400.0).expect("bowl profile");
    profile.revolve(&circle_directions(16), "bowl")
}

fn grim_sample(rho: f64) -> SurfaceSample<f64> {
    let mut s = SurfaceSample::empty(3, "grim-reaper");
    let half = std::f64::consts::FRAC_PI_2 - 1e-3;
    let (m, rows) = (41, 33);
    for i in 0..m {
        let x1 = -half + 2.0 * half * i as f64 / (m - 1) as f64;
        for j in 0..rows {
            let x2 = -rho + 2.0 * rho * j as f64 / (rows - 1) as f64;
            s.push(
                Point::new(vec![x1, x2, -(x1.cos().ln())]),
                vec![0.0, 0.0, 1.0],
                0.0,
                false,
            );
        }
    }
    s
}

fn cylinder_sample(rho: f64) -> SurfaceSample<f64> {
    let base = Point::new(vec![0.0, 0.0, 0.0]);
    catalog::minimal_cylinder(&[1.0, 0.0, 0.0], &base, rho, rho / 8.0).expect("cylinder")
}

fn cmd_dirichlet(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let mode = cfg.get("mode").unwrap_or("side");
    let h = cfg.get_f64("h", 0.05)?;
    match mode {
        "vertical" => {
            let radius = cfg.get_f64("radius", 1.0)?;
            let domain = pde::Domain::disk(&[0.0, 0.0], radius, h);
            let (_, report) = pde::solve_vertical(&domain, &|_: &[f64]| 0.0)?;
            println!(
                "dirichlet mode=vertical radius={radius} h={h} converged={} iterations={} residual={} ref=graph-translator-eq",
                report.converged,
                report.iterations,
                fmt_real(report.final_residual)
            );
            if report.converged {
                Ok(())
            } else {
                Err(Failure::Check("vertical Dirichlet solve did not converge".into()))
            }
        }
        "side" => {
            let theta = cfg.get_f64("theta", 0.6)?;
            let c = cfg.get_f64("c", 1.0)?;
            let data = pde::construct_prop62_data::<f64>(theta, c, h)?;
            let phi = |y: &[f64]| data.phi(y);
            let (_, report) = pde::solve_side(&data.domain, &phi)?;
            println!(
                "dirichlet mode=side theta={theta} c={c} h={h} nongraphical={} converged={} nonexistence_flag={} max_gradient={} ref=Prop6.2 eq=side_trans_dirichlet",
                data.nongraphical,
                report.converged,
                report.nonexistence_flag,
                fmt_real(report.max_gradient)
            );
            Ok(())
        }
        other => Err(Failure::Usage(format!(
            "mode must be `vertical` or `side`, got {other:?}"
        ))),
    }
}

fn cmd_flow(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let family = family_of(cfg)?;
    let h = cfg.get_f64("h", 0.05)?;
    let t_end = cfg.get_f64("t", 1.0)?;
    let tol = cfg.get_f64("tol", 1e-2)?;
    let patch = match family {
        Family::GrimReaper => {
            let half = 1.2f64;
            let m = (2.0 * half / h).round() as usize + 1;
            let grid = GridSpec::new(vec![-half], h, vec![m]);
            soliton_lab::geom::GraphPatch::from_fn(GraphDirection::Vertical, grid, |x: &[f64]| {
                -(x[0].cos().ln())
            })
        }
        Family::Bowl => {
            let profile = catalog::bowl::<f64>(2, 2.0, h.min(0.01))?;
            let m = (1.0f64 / h).round() as usize + 1;
            let grid = GridSpec::new(vec![-0.5, -0.5], h, vec![m, m]);
            soliton_lab::geom::GraphPatch::from_fn(GraphDirection::Vertical, grid, |x: &[f64]| {
                profile
                    .height_at_radius((x[0] * x[0] + x[1] * x[1]).sqrt())
                    .expect("inside profile range")
            })
        }
        other => {
            return Err(Failure::Usage(format!(
                "flow self-translation test supports grim_reaper and bowl, got {:?}",
                other.name()
            )))
        }
    };
    let dt = h * h / (2.0 * (patch.n() as f64 + 1.0));
    let traj = flow::flow_graph_mcf(&patch, t_end, dt, BoundaryMotion::Translating)?;
    let (t_final, last) = traj.snapshots.last().expect("nonempty trajectory");
    let err = last
        .values
        .iter()
        .zip(&patch.values)
        .map(|(&a, &b)| (a - b - t_final).abs())
        .fold(0.0f64, f64::max);
    let ok = err <= tol;
    println!(
        "flow family={} h={h} dt={} t={} translation_error={} tol={} status={} ref=self-translation (Lemma 3.1 context)",
        family.name(),
        fmt_real(dt),
        fmt_real(*t_final),
        fmt_real(err),
        fmt_real(tol),
        if ok { "PASS" } else { "FAIL" }
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "translation error {err} exceeds {tol}"
        )))
    }
}

fn cmd_probe(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let w1 = cfg.get_vector("w1").unwrap_or_else(|_| vec![1.0, 0.0, 0.0]);
    let w2 = cfg.get_vector("w2").unwrap_or_else(|_| vec![0.0, 1.0, 0.0]);
    let r = cfg.get_f64("r", 1.0)?;
    let a = cfg.get_f64("a", 0.1)?;
    let unit = |w: &[f64]| -> Result<Vec<f64>, Failure> {
        soliton_lab::vec::normalized(w)
            .ok_or_else(|| Failure::Usage("wedge normal must be nonzero".into()))
    };
    let h1 = Halfspace::through_origin(unit(&w1)?)?;
    let h2 = Halfspace::through_origin(unit(&w2)?)?;
    let (nf, _) = wedge::normalize_pair(&h1, &h2)?;
    // wedge-clipped vertical plane {x_1 = a} in normalized coordinates
    let mut sample = SurfaceSample::empty(3, "clipped-plane");
    let m = 81;
    for i in 0..m {
        let x2 = -a + 2.0 * a * i as f64 / (m - 1) as f64;
        for j in 0..m {
            let x3 = -1.0 + 2.0 * j as f64 / (m - 1) as f64;
            sample.push(Point::new(vec![a, x2, x3]), vec![1.0, 0.0, 0.0], 0.0, false);
        }
    }
    let report = wedge::oy_probe(&sample, &nf, r, None)?;
    let bound = r / nf.xi;
    let bound_ok = report.sup_f <= bound + 1e-12;
    let csv_name = "probe_table.csv";
    let mut w = out_file(cfg, csv_name)?;
    write_csv(
        &mut w,
        &["x1", "x2", "x3", "f", "grad_norm", "laplacian", "region"],
        report.probes.iter().map(|p| {
            vec![
                fmt_real(p.point.coords[0]),
                fmt_real(p.point.coords[1]),
                fmt_real(p.point.coords[2]),
                fmt_real(p.f),
                fmt_real(p.grad_norm),
                fmt_real(p.laplacian),
                format!("{:?}", p.region),
            ]
        }),
    )?;
    println!(
        "probe r={r} xi={} contradiction_indicator={} sup_f={} bound={} bound_ok={bound_ok} file={csv_name} ref=Eq.main_identity,Eq.f-bounds",
        fmt_real(nf.xi),
        report.contradiction_indicator,
        fmt_real(report.sup_f),
        fmt_real(bound)
    );
    if bound_ok {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "sup f = {} exceeds R/xi = {bound}",
            report.sup_f
        )))
    }
}
