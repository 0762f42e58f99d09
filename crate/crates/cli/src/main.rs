//! Command-line front end: surface models, covers, lifts, intersection
//! numbers, certification, and emission.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::OnceLock;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use liftlab_core::constructors::{
    admissible_targets, closed_cover, many_boundary_cover, one_boundary_cover,
    one_holed_torus_cover, pants_cover, planar_realize, two_boundary_cover, AdmissibleTarget,
    Constructed,
};
use liftlab_core::covers::{build_cover, lift_path, validate_rep};
use liftlab_core::curves::home_graph;
use liftlab_core::fatgraph::SurfaceSpec;
use liftlab_core::harness::{mindeg_search, verify_all, verify_instance, GridBounds};
use liftlab_core::oracle::oracle_self_intersection;
use liftlab_core::selfint::{self_intersection, vertex_simple_certificate, ClosedPath};
use liftlab_core::words::CyclicWord;

#[derive(Parser)]
#[command(
    name = "liftlab",
    version,
    about = "Finite covers of surfaces and simple lifts of non-simple curves"
)]
struct Cli {
    /// Reserved for future sampling modes; accepted and ignored.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SurfaceArg {
    /// Surface as g,k (genus, boundary components); k = 0 means closed.
    #[arg(long, value_parser = parse_surface)]
    surface: SurfaceSpec,
}

fn parse_surface(s: &str) -> Result<SurfaceSpec, String> {
    let (g, k) = s.split_once(',').ok_or("expected g,k")?;
    let g: u32 = g.trim().parse().map_err(|_| "bad genus")?;
    let k: u32 = k.trim().parse().map_err(|_| "bad boundary count")?;
    Ok(SurfaceSpec::new(g, k))
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical fat-graph model of a surface.
    Surface {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Emit GraphViz instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Cover constructions.
    Cover {
        #[command(subcommand)]
        action: CoverAction,
    },
    /// Exact self-intersection number of a curve on the base surface.
    Selfint {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Curve word, e.g. "a b^3".
        #[arg(long, conflicts_with = "curve")]
        word: Option<String>,
        /// Curve family shorthand, e.g. eta:3, gamma:2, zeta:4, a2bn:5.
        #[arg(long)]
        curve: Option<String>,
    },
    /// Lift a curve into a constructed cover.
    Lift {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        degree: usize,
        /// Constructor parameter, e.g. m=2, q=1, u=0, genus=3 (repeatable).
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 0)]
        sheet: usize,
    },
    /// Numerical cross-check of selfint via axis linking.
    Oracle {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        word: String,
        /// Enumeration depth; at least the word length.
        #[arg(long)]
        depth: usize,
    },
    /// Certify one (surface, degree, target) instance, or all targets.
    Verify {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, conflicts_with_all = ["target_genus", "all_targets"])]
        target_boundaries: Option<i64>,
        #[arg(long, conflicts_with = "all_targets")]
        target_genus: Option<i64>,
        #[arg(long)]
        all_targets: bool,
    },
    /// Certify every admissible instance over a surface/degree grid.
    VerifyGrid {
        #[arg(long, default_value_t = 3)]
        max_g: u32,
        #[arg(long, default_value_t = 5)]
        max_k: u32,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = false)]
        include_closed: bool,
        /// Worker threads; output order does not depend on this.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Brute-force the minimal cover degree with a simple lift.
    Mindeg {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Write the surface model (or a cover total graph) to a file.
    Emit {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        /// Output path for JSON ("-" for stdout).
        #[arg(long, conflicts_with = "dot")]
        json: Option<PathBuf>,
        /// Output path for GraphViz ("-" for stdout).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CoverAction {
    /// Build a cover from constructor parameters and print rep + invariants.
    Build {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        degree: usize,
        /// Constructor parameter, e.g. m=2, q=1, u=0, genus=7 (repeatable).
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
    },
    /// List the admissible cover invariants for a surface and degree.
    Targets {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        degree: usize,
    },
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    Ok((k.trim().to_string(), v.trim().parse().map_err(|_| "bad integer value")?))
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum LogLevel {
    Error,
    Info,
    Debug,
}

static LOG_LEVEL: OnceLock<LogLevel> = OnceLock::new();

fn log_level() -> LogLevel {
    *LOG_LEVEL.get_or_init(|| match std::env::var("LIFTLAB_LOG").as_deref() {
        Ok("debug") => LogLevel::Debug,
        Ok("info") => LogLevel::Info,
        _ => LogLevel::Error,
    })
}

fn info(msg: &str) {
    if log_level() >= LogLevel::Info {
        eprintln!("[info] {msg}");
    }
}

/// Build from explicit constructor parameters.
fn construct(
    spec: SurfaceSpec,
    degree: usize,
    params: &BTreeMap<String, i64>,
) -> Result<Constructed, String> {
    let fail = |e: &dyn std::fmt::Display| e.to_string();
    if spec.is_closed() {
        return closed_cover(degree, spec.genus).map_err(|e| fail(&e));
    }
    let (g, k) = (spec.genus, spec.boundary);
    if (g, k) == (0, 3) {
        let m = *params.get("m").ok_or("pants covers need --param m=..")? as usize;
        return pants_cover(degree, m).map_err(|e| fail(&e));
    }
    if g == 0 {
        let kt = *params
            .get("boundaries")
            .ok_or("planar covers need --param boundaries=..")?;
        return planar_realize(degree, k as usize, kt).map_err(|e| fail(&e));
    }
    if (g, k) == (1, 1) {
        let q = *params.get("q").ok_or("one-holed torus covers need --param q=..")? as usize;
        return one_holed_torus_cover(degree, q).map_err(|e| fail(&e));
    }
    if k == 1 {
        let q = *params.get("q").ok_or("one-boundary covers need --param q=..")? as usize;
        return one_boundary_cover(degree, g, q).map_err(|e| fail(&e));
    }
    if k == 2 {
        let u = *params.get("u").ok_or("two-boundary covers need --param u=..")? as usize;
        return two_boundary_cover(degree, g, u).map_err(|e| fail(&e));
    }
    let gt = *params.get("genus").ok_or("covers of S_{g,k>=3} need --param genus=..")?;
    many_boundary_cover(degree, g, k, gt).map_err(|e| fail(&e))
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Surface { surface, dot } => {
            let graph = home_graph(surface.surface).map_err(|e| e.to_string())?;
            if dot {
                print!("{}", graph.to_dot());
            } else {
                println!("{}", serde_json::to_string_pretty(&graph).unwrap());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cover { action } => match action {
            CoverAction::Build { surface, degree, params } => {
                let params: BTreeMap<String, i64> = params.into_iter().collect();
                let built = construct(surface.surface, degree, &params)?;
                let graph = home_graph(surface.surface).map_err(|e| e.to_string())?;
                let inv = validate_rep(&graph, &built.rep).map_err(|e| e.to_string())?;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "surface": surface.surface,
                        "rep": built.rep,
                        "provenance": built.provenance,
                        "cover": inv,
                    }))
                    .unwrap()
                );
                Ok(ExitCode::SUCCESS)
            }
            CoverAction::Targets { surface, degree } => {
                if degree < 2 || surface.surface.chi() >= 0 {
                    return Err("need degree >= 2 and chi < 0".into());
                }
                let targets = admissible_targets(surface.surface, degree);
                println!("{}", serde_json::to_string_pretty(&targets).unwrap());
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Selfint { surface, word, curve } => {
            let graph = home_graph(surface.surface).map_err(|e| e.to_string())?;
            let w = match (word, curve) {
                (Some(text), None) => {
                    CyclicWord::parse(&text, &graph.alphabet()).map_err(|e| e.to_string())?
                }
                (None, Some(spec)) => {
                    let (family, param) = liftlab_core::curves::parse_family_spec(&spec)
                        .ok_or("bad family spec; use name:param, e.g. eta:3")?;
                    let (w, _) = liftlab_core::curves::family_word(family, param, surface.surface)
                        .map_err(|e| e.to_string())?;
                    w
                }
                _ => return Err("pass exactly one of --word or --curve".into()),
            };
            let path = ClosedPath::from_word(&graph, &w).map_err(|e| e.to_string())?;
            let certificate = if vertex_simple_certificate(&graph, &path) {
                "vertex-simple"
            } else {
                "chord-engine"
            };
            let i = self_intersection(&graph, &w).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string(&json!({
                    "word": w.to_string(),
                    "length": w.len(),
                    "i": i,
                    "simple": i == 0,
                    "certificate_used": certificate,
                }))
                .unwrap()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Lift { surface, degree, params, word, sheet } => {
            let params: BTreeMap<String, i64> = params.into_iter().collect();
            let built = construct(surface.surface, degree, &params)?;
            let graph = home_graph(surface.surface).map_err(|e| e.to_string())?;
            let w = CyclicWord::parse(&word, &graph.alphabet()).map_err(|e| e.to_string())?;
            let complex = build_cover(&graph, &built.rep).map_err(|e| e.to_string())?;
            let lifted = lift_path(&complex, &w, sheet).map_err(|e| e.to_string())?;
            let path =
                ClosedPath::new(&complex.total, lifted.path.clone()).map_err(|e| e.to_string())?;
            let lift_i = liftlab_core::selfint::self_intersection_path(&complex.total, &path)
                .map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "start_sheet": lifted.start_sheet,
                    "degree": lifted.degree,
                    "path": lifted.path,
                    "lift_i": lift_i,
                }))
                .unwrap()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { surface, word, depth } => {
            let graph = home_graph(surface.surface).map_err(|e| e.to_string())?;
            let w = CyclicWord::parse(&word, &graph.alphabet()).map_err(|e| e.to_string())?;
            let r = oracle_self_intersection(&graph, &w, depth).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string(&r).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { surface, degree, target_boundaries, target_genus, all_targets } => {
            let spec = surface.surface;
            if degree < 2 || spec.chi() >= 0 {
                return Err("need degree >= 2 and chi < 0".into());
            }
            let targets: Vec<AdmissibleTarget> = if all_targets {
                admissible_targets(spec, degree)
            } else if let Some(k) = target_boundaries {
                vec![AdmissibleTarget::Boundaries(k)]
            } else if let Some(g) = target_genus {
                vec![AdmissibleTarget::Genus(g)]
            } else {
                admissible_targets(spec, degree)
            };
            let mut certs = Vec::new();
            let mut all_pass = true;
            for t in targets {
                info(&format!("verifying {spec} degree {degree} target {t:?}"));
                let cert = verify_instance(spec, degree, t).map_err(|e| e.to_string())?;
                all_pass &= cert.pass;
                certs.push(cert);
            }
            println!("{}", serde_json::to_string_pretty(&certs).unwrap());
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::VerifyGrid { max_g, max_k, max_n, include_closed, jobs } => {
            let bounds = GridBounds {
                max_genus: max_g,
                max_boundary: max_k,
                max_degree: max_n,
                include_closed,
            };
            let report = verify_all(bounds, jobs).map_err(|e| e.to_string())?;
            for c in &report.certificates {
                info(&format!(
                    "{} n={} {:?}: {}",
                    c.surface,
                    c.degree,
                    c.target,
                    if c.pass { "pass" } else { "FAIL" }
                ));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "pass": report.pass_count,
                    "fail": report.fail_count,
                    "certificates": report.certificates,
                }))
                .unwrap()
            );
            Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Mindeg { surface, word, max_degree } => {
            let graph = home_graph(surface.surface).map_err(|e| e.to_string())?;
            let w = CyclicWord::parse(&word, &graph.alphabet()).map_err(|e| e.to_string())?;
            let r = mindeg_search(surface.surface, &w, max_degree).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string_pretty(&r).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Emit { surface, degree, params, json: json_path, dot } => {
            let graph = home_graph(surface.surface).map_err(|e| e.to_string())?;
            let graph = match degree {
                Some(n) => {
                    let params: BTreeMap<String, i64> = params.into_iter().collect();
                    let built = construct(surface.surface, n, &params)?;
                    build_cover(&graph, &built.rep).map_err(|e| e.to_string())?.total
                }
                None => graph,
            };
            let (path, payload) = if let Some(p) = json_path {
                (p, serde_json::to_string_pretty(&graph).unwrap() + "\n")
            } else if let Some(p) = dot {
                (p, graph.to_dot())
            } else {
                return Err("emit needs --json PATH or --dot PATH".into());
            };
            if path.as_os_str() == "-" {
                print!("{payload}");
            } else {
                std::fs::File::create(&path)
                    .and_then(|mut f| f.write_all(payload.as_bytes()))
                    .map_err(|e| e.to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
