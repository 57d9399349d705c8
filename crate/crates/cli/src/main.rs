use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use regge_core::catalog::{self, a0_sweep, theta_grid, OctSection};
use regge_core::complex::Triangulation3;
use regge_core::error::{Error, Result};
use regge_core::io::{parse_model, parse_script, triangulation_to_json, write_off, Model};
use regge_core::moves::{apply_script, StepReport};
use regge_core::pipeline::{analyze, error_exit_code, AnalysisConfig, Source};
use regge_core::regge::HessianOptions;
use regge_core::rigidity::{flex_space, surface_flat_vertices, FlexSpace, Framework};
use regge_core::tol;

#[derive(Parser)]
#[command(name = "regge", version, about = "Regge Hessians, rigidity and moves of triangulated polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// OFF boundary or JSON triangulation.
    path: Option<PathBuf>,
    /// Built-in model instead of a file (see `regge catalog list`).
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Args, Clone, Copy)]
struct NumericArgs {
    /// Relative threshold under which eigenvalues count as zero.
    #[arg(long, default_value_t = tol::ZERO_EIGENVALUE)]
    zero_threshold: f64,
    /// Finite-difference step relative to the local length scale of each edge.
    #[arg(long, default_value_t = tol::FD_STEP)]
    fd_step: f64,
}

impl NumericArgs {
    fn options(&self) -> HessianOptions {
        HessianOptions { fd_step: self.fd_step, zero_threshold: self.zero_threshold }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpFormat {
    Json,
    Off,
    Triangulation,
}

#[derive(Subcommand)]
enum Command {
    /// Validate, compute the census, M_T and its signature, and the boundary rigidity.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Cone the boundary from this vertex.
        #[arg(long)]
        cone_apex: Option<usize>,
        /// Only analyze the boundary framework.
        #[arg(long)]
        boundary_only: bool,
        /// Include wall-clock metadata (breaks byte-identical output).
        #[arg(long)]
        timestamps: bool,
        /// Emit JSON (the default).
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a move script and report the change of M_T after each step.
    Move {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        /// JSON list of {kind, cell, point}.
        #[arg(long)]
        script: PathBuf,
        /// Where to write the final triangulation.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the report (default: stdout).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cross-section areas of the twisted octahedra over a range of angles.
    Octsweep {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        theta_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = catalog::THETA_MAX - 1e-3)]
        theta_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Infinitesimal flexes of the boundary framework.
    Flex {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Shorthand for `--format csv`: singular values only.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in models.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Dump {
        name: String,
        #[arg(long, value_enum, default_value = "json")]
        format: DumpFormat,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn source(input: &InputArgs) -> Result<Source> {
    match (&input.path, &input.catalog) {
        (Some(p), None) => Ok(Source::File { path: p.display().to_string(), bytes: fs::read(p)? }),
        (None, Some(name)) => Ok(Source::Catalog(name.clone())),
        _ => Err(Error::Parse { line: 0, msg: "give exactly one of a path or --catalog".into() }),
    }
}

fn load_triangulation(input: &InputArgs) -> Result<Triangulation3> {
    match source(input)? {
        Source::Catalog(name) => catalog::builtin(&name)?
            .triangulation
            .ok_or_else(|| Error::Validation(format!("catalog entry `{name}` has no triangulation"))),
        Source::File { bytes, .. } => {
            let text = String::from_utf8_lossy(&bytes);
            match parse_model(&text)? {
                Model::Tets(t) => Ok(t),
                Model::Boundary(_) => Err(Error::Validation("a tet triangulation is required".into())),
            }
        }
    }
}

fn load_boundary(input: &InputArgs) -> Result<regge_core::geometry::ClosedSurface> {
    let s = match source(input)? {
        Source::Catalog(name) => catalog::builtin(&name)?.boundary,
        Source::File { bytes, .. } => match parse_model(&String::from_utf8_lossy(&bytes))? {
            Model::Boundary(off) => off.surface()?,
            Model::Tets(t) => t.boundary_surface()?,
        },
    };
    let mut s = s.compacted().0;
    s.orient_outward()?;
    Ok(s)
}

#[derive(Serialize)]
struct MoveReport {
    initial_hash: String,
    final_hash: String,
    steps: Vec<StepReport>,
    consistent: bool,
}

fn cmd_move(input: &InputArgs, numeric: &NumericArgs, script: &PathBuf, out: &Option<PathBuf>, report: &Option<PathBuf>) -> Result<i32> {
    let t = load_triangulation(input)?;
    let steps = parse_script(&fs::read_to_string(script)?)?;
    let (last, reports) = match apply_script(&t, &steps, &numeric.options()) {
        Ok(r) => r,
        Err((i, e)) => {
            eprintln!("step {i}: {e}");
            return Ok(error_exit_code(&e));
        }
    };
    let consistent = reports.iter().all(|r| r.transport.consistent);
    let r = MoveReport { initial_hash: t.canonical_hash(), final_hash: last.canonical_hash(), steps: reports, consistent };
    let mut text = serde_json::to_string_pretty(&r)?;
    text.push('\n');
    emit(report, &text)?;
    if let Some(p) = out {
        fs::write(p, triangulation_to_json(&last) + "\n")?;
    }
    Ok(if consistent { 0 } else { 1 })
}

fn sweep_csv(rows: &[OctSection]) -> String {
    let mut s = String::from("theta,A_minus1,A_0,A_1,four_A0_minus_ends\n");
    for r in rows {
        s.push_str(&format!("{:?},{:?},{:?},{:?},{:?}\n", r.theta, r.a_minus, r.a0, r.a_plus, r.margin));
    }
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    let tail = &rows[rows.len() / 2..];
    let tail_decreasing = tail.windows(2).all(|w| w[1].a0 < w[0].a0);
    s.push_str(&format!("# A_0 strictly decreasing over the second half of the sweep: {tail_decreasing}\n"));
    if first.a0 > 0.0 {
        s.push_str(&format!("# A_0(last) / A_0(first) = {:e}\n", last.a0 / first.a0));
    }
    match rows.windows(2).find(|w| (w[0].margin >= 0.0) != (w[1].margin >= 0.0)) {
        Some(w) => s.push_str(&format!(
            "# 4A_0 - A_-1 - A_1 changes sign between theta = {:?} and theta = {:?}\n",
            w[0].theta, w[1].theta
        )),
        None => s.push_str("# 4A_0 - A_-1 - A_1 does not change sign\n"),
    }
    s
}

#[derive(Serialize)]
struct FlexDump<'a> {
    flat_vertices: Vec<usize>,
    #[serde(flatten)]
    flex: &'a FlexSpace,
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze { input, numeric, cone_apex, boundary_only, timestamps, json: _, out } => {
            let config = AnalysisConfig { hessian: numeric.options(), boundary_only, cone_apex, timestamps };
            let report = analyze(&source(&input)?, &config)?;
            emit(&out, &report.to_json())?;
            Ok(report.exit_code)
        }
        Command::Move { input, numeric, script, out, report } => cmd_move(&input, &numeric, &script, &out, &report),
        Command::Octsweep { theta_min, theta_max, steps, out } => {
            let rows = a0_sweep(&theta_grid(theta_min, theta_max, steps)?)?;
            emit(&out, &sweep_csv(&rows))?;
            Ok(0)
        }
        Command::Flex { input, format, csv, out } => {
            let s = load_boundary(&input)?;
            let fs = flex_space(&Framework::from_surface(&s)?)?;
            let text = if csv || format == Format::Csv {
                fs.singular_values_csv()
            } else {
                let flat = surface_flat_vertices(&s).into_iter().map(|(v, _)| v).collect();
                serde_json::to_string_pretty(&FlexDump { flat_vertices: flat, flex: &fs })? + "\n"
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::List } => {
            for name in catalog::NAMES {
                println!("{name}");
            }
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::Dump { name, format } } => {
            let e = catalog::builtin(&name)?;
            let text = match format {
                DumpFormat::Json => serde_json::to_string_pretty(&e.dump())? + "\n",
                DumpFormat::Off => write_off(&e.boundary.points, &e.faces),
                DumpFormat::Triangulation => match &e.triangulation {
                    Some(t) => triangulation_to_json(t) + "\n",
                    None => return Err(Error::Validation(format!("catalog entry `{name}` has no triangulation"))),
                },
            };
            print!("{text}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
