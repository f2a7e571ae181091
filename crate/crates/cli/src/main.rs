use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use irp_dg::euler::InvariantRegion;
use irp_dg::harness::config::{parse_domain, parse_primitive, resolve_output};
use irp_dg::harness::csv::{self, SampleDensity};
use irp_dg::harness::{convergence_study, run, RunConfig};
use irp_dg::riemann::{exact_state, solve_star, RiemannProblem};
use irp_dg::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_ABORT: u8 = 3;

#[derive(Parser)]
#[command(name = "irpdg", version, about = "DG solver for the 1D Euler equations with an invariant-region-preserving limiter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write the solution at the Lobatto nodes.
    Solve(RunArgs),
    /// Run a mesh-refinement study and write the error table.
    Converge {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated cell counts, each double the previous.
        #[arg(long, default_value = "8,16,32,64,128")]
        cells_list: String,
    },
    /// Sample the exact Riemann solution on a uniform grid.
    RiemannExact(ExactArgs),
    /// Run a simulation and write its per-step diagnostics.
    Diagnose(RunArgs),
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// key = value file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// smooth_advection, lax, shu_osher or custom-riemann.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    degree: Option<String>,
    #[arg(long)]
    cells: Option<String>,
    /// none, positivity or irp.
    #[arg(long)]
    limiter: Option<String>,
    /// rk3 or ms3.
    #[arg(long)]
    integrator: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    tfinal: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    /// per_stage or per_step.
    #[arg(long)]
    placement: Option<String>,
    /// Left state `rho,u,p` (custom-riemann only).
    #[arg(long, allow_hyphen_values = true)]
    left: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    right: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// `a,b` (custom-riemann only).
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    /// Output file; `-` writes to stdout.
    #[arg(long)]
    out: Option<String>,
}

impl RunArgs {
    fn build(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path).map_err(|e| Error::Config(e.to_string()))?,
            None => RunConfig::default(),
        };
        let pairs = [
            ("problem", &self.problem),
            ("degree", &self.degree),
            ("cells", &self.cells),
            ("limiter", &self.limiter),
            ("integrator", &self.integrator),
            ("cfl", &self.cfl),
            ("tfinal", &self.tfinal),
            ("gamma", &self.gamma),
            ("eps", &self.eps),
            ("placement", &self.placement),
            ("left", &self.left),
            ("right", &self.right),
            ("x0", &self.x0),
            ("domain", &self.domain),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "1,0,1")]
    left: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.125,0,0.1")]
    right: String,
    #[arg(long, default_value_t = irp_dg::euler::DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long, default_value_t = 0.2)]
    time: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "-1,1")]
    domain: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    x0: f64,
    /// Number of equispaced sample points, endpoints included.
    #[arg(long, default_value_t = 401)]
    samples: usize,
    #[arg(long)]
    out: Option<String>,
}

fn write_output(out: Option<&str>, default: &str, text: &str) -> Result<(), Error> {
    match out.unwrap_or(default) {
        "-" => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
        path => {
            let path = resolve_output(path.as_ref());
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.into(), source })?;
            }
            std::fs::write(&path, text).map_err(|source| Error::Io { path, source })
        }
    }
}

fn solve(args: &RunArgs) -> Result<(), Error> {
    let cfg = args.build()?;
    let out = run(&cfg)?;
    let evo = &out.evolution;
    let text = csv::solution_csv(out.field(), &out.mesh, &out.region, &evo.last_reports, &SampleDensity::TestNodes);
    write_output(args.out.as_deref(), "solution.csv", &text)?;
    eprintln!(
        "{}: k={} N={} steps={} t={} min_entropy={:.12e} s0={:.12e}",
        cfg.problem.name(),
        cfg.degree,
        cfg.n_cells,
        evo.steps(),
        out.t_final,
        evo.min_average_entropy(),
        out.s0
    );
    Ok(())
}

fn diagnose(args: &RunArgs) -> Result<(), Error> {
    let cfg = args.build()?;
    let out = run(&cfg)?;
    write_output(args.out.as_deref(), "-", &csv::diagnostics_csv(&out.evolution.diagnostics))
}

fn converge(args: &RunArgs, cells_list: &str) -> Result<(), Error> {
    let cfg = args.build()?;
    let cells = irp_dg::harness::config::parse_cells_list(cells_list)?;
    let table = convergence_study(&cfg, &cells)?;
    write_output(args.out.as_deref(), "-", &csv::table_csv(&table.rows))?;
    match table.failure {
        Some((n_cells, message)) => Err(Error::Aborted {
            step: 0,
            t: 0.0,
            source: Box::new(Error::InvalidArgument(format!("run with {n_cells} cells: {message}"))),
        }),
        None => Ok(()),
    }
}

fn riemann_exact(args: &ExactArgs) -> Result<(), Error> {
    let left = parse_primitive("left", &args.left)?;
    let right = parse_primitive("right", &args.right)?;
    let (a, b) = parse_domain("domain", &args.domain)?;
    if !(args.time > 0.0) {
        return Err(Error::Config(format!("time must be positive, got {}", args.time)));
    }
    if args.samples < 2 {
        return Err(Error::Config("samples must be at least 2".into()));
    }
    InvariantRegion::new(args.gamma, 0.0, 1.0).map_err(|e| Error::Config(e.to_string()))?;
    let problem = RiemannProblem::new(left, right, args.gamma, args.x0).map_err(|e| Error::Config(e.to_string()))?;
    let star = solve_star(&problem)?;
    let rows: Vec<_> = (0..args.samples)
        .map(|i| {
            let x = a + (b - a) * i as f64 / (args.samples - 1) as f64;
            (x, exact_state(&problem, &star, x, args.time))
        })
        .collect();
    write_output(args.out.as_deref(), "riemann_exact.csv", &csv::exact_csv(&rows, args.gamma))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::Io { .. } | Error::Vacuum => EXIT_CONFIG,
        _ => EXIT_ABORT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Converge { run, cells_list } => converge(run, cells_list),
        Command::RiemannExact(a) => riemann_exact(a),
        Command::Diagnose(a) => diagnose(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
