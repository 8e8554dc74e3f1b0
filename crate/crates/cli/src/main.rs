use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use realclose_cli::config::BasisSection;
use realclose_cli::{run, Checks, Format, RunConfig, RunError};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(name = "realclose", version, about = "Real-closeness analysis and spectral certification of non-Hermitian Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline and write a report.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    #[command(flatten)]
    model: ModelArgs,

    /// Basis size per mode.
    #[arg(long = "N", id = "basis_n")]
    n: Option<usize>,
    /// Reference mass of the basis.
    #[arg(long)]
    m0: Option<f64>,
    /// Reference frequency of the basis.
    #[arg(long)]
    omega0: Option<f64>,
    /// Per-mode basis scales, comma separated.
    #[arg(long, value_delimiter = ',')]
    scales: Option<Vec<f64>>,
    /// Number of lowest eigenvalues compared.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Largest condition number of exp(S) accepted by the metric checks.
    #[arg(long)]
    cond_budget: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of time samples for the picture check.
    #[arg(long)]
    points: Option<usize>,

    /// `all` or a comma list of classify, closure, counterpart, similarity,
    /// spectrum, eta, picture, exchange.
    #[arg(long)]
    checks: Option<String>,
    /// Report file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the full spectrum as `index,re,im` rows.
    #[arg(long)]
    eigenvalues_csv: Option<PathBuf>,
}

/// Model parameters. Values are exact rationals given as text (`3/2`).
#[derive(Args)]
struct ModelArgs {
    /// swanson, pu_I, pu_II, general_x, general_p or custom.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    omega1: Option<String>,
    #[arg(long)]
    omega2: Option<String>,
    #[arg(long)]
    a1: Option<String>,
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    a3: Option<String>,
    /// upper or lower.
    #[arg(long)]
    branch: Option<String>,
    #[arg(long = "A")]
    a: Option<String>,
    /// Potential, as a polynomial (`1/2 x^2`) or coefficient list.
    #[arg(long = "V")]
    potential: Option<String>,
    /// Coefficients of the imaginary coupling series.
    #[arg(long)]
    series: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "K")]
    k_max: Option<u32>,
    /// Hamiltonian text for the custom kind, e.g. `(1/2,0) p0^2 + (0,1) x0^3`.
    #[arg(long)]
    hamiltonian: Option<String>,
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long)]
    variable: Option<String>,
    #[arg(long)]
    inertia: Option<String>,
    #[arg(long)]
    order: Option<u32>,
}

impl ModelArgs {
    fn overlay(&self, model: &mut Map<String, Value>) {
        let mut put = |key: &str, v: Option<Value>| {
            if let Some(v) = v {
                model.insert(key.to_string(), v);
            }
        };
        let text = |s: &Option<String>| s.clone().map(Value::String);
        put("kind", text(&self.model));
        put("hbar", text(&self.hbar));
        put("m", text(&self.m));
        put("omega", text(&self.omega));
        put("c", text(&self.c));
        put("gamma", text(&self.gamma));
        put("omega1", text(&self.omega1));
        put("omega2", text(&self.omega2));
        put("a1", text(&self.a1));
        put("a2", text(&self.a2));
        put("a3", text(&self.a3));
        put("branch", text(&self.branch));
        put("A", text(&self.a));
        put("V", text(&self.potential));
        put("series", text(&self.series));
        put("n", self.n.map(Value::from));
        put("K", self.k_max.map(Value::from));
        put("hamiltonian", text(&self.hamiltonian));
        put("modes", self.modes.map(Value::from));
        put("variable", text(&self.variable));
        put("inertia", text(&self.inertia));
        put("order", self.order.map(Value::from));
    }
}

fn assemble(args: &RunArgs) -> Result<RunConfig, RunError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    args.model.overlay(&mut cfg.model);
    cfg.basis.overlay(BasisSection {
        n: args.n,
        m0: args.m0,
        omega0: args.omega0,
        scales: args.scales.clone(),
        k: args.k,
        max_dim: args.max_dim,
        cond_budget: args.cond_budget,
        t_max: args.t_max,
        points: args.points,
    });
    if let Some(c) = &args.checks {
        cfg.checks = Checks::parse(c)?;
    }
    if args.output.is_some() {
        cfg.output.path = args.output.clone();
    }
    if args.format.is_some() {
        cfg.output.format = args.format;
    }
    if args.eigenvalues_csv.is_some() {
        cfg.output.eigenvalues_csv = args.eigenvalues_csv.clone();
    }
    Ok(cfg)
}

fn execute(args: &RunArgs) -> Result<bool, RunError> {
    let cfg = assemble(args)?;
    let result = run(&cfg)?;
    let body = match cfg.output.format.unwrap_or_default() {
        Format::Json => result.report.to_json(),
        Format::Text => result.report.to_text(),
    };
    let io = |e: std::io::Error| RunError::Config(format!("cannot write output: {e}"));
    match &cfg.output.path {
        Some(path) => fs::write(path, body).map_err(io)?,
        None => std::io::stdout().write_all(body.as_bytes()).map_err(io)?,
    }
    if let Some(path) = &cfg.output.eigenvalues_csv {
        let values = result.eigenvalues.unwrap_or_default();
        let file = fs::File::create(path).map_err(io)?;
        realclose::spectral::write_eigenvalues_csv(std::io::BufWriter::new(file), &values).map_err(io)?;
    }
    Ok(result.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match execute(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
