use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subelliptic::eigen::Spectrum;
use subelliptic::pipeline::{self, PipelineError, Resolved, RunConfig};
use subelliptic::spectral;

#[derive(Parser)]
#[command(version, about = "Spectra of sums of squares of Hörmander vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Indices, Métivier layers, |H| and condition (A); no assembly.
    Analyze(Common),
    /// Build the grid and operator and print its statistics.
    Assemble(Common),
    /// Lowest K eigenvalues, written to spectrum.csv.
    Eigs(Common),
    /// Heat trace over the valid window, written to trace.csv.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Reuse an existing spectrum CSV instead of solving.
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Run every requested check and print the report.
    Verify(Common),
    /// Full pipeline with all artifacts.
    Run(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, conflicts_with = "bundled")]
    config: Option<PathBuf>,
    #[arg(long)]
    bundled: Option<String>,
    /// Intervals per axis, one value or one per axis (comma separated).
    #[arg(long, value_delimiter = ',')]
    resolution: Option<Vec<usize>>,
    #[arg(short = 'k')]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated check names overriding the defaults.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Exit with status 3 on a characteristic boundary.
    #[arg(long)]
    strict: bool,
}

impl Common {
    fn resolve(&self) -> Result<Resolved, PipelineError> {
        let mut cfg = match (&self.config, &self.bundled) {
            (Some(p), _) => RunConfig::from_path(p)?,
            (None, Some(name)) => RunConfig::bundled(name),
            (None, None) => return Err(PipelineError::Schema("one of --config or --bundled is required".into())),
        };
        if let Some(r) = &self.resolution {
            cfg.resolution = Some(r.clone());
        }
        if self.k.is_some() {
            cfg.k = self.k;
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.out.is_some() {
            cfg.output_dir = self.out.clone();
        }
        if self.checks.is_some() {
            cfg.checks = self.checks.clone();
        }
        cfg.strict |= self.strict;
        pipeline::resolve(&cfg)
    }
}

fn solve(r: &Resolved) -> Result<Spectrum, PipelineError> {
    let (grid, a) = pipeline::assemble(r)?;
    pipeline::solve(r, &grid, &a)
}

fn print_checks(report: &pipeline::RunReport) {
    for c in &report.checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        let fitted: Vec<String> = c.fitted.iter().map(|(k, v)| format!("{k}={v:.4}")).collect();
        println!("{status:4}  {:32} {}", c.name, fitted.join(" "));
    }
    println!("{}", if report.pass { "all checks pass" } else { "some checks failed" });
}

fn dispatch(cmd: Command) -> Result<bool, PipelineError> {
    match cmd {
        Command::Analyze(c) => {
            let r = c.resolve()?;
            let (analysis, _) = pipeline::fields_analyze(&r)?;
            let json = pipeline::to_json(&analysis)?;
            if c.out.is_some() {
                fs::create_dir_all(&r.output_dir)?;
                fs::write(r.output_dir.join("analysis.json"), &json)?;
            }
            print!("{json}");
            Ok(true)
        }
        Command::Assemble(c) => {
            let r = c.resolve()?;
            let (grid, a) = pipeline::assemble(&r)?;
            println!(
                "nodes={} nnz={} bandwidth={} asymmetry={:e} norm_inf={:.6e} volume_element={:.6e}",
                grid.len(),
                a.nnz(),
                a.bandwidth(),
                a.asymmetry(),
                a.norm_inf(),
                a.volume_element()
            );
            if c.out.is_some() {
                fs::create_dir_all(&r.output_dir)?;
                a.write_coordinate(fs::File::create(r.output_dir.join("operator.mtx"))?)?;
            }
            Ok(true)
        }
        Command::Eigs(c) => {
            let r = c.resolve()?;
            let spec = solve(&r)?;
            fs::create_dir_all(&r.output_dir)?;
            spec.write_csv(fs::File::create(r.output_dir.join("spectrum.csv"))?)?;
            for (i, (l, res)) in spec.values.iter().zip(&spec.residuals).enumerate().take(10) {
                println!("{:>5} {l:.10} {res:.2e}", i + 1);
            }
            if spec.len() > 10 {
                println!(
                    "  ... {} eigenvalues in {}",
                    spec.len(),
                    r.output_dir.join("spectrum.csv").display()
                );
            }
            Ok(true)
        }
        Command::Trace { common, spectrum } => {
            let r = common.resolve()?;
            let spec = match spectrum {
                Some(p) => Spectrum::read_csv(std::io::BufReader::new(fs::File::open(p)?))?,
                None => solve(&r)?,
            };
            let t = spectral::heat_trace_span(&spec, 200).map_err(|e| PipelineError::Failed(e.to_string()))?;
            fs::create_dir_all(&r.output_dir)?;
            t.write_csv(fs::File::create(r.output_dir.join("trace.csv"))?)?;
            let (lo, hi) = t.valid_window;
            match spectral::trace_exponent_fit(&t) {
                Ok(f) => println!(
                    "window=[{lo:.4e}, {hi:.4e}] exponent={:.4} amplitude={:.4e}",
                    f.exponent, f.amplitude
                ),
                Err(e) => println!("window=[{lo:.4e}, {hi:.4e}] fit unavailable: {e}"),
            }
            Ok(true)
        }
        Command::Verify(c) => {
            let r = c.resolve()?;
            let (report, _) = pipeline::execute(&r)?;
            print_checks(&report);
            Ok(report.pass)
        }
        Command::Run(c) => {
            let r = c.resolve()?;
            let (report, spec) = pipeline::execute(&r)?;
            pipeline::write_artifacts(&r.output_dir, &report, &spec)?;
            print_checks(&report);
            println!("artifacts in {}", r.output_dir.display());
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
