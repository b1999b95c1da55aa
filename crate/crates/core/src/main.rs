use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crjet::cli::report::envelope;
use crjet::cli::{self, catalog, check_entry, render, CliError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "crjet", version, about = "Jets of CR maps: invariants, Segre maps, jet parametrization and reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Levi form, Hörmander numbers, nondegeneracy and the derived orders.
    Analyze,
    /// Segre chain, rank table, δ, η₀ and m.
    Segre,
    /// Jet parametrization artifact for a jet file.
    Parametrize,
    /// Reconstruct a map on a grid from its jet at the base point.
    Reconstruct,
    /// List the built-in models and their expected invariants.
    Catalog,
    /// Check every catalog annotation against the pipeline.
    Selftest,
}

#[derive(Args)]
struct Opts {
    /// Model file or catalog name; repeat for the target model.
    #[arg(long, global = true)]
    model: Vec<String>,
    #[arg(long, global = true)]
    kappa: Option<u32>,
    #[arg(long, global = true, default_value_t = 6)]
    lmax: u32,
    #[arg(long, global = true)]
    s: Option<usize>,
    #[arg(long, global = true)]
    k: Option<u32>,
    #[arg(long, global = true)]
    jet: Option<String>,
    /// Parametrize artifact to rebuild the complete system from.
    #[arg(long, global = true)]
    system: Option<String>,
    /// Grid radius and spacing, e.g. `1/10,1/10`.
    #[arg(long, global = true, default_value = "1/10,1/10")]
    grid: String,
    #[arg(long, global = true, default_value = "1/1000")]
    step: String,
    /// Acceptance threshold for reconstruction residuals.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, default_value = "json")]
    format: Format,
}

impl Opts {
    fn config(self) -> Result<RunConfig, CliError> {
        let (radius, spacing) = self
            .grid
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("--grid expects `radius,spacing`, got `{}`", self.grid)))?;
        Ok(RunConfig {
            models: self.model,
            kappa: self.kappa,
            l_max: self.lmax,
            s: self.s,
            k: self.k,
            jet: self.jet,
            system: self.system,
            grid: (radius.trim().into(), spacing.trim().into()),
            step: self.step,
            tol: self.tol,
            seed: self.seed,
            out: self.out,
            format: self.format,
        })
    }
}

#[derive(Serialize)]
struct EntryResult {
    name: String,
    ok: bool,
    checks: Vec<cli::AnnotationCheck>,
    error: Option<String>,
}

#[derive(Serialize)]
struct Selftest {
    ok: bool,
    entries: Vec<EntryResult>,
}

fn emit<T: Serialize>(cfg: &RunConfig, command: &str, body: &T) -> Result<(), CliError> {
    let text = render(&envelope(command, body), cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command, cfg: &RunConfig) -> Result<(), CliError> {
    let model = || {
        let spec = cfg.models.first().ok_or_else(|| CliError::Usage("--model is required".into()))?;
        cli::load_model(spec, cfg.kappa)
    };
    match command {
        Command::Analyze => emit(cfg, "analyze", &cli::analyze(&model()?, cfg.l_max)?),
        Command::Segre => emit(cfg, "segre", &cli::segre(&model()?, cfg.s, cfg.seed)?),
        Command::Parametrize => emit(cfg, "parametrize", &cli::parametrize(cfg)?),
        Command::Reconstruct => {
            let samples = cli::reconstruct(cfg)?;
            let worst = samples.iter().map(|s| s.jet_residuals).fold(0.0, f64::max);
            if worst > cfg.tol {
                eprintln!("warning: largest jet residual {worst:.3e} exceeds --tol {:.1e}", cfg.tol);
            }
            let text = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&samples).expect("samples serialize") + "\n",
                Format::Text => render(&samples, Format::Text),
            };
            match &cfg.out {
                Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {path}: {e}"))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Catalog => {
            #[derive(Serialize)]
            struct Listing {
                entries: &'static [cli::CatalogEntry],
            }
            emit(cfg, "catalog", &Listing { entries: catalog() })
        }
        Command::Selftest => {
            let mut entries = Vec::new();
            for e in catalog().iter().filter(|e| cfg.models.is_empty() || cfg.models.iter().any(|m| m == e.name)) {
                let r = check_entry(e, cfg.l_max, cfg.seed);
                let (checks, error) = match r {
                    Ok(c) => (c, None),
                    Err(err) => (Vec::new(), Some(err.to_string())),
                };
                let ok = error.is_none() && checks.iter().all(|c| c.ok);
                entries.push(EntryResult { name: e.name.into(), ok, checks, error });
            }
            let report = Selftest { ok: entries.iter().all(|e| e.ok), entries };
            emit(cfg, "selftest", &report)?;
            if report.ok {
                Ok(())
            } else {
                Err(CliError::math("selftest", "catalog annotations disagree with the pipeline"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = cli.opts.config().and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
