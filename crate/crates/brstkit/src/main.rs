use brstkit::config::{builtin, ComplexConfig, Model};
use brstkit::workbench::{run, Command, Options, Suite};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Exact BRST reductions of free-field vertex algebras.
#[derive(Parser)]
#[command(name = "brstkit", version)]
struct Cli {
    /// Config file, or a built-in name (nf4, triv, nf4x2).
    #[arg(long, global = true, default_value = "nf4")]
    config: String,
    /// Override h_max, e.g. "1" or "3/2".
    #[arg(long, global = true)]
    h_max: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report and the complex cache under this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include cohomology representatives and quartet heads.
    #[arg(long, global = true)]
    emit_witnesses: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Relative complex dimensions per (h, R, d).
    Basis,
    /// Run an invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Option<SuiteArg>,
        /// Same as `verify all`.
        #[arg(long)]
        all: bool,
    },
    /// Build (and cache) the relative complex.
    Complex {
        #[command(subcommand)]
        action: ComplexCmd,
    },
    /// Cohomology dimensions per (h, R, d).
    Cohomology,
    /// Hodge decomposition, Q-Q+ lemma and USp(2) weights.
    Hodge,
    /// Quartet decomposition of every weight slice.
    Quartets,
    Formality,
    /// Iterated cohomology over the configured partition.
    Iterated,
    /// Hall-Littlewood ring, Koszul model and HL sector.
    HlRing,
    /// Graded character of the ambient Fock space.
    Character,
}

#[derive(Subcommand)]
enum ComplexCmd {
    Build,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Algebra,
    Unitarity,
    Brst,
    Hodge,
    All,
}

fn load(spec: &str) -> Result<ComplexConfig, String> {
    let path = Path::new(spec);
    if path.exists() {
        return ComplexConfig::load(path).map_err(|e| e.to_string());
    }
    builtin(spec).ok_or_else(|| format!("no config file or built-in named {spec:?}"))
}

fn model(cli: &Cli) -> Result<Model, String> {
    let m = load(&cli.config)?.validate().map_err(|e| e.to_string())?;
    match &cli.h_max {
        Some(h) => m.with_h_max(h).map_err(|e| e.to_string()),
        None => Ok(m),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let cmd = match &cli.cmd {
        Cmd::Basis => Command::Basis,
        Cmd::Verify { suite, all } => Command::Verify(match (suite, all) {
            (_, true) | (Some(SuiteArg::All), _) | (None, false) => Suite::All,
            (Some(SuiteArg::Algebra), _) => Suite::Algebra,
            (Some(SuiteArg::Unitarity), _) => Suite::Unitarity,
            (Some(SuiteArg::Brst), _) => Suite::Brst,
            (Some(SuiteArg::Hodge), _) => Suite::Hodge,
        }),
        Cmd::Complex { action: ComplexCmd::Build } => Command::ComplexBuild,
        Cmd::Cohomology => Command::Cohomology,
        Cmd::Hodge => Command::Hodge,
        Cmd::Quartets => Command::Quartets,
        Cmd::Formality => Command::Formality,
        Cmd::Iterated => Command::Iterated,
        Cmd::HlRing => Command::HlRing,
        Cmd::Character => Command::Character,
    };
    let model = match model(&cli) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = Options { cache_dir: cli.out.as_ref().map(|d| d.join("cache")), emit_witnesses: cli.emit_witnesses, ..Options::default() };
    let report = match run(cmd, &model, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (text, ext) = match cli.format {
        Format::Json => (report.to_json(), "json"),
        Format::Csv => (report.to_csv(), "csv"),
    };
    match &cli.out {
        Some(dir) => {
            let file = dir.join(format!("{}.{ext}", cmd.file_stem()));
            if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&file, text)) {
                eprintln!("error: cannot write {}: {e}", file.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for c in report.failed() {
        eprintln!("FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
    ExitCode::from(report.exit_code() as u8)
}
