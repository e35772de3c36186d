use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "isingform", version, about = "Integral forms in tensor powers of the Ising VOA")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "ISINGFORM_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Binary code checks.
    #[command(subcommand)]
    Codes(CodesCommand),
    /// Virasoro module data.
    #[command(subcommand)]
    Vir(VirCommand),
    /// Integral forms level by level.
    #[command(subcommand)]
    Form(FormCommand),
    /// Gram matrix and graded dual of one level.
    Dual(DualArgs),
    /// Intertwining-operator coefficients from a lowest coefficient.
    Corr(CorrArgs),
    /// Weight-one counts.
    #[command(subcommand)]
    E8(E8Command),
    /// Integrality hypothesis for a decomposition and a lowest-coefficient table.
    Framed(FramedArgs),
}

#[derive(Subcommand, Debug)]
pub enum CodesCommand {
    /// Generating conditions, Type II and self-duality, weight distribution.
    Check {
        #[arg(long)]
        code: String,
    },
    /// Print the full code in the text code format.
    Build {
        #[arg(long)]
        code: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum VirCommand {
    /// Graded dimensions of L(c, h).
    Dims {
        #[arg(long, default_value = "1/2")]
        c: String,
        #[arg(long, default_value = "0")]
        h: String,
        /// Use every weight of the (p,q) minimal model, e.g. `3,4`.
        #[arg(long)]
        minimal: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
    },
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    /// Tensor power; defaults to the code length.
    #[arg(long)]
    pub power: Option<usize>,
    #[arg(long)]
    pub code: String,
    /// Comma-separated weights from {0, 1/2, 1/16}; defaults to the vacuum.
    #[arg(long = "H")]
    pub h: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum FormCommand {
    /// Rank of the code-generated form at each level, plus omega checks.
    Verify {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
    },
    /// Saturate the form generated by weight-two vectors of the vacuum module.
    Generated {
        /// `omega`, `omega_i:<i>` or `omega_T:<bits>`, optionally with a
        /// rational prefix such as `2omega`. Repeatable.
        #[arg(long = "gen")]
        generators: Vec<String>,
        #[arg(long, default_value_t = 1)]
        power: usize,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
        #[arg(long, default_value_t = 8)]
        mode_budget: usize,
    },
}

#[derive(Args, Debug)]
pub struct DualArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    #[arg(long)]
    pub level: usize,
    /// Also compare the form with its dual.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Args, Debug)]
pub struct CorrArgs {
    #[arg(long = "H1")]
    pub h1: String,
    #[arg(long = "H2")]
    pub h2: String,
    #[arg(long = "H3")]
    pub h3: String,
    #[arg(long)]
    pub code: String,
    /// Lowest coefficient.
    #[arg(long, default_value = "1")]
    pub c: String,
    #[arg(long, default_value_t = 4)]
    pub max_level: usize,
    /// Skip the well-definedness checks.
    #[arg(long)]
    pub no_checks: bool,
}

#[derive(Subcommand, Debug)]
pub enum E8Command {
    /// Weight-one dimension of the code-indexed decomposition of V_E8.
    Weight1,
}

#[derive(Args, Debug)]
pub struct FramedArgs {
    #[arg(long)]
    pub code: String,
    /// TSV lines `H1<TAB>H2<TAB>H3<TAB>c`.
    #[arg(long)]
    pub table: PathBuf,
    /// Summands as `H` or `H*multiplicity`, separated by `;`. Defaults to
    /// every even-support H in {0,1/2}^n.
    #[arg(long)]
    pub decomposition: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub max_level: usize,
}

/// Rendered output of one command.
pub struct Output {
    pub json: serde_json::Value,
    pub tsv: String,
    pub pretty: String,
    /// False when a mathematical check failed.
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Codes(c) => commands::codes(c),
        Command::Vir(VirCommand::Dims { c, h, minimal, max_level }) => commands::vir_dims(c, h, minimal.as_deref(), *max_level),
        Command::Form(FormCommand::Verify { module, max_level }) => commands::form_verify(module, *max_level),
        Command::Form(FormCommand::Generated {
            generators,
            power,
            max_level,
            mode_budget,
        }) => commands::form_generated(generators, *power, *max_level, *mode_budget),
        Command::Dual(args) => commands::dual(args),
        Command::Corr(args) => commands::corr(args),
        Command::E8(E8Command::Weight1) => Ok(commands::e8_weight1()),
        Command::Framed(args) => commands::framed(args),
    };
    let output = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&output.json).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Tsv => output.tsv,
        Format::Pretty => output.pretty,
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if output.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
