mod commands;
mod oeis;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::Format;

/// Default seed for every randomized check; printed with the output.
pub const DEFAULT_SEED: u64 = 20_190_612;

#[derive(Parser, Debug)]
#[command(name = "chordlab", version, about = "Chord diagrams, generating series, bijections and asymptotics")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Seed for all randomized verifications.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumKind {
    Chords,
    Tadpoles,
    Qqed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BijKind {
    Phi,
    Nabla,
    Theta,
    Lambda,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Chord,
    Bell,
    Diffeo,
    Yukawa,
    Asym,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a named generating series.
    Series {
        name: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Count (and optionally list) chord diagrams, tadpoles or quenched QED vertex graphs.
    Enumerate {
        #[arg(value_enum, default_value_t = EnumKind::Chords)]
        kind: EnumKind,
        /// Chord count, or loop number for graphs.
        #[arg(long)]
        n: usize,
        /// Print every object instead of class counts.
        #[arg(long)]
        list: bool,
        /// Restrict listings to connected / 2-connected chord diagrams or primitive graphs.
        #[arg(long)]
        class: Option<String>,
        /// Allow loop number 5 for tadpoles.
        #[arg(long)]
        extended: bool,
    },
    /// Run a bijection on a literal.
    Bijection {
        #[arg(value_enum)]
        map: BijKind,
        #[arg(long)]
        input: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Partial Bell polynomial B_{n,k} at rational arguments.
    Bell {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated rationals x_1, x_2, ...
        #[arg(long)]
        xs: String,
        /// Also check an identity (lemma1a, lemma1b, id1, id2, id3).
        #[arg(long)]
        identity: Option<String>,
    },
    /// Asymptotic expansion fit against exact counts.
    Asym {
        /// C or C2.
        model: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        terms: usize,
        /// Print the alien-derivative body instead of the fit.
        #[arg(long)]
        image: bool,
    },
    /// Tree-level amplitudes of a field diffeomorphism.
    Diffeo {
        /// Comma-separated a_0 = 1, a_1, a_2, ...
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: usize,
        /// random (uses --seed) or seed=K.
        #[arg(long)]
        kinematics: Option<String>,
    },
    /// Run verification suites; exit status is nonzero iff a check fails.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Compare a series against a local OEIS b-file.
    OeisCompare {
        name: String,
        bfile: PathBuf,
        /// OEIS id; defaults to the entry declared for the series.
        #[arg(long)]
        sequence: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Ctx { format: cli.format, seed: cli.seed, max_n: commands::max_n_from_env() };
    let result = match cli.command {
        Command::Series { name, order } => commands::series(&ctx, &name, order),
        Command::Enumerate { kind, n, list, class, extended } => {
            commands::enumerate(&ctx, kind, n, list, class.as_deref(), extended)
        }
        Command::Bijection { map, input, inverse } => commands::bijection(&ctx, map, &input, inverse),
        Command::Bell { n, k, xs, identity } => commands::bell(&ctx, n, k, &xs, identity.as_deref()),
        Command::Asym { model, n, terms, image } => commands::asym(&ctx, &model, n, terms, image),
        Command::Diffeo { a, n, kinematics } => commands::diffeo(&ctx, &a, n, kinematics.as_deref()),
        Command::Verify { suite, order } => commands::verify(&ctx, suite, order),
        Command::OeisCompare { name, bfile, sequence } => {
            commands::oeis_compare(&ctx, &name, &bfile, sequence.as_deref())
        }
    };
    let record = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match record.render() {
        Ok(s) => print!("{s}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if record.failed() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
