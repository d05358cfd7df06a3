use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use homnov_cli::commands::{
    self, Analysis, CheckRequest, ConstructRequest, Construction, Context, DemoRequest, Enumeration,
};
use homnov_cli::report::ReportFile;
use homnov_cli::spec::Bindings;
use homnov_core::families::Window;
use homnov_core::quadratic::HomLieMode;
use homnov_core::{Field, IdentityId, StructureKind};

/// Exact checks and constructions for Hom-Novikov and Novikov-Poisson
/// structures given by structure constants.
#[derive(Parser)]
#[command(name = "homnov", version)]
struct Cli {
    /// Field to read scalars in, overriding the file: Q, GF(p) or GF:p.
    #[arg(long, global = true)]
    field: Option<Field>,
    /// Seed for randomized sanity checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report (or, for construct, the output spec) to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Roles {
    /// Product used as the commutative associative role.
    #[arg(long)]
    dot: Option<String>,
    /// Product used as the Novikov role.
    #[arg(long)]
    star: Option<String>,
    /// Map used as the twist.
    #[arg(long)]
    alpha: Option<String>,
    /// Map used as the derivation.
    #[arg(long)]
    del: Option<String>,
    /// Bilinear form.
    #[arg(long)]
    form: Option<String>,
}

impl From<Roles> for Bindings {
    fn from(r: Roles) -> Self {
        Bindings {
            dot: r.dot,
            star: r.star,
            alpha: r.alpha,
            del: r.del,
            form: r.form,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a structure kind or single identities.
    Check {
        file: PathBuf,
        #[arg(long)]
        kind: Option<StructureKind>,
        #[arg(long = "identity")]
        identities: Vec<IdentityId>,
        /// Also run this many random trials per identity.
        #[arg(long)]
        sanity: Option<usize>,
        /// Do not require Hom twists to be multiplicative.
        #[arg(long)]
        no_morphism: bool,
        #[command(flatten)]
        roles: Roles,
    },
    /// Apply a construction and emit the resulting spec.
    Construct {
        file: PathBuf,
        #[arg(value_parser = parse_construction)]
        construction: Construction,
        /// Second operand for tensor constructions.
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        #[arg(long)]
        mode: Option<HomLieMode>,
        #[command(flatten)]
        roles: Roles,
    },
    /// center, lcs or nilpotency of the subject product.
    Analyze {
        file: PathBuf,
        #[arg(value_parser = parse_analysis)]
        what: Analysis,
        #[command(flatten)]
        roles: Roles,
    },
    /// Run a suite on a window of the laurent or indexed family.
    Demo {
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Grade window lo..hi, both ends included.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long)]
        suite: String,
    },
    /// List endomorphisms or automorphisms over a prime field.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value = "endomorphisms", value_parser = parse_enumeration)]
        what: Enumeration,
        #[command(flatten)]
        roles: Roles,
    },
}

fn parse_construction(s: &str) -> Result<Construction, String> {
    s.parse().map_err(|e: homnov_cli::CliError| e.to_string())
}

fn parse_analysis(s: &str) -> Result<Analysis, String> {
    s.parse().map_err(|e: homnov_cli::CliError| e.to_string())
}

fn parse_enumeration(s: &str) -> Result<Enumeration, String> {
    s.parse().map_err(|e: homnov_cli::CliError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        argv: std::env::args().skip(1).collect(),
        field: cli.field,
        seed: cli.seed,
    };
    let mut spec_out = false;
    let report: ReportFile = match cli.command {
        Command::Check {
            file,
            kind,
            identities,
            sanity,
            no_morphism,
            roles,
        } => commands::check(
            &ctx,
            &file,
            &CheckRequest {
                kind,
                identities,
                bindings: roles.into(),
                sanity,
                require_morphism: !no_morphism,
            },
        ),
        Command::Construct {
            file,
            construction,
            with,
            n,
            lambda,
            element,
            mode,
            roles,
        } => {
            spec_out = true;
            commands::construct(
                &ctx,
                &file,
                &ConstructRequest {
                    construction,
                    bindings: roles.into(),
                    with,
                    n,
                    lambda,
                    element,
                    mode,
                },
            )
        }
        Command::Analyze { file, what, roles } => commands::analyze(&ctx, &file, what, &roles.into()),
        Command::Demo {
            family,
            c,
            q,
            s,
            beta,
            window,
            suite,
        } => commands::demo(
            &ctx,
            &DemoRequest {
                family,
                c,
                q,
                s,
                beta,
                window,
                suite,
            },
        ),
        Command::Enumerate { file, what, roles } => commands::enumerate(&ctx, &file, what, &roles.into()),
    };
    if let Some(path) = &cli.out {
        let text = match (&report.construction_output, spec_out) {
            (Some(spec), true) => Some(spec.to_json()),
            (None, true) => None,
            (_, false) => Some(report.to_json()),
        };
        if let Some(text) = text {
            if let Err(e) = fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    }
    let text = if cli.json { report.to_json() } else { report.to_string() };
    let _ = io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(report.exit_code() as u8)
}
