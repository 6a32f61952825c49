use std::io::Read;
use std::process::ExitCode;

use clap::Parser;

use rees_blowup::ring::MonomialOrder;
use rees_blowup_cli::{format_records, run_script, Options};

/// Script interpreter for exact Rees-algebra and blow-up computations.
///
/// Reads a script from FILE (or stdin when omitted or `-`) and executes it
/// statement by statement. Exit codes: 0 success, 2 script error, 3 I/O
/// error.
#[derive(Parser)]
#[command(name = "rees-blowup", version)]
struct Cli {
    /// Script file; `-` or absent reads stdin.
    script: Option<String>,

    /// Emit one JSON object per statement instead of text.
    #[arg(long)]
    json: bool,

    /// Default coefficient field: QQ or Fp:<p>.
    #[arg(long, default_value = "QQ")]
    field: String,

    /// Degree bound for bounded reports (pieces, comparisons, splits).
    #[arg(long, default_value_t = 5)]
    bound: i64,

    /// Monomial order used for gb/nf output: lex or grevlex.
    #[arg(long, default_value = "grevlex")]
    order: String,

    /// Test every permutation in regseq, not just the given order.
    #[arg(long)]
    permutations: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let field = match rees_blowup_cli::session_field(&cli.field) {
        Ok(f) => f,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let order = match cli.order.as_str() {
        "lex" => MonomialOrder::Lex,
        "grevlex" => MonomialOrder::GrevLex,
        other => {
            eprintln!("error: unknown order `{other}` (use lex or grevlex)");
            return ExitCode::from(2);
        }
    };
    let options = Options {
        json: cli.json,
        field,
        bound: cli.bound,
        order,
        permutations: cli.permutations,
    };

    let input = match cli.script.as_deref() {
        None | Some("-") => {
            let mut buffer = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut buffer) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            buffer
        }
        Some(path) => match std::fs::read_to_string(path) {
            Ok(contents) => contents,
            Err(e) => {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(3);
            }
        },
    };

    match run_script(&input, &options) {
        Ok(records) => {
            print!("{}", format_records(&records, options.json));
            ExitCode::SUCCESS
        }
        Err(script_error) => {
            eprintln!("error: {script_error}");
            ExitCode::from(2)
        }
    }
}
