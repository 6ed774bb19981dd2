use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use omegader::cli::{run, RunConfig};

/// Exact derivation-type spaces of omega-Lie algebras.
#[derive(Parser, Debug)]
#[command(name = "omegader", version)]
struct Args {
    /// validate, space, dims, table, embed or verify
    command: String,
    /// Algebra name or spec file; `space` also takes `<kind> <input>`,
    /// `table` takes 1, 2 or all, `verify` takes all
    #[arg(num_args = 0..=2)]
    inputs: Vec<String>,
    /// Space kind for `space`: der, der_c, gder, gder_c, qder, qder_c,
    /// cent, cent_c, qcent, qcent_c, zder
    #[arg(long)]
    kind: Option<String>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Parameter override, e.g. alpha=3/2
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Directory holding fixture spec files
    #[arg(long, env = "OMEGADER_FIXTURES")]
    fixtures: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig::from_parts(
        &args.command,
        &args.inputs,
        args.kind.as_deref(),
        args.json,
        &args.params,
        args.fixtures.as_deref(),
    );
    let out = match cfg {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(omegader::cli::exit_code(&e) as u8);
        }
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
