use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use qhi::classify::classify;
use qhi::generate::{random_element, ElementRecipe, RecipeParams};
use qhi::io::{parse_matrix_document, to_json_string};
use qhi::reversibility::{build_report, verify_report, ReportOptions, ReversibilityReport};
use qhi::{Error, FormContext, GroupElement, Kind};

/// Classify quaternionic hyperbolic isometries and build certified reversers.
///
/// Exit codes: 0 success, 1 negative verdict or failed verification,
/// 2 not in the group, 3 ill-conditioned, 4 malformed input, 5 other errors.
#[derive(Parser)]
#[command(name = "qhi", version)]
struct Cli {
    /// Tolerance for membership and certification.
    #[arg(long, global = true, env = "QHI_TOL", default_value_t = qhi::DEFAULT_TOL)]
    tol: f64,
    /// Spaces of JSON indentation; 0 prints compact JSON.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    /// Print nothing; report through the exit code only.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Input file; `-` or omitted reads stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Kind, normal form and certified conjugator of an Sp(n,1) element.
    Classify(Input),
    /// Report containing a reverser.
    Reverse {
        #[command(flatten)]
        input: Input,
        /// Use a reverser whose square is ±I.
        #[arg(long)]
        projective: bool,
    },
    /// Report with the strong-reversibility verdict and an involution witness.
    Witness(Input),
    /// Four-involution factorization of an element of Sp(2m).
    Factor(Input),
    /// Recompute every claim of one report, or of each `*.json` in a directory.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "input")]
        dir: Option<PathBuf>,
    },
    /// Seeded random element of the requested kind.
    Random {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit parameters as JSON, e.g. '{"r": 2, "theta": 0}'. Disables conjugation.
        #[arg(long)]
        params: Option<String>,
        /// Target form: sp_n, sp_n1 or sp_n1_hat.
        #[arg(long)]
        context: Option<String>,
        /// Return the normal form itself.
        #[arg(long)]
        no_conjugate: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInGroup { .. } => 2,
            Error::IllConditioned(_) | Error::NotSemisimple { .. } => 3,
            Error::Malformed(_) | Error::DimensionMismatch(_) => 4,
            _ => 5,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure {
        code: 4,
        message: message.into(),
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| malformed(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| malformed(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_element(input: &Input, tol: f64) -> Result<GroupElement, Failure> {
    let text = read_input(input.input.as_deref())?;
    Ok(parse_matrix_document(&text)?.to_element(tol)?)
}

fn read_report(text: &str) -> Result<ReversibilityReport, Failure> {
    serde_json::from_str(text).map_err(|e| malformed(format!("malformed report: {e}")))
}

struct Output {
    indent: usize,
    quiet: bool,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T) {
        if !self.quiet {
            println!("{}", to_json_string(value, self.indent));
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(malformed("tolerance must be a positive number"));
    }
    let out = Output {
        indent: cli.json_indent,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Classify(input) => {
            let g = read_element(&input, tol)?;
            out.emit(&classify(&g, tol)?);
            Ok(0)
        }
        Command::Reverse { input, projective } => {
            let g = read_element(&input, tol)?;
            let opts = ReportOptions {
                projective,
                ..Default::default()
            };
            out.emit(&build_report(&g, tol, opts)?);
            Ok(0)
        }
        Command::Witness(input) => {
            let g = read_element(&input, tol)?;
            let opts = ReportOptions {
                witness: true,
                ..Default::default()
            };
            let report = build_report(&g, tol, opts)?;
            out.emit(&report);
            Ok(if report.strongly_reversible == Some(true) { 0 } else { 1 })
        }
        Command::Factor(input) => {
            let g = read_element(&input, tol)?;
            let opts = ReportOptions {
                factorization: true,
                ..Default::default()
            };
            out.emit(&build_report(&g, tol, opts)?);
            Ok(0)
        }
        Command::Verify { input, dir: None } => {
            let report = read_report(&read_input(input.input.as_deref())?)?;
            let cert = verify_report(&report, tol);
            out.emit(&cert);
            Ok(if cert.passed { 0 } else { 1 })
        }
        Command::Verify { dir: Some(dir), .. } => verify_dir(&dir, tol, &out),
        Command::Random {
            kind,
            n,
            seed,
            params,
            context,
            no_conjugate,
        } => {
            let mut recipe = ElementRecipe::new(kind, n, seed);
            if let Some(p) = params {
                let p: RecipeParams = serde_json::from_str(&p).map_err(|e| malformed(format!("bad --params: {e}")))?;
                recipe = recipe.with_params(p);
            }
            if let Some(c) = context {
                let ctx: FormContext = serde_json::from_value(json!(c))
                    .map_err(|_| malformed(format!("unknown context {c:?}; expected sp_n, sp_n1 or sp_n1_hat")))?;
                recipe = recipe.with_context(ctx);
            }
            if no_conjugate {
                recipe = recipe.with_conjugation(false);
            }
            out.emit(&random_element(&recipe)?);
            Ok(0)
        }
    }
}

fn verify_dir(dir: &Path, tol: f64, out: &Output) -> Result<u8, Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| malformed(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut all = true;
    let mut results = Vec::new();
    for path in &files {
        let entry = match std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|t| read_report(&t).map_err(|f| f.message))
        {
            Ok(report) => {
                let cert = verify_report(&report, tol);
                all &= cert.passed;
                json!({"file": path.display().to_string(), "passed": cert.passed, "certification": cert})
            }
            Err(message) => {
                all = false;
                json!({"file": path.display().to_string(), "passed": false, "error": message})
            }
        };
        results.push(entry);
    }
    out.emit(&json!({"passed": all, "files": results}));
    Ok(if all { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !quiet {
                eprintln!("qhi: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
