use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use linfty_core::ce::{ce_construct, minimal_model};
use linfty_core::homalg::halperin_check;
use linfty_core::linfty::{truncate, twist, McElement};
use linfty_core::pipeline::{
    self, check, cp_inclusion, map_model, parse, parse_cdga, MapOptions, Model,
};
use linfty_core::{Error, Violation};

#[derive(Parser)]
#[command(name = "linfty", version, about = "Rational models of mapping spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the cdga and L-infinity axioms and every declared MC element.
    Check { file: PathBuf },
    /// Rational homotopy groups of the component of an MC element.
    Homotopy {
        file: PathBuf,
        #[arg(long)]
        mc: String,
        #[arg(long)]
        max_degree: Option<i64>,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sullivan model of the component of an MC element.
    CeModel {
        file: PathBuf,
        #[arg(long)]
        mc: String,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Built-in examples.
    Example {
        #[command(subcommand)]
        which: Example,
    },
    /// Negative-degree derivations of an even presentation.
    Halperin {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check a path certificate between two MC elements.
    VerifyPath {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        path: String,
    },
}

#[derive(Subcommand)]
enum Example {
    /// Maps CP^n -> CP^m homotopic to the inclusion.
    Cp {
        n: u32,
        m: u32,
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Parse(String),
    Invalid(serde_json::Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or_default()
            .to_string();
        let mut v = json!({ "error": kind, "message": e.to_string() });
        if let Error::NotMaurerCartan(c) = &e {
            v["curvature"] = json!(c);
        }
        Failure::Invalid(v)
    }
}

fn violations(message: &str, list: &[Violation]) -> Failure {
    Failure::Invalid(json!({ "error": "Violations", "message": message, "violations": list }))
}

fn read(file: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(file).map_err(|e| {
        Failure::Invalid(json!({ "error": "Io", "message": format!("{}: {e}", file.display()) }))
    })
}

fn load(file: &PathBuf) -> Result<Model, Failure> {
    let text = read(file)?;
    let spec = parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", file.display())))?;
    Ok(Model::build(&spec)?)
}

fn write_json(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| {
        Failure::Invalid(json!({ "error": "Io", "message": format!("{}: {e}", path.display()) }))
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { file } => {
            let model = load(&file)?;
            let report = check(&model)?;
            for (name, c) in &report.curvatures {
                println!("mc {name}: curvature {c}");
            }
            if report.ok() {
                println!("ok");
                Ok(())
            } else {
                let list = report.violations();
                for v in &list {
                    println!("violation: {v}");
                }
                Err(violations("axioms violated", &list))
            }
        }
        Command::Homotopy {
            file,
            mc,
            max_degree,
            json,
        } => {
            let model = load(&file)?;
            let report = map_model(&model, &mc, MapOptions { max_degree })?;
            if let Some(path) = json {
                write_json(&path, &report.to_json())?;
            }
            print!("{report}");
            Ok(())
        }
        Command::CeModel { file, mc, json } => {
            let model = load(&file)?;
            let tau = McElement::new(&model.tensor, model.mc(&mc)?.clone())?;
            let connected = truncate(&twist(&model.tensor, &tau)?, 0)?;
            let s = ce_construct(&connected)?;
            let min = minimal_model(&s)?;
            if json {
                let v = json!({ "sullivan": s.to_json(), "minimal_model": min.to_json() });
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                println!("Sullivan model: {s}");
                println!("minimal model:  {min}");
            }
            Ok(())
        }
        Command::Example {
            which:
                Example::Cp {
                    n,
                    m,
                    max_degree,
                    json,
                },
        } => {
            let model = Model::build(&cp_inclusion(n, m)?)?;
            let report = map_model(&model, "tau", MapOptions { max_degree })?;
            if let Some(path) = json {
                write_json(&path, &report.to_json())?;
            }
            print!("{report}");
            Ok(())
        }
        Command::Halperin { file, json } => {
            let text = read(&file)?;
            let decl = parse_cdga(&text)
                .map_err(|e| Failure::Parse(format!("{}: {e}", file.display())))?;
            let p = pipeline::presentation(&decl)?;
            let report = halperin_check(&p)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("json"));
                return Ok(());
            }
            for (n, d) in &report.degrees {
                println!(
                    "degree {n}: kernel {} = derivations of degree {} ({})",
                    d.kernel_dim, d.derivation_degree, d.derivation_dim
                );
            }
            match &report.witness {
                None => println!("holds: no derivations of negative degree"),
                Some(w) => println!("fails: negative-degree derivation {w}"),
            }
            Ok(())
        }
        Command::VerifyPath {
            file,
            from,
            to,
            path,
        } => {
            let model = load(&file)?;
            if model.verify_path(&from, &to, &path)? {
                println!("path {path} joins {from} to {to}");
                Ok(())
            } else {
                let v = Violation::new("MC path", vec![path, from, to]);
                Err(violations(
                    "not a Maurer-Cartan path with these endpoints",
                    &[v],
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(v)) => {
            eprintln!("{v}");
            ExitCode::from(1)
        }
    }
}
