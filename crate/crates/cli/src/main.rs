//! `pdmn` — validate pDMN workbooks, emit ProbLog, and answer queries.

use clap::{Args, Parser, Subcommand};
use pdmn_core::emit::emit_translation;
use pdmn_core::model::{validate_model, PdmnModel};
use pdmn_core::plcore::{query_exact_report, EngineOptions};
use pdmn_core::prob;
use pdmn_core::tableparse::{parse_workbook_all, ParseError};
use pdmn_core::translate::translate_model;
use pdmn_core::{Diagnostic, Severity};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ENGINE: u8 = 3;

#[derive(Parser)]
#[command(name = "pdmn", version, about = "Probabilistic DMN compiler and exact inference engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Workbook file, or `-` for stdin.
    file: String,
    /// Model name to use when the workbook defines several.
    #[arg(long)]
    model: Option<String>,
    /// Machine-readable JSON output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a workbook, reporting diagnostics.
    Check(CommonArgs),
    /// Translate a workbook and print the ProbLog program.
    Emit(CommonArgs),
    /// Translate a workbook and compute exact query probabilities.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Extra query atom (ProbLog syntax, e.g. `person_calls(mary)`);
        /// repeatable. Replaces the workbook's queries.
        #[arg(long)]
        query: Vec<String>,
        /// Cap on probabilistic choice points (2^n blowup guard).
        /// Falls back to $PDMN_MAX_CHOICE_POINTS, then 30.
        #[arg(long)]
        max_choice_points: Option<usize>,
        /// Decimal digits for probabilities with no exact decimal form.
        #[arg(long, default_value_t = 6)]
        digits: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check(common) => cmd_check(&common),
        Command::Emit(common) => cmd_emit(&common),
        Command::Run { common, query, max_choice_points, digits } => {
            cmd_run(&common, &query, max_choice_points, digits)
        }
    };
    ExitCode::from(code)
}

fn read_source(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))
    }
}

fn report_parse_errors(errors: &[ParseError], json: bool) -> u8 {
    if json {
        let list: Vec<Value> = errors
            .iter()
            .map(|e| {
                json!({
                    "severity": "error",
                    "message": e.message,
                    "span": e.span.to_string(),
                })
            })
            .collect();
        println!("{}", json!({ "errors": list }));
    } else {
        for e in errors {
            eprintln!("error: {e}");
        }
    }
    EXIT_PARSE
}

fn load_model(common: &CommonArgs) -> Result<PdmnModel, u8> {
    let source = read_source(&common.file).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })?;
    let name = if common.file == "-" { "stdin" } else { &common.file };
    let models =
        parse_workbook_all(&source, name).map_err(|es| report_parse_errors(&es, common.json))?;
    match &common.model {
        None if models.len() == 1 => Ok(models.into_iter().next().unwrap()),
        None => {
            let names: Vec<&str> = models.iter().map(|m| m.name.as_str()).collect();
            eprintln!(
                "error: workbook defines {} models ({}); pick one with --model",
                models.len(),
                names.join(", ")
            );
            Err(EXIT_PARSE)
        }
        Some(wanted) => models.into_iter().find(|m| &m.name == wanted).ok_or_else(|| {
            eprintln!("error: no model named `{wanted}` in {name}");
            EXIT_PARSE
        }),
    }
}

fn diagnostic_json(d: &Diagnostic) -> Value {
    json!({
        "severity": match d.severity { Severity::Error => "error", Severity::Warning => "warning" },
        "message": d.message,
        "span": d.span.to_string(),
    })
}

fn print_diagnostics(diags: &[Diagnostic]) {
    for d in diags {
        let tag = match d.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        eprintln!("{tag}: {}: {}", d.span, d.message);
    }
}

fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

fn cmd_check(common: &CommonArgs) -> u8 {
    let model = match load_model(common) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let diags = validate_model(&model);
    if common.json {
        let list: Vec<Value> = diags.iter().map(diagnostic_json).collect();
        println!("{}", json!({ "model": model.name, "diagnostics": list }));
    } else {
        print_diagnostics(&diags);
        if diags.is_empty() {
            println!("{}: ok", model.name);
        }
    }
    if has_errors(&diags) {
        EXIT_INVALID
    } else {
        EXIT_OK
    }
}

fn cmd_emit(common: &CommonArgs) -> u8 {
    let model = match load_model(common) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let diags = validate_model(&model);
    print_diagnostics(&diags);
    if has_errors(&diags) {
        return EXIT_INVALID;
    }
    let translation = translate_model(&model);
    print!("{}", emit_translation(&translation));
    EXIT_OK
}

fn cmd_run(common: &CommonArgs, queries: &[String], max_points: Option<usize>, digits: u32) -> u8 {
    let model = match load_model(common) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let diags = validate_model(&model);
    if !common.json {
        print_diagnostics(&diags);
    }
    if has_errors(&diags) {
        if common.json {
            let list: Vec<Value> = diags.iter().map(diagnostic_json).collect();
            println!("{}", json!({ "model": model.name, "diagnostics": list }));
        }
        return EXIT_INVALID;
    }
    let mut translation = translate_model(&model);

    if !queries.is_empty() {
        let mut atoms = Vec::new();
        for q in queries {
            match pdmn_core::plcore::parse_program(&format!("query({q}).")) {
                Ok(p) if p.queries.len() == 1 => atoms.push(p.queries[0].clone()),
                _ => {
                    eprintln!("error: `{q}` is not a valid query atom");
                    return EXIT_PARSE;
                }
            }
        }
        translation.program.queries = atoms;
    }

    let max_choice_points = max_points
        .or_else(|| {
            std::env::var("PDMN_MAX_CHOICE_POINTS").ok().and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| EngineOptions::default().max_choice_points);
    let options = EngineOptions { max_choice_points };
    let report = match query_exact_report(&translation.program, &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ENGINE;
        }
    };

    if common.json {
        let results: Vec<Value> = report
            .results
            .iter()
            .map(|r| {
                json!({
                    "query": r.atom.to_string(),
                    "probability": {
                        "decimal": render_probability(&r.probability, digits),
                        "fraction": prob::fraction_string(&r.probability),
                    },
                })
            })
            .collect();
        let diag_list: Vec<Value> = diags.iter().map(diagnostic_json).collect();
        println!(
            "{}",
            json!({ "model": model.name, "results": results, "diagnostics": diag_list })
        );
    } else {
        for r in &report.results {
            println!("{}: {}", r.atom, render_probability(&r.probability, digits));
        }
    }
    EXIT_OK
}

fn render_probability(value: &num::rational::BigRational, digits: u32) -> String {
    prob::decimal_exact(value).unwrap_or_else(|| prob::decimal_rounded(value, digits))
}
