//! `skein`: evaluate Kauffman bracket and SU(3) state functions on tangle
//! diagram files, enumerate state-space bases, and run the identity and
//! invariance check suites.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use skein_core::basis::{catalan, enumerate_matchings, enumerate_webs, BoundarySignature};
use skein_core::diagram::{Diagram, Sign};
use skein_core::kauffman::{self, KauffmanRules};
use skein_core::moves::{self, MoveKind, RandomSpec, Theory};
use skein_core::ring::LaurentPoly;
use skein_core::spider::{self, Normalization, RuleSet};
use skein_core::state::StateVector;

#[derive(Parser)]
#[command(name = "skein", version, about = "Skein-calculus engine for the Kauffman bracket and SU(3) state functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Clone)]
struct TheoryArgs {
    /// Which state function to evaluate.
    #[arg(long, default_value = "kauffman")]
    theory: String,
    /// SU(3) parameter a as canonical polynomial text (default: symbolic a).
    #[arg(long)]
    a: Option<String>,
    /// SU(3) parameter y as canonical polynomial text (default: symbolic y).
    #[arg(long)]
    y: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a diagram file to its state-vector normal form.
    Eval {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Literature normalization of the standard a=1 state function.
        #[arg(long)]
        normalization: Option<String>,
        file: String,
    },
    /// Print the state vector together with each basis diagram.
    NormalForm {
        #[command(flatten)]
        theory: TheoryArgs,
        file: String,
    },
    /// Enumerate the state-space basis of a boundary signature.
    Basis {
        /// Unsigned point count (Kauffman mode).
        #[arg(long)]
        points: Option<usize>,
        /// Signed points, e.g. "++-+-" (SU(3) mode).
        #[arg(long)]
        signs: Option<String>,
        #[arg(long, default_value = "kauffman")]
        mode: String,
        #[arg(long, default_value_t = 12)]
        max_vertices: u32,
    },
    /// Check Reidemeister invariance at every move site of a diagram.
    Check {
        #[command(flatten)]
        theory: TheoryArgs,
        /// all, RI, RII, RIII, or R41.
        #[arg(long, default_value = "all")]
        moves: String,
        file: String,
    },
    /// Verify the named identities the rule coefficients satisfy.
    Identities {
        #[command(flatten)]
        theory: TheoryArgs,
    },
    /// Compare the rewriting engine against the brute-force state sum.
    OracleCompare {
        /// Number of seeded random diagrams to compare on.
        #[arg(long, default_value_t = 25)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra diagram files to include.
        files: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            if cli.json {
                let doc = json!({
                    "version": 1,
                    "result": Value::Null,
                    "diagnostics": [msg],
                });
                println!("{}", doc);
            } else {
                eprintln!("error: {}", msg);
            }
            ExitCode::FAILURE
        }
    }
}

fn read_diagram(path: &str) -> Result<Diagram, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {}: {}", path, e))?;
    Diagram::parse(&text).map_err(|e| format!("{}: {}", path, e))
}

fn su3_rules(args: &TheoryArgs) -> Result<RuleSet, String> {
    let a = match &args.a {
        Some(s) => LaurentPoly::parse(s).map_err(|e| format!("--a: {}", e))?,
        None => LaurentPoly::var("a"),
    };
    let y = match &args.y {
        Some(s) => LaurentPoly::parse(s).map_err(|e| format!("--y: {}", e))?,
        None => LaurentPoly::var("y"),
    };
    spider::su3_params(a, y).map_err(|e| e.to_string())
}

fn state_vector_json(sv: &StateVector) -> Value {
    let basis: Vec<Value> = sv
        .terms()
        .map(|(k, t)| json!({"key": k, "coeff": t.coeff.to_canonical_text()}))
        .collect();
    json!({"signature": sv.signature.to_string(), "basis": basis})
}

fn emit(cli: &Cli, result: Value, text: String) {
    if cli.json {
        let doc = json!({"version": 1, "result": result, "diagnostics": []});
        println!("{}", doc);
    } else {
        println!("{}", text);
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Eval {
            theory,
            normalization,
            file,
        } => {
            let d = read_diagram(file)?;
            let sv = match (theory.theory.as_str(), normalization) {
                ("kauffman", None) => {
                    kauffman::bracket_rewrite(&d).map_err(|e| e.to_string())?
                }
                ("kauffman", Some(_)) => {
                    return Err("normalizations apply to the su3 theory".into())
                }
                ("su3", None) => {
                    let rs = su3_rules(theory)?;
                    spider::su3_rewrite(&d, &rs).map_err(|e| e.to_string())?
                }
                ("su3", Some(norm)) => {
                    let variant = Normalization::parse(norm)
                        .ok_or_else(|| format!("unknown normalization '{}'", norm))?;
                    spider::normalized_invariant(&d, variant).map_err(|e| e.to_string())?
                }
                (other, _) => return Err(format!("unknown theory '{}'", other)),
            };
            let mut text = format!("signature: {}\n", sv.signature);
            for (k, t) in sv.terms() {
                text.push_str(&format!("{}  [{}]\n", t.coeff.to_canonical_text(), k));
            }
            if sv.is_empty() {
                text.push_str("0\n");
            }
            emit(cli, state_vector_json(&sv), text.trim_end().to_string());
            Ok(ExitCode::SUCCESS)
        }
        Command::NormalForm { theory, file } => {
            let d = read_diagram(file)?;
            let sv = match theory.theory.as_str() {
                "kauffman" => kauffman::bracket_rewrite(&d).map_err(|e| e.to_string())?,
                "su3" => {
                    let rs = su3_rules(theory)?;
                    spider::su3_rewrite(&d, &rs).map_err(|e| e.to_string())?
                }
                other => return Err(format!("unknown theory '{}'", other)),
            };
            let mut text = format!("signature: {}\n", sv.signature);
            let mut terms = Vec::new();
            for (k, t) in sv.terms() {
                text.push_str(&format!(
                    "term: {}\nkey: {}\n{}\n",
                    t.coeff.to_canonical_text(),
                    k,
                    t.diagram.to_text()
                ));
                terms.push(json!({
                    "key": k,
                    "coeff": t.coeff.to_canonical_text(),
                    "diagram": t.diagram.to_text(),
                }));
            }
            emit(
                cli,
                json!({"signature": sv.signature.to_string(), "terms": terms}),
                text.trim_end().to_string(),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Basis {
            points,
            signs,
            mode,
            max_vertices,
        } => {
            let elements = match (mode.as_str(), points, signs) {
                ("kauffman", Some(n), None) => {
                    enumerate_matchings(&BoundarySignature::Kauffman(*n))
                }
                ("su3", _, Some(s)) => {
                    let sig: Vec<Sign> = s
                        .chars()
                        .map(|c| match c {
                            '+' => Ok(Sign::Plus),
                            '-' => Ok(Sign::Minus),
                            other => Err(format!("bad sign '{}'", other)),
                        })
                        .collect::<Result<_, _>>()?;
                    enumerate_webs(&BoundarySignature::Su3(sig), *max_vertices)
                }
                ("su3", Some(n), None) => {
                    // unsigned su3 request: all-plus signature
                    enumerate_webs(&BoundarySignature::Su3(vec![Sign::Plus; *n]), *max_vertices)
                }
                _ => return Err("use --points with kauffman or --signs with su3".into()),
            };
            let mut text = format!("count: {}", elements.len());
            if *mode == "kauffman" {
                if let Some(n) = points {
                    if n % 2 == 0 {
                        text.push_str(&format!(" (catalan {})", catalan((n / 2) as u32)));
                    }
                }
            }
            let mut arr = Vec::new();
            for e in &elements {
                text.push_str(&format!(
                    "\n{}\t{}",
                    e.key,
                    e.diagram.to_text().replace('\n', "; ")
                ));
                arr.push(json!({"key": e.key, "diagram": e.diagram.to_text()}));
            }
            emit(cli, json!({"count": elements.len(), "elements": arr}), text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            theory,
            moves: which,
            file,
        } => {
            let d = read_diagram(file)?;
            let kinds: Vec<MoveKind> = match which.as_str() {
                "all" => vec![
                    MoveKind::R1,
                    MoveKind::R2Parallel,
                    MoveKind::R2Antiparallel,
                    MoveKind::R3,
                    MoveKind::R41,
                    MoveKind::R41Reversed,
                ],
                "RI" => vec![MoveKind::R1],
                "RII" => vec![MoveKind::R2Parallel, MoveKind::R2Antiparallel],
                "RIII" => vec![MoveKind::R3],
                "R41" => vec![MoveKind::R41, MoveKind::R41Reversed],
                other => return Err(format!("unknown move selector '{}'", other)),
            };
            let krules = KauffmanRules::default();
            let srules;
            let th = match theory.theory.as_str() {
                "kauffman" => Theory::Kauffman(&krules),
                "su3" => {
                    srules = su3_rules(theory)?;
                    Theory::Su3(&srules)
                }
                other => return Err(format!("unknown theory '{}'", other)),
            };
            let report =
                moves::invariance_report(&d, &th, &kinds).map_err(|e| e.to_string())?;
            let mut text = String::new();
            let mut arr = Vec::new();
            for c in &report.checks {
                text.push_str(&format!(
                    "{:<16} {:<7} {:<4} {}\n",
                    format!("{:?}", c.kind),
                    format!("{:?}", c.dir),
                    if c.pass { "PASS" } else { "FAIL" },
                    c.note
                ));
                arr.push(json!({
                    "kind": format!("{:?}", c.kind),
                    "dir": format!("{:?}", c.dir),
                    "pass": c.pass,
                    "note": c.note,
                }));
            }
            text.push_str(&format!(
                "{} checks, {} failures",
                report.checks.len(),
                report.failures().len()
            ));
            emit(
                cli,
                json!({"checks": arr, "all_pass": report.all_pass()}),
                text,
            );
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Identities { theory } => {
            let mut rows: Vec<(String, bool, String)> = Vec::new();
            match theory.theory.as_str() {
                "su3" => {
                    let rs = su3_rules(theory)?;
                    for (name, residual) in spider::su3_identity_suite(&rs) {
                        rows.push((name, residual.is_zero(), residual.to_canonical_text()));
                    }
                }
                "kauffman" => {
                    for (name, residual) in
                        kauffman::uniqueness_residuals(&KauffmanRules::default())
                    {
                        rows.push((name, residual.is_zero(), residual.to_canonical_text()));
                    }
                }
                other => return Err(format!("unknown theory '{}'", other)),
            }
            let all_pass = rows.iter().all(|(_, ok, _)| *ok);
            let mut text = String::new();
            let mut arr = Vec::new();
            for (name, ok, residual) in &rows {
                text.push_str(&format!(
                    "{:<24} {}\n",
                    name,
                    if *ok { "PASS" } else { "FAIL" }
                ));
                arr.push(json!({"name": name, "pass": ok, "residual": residual}));
            }
            text.push_str(if all_pass { "all identities hold" } else { "FAILURES" });
            emit(cli, json!({"identities": arr, "all_pass": all_pass}), text);
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::OracleCompare { count, seed, files } => {
            let seed = std::env::var("SKEIN_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(*seed);
            let mut diagrams: Vec<(String, Diagram)> = Vec::new();
            for f in files {
                diagrams.push((f.clone(), read_diagram(f)?));
            }
            for i in 0..*count {
                let spec = RandomSpec {
                    strands: 2 + (i % 3) as usize,
                    rows: 6,
                    vertex_density: 0.0,
                    crossing_density: 0.6,
                    close: false,
                    oriented: false,
                    seed: seed.wrapping_add(i),
                };
                let d = moves::random_tangle(&spec).map_err(|e| e.to_string())?;
                diagrams.push((format!("random-{}", i), d));
            }
            let mut mismatches = Vec::new();
            for (name, d) in &diagrams {
                let oracle = kauffman::bracket_oracle(d).map_err(|e| e.to_string())?;
                let rewrite = kauffman::bracket_rewrite(d).map_err(|e| e.to_string())?;
                if oracle != rewrite {
                    mismatches.push(name.clone());
                }
            }
            let text = format!(
                "{} diagrams compared, {} mismatches",
                diagrams.len(),
                mismatches.len()
            );
            emit(
                cli,
                json!({"compared": diagrams.len(), "mismatches": mismatches}),
                text,
            );
            Ok(if mismatches.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
