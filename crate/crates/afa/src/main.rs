//! Command-line front-end: every decision procedure on one problem file.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use afa::counting;
use afa::error::Error;
use afa::formula::{evaluate_qf, parse_formula};
use afa::free_extension::build_partial_algebra;
use afa::oracle::{class_closure, rewrite_oracle, OracleVerdict, RewriteBudget};
use afa::problem::{parse_problem, Problem};
use afa::qe::{eliminate, QeOptions, QeStats};
use afa::term::parse_term;
use afa::{canonical, congruence};

#[derive(Parser)]
#[command(
    name = "afa",
    version,
    about = "Decision procedures for quotients of ground term algebras by ground equations"
)]
struct Cli {
    /// Problem file holding the signature and the equations
    #[arg(long, global = true, value_name = "PATH")]
    problem: Option<PathBuf>,
    /// Structured JSON output
    #[arg(long, global = true)]
    json: bool,
    /// Node budget for quantifier elimination
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two ground terms are equal in the quotient algebra
    Eq { s: String, t: String },
    /// Print the canonical representative of a term's congruence class
    Rep { term: String },
    /// Print the cardinality of a term's congruence class ("inf" when infinite)
    Card { term: String },
    /// Check whether every congruence class is infinite
    Infinite,
    /// Check whether the quotient algebra is finite
    Finite {
        /// Also list the carrier and the operation table
        #[arg(long)]
        enumerate: bool,
    },
    /// Check whether this presentation and another one give isomorphic algebras
    Iso { file2: PathBuf },
    /// Print the finite partial algebra B induced by the equations
    #[command(name = "build-b")]
    BuildB,
    /// Eliminate quantifiers from a formula
    Qe { formula: String },
    /// Decide a closed formula
    Decide { formula: String },
    /// Brute-force rewriting oracle
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Explore the rewriting closure of the first term, looking for the second
    Eq {
        s: String,
        t: String,
        /// Successor-generation budget
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Discard terms above this height
        #[arg(long, default_value_t = 8)]
        height: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eq { .. } => "eq",
            Command::Rep { .. } => "rep",
            Command::Card { .. } => "card",
            Command::Infinite => "infinite",
            Command::Finite { .. } => "finite",
            Command::Iso { .. } => "iso",
            Command::BuildB => "build-b",
            Command::Qe { .. } => "qe",
            Command::Decide { .. } => "decide",
            Command::Oracle { .. } => "oracle eq",
        }
    }
}

struct Output {
    answer: Value,
    detail: Value,
    plain: String,
}

fn stats_json(stats: &QeStats) -> Value {
    json!({
        "nodes": stats.nodes,
        "empty_domains": stats.empty_domains,
        "finite_domain_expansions": stats.finite_domain_expansions,
        "infinite_domain_drops": stats.infinite_domain_drops,
    })
}

fn load_problem(path: &Option<PathBuf>) -> Result<Problem, Error> {
    let Some(path) = path else {
        return Err(Error::parse(0, 0, "missing --problem <PATH>"));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(0, 0, format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let problem = load_problem(&cli.problem)?;
    let gamma = &problem.gamma;
    let sig = gamma.signature();
    let options = QeOptions {
        budget: cli.budget.unwrap_or(QeOptions::default().budget),
    };
    match &cli.command {
        Command::Eq { s, t } => {
            let s = parse_term(s, sig)?;
            let t = parse_term(t, sig)?;
            let equal = congruence::decide_equal(gamma, &s, &t)?;
            Ok(Output {
                answer: json!(equal),
                detail: json!({"s": s.to_string(), "t": t.to_string()}),
                plain: equal.to_string(),
            })
        }
        Command::Rep { term } => {
            let t = parse_term(term, sig)?;
            let types = canonical::compute_types(gamma);
            let rep = canonical::canonical_rep(gamma, &types, &t);
            Ok(Output {
                answer: json!(rep.to_string()),
                detail: json!({
                    "type": canonical::type_of(gamma, &types, &t),
                    "type_count": types.count(),
                }),
                plain: rep.to_string(),
            })
        }
        Command::Card { term } => {
            let t = parse_term(term, sig)?;
            let size = counting::class_size(gamma, &t);
            let answer = match size {
                counting::Cardinality::Finite(n) => json!(n.to_string()),
                counting::Cardinality::Infinite => json!("inf"),
            };
            Ok(Output {
                answer,
                detail: json!({"term": t.to_string()}),
                plain: size.to_string(),
            })
        }
        Command::Infinite => {
            let result = counting::intrinsic_infinite(gamma);
            Ok(Output {
                answer: json!(result),
                detail: Value::Null,
                plain: result.to_string(),
            })
        }
        Command::Finite { enumerate } => {
            let finite = counting::is_finite(gamma);
            let mut plain = finite.to_string();
            let mut detail = Value::Null;
            if *enumerate && finite {
                let algebra = counting::enumerate_if_finite(gamma)?;
                let carrier: Vec<String> =
                    algebra.carrier.iter().map(|t| t.to_string()).collect();
                let table: Vec<String> = algebra
                    .table
                    .iter()
                    .map(|((f, args), result)| {
                        let rendered: Vec<String> = args
                            .iter()
                            .map(|&i| algebra.carrier[i].to_string())
                            .collect();
                        format!(
                            "{f}({}) = {}",
                            rendered.join(","),
                            algebra.carrier[*result]
                        )
                    })
                    .collect();
                for line in carrier.iter().chain(&table) {
                    plain.push('\n');
                    plain.push_str(line);
                }
                detail = json!({"carrier": carrier, "table": table});
            }
            Ok(Output {
                answer: json!(finite),
                detail,
                plain,
            })
        }
        Command::Iso { file2 } => {
            let other = load_problem(&Some(file2.clone()))?;
            let result = counting::are_isomorphic(gamma, &other.gamma)?;
            Ok(Output {
                answer: json!(result),
                detail: Value::Null,
                plain: result.to_string(),
            })
        }
        Command::BuildB => {
            let b = build_partial_algebra(gamma);
            let carrier: Vec<String> = b.carrier().iter().map(|t| format!("[{t}]")).collect();
            let table: Vec<String> = b
                .table()
                .iter()
                .map(|((f, args), result)| {
                    let rendered: Vec<String> =
                        args.iter().map(|&id| format!("[{}]", b.rep(id))).collect();
                    format!("{f}({}) = [{}]", rendered.join(","), b.rep(*result))
                })
                .collect();
            Ok(Output {
                answer: json!(carrier),
                detail: json!({
                    "height_bound": b.height_bound(),
                    "table": table,
                    "total": b.is_total(),
                }),
                plain: b.to_string().trim_end().to_string(),
            })
        }
        Command::Qe { formula } => {
            let b = build_partial_algebra(gamma);
            let parsed = parse_formula(formula, &b)?;
            let result = eliminate(&b, &parsed, &options)?;
            let rendered = result.formula.render(&b);
            Ok(Output {
                answer: json!(rendered),
                detail: stats_json(&result.stats),
                plain: rendered,
            })
        }
        Command::Decide { formula } => {
            let b = build_partial_algebra(gamma);
            let parsed = parse_formula(formula, &b)?;
            let free = parsed.free_vars();
            if !free.is_empty() {
                return Err(Error::FreeVariables(
                    free.into_iter().collect::<Vec<_>>().join(", "),
                ));
            }
            let result = eliminate(&b, &parsed, &options)?;
            let value = evaluate_qf(&b, &result.formula, &BTreeMap::new())?;
            Ok(Output {
                answer: json!(value),
                detail: stats_json(&result.stats),
                plain: value.to_string(),
            })
        }
        Command::Oracle {
            command: OracleCommand::Eq { s, t, steps, height },
        } => {
            let s = parse_term(s, sig)?;
            let t = parse_term(t, sig)?;
            let budget = RewriteBudget::new(*steps, *height);
            let verdict = rewrite_oracle(gamma, &s, &t, budget);
            let text = match verdict {
                OracleVerdict::Equal => "equal",
                OracleVerdict::NotEqual => "not-equal",
                OracleVerdict::Unknown => "unknown",
            };
            let closure = class_closure(gamma, &s, budget);
            Ok(Output {
                answer: json!(text),
                detail: json!({
                    "explored": closure.members.len(),
                    "saturated": closure.saturated,
                }),
                plain: text.to_string(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successful exits
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let command = cli.command.name();
    match run(&cli) {
        Ok(output) => {
            if cli.json {
                let payload = json!({
                    "command": command,
                    "answer": output.answer,
                    "detail": output.detail,
                });
                println!("{payload}");
            } else {
                println!("{}", output.plain);
            }
            ExitCode::SUCCESS
        }
        Err(error) => {
            let code = match &error {
                Error::BudgetExhausted { .. } => 2,
                _ => 1,
            };
            if cli.json {
                let payload = json!({
                    "command": command,
                    "error": {
                        "kind": error.kind(),
                        "message": error.to_string(),
                    },
                });
                println!("{payload}");
            } else {
                eprintln!("error: {error}");
            }
            ExitCode::from(code)
        }
    }
}
