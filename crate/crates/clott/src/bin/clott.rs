//! Command-line front end: checking, evaluation at a world, normalisation,
//! the lemma suites, and world enumeration. Results go to stdout as the
//! documented JSON; diagnostics go to stderr. Exit code 0 on success, 1 on
//! a check or verification failure, 2 on usage errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use clott::harness::{self, SuiteConfig};
use clott::interp::{interp_term, interp_type};
use clott::semantics::{Bounds, SemValue};
use clott::syntax::{parse_file, print_term, Judgement};
use clott::typecheck;
use clott::worlds::{enumerate_worlds, Truncation, World};

#[derive(Parser)]
#[command(name = "clott", version, about = "Clocked guarded type theory kernel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a judgement file.
    Check {
        file: String,
        /// Print the full derivation tree.
        #[arg(long)]
        explain: bool,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the subject of a typing judgement at a world.
    Eval {
        file: String,
        /// World as JSON, e.g. '{"clocks":{"l0":2},"valuation":{"k":"l0"}}'.
        #[arg(long)]
        world: String,
        /// Environment value as JSON for open contexts.
        #[arg(long)]
        env: Option<String>,
        /// Truncation B,N for family materialisation.
        #[arg(long)]
        trunc: Option<String>,
    },
    /// Print the β-normal form of the subject term.
    Normalize { file: String },
    /// Run the lemma suites.
    Verify {
        /// One suite by name; all suites when omitted.
        #[arg(long)]
        suite: Option<String>,
        /// Truncation B,N.
        #[arg(long)]
        trunc: Option<String>,
        /// Enumeration bound for naturals.
        #[arg(long, default_value_t = 4)]
        nat_bound: u64,
        /// Seed for the thinned quantifications.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the truncated worlds over a clock zone.
    Worlds {
        /// Comma-separated clock names.
        #[arg(long)]
        clocks: String,
        #[arg(long)]
        trunc: Option<String>,
    },
}

fn parse_trunc(flag: Option<&str>) -> Result<Truncation, String> {
    let from_env = std::env::var("CLOTT_TRUNC").ok();
    let spec = flag.map(|s| s.to_string()).or(from_env);
    match spec {
        None => Ok(Truncation::default()),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 2 {
                return Err(format!("bad truncation {s:?}, expected B,N"));
            }
            let b = parts[0].trim().parse().map_err(|_| format!("bad clock bound in {s:?}"))?;
            let n = parts[1].trim().parse().map_err(|_| format!("bad tick bound in {s:?}"))?;
            Ok(Truncation::new(b, n))
        }
    }
}

fn load(file: &str) -> Result<Judgement, String> {
    let src = std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?;
    parse_file(&src).map(|f| f.judgement).map_err(|e| format!("{file}:{e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { file, explain, json } => {
            let j = load(&file)?;
            match typecheck::check(&j) {
                Ok(derivation) => {
                    if json {
                        let out = serde_json::json!({
                            "status": "ok",
                            "derivation": if explain { derivation.to_json() } else { serde_json::json!(derivation.rule) },
                        });
                        println!("{out}");
                    } else if explain {
                        print!("{}", derivation.render(0));
                    } else {
                        println!("ok");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    if json {
                        println!("{}", e.to_json());
                    }
                    eprintln!("check failed: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Eval { file, world, env, trunc } => {
            let j = load(&file)?;
            let Judgement::Typing(ctx, term, ty) = &j else {
                return Err("eval needs a typing judgement `t : A`".into());
            };
            typecheck::check(&j).map_err(|e| format!("check failed: {e}"))?;
            let wjson: serde_json::Value =
                serde_json::from_str(&world).map_err(|e| format!("bad world JSON: {e}"))?;
            let w = World::from_json(&wjson)?;
            for k in &ctx.clocks {
                if !w.val.contains_key(k) {
                    return Err(format!("world lacks a valuation for clock {k}"));
                }
            }
            let env_val = match env {
                Some(e) => {
                    let v: serde_json::Value =
                        serde_json::from_str(&e).map_err(|er| format!("bad env JSON: {er}"))?;
                    SemValue::from_json(&v).map_err(|er| er.to_string())?
                }
                None => {
                    if !ctx.entries.is_empty() {
                        return Err("the context is not empty; pass --env".into());
                    }
                    SemValue::Star
                }
            };
            let bounds = Bounds::new(parse_trunc(trunc.as_deref())?, 4);
            if !clott::interp::interp_ctx(ctx)
                .contains(&w, &env_val, &bounds)
                .map_err(|e| e.to_string())?
            {
                return Err("the environment is not an element of the context at this world".into());
            }
            let tm = interp_term(ctx, term).map_err(|e| e.to_string())?;
            let v = tm.eval(&w, &env_val, &bounds).map_err(|e| e.to_string())?;
            // sanity: the value lands in the type's denotation
            let tyv = interp_type(ctx, ty).map_err(|e| e.to_string())?;
            let member = tyv
                .set_at(&w, &env_val, &bounds)
                .and_then(|s| s.contains(&v, &bounds))
                .map_err(|e| e.to_string())?;
            if !member {
                eprintln!("warning: value fell outside the type's denotation");
            }
            println!("{}", v.to_json(&bounds));
            Ok(ExitCode::SUCCESS)
        }
        Command::Normalize { file } => {
            let j = load(&file)?;
            let Judgement::Typing(_, term, _) = &j else {
                return Err("normalize needs a typing judgement `t : A`".into());
            };
            typecheck::check(&j).map_err(|e| format!("check failed: {e}"))?;
            let nf = typecheck::normalize(term).map_err(|e| e.to_string())?;
            println!("{}", print_term(&nf));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, trunc, nat_bound, seed, json } => {
            let cfg = SuiteConfig { trunc: parse_trunc(trunc.as_deref())?, nat_bound, seed };
            let reports = match suite {
                Some(name) => {
                    vec![harness::run_suite(&name, &cfg).map_err(|e| e.to_string())?]
                }
                None => harness::run_all(&cfg).map_err(|e| e.to_string())?,
            };
            let ok = reports.iter().all(|r| r.ok());
            if json {
                let out: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
                println!("{}", serde_json::Value::Array(out));
            } else {
                for r in &reports {
                    print!("{}", r.render());
                }
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Worlds { clocks, trunc } => {
            let delta: Vec<String> =
                clocks.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            let t = parse_trunc(trunc.as_deref())?;
            let ws = enumerate_worlds(&delta, &t);
            let out: Vec<serde_json::Value> = ws.iter().map(|w| w.to_json()).collect();
            println!("{}", serde_json::Value::Array(out));
            Ok(ExitCode::SUCCESS)
        }
    }
}
