use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semistar_core::domains::{CenterSpec, Domain, DomainSpec};
use semistar_core::semistar::checks::check_axioms;
use semistar_workbench::expr::{Defs, Env, Oracle};
use semistar_workbench::report::Report;
use semistar_workbench::run::run_scenario;
use semistar_workbench::scenario::Scenario;

/// Exact computations with semistar operations.
#[derive(Parser)]
#[command(name = "semistar", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Where {
    /// Backend: local, poly, quadratic:<d>, integers, integers:<p>, or a JSON domain spec.
    #[arg(long, default_value = "local")]
    domain: String,
    /// Take the domain and named definitions from a scenario file.
    #[arg(long, conflicts_with = "domain")]
    scenario: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression: an operation, ideal, element, prime list or closure.
    Eval {
        expr: String,
        #[command(flatten)]
        at: Where,
    },
    /// Decide `z ∈ E^★`, or membership of a rational function in Na or Kr.
    Member {
        #[arg(long)]
        op: String,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        elem: String,
        #[arg(long, value_enum)]
        ring: Option<RingArg>,
        #[command(flatten)]
        at: Where,
    },
    /// Run a scenario file.
    Check {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the semistar axioms on sampled ideals.
    Axioms {
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        at: Where,
    },
    /// Re-render a JSON report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Na,
    Kr,
}

/// A failure to configure the run; always exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

fn parse_domain(text: &str) -> Result<DomainSpec, Usage> {
    let xy = || vec!["X".to_string(), "Y".to_string()];
    let spec = match text.split_once(':') {
        _ if text.trim_start().starts_with('{') => serde_json::from_str(text)?,
        None if text == "local" => DomainSpec::Poly { vars: xy(), center: CenterSpec::Origin },
        None if text == "poly" => DomainSpec::Poly { vars: xy(), center: CenterSpec::Global },
        None if text == "integers" => DomainSpec::Integers { localize_at: None },
        Some(("integers", p)) => DomainSpec::Integers { localize_at: Some(p.parse()?) },
        Some(("quadratic", d)) => DomainSpec::Quadratic { d: d.parse()? },
        _ => return Err(Usage(format!("unknown domain '{text}'"))),
    };
    Ok(spec)
}

fn context(at: &Where) -> Result<(Domain, Defs), Usage> {
    match &at.scenario {
        Some(path) => {
            let s = Scenario::load(path)?;
            Ok((Domain::from_spec(&s.domain)?, s.defs()))
        }
        None => Ok((Domain::from_spec(&parse_domain(&at.domain)?)?, Defs::default())),
    }
}

fn env_seed() -> Result<u64, Usage> {
    match std::env::var("SEMISTAR_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Usage(format!("SEMISTAR_SEED is not an integer: {s}"))),
        Err(_) => Ok(0),
    }
}

fn verdict(h: Option<bool>) -> &'static str {
    match h {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    }
}

fn run(cli: Cli) -> Result<bool, Usage> {
    match cli.cmd {
        Cmd::Eval { expr, at } => {
            let (d, defs) = context(&at)?;
            let env = Env::new(&d, &defs);
            println!("{}", env.eval(&expr)?.show(&d));
            Ok(true)
        }
        Cmd::Member { op, ideal, elem, ring, at } => {
            let (d, defs) = context(&at)?;
            let env = Env::new(&d, &defs);
            match (ring, ideal) {
                (Some(ring), None) => {
                    let wrapped = match ring {
                        RingArg::Na => format!("na({op})"),
                        RingArg::Kr => format!("kr({op})"),
                    };
                    let Oracle::Op(s) = env.oracle(&op)? else {
                        return Err(Usage(format!("{op} is not an operation")));
                    };
                    let f = env.function(&elem)?;
                    let cert = match ring {
                        RingArg::Na => semistar_core::function_rings::na_member(&d, &s, &f)?,
                        RingArg::Kr => semistar_core::function_rings::kr_member(
                            &d,
                            &s,
                            &f,
                            &semistar_core::function_rings::KrOptions::new(&d),
                        )?,
                    };
                    println!("{} ∈ {wrapped}: {}", f.show(&d), cert.verdict);
                    println!("  {}", cert.describe(&d));
                }
                (None, Some(ideal)) => {
                    let o = env.oracle(&op)?;
                    let e = env.ideal(&ideal)?;
                    let z = env.element(&elem)?;
                    let ans = o.member(&d, &e, &z)?;
                    println!("{} ∈ {}^{{{}}}: {}", d.show_k(&z), e.show(&d), o.name(&d), verdict(ans.holds));
                    if let Some(c) = &ans.closure {
                        for w in &c.witnesses {
                            println!("  witness {}", w.label);
                        }
                    }
                    if let Some(cert) = &ans.cert {
                        println!("  {}", cert.describe(&d));
                    }
                }
                _ => return Err(Usage("member takes exactly one of --ideal and --ring".into())),
            }
            Ok(true)
        }
        Cmd::Check { scenario, format, out, seed } => {
            let s = Scenario::load(&scenario)?;
            let report = run_scenario(&s, seed, env_seed()?)?;
            if let Some(path) = out {
                std::fs::write(&path, report.to_json() + "\n")?;
            }
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(report.all_passed())
        }
        Cmd::Axioms { op, samples, seed, at } => {
            let (d, defs) = context(&at)?;
            let s = Env::new(&d, &defs).op(&op)?;
            let seed = match seed {
                Some(s) => s,
                None => env_seed()?,
            };
            let rep = check_axioms(&d, &s, seed, samples);
            println!("{} on {}: {} samples, {} skipped", rep.op, d.describe(), rep.samples, rep.skipped);
            for r in &rep.results {
                match &r.counterexample {
                    None => println!("  ok    {} ({} checked)", r.axiom, r.checked),
                    Some(c) => println!("  FAIL  {}: {c}", r.axiom),
                }
            }
            Ok(rep.passed())
        }
        Cmd::Report { file, format } => {
            let text = std::fs::read_to_string(&file)?;
            let report = Report::from_json(&text)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
