//! Command-line front end.
//!
//! Subcommands:
//!
//! - `hj n q`             resolution chain of the cyclic quotient `1/n(q,1)`
//! - `verify <id|all>`    replay the recorded checks of one case or all of them
//! - `delta <id> --t p/q` count deep divisors of a cataloged family at `t`
//! - `solve-weights`      enumerate weighted-blow-up weight systems
//!
//! Exit codes: 0 success / all checks pass, 1 verification failures,
//! 2 usage or input errors. Rationals are written `p/q`; affine forms
//! `c + s*t` (or with symbol `b`).

use clap::{Args, Parser, Subcommand, ValueEnum};
use logdp::catalog::{load_catalog, verify_all, verify_case, Catalog, VerificationReport};
use logdp::rat::{fmt_rat, parse_rat};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "logdp", version, about = "Exact singularity calculus for log surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Json,
}

#[derive(Args)]
struct CatalogOpts {
    /// Catalog file (default: bundled; the LOGDP_CATALOG variable overrides).
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    output: Output,
}

#[derive(Subcommand)]
enum Command {
    /// Print the minimal-resolution chain of 1/n(q,1).
    Hj { n: u64, q: u64 },
    /// Verify one case (or `all`) against its recorded data.
    Verify {
        id: String,
        #[command(flatten)]
        opts: CatalogOpts,
        /// Verify records in parallel (report order is unchanged).
        #[arg(long)]
        parallel: bool,
    },
    /// Count divisors of discrepancy <= -threshold for a cataloged family.
    Delta {
        id: String,
        /// Boundary parameter, e.g. 6/7.
        #[arg(long)]
        t: String,
        /// Variant discriminator when a case has several (e.g. `k=3`).
        #[arg(long, default_value = "")]
        variant: String,
        /// Deepness threshold (a divisor counts when a(E) <= -threshold).
        #[arg(long, default_value = "6/7")]
        threshold: String,
        #[command(flatten)]
        opts: CatalogOpts,
    },
    /// Enumerate solutions of alpha(1-m1(b)) + beta(1-m2(b)) = 1/theta.
    SolveWeights {
        /// First branch multiplicity, e.g. `7/3-2b`.
        #[arg(long)]
        m1: String,
        /// Second branch multiplicity, e.g. `5/6`.
        #[arg(long)]
        m2: String,
        /// Half-open interval for b, e.g. `6/7..1/1`.
        #[arg(long)]
        range: String,
        /// Require alpha >= beta + 1.
        #[arg(long)]
        alpha_dominant: bool,
        #[arg(long, default_value_t = 6)]
        theta_max: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn open_catalog(opts: &CatalogOpts) -> Result<Catalog, String> {
    let env_path = std::env::var_os("LOGDP_CATALOG").map(PathBuf::from);
    let path = opts.catalog.clone().or(env_path);
    load_catalog(path.as_deref()).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Hj { n, q } => {
            let quot = logdp::CyclicQuot::new(n, q)
                .map_err(|_| format!("gcd(n,q) must be 1 with 0 < q < n, got 1/{n}({q},1)"))?;
            let chain = logdp::hj_expand(quot).map_err(|e| e.to_string())?;
            let entries: Vec<String> = chain.0.iter().map(|c| c.to_string()).collect();
            println!("[{}]", entries.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { id, opts, parallel } => {
            let cat = open_catalog(&opts)?;
            let reports: Vec<VerificationReport> = if id == "all" {
                verify_all(&cat, parallel).reports
            } else {
                let matching: Vec<_> = cat.records.iter().filter(|r| r.id == id).collect();
                if matching.is_empty() {
                    return Err(format!("unknown case id `{id}`"));
                }
                matching.into_iter().map(verify_case).collect()
            };
            let mut families = std::collections::BTreeMap::new();
            for rep in &reports {
                let e = families.entry(rep.family).or_insert(true);
                *e = *e && rep.overall;
            }
            let all_pass = reports.iter().all(|r| r.overall);
            match opts.output {
                Output::Json => {
                    for rep in &reports {
                        println!("{}", serde_json::to_string(rep).unwrap());
                    }
                    println!(
                        "{}",
                        serde_json::json!({
                            "families_passed": families.values().filter(|v| **v).count(),
                            "families_total": families.len(),
                            "records_passed": reports.iter().filter(|r| r.overall).count(),
                            "records_total": reports.len(),
                        })
                    );
                }
                Output::Table => {
                    for rep in &reports {
                        let status = if rep.overall { "pass" } else { "FAIL" };
                        println!("{:<16} {}", rep.id, status);
                        for c in rep.checks.iter().filter(|c| !c.pass) {
                            println!("    {}: expected {}, got {}", c.name, c.expected, c.actual);
                        }
                    }
                    println!(
                        "{}/{} families pass ({}/{} records)",
                        families.values().filter(|v| **v).count(),
                        families.len(),
                        reports.iter().filter(|r| r.overall).count(),
                        reports.len()
                    );
                }
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Delta {
            id,
            t,
            variant,
            threshold,
            opts,
        } => {
            let cat = open_catalog(&opts)?;
            let t = parse_rat(&t)?;
            let threshold = parse_rat(&threshold)?;
            if threshold <= logdp::rat::zero() || threshold >= logdp::rat::one() {
                return Err("threshold must lie in (0, 1)".into());
            }
            let record = cat
                .records
                .iter()
                .find(|r| r.id == id && (variant.is_empty() || r.variant == variant))
                .ok_or_else(|| format!("unknown case id `{id}`"))?;
            let report =
                logdp::delta(&record.surface, &t, &threshold).map_err(|e| e.to_string())?;
            match opts.output {
                Output::Json => println!("{}", serde_json::to_string(&report).unwrap()),
                Output::Table => {
                    println!("delta = {}", report.delta);
                    for w in &report.witnesses {
                        println!("  {}: {}", w.source, fmt_rat(&w.value));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SolveWeights {
            m1,
            m2,
            range,
            alpha_dominant,
            theta_max,
        } => {
            let m1 = logdp::affine::parse_affine(&m1)?;
            let m2 = logdp::affine::parse_affine(&m2)?;
            let (lo, hi) = range
                .split_once("..")
                .ok_or("range must be written a/b..c/d")?;
            let lo = parse_rat(lo)?;
            let hi = parse_rat(hi)?;
            let sols = logdp::solve_blowup_weights(
                &m1,
                &m2,
                &lo,
                &hi,
                logdp::WeightConstraints {
                    alpha_dominant,
                    theta_max,
                },
            )
            .map_err(|e| e.to_string())?;
            for (w, b) in &sols {
                println!(
                    "(alpha,beta,theta,b) = ({},{},{},{})",
                    w.alpha,
                    w.beta,
                    w.theta,
                    fmt_rat(b)
                );
            }
            if sols.is_empty() {
                println!("no solutions");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
