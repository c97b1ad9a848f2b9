use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use pgcaps::cap::{self, DEFAULT_MAX_SPACE};
use pgcaps::codes::{self, DEFAULT_SYNDROME_BOUND};
use pgcaps::cover;
use pgcaps::harness::config::{init_threads, prime_power};
use pgcaps::harness::suite::{self, SuiteConfig};
use pgcaps::harness::{self, io, ModeFlag, RunConfig, EXIT_INVALID, EXIT_OK};
use pgcaps::linperm;
use pgcaps::pg;
use pgcaps::veronese;
use pgcaps::{Elem, Error, Field, FieldCtx, Level};

#[derive(Parser)]
#[command(name = "pgcaps", version, about = "Complete caps V_1 ∪ V_alpha in PG(4n+1, q)")]
struct Cli {
    /// Worker threads for parallel checks.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Params {
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    h: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Encoding of alpha in F_q (default: -1 for odd q, the primitive element for even q).
    #[arg(long)]
    alpha: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the cap and write it as JSON.
    Construct {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a cap file: no three collinear, completeness, code parameters.
    Verify {
        cap: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeFlag::Both)]
        mode: ModeFlag,
        #[arg(long, default_value_t = DEFAULT_MAX_SPACE)]
        max_space: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bisecant certificate for the point P(a, b).
    Cover {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
    /// Parity-check matrix of the cap and its code report.
    ExportCode {
        #[command(flatten)]
        params: Params,
        /// Read the cap from a file instead of constructing it.
        #[arg(long)]
        cap: Option<PathBuf>,
        /// Text file for the matrix.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SYNDROME_BOUND)]
        max_space: u64,
    },
    /// D-matrix determinants and permutation behaviour of a0 y + a1 y^q + a2 y^{q^2}.
    Linperm {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        h: u32,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long)]
        a0: u32,
        #[arg(long)]
        a1: u32,
        #[arg(long)]
        a2: u32,
    },
    /// Chordal census and partition check in the symmetric-matrix model.
    Veronese {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = DEFAULT_MAX_SPACE)]
        max_space: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every reproduction check and write an aggregated report.
    Suite {
        /// Extra instance as `q,n` (repeatable), e.g. `--include 4,2`.
        #[arg(long)]
        include: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1 << 21)]
        max_space: u64,
        #[arg(long, default_value = "suite-out")]
        out: PathBuf,
    },
}

fn emit<T: Serialize>(value: &T) -> Result<(), Error> {
    print!("{}", io::to_json(value)?);
    Ok(())
}

fn run_config(params: &Params) -> RunConfig {
    RunConfig {
        p: params.p,
        h: params.h,
        n: params.n,
        alpha: params.alpha,
        ..RunConfig::default()
    }
}

#[derive(Serialize)]
struct LinpermOutput {
    p: u32,
    h: u32,
    k: u32,
    coeffs: [Elem; 3],
    det_d1: Elem,
    det_dm1: Elem,
    perm_on_k: bool,
    perm_on_k2: bool,
    norm_condition: bool,
    fer: Option<linperm::FerReport>,
}

#[derive(Serialize)]
struct VeroneseOutput {
    census: Option<veronese::ChordalCensus>,
    partition: veronese::WPartitionReport,
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Construct { params, out } => {
            let (ctx, cap) = run_config(&params).build()?;
            match out {
                Some(path) => {
                    io::save_cap(&path, &ctx, &cap)?;
                    eprintln!("wrote {} points to {}", cap.len(), path.display());
                }
                None => emit(&io::CapFile::from_cap(&ctx, &cap)?)?,
            }
            Ok(EXIT_OK)
        }
        Cmd::Verify {
            cap,
            mode,
            max_space,
            out,
        } => {
            let (ctx, cap) = io::load_cap(&cap)?;
            let cfg = RunConfig {
                p: ctx.p(),
                h: ctx.h(),
                n: ctx.n()?,
                mode,
                max_space,
                ..RunConfig::default()
            };
            let report = harness::verify(&ctx, &cap, &cfg)?;
            match out {
                Some(path) => io::save_json(&path, &report)?,
                None => emit(&report)?,
            }
            eprintln!("{}", harness::summary(&report));
            Ok(report.exit_code)
        }
        Cmd::Cover { params, a, b } => {
            let (ctx, cap) = run_config(&params).build()?;
            let k = ctx.fk().order();
            if a >= k || b >= k {
                return Err(Error::Format(format!("encodings must be below {k}")));
            }
            let r = pg::normalize(&ctx, Elem(a), Elem(b))?;
            let cert = cover::cover_point(&ctx, &cap, &r)?;
            if !cover::verify_certificate(&ctx, &cap, &cert) {
                return Err(Error::InternalContradiction("certificate failed re-verification".into()));
            }
            emit(&cert)?;
            Ok(EXIT_OK)
        }
        Cmd::ExportCode {
            params,
            cap,
            out,
            max_space,
        } => {
            let (ctx, cap) = match cap {
                Some(path) => io::load_cap(&path)?,
                None => run_config(&params).build()?,
            };
            let h = codes::parity_check(&ctx, &cap)?;
            match out {
                Some(path) => std::fs::write(&path, h.to_text())?,
                None => print!("{}", h.to_text()),
            }
            let report = codes::report_for(&ctx, &h, max_space)?;
            eprint!("{}", io::to_json(&report)?);
            Ok(if report.as_expected { EXIT_OK } else { harness::EXIT_CODE_MISMATCH })
        }
        Cmd::Linperm { p, h, k, a0, a1, a2 } => {
            let ctx = FieldCtx::with_degree(p, h, k)?;
            let order = ctx.fk().order();
            if [a0, a1, a2].iter().any(|&a| a >= order) {
                return Err(Error::Format(format!("coefficients must be below {order}")));
            }
            let coeffs = [Elem(a0), Elem(a1), Elem(a2)];
            let norm_condition = linperm::norm_condition_holds(&ctx, coeffs);
            let bound = linperm::DEFAULT_BOUND.max(ctx.order(Level::FK2));
            let output = LinpermOutput {
                p,
                h,
                k,
                coeffs,
                det_d1: linperm::det(&ctx, &linperm::build_d_matrix(&ctx, coeffs, 1)?),
                det_dm1: linperm::det(&ctx, &linperm::build_d_matrix(&ctx, coeffs, -1)?),
                perm_on_k: linperm::is_permutation(&ctx, coeffs, Level::FK, bound)?,
                perm_on_k2: linperm::is_permutation(&ctx, coeffs, Level::FK2, bound)?,
                norm_condition,
                fer: norm_condition.then(|| linperm::check_fer(&ctx, coeffs)).transpose()?,
            };
            emit(&output)?;
            Ok(EXIT_OK)
        }
        Cmd::Veronese {
            params,
            max_space,
            seed,
        } => {
            let ctx = FieldCtx::make_tower(params.p, params.h, params.n)?;
            let census = if params.n == 1 {
                let alpha = params.alpha.map_or_else(|| cap::pick_alpha(&ctx), Elem);
                Some(veronese::chordal_census(&ctx, alpha)?)
            } else {
                None
            };
            let partition = veronese::verify_w_partition(&ctx, max_space, 1000, seed)?;
            let ok = partition.ok;
            emit(&VeroneseOutput { census, partition })?;
            Ok(if ok { EXIT_OK } else { harness::EXIT_INCOMPLETE })
        }
        Cmd::Suite {
            include,
            seed,
            max_space,
            out,
        } => {
            let include = include
                .iter()
                .map(|s| parse_instance(s))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = SuiteConfig {
                include,
                seed,
                max_space,
            };
            let report = suite::run_suite(&cfg)?;
            suite::write_outputs(&out, &report)?;
            print!("{}", suite::table(&report));
            Ok(if report.passed { EXIT_OK } else { 1 })
        }
    }
}

fn parse_instance(s: &str) -> Result<(u32, u32), Error> {
    let bad = || Error::Format(format!("expected `q,n`, got `{s}`"));
    let (q, n) = s.split_once(',').ok_or_else(bad)?;
    let q: u32 = q.trim().parse().map_err(|_| bad())?;
    let n: u32 = n.trim().parse().map_err(|_| bad())?;
    prime_power(q)?;
    Ok((q, n))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
