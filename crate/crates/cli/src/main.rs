//! `pony`: solve, simulate and benchmark message relays from the shell.
//!
//! Every command prints one JSON document on stdout. Exit codes: 0 success,
//! 1 usage error, 2 invalid or unreadable input, 3 ratio bound violated.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use pony_core::harness::{ratio_bound, sweep, OFFLINE_EPS};
use pony_core::io::{parse, to_rounded_json};
use pony_core::oracle::{brute_broadcast, brute_hb, brute_pony};
use pony_core::trace::trace_csv;
use pony_core::{
    gen_bc_adversary, gen_hb_adversary, gen_random, lb_family_sweep, simulate, solve,
    ValidatedInstance, Variant,
};

#[derive(Parser)]
#[command(name = "pony", version, about = "Message relay by mobile robots on a segment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Offline optimum of an instance.
    Solve {
        /// Instance file; stdin when omitted or `-`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Additive accuracy of the broadcast scheme.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Run the online protocol.
    Simulate {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write a per-event CSV trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Online time over offline optimum for one instance.
    Ratio {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Competitive ratios over seeded random instances.
    Sweep {
        #[arg(long)]
        variant: Variant,
        /// Largest instance size; trial `i` has `1 + i % n` robots.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        speed_lo: f64,
        #[arg(long, default_value_t = 2.0)]
        speed_hi: f64,
        /// Include every per-instance row, not just the summary.
        #[arg(long)]
        rows: bool,
    },
    /// Broadcast lower-bound family over `y` in [0, 1/2].
    LbFamily {
        #[arg(long, default_value_t = 51)]
        samples: usize,
    },
    /// Print an instance.
    #[command(subcommand)]
    Gen(Gen),
    /// Brute-force optimum of a small instance.
    Oracle {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Handover grid intervals (broadcast only).
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Two-robot half-broadcast instance with online/offline ratio 3/2.
    AdversaryHb,
    /// Two-robot broadcast lower-bound instance.
    AdversaryBc {
        #[arg(long, default_value_t = 0.0)]
        y: f64,
    },
    /// Uniform random instance.
    Random {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        speed_lo: f64,
        #[arg(long, default_value_t = 2.0)]
        speed_hi: f64,
    },
}

/// A finished command: JSON for stdout and the exit status.
struct Output {
    json: String,
    code: u8,
}

impl Output {
    fn ok(json: String) -> Self {
        Self { json, code: 0 }
    }
}

fn read_instance(input: Option<&Path>) -> Result<ValidatedInstance> {
    let bytes = match input {
        None => read_stdin()?,
        Some(p) if p.as_os_str() == "-" => read_stdin()?,
        Some(p) => fs::read(p).with_context(|| format!("cannot read {}", p.display()))?,
    };
    Ok(parse(&bytes)?)
}

fn read_stdin() -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    io::stdin().read_to_end(&mut buf).context("cannot read stdin")?;
    Ok(buf)
}

fn run(cmd: Command) -> Result<Output> {
    Ok(match cmd {
        Command::Solve { input, eps } => {
            let inst = read_instance(input.as_deref())?;
            Output::ok(to_rounded_json(&solve(&inst, eps)?))
        }
        Command::Simulate { input, trace } => {
            let inst = read_instance(input.as_deref())?;
            let res = simulate(&inst)?;
            if let Some(path) = trace {
                fs::write(&path, trace_csv(&res))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Output::ok(to_rounded_json(&res))
        }
        Command::Ratio { input } => {
            let inst = read_instance(input.as_deref())?;
            let online = simulate(&inst)?.objective;
            let offline = solve(&inst, OFFLINE_EPS)?.objective;
            let (bound, _) = ratio_bound(inst.variant);
            Output::ok(to_rounded_json(&json!({
                "variant": inst.variant,
                "online": online,
                "offline": offline,
                "ratio": online / offline,
                "bound": bound,
            })))
        }
        Command::Sweep { variant, n, trials, seed, speed_lo, speed_hi, rows } => {
            let mut report = sweep(variant, n, trials, seed, (speed_lo, speed_hi))?;
            let code = if report.violations.is_empty() { 0 } else { 3 };
            if !rows {
                // keep the offending rows, drop the rest
                let bad = &report.violations;
                report.rows.retain(|r| bad.binary_search(&r.index).is_ok());
            }
            Output { json: to_rounded_json(&report), code }
        }
        Command::LbFamily { samples } => {
            let rows = lb_family_sweep(samples)?;
            let min = rows.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio)).expect("samples >= 2");
            Output::ok(to_rounded_json(&json!({
                "samples": samples,
                "min_ratio": min.ratio,
                "min_y": min.y,
                "rows": rows,
            })))
        }
        Command::Gen(gen) => {
            let inst = match gen {
                Gen::AdversaryHb => gen_hb_adversary(),
                Gen::AdversaryBc { y } => gen_bc_adversary(y)?,
                Gen::Random { variant, n, seed, speed_lo, speed_hi } => {
                    gen_random(variant, n, seed, (speed_lo, speed_hi))?
                }
            };
            // exact digits, so the instance survives a round trip
            Output::ok(serde_json::to_string_pretty(&*inst)?)
        }
        Command::Oracle { input, grid } => {
            let inst = read_instance(input.as_deref())?;
            let out = match inst.variant {
                Variant::PonyExpress => json!({ "variant": inst.variant, "value": brute_pony(&inst)? }),
                Variant::HalfBroadcast => json!({ "variant": inst.variant, "value": brute_hb(&inst)? }),
                Variant::Broadcast => {
                    let b = brute_broadcast(&inst, grid)?;
                    json!({ "variant": inst.variant, "value": b.value, "grid_step": b.grid_step })
                }
            };
            Output::ok(to_rounded_json(&out))
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.json);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
