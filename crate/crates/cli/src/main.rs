//! `qident`: evaluate q-series objects and run verification sweeps.
//!
//! Exit status: 0 on success, 1 when any verified instance fails, 2 on usage
//! or parameter errors.

mod sweep;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qident::bosonic::{bose, BosKind};
use qident::characters::chi;
use qident::fermionic::{fermi, Variant};
use qident::nmsystem::{build_params, enumerate, Mode, ModelParams};
use qident::qgauss::{qbinom, qbinom_modified, qtrinom};
use qident::Exponent;

use sweep::{ConfigFile, Format, PRange, Suite, SweepConfig};

#[derive(Parser)]
#[command(name = "qident", version, about = "Exact q-series polynomial identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one object and print it as JSON.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Run verification suites over a parameter sweep.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum EvalCmd {
    /// q-trinomial T_n(L, A).
    Trinom {
        #[arg(long = "L", allow_hyphen_values = true)]
        l: i64,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
    },
    /// q-binomial [n+m; n], or its modified extension with --modified.
    Binom {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        modified: bool,
    },
    /// Fermionic polynomial F^{p,i}_{a,b}(L).
    Fermi {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        modified: bool,
    },
    /// Bosonic polynomial B, Btilde or Bprime.
    Bose {
        #[arg(long, value_enum, default_value_t = KindArg::B)]
        kind: KindArg,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long, default_value_t = 1)]
        s: i64,
        #[arg(long = "L", allow_hyphen_values = true)]
        l: i64,
    },
    /// Virasoro character chi^{p,p+1}_{r,s} to q^cutoff.
    Chi {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long, default_value_t = SweepConfig::DEFAULT_CUTOFF)]
        cutoff: i64,
    },
    /// All (n, m) solutions for the given parameters.
    Nm {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        modified: bool,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    p: i64,
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    #[arg(long, default_value_t = 0)]
    i: i64,
    #[arg(long = "L")]
    l: i64,
}

impl ModelArgs {
    fn params(&self) -> qident::Result<ModelParams> {
        ModelParams::new(self.p, self.a, self.b, self.i, self.l)
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum KindArg {
    B,
    Btilde,
    Bprime,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Range of p, e.g. 4..6.
    #[arg(long)]
    p: Option<PRange>,
    #[arg(long)]
    l_max: Option<i64>,
    /// Series cutoff (integer power of q) for character suites.
    #[arg(long)]
    cutoff: Option<i64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl VerifyArgs {
    fn resolve(self) -> anyhow::Result<SweepConfig> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let cfg = SweepConfig {
            suite: self.suite.or(file.suite).unwrap_or(Suite::All),
            p: self.p.or(file.p).unwrap_or(SweepConfig::DEFAULT_P),
            l_max: self.l_max.or(file.l_max).unwrap_or(SweepConfig::DEFAULT_L_MAX),
            cutoff: self.cutoff.or(file.cutoff).unwrap_or(SweepConfig::DEFAULT_CUTOFF),
            format: self.format.or(file.format).unwrap_or_default(),
            jobs: self.jobs.or(file.jobs),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn eval(cmd: EvalCmd) -> anyhow::Result<serde_json::Value> {
    Ok(match cmd {
        EvalCmd::Trinom { l, a, n } => {
            json!({ "object": "trinom", "L": l, "A": a, "n": n, "value": qtrinom(l, a, n) })
        }
        EvalCmd::Binom { n, m, modified } => {
            let value = if modified { qbinom_modified(n, m) } else { qbinom(n, m) };
            json!({ "object": "binom", "n": n, "m": m, "modified": modified, "value": value })
        }
        EvalCmd::Fermi { model, modified } => {
            let variant = if modified { Variant::Modified } else { Variant::Standard };
            serde_json::to_value(fermi(model.params()?, variant))?
        }
        EvalCmd::Bose { kind, p, a, b, s, l } => {
            let kind = match kind {
                KindArg::B => BosKind::B,
                KindArg::Btilde => BosKind::Btilde,
                KindArg::Bprime => BosKind::Bprime,
            };
            serde_json::to_value(bose(kind, p, a, b, s, l)?)?
        }
        EvalCmd::Chi { p, r, s, cutoff } => serde_json::to_value(chi(p, r, s, Exponent::from_int(cutoff))?)?,
        EvalCmd::Nm { model, modified } => {
            let setup = build_params(model.p, model.a, model.b, model.i, model.l)?;
            let mode = if modified { Mode::Modified } else { Mode::Standard };
            json!({ "params": setup.params, "solutions": enumerate(&setup, mode) })
        }
    })
}

/// Returns whether every instance passed.
fn verify(cfg: &SweepConfig, out: &mut impl Write) -> anyhow::Result<bool> {
    let mut ok = true;
    for suite in cfg.suite.expand() {
        let report = sweep::run_suite(suite, cfg)?;
        ok &= report.all_passed();
        match cfg.format {
            Format::Text => write!(out, "{report}")?,
            Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
        }
        out.flush()?;
    }
    Ok(ok)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Eval(cmd) => {
            writeln!(out, "{}", serde_json::to_string(&eval(cmd)?)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let cfg = args.resolve()?;
            if let Some(jobs) = cfg.jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build_global()
                    .context("configuring worker pool")?;
            }
            let ok = verify(&cfg, &mut out)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
