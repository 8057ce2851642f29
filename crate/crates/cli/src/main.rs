use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcong_cli::cases::ClassicalCase;
use qcong_cli::config::digest_of;
use qcong_cli::{
    bench, effective_parallelism, exit_code_for, sweep, write_report, Case, CliError, Entry, Format, ReportSet,
    RunConfig,
};
use qcong_core::congruence::{CaseSpec, CheckKind};
use qcong_core::padic::ClassicalKind;
use qcong_core::qseries::Reading;

#[derive(Parser)]
#[command(name = "qcong", version, about = "Certify q-supercongruences and their classical limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// json, csv or text
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Zero timings and pin the timestamp.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single q-side case.
    Verify {
        #[arg(long)]
        check: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Root index for param-roots-*.
        #[arg(long)]
        j: Option<u64>,
        /// Exponent of a = q^t for param-sampled-*.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<i64>,
        /// Constant a = c for param-generic-*.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<i64>,
        /// consistent or printed (param-roots-j only).
        #[arg(long, default_value = "consistent", value_parser = parse_reading)]
        reading: Reading,
        #[command(flatten)]
        out: Output,
    },
    /// Run every case of a TOML configuration.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_format)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        parallelism: Option<usize>,
        #[arg(long)]
        deterministic: bool,
    },
    /// Run a single classical (q = 1) case.
    Classical {
        #[arg(long)]
        check: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Modulus exponent; defaults to the proven one.
        #[arg(long)]
        exp: Option<u64>,
        /// Degree cap of the Dwork check.
        #[arg(long, default_value_t = 50)]
        k: u64,
        #[command(flatten)]
        out: Output,
    },
    /// List the supported checks.
    List,
    /// Time the polynomial kernels.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "64,256,1024,2048")]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_reading(s: &str) -> Result<Reading, String> {
    match s {
        "consistent" => Ok(Reading::Consistent),
        "printed" => Ok(Reading::Printed),
        _ => Err(format!("unknown reading `{s}` (expected consistent or printed)")),
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid value for {flag}: {msg}"))
}

#[allow(clippy::too_many_arguments)]
fn verify_spec(
    check: &str,
    n: u64,
    r: u64,
    d: u64,
    j: Option<u64>,
    t: Option<i64>,
    c: Option<i64>,
    reading: Reading,
) -> Result<CaseSpec, CliError> {
    let kind: CheckKind = check.parse().map_err(|e| usage("--check", e))?;
    let lemma = matches!(kind, CheckKind::Lemma22 | CheckKind::Lemma31);
    if n % 2 == 0 || (!lemma && n < 3) {
        return Err(usage("--n", format!("{n} must be odd{}", if lemma { "" } else { " and at least 3" })));
    }
    if r == 0 {
        return Err(usage("--r", "must be at least 1"));
    }
    if d != 1 && d != 2 {
        return Err(usage("--d", format!("{d} must be 1 or 2")));
    }
    let mut spec = CaseSpec::new(kind, n, r, d).with_reading(reading);
    match kind {
        CheckKind::ParamRootsC | CheckKind::ParamRootsJ => {
            spec = spec.with_j(j.ok_or_else(|| usage("--j", format!("required for {kind}")))?);
        }
        CheckKind::ParamSampledC | CheckKind::ParamSampledJ => {
            spec = spec.with_t(t.ok_or_else(|| usage("--t", format!("required for {kind}")))?);
        }
        CheckKind::ParamGenericC | CheckKind::ParamGenericJ => {
            spec = spec.with_c(c.ok_or_else(|| usage("--c", format!("required for {kind}")))?);
        }
        _ => {}
    }
    spec.validate().map_err(|e| {
        let flag = match kind {
            CheckKind::ParamRootsC | CheckKind::ParamRootsJ => "--j",
            CheckKind::ParamSampledC | CheckKind::ParamSampledJ => "--t",
            CheckKind::ParamGenericC | CheckKind::ParamGenericJ => "--c",
            _ => "--check",
        };
        usage(flag, e)
    })?;
    Ok(spec)
}

fn classical_case(check: &str, p: u64, r: u64, exp: Option<u64>, k: u64) -> Result<ClassicalCase, CliError> {
    let kind: ClassicalKind = check.parse().map_err(|e| usage("--check", e))?;
    if p == 2 || !qcong_core::padic::is_prime(p) {
        return Err(usage("--p", format!("{p} must be an odd prime")));
    }
    if kind.needs_p_above_three() && p <= 3 {
        return Err(usage("--p", format!("{p} must exceed 3 for {kind}")));
    }
    if r == 0 {
        return Err(usage("--r", "must be at least 1"));
    }
    let exponent = match kind {
        ClassicalKind::C2 | ClassicalKind::J2 => exp.unwrap_or(4),
        ClassicalKind::C3 | ClassicalKind::J3 | ClassicalKind::Cc | ClassicalKind::Jj => exp.unwrap_or(3 * r),
        ClassicalKind::M2 => 3,
        ClassicalKind::Dwork => r,
        ClassicalKind::Lucas => 4,
    };
    if exponent == 0 {
        return Err(usage("--exp", "must be positive"));
    }
    Ok(ClassicalCase {
        kind,
        p,
        r,
        exponent,
        k_cap: k,
    })
}

fn single(entry: Entry, description: String, out: &Output) -> Result<i32, CliError> {
    let set = ReportSet::new(vec![entry], digest_of(&description), out.deterministic);
    write_report(&set, out.format, out.output.as_deref())?;
    Ok(exit_code_for(&set))
}

fn list() -> String {
    let mut s = String::from("q-side checks:\n");
    for k in CheckKind::ALL {
        s.push_str(&format!("  {:<16} {}\n", k.name(), k.description()));
    }
    s.push_str("classical checks:\n");
    for k in ClassicalKind::ALL {
        s.push_str(&format!("  {:<16} {}\n", k.name(), k.description()));
    }
    s
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify {
            check,
            n,
            r,
            d,
            j,
            t,
            c,
            reading,
            out,
        } => {
            let spec = verify_spec(&check, n, r, d, j, t, c, reading)?;
            let case = Case::Q(spec);
            single(case.run(), format!("verify {}", case.label()), &out)
        }
        Command::Classical { check, p, r, exp, k, out } => {
            let case = Case::Classical(classical_case(&check, p, r, exp, k)?);
            single(case.run(), format!("classical {}", case.label()), &out)
        }
        Command::Sweep {
            config,
            format,
            output,
            parallelism,
            deterministic,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Usage(format!("--config {}: {e}", config.display())))?;
            let mut cfg = RunConfig::from_toml(&text)?;
            if let Some(f) = format {
                cfg.format = f;
            }
            if let Some(o) = output {
                cfg.output = Some(o);
            }
            if let Some(p) = parallelism {
                if p == 0 {
                    return Err(usage("--parallelism", "must be positive"));
                }
                cfg.parallelism = p;
            }
            cfg.deterministic |= deterministic;
            let workers = effective_parallelism(cfg.parallelism)?;
            let set = sweep(&cfg, workers)?;
            write_report(&set, cfg.format, cfg.output.as_deref())?;
            Ok(exit_code_for(&set))
        }
        Command::List => {
            print!("{}", list());
            Ok(0)
        }
        Command::Bench { degrees, reps } => {
            print!("{}", bench::table(&bench::run(&degrees, reps)));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { qcong_cli::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qcong: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
